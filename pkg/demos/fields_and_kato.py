"""Float-mode pieces: the orthant example from finite-difference jets and Kato spot checks on kernel fields."""
import random

from ahlab import curvature as cv
from ahlab import fields as fl
from ahlab.symtensor import Metric


def main():
    for n in (3, 4):
        out = cv.curvature_from_jet(cv.orthant_jet(n))
        print("orthant n=%d: |L|^2 = %.8f (4n(n-1) = %d), R = %.8f (n(1-n) = %d)"
              % (n, out["L_norm2"], 4 * n * (n - 1), out["scalar"], n * (1 - n)))
    rng = random.Random(0)
    h = Metric.identity(3)
    for cls in fl.KATO_CLASSES:
        basis = fl.kernel_fields(3, 2, h, cls, 2)
        w = basis[0]
        for b in basis[1:]:
            w = w + b * rng.randint(-3, 3)
        pts = [[rng.uniform(-2, 2) for _ in range(3)] for _ in range(20)]
        res = fl.kato_spot_check(fl.PolyTensorField(w.comps, h, True), pts, cls)
        print("%-9s dim=%-3d c=%.4f worst slack %.3e" % (cls, len(basis), res["constant"],
                                                       min(r["slack"] for r in res["rows"])))


if __name__ == "__main__":
    main()
