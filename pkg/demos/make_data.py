"""Regenerate the JSON inputs in demos/data from the library's built-in objects."""
import json
from pathlib import Path

from ahlab import codazzi as cz
from ahlab import lie as lz

OUT = Path(__file__).resolve().parent / "data"


def poly_json(name, P, kappa=None):
    d = {"name": name, "n": P.n,
         "monos": [{"exp": list(e), "val": str(c)} for e, c in sorted(P.t.items())]}
    if kappa is not None:
        d["expect_kappa"] = kappa
    return d


def algebra_json(name, A):
    return {"name": name, "n": A.n,
            "metric": [[str(x) for x in row] for row in A.h.g],
            "mu": [{"idx": list(I), "val": str(v)} for I, v in sorted(A.mu.c.items())]}


def lie_json(lie):
    return {"name": lie.name, "n": lie.n,
            "c": [{"i": i, "j": j, "k": k, "val": str(v)} for (i, j, k), v in sorted(lie.c.items()) if i < j]}


def write(fname, d):
    (OUT / fname).write_text(json.dumps(d, indent=1) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    write("poly2.json", poly_json("poly2", cz.poly2(), 54))
    write("poly3.json", poly_json("poly3", cz.poly3(), 4))
    write("prehomog.json", poly_json("prehomog", cz.prehomog_poly(), 3))
    write("poly3_algebra.json", algebra_json("poly3", cz.from_cubic(cz.poly3())))
    write("n3alg_algebra.json", algebra_json("n3alg", cz.from_cubic(cz.n3alg(1))))
    write("nahm_so3_algebra.json", algebra_json("nahm-so3", cz.nahm(lz.builtin("so3"))))
    write("so3_lie.json", lie_json(lz.builtin("so3")))
    write("sl2_triple.json", {"e": [[0, 1], [0, 0]], "f": [[0, 0], [1, 0]], "h": [[1, 0], [0, -1]]})
    write("orthant_jet.json", {"example": "orthant", "n": 3, "x": [1, 1, 1], "step": 1e-4})


if __name__ == "__main__":
    main()
