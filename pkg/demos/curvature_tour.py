"""Flat AH curvature of catalog algebras, then the left-invariant S^3 family and the sl(2) nilpotent case."""
from fractions import Fraction

from ahlab import codazzi as cz
from ahlab import curvature as cv
from ahlab import lie as lz
from ahlab.scalar import sqrt_rational
from ahlab.symtensor import norm2


def flat():
    print("flat background, nabla = D - L/2:")
    for name, A in [("poly2", cz.from_cubic(cz.poly2())), ("poly3", cz.from_cubic(cz.poly3())),
                    ("nahm so3", cz.nahm(lz.builtin("so3"))), ("n3alg", cz.from_cubic(cz.n3alg(1))),
                    ("cartan m=1", cz.from_cubic(cz.cartan_polynomial(1)))]:
        s = cv.FlatAHStructure.from_algebra(A)
        rep = cv.curvature_flat(s)
        print("  %-11s R=%-6s |L|^2=%-5s einstein=%-6s A4 %s" % (
            name, rep.scalar, norm2(s.L, s.h), rep.einstein(), "!= 0" if rep.A4 else "= 0"))
    lhs, rhs = cz.probe(cz.from_cubic(cz.poly3()), *[[1 if j == i else 0 for j in range(4)] for i in range(4)])
    print("  poly3 associativity probe: %s vs %s" % (lhs, rhs))


def s3():
    print("\nS^3 with nabla = ad/2 + t X_(i Y_j Z_k):")
    for t in (0, 1, sqrt_rational(Fraction(9, 2)), 3):
        s = lz.s3_family(t)
        rep, checks = s.verify()
        print("  t=%-12s R=%-7s |E|^2=%-4s frame checks %s" % (t, rep.scalar, norm2(rep.E4, s.h),
                                                              "ok" if all(checks.values()) else checks))
    lie = lz.builtin("sl2r")
    e, f, hh = lz.sl2_standard_triple(lie)
    s = lz.nilpotent_structure(lie, e, f, hh)
    rep = s.report()
    print("  sl2 nilpotent: E(h,f,f,f) = %s, B(e,f) = %s, 4 Ric = h: %s"
          % (lz.contract4(rep.E4, hh, f, f, f), lz.killing(lie, e, f), rep.ric * 4 == s.h.lower_t))


if __name__ == "__main__":
    flat()
    s3()
