"""Einstein constants of the catalog cubics, the Q_n chain, and where the Hessian determinant pencil lands."""
from ahlab import codazzi as cz
from ahlab.symtensor import Metric


def main():
    print("kappa with Delta P = 0 and |Hess P|^2 = kappa E:")
    for name, P in [("poly2", cz.poly2()), ("poly3", cz.poly3()), ("nahm so3", cz.nahm_poly_so3()),
                    ("cartan m=1", cz.cartan_polynomial(1)), ("cartan m=2", cz.cartan_polynomial(2)),
                    ("pfaffian so6", cz.pfaffian_poly()), ("prehomog", cz.prehomog_poly())]:
        print("  %-14s n=%-2d kappa=%s" % (name, P.n, cz.check_einstein_polynomials(P)))
    P = cz.prehomog_poly()
    I6 = Metric.identity(6)
    print("  prehomog alone: |Hess P|^2 / E = %s, Delta P = %s"
          % (cz.proportionality(cz.hess_norm2(P, I6), I6.quadratic()), P.laplacian()))

    print("\nQ_n built by repeated extension:")
    for n, A in sorted(cz.q_chain_algebras(8).items()):
        print("  Q%d kappa=%-3s special=%s conf-assoc=%s" % (n, cz.is_einstein(A), cz.is_special(A),
                                                         cz.is_conformally_associative(A)))

    print("\nsyzygetic pencil, H = det Hess:")
    for a, b in ((1, 0), (0, 1), (1, 2), (2, -1)):
        H = cz.hessian_det_check(cz.syzygetic(a, b))["H"]
        for c in (-6 * a * b * b, -a * b * b):
            if H == cz.syzygetic(c, a ** 3 + 2 * b ** 3):
                print("  H(P_{%d,%d}) = P_{%d,%d}" % (a, b, c, a ** 3 + 2 * b ** 3))
                break


if __name__ == "__main__":
    main()
