from fractions import Fraction
import random

import numpy as np
import pytest
import sympy

from ahlab.scalar import Scalar, ZERO, ONE, sqrt_rational
from ahlab.poly import Polynomial
from ahlab.symtensor import Metric
from ahlab import codazzi as cz
from ahlab import lie as lz
from conftest import to_sympy

s3 = sqrt_rational(3)


def u(n, i):
    return cz.unit(n, i)


def sympy_kappa(P):
    """Independent: Laplacian and |Hess P|^2 / E via sympy (Euclidean)."""
    xs = sympy.symbols("x1:%d" % (P.n + 1))
    e = to_sympy(P, xs)
    if sympy.expand(sum(sympy.diff(e, x, 2) for x in xs)) != 0:
        return None
    H = sympy.hessian(e, xs)
    num = sympy.expand(sum(H[i, j] ** 2 for i in range(P.n) for j in range(P.n)))
    q = sympy.cancel(num / sum(x ** 2 for x in xs))
    return q if q.is_number else None


# ---------------------------------------------------------------- kappa values [PAPER]

@pytest.mark.parametrize("name,P,kappa", [
    ("poly2", cz.poly2(), 54),
    ("poly3", cz.poly3(), 4),
    ("nahm-so3", cz.nahm_poly_so3(), 1),
    ("2dhar r=1", cz.poly_2dhar(1), 72),
    ("2dhar r=2", cz.poly_2dhar(2), 288),
    ("poly1", cz.poly1(1, 1), 10),
    ("n3alg c=1", cz.n3alg(1), 2),
])
def test_kappa_exact_and_sympy(name, P, kappa):
    assert cz.check_einstein_polynomials(P) == kappa
    assert sympy_kappa(P) == kappa
    assert cz.is_einstein(cz.from_cubic(P)) == kappa


def test_kappa_poly1_family():
    # lambda x1x2x3 + mu x2(x1^2 - x3^2): |Hess|^2 = (2 lambda^2 + 8 mu^2) E
    for lam, mu in ((1, 1), (2, 3), (0, 1), (Fraction(1, 2), 0)):
        assert cz.check_einstein_polynomials(cz.poly1(lam, mu)) == 2 * Fraction(lam) ** 2 + 8 * Fraction(mu) ** 2


def test_cartan_kappa_m1_m2():
    for m, kappa in ((1, 126), (2, 180)):
        P = cz.cartan_polynomial(m)
        assert cz.check_einstein_polynomials(P) == kappa
        assert cz.cartan_iso_check(P)
    assert sympy_kappa(cz.cartan_polynomial(1)) == 126


def test_prehomog_is_not_harmonic():
    """The displayed cubic has |Hess P|^2 = 3E yet Delta P != 0, so it is not a solution."""
    P = cz.prehomog_poly()
    h = Metric.identity(6)
    assert cz.proportionality(cz.hess_norm2(P, h), h.quadratic()) == 3
    x = Polynomial.variables(6)
    # coordinates x11, x12, x13, x22, x23, x33
    assert P.laplacian() == -(x[0] + x[3] + x[5])
    assert cz.check_einstein_polynomials(P) is None
    assert sympy_kappa(P) is None


def test_pfaffian_scaling():
    # Pfaff is cubic in the entries so kappa scales by s^6 [DERIVED]
    assert cz.check_einstein_polynomials(cz.pfaffian_poly(6, 1)) == 6
    assert cz.check_einstein_polynomials(cz.pfaffian_poly(6, 2)) == 6 * 64
    assert sympy_kappa(cz.pfaffian_poly(6, 1)) == 6


def test_qchain():
    Q = cz.q_chain(6)
    A = cz.q_chain_algebras(6)
    for n in range(2, 7):
        assert cz.check_einstein_polynomials(Q[n]) == n * (n - 1)
        assert A[n].to_cubic() == Q[n]
        assert cz.is_special(A[n])
    assert Q[3] == cz.poly2() * Fraction(1, 3)


# ---------------------------------------------------------------- products, trace form, associators

def test_poly3_table_matches_paper():
    A = cz.from_cubic(cz.poly3())
    e = [u(4, i) for i in range(4)]
    neg = lambda v: [-x for x in v]
    table = {(0, 0): e[2], (0, 1): neg(e[3]), (0, 2): e[0], (0, 3): neg(e[1]), (1, 1): neg(e[2]),
             (1, 2): neg(e[1]), (1, 3): neg(e[0]), (2, 2): neg(e[2]), (2, 3): e[3], (3, 3): e[2]}
    for (i, j), v in table.items():
        assert A.mul(e[i], e[j]) == v
        assert A.mul(e[j], e[i]) == v
    assert cz.from_table(4, A.product_table()).to_cubic() == cz.poly3()


def test_n3alg_table():
    for c in (1, 2, Fraction(1, 3)):
        A = cz.from_cubic(cz.n3alg(c))
        e = [u(3, i) for i in range(3)]
        assert A.mul(e[0], e[1]) == [x * c for x in e[2]]
        assert A.mul(e[1], e[2]) == [x * c for x in e[0]]
        assert A.mul(e[2], e[0]) == [x * c for x in e[1]]
        assert A.mul(e[0], e[0]) == [ZERO] * 3


def test_cartan_products_match_paper():
    C = cz.from_cubic(cz.cartan_polynomial(1))
    e = [u(5, i) for i in range(5)]
    ex, ey = e[4], e[3]
    add = lambda a, b: [x + y for x, y in zip(a, b)]
    sc = lambda c, v: [x * c for x in v]
    assert C.mul(e[0], e[0]) == add(sc(3, ex), sc(s3 * 3, ey))
    assert C.mul(e[0], e[1]) == sc(s3 * 3, e[2])
    assert C.mul(e[1], e[2]) == sc(s3 * 3, e[0])
    assert C.mul(e[2], e[2]) == sc(-6, ex)
    assert cz.associator(C, e[0], e[1], e[2]) == add(sc(s3 * -27, ex), sc(-27, ey))


def _np_mu(A):
    n = A.n
    M = np.zeros((n, n, n))
    for (i, j, k), v in A.mixed.items():
        M[i, j, k] = float(v)
    return M


@pytest.mark.parametrize("P", [cz.poly3(), cz.poly2(), cz.n3alg(1), cz.cartan_polynomial(1)])
def test_trace_form_and_associator_vs_numpy(P):
    A = cz.from_cubic(P)
    M = _np_mu(A)
    tau = np.einsum("ipq,jqp->ij", M, M)
    T = cz.trace_form(A)
    assert np.allclose(tau, np.array(T.to_tensor().to_numpy(), float))
    rng = random.Random(4)
    for _ in range(5):
        x, y, z = ([Scalar(rng.randint(-2, 2)) for _ in range(A.n)] for _ in range(3))
        X, Y, Z = (np.array([float(t) for t in v]) for v in (x, y, z))
        mul = lambda a, b: np.einsum("i,j,ijk->k", a, b, M)
        want = mul(mul(X, Y), Z) - mul(X, mul(Y, Z))
        assert np.allclose([float(t) for t in cz.associator(A, x, y, z)], want)
        assert cz.associator(A, x, y, z) == cz.associator_from_tensor(A, x, y, z)


def test_probes_match_paper():
    A = cz.from_cubic(cz.poly3())
    assert cz.probe(A, u(4, 0), u(4, 1), u(4, 2), u(4, 3)) == (Scalar(-2), ZERO)
    assert not cz.is_conformally_associative(A)
    N = cz.nahm(lz.builtin("so3"))
    assert cz.probe(N, u(9, 0), u(9, 1), u(9, 3), u(9, 4)) == (Scalar(Fraction(1, 4)), ZERO)
    # 2 e2 o e4 = -e9 = -2 e1 o e5
    assert [x * 2 for x in N.mul(u(9, 1), u(9, 3))] == [-x for x in u(9, 8)]
    assert [x * -2 for x in N.mul(u(9, 0), u(9, 4))] == [-x for x in u(9, 8)]


def test_conformal_associativity_in_dim3():
    rng = random.Random(8)
    for P in (cz.poly2(), cz.n3alg(1), cz.poly1(1, 1), cz.poly1(2, -1)):
        A = cz.from_cubic(P)
        assert cz.is_conformally_associative(A)
        # probe agrees with the tensor criterion on random vectors
        for _ in range(3):
            vs = [[Scalar(rng.randint(-2, 2)) for _ in range(3)] for _ in range(4)]
            lhs, rhs = cz.probe(A, *vs)
            assert lhs == rhs


def test_special_and_einstein_flags():
    A = cz.from_cubic(cz.poly3())
    assert cz.is_special(A) and cz.is_einstein(A) == 4
    x1, x2 = Polynomial.variables(2)
    B = cz.from_cubic(x1 ** 3)
    assert not cz.is_special(B)
    assert cz.is_einstein(B) is None


def test_associative_diagonal():
    A = cz.from_table(3, {(0, 0): [1, 0, 0], (1, 1): [0, 2, 0], (2, 2): [0, 0, 3]})
    assert cz.is_associative(A) and not cz.is_special(A)


# ---------------------------------------------------------------- unitalization and extension

def test_unitalization_n3alg():
    A = cz.from_cubic(cz.n3alg(1))
    U = cz.unitalize(A)
    assert cz.is_einstein(U) == 4 and cz.is_associative(U) and not cz.is_special(U)
    # unit element
    one = u(4, 3)
    for i in range(4):
        assert U.mul(one, u(4, i)) == u(4, i)
    y = Polynomial.variables(4)
    half = Fraction(1, 2)
    im = [(y[0] - y[1] - y[2] + y[3]) * half, (-y[0] + y[1] - y[2] + y[3]) * half,
          (-y[0] - y[1] + y[2] + y[3]) * half, (y[0] + y[1] + y[2] + y[3]) * half]
    assert U.to_cubic().subs_linear(im) == (y[0] ** 3 + y[1] ** 3 + y[2] ** 3 + y[3] ** 3) * Fraction(1, 3)


def test_unitalization_poly3_not_associative():
    A = cz.normalize_to_n_minus_1(cz.from_cubic(cz.poly3()))
    assert cz.is_einstein(A) == 3
    U = cz.unitalize(A)
    assert cz.is_einstein(U) == 5 and not cz.is_associative(U)


def test_extend_preserves_special():
    A = cz.from_cubic(cz.poly2())
    A = A.scaled_metric(9)       # kappa scales by 1/t: 54 -> 6 = n(n-1)
    assert cz.is_einstein(A) == 6
    B = cz.extend(A, 6, 12)
    assert cz.is_special(B) and cz.is_einstein(B) == 12


def test_extend_keeps_conformal_associativity_status():
    # kappa_n = n(n-1) -> n(n+1): A_n conformally associative iff A_{n+1} is
    A = cz.from_cubic(cz.poly3()).scaled_metric(Fraction(1, 3))
    assert cz.is_einstein(A) == 12 and not cz.is_conformally_associative(A)
    B = cz.extend(A, 12, 20)
    assert cz.is_special(B) and cz.is_einstein(B) == 20
    assert not cz.is_conformally_associative(B)
    Q = cz.q_chain_algebras(4)
    assert cz.is_conformally_associative(Q[3]) and cz.is_conformally_associative(Q[4])


def test_errors():
    with pytest.raises(ValueError):
        cz.check_einstein_polynomials(Polynomial.variables(2)[0])
    with pytest.raises(ValueError):
        cz.probe(cz.from_cubic(Polynomial.variables(1)[0] ** 3), [1], [1], [1], [1])
    with pytest.raises(ValueError):
        cz.cartan_polynomial(3)


# ---------------------------------------------------------------- Hessian determinants

def test_syzygetic_identity_symbolic():
    """Sympy with symbolic a, b: H(P_{a,b}) = P_{-6ab^2, a^3+2b^3}."""
    a, b = sympy.symbols("a b")
    x = sympy.symbols("x1:4")
    P = a / 6 * (x[0] ** 3 + x[1] ** 3 + x[2] ** 3) + b * x[0] * x[1] * x[2]
    H = sympy.expand(sympy.hessian(P, x).det())
    Q = P.subs({a: -6 * a * b ** 2, b: a ** 3 + 2 * b ** 3}, simultaneous=True)
    assert sympy.expand(H - Q) == 0
    for A, B in ((1, 0), (0, 1), (1, 2), (3, -1)):
        got = cz.hessian_det_check(cz.syzygetic(A, B))["H"]
        assert got == cz.syzygetic(-6 * A * B * B, A ** 3 + 2 * B ** 3)


def test_syzygetic_literal_form():
    """The form P_{-ab^2, a^3+2b^3} holds only when ab^2 = 0."""
    for A, B in ((1, 0), (0, 1)):
        assert cz.hessian_det_check(cz.syzygetic(A, B))["H"] == cz.syzygetic(-A * B * B, A ** 3 + 2 * B ** 3)
    H = cz.hessian_det_check(cz.syzygetic(1, 2))["H"]
    assert H != cz.syzygetic(-4, 17)
    x1, x2, x3 = Polynomial.variables(3)
    assert H == (x1 ** 3 + x2 ** 3 + x3 ** 3) * -4 + x1 * x2 * x3 * 17
    # the stated special case H(P_{6a,-3a}) = -54 a^2 P holds
    for A in (1, 2, Fraction(1, 3)):
        assert cz.hessian_det_check(cz.syzygetic(6 * A, -3 * A))["kappa"] == -54 * Fraction(A) ** 2


def test_hessian_det_products_of_linear_forms():
    x1, x2, x3 = Polynomial.variables(3)
    for b in (1, 3, Fraction(2, 5)):
        assert cz.hessian_det_check(x1 * x2 * x3 * b)["kappa"] == 2 * Fraction(b) ** 2
    for c in (1, 5, -2):
        assert cz.hessian_det_check(x3 * (x1 * x1 + x2 * x2) * c)["kappa"] == -8 * c * c
    E = x1 * x1 + x2 * x2 + x3 * x3
    F = x1 * x1 + x2 * x2 - x3 * x3
    assert cz.hessian_det_check(x1 * E)["kappa"] is None
    assert cz.hessian_det_check(x1 * F)["kappa"] is None
    xs = sympy.symbols("x1:4")
    for P in (x1 * x2 * x3 * 3, x1 * E):
        assert to_sympy(cz.hessian_det_check(P)["H"], xs) == sympy.expand(sympy.hessian(to_sympy(P, xs), xs).det())


# ---------------------------------------------------------------- Nahm

def test_nahm_so3():
    g = lz.builtin("so3")
    N = cz.nahm(g)
    assert cz.trace_form(N) == Metric.identity(9).as_symtensor()
    assert N.to_cubic() == cz.nahm_poly_so3()
    rng = random.Random(2)
    for _ in range(5):
        x = [Scalar(rng.randint(-2, 2)) for _ in range(9)]
        y = [Scalar(rng.randint(-2, 2)) for _ in range(9)]
        assert N.mul(x, y) == cz.nahm_mul_direct(g, x, y)


def test_nahm_det_half():
    # P = det(X)/2 for the 3x3 matrix of coordinates
    xs = sympy.symbols("x1:10")
    M = sympy.Matrix(3, 3, xs)
    assert to_sympy(cz.nahm_poly_so3(), xs) == sympy.expand(M.det() / 2)


def test_nahm_sl2r_indefinite():
    N = cz.nahm(lz.builtin("sl2r"))
    assert N.h.signature == (3, 6)
    assert cz.is_special(N)


def test_cayley_dickson():
    rng = random.Random(5)
    for m in (1, 2, 4, 8):
        a = [Scalar(rng.randint(-3, 3)) for _ in range(m)]
        b = [Scalar(rng.randint(-3, 3)) for _ in range(m)]
        nrm = lambda v: sum((t * t for t in v), ZERO)
        assert nrm(cz.cd_mul(a, b)) == nrm(a) * nrm(b)
        assert cz.cd_mul(a, cz.cd_conj(a)) == [nrm(a)] + [ZERO] * (m - 1)
