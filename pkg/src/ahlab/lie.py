"""Left-invariant AH structures on semisimple Lie groups, computed in a Lie algebra frame."""
from fractions import Fraction

from .scalar import Scalar, ZERO, ONE, sqrt_rational
from .symtensor import (Tensor, SymTensor, Metric, einsum, outer, trace, trace_free, norm2,
                        sym_product, covector)
from .codazzi import LieAlgebraData
from .curvature import CurvatureReport, _re, gauduchon_verify


def _so3_matrices(scale):
    # (L_i)_{jk} = -eps_ijk, so [L_1, L_2] = L_3
    eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    out = []
    for i in range(3):
        out.append([[-eps.get((i, j, k), 0) * scale for k in range(3)] for j in range(3)])
    return out


def builtin(name):
    r = sqrt_rational(Fraction(1, 2))
    if name == "so3":
        return LieAlgebraData.from_brackets(3, {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]},
                                            "so3", _so3_matrices(ONE))
    if name == "su2-scaled":
        return LieAlgebraData.from_brackets(3, {(0, 1): [0, 0, r], (1, 2): [r, 0, 0], (0, 2): [0, -r, 0]},
                                            "su2-scaled", _so3_matrices(r))
    if name == "sl2r":
        # x = H/(2 sqrt 2), y = (E+F)/(2 sqrt 2), z = (E-F)/(2 sqrt 2)
        s = sqrt_rational(Fraction(1, 8))
        mats = [[[s, 0], [0, -s]], [[0, s], [s, 0]], [[0, s], [-s, 0]]]
        return LieAlgebraData.from_brackets(3, {(0, 1): [0, 0, r], (1, 2): [-r, 0, 0], (0, 2): [0, r, 0]},
                                            "sl2r", mats)
    raise KeyError("unknown Lie algebra %r (known: so3, su2-scaled, sl2r)" % name)


BUILTINS = ("so3", "su2-scaled", "sl2r")


def killing_metric(lie):
    B = lie.killing_matrix()
    try:
        return Metric([[-x for x in row] for row in B])
    except ValueError:
        raise ValueError("Killing form is degenerate (%s is not semisimple)" % (lie.name or "input"))


def lowered_c(lie, h):
    """c_ijk = c_ij^p h_pk."""
    return einsum("ijp,pk->ijk", lie.c, h.lower_t)


class InvariantAH:
    """nabla_{e_i} e_j = (c_ij^k / 2 + Gamma_ij^k) e_k with Gamma symmetric and h-trace-free."""

    def __init__(self, lie, Gamma, h=None, check=True):
        self.lie = lie
        self.n = lie.n
        self.h = h or killing_metric(lie)
        if not isinstance(Gamma, SymTensor) or Gamma.k != 3:
            raise ValueError("Gamma must be a rank-3 SymTensor")
        self.Gamma = Gamma
        self.cl = lowered_c(lie, self.h)
        if check:
            if self.cl.antisymmetrize() != self.cl:
                raise ValueError("c_ijk is not totally antisymmetric for this metric")
            if trace(Gamma, self.h):
                raise ValueError("Gamma is not h-trace-free")

    def Gamma_mixed(self):
        return einsum("ijp,pk->ijk", self.Gamma, self.h.upper_t)

    def connection(self):
        return self.lie.c * Fraction(1, 2) + self.Gamma_mixed()

    def curvature_tensor(self):
        """R_ijkl from A: R_ijk^l = A_ip^l A_jk^p - A_jp^l A_ik^p - c_ij^p A_pk^l."""
        A = self.connection()
        Q = einsum("ipl,jkp->ijkl", A, A)
        R = Q - _re(Q, "jikl") - einsum("ijp,pkl->ijkl", self.lie.c, A)
        return einsum("ijkp,pl->ijkl", R, self.h.lower_t)

    def E_formula(self):
        """Gamma_k[i^p c_j]lp + Gamma_l[i^p c_j]kp - c_pij Gamma_kl^p."""
        G = self.Gamma_mixed()
        X = einsum("kip,jlp->ijkl", G, self.cl)       # Gamma_ki^p c_jlp
        Y = einsum("lip,jkp->ijkl", G, self.cl)
        half = Fraction(1, 2)
        Z = einsum("pij,klp->ijkl", self.cl, G)
        return (X - _re(X, "jikl")) * half + (Y - _re(Y, "jikl")) * half - Z

    def T_formula(self):
        """-(1/4) c_ij^p c_pk^l + 2 Gamma_p[i^l Gamma_j]k^p, lowered."""
        G = self.Gamma_mixed()
        c = self.lie.c
        W = einsum("pil,jkp->ijkl", G, G)
        T = einsum("ijp,pkl->ijkl", c, c) * Fraction(-1, 4) + W - _re(W, "jikl")
        return einsum("ijkp,pl->ijkl", T, self.h.lower_t)

    def report(self):
        R4 = self.curvature_tensor()
        rep = CurvatureReport(R4, self.h, self.Gamma * 2)
        return rep

    def scalar_formula(self):
        return Fraction(self.n, 4) - norm2(self.Gamma, self.h)

    def conservation_residual(self, E4=None):
        """L^abc E_iabc with L = 2 Gamma."""
        E4 = E4 if E4 is not None else self.E_formula()
        Lu = einsum("abc,ap,bq,cr->pqr", self.Gamma * 2, self.h.upper_t, self.h.upper_t, self.h.upper_t)
        return einsum("pqr,ipqr->i", Lu, E4)

    def verify(self):
        """Run the frame identities; returns (report, dict of named booleans)."""
        rep = self.report()
        G = self.Gamma
        GG = einsum("ipq,jqp->ij", self.Gamma_mixed(), self.Gamma_mixed())
        checks = {
            "E4_formula": rep.E4 == self.E_formula(),
            "U4_equals_E4": rep.U4 == rep.E4,
            "T4_formula": rep.T4 == self.T_formula(),
            "Eij_zero": not rep.Eij,
            "ricci_formula": rep.ric == self.h.lower_t * Fraction(1, 4) - GG,
            "scalar_formula": rep.scalar == self.scalar_formula(),
            "conservative": not self.conservation_residual(rep.E4),
            "F_zero": not rep.Fij,
        }
        return rep, checks


def einstein_criterion(h, Gamma):
    """kappa with Gamma_ip^q Gamma_jq^p = kappa h_ij (may hold with kappa = 0), else None."""
    G = einsum("ijp,pk->ijk", Gamma, h.upper_t)
    GG = einsum("ipq,jqp->ij", G, G)
    kappa = einsum("ij,ij->", GG, h.upper_t).d.get((), ZERO) / h.n
    return kappa if GG == h.lower_t * kappa else None


def xyz_gamma(n, x, y, z, h, t):
    """t X_(i Y_j Z_k) with X = h(x, .) etc."""
    X, Y, Z = (covector(h.lower_vec(v)) for v in (x, y, z))
    return sym_product(sym_product(X, Y), Z) * Scalar.coerce(t)


def s3_family(t, lie=None):
    lie = lie or builtin("su2-scaled")
    h = killing_metric(lie)
    if not h.diagonal:
        raise ValueError("s3_family needs a diagonal Killing metric")
    # orthonormal frame x_i = e_i / sqrt(h_ii)
    e = [[ONE / sqrt_rational(h.g[i][i]) if i == j else ZERO for j in range(3)] for i in range(3)]
    return InvariantAH(lie, xyz_gamma(3, e[0], e[1], e[2], h, t), h)


def s3_E_closed_form(t, h=None):
    """-(2 sqrt2 t / 3)(X_[iY_j]X_(kY_l) + cyclic) in the orthonormal frame.

    With a diagonal h the components are given on the basis e_i = sqrt(h_ii) x_i."""
    n = 3
    c = sqrt_rational(2) * Scalar.coerce(t) * Fraction(-2, 3)
    acc = Tensor(n, 4)
    for a, b in ((0, 1), (1, 2), (2, 0)):
        d = {}
        for i, j, s in ((a, b, 1), (b, a, -1)):
            for k, l in ((a, b), (b, a)):
                d[(i, j, k, l)] = Scalar(Fraction(s, 4))
        acc = acc + Tensor(n, 4, d)
    acc = acc * c
    if h is not None and any(h.g[i][i] != ONE for i in range(n)):
        r = [sqrt_rational(h.g[i][i]) for i in range(n)]
        acc = Tensor(n, 4, {k: v * r[k[0]] * r[k[1]] * r[k[2]] * r[k[3]] for k, v in acc.items()})
    return acc


def conformal_killing_residual(s):
    """Sym(D_i Gamma_jkl) with D = A = ad/2 acting on left-invariant tensors."""
    c = s.lie.c
    G = s.Gamma.to_tensor()
    D = (einsum("ijp,pkl->ijkl", c, G) + einsum("ikp,jpl->ijkl", c, G)
         + einsum("ilp,jkp->ijkl", c, G)) * Fraction(-1, 2)
    return D.symmetrize()


def gauduchon_frame(s):
    """Gauduchon equations in the frame: metric Ricci h/4, D = ad/2, gamma = 0."""
    c = s.lie.c
    L = (s.Gamma * 2).to_tensor()
    DL = (einsum("piq,qjk->pijk", c, L)
          + einsum("pjq,iqk->pijk", c, L) + einsum("pkq,ijq->pijk", c, L)) * Fraction(-1, 2)
    divL = einsum("pijk,pk->ij", DL, s.h.upper_t)
    ric = s.h.lower_t * Fraction(1, 4)
    return gauduchon_verify(s.h, None, s.Gamma * 2, metric_ricci=ric, div_L=divL)


# ---------------------------------------------------------------- nilpotent construction

def check_triple(lie, e, f, hh):
    br = lie.bracket
    ok = (br(e, f) == list(hh) and br(hh, e) == [x * 2 for x in e] and br(hh, f) == [x * -2 for x in f])
    if not ok:
        raise ValueError("sl2 triple relations [e,f]=h, [h,e]=2e, [h,f]=-2f fail")


def nilpotent_structure(lie, e, f=None, hh=None, h=None):
    h = h or killing_metric(lie)
    e = [Scalar.coerce(x) for x in e]
    if f is not None:
        f = [Scalar.coerce(x) for x in f]
        hh = [Scalar.coerce(x) for x in hh]
        check_triple(lie, e, f, hh)
    if h.pair(e, e):
        raise ValueError("e is not h-null")
    X = covector(h.lower_vec(e))
    G = sym_product(sym_product(X, X), X)
    return InvariantAH(lie, G, h)


def nil_E_display(s, e):
    """(1/2) X^p (X_i X_k c_pjl - X_j X_k c_pil - X_j X_l c_pik + X_i X_l c_pjk - 2 X_k X_l c_pij)."""
    n = s.n
    X = Tensor(n, 1, {(i,): v for i, v in enumerate(s.h.lower_vec(e))})
    xc = einsum("p,pab->ab", Tensor(n, 1, {(i,): Scalar.coerce(v) for i, v in enumerate(e)}), s.cl)
    XX = outer(X, X)
    M = outer(XX, xc)       # M_abcd = X_a X_b xc_cd
    terms = (_re(M, "ikjl") - _re(M, "jkil") - _re(M, "jlik") + _re(M, "iljk") - _re(M, "klij") * 2)
    return terms * Fraction(1, 2)


def contract4(T, a, b, c, d):
    acc = ZERO
    for (i, j, k, l), v in T.items():
        if a[i] and b[j] and c[k] and d[l]:
            acc = acc + v * a[i] * b[j] * c[k] * d[l]
    return acc


def sl2_standard_triple(lie):
    """Coordinates of e, f, h~ = [[0,1],[0,0]], [[0,0],[1,0]], [[1,0],[0,-1]] in the lie basis."""
    E = [[0, 1], [0, 0]]
    F = [[0, 0], [1, 0]]
    H = [[1, 0], [0, -1]]
    return [lie.coords_of_matrix(M) for M in (E, F, H)]


def killing(lie, x, y):
    B = lie.killing_matrix()
    return sum((x[i] * B[i][j] * y[j] for i in range(lie.n) for j in range(lie.n) if x[i] and y[j]), ZERO)


def mu_of(h):
    """mu = |det h|^(-1/n); exact when the root is a rational or square root, else float."""
    d = abs(h.det)
    n = h.n
    if d == 1:
        return ONE
    if d.is_rational():
        q = d.rational()
        num = round(q.numerator ** (1.0 / n))
        den = round(q.denominator ** (1.0 / n))
        if num ** n == q.numerator and den ** n == q.denominator:
            return Scalar(Fraction(den, num))
    return float(d) ** (-1.0 / n)
