"""Curvature of AH structures on a flat background: decomposition, verdicts, jets."""
from fractions import Fraction

import numpy as np

from .scalar import Scalar, ZERO
from .poly import Polynomial
from .symtensor import Tensor, SymTensor, Metric, einsum, outer, trace, norm2

IJKL = "ijkl"


def _re(t, spec):
    """out_ijkl = t_{spec}, e.g. _re(t, 'jikl') swaps the first pair."""
    return t.permute([IJKL.index(c) for c in spec])


def _as_t(t):
    return t.to_tensor() if isinstance(t, SymTensor) else t


def _const(t):
    """True if every entry is a constant (Scalar, or degree <= 0 Polynomial)."""
    for v in t.d.values() if isinstance(t, Tensor) else [t]:
        if isinstance(v, Polynomial) and v.degree() > 0:
            return False
    return True


# ---------------------------------------------------------------- algebraic pieces

def P1(B):
    S = B.symmetrize([1, 2, 3])
    return (S - _re(S, "jikl")) * Fraction(3, 4)


def P2(B):
    A = B.antisymmetrize([2, 3])
    return (A + _re(A, "klij")) * Fraction(1, 2)


def P3(B):
    X = B.antisymmetrize([0, 1, 3])
    return (X * 3 - _re(X, "ijlk")) * Fraction(3, 8)


def ricci_trace(B, h):
    """B_ij = B_pij^p."""
    return einsum("pijl,pl->ij", B, h.upper_t)


def full_trace(b, h):
    t = einsum("ij,ij->", b, h.upper_t)
    return t.d.get((), ZERO)


def r_of(F, h):
    """r(F)_ijkl = F_ij h_kl - F_k[i h_j]l + F_l[i h_j]k."""
    FH = outer(F, h.lower_t)
    half = Fraction(1, 2)
    return (FH - (_re(FH, "kijl") - _re(FH, "kjil")) * half
            + (_re(FH, "lijk") - _re(FH, "ljik")) * half)


def _hx(h, X):
    HX = outer(h.lower_t, X)
    # 2 h_l[i X_j]k and 2 h_k[i X_j]l
    return _re(HX, "lijk") - _re(HX, "ljik"), _re(HX, "kijl") - _re(HX, "kjil")


def schouten_like(B, h):
    """(1/(2-n)) (B_ij + B h_ij / (2(1-n))) from the Ricci trace of B; None if n <= 2."""
    n = h.n
    if n <= 2:
        return None
    ric = ricci_trace(B, h)
    s = full_trace(ric, h)
    return (ric + h.lower_t * (s / (2 * (1 - n)))) / (2 - n)


def weyl_part(B, h):
    """Completely trace-free part of a tensor with metric-curvature symmetries."""
    if h.n <= 2:
        return Tensor(h.n, 4)
    C = schouten_like(B, h)
    a, b = _hx(h, C)
    return B + a - b


def nonassoc_tensor(L, h):
    """L4_ijkl = 2 L_k[i^p L_j]lp."""
    Lt = _as_t(L)
    Lu = einsum("kiq,qp->kip", Lt, h.upper_t)
    X = einsum("kip,jlp->ijkl", Lu, Lt)
    return X - _re(X, "jikl")


def curvature_from_connection(G, dG, h):
    """R_ijkl (l lowered) for nabla = D + G_ij^k with dG_mijk = d_m G_ij^k."""
    Q = einsum("ipl,jkp->ijkl", G, G)
    R = Q - _re(Q, "jikl")
    if dG is not None and dG:
        R = R + dG - _re(dG, "jikl")
    return einsum("ijkp,pl->ijkl", R, h.lower_t)


class CurvatureReport:
    """Decomposition R4 = U4 + T4 + F4 + G4 and the derived traces."""

    def __init__(self, R4, h, L=None):
        n = h.n
        self.n, self.h = n, h
        self.R4 = R4
        nF = einsum("ijpq,pq->ij", R4, h.upper_t)     # R_ijp^p
        self.Fij = nF / n
        ric = ricci_trace(R4, h)
        self.ric = ric
        alt = ric.antisymmetrize([0, 1]) * Fraction(-2, n)
        if alt != self.Fij:
            raise ValueError("Faraday routes disagree; input lacks the AH symmetries")
        rF = r_of(self.Fij, h)
        self.T4 = P2(R4)
        self.U4 = P1(R4 - rF)
        self.F4 = P1(rF)
        self.G4 = P3(rF)
        if P3(R4) != self.G4:
            raise ValueError("P3(R) differs from G; input lacks the AH symmetries")
        if self.U4 + self.T4 + self.F4 + self.G4 != R4:
            raise AssertionError("reassembly failed")
        self.scalar = full_trace(ric, h)
        self.Tij = ricci_trace(self.T4, h)
        self.Uij = ricci_trace(self.U4, h)
        self.Eij = self.Uij * Fraction(-1, n)
        a, b = _hx(h, self.Eij)
        self.E4 = self.U4 + a + b
        self.Aij = schouten_like(self.T4, h)
        self.A4 = weyl_part(self.T4, h)
        self.L4 = self.C4 = None
        if L is not None:
            self.L4 = nonassoc_tensor(L, h)
            self.C4 = weyl_part(self.L4, h)

    def ric_sym_tracefree(self):
        s = self.ric.symmetrize()
        return s - self.h.lower_t * (self.scalar / self.n)

    def naive_einstein(self):
        return not self.ric_sym_tracefree() and not self.Eij

    def conservative(self):
        return not self.Fij and _const(self.scalar)

    def einstein(self):
        """Ricci proportionality constant R/n when Einstein, else None."""
        if self.naive_einstein() and self.conservative():
            s = self.scalar
            if isinstance(s, Polynomial):
                s = s.t.get((0,) * s.n, ZERO)
            return s / self.n
        return None

    def self_conjugate(self):
        return not self.U4

    def proj_flat_obstructed(self):
        return bool(self.A4) or bool(self.E4) or bool(self.Fij)

    def verdicts(self):
        return {"einstein": self.einstein(), "self_conjugate": self.self_conjugate(),
                "proj_flat_obstructed": self.proj_flat_obstructed(),
                "conservative": self.conservative()}


def decompose_curvature(R4, h):
    rep = CurvatureReport(R4, h)
    return rep.T4, rep.U4, rep.A4, rep.E4, {"ric": rep.ric, "F": rep.Fij, "scalar": rep.scalar,
                                            "Aij": rep.Aij, "Eij": rep.Eij}


# ---------------------------------------------------------------- flat structures

class FlatAHStructure:
    """nabla = D - (1/2) L_ij^k on R^n with constant h and constant trace-free L."""

    def __init__(self, h, L, gamma=None):
        if not isinstance(L, SymTensor) or L.k != 3:
            raise ValueError("L must be a rank-3 SymTensor")
        if h.n < 2:
            raise ValueError("need n >= 2")
        if trace(L, h):
            raise ValueError("L is not trace-free")
        self.n, self.h, self.L = h.n, h, L
        self.gamma = gamma

    @classmethod
    def from_algebra(cls, A):
        return cls(A.h, A.mu)

    def connection(self):
        return einsum("ijp,pk->ijk", self.L, self.h.upper_t) * Fraction(-1, 2)


def curvature_flat(s):
    if s.gamma is not None and any(s.gamma):
        raise ValueError("curvature_flat needs gamma = 0")
    h = s.h
    R4 = curvature_from_connection(s.connection(), None, h)
    rep = CurvatureReport(R4, h, s.L)
    if R4 != rep.L4 * Fraction(-1, 4):
        raise AssertionError("R differs from -L4/4")
    if rep.E4 or rep.Eij or rep.Fij:
        raise AssertionError("constant L must give E4 = 0, Eij = 0, F = 0")
    if rep.scalar != norm2(s.L, h) * Fraction(-1, 4):
        raise AssertionError("scalar differs from -|L|^2/4")
    if rep.A4 * -4 != rep.C4:
        raise AssertionError("-4 A4 differs from C4")
    return rep


def einstein_verdict(report, s=None):
    return report.einstein()


def field_curvature_flat(Lfield, h):
    """Lfield: SymTensor of Polynomials (rank 3, trace-free); nabla = D - L/2, gamma = 0."""
    from .fields import D, div_tensor
    Lt = _as_t(Lfield)
    n = h.n
    G = einsum("ijp,pk->ijk", Lt, h.upper_t) * Fraction(-1, 2)
    dG = D(G)
    R4 = curvature_from_connection(G, dG, h)
    rep = CurvatureReport(R4, h)
    # second routes: 2n E_ij = D_p L_ij^p, U_ijkl = -D_[i L_j]kl
    divL = div_tensor(Lt, h)
    if rep.Eij != divL * Fraction(1, 2 * n):
        raise AssertionError("E_ij routes disagree")
    if rep.U4 != -(D(Lt).antisymmetrize([0, 1])):
        raise AssertionError("U4 differs from -D_[i L_j]kl")
    q = Polynomial(n)
    for key, v in Lt.d.items():
        w = v * v
        for i in key:
            w = w * h.inv[i][i] if h.diagonal else None
        if w is None:
            break
        q = q + w
    if h.diagonal and rep.scalar != q * Fraction(-1, 4):
        raise AssertionError("scalar differs from -|L|^2/4")
    rep.norm2_L = q if h.diagonal else None
    return rep


def naive_L(f, g):
    """L(f, g) = 6f d112 - 6f d233 + 6g d123 as a SymTensor of Polynomials (n = 3)."""
    return SymTensor(3, 3, {(0, 0, 1): f * 2, (1, 2, 2): f * -2, (0, 1, 2): g})


# ---------------------------------------------------------------- Gauduchon equations

def gauduchon_verify(h, gamma, L, metric_ricci=None, div_L=None, sym_dgamma=None):
    """Check the Gauduchon-gauge equations for constant (h, gamma, L).

    metric_ricci, div_L and sym_dgamma default to the flat background (all zero);
    a left-invariant frame computation may pass its own values."""
    n = h.n
    gamma = [Scalar.coerce(x) for x in (gamma or [ZERO] * n)]
    Lt = _as_t(L)
    zero2 = Tensor(n, 2)
    ric = metric_ricci if metric_ricci is not None else zero2
    divL = div_L if div_L is not None else zero2
    dg = sym_dgamma if sym_dgamma is not None else zero2
    gv = Tensor(n, 1, {(i,): g for i, g in enumerate(gamma)})
    gu = einsum("p,pq->q", gv, h.upper_t)
    gL = einsum("q,ijq->ij", gu, Lt)
    LL = einsum("ipq,jqp->ij", einsum("ipr,rq->ipq", Lt, h.upper_t), einsum("jqr,rp->jqp", Lt, h.upper_t))
    gg = outer(gv, gv)

    def tf(t):
        return t - h.lower_t * (full_trace(t, h) / n)
    eq2 = tf(ric) - tf(LL) * Fraction(1, 4) - tf(gg) * (2 - n)
    g2 = full_trace(gg, h)
    out = {
        "div_L": not divL,
        "gamma_L": not gL,
        "killing": not dg,
        "ricci_equation": not eq2,
    }
    out["ok"] = all(out.values())
    out["residual_ricci"] = eq2
    out["gamma_norm2"] = g2
    # kappa = R_h - |L|^2/4 - (n+2)|gamma|^2, constant for constant data; reported only
    out["kappa"] = full_trace(ric, h) - full_trace(LL, h) * Fraction(1, 4) - g2 * (n + 2)
    return out


# ---------------------------------------------------------------- float jets

def _np_sym_last3(B):
    return (B + B.transpose(0, 1, 3, 2) + B.transpose(0, 2, 1, 3) + B.transpose(0, 2, 3, 1)
            + B.transpose(0, 3, 1, 2) + B.transpose(0, 3, 2, 1)) / 6


def _np_alt(B, slots):
    from itertools import permutations
    from .symtensor import perm_sign
    out = np.zeros_like(B)
    for p in permutations(range(len(slots))):
        axes = list(range(B.ndim))
        for a, b in zip(slots, p):
            axes[a] = slots[b]
        out += perm_sign(p) * B.transpose(axes)
    return out / len(list(permutations(slots)))


def decompose_numpy(R4, h):
    """Float version of the CurvatureReport traces (independent array code)."""
    n = h.shape[0]
    hi = np.linalg.inv(h)
    F = np.einsum("ijpq,pq->ij", R4, hi) / n
    ric = np.einsum("pijl,pl->ij", R4, hi)
    rF = (np.einsum("ij,kl->ijkl", F, h) - 0.5 * (np.einsum("ki,jl->ijkl", F, h) - np.einsum("kj,il->ijkl", F, h))
          + 0.5 * (np.einsum("li,jk->ijkl", F, h) - np.einsum("lj,ik->ijkl", F, h)))
    S = _np_sym_last3(R4 - rF)
    U4 = 0.75 * (S - S.transpose(1, 0, 2, 3))
    Akl = 0.5 * (R4 - R4.transpose(0, 1, 3, 2))
    T4 = 0.5 * (Akl + Akl.transpose(2, 3, 0, 1))
    scal = np.einsum("ij,ij->", ric, hi)
    Eij = -np.einsum("pijl,pl->ij", U4, hi) / n
    E4 = (U4 + np.einsum("li,jk->ijkl", h, Eij) - np.einsum("lj,ik->ijkl", h, Eij)
          + np.einsum("ki,jl->ijkl", h, Eij) - np.einsum("kj,il->ijkl", h, Eij))
    A4 = np.zeros_like(R4)
    if n > 2:
        Tij = np.einsum("pijl,pl->ij", T4, hi)
        Aij = (Tij + scal * h / (2 * (1 - n))) / (2 - n)
        A4 = (T4 + np.einsum("li,jk->ijkl", h, Aij) - np.einsum("lj,ik->ijkl", h, Aij)
              - np.einsum("ki,jl->ijkl", h, Aij) + np.einsum("kj,il->ijkl", h, Aij))
    return {"R4": R4, "F": F, "ric": ric, "scalar": scal, "T4": T4, "U4": U4,
            "E4": E4, "Eij": Eij, "A4": A4}


def curvature_from_jet(jet):
    """jet: dict of arrays h, dh[m,i,j], ddh[a,b,i,j], gamma, dgamma[m,i], L, dL[m,i,j,k].

    nabla = D + Pi with Pi_ij^k = -L_ij^k/2 - gamma_i d_j^k - gamma_j d_i^k + gamma^k h_ij."""
    h = np.asarray(jet["h"], float)
    n = h.shape[0]
    dh = np.asarray(jet.get("dh", np.zeros((n,) * 3)), float)
    ddh = np.asarray(jet.get("ddh", np.zeros((n,) * 4)), float)
    g = np.asarray(jet.get("gamma", np.zeros(n)), float)
    dg = np.asarray(jet.get("dgamma", np.zeros((n, n))), float)
    L = np.asarray(jet.get("L", np.zeros((n,) * 3)), float)
    dL = np.asarray(jet.get("dL", np.zeros((n,) * 4)), float)
    if abs(np.linalg.det(h)) < 1e-14:
        raise ValueError("metric is degenerate at the point")
    hi = np.linalg.inv(h)
    dhi = -np.einsum("ka,mab,bl->mkl", hi, dh, hi)
    # Levi-Civita: C_ijl = (d_i h_jl + d_j h_il - d_l h_ij)/2, Gamma_ij^k = h^kl C_ijl
    C = 0.5 * (dh.transpose(0, 1, 2) + dh.transpose(1, 0, 2) - dh.transpose(1, 2, 0))
    dC = 0.5 * (ddh + ddh.transpose(0, 2, 1, 3) - ddh.transpose(0, 2, 3, 1))
    LC = np.einsum("kl,ijl->ijk", hi, C)
    dLC = np.einsum("mkl,ijl->mijk", dhi, C) + np.einsum("kl,mijl->mijk", hi, dC)
    delta = np.eye(n)
    gu = hi @ g
    dgu = np.einsum("mkl,l->mk", dhi, g) + np.einsum("kl,ml->mk", hi, dg)
    Lu = np.einsum("ijl,lk->ijk", L, hi)
    dLu = np.einsum("mijl,lk->mijk", dL, hi) + np.einsum("ijl,mlk->mijk", L, dhi)
    Pi = (-0.5 * Lu - np.einsum("i,jk->ijk", g, delta) - np.einsum("j,ik->ijk", g, delta)
          + np.einsum("k,ij->ijk", gu, h))
    dPi = (-0.5 * dLu - np.einsum("mi,jk->mijk", dg, delta) - np.einsum("mj,ik->mijk", dg, delta)
           + np.einsum("mk,ij->mijk", dgu, h) + np.einsum("k,mij->mijk", gu, dh))

    def riem(G, dG):
        R = dG - dG.transpose(1, 0, 2, 3)
        Q = np.einsum("ipl,jkp->ijkl", G, G)
        return np.einsum("ijkp,pl->ijkl", R + Q - Q.transpose(1, 0, 2, 3), h)
    R4 = riem(LC + Pi, dLC + dPi)
    out = decompose_numpy(R4, h)
    metric_scal = decompose_numpy(riem(LC, dLC), h)["scalar"]
    L2 = float(np.einsum("ijk,abc,ia,jb,kc->", L, L, hi, hi, hi))
    g2 = float(g @ hi @ g)
    # d*gamma = -h^pq (d_p gamma_q - LC_pq^r gamma_r)
    dstar = -float(np.einsum("pq,pq->", hi, dg - np.einsum("pqr,r->pq", LC, g)))
    out.update({"metric_scalar": metric_scal, "L_norm2": L2, "gamma_norm2": g2,
                "confscal_residual": metric_scal - (out["scalar"] + 0.25 * L2 + 2 * (n - 1) * dstar
                                                    + (n - 1) * (n - 2) * g2)})
    return out


def jet_from_functions(x, h_fn, gamma_fn, L_fn, step=1e-4):
    """Central-difference jet of (h, gamma, L) at x."""
    x = np.asarray(x, float)
    n = x.size
    E = np.eye(n) * step

    def d1(f):
        return np.stack([(f(x + E[m]) - f(x - E[m])) / (2 * step) for m in range(n)])
    ddh = np.stack([np.stack([(h_fn(x + E[a] + E[b]) - h_fn(x + E[a] - E[b]) - h_fn(x - E[a] + E[b])
                               + h_fn(x - E[a] - E[b])) / (4 * step * step) for b in range(n)])
                    for a in range(n)])
    return {"h": h_fn(x), "dh": d1(h_fn), "ddh": ddh, "gamma": gamma_fn(x), "dgamma": d1(gamma_fn),
            "L": L_fn(x), "dL": d1(L_fn)}


def orthant_structure(n):
    """(h, gamma, L) of the orthant example as functions of x; nabla = d + 2 b_(i d_j)^k, b = -du/u."""
    N = n + 1

    def beta(x):
        return -1.0 / (N * x)

    def h(x):
        return np.diag(1.0 / (N * x * x)) - np.outer(1.0 / x, 1.0 / x) / (N * N)

    def dh(x):
        inv = 1.0 / x
        out = np.zeros((n, n, n))
        for m in range(n):
            out[m, m, m] += -2.0 / (N * x[m] ** 3)
            out[m, m, :] += inv[m] * inv[m] * inv / (N * N)
            out[m, :, m] += inv[m] * inv[m] * inv / (N * N)
        return out

    def nabla_h(x):
        b, H = beta(x), h(x)
        return (dh(x) - 2 * np.einsum("i,jk->ijk", b, H) - np.einsum("j,ik->ijk", b, H)
                - np.einsum("k,ij->ijk", b, H))

    def gamma(x):
        return np.einsum("jk,ijk->i", np.linalg.inv(h(x)), nabla_h(x)) / (2 * n)

    def L(x):
        return nabla_h(x) - 2 * np.einsum("i,jk->ijk", gamma(x), h(x))
    return h, gamma, L


def orthant_jet(n, x=None, step=1e-4):
    x = np.ones(n) if x is None else np.asarray(x, float)
    h, g, L = orthant_structure(n)
    return jet_from_functions(x, h, g, L, step)


def jet_from_flat(s):
    """Constant jet of a FlatAHStructure (gamma = 0)."""
    n = s.n
    h = np.array([[float(v) for v in row] for row in s.h.g])
    return {"h": h, "L": s.L.to_tensor().to_numpy()}
