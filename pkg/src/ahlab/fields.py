"""Polynomial symmetric tensor fields on flat R^n and the operators L, K, T, div, Laplacian."""
from fractions import Fraction
import math

from .scalar import Scalar, ZERO
from .poly import Polynomial
from .symtensor import (Tensor, SymTensor, Metric, einsum, outer, symmetric_part,
                        trace, trace_free, norm2, inner, raise_lower)

LETTERS = "abcdefghjklmnorstuvwxyz"


class PolyTensorField:
    """Symmetric rank-k field with polynomial components over constant metric h."""

    def __init__(self, comps, h, trace_free_flag=False):
        if not isinstance(comps, SymTensor):
            raise TypeError("comps must be a SymTensor of Polynomials")
        self.n, self.k, self.h = comps.n, comps.k, h
        self.comps = comps
        self.trace_free = trace_free_flag
        if trace_free_flag and self.k >= 2 and trace(comps, h):
            raise ValueError("field flagged trace-free has nonzero trace")

    @classmethod
    def from_tensor(cls, t, h, trace_free_flag=False):
        return cls(SymTensor.from_tensor(t), h, trace_free_flag)

    def tensor(self):
        return self.comps.to_tensor()

    def __eq__(self, o):
        return isinstance(o, PolyTensorField) and self.comps == o.comps

    __hash__ = None

    def __add__(self, o):
        return PolyTensorField(self.comps + o.comps, self.h)

    def __sub__(self, o):
        return PolyTensorField(self.comps - o.comps, self.h)

    def __mul__(self, c):
        return PolyTensorField(self.comps * c, self.h)

    __rmul__ = __mul__

    def evaluate(self, pt):
        """Tensor of values at a point (floats if pt is floats)."""
        return evaluate_tensor(self.tensor(), pt)

    def __repr__(self):
        return "PolyTensorField(n=%d, k=%d)" % (self.n, self.k)


def evaluate_tensor(t, pt):
    fl = all(isinstance(x, float) for x in pt)
    d = {}
    for key, v in t.d.items():
        w = v.evaluate(pt) if isinstance(v, Polynomial) else (float(v) if fl else v)
        if w:
            d[key] = w
    return Tensor._raw(t.n, t.rank, d)


def _as_tensor(w):
    if isinstance(w, PolyTensorField):
        return w.tensor()
    if isinstance(w, SymTensor):
        return w.to_tensor()
    return w


def _require_tf(w):
    if isinstance(w, PolyTensorField) and w.k >= 2 and trace(w.comps, w.h):
        raise ValueError("operator needs a trace-free input")


def D(t):
    """Flat covariant derivative, new slot first: (Dt)_{i...} = d_i t_{...}."""
    t = _as_tensor(t)
    d = {}
    for key, v in t.d.items():
        for i in range(t.n):
            w = v.diff(i)
            if w:
                d[(i,) + key] = w
    return Tensor._raw(t.n, t.rank + 1, d)


covariant_derivative = D


def div_tensor(t, h):
    """D^p t_{p...} for a tensor field (first slot contracted)."""
    t = _as_tensor(t)
    if t.rank == 0:
        raise ValueError("divergence of a function")
    d = {}
    hinv = h.inv
    for key, v in t.d.items():
        p, rest = key[0], key[1:]
        for q in range(t.n):
            c = hinv[q][p]
            if not c:
                continue
            w = v.diff(q)
            if w:
                w = w * c
                z = d.get(rest)
                d[rest] = w if z is None else z + w
    return Tensor._raw(t.n, t.rank - 1, {k: v for k, v in d.items() if v})


def divergence(w):
    return PolyTensorField(symmetric_part(div_tensor(w, w.h)), w.h, True)


def laplacian_tensor(t, h):
    t = _as_tensor(t)
    hinv = [[hinv_ij for hinv_ij in row] for row in h.inv]
    d = {}
    for key, v in t.d.items():
        w = v.laplacian(hinv)
        if w:
            d[key] = w
    return Tensor._raw(t.n, t.rank, d)


def laplacian(w):
    return PolyTensorField(symmetric_part(laplacian_tensor(w, w.h)), w.h)


def h_sym(h, v):
    """h (.) v for a symmetric field tensor v (SymTensor of polynomials)."""
    from .symtensor import sym_product
    return sym_product(h.as_symtensor(), v)


def op_L(w):
    """L(w) = Sym(Dw) - k/(n+2(k-1)) h (.) div w, for trace-free w."""
    _require_tf(w)
    n, k, h = w.n, w.k, w.h
    sym = symmetric_part(D(w))
    if k == 0:
        return PolyTensorField(sym, h)
    dv = symmetric_part(div_tensor(w, h))
    return PolyTensorField(sym - h_sym(h, dv) * Fraction(k, n + 2 * (k - 1)), h)


def op_L_tf_oracle(w):
    """Independent route: tf(Sym Dw)."""
    return PolyTensorField(trace_free(symmetric_part(D(w)), w.h), w.h)


def _hv_slots(h, V, s, k):
    """X_{i j i_1..i_{k-1}} = h_{i i_s} V_{j, i_1..^i_s..i_{k-1}}, s in 1..k-1."""
    rest = LETTERS[3:3 + k - 2]
    out_I = list(rest[:s - 1]) + ["b"] + list(rest[s - 1:])
    return einsum("ab,c%s->ac%s" % (rest, "".join(out_I)), h.lower_t, V)


def op_K(w, check=True):
    """K(w)_{ij i_1..i_{k-1}}, first displayed form (sum over slots)."""
    if check:
        _require_tf(w)
    n, k, h = w.n, w.k, w.h
    A = D(w).antisymmetrize([0, 1])
    if k == 1:
        return A
    V = div_tensor(w, h)
    S = Tensor(n, k + 1)
    for s in range(1, k):
        S = S + _hv_slots(h, V, s, k)
    S = S.antisymmetrize([0, 1])
    return A - S * Fraction(1, n - 3 + k)


def op_K_second_form(w):
    """K(w) via the second displayed form (symmetrized h_{i(i_1} V_{...)j})."""
    n, k, h = w.n, w.k, w.h
    A = D(w).antisymmetrize([0, 1])
    if k == 1:
        return A
    V = div_tensor(w, h)
    rest = LETTERS[3:3 + k - 2]
    X = einsum("ab,c%s->acb%s" % (rest, rest), h.lower_t, V)  # h_{i i1} V_{j i2..}
    X = X.symmetrize(list(range(2, k + 1)))
    Y = X - X.permute([1, 0] + list(range(2, k + 1)))
    return A - Y * Fraction(k - 1, 2 * (n - 3 + k))


def op_T(w):
    K = op_K(w)
    return K.symmetrize(list(range(1, w.k + 1))) * Fraction(2 * w.k, w.k + 1)


def ih_coeffs(n, k):
    """Coefficients (a, b) of i_h on rank k-1 input; k = 1 uses the limiting value 1/n."""
    if k == 1:
        return Fraction(1, n), Fraction(0)
    den = (n - 3 + k) * (n + 2 * (k - 1))
    return Fraction(k * (n + 2 * (k - 2)), den), Fraction(k * (1 - k), den)


def div_coeff(n, k):
    a, _ = ih_coeffs(n, k)
    return a


def op_ih(v, h, k):
    """i_h(v) for a trace-free rank k-1 field tensor v; result has rank k+1."""
    v = _as_tensor(v)
    n = v.n
    a, b = ih_coeffs(n, k)
    rest = LETTERS[3:3 + k - 1]
    X = einsum("ab,%s->ab%s" % (rest, rest), h.lower_t, v).symmetrize(list(range(1, k + 1)))
    out = X * a
    if k >= 2 and b:
        # h_{(i1 i2} v_{i3..ik) i}
        r = LETTERS[3:3 + k - 2]
        Y = einsum("ab,%sc->cab%s" % (r, r), h.lower_t, v).symmetrize(list(range(1, k + 1)))
        out = out + Y * b
    return out


def field_norm2(t, h):
    return norm2(_as_tensor(t), h)


def verify_decomposition(w):
    """Residuals of Dw = L + T + i_h(div w) and of the norm splitting."""
    _require_tf(w)
    n, k, h = w.n, w.k, w.h
    Dw = D(w)
    L = op_L(w).tensor()
    K = op_K(w)
    T = K.symmetrize(list(range(1, k + 1))) * Fraction(2 * k, k + 1)
    dv = div_tensor(w, h)
    ih = op_ih(dv, h, k)
    res = Dw - L - T - ih
    c = div_coeff(n, k)
    lhs = field_norm2(Dw, h)
    rhs = field_norm2(L, h) + field_norm2(K, h) * Fraction(2 * k, k + 1) + field_norm2(dv, h) * c
    rhsT = field_norm2(L, h) + field_norm2(T, h) + field_norm2(dv, h) * c
    return {"domkl_residual": res, "normdom_residual": lhs - rhs,
            "normdom_T_residual": lhs - rhsT,
            "ok": (not res) and not (lhs - rhs) and not (lhs - rhsT)}


def kstar_k(w):
    """K*K(w) = D^p K(w)_{p(i1..ik)}."""
    K = op_K(w)
    return symmetric_part(div_tensor(K, w.h))


def lie_div(w):
    """L(div w) through the general L (rank k-1 input)."""
    dv = divergence(w)
    return op_L(dv)


def lie_div_formula(w):
    """L div(w) = D_(i1 D^p w_...)p + (1-k)/(n+2(k-2)) h_(i1i2 D^p D^q w_...)pq."""
    n, k, h = w.n, w.k, w.h
    dv = div_tensor(w, h)
    first = symmetric_part(D(dv))
    if k < 2:
        return PolyTensorField(first, h)
    ddv = div_tensor(dv, h)
    second = h_sym(h, symmetric_part(ddv))
    return PolyTensorField(first + second * Fraction(1 - k, n + 2 * (k - 2)), h)


def verify_flat_weitzenbock(w):
    _require_tf(w)
    n, k, h = w.n, w.k, w.h
    lhs = laplacian(w).comps
    c = div_coeff(n, k)
    dl = symmetric_part(div_tensor(op_L(w).tensor(), h))
    rhs = dl + lie_div(w).comps * c + kstar_k(w) * Fraction(2 * k, k + 1)
    res = lhs - rhs
    return {"lapom_residual": res, "ok": not res}


# ---------------------------------------------------------------- Kato

KATO_CLASSES = ("kerK_div", "kerL_div", "kerL_K")


def kato_constant(n, k, cls):
    if cls == "kerK_div":
        return Fraction(n - 2 + k, n + 2 * (k - 1))
    if cls == "kerL_div":
        return Fraction(k, k + 1)
    if cls == "kerL_K":
        return Fraction(k, n + 2 * (k - 1))
    raise ValueError(cls)


def kernel_membership(w):
    return {"L": not op_L(w).comps, "K": not op_K(w), "div": not divergence(w).comps}


def kato_spot_check(w, points, cls=None, mode="float", slack=1e-12):
    """|d|w||^2 <= c |Dw|^2 at each point (Riemannian h)."""
    if mode != "float":
        raise ValueError("Kato checks are float-mode only")
    mem = kernel_membership(w)
    if cls is None:
        cls = next((c for c, (a, b) in zip(KATO_CLASSES, [("K", "div"), ("L", "div"), ("L", "K")])
                    if mem[a] and mem[b]), None)
        if cls is None:
            raise ValueError("field lies in none of the Kato kernel classes")
    else:
        a, b = {"kerK_div": ("K", "div"), "kerL_div": ("L", "div"), "kerL_K": ("L", "K")}[cls]
        if not (mem[a] and mem[b]):
            raise ValueError("field is not in the %s class" % cls)
    c = float(kato_constant(w.n, w.k, cls))
    import numpy as np
    hinv = np.array([[float(x) for x in row] for row in w.h.inv])
    wt, Dw = w.tensor(), D(w)
    rows = []
    for pt in points:
        pt = [float(x) for x in pt]
        a = evaluate_tensor(wt, pt).to_numpy()
        da = evaluate_tensor(Dw, pt).to_numpy()
        k = w.k
        up = a
        for s in range(k):
            up = np.moveaxis(np.tensordot(hinv, up, axes=([1], [s])), 0, s)
        n2 = float(np.sum(a * up))
        if n2 <= 0:
            raise ValueError("zero-norm point %s" % (pt,))
        g = np.array([np.sum(da[i] * up) for i in range(w.n)])  # <w, D_i w>
        lhs = float(g @ hinv @ g) / n2
        dup = da
        for s in range(k + 1):
            dup = np.moveaxis(np.tensordot(hinv, dup, axes=([1], [s])), 0, s)
        rhs = c * float(np.sum(da * dup))
        rows.append({"point": pt, "lhs": lhs, "rhs": rhs, "slack": rhs - lhs,
                     "ok": rhs - lhs >= -slack})
    return {"class": cls, "constant": c, "rows": rows, "ok": all(r["ok"] for r in rows)}


# ---------------------------------------------------------------- generators

def monomials(n, deg):
    if n == 0:
        if deg == 0:
            yield ()
        return
    for a in range(deg + 1):
        for rest in monomials(n - 1, deg - a):
            yield (a,) + rest


def monomials_upto(n, deg):
    for d in range(deg + 1):
        for e in monomials(n, d):
            yield e


def sym_indices(n, k):
    from itertools import combinations_with_replacement
    return list(combinations_with_replacement(range(n), k))


def random_field(rng, n, k, h, deg=2, terms=3, lo=-3, hi=3, tf=True):
    comps = {}
    monos = list(monomials_upto(n, deg))
    for I in sym_indices(n, k):
        t = {}
        for _ in range(rng.randint(0, terms)):
            e = monos[rng.randrange(len(monos))]
            t[e] = Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2, 3]))
        p = Polynomial(n, t)
        if p:
            comps[I] = p
    s = SymTensor(n, k, comps)
    if tf:
        s = trace_free(s, h)
    return PolyTensorField(s, h, tf)


def harmonic_part(P, h):
    """Har(P) of a homogeneous polynomial, via the trace-free projection."""
    from .symtensor import tensor_from_poly, poly_from_tensor
    return poly_from_tensor(trace_free(tensor_from_poly(P), h))


def hessian_power_field(f, k, h):
    """w = D^k f as a symmetric field."""
    t = Tensor._raw(f.n, 0, {(): f} if f else {})
    for _ in range(k):
        t = D(t)
    return PolyTensorField(symmetric_part(t), h)


def kernel_fields(n, k, h, cls, deg):
    """Basis of trace-free rank-k fields with coefficients of degree <= deg in the class kernel."""
    from sympy.polys.matrices import DomainMatrix
    from sympy import QQ
    monos = list(monomials_upto(n, deg))
    idx = sym_indices(n, k)
    basis = []
    for I in idx:
        for e in monos:
            basis.append((I, e))
    cols = []
    for I, e in basis:
        comps = SymTensor(n, k, {I: Polynomial(n, {e: 1})})
        w = PolyTensorField(comps, h)
        outs = {}
        if k >= 2:
            outs["tr"] = trace(comps, h).to_tensor()
        if cls in ("kerL_div", "kerL_K"):
            outs["L"] = op_L_raw(w).to_tensor()
        if cls in ("kerK_div", "kerL_K"):
            outs["K"] = op_K(w, check=False)
        if cls in ("kerK_div", "kerL_div"):
            outs["div"] = div_tensor(w, h)
        col = {}
        for tag, t in outs.items():
            for key, p in t.d.items():
                for mono, c in p.t.items():
                    col[(tag, key, mono)] = c.rational()
        cols.append(col)
    keys = sorted({r for col in cols for r in col})
    if not keys:
        vecs = [[1 if j == i else 0 for j in range(len(basis))] for i in range(len(basis))]
    else:
        kpos = {r: a for a, r in enumerate(keys)}
        mat = [[QQ(0)] * len(basis) for _ in keys]
        for j, col in enumerate(cols):
            for r, c in col.items():
                mat[kpos[r]][j] = QQ(c.numerator, c.denominator)
        M = DomainMatrix(mat, (len(keys), len(basis)), QQ)
        ns = M.nullspace().to_Matrix()
        vecs = [[Fraction(int(x.p), int(x.q)) for x in ns.row(r)] for r in range(ns.rows)]
    out = []
    for v in vecs:
        comps = {}
        for (I, e), c in zip(basis, v):
            if c:
                comps[I] = comps.get(I, Polynomial(n)) + Polynomial(n, {e: c})
        out.append(PolyTensorField(SymTensor(n, k, comps), h, True))
    return out


def op_L_raw(w):
    """L formula without the trace-free precondition (used to set up linear systems)."""
    n, k, h = w.n, w.k, w.h
    sym = symmetric_part(D(w))
    if k == 0:
        return sym
    dv = symmetric_part(div_tensor(w, h))
    return sym - h_sym(h, dv) * Fraction(k, n + 2 * (k - 1))
