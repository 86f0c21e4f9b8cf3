"""Identity checks coded from the definitions, shared by unit and acceptance tests."""
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, factorial
import random

import sympy

from ahlab.scalar import Scalar
from ahlab.poly import Polynomial
from ahlab.symtensor import SymTensor, Metric, sym_product, trace, trace_free, con
from ahlab import fields as fl
from conftest import to_sympy


def rand_symtensor(rng, n, k, density=0.6):
    c = {}
    for I in combinations_with_replacement(range(n), k):
        if rng.random() < density:
            c[I] = Scalar(Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])))
    return SymTensor(n, k, c)


def rand_metric(rng, n, diagonal=False):
    while True:
        g = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = Fraction(rng.choice([1, 2, 3, -1]), rng.choice([1, 2]))
            if not diagonal:
                for j in range(i):
                    g[i][j] = g[j][i] = Fraction(rng.choice([0, 0, 1, -1]), 2)
        try:
            return Metric(g)
        except ValueError:
            pass


def poly_of(w):
    """P^w(x) = w_{i1..ik} x^i1..x^ik summed over the full (unsorted) index set."""
    n = w.n
    xs = sympy.symbols("x1:%d" % (n + 1))
    out = sympy.Integer(0)
    for idx, v in w.to_tensor().items():
        term = to_sympy(v)
        for i in idx:
            term = term * xs[i]
        out += term
    return sympy.expand(out), xs


def h_laplacian(expr, xs, h, times=1):
    hinv = [[to_sympy(h.inv[i][j]) for j in range(h.n)] for i in range(h.n)]
    for _ in range(times):
        expr = sympy.expand(sum(hinv[i][j] * sympy.diff(expr, xs[i], xs[j])
                                for i in range(h.n) for j in range(h.n) if hinv[i][j] != 0))
    return expr


def hh(a, h):
    return sym_product(h.as_symtensor(), a)


def tr(a, h):
    return trace(a, h) if a.k >= 2 else SymTensor(a.n, max(a.k - 2, 0))


# ---------------------------------------------------------------- algebraic identities

def check_tf(w, h):
    """tf is the projection onto trace-free tensors along h (.) S; harmonicity via sympy."""
    t = trace_free(w, h)
    ok = (w.k < 2 or not trace(t, h)) and trace_free(t, h) == t
    ok = ok and not trace_free(hh(w, h), h)
    P, xs = poly_of(t)
    return ok and h_laplacian(P, xs, h) == 0


def check_sl2(a, h):
    n, k = a.n, a.k

    def E(x):
        return hh(x, h) * Fraction(-(x.k + 1), 2)

    def F(x):
        return tr(x, h) * Fraction(x.k, 2) if x.k >= 2 else SymTensor(n, max(x.k - 2, 0))

    def H(x):
        return x * (Fraction(n, 2) + x.k)
    if k < 2:
        EF = SymTensor(n, k)
    else:
        EF = E(F(a))
    ok = EF - F(E(a)) == H(a)
    ok = ok and H(E(a)) - E(H(a)) == E(a) * 2
    if k >= 2:
        ok = ok and H(F(a)) - F(H(a)) == F(a) * -2
    return ok


def check_trhcommute(a, h):
    n, k = a.n, a.k
    lhs = trace(hh(a, h), h) * comb(k + 2, 2)
    rhs = a * (n + 2 * k)
    if k >= 2:
        rhs = rhs + hh(trace(a, h), h) * comb(k, 2)
    return lhs == rhs


def check_tralbe(a, b, h):
    k, l = a.k, b.k
    if k + l < 2:
        return True
    lhs = trace(sym_product(a, b), h) * comb(k + l, 2)
    rhs = SymTensor(a.n, k + l - 2)
    if k >= 2:
        rhs = rhs + sym_product(trace(a, h), b) * comb(k, 2)
    if l >= 2:
        rhs = rhs + sym_product(a, trace(b, h)) * comb(l, 2)
    if k >= 1 and l >= 1:
        rhs = rhs + con(a, b, 1, h) * (k * l)
    return lhs == rhs


def check_contr(a, b, h):
    """a, b trace-free: 2^i C(k+l-2i, k-i) con^i(a,b) = C(k+l, k) tr^i(a (.) b)."""
    k, l = a.k, b.k
    ab = sym_product(a, b)
    t = ab
    for i in range(0, min(k, l) + 1):
        if i:
            t = trace(t, h)
        if con(a, b, i, h) * (2 ** i * comb(k + l - 2 * i, k - i)) != t * comb(k + l, k):
            return False
    return True


def check_powerlap(a, b, h):
    """a, b trace-free: (k-i)!(l-i)! Delta^i P^{a.b} = 2^i k! l! P^{con^i(a,b)}, sympy Laplacian."""
    k, l = a.k, b.k
    P, xs = poly_of(sym_product(a, b))
    L = P
    for i in range(0, min(k, l) + 1):
        if i:
            L = h_laplacian(L, xs, h)
        Q, _ = poly_of(con(a, b, i, h))
        if sympy.expand(L * factorial(k - i) * factorial(l - i) - Q * 2 ** i * factorial(k) * factorial(l)) != 0:
            return False
    return True


def check_lap_trace(w, h):
    """Delta^i P^w = k(k-1)..(k-2i+1) P^{tr^i w}."""
    k = w.k
    P, xs = poly_of(w)
    t = w
    for i in range(1, k // 2 + 1):
        t = trace(t, h)
        c = 1
        for a in range(2 * i):
            c *= k - a
        Q, _ = poly_of(t)
        if sympy.expand(h_laplacian(P, xs, h, i) - c * Q) != 0:
            return False
    return True


def algebraic_suite(rng, count):
    """Run the symmetric algebra identities on `count` random tensors; returns (passed, total, failures)."""
    total, fails = 0, []
    for trial in range(count):
        n = rng.randint(2, 5)
        h = rand_metric(rng, n, diagonal=rng.random() < 0.5)
        k, l = rng.randint(0, 3), rng.randint(0, 3)
        a, b = rand_symtensor(rng, n, k), rand_symtensor(rng, n, l)
        at, bt = trace_free(a, h), trace_free(b, h)
        checks = {"tf": check_tf(a, h), "sl2": check_sl2(a, h), "trhcommute": check_trhcommute(a, h),
                  "tralbe": check_tralbe(a, b, h), "contr": check_contr(at, bt, h)}
        if n <= 4 and k + l <= 5:
            checks["powerlap"] = check_powerlap(at, bt, h)
        total += 1
        bad = [name for name, v in checks.items() if not v]
        if bad:
            fails.append((trial, n, k, l, bad))
    return total - len(fails), total, fails


# ---------------------------------------------------------------- field identities

def field_suite(rng, count, ks=(1, 2, 3), ns=(2, 3, 4, 5)):
    """Operator identities on random trace-free polynomial fields."""
    fails, total = [], 0
    for trial in range(count):
        n, k = ns[trial % len(ns)], ks[(trial // len(ns)) % len(ks)]
        h = rand_metric(rng, n, diagonal=True) if trial % 3 == 2 else Metric.identity(n)
        w = fl.random_field(rng, n, k, h, deg=2, terms=2)
        dec = fl.verify_decomposition(w)
        wz = fl.verify_flat_weitzenbock(w)
        checks = {"domkl": not dec["domkl_residual"], "normdom": not dec["normdom_residual"],
                  "normdom_T": not dec["normdom_T_residual"], "lapom": wz["ok"],
                  "L_routes": fl.op_L(w) == fl.op_L_tf_oracle(w),
                  "K_routes": fl.op_K(w) == fl.op_K_second_form(w),
                  "L_tracefree": k < 1 or not trace(fl.op_L(w).comps, h),
                  "div_lie": fl.lie_div(w).comps == fl.lie_div_formula(w).comps if k >= 2 else True}
        total += 1
        bad = [name for name, v in checks.items() if not v]
        if bad:
            fails.append((trial, n, k, bad))
    return total - len(fails), total, fails


def kato_suite(rng, fields_per_class=10, points=20, n=3, k=2, deg=2):
    """Kato inequality at random points for random kernel elements of each class."""
    out = {}
    for cls in fl.KATO_CLASSES:
        basis = fl.kernel_fields(n, k, Metric.identity(n), cls, deg)
        worst, checked = float("inf"), 0
        for _ in range(fields_per_class):
            w = None
            for c in basis:
                t = c * Fraction(rng.randint(-4, 4), rng.choice([1, 2]))
                w = t if w is None else w + t
            w = fl.PolyTensorField(w.comps, w.h, True)
            if not w.comps:
                continue
            pts = [[rng.uniform(-2, 2) for _ in range(n)] for _ in range(points)]
            res = fl.kato_spot_check(w, pts, cls)
            worst = min(worst, min(r["slack"] for r in res["rows"]))
            checked += 1
        out[cls] = {"basis": len(basis), "fields": checked, "worst_slack": worst}
    return out
