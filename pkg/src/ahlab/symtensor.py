"""Sparse tensors over Scalars (or Polynomials), metrics and the symmetric algebra."""
from collections import defaultdict
from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial

from .scalar import Scalar, ZERO, ONE
from .poly import Polynomial


def _zero(v):
    return not v


def _counts(idx):
    c = defaultdict(int)
    for i in idx:
        c[i] += 1
    return c


def _multi_fact(idx):
    r = 1
    for m in _counts(idx).values():
        r *= factorial(m)
    return r


def distinct_perms(idx):
    """Distinct orderings of a multi-index."""
    return set(permutations(idx))


def perm_sign(p):
    p = list(p)
    s = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


# ---------------------------------------------------------------- generic tensors

class Tensor:
    """Sparse tensor: full index tuple -> value. Slot variance is by convention."""
    __slots__ = ("n", "rank", "d")

    def __init__(self, n, rank, data=None):
        self.n = n
        self.rank = rank
        self.d = {}
        if data:
            for k, v in data.items():
                if v:
                    self.d[tuple(k)] = v

    @classmethod
    def _raw(cls, n, rank, d):
        t = object.__new__(cls)
        t.n, t.rank, t.d = n, rank, d
        return t

    @classmethod
    def scalar(cls, n, v):
        return cls(n, 0, {(): v})

    def __getitem__(self, idx):
        return self.d.get(tuple(idx), ZERO)

    def value(self):
        if self.rank:
            raise ValueError("not a rank-0 tensor")
        return self.d.get((), ZERO)

    def items(self):
        return self.d.items()

    def is_zero(self):
        return not self.d

    def __bool__(self):
        return bool(self.d)

    def __eq__(self, o):
        if isinstance(o, SymTensor):
            o = o.to_tensor()
        if not isinstance(o, Tensor):
            return NotImplemented
        return self.n == o.n and self.rank == o.rank and self.d == o.d

    __hash__ = None

    def __add__(self, o):
        if isinstance(o, SymTensor):
            o = o.to_tensor()
        self._check(o)
        d = dict(self.d)
        for k, v in o.d.items():
            w = d.get(k)
            w = v if w is None else w + v
            if w:
                d[k] = w
            else:
                d.pop(k, None)
        return Tensor._raw(self.n, self.rank, d)

    def __neg__(self):
        return Tensor._raw(self.n, self.rank, {k: -v for k, v in self.d.items()})

    def __sub__(self, o):
        if isinstance(o, SymTensor):
            o = o.to_tensor()
        return self + (-o)

    def __mul__(self, c):
        if isinstance(c, (Tensor, SymTensor)):
            return NotImplemented
        if isinstance(c, (int, Fraction)):
            c = Scalar(c)
        d = {}
        for k, v in self.d.items():
            w = v * c
            if w:
                d[k] = w
        return Tensor._raw(self.n, self.rank, d)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (ONE / Scalar.coerce(c))

    def _check(self, o):
        if not isinstance(o, Tensor) or o.n != self.n or o.rank != self.rank:
            raise ValueError("tensor shape mismatch")

    def map(self, f):
        d = {}
        for k, v in self.d.items():
            w = f(v)
            if w:
                d[k] = w
        return Tensor._raw(self.n, self.rank, d)

    def permute(self, perm):
        """out[i_0..i_r] = self[i_perm[0], ..., i_perm[r-1]]."""
        inv = [0] * self.rank
        for a, p in enumerate(perm):
            inv[p] = a
        d = {tuple(k[inv[a]] for a in range(self.rank)): v for k, v in self.d.items()}
        return Tensor._raw(self.n, self.rank, d)

    def symmetrize(self, slots=None, anti=False):
        slots = list(range(self.rank)) if slots is None else list(slots)
        perms = list(permutations(range(len(slots))))
        w = Scalar(Fraction(1, len(perms)))
        acc = defaultdict(lambda: ZERO)
        for k, v in self.d.items():
            vw = v * w
            for p in perms:
                kk = list(k)
                for a, b in zip(slots, p):
                    kk[a] = k[slots[b]]
                acc[tuple(kk)] = acc[tuple(kk)] + (vw * perm_sign(p) if anti else vw)
        return Tensor._raw(self.n, self.rank, {k: v for k, v in acc.items() if v})

    def antisymmetrize(self, slots=None):
        return self.symmetrize(slots, anti=True)

    def to_numpy(self):
        import numpy as np
        a = np.zeros((self.n,) * self.rank)
        for k, v in self.d.items():
            a[k] = float(v)
        return a

    @classmethod
    def from_numpy(cls, a):
        """Float array wrapped as a Tensor of floats (float mode only)."""
        import numpy as np
        a = np.asarray(a, dtype=float)
        d = {tuple(int(i) for i in k): float(a[k]) for k in zip(*np.nonzero(a))}
        return cls._raw(a.shape[0] if a.ndim else 0, a.ndim, d)

    def __repr__(self):
        return "Tensor(n=%d, rank=%d, nnz=%d)" % (self.n, self.rank, len(self.d))


def _prep(labels, t):
    """Handle repeated labels inside one operand (diagonal extraction)."""
    if len(set(labels)) == len(labels):
        return list(labels), t.d
    first = {}
    for a, c in enumerate(labels):
        first.setdefault(c, a)
    uniq = sorted(first, key=first.get)
    d = defaultdict(lambda: ZERO)
    for k, v in t.d.items():
        ok = True
        for a, c in enumerate(labels):
            if k[a] != k[first[c]]:
                ok = False
                break
        if ok:
            kk = tuple(k[first[c]] for c in uniq)
            d[kk] = d[kk] + v
    return uniq, dict(d)


def _sum_out(labels, d, keep):
    if all(c in keep for c in labels):
        return labels, d
    pos = [a for a, c in enumerate(labels) if c in keep]
    nl = [labels[a] for a in pos]
    out = {}
    for k, v in d.items():
        kk = tuple(k[a] for a in pos)
        w = out.get(kk)
        out[kk] = v if w is None else w + v
    return nl, {k: v for k, v in out.items() if v}


def einsum(spec, *ops):
    """Sparse Einstein summation, e.g. einsum('ijp,pk->ijk', A, B)."""
    lhs, out = spec.replace(" ", "").split("->")
    subs = lhs.split(",")
    if len(subs) != len(ops):
        raise ValueError("operand count mismatch in %r" % spec)
    n = ops[0].n
    ops = [o.to_tensor() if isinstance(o, SymTensor) else o for o in ops]
    for s, o in zip(subs, ops):
        if len(s) != o.rank:
            raise ValueError("rank mismatch for %r" % s)
    prepped = [_prep(s, o) for s, o in zip(subs, ops)]

    def needed(i):
        need = set(out)
        for s, _ in prepped[i:]:
            need.update(s)
        return need

    labels, acc = _sum_out(*prepped[0], needed(1))
    for i in range(1, len(prepped)):
        lb, db = prepped[i]
        shared = [c for c in lb if c in labels]
        pa = [labels.index(c) for c in shared]
        pb = [lb.index(c) for c in shared]
        rest = [a for a, c in enumerate(lb) if c not in labels]
        groups = defaultdict(list)
        for k, v in db.items():
            groups[tuple(k[a] for a in pb)].append((tuple(k[a] for a in rest), v))
        new = {}
        for k, v in acc.items():
            g = groups.get(tuple(k[a] for a in pa))
            if not g:
                continue
            for r, w in g:
                kk = k + r
                x = v * w
                y = new.get(kk)
                new[kk] = x if y is None else y + x
        labels = labels + [lb[a] for a in rest]
        acc = {k: v for k, v in new.items() if v}
        labels, acc = _sum_out(labels, acc, needed(i + 1))
    if sorted(labels) != sorted(out):
        missing = set(out) - set(labels)
        raise ValueError("output labels %s not produced" % missing)
    pos = [labels.index(c) for c in out]
    d = {tuple(k[a] for a in pos): v for k, v in acc.items()}
    return Tensor._raw(n, len(out), d)


def outer(a, b):
    la = "abcdefghijklm"[:a.rank]
    lb = "nopqrstuvwxyz"[:b.rank]
    return einsum("%s,%s->%s%s" % (la, lb, la, lb), a, b)


# ---------------------------------------------------------------- metric

def _solve_inverse(g):
    n = len(g)
    a = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(g)]
    det = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return None, ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det = det * p
        pinv = p.inv()
        a[c] = [x * pinv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a], det


def _signature(g):
    """Congruence diagonalization, exact; returns (p, q)."""
    n = len(g)
    a = [list(r) for r in g]
    signs = []
    idx = list(range(n))
    while idx:
        piv = next((i for i in idx if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j so the diagonal becomes 2 a_ij != 0 (or use e_i - e_j)
            for s in (ONE, -ONE):
                if a[i][i] + a[j][j] + 2 * s * a[i][j]:
                    break
            for k in range(n):
                a[i][k] = a[i][k] + s * a[j][k]
            for k in range(n):
                a[k][i] = a[k][i] + s * a[k][j]
            piv = i
        p = a[piv][piv]
        signs.append(p.sign())
        for r in idx:
            if r != piv and a[r][piv]:
                f = a[r][piv] / p
                for k in range(n):
                    a[r][k] = a[r][k] - f * a[piv][k]
                for k in range(n):
                    a[k][r] = a[k][r] - f * a[k][piv]
        idx.remove(piv)
    return signs.count(1), signs.count(-1)


class Metric:
    """Constant non-degenerate symmetric bilinear form."""

    def __init__(self, g):
        g = [[Scalar.coerce(x) for x in row] for row in g]
        n = len(g)
        for i in range(n):
            if len(g[i]) != n:
                raise ValueError("metric must be square")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("metric must be symmetric")
        inv, det = _solve_inverse(g)
        if inv is None:
            raise ValueError("metric is degenerate")
        self.n = n
        self.g = g
        self.inv = inv
        self.det = det
        self.diagonal = all(not g[i][j] for i in range(n) for j in range(n) if i != j)
        self._sig = None
        self.lower_t = Tensor(n, 2, {(i, j): g[i][j] for i in range(n) for j in range(n)})
        self.upper_t = Tensor(n, 2, {(i, j): inv[i][j] for i in range(n) for j in range(n)})

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries):
        n = len(entries)
        return cls([[Scalar.coerce(entries[i]) if i == j else ZERO for j in range(n)] for i in range(n)])

    @property
    def signature(self):
        if self._sig is None:
            self._sig = _signature(self.g)
        return self._sig

    def scaled(self, c):
        c = Scalar.coerce(c)
        return Metric([[x * c for x in row] for row in self.g])

    def block(self, other):
        n, m = self.n, other.n
        g = [[ZERO] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                g[i][j] = self.g[i][j]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = other.g[i][j]
        return Metric(g)

    def as_symtensor(self):
        return SymTensor(self.n, 2, {(i, j): self.g[i][j] for i in range(self.n)
                                      for j in range(i, self.n)})

    def pair(self, x, y):
        """h(x, y) for vectors given as lists."""
        acc = ZERO
        for i in range(self.n):
            if not x[i]:
                continue
            for j in range(self.n):
                if self.g[i][j] and y[j]:
                    acc = acc + x[i] * self.g[i][j] * y[j]
        return acc

    def lower_vec(self, x):
        return [sum((self.g[i][j] * x[j] for j in range(self.n) if x[j]), ZERO) for i in range(self.n)]

    def raise_vec(self, x):
        return [sum((self.inv[i][j] * x[j] for j in range(self.n) if x[j]), ZERO) for i in range(self.n)]

    def __eq__(self, o):
        return isinstance(o, Metric) and self.g == o.g

    __hash__ = None

    def quadratic(self):
        """E(x) = h_ij x^i x^j as a Polynomial."""
        xs = Polynomial.variables(self.n)
        out = Polynomial(self.n)
        for i in range(self.n):
            for j in range(self.n):
                if self.g[i][j]:
                    out = out + xs[i] * xs[j] * self.g[i][j]
        return out


def raise_lower(t, h, pattern):
    """pattern has one char per slot: 'u' raise with h^ij, 'l' lower with h_ij, '.' keep."""
    if isinstance(t, SymTensor):
        t = t.to_tensor()
    if len(pattern) != t.rank:
        raise ValueError("pattern length must equal rank")
    for a, c in enumerate(pattern):
        if c == ".":
            continue
        m = h.upper_t if c == "u" else h.lower_t
        if h.diagonal:
            diag = [m[(i, i)] for i in range(h.n)]
            d = {}
            for k, v in t.d.items():
                d[k] = v * diag[k[a]]
            t = Tensor._raw(t.n, t.rank, d)
            continue
        labs = "abcdefghijkl"[:t.rank]
        src = labs.replace(labs[a], "z")
        t = einsum("%s,z%s->%s" % (src, labs[a], labs), t, m)
    return t


def norm2(t, h):
    """Full h-contraction |t|^2 of a covariant tensor."""
    if isinstance(t, SymTensor):
        t = t.to_tensor()
    if h.diagonal:
        diag = [h.inv[i][i] for i in range(h.n)]
        acc = ZERO
        for k, v in t.d.items():
            w = v * v
            for i in k:
                w = w * diag[i]
            acc = acc + w
        return acc
    up = raise_lower(t, h, "u" * t.rank)
    acc = ZERO
    for k, v in t.d.items():
        w = up.d.get(k)
        if w is not None:
            acc = acc + v * w
    return acc


def inner(s, t, h):
    if isinstance(s, SymTensor):
        s = s.to_tensor()
    up = raise_lower(t, h, "u" * t.rank)
    acc = ZERO
    for k, v in s.d.items():
        w = up.d.get(k)
        if w is not None:
            acc = acc + v * w
    return acc


# ---------------------------------------------------------------- symmetric tensors

class SymTensor:
    """Totally symmetric covariant tensor, stored on sorted multi-indices."""
    __slots__ = ("n", "k", "c")

    def __init__(self, n, k, comps=None):
        self.n = n
        self.k = k
        self.c = {}
        if comps:
            for idx, v in comps.items():
                idx = tuple(sorted(idx))
                if len(idx) != k or any(i < 0 or i >= n for i in idx):
                    raise ValueError("bad multi-index %s" % (idx,))
                v = v if isinstance(v, (Scalar, Polynomial)) else Scalar.coerce(v)
                if v:
                    self.c[idx] = v

    @classmethod
    def _raw(cls, n, k, c):
        s = object.__new__(cls)
        s.n, s.k, s.c = n, k, c
        return s

    @property
    def rank(self):
        return self.k

    def __getitem__(self, idx):
        return self.c.get(tuple(sorted(idx)), ZERO)

    def __bool__(self):
        return bool(self.c)

    def is_zero(self):
        return not self.c

    def __eq__(self, o):
        if isinstance(o, SymTensor):
            return self.n == o.n and self.k == o.k and self.c == o.c
        if isinstance(o, Tensor):
            return self.to_tensor() == o
        return NotImplemented

    __hash__ = None

    def __add__(self, o):
        if not isinstance(o, SymTensor) or o.n != self.n or o.k != self.k:
            raise ValueError("SymTensor shape mismatch")
        c = dict(self.c)
        for i, v in o.c.items():
            w = c.get(i)
            w = v if w is None else w + v
            if w:
                c[i] = w
            else:
                c.pop(i, None)
        return SymTensor._raw(self.n, self.k, c)

    def __neg__(self):
        return SymTensor._raw(self.n, self.k, {i: -v for i, v in self.c.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, s):
        if isinstance(s, (SymTensor, Tensor)):
            return NotImplemented
        if isinstance(s, (int, Fraction)):
            s = Scalar(s)
        c = {}
        for i, v in self.c.items():
            w = v * s
            if w:
                c[i] = w
        return SymTensor._raw(self.n, self.k, c)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (ONE / Scalar.coerce(s))

    def to_tensor(self):
        d = {}
        for idx, v in self.c.items():
            for p in distinct_perms(idx):
                d[p] = v
        return Tensor._raw(self.n, self.k, d)

    @classmethod
    def from_tensor(cls, t, check=True):
        """Symmetric part of t (exact symmetrization); check=True demands t symmetric."""
        if check:
            c = {}
            for k, v in t.d.items():
                s = tuple(sorted(k))
                if s == k:
                    c[k] = v
            out = cls._raw(t.n, t.rank, c)
            if out.to_tensor() != t:
                raise ValueError("tensor is not symmetric")
            return out
        return symmetric_part(t)

    def __repr__(self):
        return "SymTensor(n=%d, k=%d, %s)" % (self.n, self.k,
                                              {i: str(v) for i, v in sorted(self.c.items())})

    def to_json(self):
        return {"n": self.n, "rank": self.k,
                "comps": [{"idx": list(i), "val": str(v)} for i, v in sorted(self.c.items())]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["n"], obj["rank"], {tuple(e["idx"]): Scalar.coerce(str(e["val"]))
                                           for e in obj["comps"]})


def symmetric_part(t):
    """SymTensor with (Sym t)_I = (prod m! / r!) * sum of t over arrangements of I."""
    r = t.rank
    acc = {}
    for k, v in t.d.items():
        s = tuple(sorted(k))
        w = acc.get(s)
        acc[s] = v if w is None else w + v
    c = {}
    rf = factorial(r)
    for s, v in acc.items():
        if v:
            c[s] = v * Fraction(_multi_fact(s), rf)
    return SymTensor._raw(t.n, r, c)


def _check_dims(a, b):
    if a.n != b.n:
        raise ValueError("dimension mismatch: %d vs %d" % (a.n, b.n))


def sym_product(a, b):
    _check_dims(a, b)
    k, l = a.k, b.k
    denom = comb(k + l, k)
    c = {}
    for J, x in a.c.items():
        cj = _counts(J)
        for K, y in b.c.items():
            I = tuple(sorted(J + K))
            ci = _counts(I)
            w = 1
            for idx, m in cj.items():
                w *= comb(ci[idx], m)
            v = x * y * Fraction(w, denom)
            z = c.get(I)
            c[I] = v if z is None else z + v
    return SymTensor._raw(a.n, k + l, {i: v for i, v in c.items() if v})


def _pairs_removed(K):
    """Distinct (rest, p, q) with p <= q removed from sorted multi-index K."""
    seen = set()
    for a in range(len(K)):
        for b in range(a + 1, len(K)):
            p, q = K[a], K[b]
            if (p, q) in seen:
                continue
            seen.add((p, q))
            rest = K[:a] + K[a + 1:b] + K[b + 1:]
            yield rest, p, q


def trace(w, h):
    if w.k < 2:
        raise ValueError("trace needs rank >= 2")
    _check_dims(w, h)
    c = {}
    for K, v in w.c.items():
        for rest, p, q in _pairs_removed(K):
            f = h.inv[p][q] if p == q else h.inv[p][q] + h.inv[q][p]
            if not f:
                continue
            x = v * f
            z = c.get(rest)
            c[rest] = x if z is None else z + x
    return SymTensor._raw(w.n, w.k - 2, {i: v for i, v in c.items() if v})


def h_power(h, i):
    out = SymTensor._raw(h.n, 0, {(): ONE})
    hs = h.as_symtensor()
    for _ in range(i):
        out = sym_product(out, hs)
    return out


def h_mul(w, h):
    """h(w) = h (.) w."""
    return sym_product(h.as_symtensor(), w)


def trace_free(w, h):
    """Trace-free part. Correction terms alternate in sign: sum_i (-1)^i c_i h^i tr^i w."""
    n, k = w.n, w.k
    out = w
    tr = w
    for i in range(1, k // 2 + 1):
        tr = trace(tr, h)
        if not tr:
            break
        num = 1
        for a in range(2 * i):
            num *= k - a
        den = 2 ** i * factorial(i)
        for a in range(1, i + 1):
            den *= n + 2 * (k - a - 1)
        coef = Scalar(Fraction(num, den) * (-1) ** i)
        out = out + sym_product(h_power(h, i), tr) * coef
    return out


def is_trace_free(w, h):
    return w.k < 2 or not trace(w, h)


def con(a, b, j, h):
    """j-fold symmetrized contraction con^j(a, b)."""
    _check_dims(a, b)
    if not 0 <= j <= min(a.k, b.k):
        raise ValueError("contraction order out of range")
    if j == 0:
        return sym_product(a, b)
    ta = a.to_tensor()
    tb = raise_lower(b.to_tensor(), h, "u" * j + "." * (b.k - j))
    qs = "pqrstu"[:j]
    ia = "abcdefg"[:a.k - j]
    ib = "hijklmn"[:b.k - j]
    t = einsum("%s%s,%s%s->%s%s" % (qs, ia, qs, ib, ia, ib), ta, tb)
    return symmetric_part(t)


con_contraction = con


def cartan_product(a, b, h):
    if not (is_trace_free(a, h) and is_trace_free(b, h)):
        raise ValueError("cartan product needs trace-free inputs")
    return trace_free(sym_product(a, b), h)


def covector_cartan_formula(X, w, h):
    """X (*) w via the explicit first-order formula (X covector, w trace-free)."""
    k, n = w.k, w.n
    first = sym_product(X, w)
    if k == 0:
        return first
    Xu = h.raise_vec([X[(i,)] for i in range(n)])
    wt = w.to_tensor()
    lab = "abcdefgh"[:k - 1]
    Xt = Tensor(n, 1, {(i,): Xu[i] for i in range(n) if Xu[i]})
    wx = einsum("%sp,p->%s" % (lab, lab), wt, Xt)
    second = sym_product(h.as_symtensor(), symmetric_part(wx))
    return first - second * Fraction(k, n + 2 * (k - 1))


def tensor_from_poly(P):
    if not P.is_homogeneous():
        raise ValueError("polynomial is not homogeneous")
    k = P.degree()
    if k < 0:
        k = 0
    c = {}
    kf = factorial(k)
    for e, v in P.t.items():
        idx = tuple(i for i, m in enumerate(e) for _ in range(m))
        mf = 1
        for m in e:
            mf *= factorial(m)
        c[idx] = v * Fraction(mf, kf)
    return SymTensor._raw(P.n, k, c)


def poly_from_tensor(w):
    t = {}
    kf = factorial(w.k)
    for idx, v in w.c.items():
        e = [0] * w.n
        for i in idx:
            e[i] += 1
        mf = 1
        for m in e:
            mf *= factorial(m)
        t[tuple(e)] = v * Fraction(kf, mf)
    return Polynomial._raw(w.n, t)


def covector(vals):
    n = len(vals)
    return SymTensor(n, 1, {(i,): Scalar.coerce(v) for i, v in enumerate(vals)})
