"""Multivariate polynomials with Scalar coefficients."""
from fractions import Fraction

from .scalar import Scalar


def _sc(c):
    return c if isinstance(c, Scalar) else Scalar.coerce(c)


class Polynomial:
    __slots__ = ("n", "t")

    def __init__(self, n, terms=None):
        self.n = n
        self.t = {}
        if terms:
            for e, c in terms.items():
                c = _sc(c)
                if c:
                    e = tuple(e)
                    if len(e) != n:
                        raise ValueError("exponent length %d != %d" % (len(e), n))
                    self.t[e] = self.t.get(e, Scalar()) + c
            self.t = {e: c for e, c in self.t.items() if c}

    @classmethod
    def _raw(cls, n, t):
        p = object.__new__(cls)
        p.n = n
        p.t = t
        return p

    @classmethod
    def const(cls, n, c):
        c = _sc(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n, i, c=1):
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): c})

    @classmethod
    def variables(cls, n):
        return [cls.var(n, i) for i in range(n)]

    def copy(self):
        return Polynomial._raw(self.n, dict(self.t))

    def __bool__(self):
        return bool(self.t)

    def is_zero(self):
        return not self.t

    def __eq__(self, o):
        if isinstance(o, Polynomial):
            return self.n == o.n and self.t == o.t
        if isinstance(o, (int, Fraction, Scalar)):
            o = _sc(o)
            if not o:
                return not self.t
            return self.t == {(0,) * self.n: o}
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.t.items())))

    def _lift(self, o):
        if isinstance(o, Polynomial):
            if o.n != self.n:
                raise ValueError("variable count mismatch")
            return o
        if isinstance(o, (int, Fraction, Scalar)):
            return Polynomial.const(self.n, o)
        return None

    def __add__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        t = dict(self.t)
        for e, c in o.t.items():
            v = t.get(e)
            v = c if v is None else v + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial._raw(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, {e: -c for e, c in self.t.items()})

    def __sub__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, Scalar)):
            o = _sc(o)
            if not o:
                return Polynomial._raw(self.n, {})
            return Polynomial._raw(self.n, {e: c * o for e, c in self.t.items()})
        if not isinstance(o, Polynomial):
            return NotImplemented
        t = {}
        for e1, c1 in self.t.items():
            for e2, c2 in o.t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return Polynomial._raw(self.n, t)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _sc(o)
        return self * o.inv()

    def __pow__(self, k):
        r = Polynomial.const(self.n, 1)
        for _ in range(k):
            r = r * self
        return r

    def degree(self):
        return max((sum(e) for e in self.t), default=-1)

    def is_homogeneous(self, d=None):
        ds = {sum(e) for e in self.t}
        if not ds:
            return True
        return len(ds) == 1 and (d is None or d in ds)

    def homogeneous_part(self, d):
        return Polynomial._raw(self.n, {e: c for e, c in self.t.items() if sum(e) == d})

    def diff(self, i):
        t = {}
        for e, c in self.t.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return Polynomial._raw(self.n, t)

    def gradient(self):
        return [self.diff(i) for i in range(self.n)]

    def hessian(self):
        g = self.gradient()
        return [[g[i].diff(j) for j in range(self.n)] for i in range(self.n)]

    def laplacian(self, hinv=None):
        """h^{ij} d_i d_j; hinv defaults to the identity."""
        out = Polynomial._raw(self.n, {})
        for i in range(self.n):
            di = self.diff(i)
            if hinv is None:
                out = out + di.diff(i)
            else:
                for j in range(self.n):
                    if hinv[i][j]:
                        out = out + di.diff(j) * hinv[i][j]
        return out

    def __call__(self, pt):
        return self.evaluate(pt)

    def evaluate(self, pt):
        if all(isinstance(x, float) for x in pt):
            return sum(float(c) * _mono(e, pt) for e, c in self.t.items())
        acc = Scalar()
        for e, c in self.t.items():
            m = c
            for x, k in zip(pt, e):
                if k:
                    m = m * (_sc(x) ** k)
            acc = acc + m
        return acc

    def subs_linear(self, images):
        """Substitute x_i -> images[i] (Polynomials, any common variable count)."""
        m = images[0].n
        out = Polynomial._raw(m, {})
        pw = [[Polynomial.const(m, 1)] for _ in range(self.n)]
        for e, c in self.t.items():
            term = Polynomial.const(m, c)
            for i, k in enumerate(e):
                while len(pw[i]) <= k:
                    pw[i].append(pw[i][-1] * images[i])
                if k:
                    term = term * pw[i][k]
            out = out + term
        return out

    def extend_vars(self, m, offset=0):
        """Same polynomial viewed in m variables, old x_i becomes x_{i+offset}."""
        t = {}
        for e, c in self.t.items():
            f = [0] * m
            f[offset:offset + self.n] = e
            t[tuple(f)] = c
        return Polynomial._raw(m, t)

    def coefficients(self):
        return sorted(self.t.items(), reverse=True)

    def __str__(self):
        if not self.t:
            return "0"
        parts = []
        for e, c in sorted(self.t.items(), reverse=True):
            mono = "*".join(("x%d" % (i + 1)) + ("^%d" % k if k > 1 else "")
                            for i, k in enumerate(e) if k)
            cs = str(c)
            if not mono:
                parts.append(cs if len(c.t) == 1 else "(%s)" % cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(("%s*%s" if len(c.t) == 1 else "(%s)*%s") % (cs, mono))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out.replace("+ -", "- ")

    __repr__ = __str__

    def to_float_fn(self):
        items = [(e, float(c)) for e, c in self.t.items()]

        def f(pt):
            return sum(c * _mono(e, pt) for e, c in items)
        return f


def _mono(e, pt):
    r = 1.0
    for x, k in zip(pt, e):
        if k:
            r *= x ** k
    return r


def from_expr(text, nvars=None):
    """Parse text like 'x1^3 - 3*x1*x2^2 + sqrt(2)*x3' (sympy does the parsing)."""
    import sympy
    expr = sympy.sympify(text.replace("^", "**"))
    syms = sorted(expr.free_symbols, key=lambda s: _varindex(s.name))
    n = nvars or max((_varindex(s.name) for s in syms), default=0)
    gens = sympy.symbols("x1:%d" % (n + 1))
    P = sympy.Poly(sympy.expand(expr), *gens)
    terms = {}
    for mon, coef in P.terms():
        terms[mon] = sympy_to_scalar(coef)
    return Polynomial(n, terms)


def _varindex(name):
    if not name.startswith("x") or not name[1:].isdigit():
        raise ValueError("variables must be named x1, x2, ... (got %s)" % name)
    return int(name[1:])


def sympy_to_scalar(c):
    import sympy
    c = sympy.nsimplify(c) if c.is_Float else c
    acc = Scalar()
    for term in sympy.Add.make_args(sympy.expand(c)):
        coeff, rest = term.as_coeff_Mul()
        q = Fraction(int(sympy.numer(coeff)), int(sympy.denom(coeff)))
        s = Scalar(q)
        for f in sympy.Mul.make_args(rest):
            if f == 1:
                continue
            b, ex = f.as_base_exp()
            if b.is_Integer and ex == sympy.Rational(1, 2):
                s = s * Scalar.sqrt(int(b))
            elif b.is_Integer and ex == sympy.Rational(-1, 2):
                s = s * Scalar.sqrt(Fraction(1, int(b)))
            else:
                raise ValueError("coefficient %s is outside the multi-quadratic field" % c)
        acc = acc + s
    return acc
