"""Exact arithmetic in the real multi-quadratic extension Q(sqrt 2, sqrt 3, ...)."""
from fractions import Fraction
from functools import lru_cache
from math import gcd
import re

import mpmath
from mpmath.ctx_iv import MPIntervalContext


@lru_cache(maxsize=4096)
def squarefree_split(m):
    """m = s*s*r with r squarefree, returns (s, r)."""
    if m <= 0:
        raise ValueError("need a positive integer")
    s, r, p = 1, 1, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1
    return s, r * m


@lru_cache(maxsize=4096)
def _primes(m):
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def _q(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(type(x))


class Scalar:
    """Element sum_m c_m sqrt(m), m squarefree; key 1 is the rational part."""
    __slots__ = ("t", "_h")

    def __init__(self, terms=None):
        if terms is None:
            self.t = {}
        elif isinstance(terms, dict):
            self.t = {m: c for m, c in terms.items() if c}
        else:
            q = _q(terms)
            self.t = {1: q} if q else {}
        self._h = None

    @classmethod
    def _raw(cls, t):
        s = object.__new__(cls)
        s.t = t
        s._h = None
        return s

    @staticmethod
    def coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(x)
        if isinstance(x, str):
            return Scalar.parse(x)
        raise TypeError("cannot make a Scalar from %r" % (x,))

    @staticmethod
    def sqrt(m):
        return sqrt_rational(m)

    # --- predicates
    def is_zero(self):
        return not self.t

    def is_rational(self):
        return not self.t or (len(self.t) == 1 and 1 in self.t)

    def rational(self):
        if not self.is_rational():
            raise ValueError("%s is irrational" % self)
        return self.t.get(1, Fraction(0))

    def radicands(self):
        return sorted(self.t)

    def __bool__(self):
        return bool(self.t)

    def __eq__(self, o):
        if isinstance(o, Scalar):
            return self.t == o.t
        if isinstance(o, (int, Fraction)):
            return self.is_rational() and self.t.get(1, 0) == o
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            if self.is_rational():
                self._h = hash(self.t.get(1, 0))
            else:
                self._h = hash(frozenset(self.t.items()))
        return self._h

    # --- arithmetic
    def __add__(self, o):
        if not isinstance(o, Scalar):
            if isinstance(o, (int, Fraction)):
                o = Scalar(o)
            else:
                return NotImplemented
        if not o.t:
            return self
        if not self.t:
            return o
        t = dict(self.t)
        for m, c in o.t.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Scalar._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({m: -c for m, c in self.t.items()})

    def __pos__(self):
        return self

    def __sub__(self, o):
        if not isinstance(o, Scalar):
            if isinstance(o, (int, Fraction)):
                o = Scalar(o)
            else:
                return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        return Scalar.coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, Scalar):
            if isinstance(o, (int, Fraction)):
                if not o:
                    return Scalar._raw({})
                return Scalar._raw({m: c * o for m, c in self.t.items()})
            return NotImplemented
        a, b = self.t, o.t
        if not a or not b:
            return Scalar._raw({})
        if len(b) == 1 and 1 in b:
            q = b[1]
            return Scalar._raw({m: c * q for m, c in a.items()})
        if len(a) == 1 and 1 in a:
            q = a[1]
            return Scalar._raw({m: c * q for m, c in b.items()})
        t = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                g = gcd(m1, m2)
                m = (m1 // g) * (m2 // g)
                v = t.get(m, 0) + c1 * c2 * g
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return Scalar._raw(t)

    __rmul__ = __mul__

    def conj(self, p):
        """Galois conjugate flipping sqrt(p), p prime."""
        return Scalar._raw({m: (-c if m % p == 0 else c) for m, c in self.t.items()})

    def inv(self):
        if not self.t:
            raise ZeroDivisionError("Scalar division by zero")
        if self.is_rational():
            return Scalar._raw({1: 1 / self.t[1]})
        num = Scalar._raw({1: Fraction(1)})
        den = self
        # each conjugation kills one prime from the denominator
        while not den.is_rational():
            p = max(pp for m in den.t for pp in _primes(m))
            c = den.conj(p)
            num = num * c
            den = den * c
        return num * (1 / den.t[1])

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            if not o:
                raise ZeroDivisionError("Scalar division by zero")
            return self * (1 / Fraction(o))
        if not isinstance(o, Scalar):
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, o):
        return Scalar.coerce(o) * self.inv()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inv() ** (-e)
        r, b = Scalar(1), self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    # --- numerics
    def to_mpf(self, dps=30):
        with mpmath.workdps(dps):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(m)
                               for m, c in self.t.items())

    def __float__(self):
        return float(sum(float(c) * (m ** 0.5) for m, c in self.t.items()))

    def sign(self):
        if not self.t:
            return 0
        if self.is_rational():
            return 1 if self.t[1] > 0 else -1
        ctx = MPIntervalContext()  # private context, so threads do not share precision
        prec = 60
        while True:
            ctx.prec = prec
            v = ctx.mpf(0)
            for m, c in self.t.items():
                v += ctx.mpf(c.numerator) / c.denominator * ctx.sqrt(m)
            if v.a > 0:
                return 1
            if v.b < 0:
                return -1
            prec *= 2

    def __lt__(self, o):
        return (self - Scalar.coerce(o)).sign() < 0

    def __le__(self, o):
        return (self - Scalar.coerce(o)).sign() <= 0

    def __gt__(self, o):
        return (self - Scalar.coerce(o)).sign() > 0

    def __ge__(self, o):
        return (self - Scalar.coerce(o)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # --- text
    def __str__(self):
        if not self.t:
            return "0"
        parts = []
        for m in sorted(self.t):
            c = self.t[m]
            if m == 1:
                s = str(c)
            elif c == 1:
                s = "sqrt(%d)" % m
            elif c == -1:
                s = "-sqrt(%d)" % m
            else:
                s = "%s*sqrt(%d)" % (c, m)
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += s if s.startswith("-") else "+" + s
        return out

    def __repr__(self):
        return "Scalar(%s)" % self

    _TERM = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*(?:\*\s*sqrt\((\d+)\))?|sqrt\((\d+)\))")

    @classmethod
    def parse(cls, text):
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Scalar literal")
        pos, acc = 0, Scalar()
        while pos < len(s):
            mt = cls._TERM.match(s, pos)
            if not mt or mt.end() == pos or (pos > 0 and not mt.group(1)):
                raise ValueError("bad Scalar literal %r" % text)
            sg = -1 if mt.group(1) == "-" else 1
            if mt.group(4):
                term = sqrt_rational(int(mt.group(4)))
            else:
                term = Scalar(Fraction(mt.group(2)))
                if mt.group(3):
                    term = term * sqrt_rational(int(mt.group(3)))
            acc = acc + term * sg
            pos = mt.end()
        return acc


ZERO = Scalar()
ONE = Scalar(1)


def sqrt_rational(q):
    q = Fraction(q) if not isinstance(q, Scalar) else q.rational()
    if q < 0:
        raise ValueError("sqrt of a negative rational")
    if q == 0:
        return Scalar()
    a, b = q.numerator, q.denominator
    s, r = squarefree_split(a * b)
    return Scalar._raw({r: Fraction(s, b)})


def S(x):
    """Shorthand constructor: ints, Fractions, literal strings."""
    return Scalar.coerce(x)


def field_arith(a, b, op):
    a, b = Scalar.coerce(a), Scalar.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(op)


def sign(a):
    v = Scalar.coerce(a).sign()
    return {-1: "negative", 0: "zero", 1: "positive"}[v]

