"""Commutative Codazzi algebras and the Einstein cubic polynomials attached to them."""
from fractions import Fraction
from itertools import permutations

from .scalar import Scalar, ZERO, ONE, sqrt_rational
from .poly import Polynomial
from .symtensor import (Tensor, SymTensor, Metric, einsum, tensor_from_poly, poly_from_tensor,
                        trace, norm2, perm_sign)


def _vec(x, n):
    x = [Scalar.coerce(v) for v in x]
    if len(x) != n:
        raise ValueError("vector of length %d expected" % n)
    return x


def unit(n, i):
    return [ONE if j == i else ZERO for j in range(n)]


class CodazziAlgebra:
    """(R^n, o, h) with mu_ijk = h(e_i o e_j, e_k) completely symmetric."""

    def __init__(self, mu, h, name=None):
        if not isinstance(mu, SymTensor) or mu.k != 3:
            raise ValueError("mu must be a rank-3 SymTensor")
        if mu.n != h.n:
            raise ValueError("dimension mismatch")
        self.n, self.h, self.mu = h.n, h, mu
        self.name = name
        self._mixed = None

    @property
    def mixed(self):
        """mu_ij^k."""
        if self._mixed is None:
            self._mixed = einsum("ijp,pk->ijk", self.mu, self.h.upper_t)
        return self._mixed

    def mul(self, x, y):
        n = self.n
        x, y = _vec(x, n), _vec(y, n)
        out = [ZERO] * n
        for (i, j, k), v in self.mixed.items():
            if x[i] and y[j]:
                out[k] = out[k] + x[i] * y[j] * v
        return out

    def product_table(self):
        """{(i, j): vector} for i <= j, nonzero entries only."""
        tab = {}
        for i in range(self.n):
            for j in range(i, self.n):
                v = self.mul(unit(self.n, i), unit(self.n, j))
                if any(v):
                    tab[(i, j)] = v
        return tab

    def to_cubic(self):
        """P = (1/6) mu_ijk x^i x^j x^k."""
        return poly_from_tensor(self.mu) * Fraction(1, 6)

    def scaled_metric(self, t):
        """Same multiplication, metric t*h (mu_ijk scales by t)."""
        t = Scalar.coerce(t)
        return CodazziAlgebra(self.mu * t, self.h.scaled(t), self.name)

    def __repr__(self):
        return "CodazziAlgebra(%s, n=%d)" % (self.name or "?", self.n)


def from_cubic(P, h=None, name=None):
    if not P.is_homogeneous(3):
        raise ValueError("need a homogeneous cubic")
    h = h or Metric.identity(P.n)
    mu = tensor_from_poly(P) * 6 if P else SymTensor(P.n, 3)
    if mu.k != 3:
        mu = SymTensor(P.n, 3)
    return CodazziAlgebra(mu, h, name)


def from_table(n, table, h=None, name=None):
    """Algebra from products {(i, j): vector} (0-based); checks h-invariance."""
    h = h or Metric.identity(n)
    mixed = {}
    for (i, j), v in table.items():
        for k, c in enumerate(v):
            c = Scalar.coerce(c)
            if c:
                mixed[(i, j, k)] = c
                mixed[(j, i, k)] = c
    low = einsum("ijp,pk->ijk", Tensor(n, 3, mixed), h.lower_t)
    return CodazziAlgebra(SymTensor.from_tensor(low), h, name)


def trace_form(A):
    m = A.mixed
    t = einsum("ipq,jqp->ij", m, m)
    return SymTensor.from_tensor(t)


def is_special(A):
    a = not trace(A.mu, A.h)
    b = not A.to_cubic().laplacian(A.h.inv)
    if a != b:
        raise AssertionError("special-ness tests disagree")
    return a


def is_einstein(A):
    tau = trace_form(A)
    kappa = norm2(A.mu, A.h) / A.n
    if tau == A.h.as_symtensor() * kappa:
        return kappa
    return None


def associator_tensor(A):
    """mu_ijk^l = mu_pj^l mu_ik^p - mu_ip^l mu_kj^p, so [x,y,z]^l = x^i z^j y^k mu_ijk^l."""
    m = A.mixed
    return einsum("ikp,pjl->ijkl", m, m) - einsum("kjp,ipl->ijkl", m, m)


def associator_lowered(A):
    return einsum("ijkp,pl->ijkl", associator_tensor(A), A.h.lower_t)


def associator(A, x, y, z):
    """[x, y, z] = (x o y) o z - x o (y o z)."""
    a = A.mul(A.mul(x, y), z)
    b = A.mul(x, A.mul(y, z))
    return [p - q for p, q in zip(a, b)]


def associator_from_tensor(A, x, y, z):
    T = associator_tensor(A)
    out = [ZERO] * A.n
    for (i, j, k, l), v in T.items():
        if x[i] and z[j] and y[k]:
            out[l] = out[l] + x[i] * z[j] * y[k] * v
    return out


def is_associative(A):
    return not associator_tensor(A)


def is_conformally_associative(A):
    from .curvature import weyl_part
    return not weyl_part(associator_lowered(A), A.h)


def probe(A, x, y, z, v):
    """(lhs, rhs) = (h([x,z,y], v), kappa/(n-1) (h(x,v)h(y,z) - h(y,v)h(x,z)))."""
    if A.n < 2:
        raise ValueError("probe needs n >= 2")
    kappa = is_einstein(A)
    if kappa is None:
        raise ValueError("probe needs an Einstein algebra")
    h = A.h
    x, y, z, v = (_vec(w, A.n) for w in (x, y, z, v))
    lhs = h.pair(A.mul(x, z), A.mul(y, v)) - h.pair(A.mul(y, z), A.mul(x, v))
    check = h.pair(associator(A, x, z, y), v)
    if check != lhs:
        raise AssertionError("probe routes disagree")
    rhs = kappa / (A.n - 1) * (h.pair(x, v) * h.pair(y, z) - h.pair(y, v) * h.pair(x, z))
    return lhs, rhs


def normalize_to_n_minus_1(A):
    """Rescale h so the Einstein constant becomes n-1 (multiplication unchanged)."""
    kappa = is_einstein(A)
    if kappa is None or not kappa:
        raise ValueError("need a proper Einstein algebra")
    return A.scaled_metric(kappa / (A.n - 1))


def unitalize(A):
    """(x,l)o(y,m) = (x o y + l y + m x, h(x,y) + l m), hat h = h + l m."""
    n = A.n
    N = n + 1
    c = dict(A.mu.c)
    for i in range(n):
        for j in range(i, n):
            if A.h.g[i][j]:
                c[(i, j, n)] = A.h.g[i][j]
    c[(n, n, n)] = ONE
    g = [[A.h.g[i][j] if i < n and j < n else ZERO for j in range(N)] for i in range(N)]
    g[n][n] = ONE
    return CodazziAlgebra(SymTensor(N, 3, c), Metric(g), (A.name or "A") + "^")


def extend(A, kappa_n, kappa_n1):
    """Dimension n+1 extension with Einstein constant kappa_n1 (A special Einstein kappa_n)."""
    n = A.n
    kappa_n, kappa_n1 = Scalar.coerce(kappa_n), Scalar.coerce(kappa_n1)
    k = is_einstein(A)
    if k is None or k != kappa_n or kappa_n.sign() <= 0:
        raise ValueError("algebra is not Einstein with the given constant")
    if not is_special(A):
        raise ValueError("algebra is not special")
    if not kappa_n1 > n:
        raise ValueError("need kappa_{n+1} > n")
    a = sqrt_rational(Fraction(kappa_n1.rational()) / ((n + 1) * n))
    b = sqrt_rational(Fraction((n + 2) * (n - 1)) / kappa_n.rational())
    c = {}
    for idx, v in A.mu.c.items():
        c[idx] = v * a * b
    for i in range(n):
        for j in range(i, n):
            if A.h.g[i][j]:
                c[(i, j, n)] = -a * A.h.g[i][j]
    c[(n, n, n)] = a * n
    g = [[A.h.g[i][j] if i < n and j < n else ZERO for j in range(n + 1)] for i in range(n + 1)]
    g[n][n] = ONE
    out = CodazziAlgebra(SymTensor(n + 1, 3, c), Metric(g), "ext(%s)" % (A.name or "A"))
    if is_einstein(out) != kappa_n1 or not is_special(out):
        raise AssertionError("extension failed its postcondition")
    return out


# ---------------------------------------------------------------- Lie algebras

class LieAlgebraData:
    """Structure constants [e_i, e_j] = c_ij^k e_k."""

    def __init__(self, n, c, name=None, basis_matrices=None):
        d = {}
        for (i, j, k), v in c.items():
            v = Scalar.coerce(v)
            if not v:
                continue
            if i == j:
                raise ValueError("c_ii^k must vanish")
            d[(i, j, k)] = v
        for (i, j, k), v in list(d.items()):
            if d.get((j, i, k), ZERO) != -v:
                raise ValueError("structure constants not antisymmetric at %s" % ((i, j, k),))
        self.n, self.name = n, name
        self.c = Tensor(n, 3, d)
        self.basis_matrices = basis_matrices
        if not self.jacobi_holds():
            raise ValueError("Jacobi identity fails")

    @classmethod
    def from_brackets(cls, n, brackets, name=None, basis_matrices=None):
        """brackets {(i, j): vector} for i < j."""
        c = {}
        for (i, j), v in brackets.items():
            for k, x in enumerate(v):
                x = Scalar.coerce(x)
                if x:
                    c[(i, j, k)] = x
                    c[(j, i, k)] = -x
        return cls(n, c, name, basis_matrices)

    def bracket(self, x, y):
        out = [ZERO] * self.n
        for (i, j, k), v in self.c.items():
            if x[i] and y[j]:
                out[k] = out[k] + x[i] * y[j] * v
        return out

    def jacobi_holds(self):
        c = self.c
        t = einsum("ijp,kpl->ijkl", c, c)
        cyc = t + t.permute([1, 2, 0, 3]) + t.permute([2, 0, 1, 3])
        return not cyc

    def killing(self):
        """B_ij = c_ip^q c_jq^p as a Metric (raises if degenerate)."""
        return Metric(self.killing_matrix())

    def killing_matrix(self):
        B = einsum("ipq,jqp->ij", self.c, self.c)
        return [[B[(i, j)] for j in range(self.n)] for i in range(self.n)]

    def coords_of_matrix(self, M):
        """Coordinates of a matrix in basis_matrices (exact linear solve)."""
        if not self.basis_matrices:
            raise ValueError("no matrix realization for %s" % self.name)
        flat = [[Scalar.coerce(x) for row in B for x in row] for B in self.basis_matrices]
        target = [Scalar.coerce(x) for row in M for x in row]
        return _solve_lsq_exact(flat, target)


def _solve_lsq_exact(cols, target):
    """Solve sum_a x_a cols[a] = target exactly (consistent system)."""
    m, n = len(target), len(cols)
    rows = [[cols[a][r] for a in range(n)] + [target[r]] for r in range(m)]
    piv_cols, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, m):
        if rows[i][n]:
            raise ValueError("matrix is not in the span of the basis")
    x = [ZERO] * n
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][n]
    return x


def nahm(g):
    """Nahm(g) = g+g+g with the block multiplication; h = -(1/2) blockdiag(B,B,B)."""
    m = g.n
    n = 3 * m
    B = g.killing_matrix()
    hg = [[ZERO] * n for _ in range(n)]
    for b in range(3):
        for i in range(m):
            for j in range(m):
                hg[b * m + i][b * m + j] = B[i][j] * Fraction(-1, 2)
    h = Metric(hg)
    # (x o y)_1 = 1/2([x2,y3] + [y2,x3]) etc; mixed mu_{(a,i),(b,j)}^{(c,k)}
    mixed = {}
    half = Fraction(1, 2)
    for (i, j, k), v in g.c.items():
        for a, b, c in ((1, 2, 0), (2, 0, 1), (0, 1, 2)):
            # x_a = e_i, y_b = e_j -> component c gets 1/2 [e_i, e_j]; symmetric in (x, y)
            for key in (((a * m + i), (b * m + j), (c * m + k)), ((b * m + j), (a * m + i), (c * m + k))):
                mixed[key] = mixed.get(key, ZERO) + v * half
    low = einsum("ijp,pk->ijk", Tensor(n, 3, mixed), h.lower_t)
    return CodazziAlgebra(SymTensor.from_tensor(low), h, "Nahm(%s)" % (g.name or "g"))


def nahm_mul_direct(g, x, y):
    """Independent route: the displayed block formula on vectors."""
    m = g.n
    xs = [x[b * m:(b + 1) * m] for b in range(3)]
    ys = [y[b * m:(b + 1) * m] for b in range(3)]
    br = g.bracket
    out = []
    for a, b in ((1, 2), (2, 0), (0, 1)):
        u = br(xs[a], ys[b])
        w = br(ys[a], xs[b])
        out += [(p + q) * Fraction(1, 2) for p, q in zip(u, w)]
    return out


# ---------------------------------------------------------------- polynomial checks

def hess_norm2(P, h):
    H = P.hessian()
    hinv = h.inv
    out = Polynomial(P.n)
    if h.diagonal:
        for i in range(P.n):
            for j in range(P.n):
                if H[i][j]:
                    out = out + H[i][j] * H[i][j] * (hinv[i][i] * hinv[j][j])
        return out
    for i in range(P.n):
        for j in range(P.n):
            if not H[i][j]:
                continue
            for a in range(P.n):
                if not hinv[i][a]:
                    continue
                for b in range(P.n):
                    if hinv[j][b] and H[a][b]:
                        out = out + H[i][j] * H[a][b] * (hinv[i][a] * hinv[j][b])
    return out


def proportionality(A, B):
    """kappa with A = kappa * B, or None."""
    if not B:
        return ZERO if not A else None
    e, c = next(iter(B.t.items()))
    kappa = A.t.get(e, ZERO) / c
    return kappa if A == B * kappa else None


def check_einstein_polynomials(P, h=None):
    """kappa with Delta_h P = 0 and |Hess P|^2_h = kappa E, else None."""
    if not P.is_homogeneous(3):
        raise ValueError("need a homogeneous cubic")
    h = h or Metric.identity(P.n)
    if P.laplacian(h.inv):
        return None
    return proportionality(hess_norm2(P, h), h.quadratic())


def poly_det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    out = None
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        t = M[0][j] * poly_det(minor)
        t = t if j % 2 == 0 else -t
        out = t if out is None else out + t
    return out if out is not None else M[0][0] * 0


def hessian_det_check(P):
    H = poly_det(P.hessian())
    return {"H": H, "kappa": proportionality(H, P)}


def syzygetic(a, b):
    """P_{a,b} = (a/6)(x1^3+x2^3+x3^3) + b x1 x2 x3."""
    a, b = Scalar.coerce(a), Scalar.coerce(b)
    return Polynomial(3, {(3, 0, 0): a / 6, (0, 3, 0): a / 6, (0, 0, 3): a / 6, (1, 1, 1): b})


# ---------------------------------------------------------------- composition algebras and Cartan

def cd_mul(a, b):
    """Cayley-Dickson product on lists of length 1, 2, 4, 8: (p,q)(r,s) = (pr - s*q, sp + qr*)."""
    m = len(a)
    if m == 1:
        return [a[0] * b[0]]
    h = m // 2
    p, q, r, s = a[:h], a[h:], b[:h], b[h:]
    left = [x - y for x, y in zip(cd_mul(p, r), cd_mul(cd_conj(s), q))]
    right = [x + y for x, y in zip(cd_mul(s, p), cd_mul(q, cd_conj(r)))]
    return left + right


def cd_conj(a):
    return [a[0]] + [-x for x in a[1:]]


def cartan_polynomial(m):
    """Cubic on R^{3m+2}; variables ordered z1 (m), z2 (m), z3 (m), y, x."""
    if m not in (1, 2, 4, 8):
        raise ValueError("m must be 1, 2, 4 or 8")
    n = 3 * m + 2
    V = Polynomial.variables(n)
    z1, z2, z3 = V[0:m], V[m:2 * m], V[2 * m:3 * m]
    y, x = V[3 * m], V[3 * m + 1]

    def nrm(z):
        out = Polynomial(n)
        for v in z:
            out = out + v * v
        return out
    s3 = sqrt_rational(3)
    P = x * x * x - x * y * y * 3
    P = P + x * (nrm(z1) + nrm(z2) - nrm(z3) * 2) * Fraction(3, 2)
    P = P + y * (nrm(z1) - nrm(z2)) * (s3 * Fraction(3, 2))
    t1 = cd_mul(cd_mul(z1, z2), z3)
    t2 = cd_mul(cd_conj(z3), cd_mul(cd_conj(z2), cd_conj(z1)))
    P = P + (t1[0] + t2[0]) * (s3 * Fraction(3, 2))
    return P


def cartan_iso_check(P):
    """Delta P = 0 and |DP|^2 = 9 E^2 (Euclidean)."""
    if P.laplacian():
        return False
    g = P.gradient()
    s = Polynomial(P.n)
    for d in g:
        s = s + d * d
    E = Metric.identity(P.n).quadratic()
    return s == E * E * 9


# ---------------------------------------------------------------- catalog polynomials

def _xs(n):
    return Polynomial.variables(n)


def poly_2dhar(r=1):
    x1, x2 = _xs(2)
    return (x1 * x1 * x1 - x1 * x2 * x2 * 3) * Scalar.coerce(r)


def poly1(lam, mu):
    x1, x2, x3 = _xs(3)
    return x1 * x2 * x3 * Scalar.coerce(lam) + x2 * (x1 * x1 - x3 * x3) * Scalar.coerce(mu)


def poly2():
    x1, x2, x3 = _xs(3)
    return (x3 * x3 * x3 - x3 * (x1 * x1 + x2 * x2) * Fraction(3, 2)
            + (x1 * x1 * x1 - x1 * x2 * x2 * 3) * sqrt_rational(Fraction(1, 2)))


def poly3():
    x1, x2, x3, x4 = _xs(4)
    return (x3 * x3 * x3 * Fraction(-1, 6) + x3 * (x1 * x1 - x2 * x2 + x4 * x4) * Fraction(1, 2)
            - x1 * x2 * x4)


def nahm_poly_so3():
    X = _xs(9)
    M = [X[0:3], X[3:6], X[6:9]]
    return poly_det(M) * Fraction(1, 2)


def prehomog_poly():
    x11, x12, x13, x22, x23, x33 = _xs(6)
    r = sqrt_rational(Fraction(1, 2))
    M = [[x11, x12 * r, x13 * r], [x12 * r, x22, x23 * r], [x13 * r, x23 * r, x33]]
    return poly_det(M)


def pfaffian_poly(size=6, scale=1):
    """Pfaff of the antisymmetric matrix with strict upper entries as coordinates (times scale)."""
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    n = len(pairs)
    X = _xs(n)
    pos = {p: a for a, p in enumerate(pairs)}
    scale = Scalar.coerce(scale)

    def entry(i, j):
        return X[pos[(i, j)]] * scale

    def pf(idx):
        if not idx:
            return Polynomial.const(n, 1)
        i = idx[0]
        out = Polynomial(n)
        for a in range(1, len(idx)):
            j = idx[a]
            rest = idx[1:a] + idx[a + 1:]
            term = entry(i, j) * pf(rest)
            out = out + (term if a % 2 == 1 else -term)
        return out
    return pf(list(range(size)))


def q_chain(nmax):
    """Q_2 .. Q_nmax by the polynomial recursion; returns {n: Q_n}."""
    x1, x2 = _xs(2)
    Q = {2: (x1 * x1 * x1 - x1 * x2 * x2 * 3) * Fraction(1, 6)}
    for n in range(2, nmax):
        Qn = Q[n].extend_vars(n + 1)
        V = _xs(n + 1)
        xn1 = V[n]
        En = Polynomial(n + 1)
        for v in V[:n]:
            En = En + v * v
        Q[n + 1] = (xn1 * xn1 * xn1 * Fraction(n, 6) - xn1 * En * Fraction(1, 2)
                    + Qn * sqrt_rational(Fraction(n + 2, n)))
    return Q


def q_chain_algebras(nmax):
    """Q_n algebras built by repeated extend() from Q_2."""
    A = from_cubic(q_chain(2)[2], name="Q2")
    out = {2: A}
    for n in range(2, nmax):
        A = extend(A, n * (n - 1), n * (n + 1))
        A.name = "Q%d" % (n + 1)
        out[n + 1] = A
    return out


def n3alg(c=1):
    x1, x2, x3 = _xs(3)
    return x1 * x2 * x3 * Scalar.coerce(c)
