from fractions import Fraction
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ahlab.scalar import Scalar, sqrt_rational
from ahlab.poly import Polynomial
from ahlab.symtensor import (Tensor, SymTensor, Metric, einsum, outer, norm2, inner, sym_product, trace,
                             trace_free, is_trace_free, con, cartan_product, covector_cartan_formula,
                             tensor_from_poly, poly_from_tensor, covector, perm_sign)
from conftest import symtensors, metrics, polynomials
import identities as ids


def npa(t):
    return np.array(t.to_numpy(), dtype=float)


@given(st.data())
def test_einsum_matches_numpy(data):
    n = data.draw(st.integers(2, 4))
    a = data.draw(symtensors(n, 3, irrational=True)).to_tensor()
    b = data.draw(symtensors(n, 2)).to_tensor()
    for spec in ("ijk,kl->ijl", "ijk,jk->i", "ijk,lm->ijklm", "iik,kl->l", "ijk,ij->"):
        got = einsum(spec, a, b)
        want = np.einsum(spec, npa(a), npa(b))
        g = float(got.value()) if got.rank == 0 else npa(got)
        assert np.allclose(g, want)


def test_permute_and_symmetrize():
    t = Tensor(3, 3, {(0, 1, 2): Scalar(1)})
    assert t.permute([2, 0, 1])[(1, 2, 0)] == 1
    s = t.symmetrize()
    assert s[(2, 1, 0)] == Fraction(1, 6)
    a = t.antisymmetrize([0, 1])
    assert a[(1, 0, 2)] == Fraction(-1, 2)
    assert perm_sign([1, 0, 2]) == -1 and perm_sign([1, 2, 0]) == 1


@given(st.data())
def test_metric_inverse_and_norm(data):
    n = data.draw(st.integers(2, 4))
    h = data.draw(metrics(n))
    g = np.array([[float(x) for x in r] for r in h.g])
    gi = np.array([[float(x) for x in r] for r in h.inv])
    assert np.allclose(g @ gi, np.eye(n))
    assert float(h.det) == pytest.approx(np.linalg.det(g))
    w = data.draw(symtensors(n, 3))
    W = npa(w.to_tensor())
    want = np.einsum("abc,ai,bj,ck,ijk->", W, gi, gi, gi, W)
    assert float(norm2(w, h)) == pytest.approx(want)
    v = data.draw(symtensors(n, 3))
    assert inner(w, v, h) == inner(v, w, h)
    p, q = h.signature
    ev = np.linalg.eigvalsh(g)
    assert (p, q) == (int((ev > 0).sum()), int((ev < 0).sum()))


@given(polynomials(3, max_deg=3))
def test_poly_tensor_roundtrip(p):
    for d in range(4):
        q = p.homogeneous_part(d)
        w = tensor_from_poly(q) if q else SymTensor(3, d)
        assert poly_from_tensor(w) == q or (not q and not poly_from_tensor(w))
        P, xs = ids.poly_of(w)
        from conftest import to_sympy
        assert P == to_sympy(q, xs)


@given(st.data())
def test_sym_product_is_polynomial_product(data):
    n = data.draw(st.integers(2, 3))
    a = data.draw(symtensors(n, data.draw(st.integers(0, 2)), irrational=True))
    b = data.draw(symtensors(n, data.draw(st.integers(0, 2))))
    assert poly_from_tensor(sym_product(a, b)) == poly_from_tensor(a) * poly_from_tensor(b)


@settings(max_examples=25)
@given(st.data())
def test_trace_free_characterization(data):
    n = data.draw(st.integers(2, 4))
    h = data.draw(metrics(n))
    w = data.draw(symtensors(n, data.draw(st.integers(2, 4))))
    assert ids.check_tf(w, h)


@given(st.data())
def test_sl2_and_trhcommute(data):
    n = data.draw(st.integers(2, 5))
    h = data.draw(metrics(n, diagonal=True))
    a = data.draw(symtensors(n, data.draw(st.integers(0, 3))))
    assert ids.check_sl2(a, h)
    assert ids.check_trhcommute(a, h)


@settings(max_examples=30)
@given(st.data())
def test_tralbe_contr_powerlap(data):
    n = data.draw(st.integers(2, 4))
    h = data.draw(metrics(n))
    k, l = data.draw(st.integers(0, 3)), data.draw(st.integers(0, 2))
    a, b = data.draw(symtensors(n, k)), data.draw(symtensors(n, l))
    assert ids.check_tralbe(a, b, h)
    at, bt = trace_free(a, h), trace_free(b, h)
    assert ids.check_contr(at, bt, h)
    assert ids.check_powerlap(at, bt, h)
    assert ids.check_lap_trace(a, h)


def test_con_conventions():
    rng = random.Random(3)
    h = Metric.identity(3)
    a = ids.rand_symtensor(rng, 3, 2)
    b = ids.rand_symtensor(rng, 3, 2)
    assert con(a, b, 0, h) == sym_product(a, b)
    assert con(a, b, 2, h).c.get((), Scalar()) == inner(a, b, h)
    assert con(h.as_symtensor(), a, 1, h) == a
    with pytest.raises(ValueError):
        con(a, b, 3, h)


def test_cartan_product_covector_formula():
    rng = random.Random(11)
    for n in (2, 3, 4):
        h = ids.rand_metric(rng, n)
        for k in (0, 1, 2, 3):
            w = trace_free(ids.rand_symtensor(rng, n, k), h)
            X = covector([rng.randint(-3, 3) for _ in range(n)])
            assert cartan_product(X, w, h) == covector_cartan_formula(X, w, h)
            assert is_trace_free(cartan_product(X, w, h), h)
    with pytest.raises(ValueError):
        cartan_product(h.as_symtensor(), h.as_symtensor(), h)


def test_cartan_product_well_defined():
    # tf(tf a (.) tf b) = tf(a (.) b)
    rng = random.Random(12)
    for _ in range(10):
        n = rng.randint(2, 4)
        h = ids.rand_metric(rng, n)
        a, b = ids.rand_symtensor(rng, n, rng.randint(0, 3)), ids.rand_symtensor(rng, n, rng.randint(0, 2))
        assert trace_free(sym_product(trace_free(a, h), trace_free(b, h)), h) == trace_free(sym_product(a, b), h)


def test_metric_errors_and_json():
    with pytest.raises(ValueError):
        Metric([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        Metric([[1, 2], [0, 1]])
    w = SymTensor(2, 2, {(0, 1): sqrt_rational(3) / 2, (1, 1): Scalar(-1)})
    assert SymTensor.from_json(w.to_json()) == w
    assert SymTensor(2, 2, {(1, 0): Scalar(5)}) == SymTensor(2, 2, {(0, 1): Scalar(5)})
    with pytest.raises(ValueError):
        trace(covector([1, 2]), Metric.identity(2))


def test_outer_and_scalar_mult():
    a = covector([1, 2]).to_tensor()
    o = outer(a, a)
    assert o[(1, 1)] == 4 and o.rank == 2
    assert (o * sqrt_rational(2))[(0, 1)] == sqrt_rational(2) * 2
