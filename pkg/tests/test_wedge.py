import itertools
import math
from fractions import Fraction as Fr

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fockexp.modespace import build_mode_space
from fockexp.wedge import (
    DenseTensor,
    WedgeTensor,
    antisymmetrize,
    dense_norm_p_sq,
    embed_dense,
    gram_pairing,
    norm_p_sq,
    pairing,
    subsets,
    tensor_basis,
    vector,
    wedge_all,
    wedge_basis,
    wedge_power,
    wedge_product,
)

MS = build_mode_space(4, [2, 3, 4, 5], 1)
fracs = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def perm_parity(p):
    # independent of the package: count inversions
    return (-1) ** sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])


def alternize_oracle(x: dict, n: int) -> dict:
    """(1/n!) sum_sigma sign(sigma) x o sigma, by enumerating all permutations."""
    out = {}
    for t, v in x.items():
        for sigma in itertools.permutations(range(n)):
            key = tuple(t[s] for s in sigma)
            out[key] = out.get(key, 0) + perm_parity(sigma) * v / math.factorial(n)
    return {k: v for k, v in out.items() if v != 0}


def wedges(degree):
    return st.dictionaries(st.sampled_from(subsets(4, degree)), fracs, max_size=6).map(
        lambda c: WedgeTensor(MS, degree, c))


def vectors():
    return st.lists(fracs, min_size=4, max_size=4).map(lambda v: vector(MS, v))


def test_antisymmetrize_examples():
    assert antisymmetrize(tensor_basis(MS, 1, 2)) == wedge_basis(MS, 1, 2)
    assert antisymmetrize(tensor_basis(MS, 1, 1)).is_zero()
    assert antisymmetrize(tensor_basis(MS, 2, 1, 3)) == -wedge_basis(MS, 1, 2, 3)


def test_embed_dense_examples():
    assert embed_dense(wedge_basis(MS, 1, 2)).coeffs == {(0, 1): Fr(1, 2), (1, 0): Fr(-1, 2)}
    assert embed_dense(wedge_basis(MS)).coeffs == {(): 1}
    d3 = embed_dense(wedge_basis(MS, 1, 2, 3)).coeffs
    assert len(d3) == 6 and {abs(v) for v in d3.values()} == {Fr(1, 6)}
    assert d3[(1, 0, 2)] == Fr(-1, 6) and d3[(1, 2, 0)] == Fr(1, 6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3).flatmap(
    lambda n: st.dictionaries(st.tuples(*[st.integers(0, 3)] * n), fracs, max_size=5).map(lambda c: (n, c))))
def test_embedding_matches_alternizer_oracle(nc):
    n, coeffs = nc
    x = DenseTensor(MS, n, coeffs)
    assert embed_dense(antisymmetrize(x)).coeffs == alternize_oracle(coeffs, n)


def test_wedge_product_examples():
    assert wedge_product(wedge_basis(MS, 1, 2), wedge_basis(MS, 3, 4)) == wedge_basis(MS, 1, 2, 3, 4)
    zeta = wedge_basis(MS, 1, 2) + wedge_basis(MS, 3, 4)
    assert wedge_power(zeta, 2) == 2 * wedge_basis(MS, 1, 2, 3, 4)
    assert wedge_product(wedge_basis(MS, 1), wedge_basis(MS, 1, 2)).is_zero()


@settings(max_examples=40, deadline=None)
@given(wedges(1), wedges(2), wedges(1))
def test_wedge_product_laws(a, b, c):
    assert wedge_product(a, b) == wedge_product(b, a) * (-1) ** (a.degree * b.degree)
    assert wedge_product(a, c) == -wedge_product(c, a)
    assert wedge_product(wedge_product(a, b), c) == wedge_product(a, wedge_product(b, c))


@settings(max_examples=30, deadline=None)
@given(wedges(1), wedges(2))
def test_wedge_product_is_dense_alternized_tensor(a, b):
    # a ^ b = A(a (x) b) as dense tensors
    dense = embed_dense(a).tensor(embed_dense(b))
    assert embed_dense(wedge_product(a, b)).coeffs == alternize_oracle(dense.coeffs, 3)


def test_pairing_examples():
    e12 = wedge_basis(MS, 1, 2)
    assert pairing(e12, e12) == Fr(1, 2)
    assert pairing(e12, tensor_basis(MS, 2, 1)) == Fr(-1, 2)
    assert pairing(wedge_basis(MS), wedge_basis(MS)) == 1


def test_gram_pairing_examples():
    e1, e2 = wedge_basis(MS, 1), wedge_basis(MS, 2)
    assert gram_pairing([e1, e2], [e1, e2]) == Fr(1, 2)
    assert gram_pairing([e1, e2], [e2, e1]) == Fr(-1, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.lists(vectors(), min_size=n, max_size=n),
                                                      st.lists(vectors(), min_size=n, max_size=n))))
def test_determinant_formula_against_sympy(fg):
    fs, gs = fg
    n = len(fs)
    gram = sympy.Matrix(n, n, lambda i, j: sum(sympy.Rational(str(fs[i].coeff(k + 1))) *
                                                sympy.Rational(str(gs[j].coeff(k + 1))) for k in range(4)))
    want = Fr(str(gram.det() / sympy.factorial(n)))
    assert pairing(wedge_all(fs), wedge_all(gs)) == want
    assert gram_pairing(fs, gs) == want


def test_norms():
    e12 = wedge_basis(MS, 1, 2)
    assert norm_p_sq(e12, 0) == Fr(1, 2)
    assert norm_p_sq(e12, 1) == Fr(36, 2)
    assert norm_p_sq(e12, -1) == Fr(1, 72)


@settings(max_examples=30, deadline=None)
@given(wedges(2), st.integers(-2, 2))
def test_subset_norm_equals_dense_norm(w, p):
    assert norm_p_sq(w, p) == dense_norm_p_sq(embed_dense(w), p)


@settings(max_examples=30, deadline=None)
@given(wedges(1), wedges(2))
def test_wedge_norm_submultiplicative(f, g):
    assert norm_p_sq(wedge_product(f, g), 0) <= norm_p_sq(f, 0) * norm_p_sq(g, 0)


def test_invalid_keys():
    with pytest.raises(ValueError):
        WedgeTensor(MS, 2, {0b1: 1})
    with pytest.raises(ValueError):
        DenseTensor(MS, 1, {(4,): 1})
    with pytest.raises(ValueError):
        pairing(wedge_basis(MS, 1), wedge_basis(MS, 1, 2))
