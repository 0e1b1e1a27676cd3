import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from fockexp.contract import AltBlockTensor, BlockTensor, block_pairing
from fockexp.expansion import ladder_matrix
from fockexp.fock import FockVector, ParityError, basis_vector, fock_pairing, vacuum
from fockexp.kernelop import KernelDistribution, build_car_kernel, iko_apply, iko_matrix, symbol_eval
from fockexp.modespace import build_mode_space
from fockexp.opmatrix import identity, sector_basis, zeros
from fockexp.wedge import WedgeTensor, embed_dense, subsets, vector, wedge_basis, wedge_product

MS = build_mode_space(4, [2, 3, 4, 5], 1)
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
SHAPES = [(l, m) for l in range(3) for m in range(3)]


def kernels():
    def build(lm):
        l, m = lm
        keys = [(a, b) for a in subsets(4, 2 * l) for b in subsets(4, 2 * m)]
        return st.dictionaries(st.sampled_from(keys), fracs, max_size=5).map(
            lambda c: KernelDistribution(MS, l, m, AltBlockTensor(MS, 2 * l, 2 * m, c)))
    return st.sampled_from(SHAPES).flatmap(build)


def vectors():
    return st.lists(fracs, min_size=4, max_size=4).map(lambda v: vector(MS, v))


def test_scalar_kernel_is_multiple_of_identity():
    K = KernelDistribution.scalar(MS, Fr(3, 2))
    phi = FockVector(MS, {0: 1, 0b101: 2})
    assert iko_apply(K, phi) == phi * Fr(3, 2)
    assert iko_matrix(KernelDistribution.scalar(MS, 1)) == identity(MS, "even")


def test_creation_pair_kernel():
    f, g = vector(MS, [1, 2, 0, 0]), vector(MS, [0, 1, 0, 3])
    K = KernelDistribution(MS, 1, 0, AltBlockTensor(MS, 2, 0, {(k, 0): v for k, v in wedge_product(f, g).coeffs.items()}))
    phi = FockVector(MS, {0: 1, 0b1100: Fr(1, 3)})
    want = FockVector.from_components(MS, [wedge_product(wedge_product(f, g), w) for w in phi.components().values()])
    assert iko_apply(K, phi) == want
    M = iko_matrix(KernelDistribution.from_entries(MS, 1, 0, {((1, 2), ()): 1}))
    assert M.apply(vacuum(MS)) == basis_vector(MS, 0b11)


def test_annihilation_pair_kernel_example():
    K = KernelDistribution.from_entries(MS, 0, 1, {((), (1, 2)): 1})
    assert iko_apply(K, basis_vector(MS, 0b11)) == vacuum(MS)


def test_from_entries_sorts_with_sign():
    K = KernelDistribution.from_entries(MS, 0, 1, {((), (2, 1)): 1, ((), (3, 3)): 5})
    assert K.kernel.coeffs == {(0, 0b11): -1}


def test_shape_checks():
    with pytest.raises(ValueError):
        KernelDistribution(MS, 1, 1, AltBlockTensor(MS, 2, 0))
    with pytest.raises(ParityError):
        iko_apply(KernelDistribution.scalar(MS, 1), basis_vector(MS, 0b1))


@settings(max_examples=40, deadline=None)
@given(kernels())
def test_matrix_route_equals_literal_route(K):
    M = iko_matrix(K)
    for j, key in enumerate(M.col_basis):
        col = iko_apply(K, basis_vector(MS, key))
        assert [M.data[i, j] for i in range(len(M.row_basis))] == col.to_list(M.row_basis)


@settings(max_examples=40, deadline=None)
@given(kernels(), st.data())
def test_matrix_elements_identity(K, data):
    l, m = K.l, K.m
    psi_key = data.draw(st.sampled_from(subsets(4, 2 * m)))
    phi_key = data.draw(st.sampled_from(subsets(4, 2 * l)))
    lhs = fock_pairing(iko_apply(K, basis_vector(MS, psi_key)), basis_vector(MS, phi_key))
    tensor = embed_dense(WedgeTensor(MS, 2 * l, {phi_key: 1})).tensor(embed_dense(WedgeTensor(MS, 2 * m, {psi_key: 1})))
    rhs = math.factorial(2 * l) * math.factorial(2 * m) * block_pairing(
        K.kernel.block(), BlockTensor(MS, 2 * l, 2 * m, tensor.coeffs))
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(vectors(), vectors())
def test_cc_and_aa_kernels_reproduce_ladder_products(f, g):
    for kind in ("cc", "aa"):
        assert iko_matrix(build_car_kernel(kind, f, g)) == ladder_matrix(kind, f, g, "even")


def test_aa_kernel_order():
    e1, e2 = wedge_basis(MS, 1), wedge_basis(MS, 2)
    K = build_car_kernel("aa", e1, e2)
    assert K.kernel.coeffs == {(0, 0b11): -1}            # e2 ^ e1, not e1 ^ e2
    assert iko_matrix(K) == ladder_matrix("aa", e1, e2, "even")


def test_ca_kernel_agrees_on_low_degrees_only():
    e1 = wedge_basis(MS, 1)
    K = build_car_kernel("ca", e1, e1)
    assert iko_apply(K, basis_vector(MS, 0b11)) == basis_vector(MS, 0b11)
    M, N = iko_matrix(K), ladder_matrix("ca", e1, e1, "even")
    rows = sector_basis(MS, "even")
    for i, r in enumerate(rows):
        for j, c in enumerate(rows):
            deg = bin(c).count("1")
            if deg <= 2:
                assert M.data[i, j] == N.data[i, j]
    # e1^e2^e3^e4 holds three pairs through mode 1; the number operator counts it once
    full = rows.index(0b1111)
    assert M.data[full, full] == 3 and N.data[full, full] == 1


def test_symbol_examples():
    e12 = wedge_basis(MS, 1, 2)
    I = identity(MS, "even")
    assert symbol_eval(I, e12, e12) == Fr(5, 4)
    assert symbol_eval(zeros(MS, "even", "even"), e12, e12) == 0
    zero = WedgeTensor(MS, 2)
    X = iko_matrix(KernelDistribution.from_entries(MS, 1, 1, {((1, 2), (1, 3)): 7}))
    assert symbol_eval(I, zero, zero) == 1
    assert symbol_eval(X + I * 2, zero, zero) == (X + I * 2).entry(0, 0)
    with pytest.raises(ValueError):
        symbol_eval(identity(MS), e12, e12)
