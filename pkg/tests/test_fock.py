import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockexp.fock import (
    FockVector,
    ParityError,
    annihilate,
    basis_vector,
    create,
    exp_vector,
    fock_norm_sq,
    fock_pairing,
    parity_split,
    s_taylor,
    s_transform,
    vacuum,
    weyl_W,
)
from fockexp.modespace import build_mode_space
from fockexp.wedge import WedgeTensor, pairing, subsets, vector, wedge_basis, wedge_power

MS = build_mode_space(4, [2, 3, 4, 5], 1)
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def jordan_wigner(d):
    """Occupation-number creation matrices; state index bit j = occupation of mode j+1."""
    out = []
    for j in range(d):
        C = np.zeros((2 ** d, 2 ** d), dtype=int)
        for s in range(2 ** d):
            if not s >> j & 1:
                C[s | 1 << j, s] = (-1) ** bin(s & ((1 << j) - 1)).count("1")
        out.append(C)
    return out


def as_column(phi):
    v = np.zeros(2 ** phi.ms.d, dtype=object)
    for k, c in phi.coeffs.items():
        v[k] = c
    return v


def even_vectors():
    keys = [k for n in (0, 2, 4) for k in subsets(4, n)]
    return st.dictionaries(st.sampled_from(keys), fracs, max_size=8).map(lambda c: FockVector(MS, c))


def twoforms():
    return st.dictionaries(st.sampled_from(subsets(4, 2)), fracs, max_size=6).map(lambda c: WedgeTensor(MS, 2, c))


def test_ladder_examples():
    e1 = wedge_basis(MS, 1)
    vac = vacuum(MS)
    assert create(e1, vac) == basis_vector(MS, 0b1)
    assert create(e1, basis_vector(MS, 0b1)).is_zero()
    assert create(e1, basis_vector(MS, 0b10)) == basis_vector(MS, 0b11)
    assert annihilate(e1, basis_vector(MS, 0b1)) == vac
    assert annihilate(e1, basis_vector(MS, 0b11)) == basis_vector(MS, 0b10)
    assert annihilate(e1, vac).is_zero()
    assert weyl_W(e1, vac) == basis_vector(MS, 0b1)


def test_ladders_match_jordan_wigner():
    C = jordan_wigner(4)
    for j in range(4):
        e = wedge_basis(MS, j + 1)
        for s in range(16):
            phi = basis_vector(MS, s)
            assert list(as_column(create(e, phi))) == list(C[j][:, s])
            assert list(as_column(annihilate(e, phi))) == list(C[j].T[:, s])


@settings(max_examples=30, deadline=None)
@given(st.lists(fracs, min_size=4, max_size=4), st.lists(fracs, min_size=4, max_size=4), even_vectors())
def test_car_on_random_vectors(fv, gv, phi):
    f, g = vector(MS, fv), vector(MS, gv)
    anti = create(f, annihilate(g, phi)) + annihilate(g, create(f, phi))
    assert anti == phi * pairing(g, f)
    assert annihilate(f, annihilate(f, phi)).is_zero()
    assert create(f, create(f, phi)).is_zero()


def test_weyl_square_scales_with_norm():
    f = vector(MS, [Fr(3, 5), Fr(4, 5), 0, 0])
    phi = FockVector(MS, {0: 1, 0b11: Fr(1, 2), 0b100: 3})
    assert weyl_W(f, weyl_W(f, phi)) == phi
    assert weyl_W(2 * f, weyl_W(2 * f, phi)) == 4 * phi


def test_norm_and_pairing_examples():
    e12 = basis_vector(MS, 0b11)
    assert fock_norm_sq(e12, 0) == 1
    assert fock_norm_sq(vacuum(MS), 3) == 1
    assert fock_pairing(e12, e12) == 1
    assert fock_norm_sq(e12, 1) == 36


def test_exp_vector_examples():
    zeta = wedge_basis(MS, 1, 2) + wedge_basis(MS, 3, 4)
    ev = exp_vector(zeta)
    assert ev.coeffs == {0: 1, 0b11: Fr(1, 2), 0b1100: Fr(1, 2), 0b1111: Fr(1, 12)}
    assert exp_vector(WedgeTensor(MS, 2)) == vacuum(MS)
    ms2 = build_mode_space(2, [2, 3], 1)
    z2 = 3 * wedge_basis(ms2, 1, 2)
    assert exp_vector(z2).coeffs == {0: 1, 0b11: Fr(3, 2)}


@settings(max_examples=30, deadline=None)
@given(twoforms(), twoforms())
def test_exp_vector_pairing_series(zeta, eta):
    want = sum(pairing(wedge_power(zeta, n), wedge_power(eta, n)) / math.factorial(2 * n) for n in range(3))
    assert fock_pairing(exp_vector(zeta), exp_vector(eta)) == want
    assert fock_pairing(vacuum(MS), exp_vector(zeta)) == 1


@settings(max_examples=30, deadline=None)
@given(even_vectors(), twoforms(), twoforms())
def test_s_transform_paths_and_taylor(Phi, zeta, eta):
    assert s_transform(Phi, zeta) == s_transform(Phi, zeta, method="series")
    coeffs = s_taylor(Phi, zeta, eta)
    for z in (0, 1, -1, 2):
        assert sum(c * z ** k for k, c in enumerate(coeffs)) == s_transform(Phi, zeta * z + eta)


def test_s_transform_examples():
    zeta = 2 * wedge_basis(MS, 1, 2) - wedge_basis(MS, 2, 4)
    assert s_transform(vacuum(MS), zeta) == 1
    assert s_transform(basis_vector(MS, 0b11), zeta) == pairing(wedge_basis(MS, 1, 2), zeta)
    Phi = FockVector(MS, {0: 2, 0b11: 1, 0b1111: 5})
    assert s_taylor(Phi, zeta, WedgeTensor(MS, 2)) == [2, pairing(wedge_basis(MS, 1, 2), zeta), 0]
    assert s_taylor(Phi, WedgeTensor(MS, 2), zeta) == [s_transform(Phi, zeta), 0, 0]
    with pytest.raises(ParityError):
        s_transform(basis_vector(MS, 0b1), zeta)


def test_exp_vector_norm_bound_float():
    fms = MS.with_arith("float")
    rng = np.random.default_rng(7)
    for _ in range(50):
        zeta = WedgeTensor(fms, 2, {k: float(x) for k, x in zip(subsets(4, 2), 0.3 * rng.standard_normal(6))})
        for p in (-1.0, 0.0, 0.5):
            from fockexp.wedge import norm_p_sq

            assert fock_norm_sq(exp_vector(zeta), p) <= math.exp(norm_p_sq(zeta, p)) * (1 + 1e-12)


def test_parity_split():
    phi = FockVector(MS, {0b1: 1, 0b11: 1})
    even, odd = parity_split(phi)
    assert even == basis_vector(MS, 0b11) and odd == basis_vector(MS, 0b1)
    assert parity_split(vacuum(MS)) == (vacuum(MS), FockVector(MS))
    assert even + odd == phi
