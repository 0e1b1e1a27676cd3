import math
import random

import pytest

from fockexp import bounds
from fockexp.bounds import BoundDomainError, certify, geometric_R, find_r_star, random_inputs, verify_bound
from fockexp.modespace import build_mode_space
from fockexp.opmatrix import OperatorMatrix, sector_basis
from fockexp.wedge import WedgeTensor, wedge_basis

FMS = build_mode_space(4, [2, 3, 4, 5], 1, arith="float")


def test_factorial_bound_example():
    rep = verify_bound("B11", FMS, {"l": 3}, {})
    assert (rep.lhs, rep.rhs, rep.holds) == (720.0, 2304.0, True)


def test_series_bound_example():
    rep = verify_bound("B10", FMS, {"t": 1.0, "k": 2}, {})
    direct = sum(math.factorial(n + 2) / math.factorial(n) ** 2 for n in range(60))
    assert rep.lhs == pytest.approx(direct, rel=1e-14)
    assert rep.rhs == pytest.approx(9 * math.e) and rep.holds


def test_sup_poly_geometric_against_grid_search():
    rho = 0.5
    for m, c in [(1, 1.0), (3, 0.5), (6, 2.0)]:
        grid = max(math.prod(x + k for k in range(1, m + 1)) * rho ** (c * x) for x in [i / 1000 for i in range(40000)])
        assert bounds.sup_poly_geometric(m, rho, c) == pytest.approx(grid, rel=1e-6)
        assert bounds.sup_poly_geometric(m, rho, c) <= bounds.sup_bound(m, rho, c)


def test_integral_kernel_bound_at_origin():
    rng = random.Random(3)
    for _ in range(10):
        inp = random_inputs("B3", FMS, rng)
        assert verify_bound("B3", FMS, inp, {"p": 0, "q": 0, "r": 1}).holds


@pytest.mark.parametrize("bid", bounds.BOUND_IDS)
def test_random_instances_hold(bid):
    reps = certify(FMS, seed=11, instances=3, bound_ids=(bid,))
    assert reps and all(r.holds for r in reps)


def test_convergence_radius_search():
    C2, rho = 5.0, 0.5
    r = find_r_star(C2, rho)
    assert geometric_R(C2, rho, r) < 1
    rep = certify(FMS, seed=0, instances=1, bound_ids=("B12",))[0]
    assert rep.detail["R"] < 1 and math.isfinite(rep.detail["tail"])


def test_symbol_bound_fails_for_rank_one_operator():
    """A rank-one operator aligned with e+(zeta) beats the stated symbol estimate."""
    ms = build_mode_space(4, [2, 3, 4, 5], 0, arith="float")
    zeta, eta = wedge_basis(ms, 1, 2), WedgeTensor(ms, 2)
    basis = sector_basis(ms, "even")
    data = [[0.0] * len(basis) for _ in basis]
    data[basis.index(0)][basis.index(0)] = 1.0
    data[basis.index(0b11)] = [0.0] * len(basis)
    data[basis.index(0)][basis.index(0b11)] = 0.5
    Xi = OperatorMatrix(ms, "even", "even", data)
    rep = verify_bound("B5", ms, {"Xi": Xi, "zeta": zeta, "eta": eta}, {"p": 0, "q": 0, "r": 0.5})
    assert rep.lhs == pytest.approx(1.25)
    assert rep.rhs == pytest.approx(math.sqrt(1.25) * math.exp(3 / 32))
    assert not rep.holds


def test_domain_errors():
    with pytest.raises(BoundDomainError):
        verify_bound("B99", FMS, {}, {})
    with pytest.raises(BoundDomainError):
        verify_bound("B11", build_mode_space(4, [2, 3, 4, 5], 1), {"l": 1}, {})
    with pytest.raises(BoundDomainError):
        verify_bound("B11", FMS, {"l": 1}, {"alpha": 0})
    with pytest.raises(BoundDomainError):
        verify_bound("B3", FMS, random_inputs("B3", FMS, random.Random(0)), {"r": 0})


def test_certify_is_reproducible():
    a = certify(FMS, seed=5, instances=2, bound_ids=("B5", "B9"))
    b = certify(FMS, seed=5, instances=2, bound_ids=("B5", "B9"))
    assert [(r.lhs, r.rhs) for r in a] == [(r.lhs, r.rhs) for r in b]
