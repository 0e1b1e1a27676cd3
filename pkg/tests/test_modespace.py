from fractions import Fraction as Fr

import pytest

from fockexp.modespace import ModeSpaceError, build_mode_space, mode_weight, schwartz_constants


def test_valid_space():
    ms = build_mode_space(4, [2, 2, 3, 3], 1)
    assert ms.d == 4 and ms.lambdas == (2, 2, 3, 3) and ms.exact


@pytest.mark.parametrize("d, lams, alpha", [
    (2, [1, 2], 1),        # lambda_1 must exceed 1
    (3, [2, 3, 2], 1),     # unsorted
    (0, [], 1),
    (2, [2], 1),           # length mismatch
    (2, [2, 3], -1),
    (2, [2, float("inf")], 0),
])
def test_rejects(d, lams, alpha):
    arith = "float" if any(isinstance(x, float) for x in lams) else "rational"
    with pytest.raises(ModeSpaceError):
        build_mode_space(d, lams, alpha, arith=arith)


def test_string_rationals():
    ms = build_mode_space(2, ["5/2", "3"], "1/2")
    assert ms.lambdas[0] == Fr(5, 2) and ms.alpha == Fr(1, 2)


def test_mode_weight(ms4):
    assert mode_weight(ms4, [1, 2], 1) == 6
    assert mode_weight(ms4, [1], 0) == 1
    assert mode_weight(ms4, [1, 1], -1) == Fr(1, 4)
    with pytest.raises(ModeSpaceError):
        mode_weight(ms4, [5], 1)


def test_rational_mode_refuses_fractional_power(ms4):
    with pytest.raises(ModeSpaceError):
        mode_weight(ms4, [1], Fr(1, 2))
    assert mode_weight(ms4.with_arith("float"), [1], 0.5) == pytest.approx(2 ** 0.5)


def test_schwartz_constants():
    assert schwartz_constants(build_mode_space(2, [2, 2], 1)) == (Fr(1, 2), Fr(1, 2))
    assert schwartz_constants(build_mode_space(2, [2, 4], "1/2")) == (Fr(1, 2), Fr(3, 4))
    rho, dsq = schwartz_constants(build_mode_space(4, [2, 3, 4, 5], 1))
    assert dsq == sum(Fr(1, k * k) for k in (2, 3, 4, 5))


def test_float_space_matches_rational(ms4):
    r = schwartz_constants(ms4)
    f = schwartz_constants(ms4.with_arith("float"))
    assert f == pytest.approx(tuple(float(x) for x in r))
