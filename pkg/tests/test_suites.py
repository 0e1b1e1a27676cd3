import pytest

from fockexp.modespace import build_mode_space
from fockexp.suites import SUITES, run_suite

MS = build_mode_space(4, [2, 3, 4, 5], 1)


@pytest.mark.parametrize("name", [s for s in SUITES if s != "bounds"])
def test_suite_passes_and_names_anchor(name):
    results = run_suite(name, MS, seed=3)
    assert results and all(r.passed and r.anchor and r.checked > 0 for r in results)


def test_float_space_is_promoted_for_exact_suites():
    assert all(r.passed for r in run_suite("car", MS.with_arith("float"), seed=0))


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("everything", MS)
