import pytest

from core.errors import InvalidArgumentError
from core.verify import SUITES, random_element, run_all, run_suite


@pytest.mark.parametrize("k, w", [(2, 2), (2, 3), (2, 4), (3, 3)])
@pytest.mark.parametrize("suite", ["axioms", "hall-witt", "truncation"])
def test_suites_pass(suite, k, w):
    result = run_suite(suite, k, w, trials=100, seed=7)
    assert result == {"suite": suite, "letters": k, "class": w, "trials": 100, "failures": 0}


@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_power_congruence(c):
    assert run_suite("power", 2, c + 1, trials=200, seed=c)["failures"] == 0


def test_power_congruence_needs_class_two():
    with pytest.raises(InvalidArgumentError):
        run_suite("power", 2, 1, trials=10)


def test_unknown_suite_and_trials():
    with pytest.raises(InvalidArgumentError):
        run_suite("jacobi", 2, 2, trials=10)
    with pytest.raises(InvalidArgumentError):
        run_suite("axioms", 2, 2, trials=0)


def test_run_all_skips_power_in_class_one():
    names = [row["suite"] for row in run_all(2, 1, trials=20)]
    assert names == [s for s in SUITES if s != "power"]
    assert [row["suite"] for row in run_all(2, 2, trials=20)] == list(SUITES)


def test_random_element_respects_min_weight(ctx24, rng):
    for _ in range(20):
        a = random_element(ctx24, rng, min_weight=3)
        assert not any(a.exponents[:3])
        assert all(abs(e) <= 5 for e in a.exponents)


@pytest.mark.slow
@pytest.mark.parametrize("k, w", [(2, 2), (2, 3), (2, 4), (3, 3)])
@pytest.mark.parametrize("suite", ["axioms", "hall-witt"])
def test_suites_at_full_length(suite, k, w):
    assert run_suite(suite, k, w, trials=1000, seed=0)["failures"] == 0


@pytest.mark.slow
@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_power_congruence_at_full_length(c):
    assert run_suite("power", 2, c + 1, trials=500, seed=0)["failures"] == 0
