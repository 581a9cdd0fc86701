import pytest

from minkowski.verify import SUITES, run_all, run_suite

SMALL = {"conjugacy": 40, "distribution": 6, "mediant": 6, "determinant": 20, "partition": 10, "eq_b": 10}


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_small(name):
    res = run_suite(name, SMALL.get(name))
    assert res.passed, res.failures[:3]
    assert res.checked > 0


@pytest.mark.parametrize("name", sorted(SUITES))
def test_injected_fault_is_caught(name):
    res = run_suite(name, SMALL.get(name), fault=True)
    assert not res.passed and res.failures


def test_run_all_isolates_fault():
    results = run_all(SMALL, fault="mediant")
    assert [r.name for r in results if not r.passed] == ["mediant"]
    assert set(results[0].as_dict()) == {"suite", "passed", "checked", "seconds", "failures"}


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
