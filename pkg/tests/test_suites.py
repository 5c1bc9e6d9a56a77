import numpy as np
import pytest

from learndyn.errors import ConfigurationError
from learndyn.suites import (LINEARIZATION_PREDICTORS, SUITES, falsification_search, linearization_error,
                             property_suite, trial_rng)


def test_trial_seeds_are_reproducible():
    assert trial_rng(5, 3).random() == trial_rng(5, 3).random()
    assert trial_rng(5, 3).random() != trial_rng(5, 4).random()


@pytest.mark.parametrize("name, trials", [
    ("lemma1", 500), ("lemma2", 500), ("jacobian", 50), ("projection", 2),
    ("oracle_dominance", 5), ("exrd_dominance", 5), ("anticipatory_constant", 4), ("freq_theory", 2),
])
def test_suites_pass_small(name, trials):
    report = property_suite(name, seed=11, trials=trials)
    assert report.passed, report.summary()
    assert report.trials == trials


def test_suite_report_is_deterministic():
    a = property_suite("oracle_dominance", seed=3, trials=3)
    b = property_suite("oracle_dominance", seed=3, trials=3)
    assert a.worst_margin == b.worst_margin


def test_anticipatory_global_small():
    report = property_suite("anticipatory_global", seed=2, trials=5, search_iters=20)
    assert report.passed
    assert report.details["example3_strict"]
    assert report.details["search_evaluations"] == 20


def test_falsification_search_counts_evaluations():
    best, evals = falsification_search(0, iterations=12, restarts=3, T=2.0)
    assert evals == 12
    assert best >= 0


@pytest.mark.parametrize("pname", sorted(LINEARIZATION_PREDICTORS))
def test_linearization_error_small(pname):
    pred = LINEARIZATION_PREDICTORS[pname]
    assert linearization_error(3, [1.0, 0.0], pred, "step") < 0.05
    assert linearization_error(3, [0.3, -1.0], pred, "sin", omega=1.0, T=20.0) < 0.05
    with pytest.raises(ConfigurationError):
        linearization_error(3, [1.0, 0.0], pred, "square")


def test_linearization_error_shrinks_with_amplitude():
    pred = LINEARIZATION_PREDICTORS["lowpass"]
    big = linearization_error(3, [1.0, 0.0], pred, "step", eps=0.04)
    small = linearization_error(3, [1.0, 0.0], pred, "step", eps=0.01)
    assert small < big / 2


def test_unknown_suite():
    with pytest.raises(ConfigurationError):
        property_suite("nope")
    with pytest.raises(ConfigurationError):
        property_suite("lemma1", trials=0)
    assert "anticipatory_global" in SUITES
    assert np.isfinite(property_suite("lemma1", trials=1).worst_margin)
