"""
Cancellation experiments in every setting, plus the randomized sweeps on
polytopes where the order unit cancellation property must never fail.
"""

import random

import pytest

from cone_cert import SearchCaps
from experiments import (
    ERROR,
    FAIL_REFUTED,
    INCONCLUSIVE,
    NOT_APPLICABLE,
    PASS,
    cancellation_sweep,
    run_cancellation_experiment,
    sample_negative,
    sample_order_unit,
    sample_positive,
    summarize_sweep,
)
from ring_setting import SettingError, get_setting

SMALL = SearchCaps(max_degree=4, max_m=8, grid_denominator_cap=64, grid_point_budget=2000)


def _run(tag, u, a, **kwargs):
    setting = get_setting(tag)
    return run_cancellation_experiment(setting, setting.parse(u), setting.parse(a), SMALL, verbose=False, **kwargs)


def test_interval_cancellation_passes():
    report = _run("interval", "1 + x", "x")
    assert report.conclusion == PASS
    assert report.order_unit == "Yes"
    assert report.verified


def test_toy_r1_cancellation_fails():
    report = _run("toy-r1", "1 + x", "x")
    assert report.conclusion == FAIL_REFUTED
    assert report.product == "member"


def test_toy_r2_cancellation_holds():
    assert _run("toy-r2", "1 + x", "x^2").conclusion == PASS


def test_disk_cancellation_is_refuted_by_zero_propagation():
    report = _run("disk", "y + 7/5", "1/5 - y")
    assert report.conclusion == FAIL_REFUTED
    assert report.product_degree == 2
    assert report.target_detail.startswith("zero-propagation")


def test_disk_order_unit_pipeline_stalls_at_the_ideal():
    report = _run("disk", "y + 7/5", "1/5 - y", lemma2=True)
    assert report.lemma2 == "stalled at ideal"


def test_non_order_unit_is_an_error():
    report = _run("interval", "x", "x")
    assert report.conclusion == ERROR


def test_report_table_mentions_the_conclusion():
    assert PASS in _run("interval", "1 + x", "x").table()


def test_samples_are_cone_elements():
    setting = get_setting("square")
    rng = random.Random(3)
    for _ in range(5):
        u = sample_order_unit(setting, rng)
        a = sample_positive(setting, rng)
        assert u.constant_term > 0
        assert not a.is_zero()
        assert a.degree <= 2
        assert get_setting("square").membership(a, SMALL).kind == "member"


@pytest.mark.parametrize("tag", ["interval", "triangle", "square"])
def test_polytope_sweeps_never_refute(tag):
    frame = cancellation_sweep(tag, trials=50, seed=2024, caps=SMALL, controls=0)
    assert len(frame) == 50
    assert (frame["conclusion"] != FAIL_REFUTED).all()
    assert frame["verified"].all()
    assert (frame["conclusion"] == INCONCLUSIVE).sum() == 0
    assert "0 refuted" in summarize_sweep(frame)


def test_sweeps_need_a_polytope():
    with pytest.raises(SettingError):
        cancellation_sweep("disk", trials=1)


def test_negative_product_is_not_applicable():
    report = _run("interval", "1 + x", "x - 1/2")
    assert report.conclusion == NOT_APPLICABLE
    assert report.product == "refuted"
    assert report.target == "refuted"


def test_negative_samples_dip_below_zero_at_a_vertex():
    setting = get_setting("triangle")
    rng = random.Random(5)
    for _ in range(5):
        a = sample_negative(setting, rng)
        assert min(a.evaluate(v) for v in setting.cone.polytope.vertices) < 0


def test_sweep_controls_are_told_apart():
    frame = cancellation_sweep("square", trials=5, seed=7, caps=SMALL, controls=5)
    assert len(frame) == 10
    positive = frame[frame["sample"] == "positive"]
    control = frame[frame["sample"] == "control"]
    assert (positive["conclusion"] == PASS).all()
    assert (control["conclusion"] == NOT_APPLICABLE).all()
    assert "5 pass" in summarize_sweep(frame)
    assert "5 not applicable" in summarize_sweep(frame)
