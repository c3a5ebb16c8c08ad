import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adamslab.radial_core import make_log_grid, measures
from adamslab.rearrangement import (
    DecreasingProfile,
    MeasuredSamples,
    decreasing_rearrangement,
    distribution,
    hardy_littlewood_gap,
    maximal_profile,
    property_suite,
    random_samples,
    schwarz,
)

UNIT3 = MeasuredSamples([3, 1, 2], [1, 1, 1])


def cells(min_size=1, max_size=40):
    """Strategy for step data with deliberate ties."""
    value = st.one_of(st.floats(0, 10), st.sampled_from([0.0, 0.5, 1.0, 2.0]))
    return st.integers(min_size, max_size).flatmap(
        lambda m: st.tuples(
            st.lists(value, min_size=m, max_size=m),
            st.lists(st.floats(0.01, 5), min_size=m, max_size=m),
        )
    ).map(lambda vm: MeasuredSamples(*vm))


def test_distribution_examples():
    assert distribution(UNIT3, 1.5) == 2
    assert distribution(UNIT3, 3.0) == 0
    assert distribution(UNIT3, 0.0) == 3
    with pytest.raises(ValueError):
        distribution(UNIT3, -1.0)


def test_rearrangement_sorts():
    prof = decreasing_rearrangement(UNIT3)
    assert prof.values.tolist() == [3, 2, 1]
    assert prof.breaks.tolist() == [0, 1, 2, 3]


def test_rearrangement_idempotent_on_sorted_input():
    f = MeasuredSamples([5, 4, 1], [0.5, 2, 1])
    prof = decreasing_rearrangement(f)
    assert prof.values.tolist() == [5, 4, 1]
    assert prof.breaks.tolist() == [0, 0.5, 2.5, 3.5]


def test_ties_merge():
    a = decreasing_rearrangement(MeasuredSamples([2, 1, 2], [1, 2, 3]))
    b = decreasing_rearrangement(MeasuredSamples([2, 2, 1], [3, 1, 2]))
    assert a.values.tolist() == b.values.tolist() == [2, 1]
    assert a.breaks.tolist() == b.breaks.tolist() == [0, 4, 6]


def test_signed_input_refused():
    with pytest.raises(ValueError):
        MeasuredSamples([1, -1], [1, 1])
    with pytest.raises(ValueError):
        MeasuredSamples([1, 1], [1, 0])


def test_maximal_examples():
    prof = decreasing_rearrangement(UNIT3)
    assert maximal_profile(prof, 2.0) == pytest.approx(2.5)
    assert maximal_profile(prof, 1e-12) == pytest.approx(3.0)
    flat = DecreasingProfile(np.array([0.0, 1.5, 4.0]), np.array([2.0, 2.0]))
    for s in (0.1, 1.5, 3.9):
        assert maximal_profile(flat, s) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        maximal_profile(prof, 0.0)


def test_gap_examples():
    f = MeasuredSamples([1, 2], [1, 1])
    g = MeasuredSamples([2, 1], [1, 1])
    assert hardy_littlewood_gap(f, g) == pytest.approx(1.0)
    assert hardy_littlewood_gap(f, MeasuredSamples([3, 7], [1, 1])) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        hardy_littlewood_gap(f, MeasuredSamples([1, 2], [1, 2]))


@settings(max_examples=200, deadline=None)
@given(f=cells(), p=st.sampled_from([1.0, 1.5, 2.0, 7.0]))
def test_norm_preserved(f, p):
    prof = decreasing_rearrangement(f)
    direct = float(np.sum(f.values**p * f.measures))
    assert float(np.sum(prof.values**p * prof.widths)) == pytest.approx(direct, rel=1e-12, abs=1e-300)


@settings(max_examples=200, deadline=None)
@given(f=cells(), t=st.floats(0, 11))
def test_equimeasurable(f, t):
    prof = decreasing_rearrangement(f)
    assert prof.distribution(t) == pytest.approx(distribution(f, t), rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(f=cells(), fractions=st.lists(st.floats(1e-6, 1.5), min_size=1, max_size=10))
def test_maximal_dominates_and_decreases(f, fractions):
    prof = decreasing_rearrangement(f)
    s = np.sort(np.array(fractions) * prof.total)
    mf = [maximal_profile(prof, x) for x in s]
    for x, m in zip(s, mf):
        assert prof(x) <= m * (1 + 1e-12) + 1e-12
    assert all(b <= a * (1 + 1e-12) + 1e-12 for a, b in zip(mf, mf[1:]))


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_hardy_littlewood(data):
    f = data.draw(cells())
    g_vals = data.draw(st.lists(st.floats(0, 10), min_size=f.values.size, max_size=f.values.size))
    g = MeasuredSamples(g_vals, f.measures)
    paired = float(np.sum(f.values * g.values * f.measures))
    assert hardy_littlewood_gap(f, g) >= -1e-12 * max(paired, 1.0)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_rearrangement_monotone(data):
    f = data.draw(cells())
    bump = data.draw(st.lists(st.floats(0, 3), min_size=f.values.size, max_size=f.values.size))
    g = MeasuredSamples(f.values + np.array(bump), f.measures)
    pf, pg = decreasing_rearrangement(f), decreasing_rearrangement(g)
    s = np.linspace(0, f.total, 97, endpoint=False)
    assert np.all(pf(s) <= pg(s) * (1 + 1e-15))


def test_indicator_becomes_ball():
    mass = 3.0
    f = MeasuredSamples([1.0, 0.0, 1.0], [1.0, 4.0, 2.0])
    _, sigma = measures(4)
    radius = (mass / sigma) ** 0.25
    grid = make_log_grid(4, 1e-3, 3.0, 500)
    star = schwarz(f, 4, grid)
    inside = grid.nodes < radius * (1 - 1e-9)
    outside = grid.nodes > radius * (1 + 1e-9)
    assert np.all(star.values[inside] == 1.0) and np.all(star.values[outside] == 0.0)


def test_monotone_map_commutes():
    rng = np.random.default_rng(3)
    f = random_samples(rng, 40)
    grid = make_log_grid(4, 1e-3, 3.0, 400)
    psi = lambda v: np.sqrt(v) + v**3
    lhs = schwarz(f.map(psi), 4, grid).values
    rhs = psi(schwarz(f, 4, grid).values)
    assert np.allclose(lhs, rhs, rtol=1e-14, atol=0)


@settings(max_examples=100, deadline=None)
@given(f=cells(), wp=st.sampled_from([1.0, 1.5, 2.0]))
def test_radial_decay_bound(f, wp):
    star = schwarz(f, 4)
    omega, _ = measures(4)
    bound = star.r ** (-4 / wp) * (4 / omega) ** (1 / wp) * f.lp_norm(wp)
    assert np.all(star.values <= bound * (1 + 1e-12))


def test_schwarz_is_nonincreasing_and_equimeasurable():
    rng = np.random.default_rng(8)
    f = random_samples(rng, 50)
    star = schwarz(f, 4, make_log_grid(4, 1e-4, 5.0, 4000))
    assert np.all(np.diff(star.values) <= 0)
    assert star.values[0] == pytest.approx(f.values.max())


def test_property_suite_reports_all_properties():
    rows = property_suite(trials=50, seed=1)
    assert len(rows) == 5
    assert all(count == 0 for _, _, count, _ in rows)
    with pytest.raises(ValueError):
        property_suite(trials=0)


def test_property_suite_deterministic():
    assert property_suite(trials=20, seed=4) == property_suite(trials=20, seed=4)


def test_random_samples_have_ties():
    rng = np.random.default_rng(0)
    f = random_samples(rng, 300)
    assert np.unique(f.values).size < f.values.size
    assert math.isfinite(f.total)
