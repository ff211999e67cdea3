import math
from fractions import Fraction

import numpy as np
import pytest

from trispec.core import EntryDistribution, SeedSpec
from trispec.ensembles import sample_simple, trace_power
from trispec.pathmoments import (
    ColoredWord,
    LatticePath,
    crossing_profile,
    enumerate_bridges,
    joint_moment,
    limit_moment,
    mixture_moment,
    word_from_letters,
)


def test_lattice_path_validation():
    LatticePath((1, -1))
    with pytest.raises(ValueError):
        LatticePath((1, 1))
    with pytest.raises(ValueError):
        LatticePath((1, 0, -1))
    assert LatticePath((1, 1, -1, -1)).positions == (0, 1, 2, 1, 0)


def test_enumerate_bridges_small():
    assert [p.steps for p in enumerate_bridges(0)] == [()]
    assert [p.steps for p in enumerate_bridges(2)] == [(1, -1), (-1, 1)]
    assert len(enumerate_bridges(4)) == 6
    assert enumerate_bridges(3) == []
    assert enumerate_bridges(7) == []


def test_enumerate_bridge_counts_match_binomial():
    for k in range(0, 13, 2):
        assert len(enumerate_bridges(k)) == math.comb(k, k // 2)


def test_enumeration_guard():
    with pytest.raises(ValueError):
        enumerate_bridges(26)
    with pytest.raises(ValueError):
        limit_moment(26, lambda k: 1.0)


def test_crossing_profiles():
    assert crossing_profile(LatticePath((1, -1))).counts == {0.5: 2}
    assert crossing_profile(LatticePath((1, 1, -1, -1))).counts == {0.5: 2, 1.5: 2}
    assert crossing_profile(LatticePath((1, -1, 1, -1))).counts == {0.5: 4}
    assert crossing_profile(LatticePath((-1, 1, -1, 1))).counts == {-0.5: 4}


def test_crossing_counts_sum_to_length():
    for k in range(0, 11, 2):
        for p in enumerate_bridges(k):
            prof = crossing_profile(p)
            assert prof.total() == k
            assert all(c > 0 and c % 2 == 0 for c in prof.counts.values())


def test_limit_moment_exact_identities():
    m2, m4 = Fraction(7, 3), Fraction(11, 5)
    acc = {2: m2, 4: m4}.__getitem__
    assert limit_moment(2, acc, Fraction(0)) == 2 * m2
    assert limit_moment(4, acc, Fraction(0)) == 4 * m2**2 + 2 * m4
    assert limit_moment(3, acc) == 0
    for j in range(1, 7):
        for alpha in (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(2)):
            assert limit_moment(2 * j, lambda k: Fraction(1), alpha) == \
                Fraction(math.comb(2 * j, j)) / (2 * alpha * j + 1)


def test_limit_moment_missing_moment_raises():
    with pytest.raises(KeyError):
        limit_moment(4, {2: 1.0}.__getitem__)


def test_limit_moment_matches_simulated_traces():
    # cross-module oracle: mean normalized trace of X^k at N=4000
    laws = [
        EntryDistribution.gaussian(0, 1),
        EntryDistribution.bernoulli(0.5),
        EntryDistribution.uniform(0.5, 1.5),  # noncentered
    ]
    for law in laws:
        sims = {k: [] for k in (2, 4, 6, 8, 10, 12)}
        for r in range(10):
            m = sample_simple(4000, law, SeedSpec(77, r))
            for k in sims:
                sims[k].append(trace_power(m, k))
        for k, vals in sims.items():
            arr = np.asarray(vals)
            pred = limit_moment(k, law.moment)
            se = arr.std(ddof=1) / math.sqrt(arr.size)
            assert abs(arr.mean() - pred) <= 3.0 * se, (law.label(), k)


def test_mixture_moment():
    m_x = lambda k: float(math.comb(k, k // 2))   # arcsine(-2, 2)
    one = lambda k: 1.0
    assert mixture_moment(4, m_x, one) == m_x(4)
    assert mixture_moment(3, m_x, one) == 0
    # T = U^alpha with U uniform: m_T(k) = 1/(alpha k + 1); the mixture
    # reproduces the power-profile limit moments
    for alpha in (0.0, 0.5, 1.0, 2.0):
        m_t = lambda k: 1.0 / (alpha * k + 1.0)
        for k in (2, 4, 6, 8):
            assert mixture_moment(k, m_x, m_t) == pytest.approx(
                limit_moment(k, one, alpha), rel=1e-13)


def test_colored_word_basics():
    w = word_from_letters("XYXY")
    assert w.colors == (1, 2, 1, 2)
    assert w.n_colors == 2
    with pytest.raises(ValueError):
        ColoredWord((0, 1))


def test_joint_moment_examples():
    m2 = 1.7
    centered = {1: 0.0, 2: m2, 3: 0.0, 4: 5.0}.__getitem__
    assert joint_moment(ColoredWord((1, 1)), [centered]) == pytest.approx(2 * m2)
    other = {1: 0.0, 2: 0.9}.__getitem__
    assert joint_moment(ColoredWord((1, 2)), [centered, other]) == 0.0
    assert joint_moment(ColoredWord((1, 2, 1, 2)), [centered, other]) == \
        pytest.approx(2 * m2 * 0.9)


def test_joint_moment_uses_odd_moments():
    # noncentered colors: tr(XY) -> 2 E(b1) E(b2)
    law1 = EntryDistribution.bernoulli(0.3)
    law2 = EntryDistribution.uniform(0.0, 1.0)
    pred = joint_moment(ColoredWord((1, 2)), [law1.moment, law2.moment])
    assert pred == pytest.approx(2 * 0.3 * 0.5)
    sims = []
    for r in range(10):
        mx = sample_simple(2000, law1, SeedSpec(5, 2 * r))
        my = sample_simple(2000, law2, SeedSpec(5, 2 * r + 1))
        from trispec.ensembles import word_trace
        sims.append(word_trace([mx, my]))
    arr = np.asarray(sims)
    assert abs(arr.mean() - pred) <= 3 * arr.std(ddof=1) / math.sqrt(10) + 1e-3


def test_joint_single_color_reduces_to_limit_moment():
    for law in (EntryDistribution.gaussian(0, 1), EntryDistribution.bernoulli(0.3)):
        for k in (2, 4, 6, 8):
            w = ColoredWord((1,) * k)
            assert joint_moment(w, [law.moment]) == pytest.approx(
                limit_moment(k, law.moment), rel=1e-13)


def test_joint_moment_validation():
    with pytest.raises(ValueError):
        joint_moment(ColoredWord((1, 2)), [lambda k: 1.0])
    with pytest.raises(ValueError):
        joint_moment(ColoredWord((1,) * 26), [lambda k: 1.0])
