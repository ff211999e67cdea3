import cmath
import math
import warnings

import numpy as np
import pytest

from trispec.core import EntryDistribution, SeedSpec, measure_from_samples
from trispec.eigensolve import char_poly_eval, eigenvalues
from trispec.ensembles import TridiagonalMatrix, sample_simple
from trispec.reference_laws import toeplitz_esd
from trispec.stieltjes import (
    ParticlePopulation,
    TransformGrid,
    arcsine_transform,
    branch_sqrt,
    compose_transform,
    corner_recursion,
    default_eta,
    empirical_transform,
    grid_from_function,
    grid_from_measure,
    invert_density,
    particle_fixpoint,
    population_w1,
    scale_mixture_transform,
    semicircle_transform,
)


def test_branch_sqrt_upper_half_plane():
    assert branch_sqrt(4.0) == pytest.approx(2.0)
    assert branch_sqrt(-8.0) == pytest.approx(2.0 * math.sqrt(2) * 1j)
    rng = SeedSpec(1).generator()
    for _ in range(200):
        w = complex(rng.normal(), rng.normal())
        r = branch_sqrt(w)
        assert r.imag >= -1e-15
        assert r * r == pytest.approx(w, rel=1e-12)


def test_semicircle_closed_form():
    s = semicircle_transform(2j, 2.0)
    assert s == pytest.approx(1j * (1.0 - math.sqrt(2.0)), abs=1e-14)
    # total mass normalization along the imaginary axis
    for y in (1e3, 1e5):
        z = complex(0, y)
        assert z * semicircle_transform(z, 2.0) == pytest.approx(1.0, abs=1e-5)


def test_semicircle_algebraic_identity():
    rng = SeedSpec(2).generator()
    for _ in range(100):
        z = complex(rng.uniform(-4, 4), rng.uniform(0.05, 4))
        for r in (1.0, 2.0, 3.5):
            s = semicircle_transform(z, r)
            assert abs(s - 1.0 / (z - (r / 2.0) ** 2 * s)) < 1e-12


def test_arcsine_closed_form():
    assert arcsine_transform(2j, 2.0) == pytest.approx(-1j / (2.0 * math.sqrt(2.0)), abs=1e-14)
    for y in (1e3, 1e5):
        z = complex(0, y)
        assert z * arcsine_transform(z, 2.0) == pytest.approx(1.0, abs=1e-5)


def test_arcsine_matches_toeplitz_empirical_transform():
    mu = toeplitz_esd(4000)
    z = 1 + 1j
    assert abs(empirical_transform(mu, z) - arcsine_transform(z, 2.0)) < 2e-3


def test_empirical_transform_examples():
    z = 0.3 + 1.7j
    assert empirical_transform(measure_from_samples([0.0]), z) == pytest.approx(1.0 / z)
    assert empirical_transform(measure_from_samples([2.0]), z) == pytest.approx(1.0 / (z - 2.0))
    m = measure_from_samples([-1.0, 1.0])
    assert empirical_transform(m, 1j) == pytest.approx(-0.5j)


def test_transform_rejects_z_outside_upper_half_plane():
    with pytest.raises(ValueError):
        semicircle_transform(2.0 + 0j, 2.0)
    with pytest.raises(ValueError):
        empirical_transform(measure_from_samples([0.0]), 1 - 1j)


def test_corner_recursion_base_cases():
    z = 2j
    assert corner_recursion([], z) == pytest.approx(1.0 / z)
    assert corner_recursion([1.0], z) == pytest.approx(-0.4j)


def test_corner_recursion_matches_char_poly_ratio():
    rng = SeedSpec(3).generator()
    for _ in range(30):
        bs = rng.uniform(0.2, 1.5, 199)
        z = complex(rng.uniform(-2, 2), rng.uniform(0.5, 3))
        s = corner_recursion(bs, z)
        ratio = char_poly_eval(TridiagonalMatrix(np.zeros(200), bs), z).ratio()
        assert abs(s - ratio) / abs(s) < 1e-10


def test_particle_fixpoint_constant_law():
    res = particle_fixpoint(EntryDistribution.constant(1.0), 3j,
                            population=10_000, iterations=100, seed=SeedSpec(0))
    star = (3j - cmath.sqrt(complex(-13.0))) / 2.0
    assert star == pytest.approx(-0.302775637731995j, abs=1e-12)
    assert abs(res.population.mean() - star) < 1e-4
    assert res.final_w1 < 1e-4


def test_particle_fixpoint_degenerate_bernoulli():
    res = particle_fixpoint(EntryDistribution.bernoulli(0.0), 2j,
                            population=500, iterations=3, seed=SeedSpec(0), w1_stop=0.0)
    assert np.all(res.population.particles == 1.0 / 2j)


def test_particle_fixpoint_warns_outside_contraction_region():
    law = EntryDistribution.gaussian(0, 1.5)  # E b^2 = 2.25 > Im z
    with pytest.warns(UserWarning):
        particle_fixpoint(law, 2j, population=200, iterations=2, seed=SeedSpec(0))


def test_particle_invariants():
    law = EntryDistribution.uniform(0.0, 1.0)
    res = particle_fixpoint(law, 1.2j, population=5000, iterations=20, seed=SeedSpec(4))
    p = res.population.particles
    assert np.max(p.imag) <= 1e-14
    assert np.max(np.abs(p)) <= 1.0 / 1.2 + 1e-9
    with pytest.raises(ValueError):
        ParticlePopulation(z=1j, particles=np.array([0.5 + 0.5j]), generation=0)
    with pytest.raises(ValueError):
        ParticlePopulation(z=1j, particles=np.array([2.0 + 0j]), generation=0)


def test_contraction_bound_in_transient():
    # W1 ratio of early generations obeys E(b^2)/(Im z)^2 before the
    # finite-population noise floor; measured across independent seeds
    law = EntryDistribution.gaussian(0, 1)
    bound = law.second_moment() / 2.0**2
    ratios = []
    for s in range(6):
        res = particle_fixpoint(law, 2j, population=20_000, iterations=3,
                                seed=SeedSpec(60 + s), w1_stop=0.0)
        ratios.extend(res.contraction_ratios()[:2])
    arr = np.asarray(ratios)
    se = arr.std(ddof=1) / math.sqrt(arr.size)
    assert arr.mean() <= bound + 3.0 * se


def test_compose_transform_constant_law_gives_arcsine():
    law = EntryDistribution.constant(1.0)
    z = 3j
    p1 = particle_fixpoint(law, z, 20_000, 100, SeedSpec(1)).population
    p2 = particle_fixpoint(law, z, 20_000, 100, SeedSpec(2)).population
    comp = compose_transform(p1, p2, law, samples=50_000, seed=SeedSpec(3))
    assert abs(comp.value - arcsine_transform(z, 2.0)) < 1e-3


def test_compose_transform_degenerate_law():
    law = EntryDistribution.bernoulli(0.0)
    z = 1.5j
    p1 = particle_fixpoint(law, z, 100, 2, SeedSpec(0)).population
    p2 = particle_fixpoint(law, z, 100, 2, SeedSpec(1)).population
    comp = compose_transform(p1, p2, law, samples=1000, seed=SeedSpec(2))
    assert comp.value == pytest.approx(1.0 / z)
    assert comp.stderr == 0.0


def test_compose_transform_rejects_mismatched_z():
    law = EntryDistribution.constant(1.0)
    p1 = particle_fixpoint(law, 2j, 100, 2, SeedSpec(0)).population
    p2 = particle_fixpoint(law, 3j, 100, 2, SeedSpec(0)).population
    with pytest.raises(ValueError):
        compose_transform(p1, p2, law, samples=100, seed=SeedSpec(0))


def test_compose_matches_direct_resolvent_trace():
    law = EntryDistribution.gaussian(0, 1)
    z = 2j
    p1 = particle_fixpoint(law, z, 50_000, 200, SeedSpec(11)).population
    p2 = particle_fixpoint(law, z, 50_000, 200, SeedSpec(12)).population
    comp = compose_transform(p1, p2, law, samples=200_000, seed=SeedSpec(13))
    sims = []
    for r in range(8):
        esd = eigenvalues(sample_simple(4000, law, SeedSpec(14, r)), 1e-8).measure()
        sims.append(empirical_transform(esd, z))
    sims = np.asarray(sims)
    mean = sims.mean()
    se_sim = math.sqrt((sims.real.var(ddof=1) + sims.imag.var(ddof=1)) / sims.size)
    combined = 3.0 * math.sqrt(se_sim**2 + comp.stderr**2) + 2e-3
    assert abs(comp.value - mean) <= combined


def test_scale_mixture_reductions():
    mu = toeplitz_esd(50)
    z = 0.4 + 1.1j
    delta1 = measure_from_samples([1.0])
    delta0 = measure_from_samples([0.0])
    assert scale_mixture_transform(mu, delta1, z) == pytest.approx(empirical_transform(mu, z))
    assert scale_mixture_transform(mu, delta0, z) == pytest.approx(1.0 / z)
    # symmetric in which argument is the smaller atom list
    t3 = measure_from_samples([0.2, 0.7, 1.0])
    a = scale_mixture_transform(mu, t3, z)
    exact = sum(w * v / (z - x * t)
                for x, w in zip(mu.locations, mu.weights)
                for t, v in zip(t3.locations, t3.weights))
    assert a == pytest.approx(exact, rel=1e-12)


def test_transform_grid_validation():
    xs = np.linspace(-1, 1, 5)
    vals = np.full(5, -0.1j)
    TransformGrid(eta=0.1, xs=xs, values=vals)
    with pytest.raises(ValueError):
        TransformGrid(eta=0.0, xs=xs, values=vals)
    with pytest.raises(ValueError):
        TransformGrid(eta=0.1, xs=xs, values=np.full(5, 0.1j))
    with pytest.raises(ValueError):
        TransformGrid(eta=0.1, xs=xs[::-1].copy(), values=vals)


def test_invert_density_semicircle():
    xs = np.linspace(-3.0, 3.0, 4001)
    grid = grid_from_function(lambda z: semicircle_transform(z, 2.0), xs, 1e-3)
    res = invert_density(grid)
    i0 = int(np.argmin(np.abs(res.xs)))
    assert res.density[i0] == pytest.approx(1.0 / math.pi, abs=2e-3)
    assert 0.97 <= res.mass <= 1.01
    assert np.all(res.density >= 0.0)


def test_invert_density_arcsine():
    xs = np.linspace(-3.0, 3.0, 4001)
    grid = grid_from_function(lambda z: arcsine_transform(z, 2.0), xs, 1e-3)
    res = invert_density(grid)
    i0 = int(np.argmin(np.abs(res.xs)))
    assert res.density[i0] == pytest.approx(1.0 / (2.0 * math.pi), abs=2e-3)
    assert 0.97 <= res.mass <= 1.01


def test_invert_density_from_measure():
    mu = toeplitz_esd(500)
    xs = np.linspace(-3.0, 3.0, 1001)
    grid = grid_from_measure(mu, xs, default_eta(2.0, closed_form=False))
    res = invert_density(grid)
    assert 0.9 <= res.mass <= 1.05


def test_default_eta_rule():
    assert default_eta(2.0, closed_form=True) == 1e-3
    assert default_eta(2.0, closed_form=False) == pytest.approx(0.1)


def test_population_w1_translation():
    a = np.array([0.0 - 0.1j, 1.0 - 0.2j, 2.0 - 0.3j])
    b = a + 0.5
    assert population_w1(a, b) == pytest.approx(0.5, rel=1e-12)
    assert population_w1(a, a) == 0.0
    big = np.linspace(0, 1, 5000) - 0.1j
    assert population_w1(big, big + 0.25, cap=256) == pytest.approx(0.25, rel=1e-6)
