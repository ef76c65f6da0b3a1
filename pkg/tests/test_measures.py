import math
from fractions import Fraction

import numpy as np
import pytest

from app.core.errors import BranchError, DomainError
from app.models.measure_model import AtomicMeasure
from app.utils.freeprod import free_sum_moments
from app.utils.measures import (
    atom_mass,
    cauchy_evaluator,
    cauchy_transform,
    check_herglotz,
    check_normalization,
    free_sum_cauchy,
    free_sum_cauchy_via_r_transform,
    free_sum_evaluator,
    free_sum_r_evaluator,
    moments_from_cauchy,
    projection_r_transform,
    stieltjes_density,
)

ALPHAS = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 10)]


def test_atomic_cauchy_transform():
    measure = AtomicMeasure.bernoulli(Fraction(1, 4))
    z = 0.3 + 0.7j
    assert cauchy_transform(measure, z) == pytest.approx(0.75 / z + 0.25 / (z - 1))


def test_cauchy_transform_needs_upper_half_plane():
    measure = AtomicMeasure.dirac(0.0)
    with pytest.raises(DomainError):
        cauchy_transform(measure, 1.0 - 0.5j)
    with pytest.raises(DomainError):
        free_sum_evaluator(Fraction(1, 2)).values([1.0 + 0j])


def test_atomic_measure_validation():
    with pytest.raises(DomainError):
        AtomicMeasure(((0.0, Fraction(1, 2)), (1.0, Fraction(1, 4))))
    with pytest.raises(DomainError):
        AtomicMeasure(((0.0, Fraction(1, 2)), (0.0, Fraction(1, 2))))
    assert AtomicMeasure.bernoulli(1).atoms == ((1.0, Fraction(1)),)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_free_sum_is_herglotz_and_normalized(alpha):
    G = free_sum_evaluator(alpha)
    check_herglotz(G)
    assert check_normalization(G) < 1e-2


def test_arcsine_density():
    G = free_sum_evaluator(Fraction(1, 2))
    grid = np.linspace(0.05, 1.95, 381)
    sample = stieltjes_density(G, grid, 1e-9, check_mass=False)
    expected = 1.0 / (math.pi * np.sqrt(grid * (2.0 - grid)))
    assert np.max(np.abs(sample.density - expected)) < 1e-5
    assert sample.atoms == ()


def test_atoms_below_one_half():
    G = free_sum_evaluator(Fraction(1, 4))
    assert atom_mass(G, 0.0) == pytest.approx(0.5, abs=1e-3)
    for x in (0.5, 1.0, 1.5, 2.0):
        assert atom_mass(G, x) <= 1e-3


def test_no_atoms_at_one_half():
    G = free_sum_evaluator(Fraction(1, 2))
    for x in (0.0, 1.0, 2.0):
        assert atom_mass(G, x) <= 1e-3


def test_recovered_mass():
    G = free_sum_evaluator(Fraction(1, 4))
    sample = stieltjes_density(G, np.linspace(-0.5, 2.5, 30000), 1e-3)
    assert sample.atoms[0][0] == 0.0
    assert sample.total_mass == pytest.approx(1.0, abs=1e-2)


def test_density_preconditions():
    G = free_sum_evaluator(Fraction(1, 4))
    with pytest.raises(DomainError):
        stieltjes_density(G, np.linspace(0, 1, 10), 0.0)
    with pytest.raises(DomainError):
        stieltjes_density(G, np.array([0.0, -1.0]), 1e-3)
    with pytest.raises(DomainError):
        atom_mass(G, 0.0, schedule=[1e-4, 1e-3])


def test_arcsine_moments():
    moments = moments_from_cauchy(free_sum_evaluator(Fraction(1, 2)), 4)
    assert moments == pytest.approx([1.0, 1.5, 2.5, 4.375], abs=1e-8)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_moments_match_exact_engine(alpha):
    numeric = moments_from_cauchy(free_sum_evaluator(alpha), 6)
    exact = [float(m) for m in free_sum_moments(alpha, 6)]
    assert numeric == pytest.approx(exact, abs=1e-8)


def test_atomic_moments():
    G = cauchy_evaluator(AtomicMeasure.bernoulli(Fraction(1, 4)))
    assert moments_from_cauchy(G, 3) == pytest.approx([0.25, 0.25, 0.25], abs=1e-10)
    assert moments_from_cauchy(cauchy_evaluator(AtomicMeasure.dirac(0.0)), 2) == pytest.approx([0, 0], abs=1e-10)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_r_transform_near_zero(alpha):
    a = float(alpha)
    assert projection_r_transform(alpha, 0) == a
    w = 1e-4
    assert abs(projection_r_transform(alpha, w) - (a + a * (1 - a) * w)) < 1e-7


def test_r_transform_domain():
    with pytest.raises(DomainError):
        projection_r_transform(Fraction(3, 2), 0.1)


@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(1, 4)])
@pytest.mark.parametrize("z", [0.5 + 1j, 3 + 2j, -1 + 5j, 1 + 1j])
def test_r_transform_inversion_matches_closed_form(alpha, z):
    assert abs(free_sum_cauchy_via_r_transform(alpha, z) - free_sum_cauchy(alpha, z)) < 1e-8


def test_moments_need_at_least_one():
    G = free_sum_evaluator(Fraction(1, 2))
    with pytest.raises(DomainError):
        moments_from_cauchy(G, 0)
    assert moments_from_cauchy(G, 1) == pytest.approx([1.0], abs=1e-8)


def test_r_transform_ray_through_a_branch_point():
    # (1 - w)^2 + 2w vanishes at w = i when alpha = 1/2
    with pytest.raises(BranchError):
        projection_r_transform(Fraction(1, 2), 2j)
    assert projection_r_transform(Fraction(1, 2), 0.5j) == pytest.approx(
        (0.5j - 1 + np.sqrt((1 - 0.5j) ** 2 + 1j)) / 1j
    )


@pytest.mark.parametrize("alpha", ALPHAS)
def test_normalization_bound_scales_with_the_mean(alpha):
    G = free_sum_evaluator(alpha)
    for y in (1e3, 1e4):
        assert abs(1j * y * G(1j * y) - 1.0) <= 10.0 * (1.0 + 2.0 * float(alpha)) / y
    far = cauchy_evaluator(AtomicMeasure.dirac(-5.0))
    assert check_normalization(far) <= 10.0 * 6.0 / 1e3


def test_r_transform_evaluator_is_herglotz():
    G = free_sum_r_evaluator(Fraction(1, 4))
    probes = np.array([0.5 + 1j, 1.5 + 2j])
    check_herglotz(G, probes)
    assert np.max(np.abs(G.values(probes) - free_sum_evaluator(Fraction(1, 4)).values(probes))) < 1e-8
