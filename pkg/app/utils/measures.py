"""
Cauchy transforms, the projection R-transform and the free sum of two
projections of equal trace, plus the numerical inversions used to read
atoms, densities and moments back off a Cauchy transform.

Convention: G(z) = integral of 1/(z - x) dmu(x) on Im z > 0, so that
G(z) ~ 1/z at infinity and Im G < 0 on the upper half-plane.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import BranchError, ConvergenceError, DomainError, IllConditionedError, MassDeficitError
from app.models.measure_model import AtomicMeasure, CauchyEvaluator, SpectralSample
from app.utils.exact_field import as_fraction

logger = logging.getLogger(__name__)

# points along [0, w] used to continue the square root in the R-transform
_RAY_STEPS = 256


# -------------------------------------------------
# Atomic measures
# -------------------------------------------------
def cauchy_transform(measure: AtomicMeasure, z):
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise DomainError("Cauchy transform evaluated off the upper half-plane")
    total = np.zeros_like(z)
    for x, m in measure.atoms:
        total = total + float(m) / (z - x)
    return total if total.ndim else complex(total)


def cauchy_evaluator(measure: AtomicMeasure) -> CauchyEvaluator:
    return CauchyEvaluator(
        fn=lambda z: cauchy_transform(measure, z),
        tag=f"atomic{measure.locations}",
        support=measure.support,
        mean=measure.mean,
        candidate_atoms=measure.locations,
        source=measure,
    )


# -------------------------------------------------
# R-transform of a projection of trace alpha
# -------------------------------------------------
def _check_alpha(alpha: Any, upper=Fraction(1, 2)) -> float:
    alpha = as_fraction(alpha)
    if not 0 < alpha <= upper:
        raise DomainError(f"alpha must lie in (0, {upper}], got {alpha}")
    return float(alpha)


def _r_branch(a: float, w: complex) -> tuple[complex, complex]:
    """
    R and S = sqrt((1 - w)^2 + 4 a w) continued along the segment [0, w]
    starting from S(0) = 1. R = 2a / (1 - w + S) is the rationalized form of
    (w - 1 + S) / (2w).
    """
    ts = np.linspace(0.0, 1.0, _RAY_STEPS + 1)[1:]
    ws = ts * w
    disc = (1 - ws) ** 2 + 4 * a * ws
    if np.min(np.abs(disc)) < 1e-14:
        raise BranchError(f"R-transform ray to w={w} passes through a branch point")
    s = np.sqrt(disc)
    prev = np.concatenate(([1.0 + 0j], s[:-1]))
    # principal sqrt may jump sign between neighbouring ray points
    flips = np.where(np.abs(s - prev) > np.abs(s + prev), -1.0, 1.0)
    # a flip of the previous point's sign is inherited by everything after it
    signs = np.cumprod(flips)
    s_end = signs[-1] * s[-1]
    denom = 1 - w + s_end
    if abs(denom) < 1e-14:
        raise BranchError(f"R-transform has a pole at w={w}")
    return 2 * a / denom, s_end


def projection_r_transform(alpha: Any, w: complex) -> complex:
    """
    R(w) = (w - 1 + sqrt((1 - w)^2 + 4 alpha w)) / (2w) on the branch with
    R(w) -> alpha as w -> 0. The square root starts at S(0) = 1 and is
    continued along [0, w]; a branch point or pole on that segment raises
    BranchError.
    """
    a = float(as_fraction(alpha))
    if not 0 < a < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    w = complex(w)
    if w == 0:
        return complex(a)
    r, _ = _r_branch(a, w)
    return r


# -------------------------------------------------
# Free sum of two projections of equal trace
# -------------------------------------------------
def _free_sum_values(a: float, z: np.ndarray) -> np.ndarray:
    # G = (-(1 - 2a) + sqrt((z-1)^2 - r^2)) / (z (z - 2)) = 1 / ((1 - 2a) + sqrt((z-1)^2 - r^2))
    b = 1.0 - 2.0 * a
    r = 2.0 * math.sqrt(a * (1.0 - a))
    root = np.sqrt(z - 1.0 - r) * np.sqrt(z - 1.0 + r)
    g = 1.0 / (b + root)
    flip = g.imag >= 0
    if np.any(flip):
        g = np.where(flip, 1.0 / (b - root), g)
    if np.any(g.imag >= 0):
        raise BranchError("no Herglotz branch for the free sum")
    return g


def free_sum_evaluator(alpha: Any) -> CauchyEvaluator:
    """Cauchy transform of p + q for free projections p, q of trace alpha."""
    a = _check_alpha(alpha)
    return CauchyEvaluator(
        fn=lambda z: _free_sum_values(a, z),
        tag=f"free-sum({as_fraction(alpha)})",
        support=(0.0, 2.0),
        mean=2.0 * a,
        candidate_atoms=(0.0, 1.0, 2.0),
    )


def free_sum_cauchy(alpha: Any, z: complex) -> complex:
    return free_sum_evaluator(alpha)(z)


def free_sum_cauchy_via_r_transform(alpha: Any, z: complex, steps: int = 40) -> complex:
    """
    Solve 2 R(w) + 1/w = z for w = G(z) by Newton's method, continued down
    from z + i T where G ~ 1/z.
    """
    a = _check_alpha(alpha)
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("Cauchy transform evaluated off the upper half-plane")

    heights = z.imag + np.geomspace(40.0, 1e-3, steps)
    heights = np.append(heights, z.imag)
    z0 = complex(z.real, heights[0])
    w = 1 / z0 + 2 * a / z0**2

    for y in heights:
        target = complex(z.real, y)
        for _ in range(60):
            r, s = _r_branch(a, w)
            ds = (w - 1 + 2 * a) / s
            dr = -2 * a * (-1 + ds) / (1 - w + s) ** 2
            f = 2 * r + 1 / w - target
            df = 2 * dr - 1 / w**2
            step = f / df
            w -= step
            if abs(step) <= 1e-15 * max(1.0, abs(w)):
                break
        else:
            raise ConvergenceError(f"Newton did not converge at z={target}")

    r, _ = _r_branch(a, w)
    if abs(2 * r + 1 / w - z) > 1e-10 * max(1.0, abs(z)) or w.imag >= 0:
        raise ConvergenceError(f"R-transform inversion failed at z={z}")
    return w


def free_sum_r_evaluator(alpha: Any) -> CauchyEvaluator:
    a = _check_alpha(alpha)
    return CauchyEvaluator(
        fn=np.vectorize(lambda z: free_sum_cauchy_via_r_transform(alpha, z), otypes=[complex]),
        tag=f"free-sum-r({as_fraction(alpha)})",
        support=(0.0, 2.0),
        mean=2.0 * a,
        candidate_atoms=(0.0, 1.0, 2.0),
    )


# -------------------------------------------------
# Reading a measure off its Cauchy transform
# -------------------------------------------------
def atom_mass(G: CauchyEvaluator, a: float, schedule: Sequence[float] | None = None) -> float:
    """
    lim_{eps -> 0} eps |G(a + i eps)|, extrapolated from the schedule.

    Three or more points are fitted to L + c1 sqrt(eps) + c2 eps, which
    absorbs the square-root edge behaviour of the continuous part; two
    points use linear Richardson extrapolation.
    """
    eps = np.asarray(settings.atom_schedule if schedule is None else schedule, dtype=float)
    if eps.size == 0 or np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise DomainError(f"atom schedule must be positive and strictly decreasing, got {eps.tolist()}")

    f = eps * np.abs(G.values(a + 1j * eps))
    if eps.size == 1:
        limit = f[0]
    elif eps.size == 2:
        limit = f[1] - (f[0] - f[1]) * eps[1] / (eps[0] - eps[1])
    else:
        basis = np.column_stack([np.ones_like(eps), np.sqrt(eps), eps])
        coef, *_ = np.linalg.lstsq(basis, f, rcond=None)
        limit = coef[0]

    if abs(limit - f[-1]) > settings.atom_stability_tol:
        raise ConvergenceError(
            f"{G.tag}: atom estimate at {a} unstable ({limit:.3g} vs {f[-1]:.3g} at eps={eps[-1]:g})"
        )
    return float(min(max(limit, 0.0), 1.0))


def stieltjes_density(
    G: CauchyEvaluator, grid: Sequence[float], eps: float, check_mass: bool = True
) -> SpectralSample:
    """
    Density -Im G(x + i eps) / pi on ``grid`` after subtracting the atoms
    detected at the evaluator's candidate points.
    """
    grid = np.asarray(grid, dtype=float)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be a strictly increasing 1-d array")

    atoms = []
    for a in G.candidate_atoms:
        m = atom_mass(G, a)
        if m > settings.atom_floor:
            if np.any(np.abs(grid - a) < 1e-12 * max(1.0, abs(a))):
                raise DomainError(f"grid hits the atom at {a}")
            atoms.append((float(a), m))

    z = grid + 1j * eps
    g = G.values(z)
    for a, m in atoms:
        g = g - m / (z - a)
    density = np.clip(-g.imag / math.pi, 0.0, None)
    sample = SpectralSample(grid=grid, density=density, atoms=tuple(atoms))

    if check_mass and sample.total_mass < 1.0 - settings.mass_tolerance:
        raise MassDeficitError(
            f"{G.tag}: recovered mass {sample.total_mass:.4f} on [{grid[0]:g}, {grid[-1]:g}]"
        )
    logger.debug("%s: density on %d points, atoms %s", G.tag, grid.size, atoms)
    return sample


def moments_from_cauchy(G: CauchyEvaluator, k_max: int) -> list[float]:
    """
    Moments m_1..m_kmax from the Laurent coefficients of G at infinity, by the
    trapezoid rule on the circle |z| = 2R + 1 (R bounds the support). The
    lower half of the circle uses G(conj z) = conj G(z).
    """
    if k_max < 1:
        raise DomainError(f"k_max must be at least 1, got {k_max}")
    rho = 2.0 * max(G.support_radius, 1.0) + 1.0
    M = max(settings.contour_points, 4 * (k_max + 2))
    theta = 2.0 * math.pi * (np.arange(M) + 0.5) / M
    z = rho * np.exp(1j * theta)

    upper = z.imag > 0
    g = np.empty(M, dtype=complex)
    g[upper] = G.values(z[upper])
    g[~upper] = np.conj(G.values(np.conj(z[~upper])))

    powers = np.arange(M)
    coeffs = np.array([np.mean(z ** (k + 1) * g) for k in powers])

    tol = settings.moment_residual_tol
    if abs(coeffs[0] - 1.0) > tol:
        raise IllConditionedError(f"{G.tag}: zeroth moment {coeffs[0]:.6g} is not 1")
    for y in (4.0 * rho, 8.0 * rho):
        zy = 1j * y
        series = np.sum(coeffs * zy ** (-(powers + 1.0)))
        if abs(series - G(zy)) > tol * abs(G(zy)):
            raise IllConditionedError(f"{G.tag}: Laurent series residual too large at z={zy}")
    return [float(c.real) for c in coeffs[1 : k_max + 1]]


# -------------------------------------------------
# Transform sanity checks
# -------------------------------------------------
def herglotz_grid() -> np.ndarray:
    re = np.linspace(-2.0, 4.0, 13)
    im = np.array([1e-3, 1e-2, 0.1, 1.0, 10.0])
    return (re[:, None] + 1j * im[None, :]).ravel()


def check_herglotz(G: CauchyEvaluator, grid: np.ndarray | None = None) -> None:
    """Im G < 0 on the probe grid (strictly inside the upper half-plane)."""
    grid = herglotz_grid() if grid is None else np.asarray(grid, dtype=complex)
    values = G.values(grid)
    bad = grid[values.imag >= 0]
    if bad.size:
        raise BranchError(f"{G.tag}: Im G >= 0 at {bad[:3].tolist()}")


def check_normalization(G: CauchyEvaluator, radii: Sequence[float] = (1e3, 1e6)) -> float:
    """max |z G(z) - 1| over z = i y for the given radii; each must stay below 10 (1 + |m_1|) / y."""
    worst = 0.0
    for y in radii:
        z = 1j * y
        dev = abs(z * G(z) - 1.0)
        if dev > 10.0 * (1.0 + abs(G.mean)) / y:
            raise BranchError(f"{G.tag}: z G(z) does not tend to 1 (|zG - 1| = {dev:.3g} at |z| = {y:g})")
        worst = max(worst, dev)
    return worst


def consistency_grid() -> np.ndarray:
    re = np.array([-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0])
    im = np.array([1.0, 2.0, 5.0])
    return (re[:, None] + 1j * im[None, :]).ravel()
