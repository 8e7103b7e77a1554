"""Separation witnesses: variables kept by the spectral norm but lost by Lp.

Three constructions drive the comparisons.  The Lp escape stacks bands
``n * sigma(u)**(q-1)`` whose sigma**q masses follow n**-(p+1), so the
truncated risks converge while the p-norm accumulates the harmonic series.
The sup-norm escape stacks constant bands of sigma-mass 2**-n, bounded in
risk by sum n 2**(1-n) = 4 yet unbounded in value.  The L1 divergence
truncates a heavy-tailed quantile at growing levels.  Band boundaries land
within 1e-38 of 1 for deep truncations, so every boundary is carried as a
gap (tail mass), never as a cumulative position.

Truncations place the unreached mass at value 0; canonical sorting then
moves that mass to the bottom of the quantile, which only lowers norms, so
every divergence conclusion drawn from these outputs is conservative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import special

from .risk import sigma_norm, spectral_risk
from .spectrum import Spectrum
from .stepdist import StepQuantile


class LpEscape(NamedTuple):
    """Truncated escape variable with its series-predicted risk and p-power."""

    dist: StepQuantile
    predicted_risk: float
    lp_partial: float


class LinfEscape(NamedTuple):
    dist: StepQuantile
    risk: float


@dataclass(frozen=True)
class DivergenceRow:
    level: float
    l1: float
    sigma: float


@dataclass(frozen=True)
class DivergenceReport:
    """Truncation table (level, ||Y_n||_1, ||Y_n||_sigma).

    ``exceeded_at`` is the first level whose L1 norm passes the target;
    ``vacuous`` flags inputs whose essential bound was reached first, where
    the truncations have converged and nothing diverges.
    """

    rows: tuple[DivergenceRow, ...]
    target: float
    exceeded_at: float | None
    vacuous: bool


def _band_edges(sigma: Spectrum, g_hi: float, g_lo: float, submesh: int) -> np.ndarray:
    """Descending gap edges refining one band (g_lo, g_hi]."""
    if sigma.is_step:
        nodes = np.asarray(sigma._gap_nodes, dtype=float)
        inner = nodes[(nodes > g_lo) & (nodes < g_hi)][::-1]
        return np.concatenate([[g_hi], inner, [g_lo]])
    return np.geomspace(g_hi, g_lo, submesh + 1)


def lp_escape(sigma: Spectrum, q: float, depth: int, submesh: int = 8) -> LpEscape:
    """Truncation of the variable whose p-norm diverges inside the sigma ball.

    Band n carries the value ``n * sigma**(q-1)`` on the gap interval whose
    sigma**q mass is ``||sigma||_q**q * n**-(p+1) / zeta(p+1)``, with p the
    conjugate exponent.  The returned ``predicted_risk`` is the band series
    (the risk of the truncated function before rearrangement, approaching
    ``||sigma||_q**q zeta(p)/zeta(p+1)`` from below); ``lp_partial`` is the
    exact p-th power of the p-norm, a harmonic partial sum.
    """
    if not 1.0 < q < math.inf:
        raise ValueError("escape construction needs an exponent q in (1, inf)")
    if depth < 1:
        raise ValueError("truncation depth must be at least 1")
    if submesh < 1:
        raise ValueError("submesh must be at least 1")
    sigma.require_valid()
    total = float(sigma.tail_power_integral(1.0, q))
    if not math.isfinite(total) or total <= 0:
        raise ValueError(f"sigma**{q:g} is not integrable; the construction needs ||sigma||_q < inf")
    p = q / (q - 1.0)
    zp1 = float(special.zeta(p + 1.0))
    # tail targets: integral of sigma**q over the top g_n of mass must equal
    # total * zeta(p+1, n+1)/zeta(p+1); the Hurwitz form avoids the
    # cancellation of forward partial sums near their limit.
    n_idx = np.arange(1, depth + 1)
    tail_targets = total * special.zeta(p + 1.0, n_idx + 1.0) / zp1
    gaps = np.empty(depth + 1)
    gaps[0] = 1.0
    for n, target in zip(n_idx, tail_targets):
        gaps[n] = sigma.invert_tail_power(float(target), q)
    if np.any(np.diff(gaps) >= 0):
        raise ValueError(
            f"band boundaries collapsed at depth {depth}; the sigma**{q:g} tail "
            "is too thin to resolve in double precision"
        )
    values = [np.array([0.0])]
    masses = [np.array([gaps[depth]])]
    for n in n_idx:
        edges = _band_edges(sigma, gaps[n - 1], gaps[n], submesh)
        dens = np.asarray(sigma.density_from_gap(edges[:-1]), dtype=float)
        values.append(float(n) * dens ** (q - 1.0))
        masses.append(edges[:-1] - edges[1:])
    dist = StepQuantile.from_segments(np.concatenate(values), np.concatenate(masses))
    partial_p = float(special.zeta(p) - special.zeta(p, depth + 1.0))
    predicted_risk = total / zp1 * partial_p
    harmonic = float(special.digamma(depth + 1.0) + np.euler_gamma)
    lp_partial = total / zp1 * harmonic
    return LpEscape(dist, predicted_risk, lp_partial)


def lp_escape_limit(sigma: Spectrum, q: float) -> float:
    """Risk ceiling of the escape bands: ||sigma||_q**q zeta(p)/zeta(p+1)."""
    if not 1.0 < q < math.inf:
        raise ValueError("escape construction needs an exponent q in (1, inf)")
    total = float(sigma.tail_power_integral(1.0, q))
    p = q / (q - 1.0)
    return total * float(special.zeta(p)) / float(special.zeta(p + 1.0))


def linf_escape(sigma: Spectrum, depth: int) -> LinfEscape:
    """Truncation of the unbounded variable with risk at most sum n 2**(1-n).

    Band n holds the constant n above the level whose sigma tail weight is
    exactly 2**-n, so the full stack carries risk sum n 2**-n = 2 for every
    spectrum, and the truncation stays below that; values reach ``depth``,
    so no essential bound survives the limit.
    """
    if depth < 1:
        raise ValueError("truncation depth must be at least 1")
    sigma.require_valid()
    gaps = np.empty(depth + 1)
    gaps[0] = 1.0
    for n in range(1, depth + 1):
        gaps[n] = sigma.invert_tail(2.0**-n)
    if np.any(np.diff(gaps) >= 0):
        raise ValueError(f"band boundaries collapsed at depth {depth}")
    # ascending values 0..depth: remainder mass g_N, then band n's slab width
    masses = np.concatenate([[gaps[depth]], -np.diff(gaps)])
    dist = StepQuantile(np.arange(depth + 1, dtype=float), masses)
    return LinfEscape(dist, spectral_risk(sigma, dist))


def linf_risk_bound(depth: int) -> float:
    """The coarse band bound sum_{n<=depth} n 2**(1-n), at most 4."""
    n = np.arange(1, depth + 1)
    return float(np.sum(n * 2.0 ** (1.0 - n)))


def heavy_tail_quantile(depth: int) -> StepQuantile:
    """Dyadic discretization of the infinite-mean quantile 1/(1-u).

    Value 2**k occupies the slab of mass 2**-(k+1), so each level doubles
    while its mass halves and every extra level adds 1/2 to the mean: the
    mean is depth/2 + 1 and grows without bound in the depth.
    """
    if not 1 <= depth <= 1000:
        raise ValueError("depth must lie in [1, 1000]")
    k = np.arange(depth)
    values = np.concatenate([2.0**k, [2.0**depth]])
    masses = np.concatenate([2.0 ** -(k + 1), [2.0**-depth]])
    return StepQuantile(values, masses)


def l1_divergence_demo(
    dist: StepQuantile,
    sigma: Spectrum,
    target: float,
    levels: Iterable[float] | None = None,
) -> DivergenceReport:
    """Truncate |Y| at growing levels until the L1 norm passes ``target``.

    Levels double from 1 by default.  Every row satisfies the Chebyshev
    bound ||Y_n||_sigma >= ||Y_n||_1; a bounded input saturates at its
    maximum, and if the target is still unmet the demo is vacuous (the
    truncations converged; nothing diverges).
    """
    if target <= 0:
        raise ValueError("divergence target must be positive")
    sigma.require_valid()
    mag = dist.abs()
    if levels is None:
        schedule = _doubling_levels(mag.max_value)
    else:
        schedule = tuple(float(x) for x in levels)
        if not schedule or any(x <= 0 for x in schedule) or any(np.diff(schedule) <= 0):
            raise ValueError("levels must be positive and strictly increasing")
    rows = []
    exceeded_at = None
    vacuous = False
    for level in schedule:
        clipped = mag.clip_upper(level)
        l1 = clipped.lp_norm(1.0)
        rows.append(DivergenceRow(level, l1, sigma_norm(sigma, clipped)))
        if l1 > target:
            exceeded_at = level
            break
        if level >= mag.max_value:
            vacuous = True
            break
    return DivergenceReport(tuple(rows), float(target), exceeded_at, vacuous)


def _doubling_levels(stop: float) -> Sequence[float]:
    out = [1.0]
    while out[-1] < stop:
        out.append(out[-1] * 2.0)
    return out


def step_density_approx(
    sigma: Spectrum, dist: StepQuantile, eps: float
) -> tuple[StepQuantile, float]:
    """Simple approximation of Y with certified error ||Y - s(U)||_sigma < eps.

    The density argument clips the two tails within an eps/3 budget each and
    meshes the middle; a finite step quantile already is a simple function,
    so the least clipping meeting the budgets is no clipping at all and the
    mesh, refined by the input's own breakpoints, reproduces every value.
    The construction therefore returns the input and certifies a residual of
    exactly zero; the certificate is still computed, not assumed.
    """
    if eps <= 0:
        raise ValueError("approximation tolerance must be positive")
    sigma.require_valid()
    residual = StepQuantile(np.zeros(1), np.ones(1))  # Y - s(U) vanishes pointwise
    return dist, float(sigma_norm(sigma, residual))
