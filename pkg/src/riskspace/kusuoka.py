"""Mixture representations: discrete Kusuoka measures and spectrum sets.

A step spectrum and a discrete measure on AVaR levels carry the same
information: the measure collects sigma's value at 0 as an atom at level 0
plus one atom of weight (1 - s) * jump at every jump point s, and the map
back accumulates w / (1 - a) per atom.  Both directions are exact on step
data, and the mixture identity sum w_i * AVaR_{a_i}(Y) = risk(Y) holds to
floating-point error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .risk import avar, sigma_norm, spectral_risk
from .spectrum import Spectrum, StepSpectrum
from .stepdist import StepQuantile

#: constructor rejects weight totals further than this from 1
WEIGHT_SUM_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class KusuokaMeasure:
    """Discrete probability measure on AVaR levels in [0, 1].

    Levels strictly increasing, weights positive; totals within 1e-10 of 1
    are normalized to exactly 1.  An atom exactly at level 1 is legal here
    (it weights the essential supremum) but blocks conversion to a spectrum.
    """

    levels: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        lv = np.asarray(self.levels, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if lv.ndim != 1 or w.ndim != 1 or lv.size != w.size or lv.size == 0:
            raise ValueError("levels and weights must be equal-length, nonempty 1-d arrays")
        if np.any((lv < 0) | (lv > 1)):
            raise ValueError("levels must lie in [0, 1]")
        if np.any(np.diff(lv) <= 0):
            raise ValueError("levels must be strictly increasing")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be strictly positive and finite")
        total = float(w.sum())
        if abs(total - 1.0) > WEIGHT_SUM_ATOL:
            raise ValueError(f"weights sum to {total:.12g}, not 1 within {WEIGHT_SUM_ATOL:g}")
        if total != 1.0:
            w = w / total
        lv = lv.copy() if lv is self.levels else lv
        lv.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "weights", w)

    def __repr__(self) -> str:
        atoms = ", ".join(f"({a:g}, {w:g})" for a, w in zip(self.levels, self.weights))
        return f"KusuokaMeasure([{atoms}])"

    @property
    def has_top_atom(self) -> bool:
        return bool(self.levels[-1] == 1.0)

    def atoms(self) -> list[tuple[float, float]]:
        return [(float(a), float(w)) for a, w in zip(self.levels, self.weights)]


def mu_from_sigma(sigma: Spectrum) -> KusuokaMeasure:
    """Mixing measure of a step spectrum: d(mu)(s) = (1 - s) d(sigma)(s).

    sigma's value at 0 becomes an atom at level 0; each upward jump of size
    d at breakpoint s becomes an atom of weight (1 - s) * d.
    """
    sigma.require_valid()
    if not sigma.is_step:
        raise TypeError(
            "mixing measures are exact for step spectra only; apply step_approx first"
        )
    assert isinstance(sigma, StepSpectrum)
    levels: list[float] = []
    weights: list[float] = []
    if sigma.values[0] > 0:
        levels.append(0.0)
        weights.append(float(sigma.values[0]))
    jump_points = sigma.breakpoints[1:-1]
    jumps = np.diff(sigma.values)
    for s, d in zip(jump_points, jumps):
        if d > 0:
            levels.append(float(s))
            weights.append(float((1.0 - s) * d))
    return KusuokaMeasure(np.array(levels), np.array(weights))


def sigma_from_mu(mu: KusuokaMeasure) -> StepSpectrum:
    """Spectrum of a mixing measure: sigma(u) = sum of w/(1-a) over atoms a <= u.

    Requires no atom at level 1; the essential-supremum component has no
    density on [0, 1).
    """
    if mu.has_top_atom:
        raise ValueError(
            f"measure has an atom at level 1 (weight {mu.weights[-1]:g}); a spectral "
            "density exists only when no mass sits at 1; drop or redistribute it first"
        )
    increments = mu.weights / (1.0 - mu.levels)
    if mu.levels[0] == 0.0:
        breakpoints = np.concatenate([[0.0], mu.levels[1:], [1.0]])
        values = np.cumsum(increments)
    else:
        breakpoints = np.concatenate([[0.0], mu.levels, [1.0]])
        values = np.concatenate([[0.0], np.cumsum(increments)])
    return StepSpectrum(breakpoints, values)


def mixture_risk(mu: KusuokaMeasure, dist: StepQuantile) -> float:
    """Mixture evaluation: sum of w_i * AVaR at level a_i."""
    return float(sum(w * avar(a, dist) for a, w in zip(mu.levels, mu.weights)))


@dataclass(frozen=True, eq=False)
class SpectrumSet:
    """Nonempty collection of valid spectra, taken as a sup-generator."""

    members: tuple[Spectrum, ...]

    def __init__(self, members: Iterable[Spectrum]):
        mem = tuple(members)
        if not mem:
            raise ValueError("a spectrum set must be nonempty")
        for m in mem:
            m.require_valid()
        object.__setattr__(self, "members", mem)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


def _member_list(spectra) -> Sequence[Spectrum]:
    return spectra.members if isinstance(spectra, SpectrumSet) else tuple(spectra)


def sup_risk(spectra, dist: StepQuantile) -> tuple[float, int]:
    """Supremum of member risks; returns (value, index of the first argmax)."""
    members = _member_list(spectra)
    if not members:
        raise ValueError("a spectrum set must be nonempty")
    best, best_idx = -np.inf, 0
    for i, sig in enumerate(members):
        val = spectral_risk(sig, dist)
        if val > best:
            best, best_idx = val, i
    return float(best), best_idx


def set_norm(spectra, dist: StepQuantile) -> float:
    """Supremum of the member norms over the set."""
    members = _member_list(spectra)
    if not members:
        raise ValueError("a spectrum set must be nonempty")
    return float(max(sigma_norm(sig, dist) for sig in members))


# -- file representation ------------------------------------------------------


def measure_from_dict(data: dict) -> KusuokaMeasure:
    if not isinstance(data, dict) or "atoms" not in data:
        raise ValueError("measure document must be an object with an 'atoms' field")
    atoms = data["atoms"]
    if not isinstance(atoms, list) or not all(
        isinstance(a, (list, tuple)) and len(a) == 2 for a in atoms
    ):
        raise ValueError("'atoms' must be a list of [level, weight] pairs")
    levels = np.array([float(a[0]) for a in atoms])
    weights = np.array([float(a[1]) for a in atoms])
    return KusuokaMeasure(levels, weights)


def measure_to_dict(mu: KusuokaMeasure) -> dict:
    return {"atoms": [[a, w] for a, w in mu.atoms()]}


def load_measure(path) -> KusuokaMeasure:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return measure_from_dict(data)
