"""Step distribution models: finite quantile functions and paired samples.

``StepQuantile`` is the canonical form of a finitely supported random
variable: nondecreasing segment values with strictly positive segment
masses summing to one.  Masses are the primary data and tail sums are
precomputed, because the extremal constructions create segments whose
cumulative positions differ from 1.0 by far less than one ulp: positions
collapse in floating point, masses do not.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .spectrum import Spectrum


class InputFormatError(ValueError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, eq=False)
class StepQuantile:
    """Nondecreasing step quantile function on [0, 1).

    Direct construction expects canonical data (sorted values, positive
    masses); use :meth:`from_samples` or :meth:`from_segments` for raw input.
    """

    values: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        mass = np.asarray(self.masses, dtype=float)
        if vals.ndim != 1 or mass.ndim != 1 or vals.size != mass.size or vals.size == 0:
            raise ValueError("values and masses must be equal-length, nonempty 1-d arrays")
        if not np.all(np.isfinite(vals)):
            raise ValueError("quantile values must be finite")
        if np.any(mass <= 0) or not np.all(np.isfinite(mass)):
            raise ValueError("segment masses must be strictly positive and finite")
        if np.any(np.diff(vals) < 0):
            raise ValueError("quantile values must be nondecreasing")
        total = float(mass.sum())
        if total <= 0:
            raise ValueError("total mass must be positive")
        if total != 1.0:
            mass = mass / total
        vals = vals.copy() if vals is self.values else vals
        vals.setflags(write=False)
        mass.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "masses", mass)
        # suffix sums: tail_masses[k] is the mass strictly above segment k-1
        tails = np.concatenate([np.cumsum(mass[::-1])[::-1], [0.0]])
        tails.setflags(write=False)
        object.__setattr__(self, "tail_masses", tails)

    def __repr__(self) -> str:
        return f"StepQuantile(values={self.values.tolist()}, masses={self.masses.tolist()})"

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_samples(cls, values, weights=None) -> "StepQuantile":
        """Sorted, tie-merged, weight-normalized quantile of a sample."""
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("need a nonempty 1-d sample")
        if weights is None:
            w = np.full(vals.size, 1.0 / vals.size)
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != vals.shape:
                raise ValueError("weights must match the sample in length")
            if np.any(w <= 0) or not np.all(np.isfinite(w)):
                raise ValueError("weights must be strictly positive and finite")
        return cls.from_segments(vals, w)

    @classmethod
    def from_segments(cls, values, masses) -> "StepQuantile":
        """Canonicalize raw (value, mass) segments: sort, merge ties, drop zeros."""
        vals = np.asarray(values, dtype=float)
        mass = np.asarray(masses, dtype=float)
        if np.any(mass < 0):
            raise ValueError("segment masses must be nonnegative")
        keep = mass > 0
        vals, mass = vals[keep], mass[keep]
        if vals.size == 0:
            raise ValueError("no segments with positive mass")
        order = np.argsort(vals, kind="stable")
        vals, mass = vals[order], mass[order]
        # merge exact ties so breakpoints stay strictly increasing
        fresh = np.concatenate([[True], np.diff(vals) != 0])
        idx = np.cumsum(fresh) - 1
        merged = np.zeros(int(idx[-1]) + 1)
        np.add.at(merged, idx, mass)
        return cls(vals[fresh], merged)

    @classmethod
    def from_csv(cls, path) -> "StepQuantile":
        values, weights = read_samples_csv(path)
        return cls.from_samples(values, weights)

    # -- derived views ----------------------------------------------------

    @property
    def breakpoints(self) -> np.ndarray:
        """Cumulative positions 0 = u_0 < ... < u_m = 1 (display/bucketing).

        Segments within one ulp of 1 collapse here; tail-critical arithmetic
        must use ``tail_masses`` instead.
        """
        bp = np.concatenate([[0.0], np.cumsum(self.masses)])
        bp[-1] = 1.0
        return bp

    @property
    def n_segments(self) -> int:
        return int(self.values.size)

    @property
    def max_value(self) -> float:
        return float(self.values[-1])

    @property
    def min_value(self) -> float:
        return float(self.values[0])

    @property
    def mean(self) -> float:
        return float(np.dot(self.values, self.masses))

    # -- point evaluation --------------------------------------------------

    def quantile(self, p: float) -> float:
        """Left-continuous lower quantile: inf{y : P(Y <= y) >= p}... evaluated
        on the step data as the value whose cumulative interval contains p."""
        if not 0.0 <= p < 1.0:
            raise ValueError("quantile levels lie in [0, 1)")
        cum = np.cumsum(self.masses)
        idx = int(np.searchsorted(cum, p, side="right"))
        idx = min(idx, self.values.size - 1)
        return float(self.values[idx])

    def upper_integral(self, gaps):
        """Integral of the quantile over the top ``g`` of mass, per gap.

        Computed from tail masses, so gaps far below one ulp of 1 are exact.
        """
        g = np.atleast_1d(np.asarray(gaps, dtype=float))
        scalar = np.ndim(gaps) == 0
        T = self.tail_masses
        hi = np.minimum(T[:-1], g[:, None])
        overlap = np.clip(hi - T[1:], 0.0, None)
        out = overlap @ self.values
        return float(out[0]) if scalar else out

    def value_at_gap(self, gaps):
        """Quantile value carried at tail-mass position ``g`` from the top.

        Segment k owns gaps (T_{k+1}, T_k]; the gap coordinate keeps lookups
        meaningful where cumulative breakpoints collapse against 1.
        """
        g = np.atleast_1d(np.asarray(gaps, dtype=float))
        scalar = np.ndim(gaps) == 0
        T = self.tail_masses
        idx = np.clip(np.searchsorted(-T, -g, side="right") - 1, 0, self.values.size - 1)
        out = self.values[idx]
        return float(out[0]) if scalar else out

    # -- transforms --------------------------------------------------------

    def abs(self) -> "StepQuantile":
        return StepQuantile.from_segments(np.abs(self.values), self.masses)

    def shift(self, c: float) -> "StepQuantile":
        return StepQuantile(self.values + float(c), self.masses)

    def scale(self, factor: float) -> "StepQuantile":
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        if factor == 0:
            return StepQuantile(np.zeros(1), np.ones(1))
        return StepQuantile(self.values * float(factor), self.masses)

    def clip_upper(self, level: float) -> "StepQuantile":
        return StepQuantile.from_segments(np.minimum(self.values, float(level)), self.masses)

    def lp_norm(self, p: float) -> float:
        if p < 1:
            raise ValueError("Lp norms need p >= 1")
        a = np.abs(self.values)
        if math.isinf(p):
            return float(a[-1] if a[-1] >= a[0] else a[0])
        with np.errstate(over="ignore"):
            power = float(np.dot(a**p, self.masses))
        if math.isinf(power):
            return math.inf
        return float(power ** (1.0 / p))


@dataclass(frozen=True, eq=False)
class PairedSample:
    """Weighted joint rows (y_i, z_i, w_i) with positive weights summing to 1."""

    y: np.ndarray
    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        z = np.asarray(self.z, dtype=float)
        w = np.asarray(self.w, dtype=float)
        if not (y.ndim == z.ndim == w.ndim == 1 and y.size == z.size == w.size and y.size > 0):
            raise ValueError("paired sample needs equal-length nonempty y, z, w")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be strictly positive and finite")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")
        for arr, name in ((y, "y"), (z, "z"), (w, "w")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __repr__(self) -> str:
        return f"PairedSample(n={self.y.size})"

    def y_marginal(self) -> StepQuantile:
        return StepQuantile.from_segments(self.y, self.w)

    def z_marginal(self) -> StepQuantile:
        return StepQuantile.from_segments(self.z, self.w)


def _comonotone_rows(
    values: np.ndarray, masses: np.ndarray, sigma: Spectrum
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Refine an explicit segment arrangement against sigma's gap cells.

    Returns (value, z, width) rows where z is the average density over the
    refined piece, making sum(w * value * z) the exact quantile integral.
    """
    tails = np.concatenate([np.cumsum(masses[::-1])[::-1], [0.0]])
    seg_gaps = tails  # descending, one boundary per segment edge
    extra = np.asarray(getattr(sigma, "_gap_nodes", np.array([0.0, 1.0])), dtype=float)
    extra = extra[(extra > 0.0) & (extra < seg_gaps[0])]
    grid = np.unique(np.concatenate([seg_gaps, extra]))[::-1]  # descending gaps
    widths = grid[:-1] - grid[1:]
    # piece i spans gaps (grid[i+1], grid[i]]; segment k owns gaps
    # (tails[k+1], tails[k]], so match on the piece's upper gap
    seg_idx = np.searchsorted(-seg_gaps, -grid[:-1], side="right") - 1
    seg_idx = np.clip(seg_idx, 0, values.size - 1)
    svals = np.asarray(sigma.tail_from_gap(grid), dtype=float)
    sig_mass = svals[:-1] - svals[1:]
    keep = widths > 0
    widths, sig_mass, seg_idx = widths[keep], sig_mass[keep], seg_idx[keep]
    z = sig_mass / widths
    return values[seg_idx], z, widths


def comonotone_pair(dist: StepQuantile, sigma: Spectrum) -> PairedSample:
    """Couple Y with sigma(U) comonotonically on a common refinement.

    The z column carries the average density over each refined piece, so the
    weighted pairing equals the quantile integral of the risk functional.
    """
    sigma.require_valid()
    y, z, w = _comonotone_rows(dist.values, dist.masses, sigma)
    return PairedSample(y, z, w)


# -- sample files -------------------------------------------------------------


def _parse_row(row: list[str], lineno: int, expect: int | None) -> tuple[tuple[float, ...], int]:
    cells = [c.strip() for c in row]
    if len(cells) not in (1, 2):
        raise InputFormatError(f"expected 1 or 2 columns, got {len(cells)}", lineno)
    if expect is not None and len(cells) != expect:
        raise InputFormatError(
            f"inconsistent column count: expected {expect}, got {len(cells)}", lineno
        )
    try:
        parsed = tuple(float(c) for c in cells)
    except ValueError as exc:
        raise InputFormatError(f"non-numeric cell: {exc}", lineno) from None
    if any(not math.isfinite(v) for v in parsed):
        raise InputFormatError("sample cells must be finite numbers", lineno)
    return parsed, len(cells)


def read_samples_csv(path) -> tuple[np.ndarray, np.ndarray | None]:
    """Read observations from CSV: ``value`` or ``value,weight`` per row.

    A header row is detected by a non-numeric first row and skipped.  Blank
    lines are ignored.  Weights, when present, must be strictly positive.
    """
    rows: list[tuple[float, ...]] = []
    expect: int | None = None
    first_data_seen = False
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if not first_data_seen:
                try:
                    parsed, ncols = _parse_row(row, lineno, None)
                except InputFormatError:
                    # non-numeric first row: a header
                    first_data_seen = True
                    continue
                first_data_seen = True
            else:
                parsed, ncols = _parse_row(row, lineno, expect)
            if expect is None:
                expect = ncols
            rows.append(parsed)
            if ncols == 2 and parsed[1] <= 0:
                raise InputFormatError(f"weight {parsed[1]:g} must be positive", lineno)
    if not rows:
        raise InputFormatError("no observations found")
    values = np.array([r[0] for r in rows])
    weights = np.array([r[1] for r in rows]) if expect == 2 else None
    return values, weights
