"""Decay-law discrimination for visibility data.

Both candidate laws become straight lines after a log transform
``f = ln v``: exponential decay is linear in ``t`` (f = a t + b) and
Gaussian decay is linear in ``t^2`` (f = A t^2 + B).  Each family is fitted
by unweighted least squares and scored by its accumulated squared deviation
(asd); the family with the smaller asd wins unless the relative margin falls
inside a tie band.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import streams
from .errors import (
    DegenerateDesign,
    NonPositiveVisibility,
    OrderError,
    RangeError,
)

DEFAULT_TIE_THRESHOLD = 0.02

_SYNTH_LABEL = "synthetic"


class DecayFamily(enum.Enum):
    EXPONENTIAL = "exponential"  # ln v linear in t
    GAUSSIAN = "gaussian"        # ln v linear in t^2


@dataclass(frozen=True)
class VisibilityDataset:
    """Measured (or synthesized) visibility samples on an increasing grid."""

    times: np.ndarray
    visibility: np.ndarray
    err: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).reshape(-1).copy()
        v = np.asarray(self.visibility, dtype=float).reshape(-1).copy()
        err = (None if self.err is None
               else np.asarray(self.err, dtype=float).reshape(-1).copy())
        if t.size != v.size or (err is not None and err.size != t.size):
            raise ValueError("times, visibility, err must have equal length")
        if t.size < 3:
            raise DegenerateDesign("need at least 3 points")
        if not np.all(np.isfinite(t)):
            raise ValueError("non-finite time")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise OrderError("times must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise RangeError("non-finite visibility")
        if np.any(v <= 0.0) or np.any(v > 1.0 + 1e-9):
            raise RangeError("visibility must lie in (0, 1]")
        if err is not None and (not np.all(np.isfinite(err))
                                or np.any(err < 0)):
            raise RangeError("visibility_err must be finite and >= 0")
        for arr in (t, v) + ((err,) if err is not None else ()):
            arr.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "visibility", v)
        object.__setattr__(self, "err", err)
        object.__setattr__(self, "label", str(self.label))

    def __len__(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class LogPoint:
    """One log-visibility sample f = ln v at time t."""

    t: float
    f: float

    def __post_init__(self):
        t, f = float(self.t), float(self.f)
        if not (math.isfinite(t) and math.isfinite(f)):
            raise ValueError("t and f must be finite")
        if f > 1e-9:
            raise RangeError(f"f = {f!r} exceeds ln of a unit visibility")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "f", f)


def log_transform(ds) -> list[LogPoint]:
    """Log-visibility points of a dataset; rejects v <= 0 explicitly."""
    times = np.asarray(ds.times, dtype=float)
    vis = np.asarray(ds.visibility, dtype=float)
    for i, (t, v) in enumerate(zip(times, vis)):
        if not v > 0.0:
            raise NonPositiveVisibility(
                f"visibility {v!r} at t={t!r} (point {i}) is not > 0")
    return [LogPoint(float(t), float(math.log(v)))
            for t, v in zip(times, vis)]


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of one decay family to log-visibility data.

    ``p0`` is the intercept (b or B), ``p1`` the decay coefficient (a or A);
    ``asd`` is the accumulated squared deviation of the fit.
    """

    family: DecayFamily
    p0: float
    p1: float
    asd: float

    def model(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        u = t if self.family is DecayFamily.EXPONENTIAL else t * t
        return self.p0 + self.p1 * u


def _regressor(family: DecayFamily, t: np.ndarray) -> np.ndarray:
    return t if family is DecayFamily.EXPONENTIAL else t * t


def _fit(family: DecayFamily, pts: Sequence[LogPoint]) -> FitResult:
    if len(pts) < 2:
        raise DegenerateDesign("need at least 2 points")
    t = np.array([p.t for p in pts])
    f = np.array([p.f for p in pts])
    u = _regressor(family, t)
    du = u - u.mean()
    suu = float(np.dot(du, du))
    if suu == 0.0:
        raise DegenerateDesign(
            f"regressor {'t' if family is DecayFamily.EXPONENTIAL else 't^2'}"
            " takes a single value")
    slope = float(np.dot(du, f - f.mean()) / suu)
    intercept = float(f.mean() - slope * u.mean())
    resid = f - (intercept + slope * u)
    return FitResult(family=family, p0=intercept, p1=slope,
                     asd=float(np.dot(resid, resid)))


def fit_linear(pts: Sequence[LogPoint]) -> FitResult:
    """Least squares for f = a t + b (exponential visibility decay)."""
    return _fit(DecayFamily.EXPONENTIAL, pts)


def fit_quadratic_pure(pts: Sequence[LogPoint]) -> FitResult:
    """Least squares for f = A t^2 + B (Gaussian visibility decay)."""
    return _fit(DecayFamily.GAUSSIAN, pts)


@dataclass(frozen=True)
class SieveVerdict:
    """Outcome of the two-family comparison.

    ``winner`` is None for a tie; ``margin`` is |asd_exp - asd_gauss|
    relative to the larger of the two.
    """

    winner: DecayFamily | None
    asd_exp: float
    asd_gauss: float
    margin: float

    @property
    def label(self) -> str:
        return "tie" if self.winner is None else self.winner.value


def verdict_from_asd(asd_exp: float, asd_gauss: float,
                     tie_threshold: float = DEFAULT_TIE_THRESHOLD
                     ) -> SieveVerdict:
    """Pick the family with the strictly smaller asd, up to the tie band."""
    asd_exp, asd_gauss = float(asd_exp), float(asd_gauss)
    for name, v in (("asd_exp", asd_exp), ("asd_gauss", asd_gauss)):
        if not math.isfinite(v) or v < 0:
            raise ValueError(f"{name} must be finite and >= 0")
    if not (math.isfinite(tie_threshold) and tie_threshold >= 0):
        raise ValueError("tie_threshold must be finite and >= 0")
    larger = max(asd_exp, asd_gauss)
    margin = 0.0 if larger == 0.0 else abs(asd_exp - asd_gauss) / larger
    if asd_exp == asd_gauss or margin < tie_threshold:
        winner = None
    else:
        winner = (DecayFamily.EXPONENTIAL if asd_exp < asd_gauss
                  else DecayFamily.GAUSSIAN)
    return SieveVerdict(winner=winner, asd_exp=asd_exp, asd_gauss=asd_gauss,
                        margin=margin)


def sieve(ds: VisibilityDataset,
          tie_threshold: float = DEFAULT_TIE_THRESHOLD
          ) -> tuple[FitResult, FitResult, SieveVerdict]:
    """Fit both decay families to a dataset and compare their asd."""
    pts = log_transform(ds)
    fit_exp = fit_linear(pts)
    fit_gauss = fit_quadratic_pure(pts)
    verdict = verdict_from_asd(fit_exp.asd, fit_gauss.asd, tie_threshold)
    return fit_exp, fit_gauss, verdict


def generate_synthetic(family: DecayFamily, p0: float, p1: float, times,
                       noise_std: float, seed: int) -> VisibilityDataset:
    """Draw v = exp(model(t) + eps), eps ~ N(0, noise_std^2), on a time grid.

    Raises RangeError when a drawn visibility leaves (0, 1].  The reported
    per-point error is the delta-method value noise_std * v.
    """
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size < 3:
        raise DegenerateDesign("need at least 3 points")
    if not isinstance(family, DecayFamily):
        raise ValueError("family must be a DecayFamily")
    if not (math.isfinite(noise_std) and noise_std >= 0):
        raise ValueError("noise_std must be finite and >= 0")
    f = p0 + p1 * _regressor(family, times)
    if noise_std == 0.0:
        eps = np.zeros_like(times)
    else:
        eps = streams.sample_blocks(
            lambda rng, count: rng.normal(0.0, noise_std, size=count),
            times.size, seed=seed, label=_SYNTH_LABEL)
    v = np.exp(f + eps)
    if np.any(v > 1.0 + 1e-9) or np.any(v <= 0.0):
        raise RangeError("synthetic visibility left (0, 1]; "
                         "check signs and magnitudes of p0, p1")
    err = None if noise_std == 0.0 else noise_std * v
    return VisibilityDataset(times=times, visibility=v, err=err,
                             label=f"synthetic-{family.value}")
