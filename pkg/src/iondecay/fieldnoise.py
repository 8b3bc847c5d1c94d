"""Dephasing of the ion pair by a fluctuating magnetic field.

A stochastic field shifts both level splittings; only the half-difference
``omega_d`` of the two splittings dephases the protected pair, while the
half-sum ``omega_m`` dephases superpositions that leave it.  Conditioned on a
fixed draw ``nu`` of the fluctuating frequency the evolution is a pure phase;
averaging the phase over the frequency weight ``p(nu)`` gives the coherence
factor

    k(t) = <exp(i nu t)> = integral exp(i nu t) p(nu) d nu,

the characteristic function of ``p`` evaluated at ``t``.  The module computes
``k`` three independent ways (closed form, quadrature, Monte Carlo) so each
route can serve as an oracle for the others:

* Gaussian weight, mean ``nu0``, std ``sigma``:
      k(t) = exp(i nu0 t - sigma^2 t^2 / 2)        (Gaussian visibility decay)
* Lorentzian weight, center ``nu0``, half width ``Gamma``:
      k(t) = exp(i nu0 t - Gamma t), t >= 0        (exponential decay)

The equal-amplitude test state (|uu> + |dd>)/sqrt(2) sits outside the
protected pair; its phase difference accumulates at twice the mean splitting,
so its coherence factor is the characteristic function evaluated at ``2 t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import erfc, sici

from . import streams
from .errors import (
    InvalidCoherenceFactor,
    ResolutionError,
    UnsupportedAnalytic,
)
from .spinspace import DfsPureState, FourLevelState

# Integration window half-widths, in units of the weight's scale parameter.
# The Gaussian tail mass beyond 12 sigma is ~2e-33; the Lorentzian tail is
# heavy, so a correction term (see _lorentzian_tail) is added analytically.
GAUSS_WINDOW_STDS = 12.0
LORENTZ_WINDOW_HWHMS = 1.0e4

DEFAULT_QUAD_POINTS = 200_000
DEFAULT_MC_SAMPLES = 100_000

_MC_LABEL = "field-mc"


@dataclass(frozen=True)
class SpinFrequencies:
    """Level splittings of the two ions for one realization of the field."""

    omega_1: float
    omega_2: float

    def __post_init__(self):
        for name in ("omega_1", "omega_2"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @property
    def omega_m(self) -> float:
        """Half-sum (mean) splitting."""
        return 0.5 * (self.omega_1 + self.omega_2)

    @property
    def omega_d(self) -> float:
        """Half-difference splitting; zero when the ions see the same field."""
        return 0.5 * (self.omega_1 - self.omega_2)


@dataclass(frozen=True)
class Gaussian:
    """Gaussian frequency weight with mean ``center`` and std ``std`` (>= 0)."""

    center: float
    std: float

    def __post_init__(self):
        c, s = float(self.center), float(self.std)
        if not (math.isfinite(c) and math.isfinite(s)):
            raise ValueError("Gaussian parameters must be finite")
        if s < 0.0:
            raise ValueError("std must be >= 0")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "std", s)

    def pdf(self, nu: np.ndarray) -> np.ndarray:
        if self.std == 0.0:
            raise ValueError("point mass has no density")
        z = (np.asarray(nu) - self.center) / self.std
        return np.exp(-0.5 * z * z) / (self.std * math.sqrt(2.0 * math.pi))


@dataclass(frozen=True)
class Lorentzian:
    """Lorentzian weight (Gamma/pi) / ((nu - center)^2 + Gamma^2), Gamma > 0.

    ``hwhm`` is the half width at half maximum Gamma.
    """

    center: float
    hwhm: float

    def __post_init__(self):
        c, g = float(self.center), float(self.hwhm)
        if not (math.isfinite(c) and math.isfinite(g)):
            raise ValueError("Lorentzian parameters must be finite")
        if g <= 0.0:
            raise ValueError("hwhm must be > 0")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "hwhm", g)

    def pdf(self, nu: np.ndarray) -> np.ndarray:
        u = np.asarray(nu) - self.center
        return (self.hwhm / math.pi) / (u * u + self.hwhm * self.hwhm)


@dataclass(frozen=True, eq=False)
class Empirical:
    """Discrete frequency weight: equal mass on each stored sample."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float).reshape(-1).copy()
        if arr.size == 0:
            raise ValueError("Empirical needs at least one sample")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Empirical samples must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)


FrequencyDistribution = Gaussian | Lorentzian | Empirical


@dataclass(frozen=True)
class CoherenceFactor:
    """One ensemble-averaged phase factor with an error estimate.

    ``stderr`` is a standard error for Monte Carlo values and a conservative
    truncation-plus-discretization bound for quadrature values; it is 0 for
    exact routes.
    """

    value: complex
    stderr: float = 0.0

    def __post_init__(self):
        v, s = complex(self.value), float(self.stderr)
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "stderr", s)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)
                and math.isfinite(s)):
            raise InvalidCoherenceFactor("non-finite coherence factor")
        if s < 0.0:
            raise InvalidCoherenceFactor("stderr must be >= 0")
        if abs(v) > 1.0 + 3.0 * s + 1e-9:
            raise InvalidCoherenceFactor(f"|k| = {abs(v)!r} exceeds 1")


@dataclass(frozen=True)
class DecoherenceCurve:
    """Coherence factor sampled on a strictly increasing time grid."""

    times: np.ndarray
    k: np.ndarray
    stderr: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1).copy()
        k = np.asarray(self.k, dtype=complex).reshape(-1).copy()
        stderr = (np.zeros_like(times) if self.stderr is None
                  else np.asarray(self.stderr, dtype=float).reshape(-1).copy())
        if not (times.size and times.size == k.size == stderr.size):
            raise ValueError("times, k, stderr must have equal nonzero length")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(k))
                and np.all(np.isfinite(stderr)) and np.all(stderr >= 0)):
            raise ValueError("non-finite curve data")
        if times[0] == 0.0 and abs(k[0] - 1.0) > 3.0 * stderr[0] + 1e-9:
            raise ValueError(f"k(0) = {k[0]!r}, expected 1")
        for arr in (times, k, stderr):
            arr.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "stderr", stderr)

    @property
    def visibility(self) -> np.ndarray:
        return np.abs(self.k)

    @property
    def k_values(self) -> list[CoherenceFactor]:
        """The curve as typed (value, stderr) pairs."""
        return [CoherenceFactor(value=v, stderr=s)
                for v, s in zip(self.k, self.stderr)]

    def __len__(self) -> int:
        return self.times.size


def evolve_dfs_fixed(state: DfsPureState, omega_d: float,
                     t: float) -> DfsPureState:
    """Phase evolution of a protected-pair state at fixed half-difference.

    alpha picks up exp(-i omega_d t), beta exp(+i omega_d t); populations are
    untouched.  With omega_d = 0 the state is exactly stationary.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    ph = np.exp(-1j * omega_d * t)
    return DfsPureState(state.alpha * ph, state.beta * np.conj(ph))


def evolve_four_fixed(state: FourLevelState, freqs: SpinFrequencies,
                      t: float) -> FourLevelState:
    """Free phase evolution of a four-level state at fixed splittings.

    Basis energies are (+omega_m, +omega_d, -omega_d, -omega_m) for
    (uu, ud, du, dd); each amplitude is multiplied by exp(-i E t).
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    energies = np.array([freqs.omega_m, freqs.omega_d,
                         -freqs.omega_d, -freqs.omega_m])
    amps = state.amplitudes() * np.exp(-1j * energies * t)
    return FourLevelState.from_amplitudes(amps)


def coherence_analytic(dist: FrequencyDistribution,
                       t: float) -> CoherenceFactor:
    """Closed-form coherence factor; Empirical weights have none."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if isinstance(dist, Gaussian):
        value = np.exp(1j * dist.center * t - 0.5 * (dist.std * t) ** 2)
    elif isinstance(dist, Lorentzian):
        value = np.exp(1j * dist.center * t - dist.hwhm * t)
    elif isinstance(dist, Empirical):
        raise UnsupportedAnalytic("no closed form for Empirical weights")
    else:
        raise TypeError(f"unknown distribution {type(dist).__name__}")
    return CoherenceFactor(complex(value), 0.0)


def _lorentzian_tail(dist: Lorentzian, t: float, w: float) -> complex:
    """Analytic tail of the characteristic-function integral beyond +-w.

    Uses pdf(u) ~ Gamma/(pi u^2) for |u - center| > w, exact in the sine
    integral; the neglected piece is bounded by 2 Gamma^3 / (3 pi w^3).
    """
    si = sici(w * t)[0]
    real = (2.0 * dist.hwhm / math.pi) * (
        math.cos(w * t) / w - t * (0.5 * math.pi - si))
    return np.exp(1j * dist.center * t) * real


def _lorentzian_tail_bound(dist: Lorentzian, w: float) -> float:
    return 2.0 * dist.hwhm ** 3 / (3.0 * math.pi * w ** 3)


def coherence_quadrature(dist: FrequencyDistribution, t: float,
                         n_points: int = DEFAULT_QUAD_POINTS) -> CoherenceFactor:
    """Coherence factor by trapezoid quadrature of exp(i nu t) p(nu).

    The window covers +-12 std (Gaussian) or +-1e4 half widths (Lorentzian,
    plus an analytic tail correction).  ``stderr`` combines the residual
    truncation bound with a fine-vs-half-grid discretization estimate.
    Empirical weights are discrete measures, so their integral is the exact
    sample average and ``n_points`` is ignored.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if isinstance(dist, Empirical):
        value = complex(np.mean(np.exp(1j * dist.samples * t)))
        return CoherenceFactor(value, 0.0)
    if n_points < 1000:
        raise ValueError("n_points must be >= 1000")

    if isinstance(dist, Gaussian):
        if dist.std == 0.0:
            return CoherenceFactor(complex(np.exp(1j * dist.center * t)), 0.0)
        half = GAUSS_WINDOW_STDS * dist.std
        tail = 0.0 + 0.0j
        tail_bound = erfc(GAUSS_WINDOW_STDS / math.sqrt(2.0))
    elif isinstance(dist, Lorentzian):
        half = LORENTZ_WINDOW_HWHMS * dist.hwhm
        tail = _lorentzian_tail(dist, t, half)
        tail_bound = _lorentzian_tail_bound(dist, half)
    else:
        raise TypeError(f"unknown distribution {type(dist).__name__}")

    n = n_points if n_points % 2 == 1 else n_points + 1
    grid = np.linspace(dist.center - half, dist.center + half, n)
    spacing = 2.0 * half / (n - 1)
    if t * spacing > math.pi:
        raise ResolutionError(
            f"grid spacing {spacing!r} undersamples exp(i nu t) at t={t!r}; "
            "raise n_points")
    y = np.exp(1j * t * grid) * dist.pdf(grid)
    fine = trapezoid(y, grid)
    coarse = trapezoid(y[::2], grid[::2])
    value = fine + tail
    stderr = abs(fine - coarse) + tail_bound
    return CoherenceFactor(complex(value), float(stderr))


def _sample(dist: FrequencyDistribution, rng: np.random.Generator,
            count: int) -> np.ndarray:
    if isinstance(dist, Gaussian):
        return rng.normal(dist.center, dist.std, size=count)
    if isinstance(dist, Lorentzian):
        return dist.center + dist.hwhm * rng.standard_cauchy(size=count)
    if isinstance(dist, Empirical):
        return dist.samples[rng.integers(0, dist.samples.size, size=count)]
    raise TypeError(f"unknown distribution {type(dist).__name__}")


def _mc_char(dist: FrequencyDistribution, phase_times: np.ndarray,
             n_samples: int, seed: int,
             workers: int) -> tuple[np.ndarray, np.ndarray]:
    """Mean of exp(i nu t) over n_samples draws, for each phase time.

    One frequency draw is shared by all times (the field is quasi-static over
    a run), so a curve and a scalar evaluation with the same seed see the
    same ensemble.  Returns (k, stderr) arrays.
    """
    phase_times = np.asarray(phase_times, dtype=float)

    def term(rng: np.random.Generator, count: int) -> np.ndarray:
        nu = _sample(dist, rng, count)
        return np.exp(1j * np.outer(phase_times, nu)).sum(axis=1)

    total = streams.reduce_blocks(term, n_samples, seed=seed,
                                  label=_MC_LABEL, workers=workers)
    k = total / n_samples
    if n_samples == 1:
        stderr = np.zeros_like(phase_times)
    else:
        # samples lie on the unit circle, so the per-sample complex variance
        # reduces to n (1 - |mean|^2) / (n - 1)
        var = np.clip(1.0 - np.abs(k) ** 2, 0.0, None)
        stderr = np.sqrt(var / (n_samples - 1))
    return k, stderr


def coherence_mc(dist: FrequencyDistribution, t: float, n_samples: int,
                 seed: int, workers: int = 1) -> CoherenceFactor:
    """Monte Carlo coherence factor: mean of exp(i nu t) over draws of nu.

    Deterministic for fixed (seed, n_samples) under any worker count; see
    ``streams``.  ``stderr`` is the sample standard error of the complex mean.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    k, stderr = _mc_char(dist, np.array([t]), n_samples, seed, workers)
    return CoherenceFactor(complex(k[0]), float(stderr[0]))


def _check_times(times: np.ndarray) -> np.ndarray:
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size < 1:
        raise ValueError("need at least one time")
    if times[0] < 0:
        raise ValueError("times must be >= 0")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly increasing")
    return times


def _char_curve(dist: FrequencyDistribution, times: np.ndarray, scale: float,
                method: str, n_points: int, n_samples: int, seed: int,
                workers: int) -> DecoherenceCurve:
    times = _check_times(times)
    phase_times = scale * times
    if method == "analytic":
        k = np.array([coherence_analytic(dist, t).value for t in phase_times])
        stderr = np.zeros_like(times)
    elif method == "quadrature":
        factors = [coherence_quadrature(dist, t, n_points)
                   for t in phase_times]
        k = np.array([f.value for f in factors])
        stderr = np.array([f.stderr for f in factors])
    elif method == "mc":
        if n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        k, stderr = _mc_char(dist, phase_times, n_samples, seed, workers)
    else:
        raise ValueError(f"unknown method {method!r}")
    return DecoherenceCurve(times=times, k=k, stderr=stderr)


def dfs_visibility_curve(dist_d: FrequencyDistribution, times,
                         method: str = "analytic", *,
                         n_points: int = DEFAULT_QUAD_POINTS,
                         n_samples: int = DEFAULT_MC_SAMPLES,
                         seed: int = 0, workers: int = 1) -> DecoherenceCurve:
    """Coherence curve of the equal-amplitude protected-pair state.

    ``dist_d`` is the weight of the half-difference splitting omega_d;
    k(t) is its characteristic function at t, and the state's visibility
    equals |k(t)|.
    """
    return _char_curve(dist_d, times, 1.0, method, n_points, n_samples,
                       seed, workers)


def test_state_visibility_curve(dist_m: FrequencyDistribution, times,
                                method: str = "analytic", *,
                                n_points: int = DEFAULT_QUAD_POINTS,
                                n_samples: int = DEFAULT_MC_SAMPLES,
                                seed: int = 0,
                                workers: int = 1) -> DecoherenceCurve:
    """Coherence curve of the unprotected test state (|uu> + |dd>)/sqrt(2).

    ``dist_m`` is the weight of the mean splitting omega_m.  The uu/dd phase
    difference grows at twice the mean splitting, so k(t) is the
    characteristic function of ``dist_m`` at 2 t: the same Gaussian weight
    that dephases the protected pair as exp(-sigma^2 t^2 / 2) dephases the
    test state as exp(-2 sigma^2 t^2), a 4x larger exponent.
    """
    return _char_curve(dist_m, times, 2.0, method, n_points, n_samples,
                       seed, workers)
