"""Engineered dissipation from a far-detuned, intensity-noisy light field.

A single field mode couples to both ions with strength ``g`` at detuning
``2 delta = omega - omega_f``.  Far off resonance the exchange coupling
reduces to photon-number-dependent level shifts (dispersive regime, valid
while ``g^2 (n+1) / delta^2`` is small):

    shift(uu, n) = 2 Omega (n + 1)
    shift(ud, n) = shift(du, n) = Omega          (n-independent)
    shift(dd, n) = -2 Omega n

with ``Omega = g^2 / (2 delta)``.  The ud/du shifts carry no photon-number
dependence, so intensity noise cannot dephase the protected pair; the uu/dd
pair picks up ``2 Omega (2n + 1)`` per unit time and dephases.  For
piecewise-constant intensity noise (i.i.d. steps, std ``n_std``, step ``dt``)
the test-state coherence decays exponentially at the white-noise rate

    gamma = 8 Omega^2 n_std^2 dt.

``full_jc_evolve`` propagates the untruncated coupling exactly on a finite
Fock ladder and serves as the accuracy oracle for the dispersive formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from . import streams
from .errors import FockOverflow, GridError, InvalidState
from .fieldnoise import DecoherenceCurve
from .spinspace import FourLevelState

CONFIGS = ("uu", "ud", "du", "dd")

_MC_LABEL = "reservoir-mc"

# Guard thresholds for the exact propagator.
TOP_FOCK_TOL = 1e-6
NORM_DRIFT_TOL = 1e-8
_MAX_GUARD_SAMPLES = 5_000_000


@dataclass(frozen=True)
class JcParams:
    """Ion-field coupling: strength g, ion splitting omega, field frequency omega_f."""

    g: float
    omega: float
    omega_f: float

    def __post_init__(self):
        for name in ("g", "omega", "omega_f"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.g < 0:
            raise ValueError("g must be >= 0")
        if self.omega == self.omega_f:
            raise ValueError("omega == omega_f: detuning vanishes")

    @property
    def delta(self) -> float:
        """Half detuning (omega - omega_f) / 2."""
        return 0.5 * (self.omega - self.omega_f)

    @property
    def stark_shift(self) -> float:
        """Per-photon dispersive shift unit Omega = g^2 / (2 delta)."""
        return self.g ** 2 / (2.0 * self.delta)

    @classmethod
    def from_detuning(cls, g: float, delta: float,
                      omega_f: float = 0.0) -> "JcParams":
        return cls(g=g, omega=omega_f + 2.0 * delta, omega_f=omega_f)


@dataclass(frozen=True)
class IntensityNoise:
    """Piecewise-constant photon-number noise: i.i.d. steps of length dt.

    Step values are drawn from a normal with mean ``n_mean`` and std
    ``n_std`` and clamped at zero; keep ``n_mean >= 5 n_std`` for the clamp
    to be negligible.
    """

    n_mean: float
    n_std: float
    dt: float

    def __post_init__(self):
        for name in ("n_mean", "n_std", "dt"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.n_mean < 0 or self.n_std < 0:
            raise ValueError("n_mean and n_std must be >= 0")
        if self.dt <= 0:
            raise ValueError("dt must be > 0")


@dataclass(frozen=True)
class BathSummary:
    """White-noise reduction of the engineered bath: one decay rate."""

    gamma: float

    def __post_init__(self):
        v = float(self.gamma)
        if not math.isfinite(v) or v < 0:
            raise ValueError("gamma must be finite and >= 0")
        object.__setattr__(self, "gamma", v)


def white_noise_rate(noise: IntensityNoise, p: JcParams) -> BathSummary:
    """Test-state decay rate gamma = 8 Omega^2 n_std^2 dt."""
    omega_s = p.stark_shift
    return BathSummary(8.0 * omega_s ** 2 * noise.n_std ** 2 * noise.dt)


# shift(config, n) = _SHIFT_CONST[config] + _SHIFT_SLOPE[config] * n,
# in units of the stark shift Omega
_SHIFT_CONST = {"uu": 2.0, "ud": 1.0, "du": 1.0, "dd": 0.0}
_SHIFT_SLOPE = {"uu": 2.0, "ud": 0.0, "du": 0.0, "dd": -2.0}


def dispersive_shift(config: str, n: float, p: JcParams) -> float:
    """Level shift of a spin configuration at photon number n."""
    if config not in CONFIGS:
        raise ValueError(f"config must be one of {CONFIGS}")
    n = float(n)
    if n < 0:
        raise ValueError("photon number must be >= 0")
    return p.stark_shift * (_SHIFT_CONST[config] + _SHIFT_SLOPE[config] * n)


def evolve_dispersive(state: FourLevelState, trajectory, p: JcParams,
                      dt: float) -> FourLevelState:
    """Dephase a four-level state along one intensity trajectory.

    Each step of length dt multiplies every basis amplitude by
    exp(-i shift(config, n_j) dt); populations never change.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    traj = np.asarray(trajectory, dtype=float).reshape(-1)
    if traj.size and (not np.all(np.isfinite(traj)) or np.any(traj < 0)):
        raise ValueError("trajectory values must be finite and >= 0")
    m, total_n = traj.size, float(traj.sum())
    omega_s = p.stark_shift
    phases = np.array([
        (_SHIFT_CONST[c] * m + _SHIFT_SLOPE[c] * total_n) * omega_s * dt
        for c in CONFIGS
    ])
    return FourLevelState.from_amplitudes(
        state.amplitudes() * np.exp(-1j * phases))


def _tracked_pair(state: FourLevelState) -> tuple[int, int]:
    """Index pair carrying the largest initial coherence magnitude."""
    amps = state.amplitudes()
    best, best_pair = 0.0, None
    for i in range(4):
        for j in range(i + 1, 4):
            w = abs(amps[i]) * abs(amps[j])
            if w > best:
                best, best_pair = w, (i, j)
    if best_pair is None or best < 1e-12:
        raise InvalidState("state carries no coherence to track")
    return best_pair


def engineered_decoherence_mc(state: FourLevelState, noise: IntensityNoise,
                              p: JcParams, times, n_traj: int, seed: int,
                              workers: int = 1) -> DecoherenceCurve:
    """Ensemble-averaged coherence under random intensity trajectories.

    Tracks the basis pair with the largest initial coherence and reports its
    averaged phase factor k(t) (normalized to k = 1 at t = 0) on the given
    grid, which must consist of multiples of ``noise.dt``.  Deterministic for
    fixed (seed, n_traj) under any worker count.
    """
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size < 1:
        raise ValueError("need at least one time")
    if times[0] < 0:
        raise ValueError("times must be >= 0")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly increasing")
    steps_exact = times / noise.dt
    idx = np.rint(steps_exact).astype(int)
    if np.any(np.abs(steps_exact - idx) > 1e-9 * np.maximum(1.0, steps_exact)):
        raise GridError("times must be integer multiples of noise.dt")

    i, j = _tracked_pair(state)
    ci, cj = CONFIGS[i], CONFIGS[j]
    omega_s = p.stark_shift
    # relative phase per step: (dc + ds * n) * dt
    dc = (_SHIFT_CONST[ci] - _SHIFT_CONST[cj]) * omega_s
    ds = (_SHIFT_SLOPE[ci] - _SHIFT_SLOPE[cj]) * omega_s
    n_steps = int(idx[-1])
    pos = idx > 0

    def term(rng: np.random.Generator, count: int) -> np.ndarray:
        draw = rng.normal(noise.n_mean, noise.n_std, size=(count, n_steps))
        np.clip(draw, 0.0, None, out=draw)
        csum = np.cumsum(draw, axis=1)
        summed = np.zeros((count, idx.size))
        summed[:, pos] = csum[:, idx[pos] - 1]
        phi = (dc * noise.dt) * idx + (ds * noise.dt) * summed
        return np.exp(-1j * phi).sum(axis=0)

    total = streams.reduce_blocks(term, n_traj, seed=seed, label=_MC_LABEL,
                                  workers=workers)
    k = total / n_traj
    if n_traj == 1:
        stderr = np.zeros(times.size)
    else:
        var = np.clip(1.0 - np.abs(k) ** 2, 0.0, None)
        stderr = np.sqrt(var / (n_traj - 1))
    return DecoherenceCurve(times=times, k=k, stderr=stderr)


@dataclass(frozen=True)
class FockRegister:
    """Pure state of (four spin configs) x (Fock levels 0..n_max).

    ``amplitudes[c, n]`` is the amplitude on config CONFIGS[c] with n photons.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).copy()
        if amps.ndim != 2 or amps.shape[0] != 4 or amps.shape[1] < 2:
            raise InvalidState("amplitudes must have shape (4, n_max+1), "
                               "n_max >= 1")
        if not np.all(np.isfinite(amps)):
            raise InvalidState("non-finite amplitudes")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > 1e-10:
            raise InvalidState(f"FockRegister: norm^2 = {norm2!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.shape[1] - 1

    @classmethod
    def from_product(cls, state: FourLevelState, n_photons: int,
                     n_max: int) -> "FockRegister":
        if not 0 <= n_photons <= n_max:
            raise ValueError("need 0 <= n_photons <= n_max")
        amps = np.zeros((4, n_max + 1), dtype=complex)
        amps[:, n_photons] = state.amplitudes()
        return cls(amps)

    def spin_coherence(self, config_a: str, config_b: str) -> complex:
        """Field-traced spin density entry rho[a, b] = sum_n psi[a,n] conj(psi[b,n])."""
        ia, ib = CONFIGS.index(config_a), CONFIGS.index(config_b)
        return complex(np.sum(self.amplitudes[ia]
                              * np.conj(self.amplitudes[ib])))

    def top_level_occupancy(self) -> float:
        return float(np.sum(np.abs(self.amplitudes[:, -1]) ** 2))


def _hamiltonian(p: JcParams, n_max: int) -> np.ndarray:
    """Full coupling matrix on the truncated ladder (real symmetric).

    Diagonal: (omega/2) Jz + omega_f n with Jz eigenvalues (2, 0, 0, -2);
    off-diagonal: g (J+ a + J- a†), which moves one quantum between the ions
    and the field.
    """
    levels = n_max + 1
    dim = 4 * levels

    def at(c: int, n: int) -> int:
        return c * levels + n

    h = np.zeros((dim, dim))
    e_spin = np.array([p.omega, 0.0, 0.0, -p.omega])
    for c in range(4):
        for n in range(levels):
            h[at(c, n), at(c, n)] = e_spin[c] + p.omega_f * n
    # J+ a lowers the photon number and raises one ion:
    #   dd -> ud, du ; ud -> uu ; du -> uu
    uu, ud, du, dd = range(4)
    for n in range(1, levels):
        amp = p.g * math.sqrt(n)
        for src, dst in ((dd, ud), (dd, du), (ud, uu), (du, uu)):
            h[at(dst, n - 1), at(src, n)] += amp
            h[at(src, n), at(dst, n - 1)] += amp
    return h


def full_jc_evolve(reg: FockRegister, p: JcParams, t: float,
                   dt_int: float) -> FockRegister:
    """Exact evolution under the untruncated ion-field coupling.

    The propagator is built from the eigendecomposition of the (small,
    Hermitian, time-independent) coupling matrix, so it is unitary to machine
    precision and deterministic.  ``dt_int`` sets how densely the truncation
    guard samples the evolution: at every multiple of ``dt_int`` (and at t)
    the top Fock level must hold < 1e-6 population, else FockOverflow.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if dt_int <= 0:
        raise ValueError("dt_int must be > 0")
    n_sub = int(math.ceil(t / dt_int)) if t > 0 else 0
    if n_sub > _MAX_GUARD_SAMPLES:
        raise ValueError("dt_int samples the guard more than 5e6 times; "
                         "the propagator is exact, so choose a coarser dt_int")

    levels = reg.n_max + 1
    h = _hamiltonian(p, reg.n_max)
    evals, vecs = eigh(h)
    psi0 = reg.amplitudes.reshape(-1)
    coeff = vecs.T @ psi0

    sample_times = np.unique(np.concatenate(
        [np.arange(1, n_sub + 1) * dt_int, [0.0, t]]))
    sample_times = sample_times[sample_times <= t]
    top = slice(levels - 1, None, levels)  # top Fock row of each config
    psi_t = psi0
    for tau in sample_times:
        psi_t = vecs @ (np.exp(-1j * evals * tau) * coeff)
        occ = float(np.sum(np.abs(psi_t[top]) ** 2))
        if occ >= TOP_FOCK_TOL:
            raise FockOverflow(
                f"top Fock level holds {occ!r} at t={tau!r}; raise n_max")
    norm = float(np.sum(np.abs(psi_t) ** 2))
    if abs(norm - 1.0) > NORM_DRIFT_TOL:
        raise InvalidState(f"propagator norm drift {norm - 1.0!r}")
    return FockRegister(psi_t.reshape(4, levels))


def check_dispersive_validity(p: JcParams, n_max: int) -> float:
    """Small parameter g^2 (n_max + 1) / delta^2 of the dispersive expansion."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return p.g ** 2 * (n_max + 1) / p.delta ** 2
