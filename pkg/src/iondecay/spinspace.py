"""States and geometry for a pair of two-level ions.

Basis conventions, fixed package-wide:

* protected pair (equal-splitting subspace): ``(|ud>, |du>)`` -> index 0, 1
* four-level product basis: ``(|uu>, |ud>, |du>, |dd>)`` -> index 0..3

``u``/``d`` denote the upper/lower internal level; the first letter is ion 1.
The coherence factor ``k`` is the ensemble-averaged phase factor that scales
the off-diagonal of the pair density matrix: with initial amplitudes
``alpha, beta`` the averaged matrix is ``[[|a|^2, conj(k) conj(a) b],
[k a conj(b), |b|^2]]``, i.e. ``rho_10 = k a conj(b)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCoherenceFactor, InvalidState, NotInSubspace

NORM_ATOL = 1e-12
# Weight below which a four-level state counts as outside the protected pair.
SUBSPACE_ATOL = 1e-12


def _require_finite(name: str, *values: complex) -> None:
    for v in values:
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise InvalidState(f"{name}: non-finite amplitude {v!r}")


@dataclass(frozen=True)
class DfsPureState:
    """Normalized superposition alpha |ud> + beta |du>."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        alpha, beta = complex(self.alpha), complex(self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        _require_finite("DfsPureState", alpha, beta)
        norm2 = abs(alpha) ** 2 + abs(beta) ** 2
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise InvalidState(f"DfsPureState: |alpha|^2+|beta|^2 = {norm2!r}")


@dataclass(frozen=True)
class DfsDensity:
    """2x2 density matrix on the protected pair.

    ``coherence`` stores the rho_01 entry; rho_10 is its conjugate.
    """

    pop_updown: float
    pop_downup: float
    coherence: complex

    def __post_init__(self):
        pu, pd = float(self.pop_updown), float(self.pop_downup)
        c = complex(self.coherence)
        object.__setattr__(self, "pop_updown", pu)
        object.__setattr__(self, "pop_downup", pd)
        object.__setattr__(self, "coherence", c)
        _require_finite("DfsDensity", complex(pu), complex(pd), c)
        if pu < -NORM_ATOL or pd < -NORM_ATOL:
            raise InvalidState("DfsDensity: negative population")
        if abs(pu + pd - 1.0) > NORM_ATOL:
            raise InvalidState(f"DfsDensity: trace = {pu + pd!r}")
        if abs(c) ** 2 > pu * pd + NORM_ATOL:
            raise InvalidState("DfsDensity: coherence violates positivity")

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.pop_updown, self.coherence],
             [np.conj(self.coherence), self.pop_downup]]
        )


@dataclass(frozen=True)
class FourLevelState:
    """Normalized pure state on the full product basis (uu, ud, du, dd)."""

    amp_uu: complex
    amp_ud: complex
    amp_du: complex
    amp_dd: complex

    def __post_init__(self):
        amps = tuple(
            complex(a)
            for a in (self.amp_uu, self.amp_ud, self.amp_du, self.amp_dd)
        )
        for name, a in zip(("amp_uu", "amp_ud", "amp_du", "amp_dd"), amps):
            object.__setattr__(self, name, a)
        _require_finite("FourLevelState", *amps)
        norm2 = sum(abs(a) ** 2 for a in amps)
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise InvalidState(f"FourLevelState: norm^2 = {norm2!r}")

    def amplitudes(self) -> np.ndarray:
        return np.array(
            [self.amp_uu, self.amp_ud, self.amp_du, self.amp_dd])

    @classmethod
    def from_amplitudes(cls, vec) -> "FourLevelState":
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (4,):
            raise InvalidState("from_amplitudes expects 4 amplitudes")
        return cls(*vec)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _require_finite("BlochVector", complex(self.x), complex(self.y),
                        complex(self.z))
        if self.norm > 1.0 + 1e-9:
            raise InvalidState(f"BlochVector: norm = {self.norm!r} > 1")

    @property
    def norm(self) -> float:
        return math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)

    @property
    def cylindrical_radius(self) -> float:
        """Distance from the z axis, 2 |rho_01| for a density matrix."""
        return math.hypot(self.x, self.y)


def density_from_coherence(alpha: complex, beta: complex,
                           k: complex) -> DfsDensity:
    """Ensemble-averaged density matrix for initial (alpha, beta) and factor k.

    The averaged off-diagonal is the initial one scaled by k:
    rho_10 = k * alpha * conj(beta).  Populations are untouched by dephasing.
    """
    alpha, beta, k = complex(alpha), complex(beta), complex(k)
    _require_finite("density_from_coherence", alpha, beta, k)
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm2 - 1.0) > NORM_ATOL:
        raise InvalidState(f"density_from_coherence: norm^2 = {norm2!r}")
    if abs(k) > 1.0 + NORM_ATOL:
        raise InvalidCoherenceFactor(f"|k| = {abs(k)!r} > 1")
    rho_10 = k * alpha * beta.conjugate()
    return DfsDensity(
        pop_updown=abs(alpha) ** 2,
        pop_downup=abs(beta) ** 2,
        coherence=rho_10.conjugate(),
    )


def bloch(rho: DfsDensity) -> BlochVector:
    """Bloch vector of the pair density matrix (|ud> at the north pole)."""
    xy = 2.0 * rho.coherence.conjugate()
    return BlochVector(x=xy.real, y=xy.imag,
                       z=rho.pop_updown - rho.pop_downup)


def visibility(rho: DfsDensity) -> float:
    """Interference visibility: the Bloch vector norm (1 = pure, fully coherent)."""
    return bloch(rho).norm


def dfs_project(state: FourLevelState) -> tuple[DfsPureState, float]:
    """Restrict a four-level state to the protected pair.

    Returns the normalized restriction and its weight |amp_ud|^2 + |amp_du|^2.
    Raises NotInSubspace when the weight is below 1e-12.
    """
    weight = abs(state.amp_ud) ** 2 + abs(state.amp_du) ** 2
    if weight < SUBSPACE_ATOL:
        raise NotInSubspace(f"protected-pair weight = {weight!r}")
    scale = 1.0 / math.sqrt(weight)
    return DfsPureState(state.amp_ud * scale, state.amp_du * scale), weight


def phase(z: complex) -> float:
    """Argument of a complex amplitude, in (-pi, pi]."""
    return cmath.phase(z)
