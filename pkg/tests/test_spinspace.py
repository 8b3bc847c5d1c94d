import math

import numpy as np
import pytest

from iondecay.errors import InvalidCoherenceFactor, InvalidState, NotInSubspace
from iondecay.spinspace import (
    BlochVector,
    DfsDensity,
    DfsPureState,
    FourLevelState,
    bloch,
    density_from_coherence,
    dfs_project,
    visibility,
)

S2 = 1.0 / math.sqrt(2.0)


def random_pure_pair(rng):
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return complex(v[0], v[1]), complex(v[2], v[3])


def test_unit_coherence_gives_pure_equal_superposition():
    rho = density_from_coherence(S2, S2, 1.0)
    b = bloch(rho)
    assert b.x == pytest.approx(1.0, abs=1e-12)
    assert b.y == pytest.approx(0.0, abs=1e-12)
    assert b.z == pytest.approx(0.0, abs=1e-12)
    assert visibility(rho) == pytest.approx(1.0, abs=1e-12)


def test_zero_coherence_shrinks_to_axis():
    rho = density_from_coherence(S2, S2, 0.0)
    assert visibility(rho) == pytest.approx(0.0, abs=1e-12)
    assert bloch(rho).cylindrical_radius == 0.0


def test_visibility_equals_abs_k_for_equal_amplitudes():
    # equal-amplitude state: z = 0, so the Bloch norm collapses to 2|rho_01|
    rng = np.random.default_rng(42)
    for _ in range(1000):
        r = math.sqrt(rng.uniform(0.0, 1.0))
        k = r * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        rho = density_from_coherence(S2, S2, k)
        assert abs(visibility(rho) - abs(k)) <= 1e-12


def test_bloch_unit_norm_for_unit_k_any_state():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        alpha, beta = random_pure_pair(rng)
        rho = density_from_coherence(alpha, beta, 1.0)
        assert abs(bloch(rho).norm - 1.0) <= 1e-12


def test_coherence_storage_convention():
    # rho_10 = k alpha conj(beta); the stored entry is rho_01 = conj(rho_10)
    alpha, beta, k = 0.6, 0.8, 0.5j
    rho = density_from_coherence(alpha, beta, k)
    assert rho.coherence == pytest.approx(np.conj(k * alpha * np.conj(beta)))
    b = bloch(rho)
    assert complex(b.x, b.y) == pytest.approx(2.0 * k * alpha * np.conj(beta))
    assert b.z == pytest.approx(alpha ** 2 - beta ** 2)


def test_density_matrix_is_hermitian_unit_trace():
    rho = density_from_coherence(0.6, 0.8, 0.3 + 0.2j)
    m = rho.matrix()
    assert np.allclose(m, m.conj().T)
    assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)


def test_overlong_coherence_factor_rejected():
    with pytest.raises(InvalidCoherenceFactor):
        density_from_coherence(S2, S2, 1.0 + 1e-6)
    # a hair over 1 is within tolerance
    density_from_coherence(S2, S2, 1.0 + 5e-13)


def test_unnormalized_amplitudes_rejected():
    with pytest.raises(InvalidState):
        density_from_coherence(1.0, 1.0, 0.5)
    with pytest.raises(InvalidState):
        DfsPureState(1.0, 1e-5)
    with pytest.raises(InvalidState):
        FourLevelState(1.0, 0.0, 0.0, 1e-5)


def test_nonfinite_amplitudes_rejected():
    with pytest.raises(InvalidState):
        DfsPureState(float("nan"), 1.0)
    with pytest.raises(InvalidState):
        DfsDensity(0.5, 0.5, complex(float("inf"), 0.0))


def test_density_positivity_guard():
    with pytest.raises(InvalidState):
        DfsDensity(pop_updown=0.9, pop_downup=0.1, coherence=0.5)


def test_bloch_vector_norm_cap():
    with pytest.raises(InvalidState):
        BlochVector(1.0, 1.0, 1.0)
    v = BlochVector(0.3, -0.4, 0.0)
    assert v.cylindrical_radius == pytest.approx(0.5)
    assert v.norm == pytest.approx(0.5)


def test_four_level_basis_order():
    st = FourLevelState(1.0, 0.0, 0.0, 0.0)
    assert np.array_equal(st.amplitudes(), np.array([1, 0, 0, 0], complex))
    st = FourLevelState.from_amplitudes([0.0, S2, S2, 0.0])
    assert st.amp_ud == pytest.approx(S2)
    assert st.amp_du == pytest.approx(S2)


def test_project_and_reembed_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(200):
        alpha, beta = random_pure_pair(rng)
        st = FourLevelState(0.0, alpha, beta, 0.0)
        restricted, weight = dfs_project(st)
        assert weight == pytest.approx(1.0, abs=1e-12)
        assert restricted.alpha == pytest.approx(alpha, abs=1e-12)
        assert restricted.beta == pytest.approx(beta, abs=1e-12)
        again, _ = dfs_project(FourLevelState(0.0, restricted.alpha,
                                              restricted.beta, 0.0))
        assert again.alpha == pytest.approx(restricted.alpha, abs=1e-12)


def test_project_partial_weight():
    st = FourLevelState(S2, 0.5, 0.5, 0.0)
    restricted, weight = dfs_project(st)
    assert weight == pytest.approx(0.5, abs=1e-12)
    assert restricted.alpha == pytest.approx(S2, abs=1e-12)
    assert restricted.beta == pytest.approx(S2, abs=1e-12)


def test_project_outside_subspace_raises():
    with pytest.raises(NotInSubspace):
        dfs_project(FourLevelState(S2, 0.0, 0.0, S2))
