import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import ONE_L, ZERO_L, haar_qubit, ket

from dfs_photonics.elements import port_rotation
from dfs_photonics.fock import compose, lift_unitary, single_photon
from dfs_photonics.logical import (
    SinglePhotonBellOutcome as B,
    LogicalQubit,
    apply,
    bsm_circuit,
    encode,
    logical_matrix,
    logical_readout,
    pauli_L,
    project_dfs,
    ry_L,
    rz_L,
    single_photon_bell_probabilities,
    single_photon_bsm,
)

angles = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)
X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1])


def proportional(a, b, tol=1e-10):
    k = np.vdot(b.ravel(), a.ravel())
    return abs(abs(k) - np.linalg.norm(a) * np.linalg.norm(b)) < tol


def test_encode_basis_states():
    s = encode(LogicalQubit(1, 0))
    assert np.allclose(s.amplitudes[:4], ZERO_L)
    s = encode(LogicalQubit(0, 1, port=2))
    assert np.allclose(s.amplitudes[4:], ONE_L)


def test_rejects_unnormalized_qubit():
    with pytest.raises(ValueError):
        LogicalQubit(1, 1)


def test_project_round_trip(rng):
    for _ in range(20):
        a, b = haar_qubit(rng)
        q, leak = project_dfs(encode(LogicalQubit(a, b)))
        assert leak < 1e-12
        assert abs(q.amp0 - a) < 1e-12 and abs(q.amp1 - b) < 1e-12


def test_project_leaky_state():
    q, leak = project_dfs(single_photon(1, ket("Hh")))
    assert np.isclose(leak, 0.5)
    assert np.isclose(abs(q.amp1), 1.0)


def test_project_outside_dfs():
    bad = (ket("Hv") + ket("Vh")) / np.sqrt(2)
    q, leak = project_dfs(single_photon(1, bad))
    assert q is None and leak == 1.0


@settings(max_examples=40, deadline=None)
@given(angles)
def test_ry_mapping(two_phi):
    m = logical_matrix(ry_L(two_phi))
    c, s = np.cos(two_phi / 2), np.sin(two_phi / 2)
    assert np.allclose(m, [[c, -s], [s, c]], atol=1e-12)


def test_ry_keeps_dfs():
    m = ry_L(0.77).matrix
    assert np.allclose(m @ np.column_stack([ZERO_L, ONE_L]), np.column_stack([ZERO_L, ONE_L]) @ logical_matrix(ry_L(0.77)))


@settings(max_examples=40, deadline=None)
@given(angles)
def test_rz_mapping(theta):
    m = logical_matrix(compose(rz_L(theta)))
    assert np.allclose(m, np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)]), atol=1e-12)


def test_rz_is_block_diagonal_on_dfs():
    m = compose(rz_L(1.1)).matrix
    basis = np.column_stack([ZERO_L, ONE_L])
    assert np.allclose(basis @ (basis.conj().T @ m @ basis), m @ basis)


def test_rz_middle_step_leaves_dfs():
    gates = rz_L(np.pi / 2)
    s = apply(gates[1:], single_photon(1, ZERO_L), port=1)
    _, leak = project_dfs(s)
    assert leak > 0.1


@pytest.mark.parametrize("which,ref", [("X", X), ("Y", Y), ("Z", Z)])
def test_paulis(which, ref):
    assert proportional(logical_matrix(pauli_L(which)), ref)


def test_pauli_rejects_unknown():
    with pytest.raises(ValueError):
        pauli_L("W")


def test_euler_decomposition_reaches_haar_unitaries(rng):
    from scipy.stats import unitary_group

    for _ in range(10):
        U = unitary_group.rvs(2, random_state=rng)
        # U = e^{i g} Rz(a) Ry(b) Rz(c)
        V = U / np.sqrt(np.linalg.det(U))
        b = 2 * np.arctan2(abs(V[1, 0]), abs(V[0, 0]))
        half_sum, half_diff = -np.angle(V[0, 0]), np.angle(V[1, 0])
        a, c = half_sum + half_diff, half_sum - half_diff
        gate = compose(rz_L(a) + [ry_L(b)] + rz_L(c))
        assert proportional(logical_matrix(gate), U, 1e-9)


def test_logical_gates_commute_with_frame_rotation():
    r = port_rotation(0.63).matrix
    for g in (ry_L(0.4), compose(rz_L(0.9))):
        basis = np.column_stack([ZERO_L, ONE_L])
        assert np.allclose(g.matrix @ r @ basis, r @ g.matrix @ basis)


def test_bsm_circuit_maps_logical_basis():
    m = bsm_circuit().matrix
    assert np.allclose(np.abs(m @ ONE_L), np.abs(ket("Hh")))
    assert np.allclose(np.abs(m @ ZERO_L), np.abs(ket("Vv")))


def test_single_photon_bsm_point_masses():
    for amps, want in ((ZERO_L, B.PSI_MINUS), (ONE_L, B.PHI_PLUS)):
        p = single_photon_bell_probabilities(single_photon(1, amps))
        assert np.isclose(p[want], 1.0)


def test_single_photon_bsm_plus_splits():
    plus = (ZERO_L + ONE_L) / np.sqrt(2)
    p = single_photon_bell_probabilities(single_photon(2, plus))
    assert np.isclose(p[B.PSI_MINUS], 0.5) and np.isclose(p[B.PHI_PLUS], 0.5)


def test_single_photon_bsm_sampling(rng):
    s = single_photon(1, ONE_L)
    assert all(single_photon_bsm(s, rng) is B.PHI_PLUS for _ in range(20))


def test_readout():
    assert logical_readout(B.PSI_MINUS) == 0
    assert logical_readout(B.PHI_PLUS) == 1
    assert logical_readout(B.PSI_PLUS) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), angles)
def test_logical_state_survives_rotation(seed, theta):
    a, b = haar_qubit(np.random.default_rng(seed))
    s = encode(LogicalQubit(a, b))
    out = lift_unitary(port_rotation(theta).embed(1), s)
    assert abs(abs(np.vdot(s.amplitudes, out.amplitudes)) - 1) < 1e-10
