import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import ONE_L, ZERO_L, occ

from dfs_photonics.elements import collective_rotation
from dfs_photonics.fock import cross_port_matrix, fidelity, lift_unitary
from dfs_photonics.sources import (
    BELL_COEFFS,
    LogicalBellLabel,
    logical_bell,
    logical_pair,
    nonmax_entangled,
    parse_label,
    spdc_state,
    to_logical_bell,
)


def test_spdc_amplitudes():
    terms = dict(spdc_state().terms())
    assert set(terms) == {occ("Hh1", "Hh2"), occ("Hv1", "Hv2")}
    assert all(np.isclose(a, 1 / np.sqrt(2)) for a in terms.values())


def test_conversion_gives_phi_plus():
    phi = (np.kron(ZERO_L, ZERO_L) + np.kron(ONE_L, ONE_L)) / np.sqrt(2)
    got = cross_port_matrix(to_logical_bell()).ravel()
    assert abs(abs(np.vdot(phi, got)) - 1) < 1e-12


@pytest.mark.parametrize("label", list(LogicalBellLabel))
def test_bell_states_match_definition(label):
    assert np.isclose(fidelity(logical_bell(label), logical_pair(BELL_COEFFS[label])), 1.0)


def test_bell_states_orthonormal():
    states = [logical_bell(l) for l in LogicalBellLabel]
    gram = np.array([[abs(np.vdot(a.amplitudes, b.amplitudes)) for b in states] for a in states])
    assert np.allclose(gram, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("text,label", [("phi+", LogicalBellLabel.PHI_PLUS), ("Psi_minus", LogicalBellLabel.PSI_MINUS)])
def test_parse_label(text, label):
    assert parse_label(text) is label


def test_nonmax_limits():
    assert np.isclose(fidelity(nonmax_entangled(np.pi / 4), logical_bell("phi+")), 1.0)
    s = nonmax_entangled(0.0)
    want = np.kron(ZERO_L, ZERO_L)
    assert np.isclose(abs(np.vdot(want, cross_port_matrix(s).ravel())), 1.0)


def test_nonmax_weights():
    eps = 0.3
    m = cross_port_matrix(nonmax_entangled(eps))
    assert np.isclose(abs(np.vdot(np.kron(ZERO_L, ZERO_L), m.ravel())), np.cos(eps))
    assert np.isclose(abs(np.vdot(np.kron(ONE_L, ONE_L), m.ravel())), np.sin(eps))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(LogicalBellLabel)), st.floats(-np.pi, np.pi, allow_nan=False))
def test_bell_states_rotation_invariant(label, theta):
    s = logical_bell(label)
    assert fidelity(s, lift_unitary(collective_rotation(theta), s)) > 1 - 1e-10
