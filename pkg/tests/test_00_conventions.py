"""Convention-fixing checks; everything else assumes these hold."""

import numpy as np
from oracles import ONE_L, ZERO_L, ket

from dfs_photonics.elements import cnot_pol_target, mode_converter_hadamard
from dfs_photonics.fock import apply_sequence, fidelity, two_port_state
from dfs_photonics.sources import conversion_circuit, spdc_state, to_logical_bell


def test_cnot_active_level_is_h():
    c = cnot_pol_target().matrix
    assert np.allclose(c @ ket((1, "Hh")), ket((1, "Vh")))
    assert np.allclose(c @ ket((1, "Hv")), ket((1, "Hv")))


def test_spatial_hadamard_sign():
    h = mode_converter_hadamard().matrix
    assert np.allclose(h @ ket((1, "Hv")), ket((1 / np.sqrt(2), "Hh"), (-1 / np.sqrt(2), "Hv")))


def test_hand_expansion_per_port():
    u = np.eye(4, dtype=complex)
    for g in reversed(conversion_circuit()):
        u = g.matrix @ u
    assert np.allclose(u @ ket((1, "Hh")), ONE_L, atol=1e-14)
    assert np.allclose(u @ ket((1, "Hv")), -ZERO_L, atol=1e-14)


def test_conversion_identity_gives_phi_plus():
    target = two_port_state((np.outer(ZERO_L, ZERO_L) + np.outer(ONE_L, ONE_L)) / np.sqrt(2))
    raw = apply_sequence(conversion_circuit(), spdc_state())
    assert fidelity(raw, target) >= 1 - 1e-12
    assert fidelity(to_logical_bell(), target) >= 1 - 1e-12
