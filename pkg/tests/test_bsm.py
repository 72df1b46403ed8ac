import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import occ, phi_expansion

from dfs_photonics.bsm import (
    BellClass as C,
    DetectionEvent,
    build_classifier,
    class_probabilities,
    classifier_table,
    classify,
    event_distribution,
    evolve_through_bs,
    measure_bell_pair,
)
from dfs_photonics.elements import collective_rotation
from dfs_photonics.fock import (
    PureState,
    double_occupancy,
    enumerate_basis,
    lift_unitary,
)
from dfs_photonics.sources import LogicalBellLabel as L
from dfs_photonics.sources import logical_bell

EXPECTED = {
    L.PSI_MINUS: {C.PSI_MINUS: 1.0},
    L.PSI_PLUS: {C.PSI_PLUS: 1.0},
    L.PHI_PLUS: {C.PHI_AMBIGUOUS: 0.5, C.NO_COINCIDENCE: 0.5},
    L.PHI_MINUS: {C.PHI_AMBIGUOUS: 0.5, C.NO_COINCIDENCE: 0.5},
}


def full(d):
    return np.array([d.get(c, 0.0) for c in C])


def aligned_error(state, expected):
    basis = enumerate_basis(2)
    want = np.array([expected.get(o, 0.0) for o in basis])
    got = state.amplitudes
    phase = np.vdot(want, got)
    phase /= abs(phase)
    return np.max(np.abs(got - phase * want))


@pytest.mark.parametrize("label,sign", [(L.PHI_PLUS, 1), (L.PHI_MINUS, -1)])
def test_phi_blocks_match_hand_expansion(label, sign):
    assert aligned_error(evolve_through_bs(logical_bell(label)), phi_expansion(sign)) < 1e-10


@pytest.mark.parametrize("label", [L.PHI_PLUS, L.PHI_MINUS])
def test_phi_double_occupancy_half(label):
    out = evolve_through_bs(logical_bell(label))
    p = sum(pr for o, pr in zip(enumerate_basis(2), out.probabilities()) if double_occupancy(o))
    assert abs(p - 0.5) < 1e-12


@pytest.mark.parametrize("label", [L.PSI_MINUS, L.PSI_PLUS])
def test_psi_never_doubly_occupied(label):
    for o, a in evolve_through_bs(logical_bell(label)).terms():
        assert not double_occupancy(o)


@pytest.mark.parametrize("label", list(L))
def test_exact_class_probabilities(label):
    assert np.max(np.abs(full(class_probabilities(logical_bell(label))) - full(EXPECTED[label]))) < 1e-12


def test_supports_disjoint():
    sup = {}
    for label in L:
        out = evolve_through_bs(logical_bell(label))
        sup[label] = {o for o, _ in out.terms()}
    phi = sup[L.PHI_PLUS] | sup[L.PHI_MINUS]
    assert not sup[L.PSI_MINUS] & sup[L.PSI_PLUS]
    assert not (sup[L.PSI_MINUS] | sup[L.PSI_PLUS]) & phi


def test_class_sizes():
    counts = {c: 0 for c in C}
    for c in build_classifier().values():
        counts[c] += 1
    assert counts == {C.PSI_MINUS: 8, C.PSI_PLUS: 8, C.PHI_AMBIGUOUS: 4, C.NO_COINCIDENCE: 16}


@pytest.mark.parametrize(
    "labels,cls",
    [(("Hv1", "Vh2"), C.PHI_AMBIGUOUS), (("2Hv1",), C.NO_COINCIDENCE), (("Hh1", "Vv2"), C.PHI_AMBIGUOUS)],
)
def test_classifier_examples(labels, cls):
    assert classify(DetectionEvent.from_labels(*labels)) is cls


def test_same_port_coincidence_is_a_coincidence():
    ev = DetectionEvent.from_labels("Vh1", "Hh1")
    assert ev.is_coincidence


def test_detection_event_validation():
    with pytest.raises(ValueError):
        DetectionEvent((1, 0, 0, 0, 0, 0, 0, 0))


def test_superposition_mixes_linearly():
    s = PureState.from_unnormalized(2, logical_bell(L.PSI_PLUS).amplitudes + logical_bell(L.PHI_PLUS).amplitudes)
    want = {C.PSI_PLUS: 0.5, C.PHI_AMBIGUOUS: 0.25, C.NO_COINCIDENCE: 0.25}
    assert np.allclose(full(class_probabilities(s)), full(want), atol=1e-12)


def test_phi_conditional_distributions_identical():
    a = event_distribution(logical_bell(L.PHI_PLUS), C.PHI_AMBIGUOUS)
    b = event_distribution(logical_bell(L.PHI_MINUS), C.PHI_AMBIGUOUS)
    assert a.keys() == b.keys()
    assert max(abs(a[k] - b[k]) for k in a) < 1e-12
    assert np.isclose(sum(a.values()), 1.0)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(L)), st.floats(-np.pi, np.pi, allow_nan=False))
def test_rotation_commutes_with_analysis(label, theta):
    s = logical_bell(label)
    r = lift_unitary(collective_rotation(theta), s)
    assert np.max(np.abs(full(class_probabilities(r)) - full(class_probabilities(s)))) < 1e-12


def test_sampling_matches_exact():
    rng = np.random.default_rng(3)
    s = logical_bell(L.PHI_MINUS)
    n = 3000
    hits = sum(measure_bell_pair(s, rng)[1] is C.PHI_AMBIGUOUS for _ in range(n))
    assert abs(hits / n - 0.5) < 4 * np.sqrt(0.25 / n)


def test_psi_minus_always_coincides():
    rng = np.random.default_rng(4)
    s = logical_bell(L.PSI_MINUS)
    assert all(measure_bell_pair(s, rng)[1] is C.PSI_MINUS for _ in range(500))


def test_table_rows():
    rows = classifier_table()
    assert len(rows) == 36
    row = next(r for r in rows if r["occupations"] == list(occ("2Hv1")))
    assert row["bell_class"] == "NoCoincidence" and not row["coincidence"]
    assert set(row["reachable_from"]) == {"phi+", "phi-"}
