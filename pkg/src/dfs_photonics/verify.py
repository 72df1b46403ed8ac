"""Invariant checks run by ``dfs-photonics verify``."""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np
from scipy.stats import unitary_group

from .bsm import BellClass, build_classifier, class_probabilities, evolve_through_bs
from .elements import collective_rotation
from .fock import PureState, enumerate_basis, fidelity, lift_unitary, two_port_state
from .logical import LogicalQubit, encode
from .protocols.dense_coding import exact_success
from .protocols.nonlocality import chsh_value
from .protocols.teleport import haar_average, haar_random_logicals
from .sources import (
    BELL_COEFFS,
    LogicalBellLabel,
    logical_bell,
    logical_pair,
    to_logical_bell,
)


def symmetric_tensor_lift(U: np.ndarray, s: PureState) -> np.ndarray:
    """Two-photon evolution through the 64-dim tensor product, as an oracle."""
    basis = enumerate_basis(2)
    pairs = list(combinations_with_replacement(range(8), 2))
    psi = np.zeros(64, dtype=np.complex128)
    for (i, j), a in zip(pairs, s.amplitudes):
        if i == j:
            psi[8 * i + i] += a
        else:
            psi[8 * i + j] += a / np.sqrt(2)
            psi[8 * j + i] += a / np.sqrt(2)
    out = np.kron(U, U) @ psi
    res = np.zeros(len(basis), dtype=np.complex128)
    for t, (k, l) in enumerate(pairs):
        res[t] = out[8 * k + k] if k == l else (out[8 * k + l] + out[8 * l + k]) / np.sqrt(2)
    return res


def _random_two_photon(rng) -> PureState:
    v = rng.standard_normal(36) + 1j * rng.standard_normal(36)
    return PureState.from_unnormalized(2, v)


def _check(name, value, passed, tolerance):
    return {"name": name, "passed": bool(passed), "value": float(value), "tolerance": float(tolerance)}


def run_checks(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    checks = []

    phi = logical_pair(BELL_COEFFS[LogicalBellLabel.PHI_PLUS])
    f = fidelity(to_logical_bell(), phi)
    checks.append(_check("conversion_identity", 1 - f, 1 - f <= 1e-12, 1e-12))

    worst = 0.0
    for a, b in haar_random_logicals(rng, 100):
        s = encode(LogicalQubit(complex(a), complex(b)))
        for th in np.linspace(0, 2 * np.pi, 64, endpoint=False):
            worst = max(worst, 1 - fidelity(lift_unitary(collective_rotation(th), s), s))
    checks.append(_check("dfs_invariance", worst, worst <= 1e-12, 1e-12))

    try:
        build_classifier()
        disjoint = True
    except RuntimeError:
        disjoint = False
    expect = {
        LogicalBellLabel.PSI_MINUS: {BellClass.PSI_MINUS: 1.0},
        LogicalBellLabel.PSI_PLUS: {BellClass.PSI_PLUS: 1.0},
        LogicalBellLabel.PHI_PLUS: {BellClass.PHI_AMBIGUOUS: 0.5, BellClass.NO_COINCIDENCE: 0.5},
        LogicalBellLabel.PHI_MINUS: {BellClass.PHI_AMBIGUOUS: 0.5, BellClass.NO_COINCIDENCE: 0.5},
    }
    err = 0.0
    if disjoint:
        for lab, want in expect.items():
            got = class_probabilities(logical_bell(lab))
            err = max(err, max(abs(got[c] - want.get(c, 0.0)) for c in BellClass))
    checks.append(_check("classifier_disjoint", err, disjoint and err <= 1e-12, 1e-12))

    err = 0.0
    for _ in range(200):
        U = unitary_group.rvs(8, random_state=rng)
        s = _random_two_photon(rng)
        err = max(err, np.max(np.abs(lift_unitary(U, s).amplitudes - symmetric_tensor_lift(U, s))))
    checks.append(_check("fock_oracle_equivalence", err, err <= 1e-10, 1e-10))

    hv = np.zeros((4, 4))
    hv[1, 1] = 1.0
    out = evolve_through_bs(two_port_state(hv))
    coinc = sum(p for occ, p in zip(enumerate_basis(2), out.probabilities()) if max(occ) == 1)
    checks.append(_check("hom_bunching", coinc, coinc <= 1e-12, 1e-12))

    s = chsh_value()
    checks.append(_check("chsh_tsirelson", abs(s - 2 * np.sqrt(2)), abs(s - 2 * np.sqrt(2)) <= 1e-10, 1e-10))

    dc = np.mean(list(exact_success().values()))
    checks.append(_check("dense_coding_efficiency", abs(dc - 5 / 6), abs(dc - 5 / 6) <= 1e-12, 1e-12))

    tu = haar_average("unambiguous")
    dev = max(abs(tu["efficiency"] - 0.5), abs(tu["mean_fidelity"] - 1.0))
    checks.append(_check("teleport_unambiguous", dev, dev <= 1e-12, 1e-12))

    tc = haar_average("coincidence_basis")
    dev = abs(tc["efficiency"] - 0.75)
    checks.append(_check("teleport_coincidence_efficiency", dev, dev <= 1e-12, 1e-12))

    return checks
