"""Teleportation of a logical qubit through the partial Bell analyzer.

Photon 3 carries the input and photon 1 is Alice's half of a shared Phi+ pair;
they enter the beam splitter at ports 1 and 2.  Photon 2 travels to Bob.  The
three-photon amplitude is kept as (analyzer event) x (Bob's physical mode), so
the engine never needs more than two photons at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bsm import BellClass, bs_transfer, class_matrix
from ..fock import PureState, cross_index, cross_port_matrix
from ..kernels import sample_rows
from ..logical import LOGICAL_BASIS, LogicalQubit, pauli_L, project_dfs
from ..sources import LogicalBellLabel, logical_bell
from .common import (
    ChannelModel,
    ProtocolReport,
    map_chunks,
    port_rotation_matrix,
    proportion_stderr,
    rotation_batch,
)

MODES = ("unambiguous", "coincidence_basis")
LEAKAGE_TOL = 1e-9
_CLASSES = list(BellClass)

# octahedron states: a 3-design, exact for the quadratic-in-rho averages used here
_OCTAHEDRON = np.array(
    [[1, 0], [0, 1], [1, 1], [1, -1], [1, 1j], [1, -1j]], dtype=np.complex128
) / np.array([[1], [1], [np.sqrt(2)], [np.sqrt(2)], [np.sqrt(2)], [np.sqrt(2)]])


def parse_mode(mode: str) -> str:
    m = mode.strip().lower().replace("-", "_")
    if m == "coincidence":
        m = "coincidence_basis"
    if m not in MODES:
        raise ValueError(f"unknown teleportation mode {mode!r}")
    return m


def haar_random_logical(rng: np.random.Generator) -> tuple[complex, complex]:
    a, b = haar_random_logicals(rng, 1)[0]
    return complex(a), complex(b)


def haar_random_logicals(rng: np.random.Generator, n: int) -> np.ndarray:
    """(n, 2) logical amplitudes uniform on the Bloch sphere."""
    z = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def corrections() -> dict[BellClass, np.ndarray]:
    """Bob's physical correction per announced class (4x4)."""
    x = pauli_L("X").matrix
    z = pauli_L("Z").matrix
    eye = np.eye(4, dtype=np.complex128)
    return {
        BellClass.PSI_PLUS: x,
        BellClass.PSI_MINUS: z @ x,
        BellClass.PHI_AMBIGUOUS: eye,
        BellClass.NO_COINCIDENCE: eye,
    }


@dataclass(frozen=True)
class _Setup:
    # G[e, x, a]: analyzer event e from photon 3 in mode x, photon 1 in mode a
    events: np.ndarray
    pair: np.ndarray  # M[a, b]: photon 1 mode a, photon 2 mode b
    event_class: np.ndarray
    correction: np.ndarray  # (n_classes, 4, 4)
    kept: np.ndarray  # per class


def _setup(mode: str, theta: float) -> _Setup:
    g = bs_transfer()[:, cross_index()].reshape(-1, 4, 4)
    pair = cross_port_matrix(logical_bell(LogicalBellLabel.PHI_PLUS))
    pair = pair @ port_rotation_matrix(theta).T
    corr = corrections()
    keep = {BellClass.PSI_PLUS, BellClass.PSI_MINUS}
    if mode == "coincidence_basis":
        keep.add(BellClass.PHI_AMBIGUOUS)
    return _Setup(
        events=g,
        pair=pair,
        event_class=np.argmax(class_matrix(), axis=0),
        correction=np.array([corr[c] for c in _CLASSES]),
        kept=np.array([c in keep for c in _CLASSES]),
    )


def _bob_amplitudes(setup: _Setup, inputs: np.ndarray) -> np.ndarray:
    """(n, events, 4) unnormalized amplitudes of Bob's photon per analyzer event."""
    phys = inputs @ LOGICAL_BASIS.T
    return np.einsum("exa,nx,ab->neb", setup.events, phys, setup.pair)


def _corrected_fidelity(setup: _Setup, inputs, bob, ev):
    """Fidelity of Bob's corrected, DFS-projected qubit for each chosen event."""
    n = len(inputs)
    vec = bob[np.arange(n), ev]
    vec = np.einsum("nij,nj->ni", setup.correction[setup.event_class[ev]], vec)
    logical = vec @ LOGICAL_BASIS.conj()
    w = np.sum(np.abs(logical) ** 2, axis=1)
    total = np.sum(np.abs(vec) ** 2, axis=1)
    leak = 1 - w / total
    overlap = np.abs(np.sum(inputs.conj() * logical, axis=1)) ** 2 / w
    return overlap, leak


def exact_branches(inputs, mode: str = "coincidence_basis", theta: float = 0.0) -> dict:
    """Exact class probabilities and fidelities, averaged over ``inputs``.

    ``fidelity_<class>`` is the mean fidelity conditioned on that class;
    ``mean_fidelity`` is over kept events.
    """
    mode = parse_mode(mode)
    setup = _setup(mode, theta)
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.complex128))
    bob = _bob_amplitudes(setup, inputs)
    p = np.sum(np.abs(bob) ** 2, axis=2)  # (n, events)
    n, n_ev = p.shape
    weighted = np.zeros((n, n_ev))
    with np.errstate(invalid="ignore", divide="ignore"):
        for e in range(n_ev):
            if p[:, e].max() < 1e-14:
                continue
            f, _ = _corrected_fidelity(setup, inputs, bob, np.full(n, e))
            weighted[:, e] = np.where(p[:, e] > 1e-14, p[:, e] * f, 0.0)
    cls_p = p @ class_matrix().T  # (n, classes)
    cls_pf = weighted @ class_matrix().T
    out = {}
    mean_p = cls_p.mean(axis=0)
    mean_pf = cls_pf.mean(axis=0)
    for i, c in enumerate(_CLASSES):
        out[f"probability_{c.value}"] = float(mean_p[i])
        if c is not BellClass.NO_COINCIDENCE:
            out[f"fidelity_{c.value}"] = float(mean_pf[i] / mean_p[i]) if mean_p[i] > 0 else float("nan")
    eff = float(mean_p[setup.kept].sum())
    out["efficiency"] = eff
    out["mean_fidelity"] = float(mean_pf[setup.kept].sum() / eff)
    kept_psi = mean_p[[_CLASSES.index(BellClass.PSI_PLUS), _CLASSES.index(BellClass.PSI_MINUS)]].sum()
    psi_pf = mean_pf[[_CLASSES.index(BellClass.PSI_PLUS), _CLASSES.index(BellClass.PSI_MINUS)]].sum()
    out["fidelity_psi_branch"] = float(psi_pf / kept_psi)
    return out


def haar_average(mode: str = "coincidence_basis", theta: float = 0.0) -> dict:
    """Exact Haar averages via the octahedron design."""
    return exact_branches(_OCTAHEDRON, mode, theta)


def _resolve_input(value) -> np.ndarray | None:
    if value is None or (isinstance(value, str) and value == "haar_random"):
        return None
    if isinstance(value, PureState):
        q, leak = project_dfs(value)
        if q is None or leak > LEAKAGE_TOL:
            raise ValueError(f"input state leaks out of the logical subspace (leakage {leak:.3e})")
        return q.vector
    if isinstance(value, LogicalQubit):
        return value.vector
    v = np.asarray(value, dtype=np.complex128).reshape(-1)
    if v.shape == (4,):
        q, leak = project_dfs(PureState(1, np.concatenate([v, np.zeros(4)])))
        if q is None or leak > LEAKAGE_TOL:
            raise ValueError(f"input state leaks out of the logical subspace (leakage {leak:.3e})")
        return q.vector
    if v.shape != (2,):
        raise ValueError("input must be 'haar_random', (alpha, beta) or a single-photon state")
    return LogicalQubit.from_vector(v).vector


def run_teleportation(mode: str = "coincidence_basis", n_trials: int = 100_000, seed: int = 0,
                      input_state=None, channel: ChannelModel | None = None) -> ProtocolReport:
    mode = parse_mode(mode)
    channel = channel or ChannelModel()
    fixed = _resolve_input(input_state)
    session_theta = channel.session_angle(seed)
    setups = {}

    def setup_for(theta):
        key = float(theta)
        if key not in setups:
            setups[key] = _setup(mode, key)
        return setups[key]

    def chunk(rng, lo, hi):
        n = hi - lo
        inputs = haar_random_logicals(rng, n) if fixed is None else np.broadcast_to(fixed, (n, 2))
        thetas = channel.angles(session_theta, rng, n)
        u = rng.random(n)
        if channel.mode == "per_photon":
            s = setup_for(0.0)
            bob = np.einsum("neb,ncb->nec", _bob_amplitudes(s, inputs), rotation_batch(thetas))
        else:
            s = setup_for(session_theta)
            bob = _bob_amplitudes(s, inputs)
        ev = sample_rows(np.sum(np.abs(bob) ** 2, axis=2), u)
        cls = s.event_class[ev]
        keep = s.kept[cls]
        f, leak = _corrected_fidelity(s, inputs[keep], bob[keep], ev[keep])
        counts = np.bincount(cls, minlength=len(_CLASSES))
        return int(keep.sum()), float(f.sum()), float((f ** 2).sum()), counts, float(leak.max(initial=0.0))

    parts = map_chunks(chunk, seed, n_trials)
    kept = sum(p[0] for p in parts)
    fsum = sum(p[1] for p in parts)
    fsq = sum(p[2] for p in parts)
    counts = sum(p[3] for p in parts)
    max_leak = max(p[4] for p in parts)
    eff = kept / n_trials
    mean_f = fsum / kept if kept else float("nan")
    var_f = max(fsq / kept - mean_f ** 2, 0.0) if kept else float("nan")

    exact = haar_average(mode, session_theta) if fixed is None else exact_branches(fixed, mode, session_theta)
    rep = ProtocolReport("teleport", seed, n_trials, parameters={
        "mode": mode,
        "input": "haar_random" if fixed is None else {"alpha": complex(fixed[0]), "beta": complex(fixed[1])},
        "channel": channel.describe(seed),
        "phi_branch_correction": "none",
    })
    rep.results = {
        "efficiency": eff,
        "mean_fidelity": mean_f,
        "kept_trials": kept,
        "max_leakage": max_leak,
        **{f"fraction_{c.value}": float(counts[i] / n_trials) for i, c in enumerate(_CLASSES)},
    }
    rep.exact = exact
    rep.standard_errors = {
        "efficiency": proportion_stderr(eff, n_trials),
        "mean_fidelity": float(np.sqrt(var_f / kept)) if kept else float("nan"),
    }
    return rep

