"""Bosonic Fock space for one or two photons over eight labeled modes.

Modes are ordered Hh < Hv < Vh < Vv within a port, port 1 before port 2, so
the flat mode index is ``4*(port-1) + 2*pol + tr``.  Basis states of ``n``
photons are the size-``n`` multisets of mode indices in sorted order, which is
the same as descending lexicographic order of the occupation vectors.  For
``n = 1`` the basis index therefore equals the mode index.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .kernels import two_photon_transfer

N_MODES = 8
PORT_MODES = 4
PRUNE_TOL = 1e-14
NORM_TOL = 1e-9

FockBasisState = tuple  # occupation vector, length 8


class Pol(IntEnum):
    H = 0
    V = 1


class Tr(IntEnum):
    h = 0
    v = 1


@dataclass(frozen=True, order=True)
class ModeLabel:
    port: int
    pol: Pol
    tr: Tr

    def __post_init__(self):
        if self.port not in (1, 2):
            raise ValueError(f"port must be 1 or 2, got {self.port!r}")
        object.__setattr__(self, "pol", Pol(self.pol))
        object.__setattr__(self, "tr", Tr(self.tr))

    @property
    def index(self) -> int:
        return PORT_MODES * (self.port - 1) + 2 * int(self.pol) + int(self.tr)

    @classmethod
    def from_index(cls, index: int) -> "ModeLabel":
        if not 0 <= index < N_MODES:
            raise ValueError(f"mode index out of range: {index}")
        port, rest = divmod(index, PORT_MODES)
        return cls(port + 1, Pol(rest // 2), Tr(rest % 2))

    @classmethod
    def parse(cls, text: str) -> "ModeLabel":
        """Parse labels such as ``"Hv1"``."""
        if len(text) != 3:
            raise ValueError(f"bad mode label {text!r}")
        return cls(int(text[2]), Pol[text[0]], Tr[text[1]])

    def __str__(self) -> str:
        return f"{self.pol.name}{self.tr.name}{self.port}"


@lru_cache(maxsize=None)
def _basis(n_photons: int) -> tuple[tuple[int, ...], ...]:
    states = []
    for modes in combinations_with_replacement(range(N_MODES), n_photons):
        occ = [0] * N_MODES
        for m in modes:
            occ[m] += 1
        states.append(tuple(occ))
    return tuple(states)


@lru_cache(maxsize=None)
def _pairs() -> np.ndarray:
    return np.array(list(combinations_with_replacement(range(N_MODES), 2)), dtype=np.int64)


@lru_cache(maxsize=None)
def _index(n_photons: int) -> dict:
    return {occ: i for i, occ in enumerate(_basis(n_photons))}


def enumerate_basis(n_photons: int) -> list[FockBasisState]:
    """Ordered occupation vectors for ``n_photons`` in {0, 1, 2}."""
    if n_photons not in (0, 1, 2):
        raise ValueError(f"unsupported photon number {n_photons}; only 0, 1, 2 are modeled")
    return list(_basis(n_photons))


def basis_index(occupations: Sequence[int]) -> int:
    occ = tuple(int(x) for x in occupations)
    if len(occ) != N_MODES or min(occ) < 0:
        raise ValueError(f"not an occupation vector: {occupations!r}")
    return _index(sum(occ))[occ]


def occupied_modes(occupations: Sequence[int]) -> list[ModeLabel]:
    """Mode labels of the photons in ``occupations``, with repetition."""
    out = []
    for i, k in enumerate(occupations):
        out.extend([ModeLabel.from_index(i)] * int(k))
    return out


def format_state(occupations: Sequence[int]) -> str:
    """Ket label in the ``|2Hv1>`` / ``|Hv1 Vh2>`` style."""
    parts = []
    for i, k in enumerate(occupations):
        if k:
            label = str(ModeLabel.from_index(i))
            parts.append(label if k == 1 else f"{k}{label}")
    return "|" + " ".join(parts) + ">"


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitudes over ``enumerate_basis(n_photons)``."""

    n_photons: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if len(amps) != len(enumerate_basis(self.n_photons)):
            raise ValueError(
                f"{len(amps)} amplitudes given for a {self.n_photons}-photon basis "
                f"of size {len(enumerate_basis(self.n_photons))}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm:.3e})")
        amps = amps / norm
        amps[np.abs(amps) < PRUNE_TOL] = 0.0
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, n_photons: int, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm < 1e-300:
            raise ValueError("cannot normalize the zero vector")
        return cls(n_photons, amps / norm)

    @classmethod
    def basis(cls, occupations: Sequence[int]) -> "PureState":
        n = sum(int(x) for x in occupations)
        amps = np.zeros(len(enumerate_basis(n)), dtype=np.complex128)
        amps[basis_index(occupations)] = 1.0
        return cls(n, amps)

    def amplitude(self, occupations: Sequence[int]) -> complex:
        return complex(self.amplitudes[basis_index(occupations)])

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def rephased(self) -> "PureState":
        """Same ray with the first nonzero amplitude made real positive."""
        nz = np.flatnonzero(np.abs(self.amplitudes) > 1e-12)
        if len(nz) == 0:
            return self
        lead = self.amplitudes[nz[0]]
        return PureState(self.n_photons, self.amplitudes * (abs(lead) / lead))

    def terms(self, tol: float = 1e-12) -> list[tuple[FockBasisState, complex]]:
        basis = enumerate_basis(self.n_photons)
        return [(basis[i], complex(a)) for i, a in enumerate(self.amplitudes) if abs(a) > tol]

    def __repr__(self) -> str:
        body = " + ".join(f"({a:.4g}){format_state(occ)}" for occ, a in self.terms())
        return f"PureState(n={self.n_photons}: {body})"


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    """Unitary on mode creation operators, ``a_i^dag -> sum_k U[k, i] a_k^dag``.

    A 4x4 matrix acts on the modes of one port; ``embed`` lifts it to 8x8.
    """

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape not in ((4, 4), (8, 8)):
            raise ValueError(f"mode unitary must be 4x4 or 8x8, got {m.shape}")
        if not np.allclose(m @ m.conj().T, np.eye(len(m)), atol=1e-12, rtol=0):
            raise ValueError(f"matrix {self.label!r} is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def embed(self, port: int) -> "ModeUnitary":
        """8x8 form acting on ``port`` with identity on the other port."""
        if self.dim == 8:
            return self
        if port not in (1, 2):
            raise ValueError(f"port must be 1 or 2, got {port!r}")
        full = np.eye(N_MODES, dtype=np.complex128)
        sl = slice(PORT_MODES * (port - 1), PORT_MODES * port)
        full[sl, sl] = self.matrix
        return ModeUnitary(full, f"{self.label}@{port}")

    def both_ports(self) -> "ModeUnitary":
        """8x8 form applying the same 4x4 unitary on both ports."""
        if self.dim == 8:
            return self
        full = np.zeros((N_MODES, N_MODES), dtype=np.complex128)
        full[:4, :4] = self.matrix
        full[4:, 4:] = self.matrix
        return ModeUnitary(full, f"{self.label}@12")

    def dagger(self) -> "ModeUnitary":
        return ModeUnitary(self.matrix.conj().T, f"{self.label}^dag")

    def __matmul__(self, other: "ModeUnitary") -> "ModeUnitary":
        a, b = self, other
        if a.dim != b.dim:
            raise ValueError("cannot compose 4x4 and 8x8 unitaries; embed first")
        return ModeUnitary(a.matrix @ b.matrix, f"{a.label}.{b.label}")


def compose(gates: Sequence[ModeUnitary]) -> ModeUnitary:
    """Product of ``gates`` as written, so the last one acts first."""
    if not gates:
        raise ValueError("empty gate sequence")
    out = gates[0]
    for g in gates[1:]:
        out = out @ g
    return out


def _matrix8(U) -> np.ndarray:
    m = U.matrix if isinstance(U, ModeUnitary) else np.asarray(U, dtype=np.complex128)
    if m.shape != (N_MODES, N_MODES):
        raise ValueError(f"lift_unitary needs an 8x8 mode unitary, got {m.shape}")
    return m


def transfer_matrix(U, n_photons: int) -> np.ndarray:
    """Matrix of ``U`` lifted to the ``n_photons`` Fock sector."""
    m = _matrix8(U)
    if n_photons == 0:
        return np.ones((1, 1), dtype=np.complex128)
    if n_photons == 1:
        return m.copy()
    if n_photons == 2:
        return two_photon_transfer(m, _pairs())
    raise ValueError(f"unsupported photon number {n_photons}")


def lift_unitary(U, s: PureState) -> PureState:
    amps = transfer_matrix(U, s.n_photons) @ s.amplitudes
    return PureState(s.n_photons, amps)


def apply_sequence(gates: Sequence[ModeUnitary], s: PureState, port: int | None = None) -> PureState:
    """Apply ``gates`` right to left; 4x4 gates go on ``port`` (both ports if None)."""
    for g in reversed(gates):
        g8 = g.embed(port) if port is not None else g.both_ports()
        s = lift_unitary(g8, s)
    return s


def single_photon(port: int, amplitudes: Sequence[complex]) -> PureState:
    """One photon at ``port`` with amplitudes on (Hh, Hv, Vh, Vv)."""
    if port not in (1, 2):
        raise ValueError(f"port must be 1 or 2, got {port!r}")
    a = np.asarray(amplitudes, dtype=np.complex128)
    if a.shape != (PORT_MODES,):
        raise ValueError("single_photon takes 4 amplitudes (Hh, Hv, Vh, Vv)")
    if abs(np.linalg.norm(a) - 1.0) > NORM_TOL:
        raise ValueError(f"amplitudes not normalized (norm {np.linalg.norm(a):.3e})")
    amps = np.zeros(N_MODES, dtype=np.complex128)
    amps[PORT_MODES * (port - 1): PORT_MODES * port] = a
    return PureState(1, amps)


def port_amplitudes(s: PureState) -> tuple[int, np.ndarray]:
    """(port, 4 amplitudes) for a single photon confined to one port."""
    if s.n_photons != 1:
        raise ValueError("expected a single-photon state")
    w1 = np.sum(np.abs(s.amplitudes[:4]) ** 2)
    w2 = np.sum(np.abs(s.amplitudes[4:]) ** 2)
    if min(w1, w2) > 1e-12:
        raise ValueError("photon is spread over both ports")
    port = 1 if w1 >= w2 else 2
    return port, s.amplitudes[PORT_MODES * (port - 1): PORT_MODES * port].copy()


def two_port_state(joint, normalize: bool = False) -> PureState:
    """Two photons, one per port, from a 4x4 joint amplitude matrix.

    ``joint[x, y]`` is the amplitude of the port-1 photon in mode ``x`` and the
    port-2 photon in mode ``y``.  Distinct ports never share a mode, so the
    occupation amplitudes are the matrix entries themselves.
    """
    joint = np.asarray(joint, dtype=np.complex128)
    if joint.shape != (PORT_MODES, PORT_MODES):
        raise ValueError("joint amplitude matrix must be 4x4")
    amps = np.zeros(len(_basis(2)), dtype=np.complex128)
    amps[cross_index()] = joint.reshape(-1)
    if normalize:
        return PureState.from_unnormalized(2, amps)
    return PureState(2, amps)


@lru_cache(maxsize=None)
def cross_index() -> np.ndarray:
    # basis index of (port-1 mode x, port-2 mode y), flattened over (x, y)
    idx = _index(2)
    out = []
    for x in range(PORT_MODES):
        for y in range(PORT_MODES):
            occ = [0] * N_MODES
            occ[x] += 1
            occ[PORT_MODES + y] += 1
            out.append(idx[tuple(occ)])
    return np.array(out, dtype=np.int64)


def cross_port_matrix(s: PureState) -> np.ndarray:
    """Inverse of ``two_port_state``: the 4x4 block of one-photon-per-port amplitudes."""
    if s.n_photons != 2:
        raise ValueError("expected a two-photon state")
    return s.amplitudes[cross_index()].reshape(PORT_MODES, PORT_MODES).copy()


def combine(a: PureState, b: PureState) -> PureState:
    """Product of a port-1 photon ``a`` and a port-2 photon ``b``."""
    pa, va = port_amplitudes(a)
    pb, vb = port_amplitudes(b)
    if pa != 1 or pb != 2:
        raise ValueError(f"combine needs photons at ports 1 and 2, got {pa} and {pb}")
    return two_port_state(np.outer(va, vb))


def inner(a: PureState, b: PureState) -> complex:
    if a.n_photons != b.n_photons:
        raise ValueError(f"photon-number mismatch: {a.n_photons} vs {b.n_photons}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: PureState, b: PureState) -> float:
    return min(1.0, abs(inner(a, b)) ** 2)


def equal_up_to_global_phase(a: PureState, b: PureState, tol: float = 1e-10) -> bool:
    return fidelity(a, b) >= 1.0 - tol


def born_probabilities(s: PureState) -> dict[FockBasisState, float]:
    return dict(zip(enumerate_basis(s.n_photons), s.probabilities().tolist()))


def sample_outcome(s: PureState, rng: np.random.Generator) -> FockBasisState:
    p = s.probabilities()
    i = rng.choice(len(p), p=p / p.sum())
    return enumerate_basis(s.n_photons)[i]


def double_occupancy(occupations: Sequence[int]) -> bool:
    return max(occupations) >= 2

