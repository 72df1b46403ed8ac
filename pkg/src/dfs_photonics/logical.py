"""Rotation-invariant logical qubit carried by one photon.

|0_L> = (|Hv> - |Vh>)/sqrt2 and |1_L> = (|Hh> + |Vv>)/sqrt2 are unchanged by a
common rotation of the polarization and transverse-mode frames.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .elements import (
    cnot_pol_target,
    cnot_spatial_target,
    polarization_hadamard,
    polarization_rotation,
    rx_spatial,
)
from .fock import (
    ModeUnitary,
    PureState,
    compose,
    lift_unitary,
    port_amplitudes,
    single_photon,
)

_R2 = np.sqrt(2.0)
ZERO_L = np.array([0, 1, -1, 0], dtype=np.complex128) / _R2
ONE_L = np.array([1, 0, 0, 1], dtype=np.complex128) / _R2
# columns are |0_L>, |1_L> in the single-port (Hh, Hv, Vh, Vv) basis
LOGICAL_BASIS = np.column_stack([ZERO_L, ONE_L])


@dataclass(frozen=True)
class LogicalQubit:
    amp0: complex
    amp1: complex
    port: int = 1

    def __post_init__(self):
        n = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"logical qubit not normalized (|a0|^2+|a1|^2 = {n:.3e})")
        if self.port not in (1, 2):
            raise ValueError(f"port must be 1 or 2, got {self.port!r}")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=np.complex128)

    @classmethod
    def from_vector(cls, v, port: int = 1) -> "LogicalQubit":
        v = np.asarray(v, dtype=np.complex128)
        v = v / np.linalg.norm(v)
        return cls(complex(v[0]), complex(v[1]), port)

    def fidelity(self, other: "LogicalQubit") -> float:
        return min(1.0, abs(np.vdot(self.vector, other.vector)) ** 2)


class SinglePhotonBellOutcome(Enum):
    PSI_MINUS = "psi-"  # |0_L>
    PSI_PLUS = "psi+"
    PHI_MINUS = "phi-"
    PHI_PLUS = "phi+"  # |1_L>


def physical_vector(q: LogicalQubit) -> np.ndarray:
    return LOGICAL_BASIS @ q.vector


def encode(q: LogicalQubit) -> PureState:
    return single_photon(q.port, physical_vector(q))


def project_dfs(s: PureState) -> tuple[LogicalQubit | None, float]:
    """Logical components of a single photon and the weight outside the DFS.

    Returns ``(None, 1.0)`` when the DFS weight is below 1e-12.
    """
    port, amps = port_amplitudes(s)
    return project_vector(amps, port)


def project_vector(amps, port: int = 1) -> tuple[LogicalQubit | None, float]:
    comps = LOGICAL_BASIS.conj().T @ np.asarray(amps, dtype=np.complex128)
    weight = float(np.sum(np.abs(comps) ** 2))
    total = float(np.sum(np.abs(amps) ** 2))
    if weight < 1e-12:
        return None, 1.0
    leakage = max(0.0, 1.0 - weight / total)
    return LogicalQubit.from_vector(comps, port), leakage


def logical_matrix(U: ModeUnitary) -> np.ndarray:
    """2x2 block of a single-port unitary on the logical basis."""
    if U.dim != 4:
        raise ValueError("logical_matrix takes a single-port (4x4) unitary")
    return LOGICAL_BASIS.conj().T @ U.matrix @ LOGICAL_BASIS


def ry_L(two_phi: float) -> ModeUnitary:
    """|0_L> -> cos|0_L> + sin|1_L>, |1_L> -> -sin|0_L> + cos|1_L> at phi = two_phi/2.

    Realized by the physical polarization rotation alone; the DFS is mapped
    into itself at every angle.
    """
    u = polarization_rotation(two_phi / 2)
    return ModeUnitary(u.matrix, f"Ry_L({two_phi:.6g})")


def rz_L(theta: float) -> list[ModeUnitary]:
    """Gate sequence c_sX_p . Rx_s(-theta) . c_sX_p (last element acts first).

    On the DFS the product is diag(exp(-i theta/2), exp(i theta/2)).  The
    middle step leaves the DFS.
    """
    c = cnot_pol_target("h")
    return [c, rx_spatial(-theta), c]


def pauli_L(which: str) -> ModeUnitary:
    """Logical Pauli ``X``, ``Y`` or ``Z`` as one single-port unitary, up to phase.

    ``ry_L(pi)`` is ``-iY`` on the DFS, so ``X`` is built as ``ry_L(pi) . rz_L(pi)``.
    """
    which = which.upper()
    z = compose(rz_L(np.pi))
    if which == "Z":
        u = z
    elif which == "X":
        u = ry_L(np.pi) @ z
    elif which == "Y":
        u = ry_L(np.pi)
    else:
        raise ValueError(f"unknown Pauli {which!r}")
    return ModeUnitary(u.matrix, f"sigma_{which.lower()}_L")


def apply(gates: ModeUnitary | Sequence[ModeUnitary], s: PureState, port: int) -> PureState:
    """Apply a single-port gate (or a sequence, last acting first) on ``port``."""
    if isinstance(gates, ModeUnitary):
        gates = [gates]
    for g in reversed(list(gates)):
        s = lift_unitary(g.embed(port), s)
    return s


def bsm_circuit() -> ModeUnitary:
    """Disentangler for the four single-photon Bell states: c_VX_s, then h_p.

    Maps Phi+ -> |Hh>, Psi+ -> |Hv>, Phi- -> |Vh>, Psi- -> |Vv>.
    """
    return polarization_hadamard() @ cnot_spatial_target("V")


# physical bin after bsm_circuit, indexed (Hh, Hv, Vh, Vv)
BIN_OUTCOMES = (
    SinglePhotonBellOutcome.PHI_PLUS,
    SinglePhotonBellOutcome.PSI_PLUS,
    SinglePhotonBellOutcome.PHI_MINUS,
    SinglePhotonBellOutcome.PSI_MINUS,
)


def single_photon_bell_probabilities(s: PureState) -> dict[SinglePhotonBellOutcome, float]:
    port, amps = port_amplitudes(s)
    p = np.abs(bsm_circuit().matrix @ amps) ** 2
    return {o: float(p[i]) for i, o in enumerate(BIN_OUTCOMES)}


def single_photon_bsm(s: PureState, rng: np.random.Generator) -> SinglePhotonBellOutcome:
    port, _ = port_amplitudes(s)
    out = apply(bsm_circuit(), s, port)
    p = out.probabilities()[4 * (port - 1): 4 * port]
    return BIN_OUTCOMES[rng.choice(4, p=p / p.sum())]


def logical_readout(outcome: SinglePhotonBellOutcome) -> int | None:
    """Logical Z value of a Bell outcome, None outside the DFS."""
    if outcome is SinglePhotonBellOutcome.PSI_MINUS:
        return 0
    if outcome is SinglePhotonBellOutcome.PHI_PLUS:
        return 1
    return None
