"""Two-photon sources: the down-converted pair and logical Bell states."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .elements import cnot_pol_target, mode_converter_hadamard
from .fock import ModeUnitary, PureState, apply_sequence, two_port_state
from .logical import LOGICAL_BASIS, apply, pauli_L


class LogicalBellLabel(Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


# logical coefficient matrices c[j, k] of |j_L>_1 |k_L>_2
BELL_COEFFS = {
    LogicalBellLabel.PHI_PLUS: np.array([[1, 0], [0, 1]]) / np.sqrt(2),
    LogicalBellLabel.PHI_MINUS: np.array([[1, 0], [0, -1]]) / np.sqrt(2),
    LogicalBellLabel.PSI_PLUS: np.array([[0, 1], [1, 0]]) / np.sqrt(2),
    LogicalBellLabel.PSI_MINUS: np.array([[0, 1], [-1, 0]]) / np.sqrt(2),
}

# port-2 logical operation taking Phi+ to each label (rightmost first)
_FROM_PHI_PLUS = {
    LogicalBellLabel.PHI_PLUS: (),
    LogicalBellLabel.PHI_MINUS: ("Z",),
    LogicalBellLabel.PSI_PLUS: ("X",),
    LogicalBellLabel.PSI_MINUS: ("X", "Z"),
}


def parse_label(text: str | LogicalBellLabel) -> LogicalBellLabel:
    if isinstance(text, LogicalBellLabel):
        return text
    key = text.strip().lower().replace("_", "").replace("plus", "+").replace("minus", "-")
    return LogicalBellLabel(key)


def logical_pair(coeffs) -> PureState:
    """sum_jk coeffs[j, k] |j_L>_1 |k_L>_2, normalized."""
    joint = LOGICAL_BASIS @ np.asarray(coeffs, dtype=np.complex128) @ LOGICAL_BASIS.T
    return two_port_state(joint, normalize=True)


def spdc_state() -> PureState:
    """(|Hh_1 Hh_2> + |Hv_1 Hv_2>)/sqrt2."""
    joint = np.zeros((4, 4), dtype=np.complex128)
    joint[0, 0] = joint[1, 1] = 1 / np.sqrt(2)
    return two_port_state(joint)


def conversion_circuit() -> list[ModeUnitary]:
    """Per-port sequence c_sX_p . h_s . c_sX_p, last element acting first."""
    c = cnot_pol_target("h")
    return [c, mode_converter_hadamard(), c]


def to_logical_bell() -> PureState:
    return apply_sequence(conversion_circuit(), spdc_state()).rephased()


def logical_bell(label: str | LogicalBellLabel) -> PureState:
    label = parse_label(label)
    s = to_logical_bell()
    for which in reversed(_FROM_PHI_PLUS[label]):
        s = apply(pauli_L(which), s, port=2)
    return s.rephased()


def nonmax_entangled(epsilon: float) -> PureState:
    """cos(eps)|0_L 0_L> + sin(eps)|1_L 1_L>."""
    c = np.diag([np.cos(epsilon), np.sin(epsilon)])
    return logical_pair(c).rephased()
