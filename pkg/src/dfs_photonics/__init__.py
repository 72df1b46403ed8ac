"""Exact simulation of alignment-free quantum communication with one- and
two-photon logical qubits encoded in polarization and first-order HG modes."""

__version__ = "0.1.0"

from .fock import (  # noqa: E402
    ModeLabel,
    ModeUnitary,
    PureState,
    enumerate_basis,
    fidelity,
    lift_unitary,
)
from .logical import LogicalQubit, encode, project_dfs  # noqa: E402
from .sources import LogicalBellLabel, logical_bell  # noqa: E402

__all__ = [
    "__version__",
    "ModeLabel",
    "ModeUnitary",
    "PureState",
    "enumerate_basis",
    "fidelity",
    "lift_unitary",
    "LogicalQubit",
    "encode",
    "project_dfs",
    "LogicalBellLabel",
    "logical_bell",
]
