"""Alignment-free protocols with exact and seeded Monte Carlo modes."""

from .bb84 import run_bb84, run_bb84_polarization_control
from .common import ChannelModel, ProtocolReport
from .dense_coding import run_dense_coding
from .nonlocality import (
    chsh_value,
    hardy_probabilities,
    optimize_hardy,
    run_chsh,
    run_hardy,
)
from .teleport import haar_random_logical, run_teleportation

__all__ = [
    "ChannelModel",
    "ProtocolReport",
    "chsh_value",
    "haar_random_logical",
    "hardy_probabilities",
    "optimize_hardy",
    "run_bb84",
    "run_bb84_polarization_control",
    "run_chsh",
    "run_dense_coding",
    "run_hardy",
    "run_teleportation",
]
