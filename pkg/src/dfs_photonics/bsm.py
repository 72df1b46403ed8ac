"""Partial Bell-state measurement on two logical qubits.

The two photons meet on the beam splitter, are sorted by polarization and
transverse mode, and are counted with number-resolving detectors.  The event
table is derived by evolving the four logical Bell states, not written by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .elements import beam_splitter
from .fock import (
    FockBasisState,
    ModeLabel,
    PureState,
    double_occupancy,
    enumerate_basis,
    lift_unitary,
    occupied_modes,
    transfer_matrix,
)
from .sources import LogicalBellLabel, logical_bell

SUPPORT_TOL = 1e-12


class BellClass(Enum):
    PSI_MINUS = "PsiMinus"
    PSI_PLUS = "PsiPlus"
    PHI_AMBIGUOUS = "PhiAmbiguous"
    NO_COINCIDENCE = "NoCoincidence"


class ClassifierError(RuntimeError):
    """Bell-state supports overlap, so the discrimination claim fails."""


@dataclass(frozen=True, order=True)
class DetectionEvent:
    """Two detector clicks, given as the post-BS occupation vector."""

    occupations: FockBasisState

    def __post_init__(self):
        occ = tuple(int(x) for x in self.occupations)
        if len(occ) != 8 or sum(occ) != 2 or min(occ) < 0:
            raise ValueError(f"not a two-photon occupation vector: {self.occupations!r}")
        object.__setattr__(self, "occupations", occ)

    @property
    def bins(self) -> tuple[ModeLabel, ModeLabel]:
        a, b = occupied_modes(self.occupations)
        return a, b

    @property
    def is_coincidence(self) -> bool:
        return not double_occupancy(self.occupations)

    @classmethod
    def from_labels(cls, *labels: str) -> "DetectionEvent":
        occ = [0] * 8
        for text in labels:
            count = 1
            if text[0].isdigit():
                count, text = int(text[0]), text[1:]
            occ[ModeLabel.parse(text).index] += count
        return cls(tuple(occ))

    def __str__(self) -> str:
        a, b = self.bins
        return f"2{a}" if a == b else f"{a} {b}"


def evolve_through_bs(s: PureState) -> PureState:
    if s.n_photons != 2:
        raise ValueError("the Bell-state analyzer takes two photons")
    return lift_unitary(beam_splitter(), s)


def _support(s: PureState) -> set[FockBasisState]:
    basis = enumerate_basis(2)
    return {basis[i] for i in np.flatnonzero(np.abs(s.amplitudes) > SUPPORT_TOL)}


@lru_cache(maxsize=None)
def build_classifier() -> dict[FockBasisState, BellClass]:
    """Map every two-photon occupation vector to its Bell class."""
    sup = {lab: _support(evolve_through_bs(logical_bell(lab))) for lab in LogicalBellLabel}
    psi_m = sup[LogicalBellLabel.PSI_MINUS]
    psi_p = sup[LogicalBellLabel.PSI_PLUS]
    phi = sup[LogicalBellLabel.PHI_PLUS] | sup[LogicalBellLabel.PHI_MINUS]
    if psi_m & psi_p:
        raise ClassifierError(f"Psi- and Psi+ share {len(psi_m & psi_p)} events")
    if (psi_m | psi_p) & phi:
        raise ClassifierError("a Psi support overlaps the Phi support")
    if any(double_occupancy(e) for e in psi_m | psi_p):
        raise ClassifierError("a Psi state produces double occupancy")

    table = {}
    for occ in enumerate_basis(2):
        if occ in psi_m:
            table[occ] = BellClass.PSI_MINUS
        elif occ in psi_p:
            table[occ] = BellClass.PSI_PLUS
        elif occ in phi and not double_occupancy(occ):
            table[occ] = BellClass.PHI_AMBIGUOUS
        else:
            table[occ] = BellClass.NO_COINCIDENCE
    return table


@lru_cache(maxsize=None)
def class_matrix() -> np.ndarray:
    """(4 classes x 36 events) 0/1 indicator, rows in ``BellClass`` order."""
    table = build_classifier()
    classes = list(BellClass)
    out = np.zeros((len(classes), len(table)))
    for i, occ in enumerate(enumerate_basis(2)):
        out[classes.index(table[occ]), i] = 1.0
    return out


@lru_cache(maxsize=None)
def bs_transfer() -> np.ndarray:
    return transfer_matrix(beam_splitter(), 2)


def classify(event: DetectionEvent | FockBasisState) -> BellClass:
    occ = event.occupations if isinstance(event, DetectionEvent) else tuple(event)
    return build_classifier()[occ]


def class_probabilities(s: PureState) -> dict[BellClass, float]:
    p = evolve_through_bs(s).probabilities()
    return dict(zip(BellClass, (class_matrix() @ p).tolist()))


def event_distribution(s: PureState, cls: BellClass | None = None) -> dict[FockBasisState, float]:
    """Post-BS event probabilities, optionally conditioned on one class."""
    table = build_classifier()
    probs = dict(zip(enumerate_basis(2), evolve_through_bs(s).probabilities().tolist()))
    if cls is None:
        return probs
    kept = {e: p for e, p in probs.items() if table[e] is cls}
    total = sum(kept.values())
    if total <= 0:
        return {}
    return {e: p / total for e, p in kept.items()}


def measure_bell_pair(s: PureState, rng: np.random.Generator) -> tuple[DetectionEvent, BellClass]:
    p = evolve_through_bs(s).probabilities()
    i = rng.choice(len(p), p=p / p.sum())
    occ = enumerate_basis(2)[i]
    return DetectionEvent(occ), build_classifier()[occ]


def classifier_table() -> list[dict]:
    """Rows for the ``bsm-table`` report, in canonical event order."""
    supports = {lab: _support(evolve_through_bs(logical_bell(lab))) for lab in LogicalBellLabel}
    rows = []
    for occ, cls in build_classifier().items():
        ev = DetectionEvent(occ)
        rows.append(
            {
                "event": str(ev),
                "occupations": list(occ),
                "coincidence": ev.is_coincidence,
                "bell_class": cls.value,
                "reachable_from": [lab.value for lab in LogicalBellLabel if occ in supports[lab]],
            }
        )
    return rows
