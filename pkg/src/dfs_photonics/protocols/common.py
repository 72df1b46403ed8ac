"""Channel model, report container and seeded trial streams."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..elements import rotation2

CHUNK = 8192
_CHANNEL_STREAM = 0x5EED


@dataclass(frozen=True)
class ChannelModel:
    """Frame misalignment between sender and receiver.

    ``fixed`` uses ``theta`` for every photon, ``per_session`` draws one angle
    per run and ``per_photon`` draws a fresh angle for each transmission, both
    uniform on [0, 2pi).
    """

    mode: str = "per_session"
    theta: float = 0.0

    def __post_init__(self):
        if self.mode not in ("fixed", "per_session", "per_photon"):
            raise ValueError(f"unknown channel mode {self.mode!r}")

    @classmethod
    def fixed(cls, theta: float) -> "ChannelModel":
        return cls("fixed", float(theta))

    def session_angle(self, seed: int) -> float:
        if self.mode == "fixed":
            return self.theta
        rng = np.random.default_rng([seed, _CHANNEL_STREAM])
        return float(rng.uniform(0.0, 2 * np.pi))

    def angles(self, session_theta: float, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.mode == "per_photon":
            return rng.uniform(0.0, 2 * np.pi, size=n)
        return np.full(n, session_theta)

    def describe(self, seed: int) -> dict:
        out = {"mode": self.mode}
        if self.mode != "per_photon":
            out["theta"] = self.session_angle(seed)
        return out


def rotation_batch(thetas: np.ndarray) -> np.ndarray:
    """(n, 4, 4) single-port frame rotations, R(theta) on both factors."""
    c, s = np.cos(thetas), np.sin(thetas)
    r = np.empty((len(thetas), 2, 2), dtype=np.complex128)
    r[:, 0, 0], r[:, 0, 1], r[:, 1, 0], r[:, 1, 1] = c, -s, s, c
    return np.einsum("nij,nkl->nikjl", r, r).reshape(len(thetas), 4, 4)


def port_rotation_matrix(theta: float) -> np.ndarray:
    r = rotation2(theta)
    return np.kron(r, r)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("DFS_PHOTONICS_THREADS", "1")))
    except ValueError:
        return 1


def map_chunks(fn: Callable[[np.random.Generator, int, int], Any], seed: int, n_trials: int) -> list:
    """Run ``fn(rng, start, stop)`` over fixed-size trial chunks.

    Chunk ``k`` always gets the stream ``SeedSequence(seed, spawn_key=(k,))``,
    so results do not depend on thread count or scheduling.
    """
    bounds = [(k, i, min(i + CHUNK, n_trials)) for k, i in enumerate(range(0, n_trials, CHUNK))]

    def run(b):
        k, lo, hi = b
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
        return fn(rng, lo, hi)

    workers = _threads()
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, bounds))
    return [run(b) for b in bounds]


def proportion_stderr(p: float, n: int) -> float:
    if n <= 0:
        return float("nan")
    return math.sqrt(max(p * (1 - p), 0.0) / n)


@dataclass
class ProtocolReport:
    protocol: str
    seed: int | None
    trials: int
    parameters: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    exact: dict = field(default_factory=dict)
    standard_errors: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def within(self, key: str, n_sigma: float = 4.0) -> bool:
        """Monte Carlo value of ``key`` agrees with its exact value."""
        est, ref, se = self.results[key], self.exact[key], self.standard_errors.get(key, 0.0)
        if se == 0:
            return abs(est - ref) < 1e-12
        return abs(est - ref) <= n_sigma * se

    def to_dict(self) -> dict:
        from .. import __version__

        out = {
            "schema_version": "1",
            "artifact_version": __version__,
            "protocol": self.protocol,
            "seed": self.seed,
            "trials": self.trials,
            "parameters": _plain(self.parameters),
        }
        out.update(_plain(self.results))
        out["exact"] = _plain(self.exact)
        out["standard_errors"] = _plain(self.standard_errors)
        out["notes"] = list(self.notes)
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj
