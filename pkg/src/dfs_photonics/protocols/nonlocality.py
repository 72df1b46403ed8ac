"""Bell tests on shared logical pairs: CHSH and Hardy's ladder.

Each party rotates with ``ry_L(2*phi)`` and reads the logical value through the
single-photon Bell analyzer (Vv -> 0, Hh -> 1).  The shared pair passes the
channel first, so any frame rotation acts before the local settings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from ..fock import PureState, cross_port_matrix
from ..kernels import sample_rows
from ..logical import bsm_circuit, ry_L
from ..sources import LogicalBellLabel, logical_bell, nonmax_entangled
from .common import (
    ChannelModel,
    ProtocolReport,
    map_chunks,
    port_rotation_matrix,
    proportion_stderr,
    rotation_batch,
)

STANDARD_CHSH_SETTINGS = (0.0, np.pi / 4, np.pi / 8, -np.pi / 8)
HARDY_OPTIMUM = (5 * np.sqrt(5) - 11) / 2

# analyzer bins carrying logical 0 and 1
_READ = (3, 0)
_CELLS = np.array([4 * _READ[j] + _READ[k] for j in (0, 1) for k in (0, 1)])


def _analyzer(phi: float) -> np.ndarray:
    return bsm_circuit().matrix @ ry_L(2 * phi).matrix


def joint_logical_probabilities(state: PureState, phi_a: float, phi_b: float, theta: float = 0.0) -> np.ndarray:
    """P[j, k] of reading logical j at port 1 and k at port 2."""
    r = port_rotation_matrix(theta)
    joint = cross_port_matrix(state)
    out = (_analyzer(phi_a) @ r) @ joint @ (_analyzer(phi_b) @ r).T
    p = np.abs(out) ** 2
    return p[np.ix_(_READ, _READ)]


def correlation(state: PureState, phi_a: float, phi_b: float, theta: float = 0.0) -> float:
    p = joint_logical_probabilities(state, phi_a, phi_b, theta)
    return float(p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0])


def chsh_combination(e_ab, e_abp, e_apb, e_apbp) -> float:
    return e_ab + e_abp + e_apb - e_apbp


def chsh_value(settings=STANDARD_CHSH_SETTINGS, theta: float = 0.0, state: PureState | None = None) -> float:
    """S = E(a,b) + E(a,b') + E(a',b) - E(a',b') for settings (a, a', b, b')."""
    a, ap, b, bp = settings
    s = logical_bell(LogicalBellLabel.PHI_PLUS) if state is None else state
    return chsh_combination(
        correlation(s, a, b, theta),
        correlation(s, a, bp, theta),
        correlation(s, ap, b, theta),
        correlation(s, ap, bp, theta),
    )


def hardy_probabilities(epsilon: float, settings, theta: float = 0.0) -> tuple[float, float, float, float]:
    """(P(A0=1,B0=1), P(A0=1,B1=0), P(A1=0,B0=1), P(A1=1,B1=1)) for settings (a0, a1, b0, b1).

    The first is the Hardy probability; local realism forces it to vanish
    whenever the other three do.
    """
    return _hardy_from_state(nonmax_entangled(epsilon), settings, theta)


def _hardy_from_state(s: PureState, settings, theta: float = 0.0):
    a0, a1, b0, b1 = settings
    return (
        float(joint_logical_probabilities(s, a0, b0, theta)[1, 1]),
        float(joint_logical_probabilities(s, a0, b1, theta)[1, 0]),
        float(joint_logical_probabilities(s, a1, b0, theta)[0, 1]),
        float(joint_logical_probabilities(s, a1, b1, theta)[1, 1]),
    )


def hardy_settings(epsilon: float, alpha0: float) -> tuple[float, float, float, float]:
    """Settings (a0, a1, b0, b1) meeting the three zero constraints for a given a0."""
    c, s = np.cos(epsilon), np.sin(epsilon)
    ca, sa = np.cos(alpha0), np.sin(alpha0)
    b0 = np.arctan2(-(s ** 3) * ca, c ** 3 * sa)
    b1 = np.arctan2(c * sa, s * ca)
    a1 = np.arctan2(c * np.sin(b0), s * np.cos(b0))
    return float(alpha0), float(a1), float(b0), float(b1)


@dataclass(frozen=True)
class HardyOptimum:
    epsilon: float
    settings: tuple
    probabilities: tuple

    @property
    def hardy_probability(self) -> float:
        return self.probabilities[0]


@lru_cache(maxsize=8)
def optimize_hardy(grid: int = 16) -> HardyOptimum:
    """Maximize the Hardy probability over the state and the free setting."""

    def neg(x):
        return -hardy_probabilities(x[0], hardy_settings(x[0], x[1]))[0]

    best = (0.0, np.pi / 8, 0.3)
    for e in np.linspace(0.02, np.pi / 2 - 0.02, grid):
        state = nonmax_entangled(e)
        for a in np.linspace(-np.pi / 2, np.pi / 2, 2 * grid, endpoint=False):
            p = _hardy_from_state(state, hardy_settings(e, a))[0]
            if p > -best[0]:
                best = (-p, e, a)
    res = minimize(neg, x0=[best[1], best[2]], method="Nelder-Mead",
                   options={"xatol": 1e-11, "fatol": 1e-15, "maxiter": 4000})
    e, a = res.x
    st = hardy_settings(e, a)
    return HardyOptimum(float(e), st, hardy_probabilities(e, st))


def _pair_mc(state: PureState, pairs, channel: ChannelModel, n_trials: int, seed: int):
    """Sample logical outcomes for uniformly chosen setting pairs.

    Returns per-pair counts ``(n_pairs, 2, 2)``.
    """
    joint = cross_port_matrix(state)
    an_a = np.array([_analyzer(p[0]) for p in pairs])
    an_b = np.array([_analyzer(p[1]) for p in pairs])
    session_theta = channel.session_angle(seed)

    def chunk(rng, lo, hi):
        n = hi - lo
        which = rng.integers(0, len(pairs), size=n)
        ra = rotation_batch(channel.angles(session_theta, rng, n))
        rb = rotation_batch(channel.angles(session_theta, rng, n))
        ua = np.einsum("nij,njk->nik", an_a[which], ra)
        ub = np.einsum("nij,njk->nik", an_b[which], rb)
        amp = np.einsum("nij,jk,nlk->nil", ua, joint, ub).reshape(n, 16)
        cell = sample_rows(np.abs(amp) ** 2, rng.random(n))
        counts = np.zeros((len(pairs), 2, 2), dtype=np.int64)
        for k, c in enumerate(_CELLS):
            j, m = divmod(k, 2)
            np.add.at(counts[:, j, m], which[cell == c], 1)
        return counts

    return sum(map_chunks(chunk, seed, n_trials))


def run_chsh(n_trials: int, seed: int = 0, channel: ChannelModel | None = None,
             settings=STANDARD_CHSH_SETTINGS) -> ProtocolReport:
    channel = channel or ChannelModel()
    a, ap, b, bp = settings
    pairs = [(a, b), (a, bp), (ap, b), (ap, bp)]
    state = logical_bell(LogicalBellLabel.PHI_PLUS)
    counts = _pair_mc(state, pairs, channel, n_trials, seed)
    es, vs = [], []
    for c in counts:
        n = c.sum()
        e = (c[0, 0] + c[1, 1] - c[0, 1] - c[1, 0]) / n if n else float("nan")
        es.append(float(e))
        vs.append((1 - e * e) / n if n else float("nan"))
    theta = channel.session_angle(seed)
    exact_e = [correlation(state, p, q, theta) for p, q in pairs]
    rep = ProtocolReport("chsh", seed, n_trials, parameters={
        "settings": {"a": a, "a_prime": ap, "b": b, "b_prime": bp},
        "settings_source": "standard CHSH angles for E = cos 2(phi_a - phi_b)" if tuple(settings) == STANDARD_CHSH_SETTINGS else "user",
        "channel": channel.describe(seed),
    })
    names = ["e_ab", "e_ab_prime", "e_a_prime_b", "e_a_prime_b_prime"]
    rep.results = {"s_value": chsh_combination(*es), **dict(zip(names, es))}
    rep.exact = {"s_value": chsh_combination(*exact_e), **dict(zip(names, exact_e))}
    rep.standard_errors = {"s_value": float(np.sqrt(sum(vs))), **{k: float(np.sqrt(v)) for k, v in zip(names, vs)}}
    rep.results["local_bound"] = 2.0
    return rep


def run_hardy(n_trials: int, seed: int = 0, channel: ChannelModel | None = None,
              epsilon: float | None = None, settings=None) -> ProtocolReport:
    channel = channel or ChannelModel()
    if epsilon is None:
        opt = optimize_hardy()
        epsilon, settings = opt.epsilon, opt.settings
        source = "optimized"
    else:
        source = "user"
        if settings is None:
            settings = hardy_settings(epsilon, 0.5)
    a0, a1, b0, b1 = settings
    pairs = [(a0, b0), (a0, b1), (a1, b0), (a1, b1)]
    cells = [(1, 1), (1, 0), (0, 1), (1, 1)]
    names = ["hardy_probability", "p_a0_1_b1_0", "p_a1_0_b0_1", "p_a1_1_b1_1"]
    counts = _pair_mc(nonmax_entangled(epsilon), pairs, channel, n_trials, seed)
    est, se = {}, {}
    for name, c, (j, k) in zip(names, counts, cells):
        n = int(c.sum())
        p = c[j, k] / n if n else float("nan")
        est[name] = float(p)
        se[name] = proportion_stderr(p, n)
    exact = dict(zip(names, hardy_probabilities(epsilon, settings, channel.session_angle(seed))))
    rep = ProtocolReport("hardy", seed, n_trials, parameters={
        "epsilon": epsilon,
        "settings": {"a0": a0, "a1": a1, "b0": b0, "b1": b1},
        "settings_source": source,
        "channel": channel.describe(seed),
    })
    rep.results, rep.exact, rep.standard_errors = est, exact, se
    rep.exact["reference_optimum"] = float(HARDY_OPTIMUM)
    return rep
