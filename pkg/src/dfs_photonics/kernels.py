"""Numeric inner loops.

Each kernel exists twice: a loop form compiled by numba and a vectorized
numpy form. The module-level names dispatch on ``_jit.JIT_ENABLED``; both
variants stay importable for benchmarking and cross-checking.
"""

import numpy as np

from . import _jit

__all__ = [
    "two_photon_transfer",
    "two_photon_transfer_numpy",
    "two_photon_transfer_jit",
    "sample_rows",
    "sample_rows_numpy",
    "sample_rows_jit",
]


def _two_photon_transfer_loop(U, pairs):
    # pairs[s] = (i, j) with i <= j: the modes holding the two photons of basis state s
    n = pairs.shape[0]
    out = np.empty((n, n), dtype=np.complex128)
    for t in range(n):
        k = pairs[t, 0]
        l = pairs[t, 1]
        ft = 2.0 if k == l else 1.0
        for s in range(n):
            i = pairs[s, 0]
            j = pairs[s, 1]
            fs = 2.0 if i == j else 1.0
            # 2x2 permanent of U[[k, l]][:, [i, j]]
            perm = U[k, i] * U[l, j] + U[k, j] * U[l, i]
            out[t, s] = perm / np.sqrt(fs * ft)
    return out


def two_photon_transfer_numpy(U, pairs):
    """Two-photon transfer matrix of mode unitary ``U`` over the basis ``pairs``.

    Entry ``[t, s]`` is ``per(U[T, S]) / sqrt(prod S! * prod T!)`` where ``S`` and
    ``T`` are the occupied modes of basis states ``s`` and ``t``.
    """
    U = np.asarray(U, dtype=np.complex128)
    i, j = pairs[:, 0], pairs[:, 1]
    k, l = i[:, None], j[:, None]
    perm = U[k, i[None, :]] * U[l, j[None, :]] + U[k, j[None, :]] * U[l, i[None, :]]
    fact = np.where(i == j, 2.0, 1.0)
    return perm / np.sqrt(np.outer(fact, fact))


def _sample_rows_loop(probs, u):
    n, m = probs.shape
    out = np.empty(n, dtype=np.int64)
    for r in _jit.prange(n):
        total = 0.0
        for c in range(m):
            total += probs[r, c]
        target = u[r] * total
        acc = 0.0
        pick = m - 1
        for c in range(m):
            acc += probs[r, c]
            if acc > target:
                pick = c
                break
        out[r] = pick
    return out


def sample_rows_numpy(probs, u):
    """Inverse-CDF draw of one column index per row of ``probs`` using uniforms ``u``."""
    cdf = np.cumsum(probs, axis=1)
    idx = (cdf <= (u * cdf[:, -1])[:, None]).sum(axis=1)
    return np.minimum(idx, probs.shape[1] - 1).astype(np.int64)


if _jit.GOT_NUMBA:
    import numba as _numba

    two_photon_transfer_jit = _numba.njit(cache=True)(_two_photon_transfer_loop)
    sample_rows_jit = _numba.njit(cache=True, parallel=True)(_sample_rows_loop)
else:  # pragma: no cover
    two_photon_transfer_jit = _two_photon_transfer_loop
    sample_rows_jit = _sample_rows_loop


def two_photon_transfer(U, pairs):
    U = np.ascontiguousarray(U, dtype=np.complex128)
    if _jit.JIT_ENABLED:
        return two_photon_transfer_jit(U, pairs)
    return two_photon_transfer_numpy(U, pairs)


def sample_rows(probs, u):
    probs = np.ascontiguousarray(probs, dtype=np.float64)
    u = np.ascontiguousarray(u, dtype=np.float64)
    if _jit.JIT_ENABLED:
        return sample_rows_jit(probs, u)
    return sample_rows_numpy(probs, u)
