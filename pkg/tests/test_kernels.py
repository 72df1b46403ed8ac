import numpy as np
from oracles import haar_unitary

from dfs_photonics import _jit, kernels
from dfs_photonics.fock import _pairs


def test_transfer_variants_agree(rng):
    for _ in range(20):
        U = haar_unitary(rng, 8)
        a = kernels.two_photon_transfer_numpy(U, _pairs())
        b = kernels.two_photon_transfer_jit(U, _pairs())
        assert np.max(np.abs(a - b)) < 1e-13


def test_transfer_is_unitary(rng):
    T = kernels.two_photon_transfer(haar_unitary(rng, 8), _pairs())
    assert np.allclose(T @ T.conj().T, np.eye(36), atol=1e-12)


def test_sampler_variants_agree(rng):
    p = rng.random((500, 7))
    p[:, 3] = 0.0
    u = rng.random(500)
    a = kernels.sample_rows_numpy(p, u)
    b = kernels.sample_rows_jit(p, u)
    assert np.array_equal(a, b)
    assert not np.any(a == 3)


def test_sampler_edges():
    p = np.array([[0.0, 1.0, 0.0], [0.5, 0.5, 0.0]])
    assert list(kernels.sample_rows(p, np.array([0.0, 0.999999]))) == [1, 1]


def test_jit_flag_reflects_environment():
    assert _jit.JIT_ENABLED == (_jit.JIT_REQUESTED and _jit.GOT_NUMBA)
