import numpy as np
import pytest

from holoising import oracle
from holoising.fermion_core import Sector, mode_set


def test_two_site_ground_energy_is_ns_vacuum():
    spec = oracle.dense_spectrum(2)
    eps = mode_set(2, Sector.NS).energies
    assert spec.energies[0] == pytest.approx(-eps.sum() / 2, abs=1e-10)


@pytest.mark.parametrize("L", [2, 4, 6])
def test_hamiltonian_is_traceless_symmetric(L):
    H = oracle.spin_hamiltonian(L)
    assert abs(np.trace(H)) < 1e-12
    np.testing.assert_array_equal(H, H.T)


@pytest.mark.parametrize("L", [4, 8])
def test_eigensystem_residual_and_orthonormality(L):
    spec = oracle.dense_spectrum(L)
    V = spec.vectors
    resid = spec.hamiltonian @ V - V * spec.energies
    assert np.max(np.linalg.norm(resid, axis=0)) < 1e-10
    assert np.max(np.abs(V.T @ V - np.eye(V.shape[0]))) < 1e-10


def test_spin_flip_symmetry_in_spectrum():
    # the global flip prod_j X_j commutes with H; each level is an eigenstate of it
    L = 6
    spec = oracle.dense_spectrum(L)
    idx = np.arange(2 ** L)
    P = np.zeros((2 ** L, 2 ** L))
    P[idx, idx ^ (2 ** L - 1)] = 1.0
    np.testing.assert_allclose(P @ spec.hamiltonian, spec.hamiltonian @ P, atol=1e-14)


def test_range_checks():
    with pytest.raises(ValueError):
        oracle.dense_spectrum(11)
    with pytest.raises(ValueError):
        oracle.fock_exact_green(16, 1.0, 1.0, 3)


def test_infinite_temperature_entropy():
    assert oracle.dense_entropy(6, 1e4) == pytest.approx(6 * np.log(2), abs=1e-4)


def test_dense_green_is_real_and_causal():
    g = oracle.dense_thermal_green(6, 1.0, np.array([-1.0, 0.5, 1.5]), 2)
    assert g.dtype == float
    assert g[0] == 0.0


def test_dense_commutator_complex_part_vanishes():
    # direct evaluation with complex time evolution, no Lehmann shortcut
    L, T, t, s = 4, 1.0, 0.8, 1
    spec = oracle.dense_spectrum(L)
    p = np.exp(-(spec.energies - spec.energies.min()) / T)
    p /= p.sum()
    U = np.exp(-1j * spec.energies * t)
    A = spec.density(s)
    B = spec.density(0)
    A_t = np.conj(U)[:, None] * A * U[None, :]
    comm = A_t @ B - B @ A_t
    expect = np.sum(p * np.diag(comm))
    val = -1j * expect
    assert abs(val.imag) < 1e-12
    assert val.real == pytest.approx(oracle.dense_thermal_green(L, T, t, s), abs=1e-14)


@pytest.mark.parametrize("L", [4, 6, 8])
def test_dense_and_projected_fock_agree(L):
    for T in (0.5, 1.0):
        for t, s in ((1.0, 3 % L), (0.7, 1)):
            a = oracle.dense_thermal_green(L, T, t, s)
            b = oracle.fock_exact_green(L, T, t, s, projected=True)
            assert abs(a - b) <= 1e-10 * max(abs(a), 1e-6)


def test_fock_partition_matches_dense():
    for L in (4, 6, 8):
        assert oracle.fock_log_partition(L, 0.8) == pytest.approx(oracle.dense_log_partition(L, 0.8),
                                                                 rel=1e-12)


def test_zero_temperature_routes_coincide():
    for L in (6, 8):
        a = oracle.fock_exact_green(L, 0.0, 1.0, 2, projected=True)
        b = oracle.fock_exact_green(L, 0.0, 1.0, 2, projected=False)
        c = oracle.dense_thermal_green(L, 0.0, 1.0, 2)
        assert a == pytest.approx(b, rel=1e-12)
        assert a == pytest.approx(c, rel=1e-9)
