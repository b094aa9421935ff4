import numpy as np
import pytest
from hypothesis import given, strategies as st

from holoising import oracle
from holoising.fermion_core import Sector, mode_set
from holoising.thermal_response import (Ensemble, QuadratureError, SourceProfile,
                                        _trapezoid_refined, ensemble_components, green_table,
                                        linear_response, retarded_green, retarded_green_direct,
                                        source_field, summed_response, transport_ratio)


def ring_scale(L, T, t, ensemble=Ensemble.PROJECTED):
    return np.max(np.abs(retarded_green(t, np.arange(L), L, T, ensemble)))


def close(a, b, L, T, t, ensemble, rtol=1e-12):
    """Relative to the ring-wide magnitude, plus ~100 ulps of the O(1/L)
    summands for times where G itself vanishes (t = 0)."""
    return abs(a - b) <= rtol * ring_scale(L, T, t, ensemble) + 1e-14 / L


# -- source ----------------------------------------------------------------

def test_source_peak_and_profile():
    p = SourceProfile()
    L = 64
    A = np.sqrt(2 * L / (0.25 * 0.25)) / (4 * np.pi)
    assert p.amplitude(L) == pytest.approx(A, rel=1e-15)
    assert source_field(L // 2, 0.0, p, L) == pytest.approx(A, rel=1e-15)
    still = SourceProfile(Omega=0.0)
    assert source_field(L // 2, 0.25, still, L) == pytest.approx(A * np.exp(-0.5), rel=1e-14)
    vals = source_field(np.arange(1, L + 1), 0.1, still, L)
    assert np.all(vals.imag == 0) and np.all(vals.real > 0)
    mags = np.abs(source_field(np.arange(1, L + 1), 0.0, p, L))
    assert np.argmax(mags) + 1 == L // 2


@pytest.mark.parametrize("kw", [{"sigma_t": 0.0}, {"sigma_phi": -1.0}, {"sigma_t": 0.6}])
def test_source_validation(kw):
    with pytest.raises(ValueError):
        SourceProfile(**kw)


# -- Green's function ------------------------------------------------------

def test_retardation():
    assert retarded_green(-1.0, 2, 16, 0.5) == 0.0
    assert retarded_green_direct(-1.0, 2, 16, 0.5) == 0.0
    assert summed_response(-0.3, 16, 1.0) == 0.0


@given(st.floats(0.0, 4.0), st.integers(0, 31), st.floats(0.0, 3.0),
       st.sampled_from(list(Ensemble)))
def test_ring_reflection(t, s, T, ensemble):
    L = 32
    a = retarded_green(t, s, L, T, ensemble)
    b = retarded_green(t, (L - s) % L, L, T, ensemble)
    assert close(a, b, L, T, t, ensemble)


def test_six_site_example_two_tier():
    L, t, s, T = 6, 1.0, 2, 0.5
    dense = oracle.dense_thermal_green(L, T, t, s)
    assert retarded_green(t, s, L, T, Ensemble.PROJECTED) == pytest.approx(dense, rel=1e-10)
    fact = retarded_green(t, s, L, T, Ensemble.NS)
    assert fact == pytest.approx(oracle.fock_exact_green(L, T, t, s, projected=False), rel=1e-10)
    assert fact != pytest.approx(dense, rel=1e-6)


@given(st.floats(0.0, 3.0), st.integers(0, 127), st.floats(0.05, 3.0),
       st.sampled_from(list(Ensemble)))
def test_separable_matches_double_sum(t, s, T, ensemble):
    L = 128
    fast = retarded_green(t, s, L, T, ensemble)
    slow = retarded_green_direct(t, s, L, T, ensemble)
    assert close(fast, slow, L, T, t, ensemble)


@pytest.mark.parametrize("L", [8, 64, 512])
def test_equal_time_commutator(L):
    g = retarded_green(1e-12, np.arange(1, L), L, 0.7)
    assert np.max(np.abs(g)) <= 1e-10


def test_zero_temperature_is_vacuum_formula():
    L = 40
    modes = mode_set(L, Sector.NS)
    taus, seps = np.array([0.2, 1.1, 2.5]), np.arange(L)
    vac = green_table(taus, seps, modes, np.zeros(L))
    for ens in Ensemble:
        np.testing.assert_array_equal(retarded_green(taus, seps, L, 0.0, ens), vac)


def test_projected_weights_sum_to_one():
    for L, T in ((8, 0.3), (64, 1.0), (512, 5.0)):
        comps = ensemble_components(L, T, Ensemble.PROJECTED)
        # the constant part of every component contributes (weight * occupations-independent) 1
        total = sum(w for w, _, _ in comps[:3]) + sum(w for w, _, _ in comps[3:])
        assert total == pytest.approx(1.0, rel=1e-12)


# -- sourced response ------------------------------------------------------

def test_linear_in_source_amplitude():
    L = 32
    a = linear_response(L, np.pi, 0.4, SourceProfile(), L)
    b = linear_response(L, np.pi, 0.4, SourceProfile(gain=2.0), L)
    assert b == 2 * a


def test_before_source_support_is_zero():
    assert linear_response(16, -2.0, 0.5, SourceProfile(), 16) == 0


def test_antipodal_signal_at_zero_temperature():
    assert abs(linear_response(128, np.pi, 0.0, SourceProfile(), 128)) > 1e-3


def test_matches_dense_oracle_with_wide_source():
    L = 8
    p = SourceProfile(sigma_t=0.25, sigma_phi=1.0, Omega=3.0, M_source=1)
    for T in (0.0, 0.7):
        fast = linear_response(L, np.pi, T, p, L)
        ref = oracle.dense_linear_response(L, L, np.pi, T, p, n_time=8001)
        assert abs(fast - ref) <= 1e-6 * abs(ref)


def test_quadrature_cap_is_reported():
    def wiggly(times):
        return np.cos(4000.0 * times)[None, :]

    with pytest.raises(QuadratureError):
        _trapezoid_refined(wiggly, 0.0, 1.0, n_start=11, cap=200)


def test_quadrature_reaches_tolerance():
    def gauss(times):
        return np.exp(-times ** 2 / 0.125)[None, :]

    val = _trapezoid_refined(gauss, -1.5, 1.5)[0]
    assert val == pytest.approx(np.sqrt(0.125 * np.pi), rel=1e-6)


def test_transport_ratio_normalization():
    assert transport_ratio(0.0, SourceProfile(), 64) == 1.0


def test_transport_ratio_small_at_high_temperature():
    assert transport_ratio(1.0, SourceProfile(), 512) < 0.05


# -- summed response -------------------------------------------------------

@pytest.mark.parametrize("ensemble", list(Ensemble))
@pytest.mark.parametrize("T", [0.0, 0.4, 2.0])
def test_summed_equals_site_sum(ensemble, T):
    L = 48
    t = np.array([0.05, 0.7, 1.9])
    direct = retarded_green(t, np.arange(L), L, T, ensemble).sum(axis=1)
    np.testing.assert_allclose(summed_response(t, L, T, ensemble), direct, rtol=1e-12)


def test_summed_six_sites_against_oracles():
    L, t, T = 6, 0.7, 1.0
    ref = sum(oracle.fock_exact_green(L, T, t, s, projected=True) for s in range(L))
    dense = sum(oracle.dense_thermal_green(L, T, t, s) for s in range(L))
    assert summed_response(t, L, T) == pytest.approx(ref, rel=1e-10)
    assert summed_response(t, L, T) == pytest.approx(dense, rel=1e-10)


def test_ns_summed_is_tanh_formula():
    L, T = 64, 0.8
    t = np.linspace(0, 3, 7)
    m = mode_set(L, Sector.NS)
    ref = -(np.sin(2 * np.outer(t, m.energies)) @ (np.cos(m.momenta / 2) ** 2
                                                    * np.tanh(m.energies / (2 * T)))) / L
    np.testing.assert_allclose(summed_response(t, L, T, Ensemble.NS), ref, rtol=1e-12, atol=1e-16)


def test_summed_decay_rate_at_high_temperature():
    T = 2.0
    t = np.linspace(0.16, 0.3, 40)
    R = np.abs(summed_response(t, 1000, T))
    slope = np.polyfit(t, np.log(R), 1)[0]
    assert slope == pytest.approx(-4 * np.pi, rel=0.1)
