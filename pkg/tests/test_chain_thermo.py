import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from holoising import oracle
from holoising.chain_thermo import (MinimumResult, chain_entropy, chain_entropy_derivative,
                                    chain_heat_capacity, chain_log_partition, entropy_curve,
                                    golden_minimize, ground_gap, locate_dsdt_minimum,
                                    temperature_grid)
from holoising.fermion_core import log_partition_spin


@pytest.mark.parametrize("L", [2, 4, 6, 8])
@pytest.mark.parametrize("T", [0.5, 1.0, 5.0])
def test_entropy_matches_dense(L, T):
    assert chain_entropy(L, T) == pytest.approx(oracle.dense_entropy(L, T), rel=1e-8)


def test_log_partition_consistent():
    for L, T in ((6, 0.3), (100, 1.0), (1000, 0.05)):
        assert chain_log_partition(L, T) == pytest.approx(log_partition_spin(L, T), rel=1e-12)


def test_ground_gap_limit():
    assert ground_gap(2) == pytest.approx(np.tan(np.pi / 8) / np.pi)
    assert ground_gap(10 ** 6) == pytest.approx(1 / 8, rel=1e-9)


def test_low_temperature_entropy_small():
    assert chain_entropy(1000, 0.01) < 0.01
    # gapped by 1/8: dS/dT ~ (gap/T)^2 exp(-gap/T)/T
    assert chain_entropy_derivative(1000, 0.003) < 1e-10


def test_high_temperature_slope():
    assert chain_entropy_derivative(1000, 0.5) == pytest.approx(np.pi ** 2 / 3, rel=0.1)


def test_analytic_derivative_vs_finite_difference():
    L, T, h = 256, 0.3, 1e-5
    fd = (chain_entropy(L, T + h) - chain_entropy(L, T - h)) / (2 * h)
    assert chain_entropy_derivative(L, T) == pytest.approx(fd, rel=1e-5)


def test_heat_capacity_relation():
    assert chain_heat_capacity(64, 0.4) == pytest.approx(0.4 * chain_entropy_derivative(64, 0.4))


def test_entropy_increment_is_integral_of_slope():
    L, T1, T2 = 200, 0.12, 0.35
    integral, _ = quad(lambda T: chain_entropy_derivative(L, T), T1, T2, epsabs=0, epsrel=1e-10)
    assert chain_entropy(L, T2) - chain_entropy(L, T1) == pytest.approx(integral, rel=1e-6)


@given(st.integers(1, 300).map(lambda n: 2 * n))
def test_curve_monotone_and_nonnegative(L):
    curve = entropy_curve(L, temperature_grid(0.01, 1.0, 60))
    assert np.all(curve.S >= 0)
    assert np.all(np.diff(curve.S) >= 0)
    assert np.all(curve.dSdT >= 0)


def test_temperature_grid():
    T = temperature_grid()
    assert T.size == 400
    assert T[0] == 0.01 and T[-1] == 1.0
    assert np.all(np.diff(T) > 0)


@pytest.mark.parametrize("bad", [(10, 0.0), (10, -1.0), (7, 1.0)])
def test_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        chain_entropy(*bad)


def test_golden_minimize_quadratic_and_boundary():
    res = golden_minimize(lambda x: (x - 0.3) ** 2, 0.0, 1.0, tol=1e-6)
    assert isinstance(res, MinimumResult)
    assert res.T_min == pytest.approx(0.3, abs=1e-6) and not res.boundary
    assert golden_minimize(lambda x: x, 0.0, 1.0).boundary
    assert golden_minimize(lambda x: -x, 0.0, 1.0).boundary


def test_minimum_stable_in_size():
    mins = [locate_dsdt_minimum(L, 0.05, 0.4) for L in (250, 500, 1000)]
    assert all(not m.boundary for m in mins)
    assert all(m.bracket[1] - m.bracket[0] <= 1e-4 for m in mins)
    Ts = [m.T_min for m in mins]
    assert max(Ts) - min(Ts) < 0.02
    assert Ts[-1] == pytest.approx(0.16, abs=0.02)
