import numpy as np
import pytest
from hypothesis import given, strategies as st

from holoising.geodesics import (Classification, GeodesicParams, ads_affine_check,
                                 ads_arrival_time_numeric, ads_null_geodesic, ads_numeric_profile,
                                 ads_rho_min, ads_trajectory, btz_classify, btz_integrate,
                                 btz_turning_point)


def test_params_validation():
    with pytest.raises(ValueError):
        GeodesicParams(0.0)
    with pytest.raises(ValueError):
        GeodesicParams(1.0, ell=-1.0)
    with pytest.raises(ValueError):
        GeodesicParams(1.0, rho_h=-0.1)
    assert GeodesicParams(5.0, rho_h=0.3).btz_mass(3.0) == pytest.approx(0.09 / 24)


def test_closed_form_landmarks():
    p = GeodesicParams(5.0, 3.0, ell=1.3)
    t, rho, phi = ads_null_geodesic(0.0, p)
    assert (t, phi) == (np.pi / 2, np.pi / 2)
    assert rho == pytest.approx(1.3 * 3 / 4, rel=1e-15)
    t, rho, phi = ads_null_geodesic(-1e12, p)
    assert t == pytest.approx(0, abs=1e-10) and phi == pytest.approx(0, abs=1e-10)
    t, rho, phi = ads_null_geodesic(1e12, p)
    assert t == pytest.approx(np.pi) and phi == pytest.approx(np.pi) and rho > 1e10
    assert ads_null_geodesic(0.0, GeodesicParams(2.0))[1] == 0.0


def test_negative_angular_momentum_goes_the_other_way():
    t, _, phi = ads_null_geodesic(np.array([-1e9, 1e9]), GeodesicParams(2.0, -1.0))
    np.testing.assert_allclose(phi, [0.0, -np.pi], atol=1e-8)


def test_closed_form_rejects_unlaunchable():
    with pytest.raises(ValueError):
        ads_null_geodesic(0.0, GeodesicParams(1.0, 1.0))


def test_closed_form_satisfies_radial_equation():
    p = GeodesicParams(3.0, 1.2, ell=0.8)
    lam = np.linspace(-5, 5, 101)
    h = 1e-6
    _, rho, _ = ads_null_geodesic(lam, p)
    _, rp, _ = ads_null_geodesic(lam + h, p)
    _, rm, _ = ads_null_geodesic(lam - h, p)
    # d rho/d lambda with lambda = lambda_tilde/(Omega^2 - M^2)
    rho_dot = (rp - rm) / (2 * h) * (p.Omega ** 2 - p.M_ang ** 2)
    lhs = p.ell ** 2 * rho_dot ** 2
    rhs = p.Omega ** 2 - (p.ell ** 2 + rho ** 2) * p.M_ang ** 2 / rho ** 2
    np.testing.assert_allclose(lhs, rhs, rtol=1e-6, atol=1e-9 * p.Omega ** 2)


def test_arrival_time_examples():
    assert ads_arrival_time_numeric(GeodesicParams(5.0, 0.0)) == pytest.approx(np.pi, abs=1e-5)
    assert ads_arrival_time_numeric(GeodesicParams(5.0, 3.0)) == pytest.approx(np.pi, abs=1e-5)


@given(st.floats(0.2, 20.0), st.floats(-0.95, 0.95), st.floats(0.3, 3.0))
def test_arrival_time_universal(Om, frac, ell):
    p = GeodesicParams(Om, frac * Om, ell=ell)
    assert ads_arrival_time_numeric(p) == pytest.approx(np.pi, abs=1e-5)


def test_richardson_improves_on_raw_cutoff():
    from holoising.geodesics import _ads_arrival_at

    p = GeodesicParams(2.0, 1.0)
    raw = abs(_ads_arrival_at(p, 1e3) - np.pi)
    extrap = abs(ads_arrival_time_numeric(p, 1e3) - np.pi)
    assert extrap < 1e-3 * raw


@pytest.mark.parametrize("p", [GeodesicParams(5.0, 3.0), GeodesicParams(5.0, 0.0),
                               GeodesicParams(2.0, -1.5, ell=1.7)])
def test_numeric_trajectory_matches_closed_form(p):
    rho_max = 1e6
    rho = np.geomspace(ads_rho_min(p) + 1e-3, 100.0, 40)
    t, phi = ads_numeric_profile(p, rho, rho_max)
    k2 = p.Omega ** 2 - p.M_ang ** 2
    lam = p.ell * np.sqrt(k2 * rho ** 2 - p.ell ** 2 * p.M_ang ** 2)
    lam0 = p.ell * np.sqrt(k2 * rho_max ** 2 - p.ell ** 2 * p.M_ang ** 2)
    t0, _, phi0 = ads_null_geodesic(-lam0, p)
    for row, sign in ((0, -1.0), (1, 1.0)):
        tc, _, phic = ads_null_geodesic(sign * lam, p)
        np.testing.assert_allclose(t[row], tc - t0, atol=1e-8)
        if p.M_ang != 0:
            np.testing.assert_allclose(phi[row], phic - phi0, atol=1e-8)


@pytest.mark.parametrize("p", [GeodesicParams(5.0, 3.0), GeodesicParams(5.0, 0.0),
                               GeodesicParams(1.5, 1.0, ell=2.0)])
def test_affine_conservation_and_null_condition(p):
    diag = ads_affine_check(p)
    assert diag["omega_drift"] < 1e-8
    assert diag["M_drift"] < 1e-8
    assert diag["null_residual"] < 1e-8


def test_trajectory_export_columns():
    traj = ads_trajectory(GeodesicParams(3.0, 1.0), count=11)
    rows = traj.rows()
    assert rows.shape == (11, 5)
    assert traj.classification is Classification.REACHES_ANTIPODE
    assert np.all(np.diff(traj.t) > 0)
    assert np.all((traj.r_compactified >= 0) & (traj.r_compactified < 1))


def test_btz_classification_examples():
    assert btz_classify(GeodesicParams(5.0, 0.0, rho_h=0.3)) is Classification.CAPTURED
    assert btz_classify(GeodesicParams(5.0, 3.0, rho_h=0.1)) is Classification.CAPTURED
    assert btz_classify(GeodesicParams(1.0, 2.0, rho_h=0.1)) is Classification.NOT_BOUNDARY_LAUNCHABLE
    with pytest.raises(ValueError):
        btz_classify(GeodesicParams(1.0))


def test_btz_dichotomy_random_draws():
    rng = np.random.default_rng(20240611)
    for _ in range(100):
        p = GeodesicParams(rng.uniform(0.1, 5), rng.uniform(-8, 8), rng.uniform(0.3, 2),
                           rng.uniform(0.05, 1.5))
        has_turn = btz_turning_point(p) is not None
        captured = btz_classify(p) is Classification.CAPTURED
        assert captured != has_turn


@pytest.mark.parametrize("rho_h", [0.1, 0.3])
@pytest.mark.parametrize("M", [0.0, 3.0])
def test_btz_capture(rho_h, M):
    p = GeodesicParams(5.0, M, rho_h=rho_h)
    traj = btz_integrate(p, 2.0, 1e-6)
    assert traj.classification is Classification.CAPTURED
    assert np.all(np.diff(traj.t) > 0)
    assert traj.rho[-1] <= rho_h * (1 + 1e-6) * (1 + 1e-15)
    assert traj.diagnostics["null_residual"] < 1e-8
    assert traj.r_compactified[-1] == pytest.approx(rho_h / np.sqrt(1 + rho_h ** 2), rel=1e-6)
    finer = btz_integrate(p, 2.0, 5e-7)
    assert finer.t[-1] > traj.t[-1]


def test_btz_time_grows_logarithmically():
    p = GeodesicParams(5.0, 0.0, rho_h=0.3)
    t = [btz_integrate(p, 2.0, eps).t[-1] for eps in (1e-4, 1e-5, 1e-6)]
    steps = np.diff(t)
    # dt ~ -(l^2/(2 rho_h)) d log(rho - rho_h) near the horizon
    np.testing.assert_allclose(steps, np.log(10) / (2 * 0.3), rtol=1e-3)


def test_btz_rejects_unlaunchable_and_bad_start():
    with pytest.raises(ValueError):
        btz_integrate(GeodesicParams(1.0, 2.0, rho_h=0.1))
    with pytest.raises(ValueError):
        btz_integrate(GeodesicParams(5.0, rho_h=0.3), rho_start=0.2)
