import numpy as np
import pytest

from noncyclic.errors import DomainError, SchemaError, UndefinedPhaseError
from noncyclic.experiment import (f_overlap, gamma_mod_pi_candidates, implied_argument, measured_polarization,
                                  polarization_formula, polarization_printed_form, polarization_series,
                                  polarization_z, spin_geometric_phase, sphere_schedule)
from noncyclic.geodesic import SpherePath, latitude_loop, octant_path
from noncyclic.util import circular_distance

TH = np.pi / 3


def arc(theta=TH, dphi=np.pi / 2, n=300):
    return SpherePath(np.full(n, theta), np.linspace(0.0, dphi, n))


@pytest.mark.parametrize("dphi,expected", [(0.0, 0.0), (np.pi / 2, 0.0), (1.5 * np.pi, np.pi)])
def test_f_on_equator(dphi, expected):
    assert circular_distance(f_overlap((np.pi / 2, 0.0), (np.pi / 2, dphi)), expected) < 1e-12


def test_f_general_value():
    # cos^2 e^{-i pi/4} + sin^2 e^{i pi/4} at Theta = pi/3
    assert f_overlap((TH, 0.0), (TH, np.pi / 2)) == pytest.approx(-np.arctan(0.5))


def test_f_antipodal_undefined():
    with pytest.raises(UndefinedPhaseError):
        f_overlap((0.0, 0.0), (np.pi, 0.0))


@pytest.mark.parametrize("theta", [0.3, TH, 1.2])
def test_spin_phase_closed_loop(theta):
    assert circular_distance(spin_geometric_phase(latitude_loop(theta)), -np.pi * (1 - np.cos(theta))) < 1e-12


def test_spin_phase_open_arc():
    expected = -np.arctan(0.5) + 0.5 * 0.5 * np.pi / 2
    assert spin_geometric_phase(arc()) == pytest.approx(expected)


def test_spin_phase_octant():
    assert spin_geometric_phase(octant_path()) == pytest.approx(-np.pi / 4)


@pytest.mark.parametrize("ip,im,expected", [(5.0, 0.0, 1.0), (2.0, 2.0, 0.0), (1.0, 3.0, -0.5)])
def test_measured_polarization(ip, im, expected):
    assert measured_polarization(ip, im) == pytest.approx(expected)


def test_measured_polarization_errors():
    with pytest.raises(ZeroDivisionError):
        measured_polarization(0.0, 1.0)
    with pytest.raises(SchemaError):
        measured_polarization(-1.0, 1.0)


@pytest.mark.parametrize("theta0", [0.2, TH, 2.5])
def test_formula_starts_at_one(theta0):
    assert polarization_formula(theta0, theta0, 0.0, 0.0, 1.0, 0.0) == pytest.approx(1.0)
    assert polarization_printed_form(theta0, theta0, 0.0, 0.0, 1.0, 0.0) == pytest.approx(np.cos(2 * theta0))


def test_polarization_at_zero_time():
    r = polarization_z(TH, arc(), 1.0, 0.0)
    assert r.p_z_analytic == pytest.approx(1.0)
    assert r.p_z_oracle == 1.0


def test_pole_start_never_precesses():
    path = SpherePath(np.zeros(50), np.linspace(0, 1, 50))
    for t in (0.0, 3.0, 50.0):
        r = polarization_z(0.0, path, 1.0, t, oracle=False)
        assert r.p_z_analytic == pytest.approx(1.0)
        assert r.gamma_mod_pi_class == ()


def test_analytic_matches_oracle():
    r = polarization_z(TH, arc(), 1.0, 400.3)
    assert abs(r.p_z_analytic - r.p_z_oracle) < 1e-3
    true = np.mod(r.gamma, np.pi)
    assert min(circular_distance(2 * c, 2 * true) / 2 for c in r.gamma_mod_pi_class) < 5e-3


def test_octant_ends_at_pole():
    r = polarization_z(np.pi / 2, octant_path(), 1.0, 200.0)
    assert r.gamma == pytest.approx(-np.pi / 4)
    assert abs(r.p_z_analytic) < 1e-12
    assert abs(r.p_z_oracle) < 1e-3
    assert r.gamma_mod_pi_class == ()


def test_shots_are_seeded():
    a = polarization_z(TH, arc(), 1.0, 50.0, oracle=False, shots=1000, seed=7)
    b = polarization_z(TH, arc(), 1.0, 50.0, oracle=False, shots=1000, seed=7)
    assert a.p_z_measured == b.p_z_measured
    assert abs(a.p_z_measured - a.p_z_analytic) < 0.15


def test_json_keys():
    r = polarization_z(TH, arc(), 1.0, 10.0, oracle=False)
    assert set(r.to_json()) == {"p_z_analytic", "p_z_oracle", "f", "gamma", "gamma_mod_pi_class"}
    assert "p_z_printed_form" in r.to_json(verbose=True)


def test_input_validation():
    with pytest.raises(SchemaError):
        polarization_z(0.5, arc(), 1.0, 10.0)
    with pytest.raises(SchemaError):
        polarization_z(TH, arc(), 1.0, -1.0)
    with pytest.raises(DomainError):
        polarization_z(TH, arc(), 0.0, 1.0)


def test_mod_pi_classes():
    theta_t, f, gamma, w, t = 1.0, 0.3, 0.9, 1.0, 2.0
    p = polarization_formula(TH, theta_t, f, gamma, w, t)
    classes = gamma_mod_pi_candidates(p, TH, theta_t, f, w, t)
    assert 1 <= len(classes) <= 2
    assert min(abs(c - gamma) for c in classes) < 1e-9
    assert all(0 <= c < np.pi for c in classes)


def test_implied_argument_branch():
    arg = 2.0 * 1.0 * 5.0 + 2 * 0.4
    p = polarization_formula(TH, 1.0, 0.0, 0.4, 1.0, 5.0)
    assert implied_argument(p, TH, 1.0, near=arg + 0.1) == pytest.approx(arg)
    with pytest.raises(UndefinedPhaseError):
        implied_argument(0.5, 0.0, 1.0, 0.0)


def test_series_matches_single_readouts():
    a, o = polarization_series(TH, arc(), 1.0, 200.0, [0.0, 100.0, 200.0])
    assert a[0] == pytest.approx(1.0) and o[0] == pytest.approx(1.0)
    assert np.all(np.abs(a - o) < 5e-3)
    with pytest.raises(SchemaError):
        polarization_series(TH, arc(), 1.0, 200.0, [300.0])


def test_sphere_schedule_rests_at_corners():
    s = sphere_schedule(octant_path(), 10.0, samples_per_leg=100)
    assert s.duration == pytest.approx(10.0)
    speed = np.linalg.norm(s.velocities(), axis=1)
    k = np.argmin(np.abs(s.points[:, 0] - np.pi / 2) + np.abs(s.points[:, 1] - np.pi / 2))
    assert speed[k] < 1e-2 * speed.max()
