import numpy as np
import pytest

from noncyclic.errors import DegeneracyError, DomainError, ResolutionError, SchemaError
from noncyclic.models import (PAULI, SIGMA_X, SIGMA_Z, EigenFrame, SpinConfig, conical_model, eigensolve,
                              phase_smooth, spin_model, spin_vector_model, tabulated_model)


def parallel(u, v):
    return abs(abs(np.vdot(u, v)) - 1.0) < 1e-12


def test_conical_at_zero():
    m = conical_model(1.0)
    assert np.allclose(m.hamiltonian([0.0]), np.diag([1.0, -1.0]))
    f = m.frame([0.0], "+")
    assert np.allclose(f.vector, [1.0, 0.0])
    assert f.energy == pytest.approx(1.0)


def test_conical_quarter_turn():
    m = conical_model(1.0)
    assert np.allclose(m.hamiltonian([np.pi / 2]), SIGMA_X)
    assert np.allclose(m.frame([np.pi / 2], "+").vector, [np.cos(np.pi / 4), np.sin(np.pi / 4)])


@pytest.mark.parametrize("phi", [0.0, 0.7, 2.5, 5.9])
def test_conical_gap(phi):
    m = conical_model(2.0)
    E = np.linalg.eigvalsh(m.hamiltonian([phi]))
    assert E[1] - E[0] == pytest.approx(4.0)
    assert m.frame([phi], "+").gap == pytest.approx(4.0)


@pytest.mark.parametrize("R", [0.0, -1.0])
def test_conical_rejects_nonpositive_radius(R):
    with pytest.raises(DomainError):
        conical_model(R)


def test_spin_north_pole():
    m = spin_model(SpinConfig(1.0))
    assert np.allclose(m.hamiltonian([0.0, 0.0]), -SIGMA_Z)
    assert np.allclose(m.frame([0.0, 0.0], "+").vector, [1.0, 0.0])


def test_spin_equator_frame():
    m = spin_model()
    v = m.frame([np.pi / 2, 0.0], "+").vector
    assert parallel(v, [np.cos(np.pi / 4), np.sin(np.pi / 4)])
    assert np.allclose(v, [np.cos(np.pi / 4), np.sin(np.pi / 4)])


@pytest.mark.parametrize("theta,phi", [(0.3, 0.1), (1.2, 4.0), (2.9, -1.0)])
def test_spin_gap_and_levels(theta, phi):
    m = spin_model(SpinConfig(3.0))
    plus, minus = m.frame([theta, phi], "+"), m.frame([theta, phi], "-")
    assert plus.energy == pytest.approx(-3.0)
    assert minus.energy == pytest.approx(3.0)
    assert plus.gap == pytest.approx(6.0)
    H = m.hamiltonian([theta, phi])
    for f in (plus, minus):
        assert np.allclose(H @ f.vector, f.energy * f.vector)


def test_spin_config_validates():
    with pytest.raises(DomainError):
        SpinConfig(0.0)


@pytest.mark.parametrize("model,point", [(conical_model(1.3), [0.4]), (spin_model(SpinConfig(2.0)), [0.8, 2.2])])
def test_analytic_frames_match_numerics(model, point):
    for level in ("+", "-"):
        a = model.frame(point, level)
        n = model.frame(point, level, analytic=False)
        assert a.energy == pytest.approx(n.energy)
        assert parallel(a.vector, n.vector)


@pytest.mark.parametrize("model,point", [(conical_model(1.3), [0.4]), (spin_model(SpinConfig(2.0)), [0.8, 2.2])])
def test_registered_connection_matches_frames(model, point):
    h = 1e-6
    point = np.asarray(point, dtype=float)
    for level in (0, 1):
        A = model.connection(point, level)
        for j in range(len(point)):
            dp = np.zeros_like(point)
            dp[j] = h
            dv = (model.frame(point + dp, level).vector - model.frame(point - dp, level).vector) / (2 * h)
            v = model.frame(point, level).vector
            assert (1j * np.vdot(v, dv)).real == pytest.approx(A[j], abs=1e-8)


def test_registered_gradient_matches_differences():
    m = spin_model(SpinConfig(1.7))
    p = np.array([0.9, 1.3])
    h = 1e-6
    for j in range(2):
        dp = np.zeros(2)
        dp[j] = h
        fd = (m.hamiltonian(p + dp) - m.hamiltonian(p - dp)) / (2 * h)
        assert np.allclose(m.dH(p)[j], fd, atol=1e-8)


def test_eigensolve_sigma_z_ground():
    f = eigensolve(SIGMA_Z, 0)
    assert f.energy == pytest.approx(-1.0)
    assert parallel(f.vector, [0.0, 1.0])


def test_eigensolve_conical_upper_level():
    m = conical_model(1.0)
    f = eigensolve(m.hamiltonian([np.pi / 2]), 1)
    assert f.energy == pytest.approx(1.0)
    assert parallel(f.vector, m.frame([np.pi / 2], "+").vector)


def test_eigensolve_deterministic_gauge():
    H = np.array([[0.3, 0.5 - 0.2j], [0.5 + 0.2j, -0.1]])
    f1 = eigensolve(H, 0)
    f2 = eigensolve(H * 1.0, 0)
    assert np.array_equal(f1.vector, f2.vector)
    k = np.argmax(np.abs(f1.vector))
    assert f1.vector[k].imag == 0 and f1.vector[k].real > 0


def test_eigensolve_degenerate():
    m = conical_model(1e-12)
    with pytest.raises(DegeneracyError):
        eigensolve(m.hamiltonian([0.0]), 0)


def test_eigenframe_rejects_zero_gap():
    with pytest.raises(DegeneracyError):
        EigenFrame(0, 0.0, np.array([1.0, 0.0]), [0.0], 0.0)


def test_level_labels():
    assert conical_model().level("+") == 1
    assert spin_model().level("+") == 0
    with pytest.raises(SchemaError):
        spin_model().level("up")
    with pytest.raises(SchemaError):
        spin_model().level(2)


def test_phase_smooth_fixed_point():
    m = conical_model()
    frames = [m.frame([p], "+") for p in np.linspace(0, 1, 10)]
    out = phase_smooth(frames)
    for a, b in zip(frames, out):
        assert np.allclose(a.vector, b.vector)


def test_phase_smooth_flips_negative_overlap():
    a = EigenFrame(0, 0.0, np.array([1.0, 0.0]), [0.0], 1.0)
    b = EigenFrame(0, 0.0, np.array([-1.0, 0.1]), [0.0], 1.0)
    out = phase_smooth([a, b])
    assert np.allclose(out[1].vector, -b.vector)


def test_phase_smooth_primed_gauge():
    m = conical_model()
    phis = np.linspace(0, np.pi / 2, 30)
    frames = [m.frame([p], "+").rephased(p / 2) for p in phis]
    out = phase_smooth(frames)
    ovs = [np.vdot(x.vector, y.vector) for x, y in zip(out[:-1], out[1:])]
    assert np.allclose(np.imag(ovs), 0, atol=1e-15)
    assert min(np.real(ovs)) > 0


def test_phase_smooth_refuses_orthogonal_neighbours():
    a = EigenFrame(0, 0.0, np.array([1.0, 0.0]), [0.0], 1.0)
    b = EigenFrame(0, 0.0, np.array([0.0, 1.0]), [0.0], 1.0)
    with pytest.raises(ResolutionError):
        phase_smooth([a, b])


def test_spin_vector_model():
    m = spin_vector_model()
    b = np.array([0.3, -0.4, 1.2])
    assert np.allclose(m.hamiltonian(b), -np.tensordot(b, PAULI, axes=1))
    assert m.frame(b, "+").energy == pytest.approx(-np.linalg.norm(b))


def _table(points, fn):
    return [{"point": list(np.atleast_1d(p)), "matrix": [[[z.real, z.imag] for z in row] for row in fn(p)]}
            for p in points]


def test_tabulated_one_parameter():
    fn = lambda x: np.array([[np.cos(x), 0.2 - 0.1j * x], [0.2 + 0.1j * x, -np.cos(x)]])
    xs = np.linspace(0, 1, 5)
    m = tabulated_model(_table(xs, fn))
    assert np.allclose(m.hamiltonian([xs[2]]), fn(xs[2]))
    mid = 0.5 * (xs[1] + xs[2])
    assert np.allclose(m.hamiltonian([mid]), 0.5 * (fn(xs[1]) + fn(xs[2])))
    with pytest.raises(SchemaError):
        m.hamiltonian([1.5])


def test_tabulated_two_parameter_grid():
    fn = lambda p: np.array([[p[0], p[1]], [p[1], -p[0]]], dtype=complex)
    pts = [(x, y) for x in np.linspace(0, 1, 4) for y in np.linspace(0, 1, 4)]
    m = tabulated_model(_table(pts, fn))
    # linear function: reproduced exactly everywhere inside the hull
    assert np.allclose(m.hamiltonian([0.37, 0.61]), fn((0.37, 0.61)))


def test_tabulated_rejects_non_hermitian():
    fn = lambda x: np.array([[1.0, 1.0], [0.0, -1.0]], dtype=complex)
    with pytest.raises(SchemaError):
        tabulated_model(_table([0.0, 1.0], fn))


@pytest.mark.parametrize("entries", [[], [{"point": [0]}], [{"point": [0], "matrix": [1, 2]}] * 2])
def test_tabulated_rejects_malformed(entries):
    with pytest.raises(SchemaError):
        tabulated_model(entries)
