import json

import numpy as np
import pytest

from noncyclic.errors import SchemaError
from noncyclic.paths import ParameterPath, leg_schedule, load_path, save_path, smootherstep


def test_json_round_trip(tmp_path):
    p = ParameterPath(np.array([0.0, 0.5, 2.0]), np.array([[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]]), closed=False)
    f = tmp_path / "p.json"
    save_path(p, f)
    q = load_path(f)
    assert np.array_equal(p.times, q.times)
    assert np.array_equal(p.points, q.points)
    assert q.closed is False
    assert set(json.loads(f.read_text())) == {"closed", "samples"}


@pytest.mark.parametrize("text", ["{bad json", '{"samples": [{"t": 0}]}', '{"closed": true}',
                                  '{"samples": [{"t": 0, "R": [0]}, {"t": 0, "R": [1]}]}',
                                  '{"samples": [{"t": 0, "R": [0]}, {"t": 1, "R": [1, 2]}]}'])
def test_malformed_files(tmp_path, text):
    f = tmp_path / "bad.json"
    f.write_text(text)
    with pytest.raises(SchemaError):
        load_path(f)


def test_missing_file(tmp_path):
    with pytest.raises(SchemaError):
        load_path(tmp_path / "nope.json")


def test_single_sample_allowed():
    p = ParameterPath.from_points([[0.3]])
    assert len(p) == 1 and p.duration == 0.0


def test_rejects_nonfinite():
    with pytest.raises(SchemaError):
        ParameterPath(np.array([0.0, 1.0]), np.array([0.0, np.nan]))


def test_from_points_detects_closure():
    assert ParameterPath.from_points([0.0, 1.0, 0.0]).closed
    assert not ParameterPath.from_points([0.0, 1.0, 2.0]).closed


def test_at_and_velocities():
    t = np.linspace(0, 2, 21)
    p = ParameterPath(t, np.column_stack([3 * t, t**2]))
    assert np.allclose(p.at(0.55), [1.65, 0.3025 + 0.0025])  # linear between samples 0.5 and 0.6
    v = p.velocities()
    assert np.allclose(v[:, 0], 3.0)
    assert np.allclose(v[:, 1], 2 * t)


def test_scaled_to():
    p = ParameterPath.from_points(np.linspace(0, 1, 5), duration=1.0)
    q = p.scaled_to(10.0)
    assert q.duration == pytest.approx(10.0)
    assert np.array_equal(p.points, q.points)


def test_smootherstep_endpoints():
    x = np.array([0.0, 0.5, 1.0])
    assert np.allclose(smootherstep(x), [0.0, 0.5, 1.0])
    h = 1e-5
    for x0 in (0.0 + h, 1.0 - h):
        d = (smootherstep(x0 + h) - smootherstep(x0 - h)) / (2 * h)
        assert abs(d) < 1e-6


def test_leg_schedule_rests_at_corners():
    wp = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 2.0]])
    s = leg_schedule(wp, 3.0, samples_per_leg=50)
    assert s.duration == pytest.approx(3.0)
    assert len(s) == 101
    assert np.allclose(s.points[50], wp[1])
    assert s.times[50] == pytest.approx(1.0)
    v = s.velocities()
    speed = np.linalg.norm(v, axis=1)
    assert speed[50] < 1e-2 * speed.max()
    assert speed[0] < 1e-2 * speed.max()


def test_leg_schedule_needs_motion():
    with pytest.raises(SchemaError):
        leg_schedule([[0.0], [0.0]], 1.0)
