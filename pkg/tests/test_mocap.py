import json
import math
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as hst

from dcl import mocap
from dcl.config import shipped_dataset


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def test_solve_pose_recovers_random_transforms():
    rng = np.random.default_rng(0)
    for _ in range(200):
        ref = rng.uniform(-100, 100, (3, 3))
        if mocap.triangle_area(ref) < 10:
            continue
        R, t = random_rotation(rng), rng.uniform(-500, 500, 3)
        pose = mocap.solve_pose(ref, ref @ R.T + t)
        assert np.max(np.abs(pose.rotation - R)) < 1e-9
        assert np.max(np.abs(pose.translation - t)) < 1e-9
        assert pose.rmsd < 1e-9


@settings(max_examples=50, deadline=None)
@given(yaw=hst.floats(-180, 180), dz=hst.floats(-1000, 1000))
def test_solve_pose_is_proper_rotation(yaw, dz):
    ref = np.array([[100.0, 0, 0], [0, 80.0, 0], [0, 0, 60.0]])
    c, s = math.cos(math.radians(yaw)), math.sin(math.radians(yaw))
    R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
    pose = mocap.solve_pose(ref, ref @ R.T + [0, 0, dz])
    assert np.linalg.det(pose.rotation) == pytest.approx(1.0)
    assert pose.translation[2] == pytest.approx(dz, abs=1e-9)


def test_solve_pose_excludes_reflection():
    # a mirrored triangle is still congruent, so a proper rotation must fit it
    rng = np.random.default_rng(5)
    for _ in range(50):
        ref = rng.uniform(-100, 100, (3, 3))
        pose = mocap.solve_pose(ref, ref * [1, 1, -1])
        assert np.linalg.det(pose.rotation) == pytest.approx(1.0, abs=1e-12)
        assert pose.rmsd < 1e-9


def test_solve_pose_rejects_collinear():
    with pytest.raises(mocap.MocapError, match="collinear"):
        mocap.solve_pose([[0, 0, 0], [1, 1, 1], [2, 2, 2]], np.eye(3))


def test_moving_average_edges_raw():
    z = np.arange(10.0) ** 2
    out = mocap.moving_average(z, 5)
    assert np.array_equal(out[:2], z[:2]) and np.array_equal(out[-2:], z[-2:])
    assert out[2] == pytest.approx(np.mean(z[:5]))
    assert np.array_equal(mocap.moving_average(z, 1), z)
    with pytest.raises(mocap.MocapError):
        mocap.moving_average(z, 0)


def test_synthetic_trunk_height_profile():
    t = np.linspace(0, 1.4, 100001)
    z = mocap.synthetic_trunk_height(t)
    assert z[0] == 283.1
    assert z.max() == pytest.approx(656.3, abs=1e-3)
    assert np.all(np.abs(np.diff(z)) < 1.0)  # continuous


def test_analyze_noise_free_trial():
    frames = mocap.synthetic_trial(noise_mm=0.0, yaw_deg=30.0)
    series = mocap.trunk_height_series(frames)
    res = mocap.analyze_trial(series)
    assert res.delta_h == pytest.approx(656.3 - 283.1, abs=0.5)


def test_gap_interpolation():
    drop = [(i, "T2") for i in range(100, 104)]
    frames = mocap.synthetic_trial(noise_mm=0.0, drop=drop)
    t, z = mocap.trunk_height_series(frames)
    ref_t, ref_z = mocap.trunk_height_series(mocap.synthetic_trial(noise_mm=0.0))
    assert np.max(np.abs(z - ref_z)) < 1.0


def test_long_gap_rejected():
    drop = [(i, "T1") for i in range(100, 110)]
    with pytest.raises(mocap.MocapError, match="gap"):
        mocap.trunk_height_series(mocap.synthetic_trial(drop=drop))


def test_gap_at_edge_rejected():
    with pytest.raises(mocap.MocapError):
        mocap.trunk_height_series(mocap.synthetic_trial(drop=[(0, "T1")]))


def test_detect_h_base():
    series = mocap.trunk_height_series(mocap.synthetic_trial(seed=4))
    assert mocap.detect_h_base(series) == pytest.approx(283.1, abs=0.2)


def test_aggregate_trials():
    trials = [mocap.TrialResult(h, 283.1, h - 283.1) for h in (650.0, 652.0, 654.0)]
    agg = mocap.aggregate_trials(trials, baseline_mean=368.9)
    assert agg["mean"] == pytest.approx(368.9)
    assert agg["std"] == pytest.approx(2.0)
    assert agg["delta_percent"] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(mocap.MocapError, match="need >= 2"):
        mocap.aggregate_trials(trials[:1])


def test_aggregate_order_independent():
    trials = [mocap.TrialResult(650 + 0.1 * i, 283.1, 366.9 + 0.1 * i) for i in range(7)]
    a = mocap.aggregate_trials(trials)
    b = mocap.aggregate_trials(trials[::-1])
    assert a == b


def test_marker_csv_roundtrip(tmp_path):
    frames = mocap.synthetic_trial(duration=0.1)
    path = tmp_path / "t.csv"
    mocap.write_marker_csv(path, frames)
    back = mocap.read_marker_csv(path, mocap.STANDARD_BODY_MAP)
    assert len(back) == len(frames)
    assert len(back[0].markers) == 15
    np.testing.assert_allclose(back[3].markers["T1"], frames[3].markers["T1"], atol=1e-4)


def test_marker_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,id,x,y,z\n")
    with pytest.raises(mocap.MocapError):
        mocap.read_marker_csv(path)


def test_body_map_requires_three_markers(tmp_path):
    path = tmp_path / "bm.json"
    path.write_text(json.dumps({"trunk": ["A", "B"]}))
    with pytest.raises(mocap.MocapError):
        mocap.read_body_map(path)


def test_shipped_dataset_matches_truth():
    directory = shipped_dataset()
    with open(os.path.join(directory, "truth.json")) as fh:
        truth = {row["trial"]: row for row in json.load(fh)}
    trials = mocap.analyze_directory(directory)
    assert len(trials) == 5
    for tr in trials:
        assert abs(tr.delta_h - truth[tr.name]["delta_h_mm"]) < 0.5


def test_write_synthetic_dataset_is_reproducible(tmp_path):
    mocap.write_synthetic_dataset(tmp_path / "a", apexes=(650.0, 660.0), seed=3, duration=0.3)
    mocap.write_synthetic_dataset(tmp_path / "b", apexes=(650.0, 660.0), seed=3, duration=0.3)
    for name in ("trial_01.csv", "trial_02.csv", "truth.json", "body_map.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_monotone_decreasing_series_peaks_at_first_sample():
    t = np.arange(20) / 120.0
    z = 700.0 - 10.0 * np.arange(20)
    assert mocap.analyze_trial((t, z), h_base=283.1).h_max == 700.0


def test_window_one_gives_raw_maximum():
    frames = mocap.synthetic_trial(seed=1)
    t, z = mocap.trunk_height_series(frames)
    assert mocap.analyze_trial((t, z), smoothing_window=1).h_max == float(np.max(z))
