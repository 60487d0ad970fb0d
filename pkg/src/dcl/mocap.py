"""Motion-capture analysis of vertical jump trials.

Markers arrive as a long-format CSV (``t_s,marker_id,x_mm,y_mm,z_mm``). Each
rigid body is defined by three markers; its pose is the least-squares rigid
transform (Kabsch) from a body-fixed reference triangle. The trunk height
series drives the jump-height statistics. Millimetres throughout, z up.
"""

from collections import defaultdict
from dataclasses import dataclass, field
import csv
import json
import math
import os

import numpy as np

from dcl import constants as C
from dcl.dynamics import relative_change
from dcl.io import atomic_write, write_json


class MocapError(ValueError):
    pass


@dataclass
class MarkerFrame:
    t: float
    markers: dict  # marker_id -> (3,) array, mm
    body_map: dict = field(default_factory=dict)  # body_id -> (id, id, id)


@dataclass(frozen=True)
class RigidBodyPose:
    rotation: np.ndarray
    translation: np.ndarray
    rmsd: float


@dataclass(frozen=True)
class TrialResult:
    h_max: float
    h_base: float
    delta_h: float
    name: str = ""


def triangle_area(points):
    p = np.asarray(points, dtype=float)
    return 0.5 * float(np.linalg.norm(np.cross(p[1] - p[0], p[2] - p[0])))


def solve_pose(reference, observed):
    """Rigid transform mapping ``reference`` onto ``observed`` (both 3x3, rows = points).

    Minimizes the summed squared distances; reflections are excluded by a
    determinant correction.
    """
    ref = np.asarray(reference, dtype=float)
    obs = np.asarray(observed, dtype=float)
    if ref.shape != (3, 3) or obs.shape != (3, 3):
        raise MocapError("solve_pose needs exactly three 3D points per set")
    if triangle_area(ref) <= 1e-6:
        raise MocapError("reference markers are collinear")
    c_ref, c_obs = ref.mean(axis=0), obs.mean(axis=0)
    a, b = ref - c_ref, obs - c_obs
    u, _, vt = np.linalg.svd(a.T @ b)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    if d == 0:
        d = 1.0
    rot = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    trans = c_obs - rot @ c_ref
    resid = obs - (ref @ rot.T + trans)
    rmsd = float(np.sqrt(np.mean(np.sum(resid**2, axis=1))))
    return RigidBodyPose(rot, trans, rmsd)


# --- I/O -------------------------------------------------------------------

def read_marker_csv(path, body_map=None):
    """Group long-format marker rows into frames, ordered by time."""
    frames = defaultdict(dict)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        need = {"t_s", "marker_id", "x_mm", "y_mm", "z_mm"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise MocapError(f"{path}: expected header t_s,marker_id,x_mm,y_mm,z_mm")
        for lineno, row in enumerate(reader, start=2):
            try:
                t = float(row["t_s"])
                xyz = np.array([float(row["x_mm"]), float(row["y_mm"]), float(row["z_mm"])])
            except (TypeError, ValueError):
                raise MocapError(f"{path}:{lineno}: non-numeric value") from None
            frames[t][row["marker_id"]] = xyz
    body_map = body_map or {}
    return [MarkerFrame(t, frames[t], body_map) for t in sorted(frames)]


def write_marker_csv(path, frames, fmt="{:.4f}"):
    with atomic_write(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("t_s,marker_id,x_mm,y_mm,z_mm\n")
        for fr in frames:
            for mid in sorted(fr.markers):
                x, y, z = fr.markers[mid]
                fh.write(f"{fr.t:.6f},{mid},{fmt.format(x)},{fmt.format(y)},{fmt.format(z)}\n")


def read_body_map(path):
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    out = {}
    for body, ids in raw.items():
        if len(ids) != 3:
            raise MocapError(f"body {body!r} must have exactly 3 markers, got {len(ids)}")
        out[body] = tuple(str(i) for i in ids)
    return out


# --- analysis --------------------------------------------------------------

def _body_points(frame, ids):
    try:
        return np.array([frame.markers[i] for i in ids])
    except KeyError:
        return None


def body_reference(frames, ids):
    """Centred marker triangle from the first frame where all three markers are seen."""
    for fr in frames:
        pts = _body_points(fr, ids)
        if pts is not None:
            return pts - pts.mean(axis=0)
    raise MocapError(f"markers {ids} never visible together")


def trunk_height_series(frames, body="trunk", max_gap=5):
    """(t, z) arrays of the trunk pose translation.

    Frames where the trunk cannot be resolved are linearly interpolated when
    the gap is at most ``max_gap`` frames and bounded on both sides;
    anything else raises :class:`MocapError`.
    """
    if not frames:
        raise MocapError("no frames")
    ids = frames[0].body_map.get(body)
    if ids is None:
        raise MocapError(f"body {body!r} missing from the body map")
    ref = body_reference(frames, ids)
    t = np.array([fr.t for fr in frames])
    z = np.full(len(frames), np.nan)
    for i, fr in enumerate(frames):
        pts = _body_points(fr, ids)
        if pts is not None:
            z[i] = solve_pose(ref, pts).translation[2]
    bad = np.isnan(z)
    if bad.any():
        idx = np.nonzero(bad)[0]
        runs = np.split(idx, np.nonzero(np.diff(idx) > 1)[0] + 1)
        for run in runs:
            if len(run) > max_gap or run[0] == 0 or run[-1] == len(z) - 1:
                raise MocapError(
                    f"unresolvable trunk gap of {len(run)} frames at t={t[run[0]]:.4f} s"
                )
        good = ~bad
        z[bad] = np.interp(t[bad], t[good], z[good])
    return t, z


def moving_average(z, window):
    """Centred moving average; the first and last ``window // 2`` samples are left raw."""
    z = np.asarray(z, dtype=float)
    if window < 1:
        raise MocapError("smoothing window must be >= 1")
    if window == 1 or len(z) < window:
        return z.copy()
    half = window // 2
    out = z.copy()
    kernel = np.ones(window) / window
    out[half:len(z) - (window - 1 - half)] = np.convolve(z, kernel, mode="valid")
    return out


def analyze_trial(series, h_base=C.H_BASE_MM, smoothing_window=5, name=""):
    """Peak height of the smoothed trunk series and the effective jump height."""
    _, z = series
    if len(z) == 0:
        raise MocapError("empty series")
    h_max = float(np.max(moving_average(z, smoothing_window)))
    return TrialResult(h_max, float(h_base), h_max - float(h_base), name)


def detect_h_base(series, window_s=0.5, rise_mm=5.0):
    """Mean trunk height over the ``window_s`` seconds before launch.

    Launch is the first sample more than ``rise_mm`` above the median of the
    initial plateau.
    """
    t, z = series
    first = z[t <= t[0] + window_s]
    plateau = float(np.median(first))
    above = np.nonzero(z > plateau + rise_mm)[0]
    if not above.size:
        raise MocapError("no launch found in series")
    t_launch = t[above[0]]
    sel = (t < t_launch) & (t >= t_launch - window_s)
    return float(np.mean(z[sel]))


def aggregate_trials(trials, baseline_mean=None):
    """Mean and sample standard deviation of ``delta_h`` and the relative change."""
    if len(trials) < 2:
        raise MocapError(f"need >= 2 trials, got {len(trials)}")
    dh = np.sort(np.array([tr.delta_h for tr in trials]))  # sorted: order-independent sum
    mean = float(math.fsum(dh) / len(dh))
    std = float(np.sqrt(math.fsum((dh - mean) ** 2) / (len(dh) - 1)))
    h_max = float(math.fsum(sorted(tr.h_max for tr in trials)) / len(trials))
    out = {"n": len(trials), "mean": mean, "std": std, "h_max_mean": h_max, "delta_percent": None}
    if baseline_mean is not None:
        out["delta_percent"] = relative_change(mean, baseline_mean)
    return out


# --- synthetic data --------------------------------------------------------

STANDARD_BODY_MAP = {
    "trunk": ("T1", "T2", "T3"),
    **{f"thigh_{leg}": (f"{leg}1", f"{leg}2", f"{leg}3") for leg in ("FL", "FR", "RL", "RR")},
}

# body-frame marker offsets (mm): anterior dorsal + two lateral on the trunk,
# proximal / middle / distal along each thigh
_TRUNK_OFFSETS = np.array([[180.0, 0.0, 40.0], [-60.0, 95.0, 10.0], [-60.0, -95.0, 10.0]])
_HIP_OFFSETS = {"FL": (190.0, 95.0), "FR": (190.0, -95.0), "RL": (-190.0, 95.0), "RR": (-190.0, -95.0)}


def synthetic_trunk_height(t, h_base=C.H_BASE_MM, apex=656.3, t_launch=0.6, push_time=0.12, g=9810.0):
    """Squat plateau, constant-acceleration push-off, ballistic flight (mm)."""
    t = np.asarray(t, dtype=float)
    rise = apex - h_base
    # push-off rise v*T/2 plus flight rise v^2/(2g) equals the total rise
    a, b, c = 1 / (2 * g), push_time / 2, -rise
    v_lo = (-b + math.sqrt(b * b - 4 * a * c)) / (2 * a)
    acc = v_lo / push_time
    z = np.full_like(t, h_base)
    push = (t > t_launch) & (t <= t_launch + push_time)
    tp = t[push] - t_launch
    z[push] = h_base + 0.5 * acc * tp**2
    fl = t > t_launch + push_time
    tf = t[fl] - t_launch - push_time
    z[fl] = h_base + v_lo * push_time / 2 + v_lo * tf - 0.5 * g * tf**2
    return z


def synthetic_trial(apex=656.3, h_base=C.H_BASE_MM, rate_hz=240.0, duration=1.4, noise_mm=C.MOCAP_NOISE_MM,
                    seed=0, yaw_deg=0.0, drop=()):
    """15-marker frames of one synthetic jump; ``drop`` lists (frame, marker_id) to remove."""
    rng = np.random.default_rng(seed)
    t = np.arange(int(round(duration * rate_hz)) + 1) / rate_hz
    z = synthetic_trunk_height(t, h_base, apex)
    yaw = math.radians(yaw_deg)
    rot = np.array([[math.cos(yaw), -math.sin(yaw), 0.0], [math.sin(yaw), math.cos(yaw), 0.0], [0.0, 0.0, 1.0]])
    dropped = set(drop)
    frames = []
    for i, (ti, zi) in enumerate(zip(t, z)):
        centre = np.array([0.0, 0.0, zi])
        markers = {}
        for mid, off in zip(STANDARD_BODY_MAP["trunk"], _TRUNK_OFFSETS - _TRUNK_OFFSETS.mean(axis=0)):
            markers[mid] = centre + rot @ off
        for leg, (hx, hy) in _HIP_OFFSETS.items():
            for k, frac in enumerate((0.2, 0.5, 0.8), start=1):
                off = np.array([hx + 0.08 * 213.0 * frac, hy, -213.0 * 0.7 * frac])
                markers[f"{leg}{k}"] = centre + rot @ off
        for mid in list(markers):
            if (i, mid) in dropped:
                del markers[mid]
                continue
            markers[mid] = markers[mid] + rng.normal(0.0, noise_mm, 3)
        frames.append(MarkerFrame(float(ti), markers, dict(STANDARD_BODY_MAP)))
    return frames


def write_synthetic_dataset(directory, apexes=(656.3,) * C.N_TRIALS, seed=0, **kwargs):
    """Write ``trial_XX.csv`` files plus ``body_map.json`` and ``truth.json``."""
    os.makedirs(directory, exist_ok=True)
    truth = []
    for k, apex in enumerate(apexes):
        frames = synthetic_trial(apex=apex, seed=seed + k, **kwargs)
        write_marker_csv(os.path.join(directory, f"trial_{k + 1:02d}.csv"), frames)
        truth.append({"trial": f"trial_{k + 1:02d}", "apex_mm": apex,
                      "h_base_mm": kwargs.get("h_base", C.H_BASE_MM),
                      "delta_h_mm": apex - kwargs.get("h_base", C.H_BASE_MM)})
    write_json(os.path.join(directory, "body_map.json"), {b: list(ids) for b, ids in STANDARD_BODY_MAP.items()})
    write_json(os.path.join(directory, "truth.json"), truth)
    return truth


def analyze_directory(directory, h_base=C.H_BASE_MM, smoothing_window=5, body="trunk", auto_h_base=False):
    """Analyze every ``*.csv`` trial in ``directory`` using its ``body_map.json``."""
    bm_path = os.path.join(directory, "body_map.json")
    body_map = read_body_map(bm_path) if os.path.exists(bm_path) else dict(STANDARD_BODY_MAP)
    files = sorted(f for f in os.listdir(directory) if f.endswith(".csv"))
    results = []
    for f in files:
        frames = read_marker_csv(os.path.join(directory, f), body_map)
        series = trunk_height_series(frames, body)
        base = detect_h_base(series) if auto_h_base else h_base
        results.append(analyze_trial(series, base, smoothing_window, name=os.path.splitext(f)[0]))
    return results
