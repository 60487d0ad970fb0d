"""Quasi-static model of the deployable flipping mechanism.

A push rod travels ``s`` in [0, stroke]; a guide pin in a helical groove turns
the sleeve through ``phi = profile(s)``, from 0 (stowed) to pi/2 (deployed).
The return spring and two detent wells give the potential

    U(s) = k s^2 / 2 + preload * s - sum_i depth_i * exp(-(s - c_i)^2 / (2 sigma_i^2))

with ``sigma_i = well_width_i / 4``. The stroke ends are hard stops, so a
minimum may sit on a stop with a non-zero spring force pressing into it.
"""

from dataclasses import dataclass, field
import enum
import math

import numpy as np
from scipy.optimize import brentq

from dcl import constants as C


class MechanismError(ValueError):
    pass


class LockState(str, enum.Enum):
    STOWED = "StowedLock"
    DEPLOYED = "DeployedLock"
    TRANSIT = "Transit"


@dataclass(frozen=True)
class Detent:
    position: float  # m
    depth: float  # J
    width: float  # m

    @property
    def sigma(self):
        return self.width / 4.0


def _linear_profile(s, stroke, total):
    return total * s / stroke


@dataclass(frozen=True)
class CamProfile:
    # Illustrative dimensions; the real cam is unpublished.
    stroke: float = 10e-3  # m
    total_rotation: float = C.DEPLOY_ROTATION  # rad
    spring_rate: float = 500.0  # N/m
    spring_preload: float = 2.0  # N
    detents: tuple = None
    profile: object = field(default=None, compare=False)  # callable s -> phi; None = linear helix

    def __post_init__(self):
        if not self.stroke > 0:
            raise MechanismError("stroke must be > 0")
        if self.detents is None:
            object.__setattr__(self, "detents", (Detent(0.0, 5e-3, 1e-3), Detent(self.stroke, 5e-3, 1e-3)))
        d = tuple(x if isinstance(x, Detent) else Detent(*x) for x in self.detents)
        object.__setattr__(self, "detents", d)
        if len(d) != 2 or d[0].position != 0.0 or d[1].position != self.stroke:
            raise MechanismError("need exactly two detents, at s=0 and s=stroke")
        if self.profile is not None:
            ends = (self.profile(0.0), self.profile(self.stroke))
            if ends[0] != 0.0 or not math.isclose(ends[1], self.total_rotation, rel_tol=0, abs_tol=1e-12):
                raise MechanismError("profile must map 0 -> 0 and stroke -> total_rotation")

    def phi(self, s):
        if self.profile is None:
            return _linear_profile(s, self.stroke, self.total_rotation)
        return self.profile(s)


@dataclass(frozen=True)
class MechanismState:
    s: float
    phi: float
    locked: LockState


def _check_stroke(s, cam):
    if not 0.0 <= s <= cam.stroke:
        raise MechanismError(f"s={s} outside the stroke [0, {cam.stroke}]")


def rotation_of(s, cam):
    """Sleeve rotation (rad) at push-rod position ``s`` (m)."""
    _check_stroke(s, cam)
    if s == cam.stroke:
        return cam.total_rotation
    return cam.phi(s)


def potential_energy(s, cam):
    """U(s) in joules; vectorized over ``s``."""
    s = np.asarray(s, dtype=float)
    u = 0.5 * cam.spring_rate * s**2 + cam.spring_preload * s
    for d in cam.detents:
        u = u - d.depth * np.exp(-((s - d.position) ** 2) / (2 * d.sigma**2))
    return float(u) if u.ndim == 0 else u


def actuation_force(s, cam):
    """dU/ds in newtons: the push-rod force needed to hold position ``s``."""
    s = np.asarray(s, dtype=float)
    f = cam.spring_rate * s + cam.spring_preload
    for d in cam.detents:
        x = s - d.position
        f = f + d.depth * x / d.sigma**2 * np.exp(-(x**2) / (2 * d.sigma**2))
    return float(f) if f.ndim == 0 else f


def required_force(cam, n=20001):
    """Largest holding force over the transit region (outside both detent windows)."""
    s = np.linspace(0.0, cam.stroke, n)
    lo = cam.detents[0].position + cam.detents[0].width / 2
    hi = cam.detents[1].position - cam.detents[1].width / 2
    sel = (s > lo) & (s < hi)
    return float(np.max(actuation_force(s[sel], cam)))


def local_minima(cam, n=20001):
    """Strict local minima of U on [0, stroke], refined to machine precision.

    Found on a dense grid (endpoints compared one-sidedly), interior ones
    then polished by root-finding on the force.
    """
    s = np.linspace(0.0, cam.stroke, n)
    u = potential_energy(s, cam)
    found = []
    for i in range(n):
        left = u[i - 1] if i > 0 else np.inf
        right = u[i + 1] if i < n - 1 else np.inf
        if u[i] < left and u[i] < right:
            found.append(i)
    minima = []
    for i in found:
        if i == 0 or i == n - 1:
            minima.append(float(s[i]))
            continue
        a, b = s[i - 1], s[i + 1]
        fa, fb = actuation_force(a, cam), actuation_force(b, cam)
        minima.append(float(brentq(actuation_force, a, b, args=(cam,), xtol=1e-15)) if fa < 0 < fb else float(s[i]))
    return minima


def settle(s0, cam, step=None, tol=1e-13, max_iter=200000):
    """Projected gradient descent on U from ``s0``; returns the resting position.

    Interior rests are polished with a bracketed root of the force so the
    result is reproducible to machine precision.
    """
    _check_stroke(s0, cam)
    if step is None:
        curvature = cam.spring_rate + max(d.depth / d.sigma**2 for d in cam.detents)
        step = 0.5 / curvature
    s = float(s0)
    for _ in range(max_iter):
        s_new = min(cam.stroke, max(0.0, s - step * actuation_force(s, cam)))
        if abs(s_new - s) <= tol:
            s = s_new
            break
        s = s_new
    if 0.0 < s < cam.stroke:
        for m in local_minima(cam):
            if abs(m - s) < 1e-6:
                return m
    return s


def lock_state(s, cam):
    for d, state in zip(cam.detents, (LockState.STOWED, LockState.DEPLOYED)):
        if abs(s - d.position) <= d.width / 2:
            return state
    return LockState.TRANSIT


def state_at(s, cam):
    return MechanismState(s, rotation_of(s, cam), lock_state(s, cam))


def toggle(state, cam):
    """Drive the rod to the other detent and let it settle there."""
    if state.locked is LockState.TRANSIT:
        raise MechanismError("cannot toggle from a transit state")
    target = cam.detents[1] if state.locked is LockState.STOWED else cam.detents[0]
    s = settle(target.position, cam)
    out = state_at(s, cam)
    if out.locked is state.locked or out.locked is LockState.TRANSIT:
        raise MechanismError("mechanism did not latch in the opposite detent")
    return out


def sweep(cam, n=201):
    """Rows of (s_mm, phi_deg, U_mJ, F_N) across the stroke."""
    s = np.linspace(0.0, cam.stroke, n)
    s[-1] = cam.stroke
    phi = np.array([rotation_of(float(x), cam) for x in s])
    u = potential_energy(s, cam)
    f = actuation_force(s, cam)
    return [(float(a * 1e3), float(math.degrees(b)), float(c * 1e3), float(d)) for a, b, c, d in zip(s, phi, u, f)]


def cam_from_json(obj):
    """Build a cam from the JSON config (millimetres / N / mJ)."""
    stroke = obj.get("stroke_mm", 10.0) * 1e-3
    wells = obj.get("detents")
    detents = None
    if wells is not None:
        detents = tuple(Detent(w["s_mm"] * 1e-3, w["depth_mJ"] * 1e-3, w["width_mm"] * 1e-3) for w in wells)
    return CamProfile(
        stroke=stroke,
        spring_rate=obj.get("spring_rate_n_per_m", 500.0),
        spring_preload=obj.get("spring_preload_n", 2.0),
        detents=detents,
    )


__all__ = [
    "CamProfile",
    "Detent",
    "LockState",
    "MechanismError",
    "MechanismState",
    "actuation_force",
    "cam_from_json",
    "local_minima",
    "lock_state",
    "potential_energy",
    "required_force",
    "rotation_of",
    "settle",
    "state_at",
    "sweep",
    "toggle",
]
