"""Vertical jump of a quadruped with knee-parallel elastic modules.

The robot is a point mass carried by ``n_legs`` massless two-link legs that
act in unison. During stance the hip height equals the leg length, so with
the interior knee angle ``q``::

    l(q)  = sqrt(L1^2 + L2^2 - 2 L1 L2 cos q)
    F_z   = (n_legs * tau_motor + n_modules * tau_exo) / (dl/dq)
    m z'' = F_z - m g

The motor follows a linear torque-speed envelope and the modules release
their stored energy as the knee extends. Stance is integrated with fixed-step
RK4 until the ground force vanishes or the leg is fully extended; flight is
closed form.
"""

from dataclasses import dataclass, field, replace
import enum
import math

import numpy as np

from dcl import constants as C
from dcl.stiffness import DensificationError, StiffnessModel, torque_at


class JumpError(ValueError):
    pass


class JumpMode(str, enum.Enum):
    BASELINE = "Baseline"
    STOWED = "Stowed"
    DEPLOYED = "Deployed"


@dataclass(frozen=True)
class RobotParams:
    # Placeholder values for a 15 kg quadruped; none of these are measured.
    body_mass: float = 15.0  # kg
    module_mass: float = 0.05  # kg per module
    n_modules: int = 4
    thigh_length: float = 0.213  # m
    shank_length: float = 0.213  # m
    knee_torque_max: float = 30.0  # N*m per leg, stall torque
    knee_speed_max: float = 30.0  # rad/s, no-load speed
    n_legs: int = 4
    gravity: float = 9.81

    def __post_init__(self):
        for name in ("body_mass", "thigh_length", "shank_length", "knee_speed_max", "gravity"):
            if not getattr(self, name) > 0:
                raise JumpError(f"{name} must be > 0")
        if self.module_mass < 0 or self.knee_torque_max < 0:
            raise JumpError("module_mass and knee_torque_max must be >= 0")
        if not 0 <= self.n_modules <= self.n_legs or self.n_legs < 1:
            raise JumpError("need 1 <= n_legs and 0 <= n_modules <= n_legs")

    @property
    def max_leg_length(self):
        return self.thigh_length + self.shank_length

    def total_mass(self, mode):
        if JumpMode(mode) is JumpMode.BASELINE:
            return self.body_mass
        return self.body_mass + self.n_modules * self.module_mass


@dataclass(frozen=True)
class JumpScenario:
    mode: JumpMode = JumpMode.BASELINE
    squat_height: float = C.H_BASE_MM / 1000.0  # m
    stiffness: StiffnessModel = None
    engagement_flexion: float = None  # rad; None -> module compressed to operating_max at the squat

    def __post_init__(self):
        object.__setattr__(self, "mode", JumpMode(self.mode))
        if self.mode is JumpMode.DEPLOYED and self.stiffness is None:
            raise JumpError("Deployed scenario requires a stiffness model")


@dataclass
class JumpResult:
    h_max: float
    delta_h: float
    liftoff_velocity: float
    liftoff_height: float
    energy_motor: float
    energy_elastic: float
    lifted_off: bool
    trajectory: dict = field(repr=False)  # t, z, zdot, q, tau_motor, tau_exo arrays

    @property
    def stance_work(self):
        return self.energy_motor + self.energy_elastic


def leg_length(q, params):
    """Hip-to-foot distance (m) at interior knee angle ``q`` (rad, pi = straight)."""
    L1, L2 = params.thigh_length, params.shank_length
    return math.sqrt(L1 * L1 + L2 * L2 - 2 * L1 * L2 * math.cos(q))


def leg_length_rate(q, params):
    """dl/dq (m/rad)."""
    L1, L2 = params.thigh_length, params.shank_length
    return L1 * L2 * math.sin(q) / leg_length(q, params)


def knee_angle(length, params):
    """Inverse of :func:`leg_length` on (0, pi]."""
    L1, L2 = params.thigh_length, params.shank_length
    c = (L1 * L1 + L2 * L2 - length * length) / (2 * L1 * L2)
    return math.acos(max(-1.0, min(1.0, c)))


def default_engagement_flexion(scenario, params):
    """Knee flexion at which the module first touches, chosen so the module is
    compressed to its operating-region limit at the squat."""
    q0 = knee_angle(scenario.squat_height, params)
    op = scenario.stiffness.operating_max if scenario.stiffness else C.OPERATING_MAX
    return (math.pi - q0) - op


def module_compression(q, engagement_flexion):
    return max(0.0, (math.pi - q) - engagement_flexion)


def flight_apex(z_liftoff, zdot_liftoff, gravity=9.81):
    """Apex height of the ballistic phase."""
    return z_liftoff + max(zdot_liftoff, 0.0) ** 2 / (2 * gravity)


def relative_change(delta_h, delta_h_baseline):
    """Relative performance change in percent versus the baseline jump height."""
    if delta_h_baseline == 0:
        raise JumpError("baseline jump height is zero")
    if delta_h_baseline < 0:
        raise JumpError("baseline jump height must be positive")
    return (delta_h - delta_h_baseline) / delta_h_baseline * 100.0


def rk4_step(f, y, h):
    k1 = f(y)
    k2 = f([yi + 0.5 * h * ki for yi, ki in zip(y, k1)])
    k3 = f([yi + 0.5 * h * ki for yi, ki in zip(y, k2)])
    k4 = f([yi + h * ki for yi, ki in zip(y, k3)])
    return [yi + h / 6.0 * (a + 2 * b + 2 * c + d) for yi, a, b, c, d in zip(y, k1, k2, k3, k4)]


class _Stance:
    """Right-hand side of the stance ODE for state (z, zdot, W_motor, W_exo)."""

    def __init__(self, scenario, params):
        self.p = params
        self.mass = params.total_mass(scenario.mode)
        self.deployed = scenario.mode is JumpMode.DEPLOYED
        self.model = scenario.stiffness
        self.engage = scenario.engagement_flexion
        if self.deployed and self.engage is None:
            self.engage = default_engagement_flexion(scenario, params)
        self.l_max = params.max_leg_length

    def forces(self, z, zdot):
        """(F_z, q, tau_motor, tau_exo, qdot) at a stance state."""
        p = self.p
        if z >= self.l_max:
            return 0.0, math.pi, 0.0, 0.0, 0.0
        q = knee_angle(z, p)
        lp = leg_length_rate(q, p)
        if lp <= 0.0:
            return 0.0, q, 0.0, 0.0, 0.0
        qdot = zdot / lp
        tau_m = p.knee_torque_max * max(0.0, 1.0 - abs(qdot) / p.knee_speed_max)
        tau_e = 0.0
        if self.deployed:
            tau_e = torque_at(self.model, module_compression(q, self.engage), deployed=True)
        force = (p.n_legs * tau_m + p.n_modules * tau_e) / lp
        return force, q, tau_m, tau_e, qdot

    def __call__(self, y):
        z, zdot = y[0], y[1]
        force, q, tau_m, tau_e, qdot = self.forces(z, zdot)
        return [
            zdot,
            force / self.mass - self.p.gravity,
            self.p.n_legs * tau_m * qdot,
            self.p.n_modules * tau_e * qdot,
        ]


def simulate_jump(scenario, params, dt=1e-4, max_time=5.0):
    """Integrate one vertical jump from the squat and return a :class:`JumpResult`.

    The body starts at rest at ``scenario.squat_height``. If the legs cannot
    lift the body the jump ends immediately (``delta_h`` 0). A module
    compressed past its safety limit raises
    :class:`~dcl.stiffness.DensificationError`.
    """
    if not 1e-5 < dt <= 1e-3:
        raise JumpError(f"dt must be in (1e-5, 1e-3] s, got {dt}")
    z0 = scenario.squat_height
    if not 0 < z0 < params.max_leg_length:
        raise JumpError(
            f"squat height {z0 * 1000:.1f} mm is not reachable with leg length "
            f"{params.max_leg_length * 1000:.1f} mm"
        )
    rhs = _Stance(scenario, params)
    g = params.gravity
    y = [z0, 0.0, 0.0, 0.0]
    t = 0.0
    rows = []

    def record(t, y):
        force, q, tau_m, tau_e, _ = rhs.forces(y[0], y[1])
        rows.append((t, y[0], y[1], q, tau_m, tau_e))
        return force

    force = record(t, y)
    lifted = True
    if force > rhs.mass * g:
        while True:
            y_new = rk4_step(rhs, y, dt)
            h = dt
            if y_new[0] >= rhs.l_max:
                # shorten the step so liftoff happens exactly at full extension
                frac = (rhs.l_max - y[0]) / (y_new[0] - y[0])
                h = dt * frac
                y_new = rk4_step(rhs, y, h)
                y_new[0] = rhs.l_max
            if y_new[1] < 0.0:
                lifted = False  # stalled before liftoff; apex is the current height
                y = [y[0], 0.0, y[2], y[3]]
                break
            t += h
            y = y_new
            force = record(t, y)
            if y[0] >= rhs.l_max or force <= 0.0:
                break
            if t > max_time:
                raise JumpError("stance did not terminate")
    else:
        lifted = False

    z_lo, zdot_lo = y[0], y[1]
    h_max = flight_apex(z_lo, zdot_lo, g)
    traj = np.array(rows)
    trajectory = {
        "t": traj[:, 0],
        "z": traj[:, 1],
        "zdot": traj[:, 2],
        "q": traj[:, 3],
        "tau_motor": traj[:, 4],
        "tau_exo": traj[:, 5],
    }
    return JumpResult(
        h_max=h_max,
        delta_h=h_max - z0,
        liftoff_velocity=zdot_lo,
        liftoff_height=z_lo,
        energy_motor=max(0.0, y[2]),
        energy_elastic=max(0.0, y[3]),
        lifted_off=lifted and zdot_lo > 0,
        trajectory=trajectory,
    )


def stance_energy_residual(result, scenario, params):
    """|work - (dKE + dPE)| / work over the stance phase."""
    m = params.total_mass(scenario.mode)
    gain = 0.5 * m * result.liftoff_velocity**2 + m * params.gravity * (result.liftoff_height - scenario.squat_height)
    work = result.stance_work
    if work == 0:
        return abs(gain)
    return abs(work - gain) / work


class CalibrationError(JumpError):
    pass


def _bisect(fn, lo, hi, target, increasing, tol, max_iter=200):
    """Bisection on a monotone scalar response. Returns the parameter value."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        val = fn(mid)
        if abs(val - target) <= tol:
            return mid
        if (val < target) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, abs(hi)):
            return mid
    return 0.5 * (lo + hi)


def _response_dump(fn, values):
    return ", ".join(f"{v:.4g}->{fn(v) * 1000:.2f}mm" for v in values)


def calibrate(baseline_mm, stowed_mm, params=RobotParams(), template=JumpScenario(), dt=1e-4, tol_mm=0.01):
    """Fit ``knee_torque_max`` to the Baseline jump height, then
    ``module_mass`` to the Stowed jump height.

    Both responses are monotone, so each fit is a bracketed bisection. The
    Deployed scenario is not touched and remains a prediction.
    """
    if not (baseline_mm > 0 and stowed_mm > 0):
        raise CalibrationError("calibration targets must be positive")
    tol = tol_mm / 1000.0
    base_sc = replace(template, mode=JumpMode.BASELINE, stiffness=None)
    stow_sc = replace(template, mode=JumpMode.STOWED, stiffness=None)

    def base_h(tau):
        return simulate_jump(base_sc, replace(params, knee_torque_max=tau), dt).delta_h

    target = baseline_mm / 1000.0
    hi = max(params.knee_torque_max, 1.0)
    probes = [hi]
    while base_h(hi) < target:
        hi *= 2
        probes.append(hi)
        if hi > 1e5:
            raise CalibrationError("no knee torque reaches the Baseline target; response: " + _response_dump(base_h, probes))
    tau = _bisect(base_h, 0.0, hi, target, True, tol)
    params = replace(params, knee_torque_max=tau)

    def stow_h(mass):
        return simulate_jump(stow_sc, replace(params, module_mass=mass), dt).delta_h

    target = stowed_mm / 1000.0
    if stow_h(0.0) < target - tol:
        raise CalibrationError(
            f"Stowed target {stowed_mm} mm is above the massless-module height "
            f"{stow_h(0.0) * 1000:.2f} mm"
        )
    if params.n_modules == 0:
        raise CalibrationError("cannot calibrate module_mass with n_modules = 0")
    hi = max(params.module_mass, 0.01)
    probes = [hi]
    while stow_h(hi) > target:
        hi *= 2
        probes.append(hi)
        if hi > params.body_mass * 10:
            raise CalibrationError("no module mass reaches the Stowed target; response: " + _response_dump(stow_h, probes))
    mass = _bisect(stow_h, 0.0, hi, target, False, tol)
    return replace(params, module_mass=mass)


def run_scenarios(params, stiffness, squat_height=C.H_BASE_MM / 1000.0, dt=1e-4, engagement_flexion=None):
    """Simulate Baseline, Stowed and Deployed; returns {mode: JumpResult}."""
    out = {}
    for mode in JumpMode:
        sc = JumpScenario(mode, squat_height, stiffness if mode is JumpMode.DEPLOYED else None, engagement_flexion)
        out[mode.value] = simulate_jump(sc, params, dt)
    return out


__all__ = [
    "CalibrationError",
    "DensificationError",
    "JumpError",
    "JumpMode",
    "JumpResult",
    "JumpScenario",
    "RobotParams",
    "calibrate",
    "default_engagement_flexion",
    "flight_apex",
    "knee_angle",
    "leg_length",
    "leg_length_rate",
    "module_compression",
    "relative_change",
    "rk4_step",
    "run_scenarios",
    "simulate_jump",
    "stance_energy_residual",
]
