"""Torque-angle law of the compliant module.

The module's knee-parallel torque is modelled as a cubic in the compression
angle, identified by least squares on the operating region only::

    tau(theta) = a3*theta**3 + a2*theta**2 + a1*theta + a0

Angles are radians internally; the CSV/JSON interfaces use degrees.
"""

from dataclasses import dataclass
import csv
import math

import numpy as np

from dcl import constants as C
from dcl.io import atomic_write, write_json


class StiffnessError(ValueError):
    pass


class DensificationError(StiffnessError):
    """Compression beyond the safety margin."""


@dataclass(frozen=True)
class TorqueAngleSample:
    theta: float  # rad
    torque: float  # N*m


@dataclass(frozen=True)
class StiffnessModel:
    alpha: tuple  # (a0, a1, a2, a3)
    operating_max: float = C.OPERATING_MAX
    safety_max: float = C.DESIGN_LIMIT
    r_squared: float = 1.0

    def __post_init__(self):
        a = tuple(float(v) for v in self.alpha)
        if len(a) != 4:
            raise StiffnessError(f"alpha needs 4 coefficients, got {len(a)}")
        object.__setattr__(self, "alpha", a)
        if not 0 < self.operating_max < self.safety_max:
            raise StiffnessError("need 0 < operating_max < safety_max")

    @classmethod
    def zero(cls):
        return cls((0.0, 0.0, 0.0, 0.0))

    def polynomial(self, theta):
        a0, a1, a2, a3 = self.alpha
        return ((a3 * theta + a2) * theta + a1) * theta + a0

    def slope(self, theta):
        _, a1, a2, a3 = self.alpha
        return (3 * a3 * theta + 2 * a2) * theta + a1

    def to_json(self):
        return {
            "alpha": list(self.alpha),
            "operating_max_deg": math.degrees(self.operating_max),
            "safety_max_deg": math.degrees(self.safety_max),
            "r_squared": self.r_squared,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            tuple(obj["alpha"]),
            math.radians(obj["operating_max_deg"]),
            math.radians(obj["safety_max_deg"]),
            obj.get("r_squared", float("nan")),
        )


def surrogate_coefficients(peak_torque=C.PEAK_TORQUE_NM, operating_max=C.OPERATING_MAX, linear_share=0.6):
    """(a, b) of ``tau = a*theta + b*theta**3`` with ``tau(operating_max) = peak_torque``.

    ``linear_share`` is the fraction of the peak carried by the linear term.
    """
    a = linear_share * peak_torque / operating_max
    b = (1.0 - linear_share) * peak_torque / operating_max**3
    return a, b


def surrogate_torque(theta, peak_torque=C.PEAK_TORQUE_NM, operating_max=C.OPERATING_MAX,
                     densification_onset=C.DESIGN_LIMIT, linear_share=0.6, stiffening_rate=25.0):
    """Noise-free surrogate torque curve (N*m) for angles in rad.

    Cubic up to ``densification_onset``, then an exponential continuation
    that matches value and slope at the onset.
    """
    theta = np.asarray(theta, dtype=float)
    a, b = surrogate_coefficients(peak_torque, operating_max, linear_share)
    cubic = a * theta + b * theta**3
    t0 = densification_onset
    tau0 = a * t0 + b * t0**3
    k0 = a + 3 * b * t0**2
    beyond = tau0 + k0 * np.expm1(stiffening_rate * (theta - t0)) / stiffening_rate
    return np.where(theta <= t0, cubic, beyond)


def generate_surrogate_fea(peak_torque=C.PEAK_TORQUE_NM, operating_max=C.OPERATING_MAX,
                           densification_onset=C.DESIGN_LIMIT, n=91, seed=0, noise=0.02,
                           sweep_max=C.SWEEP_MAX, linear_share=0.6):
    """Synthetic torque-angle sweep standing in for the unavailable FEA data.

    ``n`` evenly spaced angles on [0, sweep_max]; Gaussian noise with standard
    deviation ``noise * peak_torque`` (pass ``noise=0`` for the exact curve).
    Torques are clipped at zero.
    """
    if not peak_torque > 0:
        raise StiffnessError("peak_torque must be > 0")
    theta = np.linspace(0.0, sweep_max, n)
    tau = surrogate_torque(theta, peak_torque, operating_max, densification_onset, linear_share)
    if noise:
        rng = np.random.default_rng(seed)
        tau = tau + rng.normal(0.0, noise * peak_torque, size=n)
    tau = np.maximum(tau, 0.0)
    return [TorqueAngleSample(float(t), float(q)) for t, q in zip(theta, tau)]


def _arrays(samples):
    theta = np.array([s.theta for s in samples], dtype=float)
    tau = np.array([s.torque for s in samples], dtype=float)
    return theta, tau


def r_squared(y, y_fit):
    y = np.asarray(y, dtype=float)
    ss_res = float(np.sum((y - y_fit) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return min(1.0, max(0.0, 1.0 - ss_res / ss_tot))


def _slope_violation(model, n=2001):
    """Smallest slope on (0, safety_max], checked on a grid plus the vertex of the quadratic."""
    grid = np.linspace(0.0, model.safety_max, n)[1:]
    _, a1, a2, a3 = model.alpha
    if a3 != 0:
        vertex = -a2 / (3 * a3)
        if 0 < vertex <= model.safety_max:
            grid = np.append(grid, vertex)
    return float(np.min(model.slope(grid))), grid


def fit_operating_region(samples, operating_max=C.OPERATING_MAX, safety_max=C.DESIGN_LIMIT, min_samples=8):
    """Least-squares cubic on samples with ``theta <= operating_max``.

    Raises :class:`StiffnessError` for too few samples, a rank-deficient
    design matrix, or a fit whose torque decreases anywhere on
    (0, safety_max].
    """
    theta, tau = _arrays(samples)
    mask = theta <= operating_max * (1 + 1e-12)
    th, y = theta[mask], tau[mask]
    if th.size < min_samples:
        raise StiffnessError(f"need >= {min_samples} samples in the operating region, got {th.size}")
    A = np.vander(th, 4, increasing=True)
    coef, _, rank, _ = np.linalg.lstsq(A, y, rcond=None)
    if rank < 4:
        raise StiffnessError(f"design matrix is rank deficient (rank {rank}); need >= 4 distinct angles")
    model = StiffnessModel(tuple(coef), operating_max, safety_max, r_squared(y, A @ coef))
    scale = max(np.max(np.abs(y)), 1e-300) / operating_max
    smin, grid = _slope_violation(model)
    if smin < -1e-9 * scale:
        where = grid[np.argmin(model.slope(grid))]
        raise StiffnessError(
            f"fitted torque is not monotone: slope {smin:.4g} N*m/rad at "
            f"{math.degrees(where):.2f} deg (alpha={model.alpha})"
        )
    return model


def torque_at(model, theta, deployed=True):
    """Module torque (N*m) at compression ``theta`` (rad).

    Stowed modules carry no load. Deployed modules follow the polynomial,
    clamped at zero; compression past ``safety_max`` raises
    :class:`DensificationError`.
    """
    if theta < 0:
        raise StiffnessError(f"compression angle must be >= 0, got {theta}")
    if not deployed:
        return 0.0
    if theta > model.safety_max:
        raise DensificationError(
            f"densification region entered: {math.degrees(theta):.2f} deg > "
            f"{math.degrees(model.safety_max):.2f} deg"
        )
    return max(0.0, model.polynomial(theta))


def stored_energy(model, theta):
    """Elastic energy (J) stored at compression ``theta``: the integral of the cubic from 0."""
    if not 0 <= theta <= model.safety_max:
        raise StiffnessError(f"theta={theta} outside [0, safety_max={model.safety_max}]")
    a0, a1, a2, a3 = model.alpha
    return (((a3 / 4 * theta + a2 / 3) * theta + a1 / 2) * theta + a0) * theta


def local_stiffness(samples, half_window=math.radians(2.0)):
    """Sliding-window least-squares slope d(tau)/d(theta) at each sample angle."""
    theta, tau = _arrays(samples)
    out = np.empty_like(theta)
    for i, t in enumerate(theta):
        sel = np.abs(theta - t) <= half_window
        if sel.sum() < 2:
            out[i] = np.nan
            continue
        out[i] = np.polyfit(theta[sel], tau[sel], 1)[0]
    return theta, out


def detect_densification(samples, operating_max=C.OPERATING_MAX, factor=3.0, half_window=math.radians(2.0)):
    """Smallest angle past the operating region whose local stiffness exceeds
    ``factor`` times the mean local stiffness over the operating region.

    Local stiffness is the sliding-window slope from :func:`local_stiffness`.
    Returns None when the sweep never stiffens that much.
    """
    th, k = local_stiffness(samples, half_window)
    op = (th <= operating_max) & np.isfinite(k)
    if not op.any():
        raise StiffnessError("no samples in the operating region")
    reference = float(np.mean(k[op]))
    hits = np.nonzero((th > operating_max) & (k > factor * reference))[0]
    return float(th[hits[0]]) if hits.size else None


def read_samples_csv(path):
    """Read ``theta_deg,torque_nm`` rows."""
    samples = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"theta_deg", "torque_nm"} <= set(reader.fieldnames):
            raise StiffnessError(f"{path}: expected header 'theta_deg,torque_nm'")
        for lineno, row in enumerate(reader, start=2):
            try:
                th, tq = float(row["theta_deg"]), float(row["torque_nm"])
            except (TypeError, ValueError):
                raise StiffnessError(f"{path}:{lineno}: non-numeric value") from None
            if th < 0 or tq < 0:
                raise StiffnessError(f"{path}:{lineno}: negative angle or torque")
            samples.append(TorqueAngleSample(math.radians(th), tq))
    return samples


def write_samples_csv(path, samples):
    with atomic_write(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("theta_deg,torque_nm\n")
        for s in samples:
            fh.write(f"{math.degrees(s.theta):.9g},{s.torque:.9g}\n")


def write_model_json(path, model):
    write_json(path, model.to_json())
