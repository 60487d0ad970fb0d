"""Bounded regions the lattice is carved into.

Each domain exposes a signed distance function (negative inside), an
axis-aligned bounding box and its exact volume.
"""

from dataclasses import dataclass, field
import math

import numpy as np


@dataclass(frozen=True)
class SectorDomain:
    """Annular sector in the xy-plane extruded along z.

    The slab spans ``center.z +/- thickness/2``; angles are measured
    counter-clockwise from +x about ``center``.
    """

    inner_radius: float
    outer_radius: float
    angular_span: tuple
    thickness: float
    center: tuple = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        start, end = (float(a) for a in self.angular_span)
        object.__setattr__(self, "angular_span", (start, end))
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        if not 0 < self.inner_radius < self.outer_radius:
            raise ValueError("need 0 < inner_radius < outer_radius")
        if not 0 < end - start < 2 * math.pi:
            raise ValueError("need 0 < end - start < 2*pi")
        if not self.thickness > 0:
            raise ValueError("thickness must be > 0")

    @property
    def span(self):
        return self.angular_span[1] - self.angular_span[0]

    def volume(self):
        return 0.5 * (self.outer_radius**2 - self.inner_radius**2) * self.span * self.thickness

    def sdf(self, points):
        p = np.asarray(points, dtype=float) - np.asarray(self.center)
        x, y, z = p[..., 0], p[..., 1], p[..., 2]
        r = np.hypot(x, y)
        annulus = np.maximum(r - self.outer_radius, self.inner_radius - r)
        a, b = self.angular_span
        # half-plane counter-clockwise of the start ray, clockwise of the end ray
        d_start = math.sin(a) * x - math.cos(a) * y
        d_end = math.cos(b) * y - math.sin(b) * x
        if self.span <= math.pi:
            wedge = np.maximum(d_start, d_end)
        else:
            wedge = np.minimum(d_start, d_end)
        slab = np.abs(z) - 0.5 * self.thickness
        return np.maximum(np.maximum(annulus, wedge), slab)

    def contains(self, points):
        return self.sdf(points) <= 0

    def bounds(self):
        a, b = self.angular_span
        angles = [a, b]
        k0 = math.ceil(a / (math.pi / 2))
        k = k0
        while k * math.pi / 2 < b:
            angles.append(k * math.pi / 2)
            k += 1
        xs, ys = [], []
        for t in angles:
            for rad in (self.inner_radius, self.outer_radius):
                xs.append(rad * math.cos(t))
                ys.append(rad * math.sin(t))
        cx, cy, cz = self.center
        h = 0.5 * self.thickness
        lo = np.array([min(xs) + cx, min(ys) + cy, cz - h])
        hi = np.array([max(xs) + cx, max(ys) + cy, cz + h])
        return lo, hi

    def translated(self, offset):
        c = tuple(np.asarray(self.center) + np.asarray(offset, dtype=float))
        return SectorDomain(self.inner_radius, self.outer_radius, self.angular_span, self.thickness, c)


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned box, used for unit-cell studies."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if any(h <= l for l, h in zip(lo, hi)):
            raise ValueError("box must have positive extent on every axis")

    @classmethod
    def cube(cls, size, origin=(0.0, 0.0, 0.0)):
        o = np.asarray(origin, dtype=float)
        return cls(tuple(o), tuple(o + size))

    def volume(self):
        return float(np.prod(np.subtract(self.hi, self.lo)))

    def sdf(self, points):
        p = np.asarray(points, dtype=float)
        c = 0.5 * (np.asarray(self.lo) + np.asarray(self.hi))
        h = 0.5 * (np.asarray(self.hi) - np.asarray(self.lo))
        q = np.abs(p - c) - h
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(np.max(q, axis=-1), 0.0)
        return outside + inside

    def contains(self, points):
        return self.sdf(points) <= 0

    def bounds(self):
        return np.array(self.lo), np.array(self.hi)

    def translated(self, offset):
        off = np.asarray(offset, dtype=float)
        return BoxDomain(tuple(np.asarray(self.lo) + off), tuple(np.asarray(self.hi) + off))
