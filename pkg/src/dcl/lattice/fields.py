"""Triply periodic minimal surface (TPMS) level-set fields."""

from dataclasses import dataclass, field
import enum

import numpy as np


class TpmsKind(str, enum.Enum):
    GYROID = "Gyroid"
    SCHWARZ_PRIMITIVE = "SchwarzPrimitive"
    DIAMOND = "Diamond"
    LIDINOID = "Lidinoid"


def _gyroid(x, y, z):
    return np.sin(x) * np.cos(y) + np.sin(y) * np.cos(z) + np.sin(z) * np.cos(x)


def _schwarz_primitive(x, y, z):
    # cos x + cos y + cos z
    return np.cos(x) + np.cos(y) + np.cos(z)


def _diamond(x, y, z):
    # Schwarz D, nodal approximation:
    # sin x sin y sin z + sin x cos y cos z + cos x sin y cos z + cos x cos y sin z
    sx, sy, sz = np.sin(x), np.sin(y), np.sin(z)
    cx, cy, cz = np.cos(x), np.cos(y), np.cos(z)
    return sx * sy * sz + sx * cy * cz + cx * sy * cz + cx * cy * sz


def _lidinoid(x, y, z):
    # Lidinoid approximation (Lidin & Larsson):
    # 0.5 (sin 2x cos y sin z + sin 2y cos z sin x + sin 2z cos x sin y)
    # - 0.5 (cos 2x cos 2y + cos 2y cos 2z + cos 2z cos 2x) + 0.15
    a = (
        np.sin(2 * x) * np.cos(y) * np.sin(z)
        + np.sin(2 * y) * np.cos(z) * np.sin(x)
        + np.sin(2 * z) * np.cos(x) * np.sin(y)
    )
    b = np.cos(2 * x) * np.cos(2 * y) + np.cos(2 * y) * np.cos(2 * z) + np.cos(2 * z) * np.cos(2 * x)
    return 0.5 * a - 0.5 * b + 0.15


_KERNELS = {
    TpmsKind.GYROID: _gyroid,
    TpmsKind.SCHWARZ_PRIMITIVE: _schwarz_primitive,
    TpmsKind.DIAMOND: _diamond,
    TpmsKind.LIDINOID: _lidinoid,
}


@dataclass(frozen=True)
class TpmsField:
    """Implicit lattice phase ``{p : |g(2*pi*(p - origin)/cell_size) - level| <= shell_halfwidth}``.

    ``cell_size`` and ``origin`` are in metres; ``level`` and
    ``shell_halfwidth`` are in field units.
    """

    kind: TpmsKind = TpmsKind.GYROID
    cell_size: float = 8e-3
    level: float = 0.0
    shell_halfwidth: float = 0.3
    origin: tuple = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        object.__setattr__(self, "kind", TpmsKind(self.kind))
        if not self.cell_size > 0:
            raise ValueError(f"cell_size must be > 0, got {self.cell_size}")
        if not self.shell_halfwidth >= 0:
            raise ValueError(f"shell_halfwidth must be >= 0, got {self.shell_halfwidth}")
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))

    def with_halfwidth(self, w):
        return TpmsField(self.kind, self.cell_size, self.level, w, self.origin)

    def raw(self, points):
        """g(p) - level for an (..., 3) array of points."""
        p = np.asarray(points, dtype=float)
        s = 2 * np.pi / self.cell_size
        o = self.origin
        return _KERNELS[self.kind]((p[..., 0] - o[0]) * s, (p[..., 1] - o[1]) * s, (p[..., 2] - o[2]) * s) - self.level

    def solid(self, points):
        return np.abs(self.raw(points)) <= self.shell_halfwidth

    def shell_distance(self, points):
        """Approximate signed distance (m) to the shell, negative inside.

        The field offset is converted to a length with the cell scale; it is
        not an exact distance but has the right sign and is Lipschitz, which
        is all the mesher needs.
        """
        return (np.abs(self.raw(points)) - self.shell_halfwidth) * self.cell_size / (2 * np.pi)


def eval_field(field, point):
    """Value of ``g(2*pi*point/cell_size) - level`` at a single point or an array."""
    v = field.raw(point)
    return float(v) if np.ndim(v) == 0 else v
