"""Relative density of a lattice inside a domain, and its inverse."""

import numpy as np

from dcl.io import ordered_map
from dcl.lattice.fields import TpmsField

DEFAULT_SEED = 20240917
MAX_BISECTION_STEPS = 60
DENSITY_TOL = 0.005


class LatticeError(ValueError):
    """Invalid lattice request (empty domain, no solid, no convergence)."""


def _slab_offsets(field, domain, n, seed, i):
    lo, hi = domain.bounds()
    step = (hi - lo) / n
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, i]))
    jitter = rng.random((n, n, 3))
    jk = np.stack(np.meshgrid(np.arange(n), np.arange(n), indexing="ij"), axis=-1)
    pts = np.empty((n, n, 3))
    pts[..., 0] = lo[0] + (i + jitter[..., 0]) * step[0]
    pts[..., 1] = lo[1] + (jk[..., 0] + jitter[..., 1]) * step[1]
    pts[..., 2] = lo[2] + (jk[..., 1] + jitter[..., 2]) * step[2]
    pts = pts.reshape(-1, 3)
    inside = domain.contains(pts)
    return np.abs(field.raw(pts[inside]))


def sample_offsets(field, domain, samples_per_axis=64, seed=DEFAULT_SEED):
    """Sorted |g - t| at the in-domain points of a stratified jittered sample.

    The bounding box is split into ``samples_per_axis**3`` strata with one
    uniformly jittered point each. Every x-slab has its own seeded stream,
    so the result does not depend on how slabs are spread over workers.
    """
    n = int(samples_per_axis)
    if n < 8:
        raise LatticeError(f"samples_per_axis must be >= 8, got {n}")
    parts = ordered_map(lambda i: _slab_offsets(field, domain, n, seed, i), range(n))
    values = np.concatenate(parts)
    if values.size == 0:
        raise LatticeError("domain is empty: no sample points fall inside it")
    return np.sort(values)


def _fraction(sorted_offsets, w):
    return np.searchsorted(sorted_offsets, w, side="right") / sorted_offsets.size


def volume_fraction(field, domain, samples_per_axis=64, seed=DEFAULT_SEED):
    """Fraction of the domain occupied by solid lattice, in [0, 1]."""
    offsets = sample_offsets(field, domain, samples_per_axis, seed)
    return float(_fraction(offsets, field.shell_halfwidth))


def solve_level_for_density(kind, target_density, domain, cell_size=8e-3, level=0.0,
                            samples_per_axis=64, seed=DEFAULT_SEED, tol=DENSITY_TOL):
    """Shell half-width giving ``target_density`` inside ``domain``.

    Bisects for the smallest w whose sampled volume fraction reaches the
    target. Raises :class:`LatticeError` if the achieved fraction is not
    within ``tol`` of the target after the bisection budget.
    """
    if not 0 < target_density < 1:
        raise LatticeError(f"target_density must be in (0, 1), got {target_density}")
    base = TpmsField(kind, cell_size, level, 0.0)
    offsets = sample_offsets(base, domain, samples_per_axis, seed)
    lo, hi = 0.0, float(offsets[-1])  # fraction(hi) == 1
    for _ in range(MAX_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if _fraction(offsets, mid) >= target_density:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    achieved = _fraction(offsets, hi)
    if abs(achieved - target_density) > tol:
        raise LatticeError(
            f"density bisection did not converge: target {target_density:.4f}, "
            f"best {achieved:.4f} at w={hi:.6g}"
        )
    return hi
