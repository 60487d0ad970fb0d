"""Independent reference computations used by the tests.

Nothing here imports the library code it checks.
"""

import numpy as np

# 256^3 cell-centre count of |gyroid| <= w on one unit cell, t = 0.
# Computed once with gyroid_fraction_bruteforce and frozen.
GYROID_VF_W05 = 0.3236236572265625
GYROID_VF_W04 = 0.25860023498535156


def gyroid(x, y, z):
    return np.sin(x) * np.cos(y) + np.sin(y) * np.cos(z) + np.sin(z) * np.cos(x)


def gyroid_fraction_bruteforce(w, n=256, level=0.0):
    """Fraction of cell-centre points of an n^3 grid over one period with |g - level| <= w."""
    c = (np.arange(n) + 0.5) / n * 2 * np.pi
    y, z = np.meshgrid(c, c, indexing="ij")
    hits = 0
    for x in c:
        hits += int(np.count_nonzero(np.abs(gyroid(x, y, z) - level) <= w))
    return hits / n**3


def sphere_sdf(radius, centre=(0.0, 0.0, 0.0)):
    c = np.asarray(centre, dtype=float)
    return lambda p: np.linalg.norm(np.asarray(p) - c, axis=-1) - radius


def central_difference(f, x, h=1e-7):
    return (f(x + h) - f(x - h)) / (2 * h)
