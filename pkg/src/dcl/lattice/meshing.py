"""Closed surface extraction for lattice bodies.

Surfaces are extracted with marching tetrahedra on the Kuhn (Freudenthal)
split of the voxel grid. Every cube is cut into the same six tetrahedra, so
neighbouring cells always agree on shared faces and the output is a closed
2-manifold without any ambiguous-case handling.
"""

from dataclasses import dataclass
import itertools

import numpy as np

from dcl.io import ordered_map
from dcl.lattice.density import LatticeError

MIN_TRIANGLE_AREA = 1e-12  # m^2
# Edge crossings are kept this far (as a fraction of the edge) from grid
# nodes so no triangle collapses onto a node.
EDGE_CLAMP = 0.02
PAD_VOXELS = 2


@dataclass
class SurfaceMesh:
    vertices: np.ndarray  # (V, 3) float64, metres
    triangles: np.ndarray  # (F, 3) int64

    @property
    def n_triangles(self):
        return len(self.triangles)

    def edges(self):
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.sort(e, axis=1)

    def euler_characteristic(self):
        n_edges = len(np.unique(self.edges(), axis=0))
        return len(self.vertices) - n_edges + len(self.triangles)

    def areas(self):
        p = self.vertices[self.triangles]
        return 0.5 * np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)

    def signed_volume(self):
        p = self.vertices[self.triangles]
        return float(np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2])).sum() / 6.0)

    def check(self, min_area=MIN_TRIANGLE_AREA):
        """Raise ``ValueError`` unless the mesh is closed, manifold, non-degenerate and outward."""
        if len(self.triangles) == 0:
            raise ValueError("mesh has no triangles")
        t = self.triangles
        directed = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        und, counts = np.unique(np.sort(directed, axis=1), axis=0, return_counts=True)
        if np.any(counts != 2):
            raise ValueError(f"{int(np.sum(counts != 2))} edges are not shared by exactly two triangles")
        # consistent orientation: each directed half-edge occurs once
        if len(np.unique(directed, axis=0)) != len(directed):
            raise ValueError("inconsistent triangle orientation")
        amin = self.areas().min()
        if amin <= min_area:
            raise ValueError(f"degenerate triangle (area {amin:.3e} m^2)")
        if self.signed_volume() <= 0:
            raise ValueError("mesh is not outward oriented")
        return True

    def translated(self, offset):
        return SurfaceMesh(self.vertices + np.asarray(offset, dtype=float), self.triangles.copy())


# Kuhn split: one tetrahedron per axis permutation, all sharing the main diagonal.
def _kuhn_tets():
    tets = []
    for perm in itertools.permutations(range(3)):
        corner = [0, 0, 0]
        path = [tuple(corner)]
        for ax in perm:
            corner[ax] = 1
            path.append(tuple(corner))
        tets.append(path)
    return np.array(tets)  # (6, 4, 3)


_TETS = _kuhn_tets()


def _grid_axes(lo, hi, spacing, pad=PAD_VOXELS):
    axes = []
    for a in range(3):
        n = int(np.ceil((hi[a] - lo[a]) / spacing - 1e-9)) + 1 + 2 * pad
        axes.append(lo[a] + (np.arange(n) - pad) * spacing)
    return axes


def sample_grid(func, axes):
    """Evaluate ``func`` on the tensor grid given by ``axes``, slab by slab."""
    ys, zs = np.meshgrid(axes[1], axes[2], indexing="ij")

    def slab(x):
        pts = np.stack([np.full_like(ys, x), ys, zs], axis=-1)
        return func(pts)

    return np.stack(ordered_map(slab, axes[0]))


def marching_tetrahedra(values, axes, clamp=EDGE_CLAMP):
    """Extract the zero level set of ``values`` (negative inside) as a SurfaceMesh.

    ``values`` must be strictly positive on the outer grid layer for the
    result to be closed.
    """
    f = np.asarray(values, dtype=float)
    nx, ny, nz = f.shape
    spacing = min(np.min(np.diff(ax)) for ax in axes)
    eps = 1e-9 * spacing
    f = np.where(np.abs(f) < eps, eps, f)
    inside = f < 0

    corners = [inside[dx:nx - 1 + dx, dy:ny - 1 + dy, dz:nz - 1 + dz]
               for dx in (0, 1) for dy in (0, 1) for dz in (0, 1)]
    any_in = np.logical_or.reduce(corners)
    all_in = np.logical_and.reduce(corners)
    ci, cj, ck = np.nonzero(any_in & ~all_in)
    if ci.size == 0:
        return SurfaceMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))

    # global node ids of the 4 vertices of each of the 6 tets of each active cube
    base = np.stack([ci, cj, ck], axis=-1)[:, None, None, :] + _TETS[None]  # (C, 6, 4, 3)
    ids = np.ravel_multi_index((base[..., 0], base[..., 1], base[..., 2]), f.shape).reshape(-1, 4)
    flat_in = inside.ravel()
    tin = flat_in[ids]
    k = tin.sum(axis=1)
    keep = (k > 0) & (k < 4)
    ids, tin, k = ids[keep], tin[keep], k[keep]
    order = np.argsort(~tin, axis=1, kind="stable")
    v = np.take_along_axis(ids, order, axis=1)  # inside vertices first

    tri_edges = []  # each: (T, 3, 2) array of (inside id, outside id)
    m1, m2, m3 = k == 1, k == 2, k == 3
    a = v[m1]
    tri_edges.append(np.stack([a[:, [0, 1]], a[:, [0, 2]], a[:, [0, 3]]], axis=1))
    a = v[m3]
    tri_edges.append(np.stack([a[:, [0, 3]], a[:, [1, 3]], a[:, [2, 3]]], axis=1))
    a = v[m2]
    quads = np.stack([a[:, [0, 2]], a[:, [0, 3]], a[:, [1, 3]], a[:, [1, 2]]], axis=1)

    n_nodes = f.size
    all_edges = np.concatenate([tri_edges[0].reshape(-1, 2), tri_edges[1].reshape(-1, 2), quads.reshape(-1, 2)])
    keys = all_edges[:, 0].astype(np.int64) * n_nodes + all_edges[:, 1]
    ukeys, inverse = np.unique(keys, return_inverse=True)
    e_in, e_out = ukeys // n_nodes, ukeys % n_nodes

    def node_xyz(idx):
        return np.stack([axes[d][c] for d, c in enumerate(np.unravel_index(idx, f.shape))], axis=-1)

    flat_f = f.ravel()
    fi, fo = flat_f[e_in], flat_f[e_out]
    t = np.clip(fi / (fi - fo), clamp, 1.0 - clamp)
    xi, xo = node_xyz(e_in), node_xyz(e_out)
    verts = xi + t[:, None] * (xo - xi)
    # direction from inside to outside node for each vertex, used for orientation
    outward = xo - xi

    n1 = len(tri_edges[0]) * 3
    n3 = len(tri_edges[1]) * 3
    vid_tri = inverse[: n1 + n3].reshape(-1, 3)
    vid_quad = inverse[n1 + n3:].reshape(-1, 4)

    # split quads along the diagonal that maximizes the smaller triangle area
    def _area(i, j, l):
        p = verts
        return np.linalg.norm(np.cross(p[j] - p[i], p[l] - p[i]), axis=1)

    q = vid_quad
    opt_a = np.minimum(_area(q[:, 0], q[:, 1], q[:, 2]), _area(q[:, 0], q[:, 2], q[:, 3]))
    opt_b = np.minimum(_area(q[:, 0], q[:, 1], q[:, 3]), _area(q[:, 1], q[:, 2], q[:, 3]))
    use_a = opt_a >= opt_b
    quad_tris = np.concatenate([
        q[use_a][:, [0, 1, 2]], q[use_a][:, [0, 2, 3]],
        q[~use_a][:, [0, 1, 3]], q[~use_a][:, [1, 2, 3]],
    ])
    tris = np.concatenate([vid_tri, quad_tris]).astype(np.int64)

    p = verts[tris]
    normal = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    # the first vertex lies on a tet edge that the triangle plane crosses
    flip = np.einsum("ij,ij->i", normal, outward[tris[:, 0]]) < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    return SurfaceMesh(verts, tris)


def mesh_implicit(sdf, lo, hi, spacing):
    """Mesh ``{p : sdf(p) <= 0}`` sampled on a padded grid over [lo, hi]."""
    axes = _grid_axes(np.asarray(lo, float), np.asarray(hi, float), spacing)
    values = sample_grid(sdf, axes)
    return marching_tetrahedra(values, axes)


def mesh_module(field, domain, resolution=16, solid_sdf=None):
    """Closed triangle mesh of the lattice shell clipped to ``domain``.

    ``resolution`` is the number of voxels per lattice cell. ``solid_sdf``
    replaces the lattice shell with another signed function (negative
    inside); the domain clip still applies. It exists for testing the
    mesher on shapes with known topology.
    """
    if resolution < 16:
        raise LatticeError(f"resolution must be >= 16 voxels per cell, got {resolution}")
    shell = field.shell_distance if solid_sdf is None else solid_sdf

    def body(points):
        return np.maximum(shell(points), domain.sdf(points))

    lo, hi = domain.bounds()
    mesh = mesh_implicit(body, lo, hi, field.cell_size / resolution)
    if mesh.n_triangles == 0:
        raise LatticeError("empty lattice: no solid inside the domain at this resolution")
    mesh.check()
    return mesh
