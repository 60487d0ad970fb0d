"""Binary STL read/write (little-endian, 50 bytes per facet)."""

import struct

import numpy as np

from dcl.io import atomic_write
from dcl.lattice.meshing import SurfaceMesh

HEADER = b"DCL lattice binary STL".ljust(80, b" ")

_FACET = np.dtype([
    ("normal", "<f4", (3,)),
    ("v", "<f4", (3, 3)),
    ("attr", "<u2"),
])
assert _FACET.itemsize == 50


def _facets(mesh):
    p = mesh.vertices[mesh.triangles]
    n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    norm = np.linalg.norm(n, axis=1, keepdims=True)
    n = np.divide(n, norm, out=np.zeros_like(n), where=norm > 0)
    rec = np.zeros(len(p), dtype=_FACET)
    rec["normal"] = n
    rec["v"] = p
    return rec


def stl_bytes(mesh):
    rec = _facets(mesh)
    return HEADER + struct.pack("<I", len(rec)) + rec.tobytes()


def export_stl(mesh, path):
    """Write ``mesh`` as binary STL to ``path`` (atomically)."""
    data = stl_bytes(mesh)
    with atomic_write(path, "wb") as fh:
        fh.write(data)
    return path


def import_stl(path):
    """Read a binary STL, merging bit-identical float32 vertices."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 84:
        raise ValueError(f"{path}: too short for a binary STL")
    (count,) = struct.unpack_from("<I", data, 80)
    if len(data) != 84 + 50 * count:
        raise ValueError(f"{path}: size {len(data)} does not match {count} facets")
    rec = np.frombuffer(data, dtype=_FACET, count=count, offset=84)
    corners = rec["v"].reshape(-1, 3)
    verts, inverse = np.unique(corners, axis=0, return_inverse=True)
    tris = inverse.reshape(-1, 3).astype(np.int64)
    return SurfaceMesh(verts.astype(np.float64), tris)
