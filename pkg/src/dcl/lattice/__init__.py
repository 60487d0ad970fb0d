"""TPMS lattice fields, sector domains, density control and meshing."""

from dcl.lattice.density import (
    LatticeError,
    sample_offsets,
    solve_level_for_density,
    volume_fraction,
)
from dcl.lattice.domains import BoxDomain, SectorDomain
from dcl.lattice.fields import TpmsField, TpmsKind, eval_field
from dcl.lattice.meshing import SurfaceMesh, marching_tetrahedra, mesh_implicit, mesh_module
from dcl.lattice.stl import export_stl, import_stl

__all__ = [
    "BoxDomain",
    "LatticeError",
    "SectorDomain",
    "SurfaceMesh",
    "TpmsField",
    "TpmsKind",
    "eval_field",
    "export_stl",
    "import_stl",
    "marching_tetrahedra",
    "mesh_implicit",
    "mesh_module",
    "sample_offsets",
    "solve_level_for_density",
    "volume_fraction",
]
