"""Design and analysis toolkit for a deployable compliant (TPMS lattice) robot leg.

Subpackages and modules: ``lattice`` (implicit fields, density, meshing, STL),
``stiffness`` (torque-angle model), ``dynamics`` (vertical jump),
``mechanism`` (flipping mechanism), ``mocap`` (trial analysis) and ``cli``.
"""

__version__ = "0.1.0"
