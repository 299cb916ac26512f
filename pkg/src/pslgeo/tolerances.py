"""Every numerical tolerance used by the library, in one frozen record."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # point / matrix validation
    hyperboloid_norm: float = 1e-10      # |<x,x> + 1| on the hyperboloid sheet
    det_one: float = 1e-12               # |det - 1| for real matrices acting as group elements
    spd_symmetry: float = 1e-10          # |S - S^T| entrywise
    spd_det: float = 1e-9                # |det S - 1|
    unit_vector: float = 1e-12           # plane-reflection normals

    # geometry
    boundary_closed: float = 1e-12       # closed membership tests for the fundamental triangle
    vertical_line: float = 1e-9          # relative Re-difference below which a geodesic is vertical
    roundtrip: float = 1e-10             # model projection round trips
    isometry_check: float = 1e-9         # cross-model distance agreement
    distance_exact: float = 1e-12        # closed-form distance identities

    # numerics
    jacobi_offdiag: float = 1e-14        # off-diagonal mass at which Jacobi sweeps stop
    operator_norm_rel: float = 1e-12     # relative accuracy of operator norms
    reduction_max_iter: int = 10_000     # translate/invert loop guard
    tile_walk_max_steps: int = 200_000   # side-crossing walk guard


TOL = Tolerances()
