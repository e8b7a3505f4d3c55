"""Reeb vectors and cone angles of toric Calabi-Yau cone metrics with edge singularities."""

from .correspondence import (
    CorrespondenceResult,
    VolumeFunction,
    angles_to_reeb,
    build_volume_function,
    reeb_to_angles,
    weil_petersson_hessian,
)
from .estimator import ReebAngleMap
from .exceptions import MathematicalNegative, SolverFailure, ToricError
from .invariants import (
    integrated_scalar_identity,
    log_futaki,
    r_invariant,
    total_transversal_scalar,
)
from .lattice_cone import (
    GoodCone,
    angles_cone_membership,
    cartier_klt,
    check_good,
    chern_class_criterion,
    dual_cone,
    kernel_basis,
)
from .polytope import boundary_integrals, boundary_measure, facet_volumes, moments, slice
from .potential import SymplecticPotential, abreu_scalar_curvature, eval_potential, metric_at

__version__ = "0.1.0"
