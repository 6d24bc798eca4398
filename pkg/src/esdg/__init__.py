"""Entropy stable Gauss and GLL collocation DG for the compressible Euler equations."""

import os

# ESDG_NUM_THREADS caps the worker threads of the numerical back ends; it has
# to be applied before numpy/numba are imported.
_threads = os.environ.get("ESDG_NUM_THREADS")
if _threads:
    for _var in ("NUMBA_NUM_THREADS", "OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

from .euler import GAMMA, AdmissibilityError  # noqa: E402
from .mesh import BoundaryTag, Mesh, build_cartesian_mesh  # noqa: E402
from .operators_1d import ConfigurationError, NodeFamily, build_operator  # noqa: E402
from .operators_nd import build_tensor_ops  # noqa: E402
from .solver import Solver  # noqa: E402
from .timestepping import integrate, timestep_params  # noqa: E402

__all__ = [
    "GAMMA", "AdmissibilityError", "BoundaryTag", "ConfigurationError", "Mesh", "NodeFamily", "Solver",
    "build_cartesian_mesh", "build_operator", "build_tensor_ops", "integrate", "timestep_params",
]
__version__ = "0.1.0"
