"""Recover decaying 3-D vector fields from curl and divergence.

Finite-difference operators (:mod:`.ops`), Newtonian potentials
(:mod:`.poisson`), free-space reconstruction (:mod:`.reconstruct`),
Helmholtz-Hodge splitting (:mod:`.decompose`) and the box Dirichlet
variant (:mod:`.bounded`) on regular cubic grids (:mod:`.grid`).
"""
from .analytic import AnalyticField, corpus, i1_bound, i1_integral, truncation_tail_estimate
from .bounded import BoundaryTrace, ConvergenceError, boundary_trace, dirichlet_reconstruct
from .decompose import DecompositionResult, decompose, orthogonality_integral
from .fieldio import FieldFormatError, export_vtk, read_field, write_field
from .grid import (
    DecayClass,
    DecayError,
    Grid3,
    GridError,
    ScalarField,
    VectorField,
    check_decay,
    make_centered_grid,
    sample,
)
from .ops import curl, div, dot_integral, grad, levi_civita, vector_laplacian
from .poisson import PoissonBackend, newtonian_potential, newtonian_potential_vec, residual_laplacian
from .reconstruct import reconstruct_alternative, reconstruct_from_curl_div, uniqueness_residual

__version__ = "0.1.0"
