"""Random k-QSAT toolkit: graph ensembles and dimer coverings, projector
instances, transfer-matrix reconstruction, polynomial constraint systems,
homotopy continuation, exact Groebner certification, Newton polytopes and
mixed volumes, and structured-pattern verification."""

from .errors import (DegenerateInstanceError, InvalidParametersError,
                     NotZeroDimensionalError, PathFailureError, QsatError,
                     ResourceLimitError)
from .fields import GF, QI
from .graph import (CoreResult, DimerCovering, FactorGraph, alpha_lr,
                    core_fraction, count_dimer_coverings, estimate_thresholds,
                    hall_violator, leaf_removal, max_matching, sample_graph)
from .groebner import (GREVLEX, LEX, GroebnerBasis, MonomialOrder, Polynomial,
                       buchberger, divide, format_polynomial, is_unsat,
                       parse_polynomial, reduce_basis, s_polynomial, solve_lex)
from .homotopy import (NoCoveringCertificate, ProdsatResult, prodsat_solve,
                       solve_square)
from .instance import (Instance, ProductState, Projector, constraint_matrix,
                       evaluate_state, kernel_dimension,
                       kernel_dimension_details, random_instance,
                       random_separable_instance, rationalize_projector,
                       sample_projector, separable_projector)
from .patterns import (make_pattern, mixed_chain_dim, recurrence_dim,
                       recurrence_dimers, separable_chain_dim,
                       separable_cycle_dim, verify_pattern)
from .polysystem import (PolySystem, SquareSystem, build_equations,
                         check_nonsingular, constant_terms, drop_constants,
                         jacobian_at_zero, reduce_square)
from .polytope import (LatticePolytope, bkk_bound, minkowski_sum,
                       mixed_volume, newton_polytope,
                       scaled_sum_volume_coefficients, volume)
from .transfer import apply_transfer, reconstruct, transfer_matrix

__version__ = "0.1.0"
