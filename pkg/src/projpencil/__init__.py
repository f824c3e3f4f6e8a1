"""Pencils ``lam P + Q`` of pairs of orthogonal projections in finite dimension."""

__version__ = "0.1.0"

from .algebra import AlgebraBasis, StructureReport, commutant, generated_algebra, structure_check
from .canonical import CanonicalSplit, GenericForm, Reason, canonical_split, frame, generic_form
from .construction import (PairParams, PairPath, ProjectionPair, ResidualReport, build_from_T,
                           build_pair, canonicalize_pair, component_label, connect_pairs,
                           equivalence_witness, verify_pair)
from .errors import (CommutationViolation, DifferentComponents, DimensionMismatch,
                     EigenSolverError, Infeasible, InternalContradiction, LambdaExcluded,
                     MatrixFormatError, MissingE, NotAPencilPair, NotHermitianError, PencilError,
                     PredictionMismatch, ZeroProjection)
from .feasibility import (Classification, FeasibilityReport, LambdaReport, admissible_lambdas,
                          classify_spectrum, is_pencil_at)
from .linalg_core import (DEFAULT_TOL, SpectralData, Tolerances, eig_hermitian, hermitian,
                          is_projection, matrix_from_dict, matrix_to_dict,
                          random_unitary_in_commutant, unitary_log, unitary_power)
