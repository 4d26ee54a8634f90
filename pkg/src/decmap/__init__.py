"""decmap: decomposable and completely bounded norms of maps between real
matrix operator systems, computed by semidefinite programming.

The package builds concrete operator systems (full algebras, diagonals,
quaternions, user spans, realified complex algebras), complexifies systems
and maps, tests complete positivity through Choi matrices, and evaluates the
Haagerup decomposable norm and the cb norm as small dense SDPs with
certificates.  Named verification suites replay the structural identities of
the theory on seeded random instances.
"""

from .errors import (DecmapError, DomainError, PreconditionError, ShapeError,
                     SolverIndeterminate, UnsupportedDomainError, ValidationError)
from .mat import (canonical_shuffle, is_psd, op_norm, partial_trace,
                  permute_similarity, realify, split_realified, sym_eig)
from .opsys import (LinearMap, MatrixSystem, block2_map, block2_system,
                    build_system, canonical_map, complex_full, complexify_map,
                    complexify_system, compose, coordinate_projection,
                    direct_sum, direct_sum_map, ell_inf, forget_complex_structure,
                    full_real, identity_map, map_dist, paulsen_system,
                    quaternion, restrict_map, span_system, zero_map)
from .cpmap import (ChoiMatrix, CpVerdict, StinespringData, choi, involute,
                    is_cp, is_selfadjoint, is_skew, kraus_stinespring,
                    map_from_choi, normalize_ucp, trace_state, ucp_witnesses)
from .sdp import SdpProblem, SdpSolution, lambda_max_problem, solve
from .decnorm import (DecResult, Factorization, cb_norm, complex_dec_norm,
                      dec_norm, delta_value, icp_extract, jordan_split,
                      sa_difference_norm, scp_complete, skew_witness,
                      stinespring_scp)
from .suite import SUITE_CATALOGUE, SuiteReport, run_suite

__version__ = "0.1.0"
