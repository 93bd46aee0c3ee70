"""Global rank, rank functors and rank loci for quiver representations.

Exact arithmetic over Q and prime fields; no floating point anywhere.
"""
from .linalg import GF, QQ, Field, Matrix, Subspace, parse_field
from .quiver import (BaseChange, Quiver, QuiverMorphism, Representation, apply_base_change, direct_sum,
                     dual, pullback, pushforward, random_base_change, random_rep)
from .rank import (DisconnectedQuiverError, RankChain, SubRepresentation, VertexRankDisagreement,
                   component_ranks, eval_chain, global_rank, iota, iota_kernel, rank_rep, sigma)
from .loci import (BudgetExceeded, Constraint, RankLocusPredicate, census, eval_locus, interval_module,
                   typea_multiplicities, typea_rank)
from .grassmannian import (gaussian_binomial, hom_dim, k_invariants, quiver_grassmannian, strata,
                           string_module)

__version__ = "0.1.0"
