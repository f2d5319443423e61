"""Partition functions of dense weighted graphs: permanents, Hamiltonian
permanents, closed walks and spanning trees, with exact enumeration oracles,
certified scalable brackets and exact checks of concentration inequalities."""

__version__ = "0.1.0"

from .core import (DirectedGraph, LogValue, SymmetricWeightMatrix, WeightMatrix,  # noqa: E402
                   graph_of, make_symmetric_matrix, make_weight_matrix, perturb,
                   random_graph, random_symmetric_matrix, random_weight_matrix)
from .errors import *  # noqa: E402,F401,F403
from .oracles import (hamiltonian_permanent, permanent_cycle_restricted,  # noqa: E402
                      permanent_naive, permanent_ryser, permutation_profile,
                      tree_profile, tree_sum_restricted, walk_profile, walk_sum_restricted)
from .scalable import (PartitionReport, permanent_bracket, sinkhorn_scale,  # noqa: E402
                       spanning_tree_pf, trace_power)
from .separator import (SeparationInstance, SeparationVerdict, Verdict,  # noqa: E402
                        ham_exact_verdict, separate, theorem12_lower_factor)
