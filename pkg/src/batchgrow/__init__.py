"""Low-radius graph decomposition by batch-activated center growing.

Quotient-graph diameter bounds, a quotient distance oracle and k-center
approximation are built on top of it.
"""

from .decomposition import Clustering, GrowthParams, RoundLedger, cluster, cluster2, grow_step, mpx
from .errors import (BatchGrowError, DisconnectedGraph, DisconnectedQuotient, EmptyGraph,
                     GenerationFailed, InfeasibleK, ParseError, StalledDisconnected, TooLarge,
                     TuningFailed)
from .estimators import (DiameterEstimate, KCenterSolution, estimate_diameter, gonzalez,
                         kcenter_approx, merge_clusters, oracle_build, oracle_query)
from .graph import (UNREACHABLE, DistanceVector, Graph, bfs, connected_components,
                    double_bfs_bound, exact_diameter, exact_kcenter)
from .graph_io import append_chain, gen_expander_plus_path, gen_mesh, load_edge_list
from .quotient import (QuotientGraph, apsp_quotient, build_quotient, build_weighted_quotient,
                       quotient_diameter)

__version__ = "0.1.0"
