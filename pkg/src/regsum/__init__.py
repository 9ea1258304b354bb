"""Graph summarization by regular partitions, summary-based graph search,
and block decomposition of distance matrices."""

from .errors import (ConfigurationError, DegenerateFit, DimensionMismatch,
                     DuplicateId, EmptyDatabase, EmptyGroup, InputTooSmall,
                     PreconditionError, RefinementExhausted, RegsumError,
                     Unreachable)
from .graph import (Graph, bipartite_degrees, edge_density, internal_density,
                    neighbourhood_deviation, read_edge_list, write_edge_list)
from .regularity import (PairVerdict, Partition, RegularityStatus,
                         SummarizationConfig, check_pair_regularity,
                         compression_rate, find_certificates_greedy,
                         index_of_partition, pair_verdicts, refine_partition,
                         summarize)
from .summary import (ReducedGraph, blow_up, build_reduced_graph,
                      reconstruction_error)
from .generators import (NoisyCliqueSpec, PlantedPartitionSpec, erdos_renyi,
                         kesten_stigum_detectable, planted_partition,
                         synth_graph_gen)
from .search import (Database, DatabaseEntry, TimingBreakdown, ap_at_k,
                     db_add, laplacian_spectrum, map_at_k, query_top_k,
                     query_top_k_raw, spectral_distance)
from .decomposition import (BlockDistanceModel, DistanceMatrix,
                            PartitionMatrix, classify_out_of_sample,
                            distance_matrix, estimate_k,
                            expand_groups_by_neighbors,
                            expected_planted_distances, lambda_hat,
                            largest_component, node_cost,
                            regular_decomposition, sample_references,
                            total_cost)
from .estimators import GraphSummarizer, RegularDecomposition

__version__ = "0.1.0"
