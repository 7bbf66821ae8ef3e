"""mirrorclust: clustering dynamic networks by Procrustes distances between
their low-dimensional CMDS mirrors."""
from __future__ import annotations

__version__ = "0.1.0"

from .cluster import (
    Dendrogram,
    Labeling,
    SeparationMargin,
    adjusted_rand_index,
    agglomerate,
    cut,
    mirror_distance_matrix,
    separation_margin,
)
from .embed import EmbeddingConfig, ase, select_dim_elbow
from .errors import (
    DegenerateSpectrumError,
    DomainError,
    IngestionError,
    MirrorclustError,
    NumericError,
    ShapeError,
)
from .mirror import DistanceMatrix, Mirror, cmds, double_center, estimate_mirror, latent_distance_matrix
from .netmodel import (
    AdjacencySnapshot,
    DynamicNetwork,
    LatentPositions,
    probability_matrix,
    rdpg_sample,
    sample_dynamic_network,
)
from .numkernel import SymEig, Svd, procrustes_align, procrustes_cost, svd, sym_eig
from .pipeline import PipelineResult, cluster_networks
from .simlab import (
    ChangepointConfig,
    ExperimentReport,
    RandomWalkConfig,
    changepoint_latents,
    random_walk_latents,
    run_clustering_experiment,
    run_mirror_error_experiment,
)
from .stability import (
    ContingencyTable,
    StabilityCurve,
    contingency,
    jaccard_auc_matrix,
    jaccard_label_distances,
    max_frequency_curve,
    normalized_auc,
)

__all__ = [name for name in dir() if not name.startswith("_")]
