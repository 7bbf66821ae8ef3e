"""End-to-end clustering driver: networks in, labels and intermediates out."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cluster import Dendrogram, Labeling, agglomerate, cut, mirror_distance_matrix
from .embed import ase_from_eig, select_dim_elbow, snapshot_spectrum
from .errors import DomainError
from .mirror import DistanceMatrix, Mirror, cmds, latent_distance_matrix
from .netmodel import DynamicNetwork, LatentPositions
from .numkernel import sym_eig
from .util import parallel_map


@dataclass(frozen=True)
class PipelineResult:
    network_ids: tuple[str, ...]
    d: int
    r: int
    per_network_distances: tuple[DistanceMatrix, ...]
    mirrors: tuple[Mirror, ...]
    dstar: DistanceMatrix
    dendrogram: Dendrogram
    labels: Labeling


def choose_common_dimension(networks: Sequence[DynamicNetwork], max_rank: int, threads: int = 1) -> int:
    """Elbow estimate per snapshot, combined into one d by the lower median.

    One d must be shared by every snapshot for the Procrustes distances to
    be comparable; the lower median is robust and always an observed value.
    """
    snaps = [snap for net in networks for snap in net.snapshots]

    def estimate(snap) -> int:
        spectrum = snapshot_spectrum(snap)
        return select_dim_elbow(spectrum, min(max_rank, spectrum.size))

    estimates = sorted(parallel_map(estimate, snaps, threads))
    return estimates[(len(estimates) - 1) // 2]


def cluster_networks(
    networks: Sequence[DynamicNetwork],
    d: int | None,
    r: int,
    K: int,
    linkage: str = "average",
    max_rank: int = 10,
    threads: int = 1,
) -> PipelineResult:
    """Mirror construction for every network followed by mirror-distance
    clustering. ``d=None`` selects the embedding dimension by the elbow rule
    (common across all snapshots).
    """
    if len(networks) < 2:
        raise DomainError("need >=2 networks to cluster")
    T = networks[0].T
    n = networks[0].n
    for net in networks:
        if net.T != T or net.n != n:
            raise DomainError(
                f"network {net.id!r} has (n={net.n}, T={net.T}), expected ({n}, {T})"
            )
    if d is None:
        d = choose_common_dimension(networks, max_rank, threads)

    def build(net: DynamicNetwork) -> tuple[DistanceMatrix, Mirror]:
        latents = [
            LatentPositions(matrix=ase_from_eig(sym_eig(s.matrix.astype(np.float64)), d))
            for s in net.snapshots
        ]
        D = latent_distance_matrix(latents)
        return D, cmds(D, r)

    built = parallel_map(build, networks, threads)
    distances = tuple(D for D, _ in built)
    mirrors = tuple(M for _, M in built)
    dstar = mirror_distance_matrix(mirrors)
    dendro = agglomerate(dstar, linkage)
    labels = cut(dendro, K)
    return PipelineResult(
        network_ids=tuple(net.id for net in networks),
        d=d,
        r=r,
        per_network_distances=distances,
        mirrors=mirrors,
        dstar=dstar,
        dendrogram=dendro,
        labels=labels,
    )
