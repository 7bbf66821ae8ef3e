"""Mirror distance matrix, agglomerative clustering, and partition metrics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ShapeError
from .mirror import DistanceMatrix, Mirror
from .numkernel import procrustes_cost

LINKAGES = ("single", "complete", "average")


@dataclass(frozen=True)
class Merge:
    a: int
    b: int
    height: float
    new_id: int


@dataclass(frozen=True)
class Dendrogram:
    """Agglomerative merge tree: leaf ids 0..m-1, internal ids m..2m-2."""

    leaves: int
    merges: tuple[Merge, ...]

    def __post_init__(self):
        merges = tuple(self.merges)
        if len(merges) != self.leaves - 1:
            raise ShapeError(f"expected {self.leaves - 1} merges, got {len(merges)}")
        seen: set[int] = set()
        for k, mg in enumerate(merges):
            if mg.new_id != self.leaves + k:
                raise ShapeError(f"merge {k} has new_id {mg.new_id}, expected {self.leaves + k}")
            for node in (mg.a, mg.b):
                if node in seen:
                    raise ShapeError(f"node {node} merged more than once")
                if not 0 <= node < mg.new_id:
                    raise ShapeError(f"merge {k} references unknown node {node}")
                seen.add(node)
        object.__setattr__(self, "merges", merges)


@dataclass(frozen=True)
class Labeling:
    """Cluster assignment: length-m vector of ids 1..K, each id occurring."""

    labels: np.ndarray

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=np.int64)
        if lab.ndim != 1 or lab.size == 0:
            raise ShapeError("labels must be a nonempty 1-D vector")
        k = int(lab.max(initial=0))
        if lab.min(initial=1) < 1 or set(np.unique(lab)) != set(range(1, k + 1)):
            raise DomainError("labels must cover 1..K with every id occurring")
        object.__setattr__(self, "labels", lab)

    @property
    def m(self) -> int:
        return self.labels.size

    @property
    def k(self) -> int:
        return int(self.labels.max())


@dataclass(frozen=True)
class SeparationMargin:
    """Largest within-cluster and smallest between-cluster distance.

    Exact recovery by any of the shipped linkages is certified whenever
    ``max_within < min_between``. Empty pair sets fall back to 0 and +inf.
    """

    max_within: float
    min_between: float

    @property
    def certified(self) -> bool:
        return self.max_within < self.min_between


def mirror_distance_matrix(mirrors: Sequence[Mirror]) -> DistanceMatrix:
    """m x m matrix of Procrustes distances between mirrors, scaled by
    1/sqrt(T); zero for mirrors equal up to an orthogonal transform."""
    if not mirrors:
        raise ShapeError("need at least one mirror")
    T, r = mirrors[0].T, mirrors[0].r
    for i, M in enumerate(mirrors):
        if (M.T, M.r) != (T, r):
            raise ShapeError(
                f"mirror {i} has shape {(M.T, M.r)}, expected {(T, r)}"
            )
    m = len(mirrors)
    D = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            D[i, j] = D[j, i] = procrustes_cost(mirrors[i].matrix, mirrors[j].matrix) / math.sqrt(T)
    return DistanceMatrix(matrix=D)


def agglomerate(D: DistanceMatrix, linkage: str = "average") -> Dendrogram:
    """Agglomerative clustering with Lance-Williams updates.

    Repeatedly merges the closest pair of active clusters; distance ties are
    broken by the smallest node id of the pair, then the second id, which
    makes the dendrogram deterministic. Naive O(m^3) scan; m stays small
    in every intended use.
    """
    if linkage not in LINKAGES:
        raise DomainError(f"unknown linkage {linkage!r}, expected one of {LINKAGES}")
    m = D.size
    if m < 2:
        raise DomainError("need at least 2 items to agglomerate")
    dist: dict[tuple[int, int], float] = {}
    for i in range(m):
        for j in range(i + 1, m):
            dist[(i, j)] = float(D.matrix[i, j])
    active: list[int] = list(range(m))
    sizes: dict[int, int] = {i: 1 for i in range(m)}
    merges: list[Merge] = []
    for step in range(m - 1):
        best: tuple[float, int, int] | None = None
        for ai in range(len(active)):
            for bi in range(ai + 1, len(active)):
                a, b = active[ai], active[bi]
                key = (min(a, b), max(a, b))
                cand = (dist[key], key[0], key[1])
                if best is None or cand < best:
                    best = cand
        assert best is not None
        height, a, b = best
        new_id = m + step
        merges.append(Merge(a=a, b=b, height=height, new_id=new_id))
        active = [x for x in active if x not in (a, b)]
        na, nb = sizes.pop(a), sizes.pop(b)
        for k in active:
            d_ak = dist.pop((min(a, k), max(a, k)))
            d_bk = dist.pop((min(b, k), max(b, k)))
            if linkage == "single":
                d_new = min(d_ak, d_bk)
            elif linkage == "complete":
                d_new = max(d_ak, d_bk)
            else:
                d_new = (na * d_ak + nb * d_bk) / (na + nb)
            dist[(k, new_id)] = d_new
        active.append(new_id)
        sizes[new_id] = na + nb
    return Dendrogram(leaves=m, merges=tuple(merges))


def cut(dendro: Dendrogram, K: int) -> Labeling:
    """Partition into K clusters by undoing the last K-1 merges.

    Cluster ids 1..K are assigned by the order of each cluster's smallest
    member id.
    """
    m = dendro.leaves
    if not 1 <= K <= m:
        raise DomainError(f"cluster count K={K} not in [1, {m}]")
    parent = list(range(2 * m - 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mg in dendro.merges[: m - K]:
        parent[find(mg.a)] = mg.new_id
        parent[find(mg.b)] = mg.new_id

    roots: dict[int, int] = {}
    labels = np.zeros(m, dtype=np.int64)
    for leaf in range(m):
        root = find(leaf)
        if root not in roots:
            roots[root] = len(roots) + 1
        labels[leaf] = roots[root]
    return Labeling(labels=labels)


def adjusted_rand_index(a: Labeling, b: Labeling) -> float:
    """Chance-corrected agreement between two partitions, in [-1, 1]."""
    la, lb = a.labels, b.labels
    if la.size != lb.size:
        raise ShapeError(f"labelings differ in length: {la.size} vs {lb.size}")
    n = la.size
    table = np.zeros((a.k, b.k), dtype=np.int64)
    np.add.at(table, (la - 1, lb - 1), 1)

    def comb2(x: np.ndarray) -> float:
        return float((x * (x - 1) // 2).sum())

    sum_cells = comb2(table)
    sum_rows = comb2(table.sum(axis=1))
    sum_cols = comb2(table.sum(axis=0))
    pairs = n * (n - 1) / 2
    expected = sum_rows * sum_cols / pairs if pairs else 0.0
    maximum = (sum_rows + sum_cols) / 2.0
    if maximum == expected:
        return 1.0  # both partitions trivial, hence identical
    return (sum_cells - expected) / (maximum - expected)


def separation_margin(D: DistanceMatrix, truth: Labeling) -> SeparationMargin:
    """Empirical block margin of a distance matrix under a reference partition."""
    if truth.m != D.size:
        raise ShapeError(f"labeling has {truth.m} items, distance matrix has {D.size}")
    lab = truth.labels
    same = lab[:, None] == lab[None, :]
    off = ~np.eye(D.size, dtype=bool)
    within = D.matrix[same & off]
    between = D.matrix[~same]
    return SeparationMargin(
        max_within=float(within.max()) if within.size else 0.0,
        min_between=float(between.min()) if between.size else math.inf,
    )
