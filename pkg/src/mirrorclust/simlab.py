"""Synthetic latent-position processes and the two Monte-Carlo experiments:
mirror estimation error under a random-walk process, and clustering accuracy
on two changepoint-swapped network populations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cluster import Labeling, adjusted_rand_index, agglomerate, cut, mirror_distance_matrix
from .errors import DegenerateSpectrumError, DomainError
from .mirror import cmds, estimate_mirror, latent_distance_matrix
from .netmodel import LatentPositions, sample_dynamic_network
from .numkernel import procrustes_cost
from .util import derive_seed, parallel_map, quantiles

BUDGET_TOL = 1e-9


@dataclass(frozen=True)
class RandomWalkConfig:
    """Monotone 1-D random walk for vertex latent positions.

    Every vertex starts at ``c_tilde`` and independently gains ``delta`` with
    probability ``p`` at each of the T steps. ``c_tilde + delta * T <= 1``
    keeps all inner products valid edge probabilities.
    """

    c_tilde: float
    delta: float
    p: float
    n: int
    T: int

    def __post_init__(self):
        if self.c_tilde < 0:
            raise DomainError("start value c_tilde must be >= 0")
        if self.delta <= 0:
            raise DomainError("step size delta must be > 0")
        if not 0.0 < self.p < 1.0:
            raise DomainError("step probability p must lie in (0, 1)")
        if self.n < 1 or self.T < 1:
            raise DomainError("n and T must be positive")
        if self.c_tilde + self.delta * self.T > 1.0 + BUDGET_TOL:
            raise DomainError(
                f"c_tilde + delta * T = {self.c_tilde + self.delta * self.T!r} exceeds 1"
            )


@dataclass(frozen=True)
class ChangepointConfig:
    """Random walk whose step probability switches after ``change_t``."""

    base: RandomWalkConfig
    change_t: int
    p_before: float
    p_after: float

    def __post_init__(self):
        if not 1 <= self.change_t < self.base.T:
            raise DomainError(f"change_t={self.change_t} not in [1, T-1]")
        for name, p in (("p_before", self.p_before), ("p_after", self.p_after)):
            if not 0.0 < p < 1.0:
                raise DomainError(f"{name} must lie in (0, 1)")


@dataclass(frozen=True)
class CellStats:
    """Replicate summary for one grid cell. ``mean`` etc. are None when every
    replicate failed (e.g. CMDS degeneracy); failures are counted, never
    silently dropped."""

    value: float
    mean: float | None
    sd: float | None
    q05: float | None
    q95: float | None
    n_ok: int
    n_failed: int


@dataclass(frozen=True)
class ExperimentReport:
    name: str
    grid: tuple[float, ...]
    cells: tuple[CellStats, ...]
    replicates: int
    seed: int
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "grid": list(self.grid),
            "replicates": self.replicates,
            "seed": self.seed,
            "params": dict(self.params),
            "cells": [
                {
                    "value": c.value,
                    "mean": c.mean,
                    "sd": c.sd,
                    "q05": c.q05,
                    "q95": c.q95,
                    "n_ok": c.n_ok,
                    "n_failed": c.n_failed,
                }
                for c in self.cells
            ],
        }


def _walk_latents(cfg: RandomWalkConfig, step_probs: np.ndarray, seed: int) -> list[LatentPositions]:
    """n independent monotone walks; column t of the cumulative step matrix
    gives the n x 1 latent positions at time t (1-based)."""
    rng = np.random.default_rng(seed)
    uniforms = rng.random((cfg.n, cfg.T))
    steps = uniforms < step_probs[None, :]
    values = cfg.c_tilde + cfg.delta * np.cumsum(steps, axis=1)
    return [LatentPositions(matrix=values[:, t : t + 1]) for t in range(cfg.T)]


def random_walk_latents(cfg: RandomWalkConfig, seed: int) -> list[LatentPositions]:
    """Length-T sequence of n x 1 latent position matrices, deterministic per seed."""
    return _walk_latents(cfg, np.full(cfg.T, cfg.p), seed)


def changepoint_latents(cfg: ChangepointConfig, seed: int) -> list[LatentPositions]:
    """Random walk with step probability ``p_before`` up to and including
    ``change_t`` and ``p_after`` afterwards.

    Consumes randomness exactly like ``random_walk_latents``, so setting
    ``p_before == p_after == p`` reproduces it draw for draw.
    """
    probs = np.where(np.arange(1, cfg.base.T + 1) <= cfg.change_t, cfg.p_before, cfg.p_after)
    return _walk_latents(cfg.base, probs, seed)


def _summarize(value: float, stats: list[float], failures: int) -> CellStats:
    if not stats:
        return CellStats(value, None, None, None, None, 0, failures)
    mean = float(np.mean(stats))
    sd = float(np.std(stats, ddof=1)) if len(stats) > 1 else 0.0
    q05, q95 = quantiles(stats, (0.05, 0.95))
    return CellStats(value, mean, sd, q05, q95, len(stats), failures)


def _run_cells(
    grid: Sequence[float],
    replicates: int,
    threads: int,
    replicate_fn,
) -> list[CellStats]:
    tasks = [(ci, rep) for ci in range(len(grid)) for rep in range(replicates)]

    def run(task: tuple[int, int]) -> float | None:
        ci, rep = task
        try:
            return replicate_fn(grid[ci], rep)
        except DegenerateSpectrumError:
            return None

    results = parallel_map(run, tasks, threads)
    cells = []
    for ci, value in enumerate(grid):
        outcomes = [results[k] for k, (c, _) in enumerate(tasks) if c == ci]
        ok = [x for x in outcomes if x is not None]
        cells.append(_summarize(float(value), ok, len(outcomes) - len(ok)))
    return cells


def run_mirror_error_experiment(
    vary: str,
    grid: Sequence[int],
    c_tilde: float = 0.1,
    p: float = 0.4,
    n: int = 100,
    T: int = 10,
    delta: float | None = None,
    d: int = 1,
    r: int = 1,
    replicates: int = 100,
    seed: int = 0,
    threads: int = 1,
) -> ExperimentReport:
    """Sweep n or T and measure the mirror estimation error.

    Each replicate draws fresh walk latents, takes the exact-latent mirror as
    truth, samples the network snapshots, estimates the mirror from them, and
    records ``procrustes_cost(estimate, truth) / sqrt(T)``. The step size
    defaults to ``(1 - c_tilde) / T`` unless given.
    """
    if vary not in ("n", "T"):
        raise DomainError(f"vary must be 'n' or 'T', got {vary!r}")
    if not grid:
        raise DomainError("grid must be nonempty")

    def replicate(value: float, rep: int) -> float:
        n_c = int(value) if vary == "n" else n
        T_c = int(value) if vary == "T" else T
        delta_c = (1.0 - c_tilde) / T_c if delta is None else delta
        cfg = RandomWalkConfig(c_tilde=c_tilde, delta=delta_c, p=p, n=n_c, T=T_c)
        latents = random_walk_latents(cfg, derive_seed(seed, "mirror-error", vary, value, rep))
        truth = cmds(latent_distance_matrix(latents), r)
        net = sample_dynamic_network(
            latents,
            seed=derive_seed(seed, "mirror-error", vary, value, rep, "network"),
            network_id=f"{vary}{value}-rep{rep}",
        )
        estimate = estimate_mirror(net, d, r)
        return procrustes_cost(estimate.matrix, truth.matrix) / math.sqrt(T_c)

    cells = _run_cells(grid, replicates, threads, replicate)
    params = {"vary": vary, "c_tilde": c_tilde, "p": p, "n": n, "T": T,
              "delta": delta, "d": d, "r": r}
    return ExperimentReport(
        name="mirror-error", grid=tuple(float(g) for g in grid), cells=tuple(cells),
        replicates=replicates, seed=seed, params=params,
    )


def run_clustering_experiment(
    n_grid: Sequence[int],
    replicates: int = 100,
    seed: int = 0,
    threads: int = 1,
    T: int = 50,
    change_t: int = 25,
    p_low: float = 0.45,
    p_high: float = 0.55,
    nets_per_cluster: int = 20,
    c_tilde: float = 0.1,
    delta: float | None = None,
    d: int = 1,
    r: int = 1,
    K: int = 2,
    linkage: str = "average",
) -> ExperimentReport:
    """Sweep n and measure clustering accuracy (adjusted Rand index).

    Two populations of dynamic networks share a changepoint at ``change_t``
    but swap step probabilities there (p_low->p_high vs p_high->p_low); each
    replicate draws independent walks per network, runs the full mirror
    clustering pipeline at the given d, r, K, and scores against the truth.
    """
    if not n_grid:
        raise DomainError("n grid must be nonempty")

    def replicate(value: float, rep: int) -> float:
        n_c = int(value)
        delta_c = (1.0 - c_tilde) / T if delta is None else delta
        base = RandomWalkConfig(c_tilde=c_tilde, delta=delta_c, p=p_low, n=n_c, T=T)
        cfgs = (
            ChangepointConfig(base=base, change_t=change_t, p_before=p_low, p_after=p_high),
            ChangepointConfig(base=base, change_t=change_t, p_before=p_high, p_after=p_low),
        )
        mirrors = []
        truth = []
        for ci, cfg in enumerate(cfgs):
            for k in range(nets_per_cluster):
                net_id = f"n{n_c}-rep{rep}-c{ci + 1}-{k}"
                latents = changepoint_latents(cfg, derive_seed(seed, "clustering", net_id))
                net = sample_dynamic_network(
                    latents, seed=derive_seed(seed, "clustering", net_id, "network"),
                    network_id=net_id,
                )
                mirrors.append(estimate_mirror(net, d, r))
                truth.append(ci + 1)
        dstar = mirror_distance_matrix(mirrors)
        labels = cut(agglomerate(dstar, linkage), K)
        return adjusted_rand_index(labels, Labeling(labels=np.array(truth)))

    cells = _run_cells(n_grid, replicates, threads, replicate)
    params = {"T": T, "change_t": change_t, "p_low": p_low, "p_high": p_high,
              "nets_per_cluster": nets_per_cluster, "c_tilde": c_tilde,
              "delta": delta, "d": d, "r": r, "K": K, "linkage": linkage}
    return ExperimentReport(
        name="clustering", grid=tuple(float(g) for g in n_grid), cells=tuple(cells),
        replicates=replicates, seed=seed, params=params,
    )
