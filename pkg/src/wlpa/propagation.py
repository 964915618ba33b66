"""Label propagation: the classic algorithm and the betweenness-guided variant.

Both run asynchronous passes over a random node order. Each pass draws, from
one seeded ``numpy.random.Generator``, first the permutation of nodes and then
one uniform per position used only when several labels tie for the maximum
score. Runs are therefore bit-reproducible given seed, input and a single
thread.

The guided variant computes depth-``h`` local edge betweenness once, ranks each
node's neighbors by it, and then alternates a restricted pass (each node only
listens to its lowest-betweenness neighbors) with an ordinary full pass until
every node holds a most frequent label of its full neighborhood.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _backend
from .betweenness import local_edge_betweenness, sorted_neighbor_order
from .graph import Partition

LPA = "lpa"
WLPA_LEB = "wlpa-leb"


@dataclass(frozen=True)
class LpaConfig:
    algorithm: str = WLPA_LEB
    depth: int = 2
    max_passes: int = 100
    seed: int = 0
    weighted: bool | None = None
    threads: int = 1

    def __post_init__(self):
        if self.algorithm not in (LPA, WLPA_LEB):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


# Preset capping the guided variant at four passes.
FOUR_PASS = LpaConfig(max_passes=4)


@dataclass(frozen=True)
class LpaResult:
    partition: Partition
    passes: int
    converged: bool


def restricted_neighbor_set(ranked_weights, weighted=False):
    """Length of the rank-order prefix a node listens to in a restricted pass.

    Unweighted: ``ceil(d / 2)``. Weighted: the longest prefix whose cumulative
    weight is at most half the node's strength, but at least one edge.
    """
    d = len(ranked_weights)
    if d == 0:
        return 0
    if not weighted:
        return (d + 1) // 2
    cum = list(itertools.accumulate(float(w) for w in ranked_weights))
    half = cum[-1] / 2.0
    k = 0
    while k < d and cum[k] <= half:
        k += 1
    return max(k, 1)


def restricted_limits(indptr, ranked_wts, weighted):
    degree = np.diff(indptr)
    if not weighted:
        return (degree + 1) // 2
    wts = ranked_wts.tolist()
    bounds = indptr.tolist()
    return np.array(
        [restricted_neighbor_set(wts[bounds[i]:bounds[i + 1]], True) for i in range(len(degree))],
        dtype=np.intp,
    )


def most_frequent_label(neighbor_labels, weights=None, rng=None, current=None):
    """Label with the largest count (or weight sum) among the candidates.

    Ties go to a uniformly random member of the tied set, drawn from ``rng``.
    With no candidates the node keeps ``current``.
    """
    neighbor_labels = list(neighbor_labels)
    if not neighbor_labels:
        return current
    score = {}
    if weights is None:
        for lab in neighbor_labels:
            score[lab] = score.get(lab, 0.0) + 1.0
    else:
        for lab, w in zip(neighbor_labels, weights):
            score[lab] = score.get(lab, 0.0) + float(w)
    best = max(score.values())
    tied = sorted(lab for lab, s in score.items() if s == best)
    if len(tied) == 1:
        return tied[0]
    if rng is None:
        rng = np.random.default_rng()
    return tied[min(int(rng.random() * len(tied)), len(tied) - 1)]


def stop_criterion(g, labels, weighted=False):
    """True iff every non-isolated node holds a label of maximum neighbor score."""
    # kernels index a score buffer by label, so densify arbitrary labels
    _, labels = np.unique(np.asarray(labels), return_inverse=True)
    labels = np.ascontiguousarray(labels.reshape(-1), dtype=np.intp)
    if labels.shape != (g.n,):
        raise ValueError(f"expected {g.n} labels, got {labels.shape[0]}")
    kern = _backend.get()
    return kern.count_unsatisfied(g.indptr, g.nbr, g.wts, labels, bool(weighted)) == 0


def _resolve_weighted(g, cfg):
    if cfg.weighted is None:
        return g.is_weighted
    return bool(cfg.weighted)


def _draw(rng, n):
    order = rng.permutation(n).astype(np.intp)
    tie_u = rng.random(n)
    return order, tie_u


def _finish(g, labels, passes, converged):
    return LpaResult(Partition(labels, g.node_labels), passes, converged)


def lpa(g, cfg=None, *, backend=None):
    """Classic asynchronous label propagation."""
    cfg = cfg or LpaConfig(algorithm=LPA)
    kern = _backend.get(backend)
    weighted = _resolve_weighted(g, cfg)
    rng = np.random.default_rng(cfg.seed)
    labels = np.arange(g.n, dtype=np.intp)
    if g.n == 0:
        return _finish(g, labels, 0, True)
    full = np.ascontiguousarray(g.degree, dtype=np.intp)
    passes = 0
    converged = False
    while passes < cfg.max_passes:
        passes += 1
        order, tie_u = _draw(rng, g.n)
        kern.propagate(g.indptr, g.nbr, g.wts, full, order, tie_u, labels, weighted, cfg.threads)
        if kern.count_unsatisfied(g.indptr, g.nbr, g.wts, labels, weighted) == 0:
            converged = True
            break
    return _finish(g, labels, passes, converged)


@dataclass(frozen=True)
class Ranking:
    """Betweenness-ranked adjacency plus the restricted prefix length per node."""

    nbr: np.ndarray
    wts: np.ndarray
    eid: np.ndarray
    limit: np.ndarray
    weighted: bool


def rank_neighbors(g, depth=2, weighted=False, *, threads=1, backend=None):
    scores = local_edge_betweenness(g, depth, threads=threads, backend=backend)
    nbr, wts, eid = sorted_neighbor_order(g, scores, backend=backend)
    limit = np.ascontiguousarray(restricted_limits(g.indptr, wts, weighted), dtype=np.intp)
    return Ranking(nbr, wts, eid, limit, weighted)


def wlpa_leb(g, cfg=None, *, ranking=None, backend=None):
    """Label propagation guided by local edge betweenness.

    ``ranking`` may be passed to reuse one betweenness computation across
    several seeded runs on the same graph; it must match ``cfg``'s depth and
    weighting.
    """
    cfg = cfg or LpaConfig()
    kern = _backend.get(backend)
    weighted = _resolve_weighted(g, cfg)
    rng = np.random.default_rng(cfg.seed)
    labels = np.arange(g.n, dtype=np.intp)
    if g.n == 0:
        return _finish(g, labels, 0, True)
    if ranking is None:
        ranking = rank_neighbors(g, cfg.depth, weighted, threads=cfg.threads, backend=backend)
    elif ranking.weighted != weighted:
        raise ValueError("ranking was built for a different weighting")
    full = np.ascontiguousarray(g.degree, dtype=np.intp)
    passes = 0
    converged = False
    while passes < cfg.max_passes:
        passes += 1
        order, tie_u = _draw(rng, g.n)
        kern.propagate(
            g.indptr, ranking.nbr, ranking.wts, ranking.limit, order, tie_u, labels,
            weighted, cfg.threads,
        )
        order, tie_u = _draw(rng, g.n)
        kern.propagate(
            g.indptr, ranking.nbr, ranking.wts, full, order, tie_u, labels, weighted, cfg.threads,
        )
        if kern.count_unsatisfied(g.indptr, g.nbr, g.wts, labels, weighted) == 0:
            converged = True
            break
    return _finish(g, labels, passes, converged)


def detect(g, cfg, *, ranking=None, backend=None):
    if cfg.algorithm == LPA:
        return lpa(g, cfg, backend=backend)
    return wlpa_leb(g, cfg, ranking=ranking, backend=backend)
