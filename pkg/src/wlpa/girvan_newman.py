"""Girvan-Newman divisive clustering, kept as a slow deterministic baseline."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .betweenness import full_edge_betweenness
from .graph import Partition
from .metrics import modularity

DEFAULT_MAX_NODES = 10_000


class GraphTooLargeError(RuntimeError):
    pass


@dataclass(frozen=True)
class Level:
    removed: tuple | None  # (u, v) dense ids; None for the intact graph
    betweenness: float | None
    components: int
    modularity: float


@dataclass(frozen=True)
class Dendrogram:
    levels: list
    best_level: int

    @property
    def removals(self):
        return [lv.removed for lv in self.levels[1:]]

    def to_json(self, node_labels=None):
        def name(v):
            return node_labels[v] if node_labels else v

        return json.dumps(
            {
                "best_level": self.best_level,
                "best_modularity": self.levels[self.best_level].modularity,
                "levels": [
                    {
                        "removed": None if lv.removed is None else [name(lv.removed[0]), name(lv.removed[1])],
                        "betweenness": lv.betweenness,
                        "components": lv.components,
                        "modularity": lv.modularity,
                    }
                    for lv in self.levels
                ],
            },
            indent=2,
        )


def _components(g, active):
    keep = active.astype(bool)
    mat = coo_matrix(
        (np.ones(int(keep.sum())), (g.src[keep], g.dst[keep])), shape=(g.n, g.n)
    )
    count, labels = connected_components(mat, directed=False)
    return count, labels


def girvan_newman(g, *, max_nodes=DEFAULT_MAX_NODES, threads=None, backend=None, tie_tol=1e-9):
    """Remove maximum-betweenness edges one at a time, recomputing betweenness
    after every removal, and return the best-modularity component partition.

    Ties within ``tie_tol`` (relative) go to the lexicographically smallest
    ``(u, v)``, i.e. the smallest edge id.
    """
    if g.n > max_nodes:
        raise GraphTooLargeError(
            f"graph has {g.n} nodes, above the Girvan-Newman limit of {max_nodes}; "
            "pass a larger max_nodes (--gn-max-nodes) to run anyway"
        )
    if g.m == 0:
        raise ValueError("Girvan-Newman needs at least one edge")
    active = np.ones(g.m, dtype=np.uint8)
    count, labels = _components(g, active)
    levels = [Level(None, None, count, modularity(g, labels))]
    best_labels = labels
    best_q = levels[0].modularity
    best_level = 0
    for _ in range(g.m):
        scores = full_edge_betweenness(g, active=active, threads=threads, backend=backend).values
        scores = np.where(active.astype(bool), scores, -np.inf)
        top = scores.max()
        eid = int(np.flatnonzero(scores >= top - tie_tol * max(1.0, abs(top)))[0])
        active[eid] = 0
        new_count, new_labels = _components(g, active)
        if new_count != count:
            count, labels = new_count, new_labels
            q = modularity(g, labels)
        else:
            q = levels[-1].modularity
        levels.append(Level((int(g.src[eid]), int(g.dst[eid])), float(top), count, q))
        if q > best_q:
            best_q, best_labels, best_level = q, labels, len(levels) - 1
    return Partition(best_labels, g.node_labels), Dendrogram(levels, best_level)
