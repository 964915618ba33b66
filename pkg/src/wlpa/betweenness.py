"""Edge betweenness, full and truncated to a hop depth.

A node pair ``(s, t)`` at hop distance ``d <= depth`` spreads one unit of
credit evenly over its shortest paths; every edge on a path receives that
path's share. Scores are per unordered pair. Distances ignore weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend

UNBOUNDED = None


@dataclass(frozen=True)
class EdgeScores:
    """Betweenness per edge id; ``depth`` is ``None`` for the unbounded score."""

    values: np.ndarray
    depth: int | None

    def __len__(self):
        return len(self.values)

    def __getitem__(self, eid):
        return float(self.values[eid])


def _run(g, depth, active, threads, backend):
    kern = _backend.get(backend)
    if threads is None:
        threads = _backend.default_threads()
    if active is None:
        slot_active = np.ones(2 * g.m, dtype=np.uint8)
    else:
        active = np.ascontiguousarray(active, dtype=np.uint8)
        if active.shape != (g.m,):
            raise ValueError("active mask must have one entry per edge")
        slot_active = np.ascontiguousarray(active[g.eid])
    if g.m == 0:
        return np.zeros(0, dtype=np.float64)
    per_slot = kern.slot_betweenness(g.indptr, g.nbr, slot_active, depth, int(threads))
    # each edge owns two slots; ordered-pair totals are halved
    return np.bincount(g.eid, weights=per_slot, minlength=g.m) * 0.5


def local_edge_betweenness(g, depth=2, *, threads=None, backend=None, active=None):
    """Betweenness counting only pairs within ``depth`` hops.

    One depth-limited BFS per source with backward dependency accumulation,
    so the cost is roughly ``n * (m/n)**depth``. ``active`` optionally masks
    edges out (0 = removed) without rebuilding the graph.
    """
    if depth is None or int(depth) < 1:
        raise ValueError(f"depth must be >= 1, got {depth!r}")
    depth = int(depth)
    values = _run(g, min(depth, max(g.n, 1)), active, threads, backend)
    return EdgeScores(values, depth)


def full_edge_betweenness(g, *, threads=None, backend=None, active=None):
    """Exact all-pairs edge betweenness (Brandes, unweighted)."""
    values = _run(g, max(g.n, 1), active, threads, backend)
    return EdgeScores(values, UNBOUNDED)


def sorted_neighbor_order(g, scores, decimals=9, *, backend=None):
    """Every node's incident slots sorted by ascending score, ties by neighbor id.

    Returns ``(nbr, wts, eid)`` arrays laid out on ``g.indptr``. Scores are
    rounded to ``decimals`` before ranking so that values equal up to
    accumulation-order rounding rank identically across thread counts.
    """
    values = scores.values if isinstance(scores, EdgeScores) else np.asarray(scores, dtype=np.float64)
    if values.shape != (g.m,):
        raise ValueError(f"expected {g.m} edge scores, got {values.shape[0] if values.ndim else 0}")
    if g.m and not np.all(np.isfinite(values)):
        raise ValueError("edge scores must be finite")
    key = np.ascontiguousarray(np.round(values, decimals)[g.eid])
    # rows are stored by ascending neighbor id, so a stable sort by score
    # leaves ties in neighbor-id order
    perm = _backend.get(backend).sort_rows(g.indptr, key)
    return (
        np.ascontiguousarray(g.nbr[perm]),
        np.ascontiguousarray(g.wts[perm]),
        np.ascontiguousarray(g.eid[perm]),
    )


def format_scores(g, scores):
    """Dump lines ``u v score`` in edge-id (dense ``(u, v)``) order, six decimals."""
    names = g.node_labels
    return "".join(
        f"{names[u]} {names[v]} {s:.6f}\n"
        for (u, v, _), s in zip(g.edges(), scores.values.tolist())
    )
