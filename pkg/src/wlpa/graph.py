"""Undirected weighted graphs, partitions and their text formats.

Edge-list format: one edge per line, ``u v [w]``, whitespace separated, UTF-8,
LF or CRLF endings. ``u`` and ``v`` are arbitrary string labels; ``w`` is an
optional strictly positive real (default 1). Lines whose first non-blank
character is ``#`` and blank lines are ignored.

Partition format: one line per node, ``label community_id``.
"""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """A malformed input line; ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class PartitionMismatchError(ValueError):
    """A partition does not cover exactly the nodes of a graph."""


@dataclass(frozen=True)
class LoadReport:
    lines: int = 0
    raw_edges: int = 0
    self_loops_dropped: int = 0
    duplicates_merged: int = 0
    directed: bool = False


ID_DTYPE = np.intc
_ID_LIMIT = 2**31 - 1


class Graph:
    """Immutable simple undirected graph with positive edge weights.

    Nodes are dense ids ``0..n-1``; ``node_labels[i]`` is the external label of
    node ``i``. Edges are stored once as ``(src, dst, weight)`` with
    ``src < dst``, sorted lexicographically, so edge id order is the
    lexicographic order of endpoint pairs. The CSR arrays ``indptr``,
    ``nbr``, ``wts`` and ``eid`` list every node's incident edges sorted by
    neighbor id. ``nbr`` and ``eid`` are 32-bit to keep the kernels' working
    set small, which caps ``n`` and ``m`` below ``2**31``.
    """

    __slots__ = (
        "n", "m", "src", "dst", "weight", "node_labels", "_index",
        "indptr", "nbr", "wts", "eid", "degree", "strength", "total_weight",
        "report",
    )

    def __init__(self, n, src, dst, weight=None, node_labels=None, report=None):
        src = np.asarray(src, dtype=np.intp)
        dst = np.asarray(dst, dtype=np.intp)
        if weight is None:
            weight = np.ones(len(src), dtype=np.float64)
        weight = np.asarray(weight, dtype=np.float64)
        if not (len(src) == len(dst) == len(weight)):
            raise ValueError("src, dst and weight must have equal length")
        if len(src):
            if src.min() < 0 or max(src.max(), dst.max()) >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(src == dst):
                raise ValueError("self-loops are not allowed; normalize first")
            if not np.all(weight > 0):
                raise ValueError("edge weights must be strictly positive")
        lo = np.minimum(src, dst)
        hi = np.maximum(src, dst)
        order = np.lexsort((hi, lo))
        lo, hi, weight = lo[order], hi[order], weight[order]
        if len(lo) > 1 and np.any((lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])):
            raise ValueError("parallel edges are not allowed; normalize first")

        if node_labels is None:
            node_labels = tuple(str(i) for i in range(n))
        else:
            node_labels = tuple(str(x) for x in node_labels)
            if len(node_labels) != n:
                raise ValueError("node_labels must have length n")
        index = {label: i for i, label in enumerate(node_labels)}
        if len(index) != n:
            raise ValueError("node labels must be unique")

        m = len(lo)
        if n >= _ID_LIMIT or m >= _ID_LIMIT:
            raise ValueError(f"graphs are limited to {_ID_LIMIT - 1} nodes and edges")
        ends = np.concatenate([lo, hi])
        others = np.concatenate([hi, lo])
        ids = np.concatenate([np.arange(m, dtype=np.intp)] * 2)
        ws = np.concatenate([weight, weight])
        slot = np.lexsort((others, ends))
        indptr = np.zeros(n + 1, dtype=np.intp)
        np.cumsum(np.bincount(ends, minlength=n), out=indptr[1:])

        self.n = int(n)
        self.m = int(m)
        self.src = lo
        self.dst = hi
        self.weight = weight
        self.node_labels = node_labels
        self._index = index
        self.indptr = indptr
        self.nbr = np.ascontiguousarray(others[slot], dtype=ID_DTYPE)
        self.eid = np.ascontiguousarray(ids[slot], dtype=ID_DTYPE)
        self.wts = np.ascontiguousarray(ws[slot])
        self.degree = np.diff(indptr)
        self.strength = np.bincount(ends, weights=ws, minlength=n).astype(np.float64)
        self.total_weight = float(weight.sum())
        self.report = report or LoadReport()
        for name in ("src", "dst", "weight", "indptr", "nbr", "eid", "wts", "degree", "strength"):
            getattr(self, name).setflags(write=False)

    @classmethod
    def from_edges(cls, edges, n=None, node_labels=None):
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples over dense ids.

        Unlike :func:`load_edge_list` this does no normalization.
        """
        edges = list(edges)
        src = [e[0] for e in edges]
        dst = [e[1] for e in edges]
        weight = [e[2] if len(e) > 2 else 1.0 for e in edges]
        if n is None:
            n = max((max(u, v) for u, v, *_ in edges), default=-1) + 1
        return cls(n, src, dst, weight, node_labels=node_labels)

    @property
    def is_weighted(self):
        return bool(self.m) and not bool(np.all(self.weight == 1.0))

    def index_of(self, label):
        return self._index[str(label)]

    def edges(self):
        """Iterate ``(u, v, w)`` in edge-id order."""
        return zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, weighted={self.is_weighted})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.node_labels == other.node_labels
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    __hash__ = None


def neighbors(g, u):
    """Incident ``(neighbor, weight, edge_id)`` triples of ``u``, neighbor ascending."""
    if not 0 <= u < g.n:
        raise IndexError(f"node {u} out of range for graph with {g.n} nodes")
    lo, hi = g.indptr[u], g.indptr[u + 1]
    return list(zip(g.nbr[lo:hi].tolist(), g.wts[lo:hi].tolist(), g.eid[lo:hi].tolist()))


def _open_text(source, mode="r"):
    if isinstance(source, (str, os.PathLike)):
        return open(source, mode, encoding="utf-8", newline=None), True
    return source, False


def load_edge_list(source, directed=False, weighted=True):
    """Read and normalize an edge list.

    Direction is discarded; repeated pairs (in either orientation) are merged
    by summing weights; self-loops are dropped and counted in ``g.report``.
    Dense ids follow first appearance. With ``weighted=False`` any third
    column is ignored and all weights are 1 (repeats still collapse to one
    edge of weight 1). ``directed`` only labels the report.
    """
    fh, close = _open_text(source)
    index = {}
    labels = []
    pairs = {}
    raw = loops = dups = lines = 0
    try:
        for lineno, line in enumerate(fh, start=1):
            lines = lineno
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) < 2:
                raise GraphFormatError(f"expected 'u v [w]', got {text!r}", lineno)
            if len(parts) > 3:
                raise GraphFormatError(f"too many fields in {text!r}", lineno)
            w = 1.0
            if len(parts) == 3 and weighted:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise GraphFormatError(f"non-numeric weight {parts[2]!r}", lineno) from None
                if not w > 0 or not np.isfinite(w):
                    raise GraphFormatError(f"weight must be positive and finite, got {parts[2]}", lineno)
            ids = []
            for label in parts[:2]:
                i = index.get(label)
                if i is None:
                    i = index[label] = len(labels)
                    labels.append(label)
                ids.append(i)
            raw += 1
            u, v = ids
            if u == v:
                loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in pairs:
                dups += 1
                if weighted:
                    pairs[key] += w
            else:
                pairs[key] = w
    finally:
        if close:
            fh.close()

    if loops:
        logger.info("dropped %d self-loop(s)", loops)
    report = LoadReport(lines, raw, loops, dups, bool(directed))
    keys = list(pairs)
    src = [k[0] for k in keys]
    dst = [k[1] for k in keys]
    g = Graph(len(labels), src, dst, list(pairs.values()), node_labels=labels, report=report)
    assert int(g.degree.sum()) == 2 * g.m
    return g


def loads_edge_list(text, **kwargs):
    return load_edge_list(io.StringIO(text), **kwargs)


def _ordered_lines(g):
    """Edge lines whose first-appearance order reproduces the dense ids.

    Node ``k`` is introduced by an edge to a lower id, else by the edge
    ``(k, k + 1)``, else by a self-loop line (dropped again on load).
    """
    used = np.zeros(g.m, dtype=bool)
    seen = np.zeros(g.n, dtype=bool)
    src, dst, wt = g.src.tolist(), g.dst.tolist(), g.weight.tolist()
    for k in range(g.n):
        if seen[k]:
            continue
        lo, hi = g.indptr[k], g.indptr[k + 1]
        nbrs = g.nbr[lo:hi]
        pick = None
        if len(nbrs) and nbrs[0] < k:
            pick = int(g.eid[lo])
        else:
            hit = np.flatnonzero(nbrs == k + 1)
            if len(hit):
                pick = int(g.eid[lo + hit[0]])
        if pick is None:
            yield k, k, 1.0
            seen[k] = True
            continue
        used[pick] = True
        seen[src[pick]] = seen[dst[pick]] = True
        yield src[pick], dst[pick], wt[pick]
    for e in np.flatnonzero(~used).tolist():
        yield src[e], dst[e], wt[e]


def save_edge_list(g, target, write_weights=None):
    """Write ``g`` in edge-list format; weights are written unless all are 1.

    Loading the file again gives a graph equal to ``g``, ids included.
    """
    if write_weights is None:
        write_weights = g.is_weighted
    fh, close = _open_text(target, "w")
    try:
        names = g.node_labels
        for u, v, w in _ordered_lines(g):
            if write_weights and u != v:
                fh.write(f"{names[u]} {names[v]} {w!r}\n")
            else:
                fh.write(f"{names[u]} {names[v]}\n")
    finally:
        if close:
            fh.close()


@dataclass(frozen=True, eq=False)
class Partition:
    """Community label per dense node id.

    ``labels`` is an integer array of length ``n``; community ids are exactly
    the distinct values present. ``node_labels`` optionally carries the
    graph's external labels for serialization.
    """

    labels: np.ndarray
    node_labels: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        arr = np.asarray(self.labels, dtype=np.intp).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)
        if self.node_labels is not None and len(self.node_labels) != len(arr):
            raise ValueError("node_labels length does not match labels")

    @classmethod
    def from_communities(cls, communities, n=None, node_labels=None):
        communities = [sorted(c) for c in communities]
        if n is None:
            n = sum(len(c) for c in communities)
        labels = np.full(n, -1, dtype=np.intp)
        for cid, members in enumerate(communities):
            for v in members:
                if labels[v] != -1:
                    raise ValueError(f"node {v} appears in two communities")
                labels[v] = cid
        if np.any(labels < 0):
            missing = int(np.flatnonzero(labels < 0)[0])
            raise ValueError(f"node {missing} is not in any community")
        return cls(labels, node_labels)

    @property
    def n(self):
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    @property
    def community_count(self):
        return len(np.unique(self.labels))

    def communities(self):
        """Member lists, ordered by smallest member."""
        out = {}
        for v, c in enumerate(self.labels.tolist()):
            out.setdefault(c, []).append(v)
        return list(out.values())

    def canonical(self):
        """Labels renumbered ``0..k-1`` in order of first node appearance."""
        _, first, inverse = np.unique(self.labels, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.intp)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        return Partition(rank[inverse.ravel()], self.node_labels)

    def same_as(self, other):
        """Equal up to community-id renaming."""
        return self.n == other.n and np.array_equal(
            self.canonical().labels, other.canonical().labels
        )

    def internal_external_degree(self, g):
        """Per-node counts of incident edges inside and outside the node's community."""
        same = self.labels[g.src] == self.labels[g.dst]
        d_in = np.bincount(g.src[same], minlength=g.n) + np.bincount(g.dst[same], minlength=g.n)
        cross = ~same
        d_out = np.bincount(g.src[cross], minlength=g.n) + np.bincount(g.dst[cross], minlength=g.n)
        return d_in, d_out


def save_partition(p, target, node_labels=None):
    """Write ``label community_id`` lines in dense-id order, ids canonicalized."""
    names = node_labels or p.node_labels or tuple(str(i) for i in range(p.n))
    canon = p.canonical().labels.tolist()
    fh, close = _open_text(target, "w")
    try:
        for name, c in zip(names, canon):
            fh.write(f"{name} {c}\n")
    finally:
        if close:
            fh.close()


def load_partition(source, g):
    """Read a partition file against ``g``; every node must appear exactly once."""
    fh, close = _open_text(source)
    labels = np.full(g.n, -1, dtype=np.intp)
    comm_ids = {}
    try:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise GraphFormatError(f"expected 'label community_id', got {text!r}", lineno)
            name, comm = parts
            try:
                v = g.index_of(name)
            except KeyError:
                raise PartitionMismatchError(
                    f"line {lineno}: node {name!r} is not in the graph"
                ) from None
            if labels[v] != -1:
                raise PartitionMismatchError(f"line {lineno}: node {name!r} listed twice")
            labels[v] = comm_ids.setdefault(comm, len(comm_ids))
    finally:
        if close:
            fh.close()
    missing = np.flatnonzero(labels < 0)
    if len(missing):
        names = ", ".join(repr(g.node_labels[i]) for i in missing[:5])
        more = f" and {len(missing) - 5} more" if len(missing) > 5 else ""
        raise PartitionMismatchError(f"partition is missing node(s) {names}{more}")
    return Partition(labels, g.node_labels)
