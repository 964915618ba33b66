"""Partition quality: modularity, NMI and the strong/weak community tests."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class UndefinedMetricError(ValueError):
    pass


def modularity(g, p):
    """Newman-Girvan modularity, weighted.

    ``Q = sum_c [W_c / W - (S_c / 2W)**2]`` with ``W_c`` the weight inside
    community ``c``, ``S_c`` the total strength of its members and ``W`` the
    total edge weight.
    """
    labels = p.labels if hasattr(p, "labels") else np.asarray(p)
    if len(labels) != g.n:
        raise ValueError(f"partition covers {len(labels)} nodes, graph has {g.n}")
    if g.m == 0 or g.total_weight <= 0:
        raise UndefinedMetricError("modularity is undefined for a graph without edges")
    _, comm = np.unique(labels, return_inverse=True)
    comm = comm.ravel()
    k = int(comm.max()) + 1
    inside = comm[g.src] == comm[g.dst]
    w_in = np.bincount(comm[g.src[inside]], weights=g.weight[inside], minlength=k)
    s_tot = np.bincount(comm, weights=g.strength, minlength=k)
    two_w = 2.0 * g.total_weight
    return float(np.sum(w_in / g.total_weight - (s_tot / two_w) ** 2))


@dataclass(frozen=True)
class ConfusionTable:
    counts: np.ndarray
    rows: np.ndarray = field(init=False)
    cols: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", self.counts.sum(axis=1))
        object.__setattr__(self, "cols", self.counts.sum(axis=0))

    @property
    def total(self):
        return int(self.counts.sum())

    @classmethod
    def between(cls, a, b):
        a = a.labels if hasattr(a, "labels") else np.asarray(a)
        b = b.labels if hasattr(b, "labels") else np.asarray(b)
        if len(a) != len(b):
            raise ValueError(f"partitions cover different node sets ({len(a)} vs {len(b)} nodes)")
        _, ia = np.unique(a, return_inverse=True)
        _, ib = np.unique(b, return_inverse=True)
        ia, ib = ia.ravel(), ib.ravel()
        counts = np.zeros((ia.max(initial=-1) + 1, ib.max(initial=-1) + 1), dtype=np.int64)
        np.add.at(counts, (ia, ib), 1)
        return cls(counts)


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi(a, b):
    """``2 I(a; b) / (H(a) + H(b))`` for two disjoint partitions of the same nodes.

    Natural logs. Two identical trivial partitions (both a single community,
    or both all singletons) give ``0/0`` and are defined as 1.
    """
    table = ConfusionTable.between(a, b)
    n = table.total
    if n == 0:
        raise ValueError("NMI needs at least one node")
    h_a = _entropy(table.rows, n)
    h_b = _entropy(table.cols, n)
    if h_a + h_b == 0.0:
        return 1.0
    nz = table.counts > 0
    joint = table.counts[nz] / n
    outer = np.outer(table.rows, table.cols)[nz] / (n * n)
    mi = float(np.sum(joint * np.log(joint / outer)))
    return min(max(2.0 * mi / (h_a + h_b), 0.0), 1.0)


@dataclass(frozen=True)
class CommunityFlags:
    community: int
    size: int
    internal: int
    external: int
    strong: bool
    weak: bool


def strong_weak_check(g, p):
    """Per community: strong iff every member has more edges inside than out;
    weak iff the members' inside-edge ends outnumber their outside-edge ends.

    Counts edges, not weights.
    """
    d_in, d_out = p.internal_external_degree(g)
    out = []
    for members in p.communities():
        idx = np.asarray(members, dtype=np.intp)
        din, dout = d_in[idx], d_out[idx]
        out.append(
            CommunityFlags(
                community=int(p.labels[idx[0]]),
                size=len(members),
                internal=int(din.sum()),
                external=int(dout.sum()),
                strong=bool(np.all(din > dout)),
                weak=bool(din.sum() > dout.sum()),
            )
        )
    return out


@dataclass(frozen=True)
class QualityReport:
    modularity: float | None
    community_count: int
    size_histogram: dict
    communities: list
    nmi: float | None = None

    def to_dict(self):
        return {
            "modularity": self.modularity,
            "nmi": self.nmi,
            "community_count": self.community_count,
            "size_histogram": {str(k): v for k, v in sorted(self.size_histogram.items())},
            "strong_communities": sum(c.strong for c in self.communities),
            "weak_communities": sum(c.weak for c in self.communities),
            "communities": [
                {
                    "id": c.community,
                    "size": c.size,
                    "internal_degree": c.internal,
                    "external_degree": c.external,
                    "strong": c.strong,
                    "weak": c.weak,
                }
                for c in self.communities
            ],
        }


def quality_report(g, p, truth=None):
    flags = strong_weak_check(g, p.canonical())
    sizes = {}
    for c in flags:
        sizes[c.size] = sizes.get(c.size, 0) + 1
    q = modularity(g, p) if g.m else None
    return QualityReport(
        modularity=q,
        community_count=len(flags),
        size_histogram=sizes,
        communities=flags,
        nmi=nmi(p, truth) if truth is not None else None,
    )
