"""Planted l-partition benchmark graphs.

``groups`` groups of ``group_size`` nodes; every unordered pair is an
independent coin flip with probability ``p_in`` inside a group and ``p_out``
across groups. The probabilities follow from the expected degree ``k`` and the
mixing fraction ``mu`` (expected share of a node's edges that leave its group)::

    p_in  = k * (1 - mu) / (s - 1)
    p_out = k * mu / (n - s)

The classic GN preset is 4 groups of 32 with ``k = 16``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition

WEIGHT_FLOOR = 1e-9


@dataclass(frozen=True)
class GeneratorConfig:
    groups: int = 4
    group_size: int = 32
    degree: float = 16.0
    mu: float = 0.1
    seed: int = 0

    @classmethod
    def gn(cls, mu=0.1, seed=0):
        return cls(groups=4, group_size=32, degree=16.0, mu=mu, seed=seed)

    @property
    def n(self):
        return self.groups * self.group_size

    @property
    def p_in(self):
        return self.degree * (1.0 - self.mu) / (self.group_size - 1)

    @property
    def p_out(self):
        return self.degree * self.mu / (self.n - self.group_size)

    def validate(self):
        if self.groups < 2:
            raise ValueError(f"need at least 2 groups, got {self.groups}")
        if self.group_size < 2:
            raise ValueError(f"group_size must be >= 2, got {self.group_size}")
        if not 0.0 <= self.mu < 1.0:
            raise ValueError(f"mu must lie in [0, 1), got {self.mu}")
        if not 0 < self.degree < self.n:
            raise ValueError(f"degree must lie in (0, n={self.n}), got {self.degree}")
        if self.p_in > 1.0:
            raise ValueError(f"infeasible configuration: p_in = {self.p_in:.6g} > 1")
        if self.p_out > 1.0:
            raise ValueError(f"infeasible configuration: p_out = {self.p_out:.6g} > 1")
        if self.p_in < self.p_out:
            warnings.warn(
                f"p_in = {self.p_in:.4g} < p_out = {self.p_out:.4g}: no planted community structure",
                stacklevel=4,
            )


def _triangle_pairs(flat, size):
    """Decode row-major indices of the strict upper triangle of a ``size`` square."""
    flat = np.asarray(flat, dtype=np.int64)
    total = size * (size - 1) // 2
    # row i starts at i*size - i*(i+1)/2; invert with sqrt then fix off-by-one
    disc = np.sqrt(np.maximum(8.0 * (total - 1 - flat) + 1.0, 0.0))
    i = size - 2 - np.floor((disc - 1.0) / 2.0).astype(np.int64)
    i = np.clip(i, 0, size - 2)
    start = i * size - i * (i + 1) // 2
    low = flat < start
    while np.any(low):
        i[low] -= 1
        start = i * size - i * (i + 1) // 2
        low = flat < start
    nxt = (i + 1) * size - (i + 1) * (i + 2) // 2
    high = flat >= nxt
    while np.any(high):
        i[high] += 1
        start = i * size - i * (i + 1) // 2
        nxt = (i + 1) * size - (i + 1) * (i + 2) // 2
        high = flat >= nxt
    j = flat - start + i + 1
    return i, j


def _sample_pairs(rng, size, p):
    pairs = size * (size - 1) // 2
    if p <= 0.0 or pairs == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    count = int(rng.binomial(pairs, min(p, 1.0)))
    flat = rng.choice(pairs, size=count, replace=False, shuffle=False)
    flat.sort()
    return _triangle_pairs(flat, size)


def _sample(cfg):
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    s, n = cfg.group_size, cfg.n
    src, dst = [], []
    for grp in range(cfg.groups):
        i, j = _sample_pairs(rng, s, cfg.p_in)
        src.append(i + grp * s)
        dst.append(j + grp * s)
    # sampling over all pairs and discarding same-group hits keeps each
    # cross-group pair an independent p_out coin
    i, j = _sample_pairs(rng, n, cfg.p_out)
    cross = (i // s) != (j // s)
    src.append(i[cross])
    dst.append(j[cross])
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    truth = np.arange(n, dtype=np.intp) // s
    return src, dst, truth


def generate(cfg):
    """Return ``(graph, planted_partition)``; all edge weights are 1."""
    src, dst, truth = _sample(cfg)
    g = Graph(cfg.n, src, dst)
    return g, Partition(truth, g.node_labels)


def cross_weights(mu, wmu):
    """Intra/cross edge weights giving an expected cross-strength share of ``wmu``."""
    if not 0.0 <= wmu < 1.0:
        raise ValueError(f"wmu must lie in [0, 1), got {wmu}")
    w_in = (1.0 - wmu) / (1.0 - mu)
    w_out = wmu / mu if mu > 0 else wmu
    return max(w_in, WEIGHT_FLOOR), max(w_out, WEIGHT_FLOOR)


def generate_weighted(cfg, wmu):
    """Same topology as :func:`generate` (same seed), then weights.

    Intra-group edges weigh ``(1 - wmu) / (1 - mu)`` and cross-group edges
    ``wmu / mu``, so a node's expected strength is ``k`` and the expected
    share of it on cross-group edges is ``wmu``. Weights are floored at 1e-9.
    """
    w_in, w_out = cross_weights(cfg.mu, wmu)
    src, dst, truth = _sample(cfg)
    weight = np.where(truth[src] == truth[dst], w_in, w_out)
    g = Graph(cfg.n, src, dst, weight)
    return g, Partition(truth, g.node_labels)
