import os
import subprocess
import sys

import numpy as np
import pytest

from wlpa import _backend, _pykernels
from wlpa.betweenness import local_edge_betweenness
from wlpa.graph import Graph
from wlpa.propagation import LPA, WLPA_LEB, LpaConfig, detect, stop_criterion

from conftest import make, random_graph

needs_compiled = pytest.mark.skipif(not _backend.compiled_available(), reason="compiled kernels not built")


def active_backend(env):
    code = "import wlpa; print(wlpa.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={**os.environ, **env})
    return out.returncode, out.stdout.strip()


def test_env_forces_python():
    assert active_backend({"WLPA_BACKEND": "python"}) == (0, "python")


@needs_compiled
def test_auto_prefers_compiled():
    assert active_backend({"WLPA_BACKEND": "auto"}) == (0, "compiled")


def test_get_by_name():
    assert _backend.get("python") is _pykernels
    with pytest.raises(ValueError):
        _backend.get("fortran")


def test_thread_env(monkeypatch):
    monkeypatch.delenv("WLPA_THREADS", raising=False)
    assert _backend.default_threads() == 1
    monkeypatch.setenv("WLPA_THREADS", "3")
    assert _backend.default_threads() == 3
    monkeypatch.setenv("WLPA_THREADS", "0")
    with pytest.raises(ValueError):
        _backend.default_threads()


@needs_compiled
@pytest.mark.parametrize("seed", range(8))
def test_random_graphs_identical_across_backends(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 120))
    edges = random_graph(rng, n, 6.0 / n)
    weighted = seed % 2 == 1
    if weighted:
        g = Graph.from_edges([(u, v, float(w)) for (u, v), w in zip(edges, rng.uniform(0.5, 4, len(edges)))], n=n)
    else:
        g = make(edges, n=n)
    for h in (1, 2, 3):
        a = local_edge_betweenness(g, h, backend="python").values
        b = local_edge_betweenness(g, h, backend="compiled").values
        assert np.array_equal(a, b)
    for algo in (LPA, WLPA_LEB):
        cfg = LpaConfig(algorithm=algo, seed=seed, weighted=weighted)
        a = detect(g, cfg, backend="python")
        b = detect(g, cfg, backend="compiled")
        assert np.array_equal(a.partition.labels, b.partition.labels)
        assert (a.passes, a.converged) == (b.passes, b.converged)


@needs_compiled
def test_unsatisfied_counts_agree():
    rng = np.random.default_rng(1)
    g = make(random_graph(rng, 60, 0.1), n=60)
    kc, kp = _backend.get("compiled"), _backend.get("python")
    for _ in range(20):
        labels = np.ascontiguousarray(rng.integers(0, 5, 60), dtype=np.intp)
        for weighted in (False, True):
            assert kc.count_unsatisfied(g.indptr, g.nbr, g.wts, labels, weighted) == \
                kp.count_unsatisfied(g.indptr, g.nbr, g.wts, labels, weighted)
        assert stop_criterion(g, labels) == (kp.count_unsatisfied(g.indptr, g.nbr, g.wts, labels, False) == 0)
