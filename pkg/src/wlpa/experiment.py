"""Multi-run detection experiments and scaling benchmarks."""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _backend
from .betweenness import local_edge_betweenness
from .generators import GeneratorConfig, generate
from .girvan_newman import DEFAULT_MAX_NODES, girvan_newman
from .metrics import modularity, nmi, quality_report
from .propagation import LPA, WLPA_LEB, LpaConfig, detect, lpa, rank_neighbors, wlpa_leb

logger = logging.getLogger(__name__)

GN = "gn"
ALGORITHMS = (LPA, WLPA_LEB, GN)


@dataclass(frozen=True)
class RunConfig:
    algorithm: str = WLPA_LEB
    runs: int = 100
    seed: int = 0
    max_passes: int = 100
    depth: int = 2
    threads: int = 1
    weighted: bool = False
    gn_max_nodes: int = DEFAULT_MAX_NODES

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")

    def run_seed(self, index):
        return self.seed + index

    def lpa_config(self, index):
        return LpaConfig(
            algorithm=self.algorithm,
            depth=self.depth,
            max_passes=self.max_passes,
            seed=self.run_seed(index),
            weighted=self.weighted,
            threads=self.threads,
        )


@dataclass
class RunRecord:
    run: int
    seed: int
    modularity: float
    communities: int
    passes: int
    converged: bool
    nmi: float | None = None
    wall_ms: float = field(default=0.0, compare=False)


@dataclass
class ExperimentReport:
    algorithm: str
    config: dict
    graph: dict
    runs: list
    best_run: int
    setup_ms: float = field(default=0.0, compare=False)

    def _values(self, key):
        return [getattr(r, key) for r in self.runs]

    @property
    def best_modularity(self):
        return self.runs[self.best_run].modularity

    @property
    def average_modularity(self):
        return float(np.mean(self._values("modularity")))

    @property
    def worst_modularity(self):
        return min(self._values("modularity"))

    def to_dict(self):
        """Deterministic content: no wall-clock numbers."""
        out = {
            "algorithm": self.algorithm,
            "backend": _backend.NAME,
            "config": self.config,
            "graph": self.graph,
            "best_run": self.best_run,
            "best_modularity": self.best_modularity,
            "average_modularity": self.average_modularity,
            "worst_modularity": self.worst_modularity,
            "converged_runs": sum(r.converged for r in self.runs),
            "runs": [
                {k: v for k, v in asdict(r).items() if k != "wall_ms"} for r in self.runs
            ],
        }
        nmis = self._values("nmi")
        if all(x is not None for x in nmis):
            out["best_nmi"] = max(nmis)
            out["average_nmi"] = float(np.mean(nmis))
            out["worst_nmi"] = min(nmis)
            out["nmi_of_best_modularity_run"] = nmis[self.best_run]
        return out

    def write_runs_csv(self, fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["run", "seed", "modularity", "nmi", "communities", "passes", "converged"])
        for r in self.runs:
            writer.writerow([r.run, r.seed, repr(r.modularity), "" if r.nmi is None else repr(r.nmi),
                             r.communities, r.passes, int(r.converged)])

    def write_timings_csv(self, fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["run", "wall_ms", "passes", "threads"])
        writer.writerow(["setup", f"{self.setup_ms:.3f}", "", self.config["threads"]])
        for r in self.runs:
            writer.writerow([r.run, f"{r.wall_ms:.3f}", r.passes, self.config["threads"]])


def run_once(g, cfg, index, ranking=None, truth=None, backend=None):
    """Run detection ``index`` of an experiment in isolation."""
    t0 = time.perf_counter()
    result = detect(g, cfg.lpa_config(index), ranking=ranking, backend=backend)
    wall = (time.perf_counter() - t0) * 1e3
    p = result.partition
    return p, RunRecord(
        run=index,
        seed=cfg.run_seed(index),
        modularity=modularity(g, p),
        communities=p.community_count,
        passes=result.passes,
        converged=result.converged,
        nmi=nmi(p, truth) if truth is not None else None,
        wall_ms=wall,
    )


def run_experiment(g, cfg, truth=None, backend=None):
    """Run ``cfg.runs`` seeded detections; return ``(report, best_partition, extra)``.

    Run ``i`` uses seed ``cfg.seed + i``. The betweenness ranking of the
    guided variant does not depend on the seed and is computed once.
    ``extra`` holds the dendrogram for Girvan-Newman, else ``None``.
    """
    if g.m == 0:
        raise ValueError("cannot evaluate modularity on a graph without edges")
    graph_info = {"n": g.n, "m": g.m, "weighted": bool(cfg.weighted and g.is_weighted)}
    config = asdict(cfg)
    if cfg.algorithm == GN:
        t0 = time.perf_counter()
        best, dendrogram = girvan_newman(g, max_nodes=cfg.gn_max_nodes, threads=cfg.threads, backend=backend)
        wall = (time.perf_counter() - t0) * 1e3
        config["runs"] = 1
        rec = RunRecord(0, cfg.seed, modularity(g, best), best.community_count,
                        len(dendrogram.levels) - 1, True,
                        nmi(best, truth) if truth is not None else None, wall)
        return ExperimentReport(GN, config, graph_info, [rec], 0), best, dendrogram

    setup = 0.0
    ranking = None
    if cfg.algorithm == WLPA_LEB:
        t0 = time.perf_counter()
        ranking = rank_neighbors(g, cfg.depth, cfg.weighted, threads=cfg.threads, backend=backend)
        setup = (time.perf_counter() - t0) * 1e3
    records = []
    best_p = None
    best_i = 0
    for i in range(cfg.runs):
        p, rec = run_once(g, cfg, i, ranking=ranking, truth=truth, backend=backend)
        records.append(rec)
        if best_p is None or rec.modularity > records[best_i].modularity:
            best_p, best_i = p, i
        logger.debug("run %d: Q=%.4f passes=%d", i, rec.modularity, rec.passes)
    return ExperimentReport(cfg.algorithm, config, graph_info, records, best_i, setup), best_p, None


BENCH_COLUMNS = ["n", "m", "algorithm", "h", "threads", "wall_ms", "passes", "backend", "error"]


def bench_graph(n, *, degree=15.0, mu=0.4, group_size=100, seed=0):
    """Planted-partition graph for timing runs (``n`` rounded down to whole groups)."""
    groups = max(n // group_size, 2)
    return generate(GeneratorConfig(groups, group_size, degree, mu, seed))[0]


def _time(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1e3


def bench(sizes, threads=(1,), depths=(2,), algorithms=(WLPA_LEB, LPA), *, betweenness=True,
          repeats=1, seed=0, degree=15.0, mu=0.4, group_size=100, backend=None):
    """Yield one CSV-ready dict per (size, algorithm, depth, threads).

    ``algorithm == "betweenness"`` rows time only the local-betweenness phase.
    A failing row records its error and the ladder continues. With
    ``repeats > 1`` the fastest repeat is reported.
    """
    name = _backend.get(backend)
    backend_name = "python" if name.__name__.endswith("_pykernels") else "compiled"
    for n in sizes:
        try:
            g = bench_graph(n, degree=degree, mu=mu, group_size=group_size, seed=seed)
        except Exception as exc:  # noqa: BLE001 - reported per row
            yield dict(n=n, m="", algorithm="generate", h="", threads="", wall_ms="", passes="",
                       backend=backend_name, error=f"{type(exc).__name__}: {exc}")
            continue
        jobs = []
        for t in threads:
            for h in depths if betweenness else ():
                jobs.append(("betweenness", h, t))
            for algo in algorithms:
                for h in depths if algo == WLPA_LEB else ("",):
                    jobs.append((algo, h, t))
        for algo, h, t in jobs:
            row = dict(n=g.n, m=g.m, algorithm=algo, h=h, threads=t, wall_ms="", passes="",
                       backend=backend_name, error="")
            try:
                best = None
                passes = ""
                for _ in range(max(repeats, 1)):
                    if algo == "betweenness":
                        _, ms = _time(lambda: local_edge_betweenness(g, h, threads=t, backend=backend))
                    else:
                        cfg = LpaConfig(algorithm=algo, depth=h or 2, seed=seed, threads=t, weighted=False)
                        runner = wlpa_leb if algo == WLPA_LEB else lpa
                        res, ms = _time(lambda: runner(g, cfg, backend=backend))
                        passes = res.passes
                    best = ms if best is None else min(best, ms)
                row["wall_ms"] = round(best, 3)
                row["passes"] = passes
            except MemoryError as exc:
                row["error"] = f"MemoryError: {exc}"
            except Exception as exc:  # noqa: BLE001 - reported per row
                row["error"] = f"{type(exc).__name__}: {exc}"
            logger.info("bench %s", row)
            yield row


def write_bench_csv(rows, fh):
    writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
        fh.flush()


def evaluate(g, p, truth=None):
    return quality_report(g, p, truth)
