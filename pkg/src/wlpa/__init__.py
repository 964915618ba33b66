"""Community detection by label propagation guided by local edge betweenness."""

import os
from importlib import resources

from ._backend import NAME as BACKEND
from .betweenness import EdgeScores, full_edge_betweenness, local_edge_betweenness, sorted_neighbor_order
from .generators import GeneratorConfig, generate, generate_weighted
from .girvan_newman import Dendrogram, girvan_newman
from .graph import (
    Graph,
    GraphFormatError,
    Partition,
    PartitionMismatchError,
    load_edge_list,
    load_partition,
    neighbors,
    save_edge_list,
    save_partition,
)
from .metrics import modularity, nmi, quality_report, strong_weak_check
from .propagation import (
    LpaConfig,
    LpaResult,
    lpa,
    most_frequent_label,
    restricted_neighbor_set,
    stop_criterion,
    wlpa_leb,
)

__version__ = "0.1.0"


def dataset_path(name):
    """Locate a dataset file: bundled data first, then ``$WLPA_DATA_DIR``.

    Raises ``FileNotFoundError`` naming both places when absent.
    """
    bundled = resources.files(__name__).joinpath("data", name)
    if bundled.is_file():
        return bundled
    extra = os.environ.get("WLPA_DATA_DIR")
    if extra and os.path.isfile(os.path.join(extra, name)):
        return os.path.join(extra, name)
    raise FileNotFoundError(
        f"dataset file {name!r} is neither bundled nor in WLPA_DATA_DIR={extra!r}"
    )


def load_dataset(name):
    """Graph ``name`` (e.g. ``"karate"``) and its ground truth, or ``None`` if there is none."""
    g = load_edge_list(dataset_path(f"{name}.txt"))
    try:
        truth_path = dataset_path(f"{name}_truth.txt")
    except FileNotFoundError:
        return g, None
    return g, load_partition(truth_path, g)
