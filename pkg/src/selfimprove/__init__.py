"""Self-improving sorting and Delaunay triangulation.

Inputs are assumed to follow a *group product distribution*: positions are
partitioned into hidden groups, positions within a group are deterministic
functions of one hidden parameter, and parameters across groups are
independent.  A polynomial-time training phase learns the grouping and
builds entropy-sensitive retrieval structures; the operation phase then
sorts (or triangulates) fresh instances with cost that tracks the entropy
of the output distribution instead of the worst case.
"""

from .config import Knobs
from .model import (
    SortModel, DtModel, Instance, InstanceSampler,
    make_sort_model, make_dt_model, sample_instance, plugin_entropy,
)

__all__ = [
    "Knobs", "SortModel", "DtModel", "Instance", "InstanceSampler",
    "make_sort_model", "make_dt_model", "sample_instance", "plugin_entropy",
]

__version__ = "0.1.0"
