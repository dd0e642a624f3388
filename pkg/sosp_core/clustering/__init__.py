# flake8: noqa: F401
from ..model.geometry import intersect_ranges, merge_windows, midpoint
from .clustering import (
    ClusterCost,
    Rejection,
    ResourceWeights,
    resource_delta,
    resource_weights,
    try_cluster,
    update_resource_weights,
    worthwhile,
)
