# flake8: noqa: F401
from .hpfs import hpfs
from .prepass import PrepassResult, static_cluster_prepass
from .variants import ClassicSAParams, VariantMode, classic_sa, run_variant
