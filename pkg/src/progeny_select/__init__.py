"""Manipulation-proof selection of influential agents in DAGs, measured by progeny."""

from .graph import Dag, build_dag, hide_edges, progeny, ranking
from .influential import InfluentialSet, check_structure, influential_set
from .mechanisms import OPTIMAL_BETA, SelectionDistribution, beta_lm, get_mechanism, lald, ldm

__all__ = [
    "Dag",
    "build_dag",
    "hide_edges",
    "progeny",
    "ranking",
    "InfluentialSet",
    "influential_set",
    "check_structure",
    "OPTIMAL_BETA",
    "SelectionDistribution",
    "beta_lm",
    "ldm",
    "lald",
    "get_mechanism",
]
