"""Exact decision of finiteness for maximal effective prolongations of graded Lie algebras."""

from .criteria import CheckOptions, Verdict, finiteness_check, min_rank_check, rank_one_witness
from .problem import ProblemSpec, parse, preset, serialize
from .prolong import DimTable, sym_prolong_dims, tanaka_prolong_dims

__all__ = [
    "CheckOptions", "Verdict", "finiteness_check", "min_rank_check", "rank_one_witness",
    "ProblemSpec", "parse", "preset", "serialize",
    "DimTable", "sym_prolong_dims", "tanaka_prolong_dims",
]
