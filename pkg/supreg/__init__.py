"""
supreg - LT-superregular Toeplitz matrices over prime fields

Constructs, verifies and searches lower-triangular Toeplitz matrices all of
whose non-trivial minors are nonzero, counts the minor polynomials that
involve the last entry, and reproduces the published search tables.
"""

__version__ = "1.0.0"
__author__ = "supreg developers"

from .prime_field import FieldElement, PrimeField
from .toeplitz import MinorIndex, SuperregularityReport, ToeplitzLT, from_first_column, is_superregular
from .forbidden import ForbiddenSet, forbidden_set
from .constructions import construct, witness
from .search import SearchRecord, SearchTask, exhaustive, greedy_extend, random_prefix
from .symbolic import CensusResult, census
from .core import TableReproducer

__all__ = [
    "PrimeField",
    "FieldElement",
    "ToeplitzLT",
    "MinorIndex",
    "SuperregularityReport",
    "from_first_column",
    "is_superregular",
    "ForbiddenSet",
    "forbidden_set",
    "construct",
    "witness",
    "SearchTask",
    "SearchRecord",
    "exhaustive",
    "greedy_extend",
    "random_prefix",
    "CensusResult",
    "census",
    "TableReproducer",
]
