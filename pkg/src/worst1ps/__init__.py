"""Exact computation of the worst destabilizing 1-PS for Chow points of
monomial curves with one unibranch singularity."""

from worst1ps.semigroup import NumericalSemigroup, from_generators
from worst1ps.cone import SIMPLIFIED, UNSIMPLIFIED
from worst1ps.kkt import CornerSet, KktSystem, KktSolution, build, solve_face
from worst1ps.optimizer import ProxResult, WorstOnePS, prox, prox_bruteforce, worst_one_ps

__all__ = [
    "NumericalSemigroup",
    "from_generators",
    "SIMPLIFIED",
    "UNSIMPLIFIED",
    "CornerSet",
    "KktSystem",
    "KktSolution",
    "build",
    "solve_face",
    "ProxResult",
    "WorstOnePS",
    "prox",
    "prox_bruteforce",
    "worst_one_ps",
]

__version__ = "0.1.0"
