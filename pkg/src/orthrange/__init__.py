"""Orthogonal range searching: ball-inheritance 2-d reporting, grid-recursive
3-d reporting, randomized shallow cuttings and offline dominance reporting."""
from .core import ContractError, PointD, QueryBox, dominates, presort, rank_space_reduce

__all__ = ["ContractError", "PointD", "QueryBox", "dominates", "presort", "rank_space_reduce"]
__version__ = "0.1.0"
