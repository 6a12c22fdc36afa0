"""Relative Schur multipliers and central f-extensions of finite groups."""

from __future__ import annotations

__version__ = "0.1.0"

from .abelian import AbGroup, AbMap
from .config import Budget
from .errors import (
    BudgetError, HypothesisError, InternalInvariantError, ParseError, RelextError,
)
from .grp import Group, Hom, Subgroup

__all__ = [
    "AbGroup", "AbMap", "Budget", "BudgetError", "Group", "Hom", "HypothesisError",
    "InternalInvariantError", "ParseError", "RelextError", "Subgroup", "__version__",
]
