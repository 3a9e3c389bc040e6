"""Fixpoint checking for non-expansive functions over MV-algebras."""

from .mv import CHAIN, REAL, MVAlgebra, MVValue
from .valuations import Distribution, FiniteSet, Valuation, support_nonzero
from .diagrams import approximate, conjugate, evaluate, typecheck
from .engine import (CheckReport, Mode, Verdict, check, check_greatest, check_least,
                     check_post_below_least, check_pre_above_greatest, gfp_approx,
                     iterate_to_greatest_from_below, iterate_to_least_from_above,
                     suggest_decrease)

__all__ = [
    "CHAIN", "REAL", "MVAlgebra", "MVValue", "Distribution", "FiniteSet", "Valuation",
    "support_nonzero", "approximate", "conjugate", "evaluate", "typecheck", "CheckReport",
    "Mode", "Verdict", "check", "check_greatest", "check_least", "check_post_below_least",
    "check_pre_above_greatest", "gfp_approx", "iterate_to_greatest_from_below",
    "iterate_to_least_from_above", "suggest_decrease",
]
