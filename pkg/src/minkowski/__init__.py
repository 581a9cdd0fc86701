"""Minkowski's question mark function, Stern-Brocot intervals and the
multifractal analysis of where Q' vanishes, is infinite, or fails to exist."""

__version__ = "0.1.0"

from .cf import (
    CFSpec,
    Constant,
    ConvergentTriple,
    DyadicRational,
    Explicit,
    Finite,
    Periodic,
    cf_eval,
    cf_expand,
    convergents,
    digit_sum,
    gauss_map,
    intermediate_convergent,
    micro_intermediate_convergent,
    remainder,
)
from .errors import CapExceeded, DegenerateInput, DomainError, InsufficientDigits, MinkowskiError
from .question import DyadicEnclosure, mediant_identity_check, q_enclose, q_eval, q_inverse, q_recursion_step
from .sternbrocot import SBInterval, descent_path, fold_level, locate, sb_children, sb_sequence, type_change

__all__ = [
    "CFSpec",
    "Constant",
    "ConvergentTriple",
    "DyadicRational",
    "Explicit",
    "Finite",
    "Periodic",
    "cf_eval",
    "cf_expand",
    "convergents",
    "digit_sum",
    "gauss_map",
    "intermediate_convergent",
    "micro_intermediate_convergent",
    "remainder",
    "CapExceeded",
    "DegenerateInput",
    "DomainError",
    "InsufficientDigits",
    "MinkowskiError",
    "DyadicEnclosure",
    "mediant_identity_check",
    "q_enclose",
    "q_eval",
    "q_inverse",
    "q_recursion_step",
    "SBInterval",
    "descent_path",
    "fold_level",
    "locate",
    "sb_children",
    "sb_sequence",
    "type_change",
]
