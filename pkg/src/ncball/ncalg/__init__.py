"""Exact symbolic layer: Laurent scalars, the free *-algebra, rewriting and identity checks."""

from .confluence import FuzzResult, confluence_fuzz, overlap_ambiguities, random_polynomial
from .identities import check_phase_automorphism, derived_identities, normal_form, verify_identities_symbolic
from .parser import parse_expression
from .poly import Generator, Polynomial, word_key
from .presentation import Family, Presentation, Relation, RewriteRule, build_presentation, termination_rank
from .rewrite import Reducer
from .scalar import ONE, Q, S, Scalar

__all__ = [
    "Scalar", "S", "Q", "ONE",
    "Generator", "Polynomial", "word_key",
    "Family", "Presentation", "Relation", "RewriteRule", "build_presentation", "termination_rank",
    "Reducer", "normal_form", "parse_expression",
    "verify_identities_symbolic", "derived_identities", "check_phase_automorphism",
    "FuzzResult", "confluence_fuzz", "overlap_ambiguities", "random_polynomial",
]
