"""Equational machinery for monoid varieties: words, bounded deduction,
factor monoids, rigid-word identity families and partition lattices."""

__version__ = "0.1.0"

from .deduction import (  # noqa: E402
    Identity,
    IdentitySystem,
    SearchLimits,
    bases_equivalent,
    closure,
    deducible,
    is_isoterm,
    one_step_rewrites,
)
from .monoids import factor_monoid, satisfies, satisfies_all  # noqa: E402
from .words import Word, format_word, match_pattern, parse_word  # noqa: E402

__all__ = [
    "Identity", "IdentitySystem", "SearchLimits", "Word", "bases_equivalent",
    "closure", "deducible", "factor_monoid", "format_word", "is_isoterm",
    "match_pattern", "one_step_rewrites", "parse_word", "satisfies", "satisfies_all",
]
