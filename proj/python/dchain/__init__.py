"""Double-chain toolkit for forbidden-subposet problems.

Expressions use the seven base posets E, B, D3, Q, R, S, S' (alias Sp),
`+` for the linear sum and `*` for one-point gluing (`*` binds tighter).
Families are lists of 1-based subsets of [n]. Results from the search
routines are dicts mirroring the CLI certificates.
"""

from ._core import (
    DchainError,
    ParseError,
    Poset,
    audit_double_chains,
    base_poset,
    double_lubell_sum,
    e_scan,
    embeds,
    info,
    is_p_free,
    la,
    middle_levels,
    normalize_expr,
    old_bound,
    path_poset,
    poset,
    sigma,
    upper_bound,
    verify,
    window_check,
)

__all__ = [
    "DchainError",
    "ParseError",
    "Poset",
    "audit_double_chains",
    "base_poset",
    "double_lubell_sum",
    "e_scan",
    "embeds",
    "info",
    "is_p_free",
    "la",
    "middle_levels",
    "normalize_expr",
    "old_bound",
    "path_poset",
    "poset",
    "sigma",
    "upper_bound",
    "verify",
    "window_check",
]
