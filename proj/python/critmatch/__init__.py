"""Critical relaxed stable matchings under two-sided ties."""

from ._critmatch import (
    Instance,
    InvariantError,
    MatchingError,
    ParseError,
    SizeGuardError,
    blocking_pairs,
    load_instance,
    max_critical_coverage,
    more_popular,
    oracle,
    parse_instance,
    random_instance,
    solve,
    verify,
)

__all__ = [
    "Instance",
    "InvariantError",
    "MatchingError",
    "ParseError",
    "SizeGuardError",
    "blocking_pairs",
    "load_instance",
    "max_critical_coverage",
    "more_popular",
    "oracle",
    "parse_instance",
    "random_instance",
    "solve",
    "verify",
]
