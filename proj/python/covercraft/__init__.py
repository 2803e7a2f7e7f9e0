"""Covering-congruence construction for forms k*m + j*a^i + l.

Thin wrappers over the C++ core. Big integers are plain Python ints;
exact rationals come back as fractions.Fraction.
"""

import json

from ._core import (
    BudgetExceeded,
    ConfigError,
    ConflictError,
    DomainError,
    Error,
    GuardError,
    InsufficientPairs,
    InvariantViolation,
    VerificationError,
    E_truncated,
    __version__,
    admissible_anchor,
    brun_pair_sum,
    brute_oracle,
    compute_I,
    coverage_density,
    crt_combine,
    factor,
    find_prime_pairs,
    form_exponent_order,
    is_prime,
    mertens_sum,
    mod_pow,
    multiplicative_order,
    pi_bounds_check,
    prime_count,
    primes_in_range,
    verify_cover,
    weighted_order_sum,
)
from . import _core


def build_covering_system(pairs, K, L, M=2, triples=None, min_pairs_per_class=1, largest_q_per_anchor=True):
    """Partition {a: [(p, q), ...]} over the triples and assemble (b, W).

    Returns the covering-system document as a dict (the same layout the CLI
    writes).
    """
    doc = _core._build_system(pairs, K, list(L), M, triples, min_pairs_per_class, largest_q_per_anchor)
    return json.loads(doc)


def verify_covering_system(system, samples=1000, seed=1):
    """Itemized verification report for a covering-system document."""
    return json.loads(_core._verify_system(json.dumps(system), samples, seed))


def run_search(system, N, upper=None, exclusive=False, threads=1):
    """Scan the system's residue class over [N, upper]; returns the JSON-lines records."""
    text = _core._search(json.dumps(system), N, upper, exclusive, threads)
    return [json.loads(line) for line in text.splitlines()]


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
