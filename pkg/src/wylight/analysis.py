"""
Cost model and experiment helpers.

The work of a permutation run is driven by the patterns inside the final
testable region: each costs one occurrence-list scan of length ``x`` per
permutation batch.  ``dataset_cost`` sums ``x * c(x)`` over that region,
where ``c(x)`` is the number of patterns with support ``x``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .engine import compute_threshold
from .exact_test import ONE_TAILED, psi_table
from .miner import enumerate_frequent
from .oracle import DEFAULT_LIMITS, brute_force_all_patterns
from .permutation import empirical_fwer, generate_permutations
from .testability import is_testable, iter_states

FWER_COLUMNS = ("J", "median_fwer", "p05", "p95")


@dataclass(frozen=True)
class SupportHistogram:
    """
    Pattern counts ``c(x)`` by support.

    ``exhaustive`` is True only when every itemset was counted; a mined
    histogram covers supports at or above the floor it was mined with.
    """

    counts: dict
    exhaustive: bool

    @property
    def total(self):
        return sum(self.counts.values())


def _histogram(supports, exhaustive):
    counts = {}
    for x in supports:
        counts[x] = counts.get(x, 0) + 1
    return SupportHistogram(dict(sorted(counts.items())), exhaustive)


def exhaustive_histogram(db, limits=DEFAULT_LIMITS):
    """Histogram of every itemset with support >= 1 (tiny databases only)."""
    return _histogram(
        (x for _, x, _ in brute_force_all_patterns(db, limits) if x >= 1), True)


def mined_histogram(db, min_support):
    """Histogram of the itemsets with support >= ``min_support``."""
    supports = []
    enumerate_frequent(db, max(1, min_support), lambda e: supports.append(e.support))
    return _histogram(supports, False)


def dataset_cost(hist, region, N=None):
    """
    Support-weighted and plain pattern counts inside a testable region.

    Parameters
    ----------
    hist : SupportHistogram
    region : TestabilityState
    N : int, optional
        Defaults to the region's own ``N``.

    Returns
    -------
    (int, int)
        ``C = sum x * c(x)`` and ``C~ = sum c(x)`` over supports in the region.
    """
    weighted = plain = 0
    for x, c in hist.counts.items():
        if is_testable(x, region, N):
            weighted += x * c
            plain += c
    return weighted, plain


def cost_profile(hist, n, N, mode=ONE_TAILED):
    """``(k, delta_k, C_k, C~_k)`` for every threshold of the sequence."""
    return [(s.k, s.delta_k) + dataset_cost(hist, s, N)
            for s in iter_states(psi_table(n, N, mode))]


@dataclass(frozen=True)
class MemoryEstimate:
    """Analytic byte counts; models, not measurements."""

    wylight_bytes: int
    fastwy_bytes: int


def memory_estimates(N, J, C_k):
    """
    One byte per label and permutation for the matrix, against four bytes
    per stored transaction id for occurrence-list caching.
    """
    return MemoryEstimate(N * J, 4 * C_k)


@dataclass(frozen=True)
class FwerRow:
    J: int
    median_fwer: float
    p05: float
    p95: float


def fwer_sweep(db, labels, alpha=0.05, J_values=(1000,), repetitions=10, seed=0,
               mode=ONE_TAILED):
    """
    Empirical FWER at the calibrated threshold as a function of ``J``.

    Each ``(J, repetition)`` pair draws its own matrix from a seed derived
    from ``(seed, J, repetition)``, so rows do not depend on which other
    ``J`` values are requested.
    """
    rows = []
    for J in J_values:
        values = []
        for rep in range(repetitions):
            ss = np.random.SeedSequence([seed, J, rep])
            matrix = generate_permutations(labels, J, ss)
            result = compute_threshold(db, labels, matrix, alpha, mode)
            values.append(empirical_fwer(result.min_pvalues, result.delta_star))
        p05, med, p95 = np.percentile(values, [5, 50, 95])
        rows.append(FwerRow(int(J), float(med), float(p05), float(p95)))
    return rows


def format_fwer_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FWER_COLUMNS)
    for r in rows:
        writer.writerow([r.J, repr(r.median_fwer), repr(r.p05), repr(r.p95)])
    return buf.getvalue()


def parse_fwer_csv(text):
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != FWER_COLUMNS:
        raise ValueError(f"expected columns {FWER_COLUMNS}, got {reader.fieldnames}")
    return [FwerRow(int(r["J"]), float(r["median_fwer"]), float(r["p05"]), float(r["p95"]))
            for r in reader]
