"""
Brute-force reference implementations for the test suite.

Everything here enumerates all ``2^M - 1`` itemsets with plain Python sets
and tracks minima in Python loops, so it shares no enumeration, counting or
threshold logic with the code it checks.  P-values come in two flavours:

* ``exact=True``: rational arithmetic on binomial coefficients
  (``fractions.Fraction``), independent of the log-space pipeline;
* ``exact=False``: the float64 values of ``exact_test.pvalue_table``, so
  that thresholds can be compared with zero tolerance.

Only tiny databases are accepted (see ``OracleLimits``).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import LimitsExceeded
from .exact_test import LOG_TOL, ONE_TAILED, TWO_TAILED, Margins, check_mode, pvalue_table


@dataclass(frozen=True)
class OracleLimits:
    max_items: int = 12
    max_N: int = 32

    def check(self, db):
        if len(db.items) > self.max_items:
            raise LimitsExceeded(f"{len(db.items)} items exceed the oracle limit {self.max_items}")
        if db.N > self.max_N:
            raise LimitsExceeded(f"N={db.N} exceeds the oracle limit {self.max_N}")


DEFAULT_LIMITS = OracleLimits()


def brute_force_all_patterns(db, limits=DEFAULT_LIMITS):
    """
    Every non-empty itemset with its support and occurrence set.

    Support-0 itemsets are included; callers filter them.  Returns a list of
    ``(itemset, support, frozenset of transaction ids)``.
    """
    limits.check(db)
    tidsets = [frozenset(int(t) for t in occ) for occ in db.occurrences]
    everything = frozenset(range(db.N))
    out = []
    for size in range(1, len(db.items) + 1):
        for combo in itertools.combinations(range(len(db.items)), size):
            occ = everything
            for i in combo:
                occ = occ & tidsets[i]
            out.append((tuple(db.items[i] for i in combo), len(occ), occ))
    return out


def exact_pvalue(a, x, n, N, mode=ONE_TAILED):
    """Fisher p-value as a ``Fraction``, by direct tail summation."""
    check_mode(mode)
    total = math.comb(N, x)
    lo, hi = max(0, x + n - N), min(n, x)
    weights = {k: math.comb(n, k) * math.comb(N - n, x - k) for k in range(lo, hi + 1)}
    left = sum(w for k, w in weights.items() if k <= a)
    right = sum(w for k, w in weights.items() if k >= a)
    p = Fraction(min(left, right), total)
    if mode == TWO_TAILED:
        p = min(Fraction(1), 2 * p)
    return p


def exact_psi(x, n, N, mode=ONE_TAILED):
    """Minimum attainable p-value by scanning every cell count."""
    lo, hi = max(0, x + n - N), min(n, x)
    return min(exact_pvalue(a, x, n, N, mode) for a in range(lo, hi + 1))


def _testable_patterns(db, limits):
    return [(s, x, occ) for s, x, occ in brute_force_all_patterns(db, limits) if 1 <= x <= db.N - 1]


def brute_force_min_pvalues(db, labels, matrix, mode=ONE_TAILED, *, exact=True,
                            limits=DEFAULT_LIMITS):
    """
    Per-permutation minimum p-value over all patterns of support in ``[1, N-1]``.

    Returns a list of ``Fraction`` (``exact=True``) or of float64 log
    p-values (``exact=False``).
    """
    N, n = db.N, labels.n
    columns = [[int(v) for v in col] for col in matrix.columns]
    mins = [Fraction(1) if exact else 0.0] * matrix.J
    for _, x, occ in _testable_patterns(db, limits):
        table = None if exact else pvalue_table(Margins(x, n, N), mode)
        for j, col in enumerate(columns):
            a = sum(col[t] for t in occ)
            p = exact_pvalue(a, x, n, N, mode) if exact else table.log_pvalue(a)
            if p < mins[j]:
                mins[j] = p
    return mins


def brute_force_fwer(min_pvalues, delta):
    """Fraction of entries at most ``delta`` (plain probabilities)."""
    values = list(min_pvalues)
    if not values or delta <= 0:
        return 0.0
    return sum(1 for p in values if p <= delta) / len(values)


def _largest_passing(values, alpha, below, le):
    J = len(values)
    best = None
    for v in sorted(set(values)):
        if not below(v):
            break
        if sum(1 for u in values if le(u, v)) / J <= alpha:
            best = v
        else:
            break
    return best


def brute_force_delta(db, labels, matrix, alpha=0.05, mode=ONE_TAILED, *, exact=False,
                      limits=DEFAULT_LIMITS):
    """
    Westfall-Young threshold from a full scan of every pattern.

    Returns ``(delta_star, min_pvalues)``.  With ``exact=False`` both are in
    the shared float64 arithmetic (``delta_star`` a float, minima as log
    p-values) and ties are resolved with the engine's tolerance; with
    ``exact=True`` they are ``Fraction`` values compared exactly.
    """
    mins = brute_force_min_pvalues(db, labels, matrix, mode, exact=exact, limits=limits)
    if exact:
        best = _largest_passing(mins, alpha, lambda v: v < 1, lambda u, v: u <= v)
        return (best if best is not None else Fraction(0)), mins
    best = _largest_passing(mins, alpha, lambda v: v < -LOG_TOL,
                            lambda u, v: u <= v + LOG_TOL)
    return (math.exp(best) if best is not None else 0.0), mins


def brute_force_significant(db, labels, delta, mode=ONE_TAILED, *, exact=False,
                            limits=DEFAULT_LIMITS):
    """
    ``{itemset: pvalue}`` of every pattern whose unpermuted p-value is at most ``delta``.

    ``delta`` is a ``Fraction`` when ``exact`` and a float otherwise.
    """
    N, n = db.N, labels.n
    y = [int(v) for v in labels.labels]
    found = {}
    if delta <= 0:
        return found
    log_delta = None if exact else math.log(delta)
    for itemset, x, occ in _testable_patterns(db, limits):
        a = sum(y[t] for t in occ)
        if exact:
            p = exact_pvalue(a, x, n, N, mode)
            if p <= delta:
                found[itemset] = p
        else:
            lp = pvalue_table(Margins(x, n, N), mode).log_pvalue(a)
            if lp <= log_delta + LOG_TOL:
                found[itemset] = math.exp(lp)
    return found


def brute_force_tarone(db, n, N, alpha=0.05, mode=ONE_TAILED, limits=DEFAULT_LIMITS):
    """
    Tarone threshold by scanning every attainable threshold exactly.

    Returns ``(delta, m, delta_k)`` as ``Fraction`` / int values.
    ``delta_k`` is the largest attainable threshold with
    ``delta_k * m(delta_k) <= alpha``; ``delta`` is the supremum of all
    ``delta`` with ``delta * m(delta) <= alpha``, which is ``alpha / m`` or
    the next larger attainable threshold when ``alpha / m`` reaches it.
    ``(0, 0, 0)`` when no threshold qualifies.
    """
    supports = [x for _, x, _ in _testable_patterns(db, limits)]
    psi = {x: exact_psi(x, n, N, mode) for x in range(1, N)}
    thresholds = sorted(set(psi.values()), reverse=True)
    a = Fraction(alpha)
    prev = None
    for t in thresholds:
        m = sum(1 for x in supports if psi[x] <= t)
        if t * m <= a:
            if prev is None:
                return (a / m if m else t), m, t
            return (min(a / m, prev) if m else prev), m, t
        prev = t
    return Fraction(0), 0, Fraction(0)
