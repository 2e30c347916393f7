"""
Reference corrections: Bonferroni, Tarone/LAMP and FastWY.

Bonferroni divides ``alpha`` by the number of all patterns.  Tarone's
correction only counts the patterns that can still reach the threshold and
finds the largest ``delta`` with ``delta * m(delta) <= alpha``.  FastWY is the
older decremental Westfall-Young search: it lowers the minimum support from
``n`` one step at a time and stops a permutation as soon as its minimum
p-value is below the surrogate bound of the current support.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Exhausted
from .exact_test import (
    LOG_TOL, ONE_TAILED, Margins, check_mode, log_lt, psi_table, pvalue_table)
from .miner import enumerate_frequent
from .permutation import MinPValues, cell_counts, update_minimums
from .engine import _check_alpha, final_log_delta
from .testability import init_state, testable_mask, update_threshold


@dataclass(frozen=True, eq=False)
class SurrogatePsi:
    """
    Non-increasing lower bound of the minimum attainable p-value.

    Equal to psi on ``[0, n]`` and to ``psi(n) = 1 / C(N, n)`` beyond, so
    its testable region for any threshold is a single interval ``[s, N]``.
    """

    n: int
    N: int
    log_values: np.ndarray
    mode: str = ONE_TAILED

    @classmethod
    def build(cls, n, N, mode=ONE_TAILED):
        lv = psi_table(n, N, mode).log_values.copy()
        lv[n + 1:] = lv[n]
        lv.flags.writeable = False
        return cls(n, N, lv, mode)

    @property
    def values(self):
        return np.exp(self.log_values)

    def __getitem__(self, x):
        return math.exp(self.log_values[x])


def bonferroni_threshold(D, alpha):
    """``alpha / D`` for ``D`` hypotheses."""
    if D < 1:
        raise ValueError("Bonferroni needs at least one hypothesis")
    return alpha / D


def count_patterns(db, min_support=1):
    """Number of itemsets with support at least ``min_support``."""
    return enumerate_frequent(db, min_support, lambda event: None).visited


@dataclass(frozen=True)
class TaroneResult:
    """
    Tarone/LAMP threshold.

    ``m`` is the number of testable patterns at ``delta`` and ``delta_k``
    the last attainable threshold reached by the search.
    """

    delta: float
    m: int
    delta_k: float
    sigma: int
    exhausted: bool = False
    surrogate: bool = False


def _tarone_delta(log_dk, log_prev, m, alpha, first):
    # m is constant on [delta_k, delta_{k-1}), so the supremum of
    # {delta : delta * m(delta) <= alpha} there is alpha / m or, when that
    # reaches delta_{k-1}, delta_{k-1} itself (not attained).  The latter is
    # reported just below delta_{k-1}, outside the tie tolerance.
    if m == 0 and first:
        return math.exp(log_dk)
    if m > 0:
        log_lamp = math.log(alpha) - math.log(m)
        if log_lt(log_lamp, log_prev):
            return math.exp(max(log_lamp, log_dk))
    return math.exp(max(log_prev - 2 * LOG_TOL, log_dk))


def _over(log_delta, m, log_alpha):
    # delta * m > alpha, with exact ties such as delta = alpha / m passing
    return m > 0 and log_lt(log_alpha, log_delta + math.log(m))


def tarone_lamp_threshold(db, n, N, alpha=0.05, mode=ONE_TAILED, *, surrogate=False):
    """
    Tarone's improved Bonferroni threshold by one incremental mining pass.

    Parameters
    ----------
    db : TransactionDatabase
    n, N : int
        Minor-class size and number of transactions.
    alpha : float
    mode : {"one-tailed", "two-tailed"}
    surrogate : bool
        Count testable patterns with the single-interval lower bound
        ``SurrogatePsi`` instead of the exact regions.

    Returns
    -------
    TaroneResult
    """
    check_mode(mode)
    _check_alpha(alpha)
    if db.N != N:
        raise ValueError(f"database has {db.N} transactions, not {N}")
    if surrogate:
        return _tarone_surrogate(db, n, N, alpha, mode)
    log_alpha = math.log(alpha)
    psi = psi_table(n, N, mode)
    hist = np.zeros(N + 1, dtype=np.int64)
    state = init_state(psi)
    log_prev = 0.0
    m = 0
    exhausted = False

    def visit(event):
        nonlocal state, log_prev, m, exhausted
        hist[event.support] += 1
        mask = testable_mask(state, N)
        if mask[event.support]:
            m += 1
        while _over(state.log_delta, m, log_alpha):
            try:
                nxt = update_threshold(state)
            except Exhausted:
                exhausted = True
                return
            log_prev, state = state.log_delta, nxt
            m = int(hist[testable_mask(state, N)].sum())

    enumerate_frequent(db, lambda: N + 1 if exhausted else state.sigma_l, visit)
    if exhausted:
        return TaroneResult(0.0, 0, 0.0, N + 1, exhausted=True)
    return TaroneResult(
        _tarone_delta(state.log_delta, log_prev, m, alpha, state.k == 1), m,
        state.delta_k, state.sigma_l)


def _tarone_surrogate(db, n, N, alpha, mode):
    log_alpha = math.log(alpha)
    lv = SurrogatePsi.build(n, N, mode).log_values
    hist = np.zeros(N + 2, dtype=np.int64)
    sigma = 1
    m = 0
    exhausted = False

    def visit(event):
        nonlocal sigma, m, exhausted
        hist[event.support] += 1
        if event.support >= sigma:
            m += 1
        while _over(lv[sigma], m, log_alpha):
            # thresholds are strictly decreasing up to n and flat after
            if sigma >= n:
                exhausted = True
                return
            m -= int(hist[sigma])
            sigma += 1

    enumerate_frequent(db, lambda: N + 1 if exhausted else sigma, visit)
    if exhausted:
        return TaroneResult(0.0, 0, 0.0, N + 1, exhausted=True, surrogate=True)
    log_prev = float(lv[sigma - 1]) if sigma > 1 else 0.0
    delta = _tarone_delta(float(lv[sigma]), log_prev, m, alpha, sigma == 1)
    return TaroneResult(delta, m, math.exp(lv[sigma]), sigma, surrogate=True)


@dataclass(frozen=True, eq=False)
class FastWYResult:
    """
    Outcome of the decremental search.

    ``stop_support[j]`` is the support at which permutation ``j`` stopped;
    ``sigma_worst`` is their minimum.  All ``min_pvalues`` are exact.
    """

    delta_star: float
    min_pvalues: MinPValues
    sigma_worst: int
    stop_support: np.ndarray
    patterns_scored: int


def fastwy_threshold(db, labels, matrix, alpha=0.05, mode=ONE_TAILED):
    """
    Westfall-Young threshold by decremental support search.

    Starting at ``sigma = n``, every pattern of support ``>= sigma`` is
    scored and permutation ``j`` stops at the first ``sigma`` with
    ``p_min(j) <= surrogate(sigma)``; nothing of lower support can beat that
    minimum.  Patterns are mined in support batches shared by all
    permutations; each permutation's samples and stopping support are the
    same as if it were searched on its own.

    Returns
    -------
    FastWYResult
    """
    check_mode(mode)
    _check_alpha(alpha)
    N, n, J = db.N, labels.n, matrix.J
    if labels.N != N or matrix.N != N:
        raise ValueError("database, labels and matrix disagree on N")
    bound = SurrogatePsi.build(n, N, mode).log_values
    mins = MinPValues.ones(J)
    stop = np.full(J, -1, dtype=np.int64)
    scored = 0
    top = N + 1        # supports >= top are already scored
    sigma = n
    step = 1
    while True:
        floor = max(1, sigma - step + 1)
        batch = {}

        def collect(event, top=top):
            if event.support < top:
                batch.setdefault(min(event.support, n), []).append(event.occurrences)

        enumerate_frequent(db, floor, collect)
        for s in range(sigma, floor - 1, -1):
            for occ in batch.get(s, ()):
                table = pvalue_table(Margins(len(occ), n, N), mode)
                update_minimums(mins, table, cell_counts(occ, matrix))
                scored += 1
            done = (stop < 0) & (mins.log_values <= bound[s] + LOG_TOL)
            stop[done] = s
            if (stop >= 0).all():
                break
        if (stop >= 0).all() or s <= 1:
            break
        top, sigma, step = floor, floor - 1, step * 2
    stop[stop < 0] = 0  # only support-0 itemsets remain; psi_hat(0) = 1
    log_star = final_log_delta(mins.log_values, 0.0, alpha)
    return FastWYResult(
        math.exp(log_star), mins, int(stop.min()), stop, scored)
