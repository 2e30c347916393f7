"""
Westfall-Young light: one enumeration pass for all permutations.

Patterns are mined once with a minimum support tied to the current
threshold ``delta_k``.  Each testable pattern updates the minimum p-value of
every permutation; whenever the empirical FWER at ``delta_k`` exceeds
``alpha`` the threshold steps down, which shrinks the testable region and
raises the miner's floor for the rest of the walk.  When the walk ends the
optimal threshold lies in ``[delta_k, delta_{k-1})`` and all minimum
p-values below ``delta_{k-1}`` are exact, which is all the final rule needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Exhausted
from .exact_test import (
    LOG_TOL, ONE_TAILED, Margins, check_mode, log_le, psi_table, pvalue_table)
from .miner import enumerate_frequent
from .permutation import MinPValues, cell_counts, count_at_most, update_minimums
from .testability import init_state, is_testable, sigma_for_delta, update_threshold


@dataclass(frozen=True, eq=False)
class CalibrationResult:
    """
    Outcome of ``compute_threshold``.

    ``min_pvalues`` is exact for every entry below ``delta_k_minus_1``;
    entries at or above it are upper bounds only.  ``exhausted`` is set
    when even the smallest attainable threshold failed the FWER condition,
    in which case ``delta_star`` is 0.
    """

    delta_star: float
    log_delta_star: float
    delta_k_final: float
    delta_k_minus_1: float
    k_star: int
    sigma_l_final: int
    sigma_u_final: int
    min_pvalues: MinPValues
    fwer_at_delta_star: float
    patterns_visited: int
    testable_visited: int
    alpha: float
    J: int
    n: int
    N: int
    mode: str
    flipped: bool
    exhausted: bool = False


@dataclass(frozen=True)
class SignificantPattern:
    itemset: tuple
    support: int
    a: int
    pvalue: float
    log_pvalue: float


def _check_alpha(alpha):
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")


def final_log_delta(log_mins, log_upper, alpha):
    """
    Log of the largest sample value ``p < upper`` with ``FWER(p) <= alpha``.

    Returns ``-inf`` (threshold 0) when no sample qualifies.
    """
    s = np.sort(np.asarray(log_mins, dtype=np.float64))
    J = len(s)
    cand = s[s < log_upper - LOG_TOL]
    if len(cand) == 0:
        return -math.inf
    counts = np.searchsorted(s, cand + LOG_TOL, side="right")
    ok = counts / J <= alpha
    # FWER is non-decreasing in delta, so the passing candidates are a prefix.
    n_ok = int(np.argmin(ok)) if not ok.all() else len(ok)
    return float(cand[n_ok - 1]) if n_ok else -math.inf


def final_delta(mins, delta_k, delta_k_minus_1, alpha):
    """
    Resolve the optimal threshold inside ``[delta_k, delta_k_minus_1)``.

    The empirical FWER only jumps at sample values, so the answer is the
    largest sample below ``delta_k_minus_1`` at which the FWER is still at
    most ``alpha``, or 0 when there is none.

    Parameters
    ----------
    mins : MinPValues or sequence of float
    delta_k, delta_k_minus_1 : float
        Bracketing thresholds; ``delta_k`` only documents the bracket.
    alpha : float
    """
    if not isinstance(mins, MinPValues):
        mins = MinPValues.from_pvalues(mins)
    upper = math.log(delta_k_minus_1) if delta_k_minus_1 > 0 else -math.inf
    return math.exp(final_log_delta(mins.log_values, upper, alpha))


def compute_threshold(db, labels, matrix, alpha=0.05, mode=ONE_TAILED):
    """
    Corrected significance threshold by Westfall-Young permutation.

    Parameters
    ----------
    db : TransactionDatabase
    labels : LabelVector
    matrix : PermutationMatrix
        Permutations of ``labels`` over the same ``N`` transactions.
    alpha : float
        Target family-wise error rate.
    mode : {"one-tailed", "two-tailed"}

    Returns
    -------
    CalibrationResult
    """
    check_mode(mode)
    _check_alpha(alpha)
    N, n = db.N, labels.n
    if labels.N != N or matrix.N != N:
        raise ValueError(
            f"size mismatch: {N} transactions, {labels.N} labels, {matrix.N} matrix rows")
    J = matrix.J
    psi = psi_table(n, N, mode)
    state = init_state(psi)
    log_prev = 0.0
    mins = MinPValues.ones(J)
    log_mins = mins.log_values
    stopped = False
    testable = 0

    def floor():
        return N + 1 if stopped else state.sigma_l

    def visit(event):
        nonlocal state, log_prev, stopped, testable
        x = event.support
        if not is_testable(x, state, N):
            return
        testable += 1
        table = pvalue_table(Margins(x, n, N), mode)
        update_minimums(mins, table, cell_counts(event.occurrences, matrix))
        while count_at_most(log_mins, state.log_delta) / J > alpha:
            try:
                nxt = update_threshold(state)
            except Exhausted:
                stopped = True
                return
            log_prev = state.log_delta
            state = nxt

    summary = enumerate_frequent(db, floor, visit)

    if stopped:
        log_star = -math.inf
    else:
        log_star = final_log_delta(log_mins, log_prev, alpha)
    delta_star = math.exp(log_star)
    fwer = count_at_most(log_mins, log_star) / J if delta_star > 0 else 0.0
    return CalibrationResult(
        delta_star=delta_star,
        log_delta_star=log_star,
        delta_k_final=state.delta_k,
        delta_k_minus_1=math.exp(log_prev),
        k_star=state.k,
        sigma_l_final=state.sigma_l,
        sigma_u_final=state.sigma_u,
        min_pvalues=mins,
        fwer_at_delta_star=fwer,
        patterns_visited=summary.visited,
        testable_visited=testable,
        alpha=alpha,
        J=J,
        n=n,
        N=N,
        mode=mode,
        flipped=labels.flipped,
        exhausted=stopped,
    )


def extract_significant(db, labels, result, mode=None):
    """
    Patterns whose unpermuted p-value is at most ``result.delta_star``.

    Re-mines with the constant floor ``min{x : psi(x) <= delta_star}``;
    patterns outside that region cannot reach the threshold.  Output is
    sorted by p-value, then by itemset.
    """
    if mode is not None and mode != result.mode:
        raise ValueError(f"result was calibrated in {result.mode} mode, not {mode}")
    if labels.N != db.N or labels.n != result.n or db.N != result.N:
        raise ValueError("database/labels do not match the calibration result")
    if result.delta_star <= 0.0:
        return []
    mode = result.mode
    N, n = db.N, labels.n
    log_star = result.log_delta_star
    psi = psi_table(n, N, mode)
    floor = sigma_for_delta(psi, log_star)
    if floor is None:
        return []
    y = labels.labels
    found = []

    def visit(event):
        x = event.support
        if not log_le(psi.log_values[x], log_star):
            return
        table = pvalue_table(Margins(x, n, N), mode)
        a = int(y[event.occurrences].sum())
        lp = table.log_pvalue(a)
        if log_le(lp, log_star):
            found.append(SignificantPattern(event.itemset, x, a, math.exp(lp), lp))

    enumerate_frequent(db, floor, visit)
    found.sort(key=lambda p: (p.log_pvalue, p.itemset))
    return found
