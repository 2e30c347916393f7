"""
Testable-support regions and the decreasing threshold sequence.

The minimum attainable p-value is symmetric around ``N/2`` and, on
``[0, N/2]``, falls until ``x = n`` and rises afterwards.  The supports with
``psi(x) <= delta`` therefore form ``[lo, hi]`` plus its mirror image, and
lowering ``delta`` to the next attainable value only ever removes an end of
that interval.  A state stores both ends; one update is O(1) amortised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Exhausted
from .exact_test import LOG_TOL, PsiTable, log_le


@dataclass(frozen=True)
class TestabilityState:
    """
    One step ``k`` of the threshold sequence.

    Attributes
    ----------
    k : int
        Index of the threshold, starting at 1.
    log_delta : float
        ``log(delta_k)``, the largest psi value still inside the region.
    sigma_l, sigma_u : int
        Ends of the region on ``[1, N/2]``; ``sigma_l`` doubles as the
        minimum support handed to the miner.
    flag : int
        1 when ``delta_k`` sits on the left end, 0 when on the right end.
    """

    __test__ = False  # keep pytest from collecting this class

    k: int
    log_delta: float
    sigma_l: int
    sigma_u: int
    flag: int
    psi: PsiTable = field(repr=False, compare=False)

    @property
    def delta_k(self):
        return math.exp(self.log_delta)

    @property
    def N(self):
        return self.psi.N


def init_state(psi):
    """
    First non-trivial threshold: every support in ``[1, N-1]`` is testable.

    Normally ``delta_1 = psi(1) = n/N``.  For very small ``n`` relative to
    ``N`` the right end ``psi(N//2)`` can be larger than ``psi(1)``; the
    threshold is then the larger of the two so that the region still holds
    exactly the supports with ``psi(x) <= delta_1``.
    """
    if psi.N < 2:
        raise ValueError("need N >= 2 for a non-trivial threshold")
    lo, hi = 1, psi.N // 2
    lv = psi.log_values
    if log_le(lv[hi], lv[lo]):
        return TestabilityState(1, float(lv[lo]), lo, hi, 1, psi)
    return TestabilityState(1, float(lv[hi]), lo, hi, 0, psi)


def update_threshold(state):
    """
    Step to the next smaller attainable threshold.

    Drops the region end(s) whose psi value equals the current threshold
    and takes the larger of the two new ends.  Without ties this moves
    exactly one end, as chosen by ``flag``.  Ties between the two branches
    do occur (``n=2, N=11``: ``psi(1) == psi(5)``), in which case both ends
    move so that the sequence stays strictly decreasing.

    Raises
    ------
    Exhausted
        When the region would become empty; no smaller threshold exists.
    """
    lv = state.psi.log_values
    d = state.log_delta
    lo, hi = state.sigma_l, state.sigma_u
    while lo <= hi and log_le(d, lv[lo]):
        lo += 1
    while hi >= lo and log_le(d, lv[hi]):
        hi -= 1
    if lo > hi:
        raise Exhausted(f"no threshold below {math.exp(d):.6g}")
    if log_le(lv[hi], lv[lo]):
        return TestabilityState(state.k + 1, float(lv[lo]), lo, hi, 1, state.psi)
    return TestabilityState(state.k + 1, float(lv[hi]), lo, hi, 0, state.psi)


def is_testable(x, state, N=None):
    """True iff support ``x`` lies in the state's region."""
    if N is None:
        N = state.psi.N
    lo, hi = state.sigma_l, state.sigma_u
    return lo <= x <= hi or N - hi <= x <= N - lo


def testable_mask(state, N=None):
    """Boolean mask over supports ``0..N`` of the region."""
    if N is None:
        N = state.psi.N
    x = np.arange(N + 1)
    lo, hi = state.sigma_l, state.sigma_u
    return ((x >= lo) & (x <= hi)) | ((x >= N - hi) & (x <= N - lo))


def distinct_log_thresholds(psi):
    """Distinct psi values over supports ``[1, N-1]``, largest first (log)."""
    vals = np.sort(psi.log_values[1:psi.N // 2 + 1])[::-1]
    out = []
    for v in vals:
        if not out or v < out[-1] - LOG_TOL:
            out.append(float(v))
    return out


def distinct_thresholds(psi):
    """
    The attainable thresholds ``delta_1 > delta_2 > ...`` as probabilities.

    >>> from wylight.exact_test import psi_table
    >>> [round(d, 6) for d in distinct_thresholds(psi_table(2, 6))]
    [0.333333, 0.2, 0.066667]
    """
    return [math.exp(v) for v in distinct_log_thresholds(psi)]


def iter_states(psi):
    """Yield every state from ``init_state`` until the sequence runs out."""
    state = init_state(psi)
    while True:
        yield state
        try:
            state = update_threshold(state)
        except Exhausted:
            return


def sigma_for_delta(psi, log_delta):
    """Smallest support ``x >= 1`` with ``psi(x) <= delta``, or None."""
    for x in range(1, psi.N // 2 + 1):
        if log_le(psi.log_values[x], log_delta):
            return x
    return None
