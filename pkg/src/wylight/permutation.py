"""
Permuted class labels and the per-permutation minimum p-values.

The ``N x J`` label matrix is stored row-major with one byte per entry, so
row ``t`` holds transaction ``t``'s label under every permutation.  Cell
counts of a pattern are then a sum over the rows listed in its occurrence
list, with ``J`` as the contiguous inner dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLabels, MalformedMatrix
from .exact_test import LOG_TOL


@dataclass(frozen=True, eq=False)
class LabelVector:
    """
    Binary class labels encoded so that the minor class is 1.

    Attributes
    ----------
    labels : np.ndarray
        uint8 array of length ``N``.
    n : int
        Number of ones, ``1 <= n <= N - n``.
    flipped : bool
        True when the input had more ones than zeros and was inverted.
    """

    labels: np.ndarray
    n: int
    flipped: bool = False

    @property
    def N(self):
        return len(self.labels)

    @classmethod
    def from_sequence(cls, values):
        y = np.asarray(values, dtype=np.uint8)
        if y.ndim != 1 or np.any(y > 1):
            raise ValueError("labels must be a 1-d sequence of 0/1 values")
        ones = int(y.sum())
        flipped = 2 * ones > len(y)
        if flipped:
            y = 1 - y
            ones = len(y) - ones
        if ones == 0:
            raise DegenerateLabels("all labels are equal; there is no minor class")
        y.flags.writeable = False
        return cls(y, ones, flipped)

    def original(self):
        """Labels in the encoding they were supplied in."""
        return 1 - self.labels if self.flipped else self.labels


@dataclass(frozen=True, eq=False)
class PermutationMatrix:
    """
    ``J`` permutations of a label vector, stored as a ``(N, J)`` uint8 array.

    ``seed`` is the integer used to generate the matrix, or ``"external"``
    when it was loaded from a file.
    """

    data: np.ndarray
    seed: object = "external"

    @property
    def N(self):
        return self.data.shape[0]

    @property
    def J(self):
        return self.data.shape[1]

    @property
    def columns(self):
        """``(J, N)`` view: one permuted label vector per row."""
        return self.data.T

    @property
    def nbytes(self):
        return self.data.nbytes


def generate_permutations(y, J, seed=0, *, include_identity=False):
    """
    Draw ``J`` uniform shuffles of ``y.labels``.

    Output is deterministic for a fixed ``(y, J, seed)``.  With
    ``include_identity`` the first column is the unpermuted labels.
    """
    if J < 1:
        raise ValueError("need at least one permutation")
    rng = np.random.default_rng(seed)
    cols = np.broadcast_to(y.labels, (J, y.N))
    cols = rng.permuted(cols, axis=1)
    if include_identity:
        cols[0] = y.labels
    data = np.ascontiguousarray(cols.T)
    data.flags.writeable = False
    return PermutationMatrix(data, seed)


def load_permutations(text, labels=None, *, path=None):
    """
    Parse a matrix file: ``J`` lines of ``N`` space-separated 0/1 values.

    Each line is one permutation of the labels *as supplied* (before minor
    class encoding).  When ``labels`` is given, every line must contain the
    same number of ones as the original labels, and lines are inverted if
    the labels were flipped.  Without ``labels`` all lines must agree on
    their ones-count.

    Raises
    ------
    MalformedMatrix
        Empty input, ragged rows, non-binary values or a wrong ones-count.
    """
    rows = []
    width = None
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    for lineno, line in enumerate(lines, start=1):
        tokens = line.split()
        if not tokens:
            raise MalformedMatrix("empty row", path=path, line=lineno)
        if any(t not in ("0", "1") for t in tokens):
            raise MalformedMatrix("non-binary entry", path=path, line=lineno)
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise MalformedMatrix(
                f"row has {len(tokens)} entries, expected {width}", path=path, line=lineno)
        rows.append([t == "1" for t in tokens])
    if not rows:
        raise MalformedMatrix("no permutations in input", path=path)
    cols = np.array(rows, dtype=np.uint8)
    ones = cols.sum(axis=1)
    if labels is not None:
        if width != labels.N:
            raise MalformedMatrix(
                f"rows have {width} entries but there are {labels.N} labels", path=path)
        expected = labels.N - labels.n if labels.flipped else labels.n
    else:
        expected = int(ones[0])
    bad = np.flatnonzero(ones != expected)
    if len(bad):
        raise MalformedMatrix(
            f"row has {int(ones[bad[0]])} ones, expected {expected}",
            path=path, line=int(bad[0]) + 1)
    if labels is not None and labels.flipped:
        cols = 1 - cols
    data = np.ascontiguousarray(cols.T)
    data.flags.writeable = False
    return PermutationMatrix(data, "external")


def format_permutations(matrix, labels=None):
    """Inverse of ``load_permutations``."""
    cols = matrix.columns
    if labels is not None and labels.flipped:
        cols = 1 - cols
    return "".join(" ".join("1" if v else "0" for v in row) + "\n" for row in cols)


def cell_counts(occurrences, matrix):
    """
    Minor-class count of a pattern under every permutation.

    ``result[j]`` is the number of transactions in ``occurrences`` whose
    label is 1 in column ``j``.  Cost ``O(x J)``.
    """
    occ = np.asarray(occurrences, dtype=np.intp)
    if len(occ) == 0:
        return np.zeros(matrix.J, dtype=np.int64)
    return matrix.data[occ].sum(axis=0, dtype=np.int64)


@dataclass(eq=False)
class MinPValues:
    """
    Running minimum p-value per permutation, held as logarithms.

    Entries start at ``log(1) = 0`` and only ever decrease.
    """

    log_values: np.ndarray

    @classmethod
    def ones(cls, J):
        return cls(np.zeros(J, dtype=np.float64))

    @classmethod
    def from_pvalues(cls, pvalues):
        with np.errstate(divide="ignore"):
            return cls(np.log(np.asarray(pvalues, dtype=np.float64)))

    @property
    def values(self):
        return np.exp(self.log_values)

    @property
    def J(self):
        return len(self.log_values)

    def copy(self):
        return MinPValues(self.log_values.copy())


def update_minimums(mins, table, counts):
    """Fold one pattern's p-values into ``mins`` in place and return it."""
    np.minimum(mins.log_values, table.lookup(counts), out=mins.log_values)
    return mins


def count_at_most(log_values, log_delta):
    """Number of entries with ``p <= delta``, ties included."""
    return int(np.count_nonzero(log_values <= log_delta + LOG_TOL))


def log_empirical_fwer(log_values, log_delta):
    return count_at_most(log_values, log_delta) / len(log_values)


def empirical_fwer(mins, delta):
    """
    Fraction of permutations whose minimum p-value is at most ``delta``.

    Parameters
    ----------
    mins : MinPValues or sequence of float
        Per-permutation minimum p-values (plain probabilities when a
        sequence is given).
    delta : float
        Threshold in ``[0, 1]``.
    """
    if not isinstance(mins, MinPValues):
        mins = MinPValues.from_pvalues(mins)
    if delta <= 0.0:
        return 0.0
    return log_empirical_fwer(mins.log_values, math.log(delta))
