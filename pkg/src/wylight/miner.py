"""
Transaction databases and depth-first frequent itemset enumeration.

The database is kept in vertical form: one sorted array of transaction
indices per item.  Enumeration walks the itemset tree Eclat/LCM style,
extending a prefix only with items that come later in a fixed order and
intersecting occurrence lists on the way down.  The minimum support is
read from a callable before every node, so a caller may raise it while
the walk is in progress and the remaining subtrees are pruned in place.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedInput
from .permutation import LabelVector


@dataclass(frozen=True, eq=False)
class TransactionDatabase:
    """
    ``N`` transactions over an item alphabet, stored by item.

    ``items`` is sorted ascending and ``occurrences[i]`` is the sorted
    index array of the transactions containing ``items[i]``.
    """

    N: int
    items: tuple
    occurrences: tuple

    @classmethod
    def from_transactions(cls, transactions):
        tids = {}
        N = 0
        for t, transaction in enumerate(transactions):
            N = t + 1
            for item in set(transaction):
                tids.setdefault(item, []).append(t)
        items = tuple(sorted(tids))
        occ = []
        for item in items:
            arr = np.array(tids[item], dtype=np.intp)
            arr.flags.writeable = False
            occ.append(arr)
        return cls(N, items, tuple(occ))

    def occurrence(self, item):
        return self.occurrences[self.items.index(item)]

    def support(self, item):
        return len(self.occurrence(item))

    def transactions(self):
        """Rebuild the horizontal form (list of sorted item lists)."""
        rows = [[] for _ in range(self.N)]
        for item, occ in zip(self.items, self.occurrences):
            for t in occ:
                rows[t].append(item)
        return rows


@dataclass(frozen=True, eq=False)
class PatternEvent:
    """One enumerated itemset: ascending items, support and occurrences."""

    itemset: tuple
    support: int
    occurrences: np.ndarray


@dataclass
class EnumerationSummary:
    visited: int = 0
    max_depth: int = 0
    aborted: bool = False


def parse_fimi(text, *, path=None):
    """
    Parse FIMI transactions: one transaction per line, space-separated ids.

    Blank lines are empty transactions and repeated items in a line count
    once.  A final newline is optional.
    """
    transactions = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        row = set()
        for token in line.split():
            try:
                item = int(token)
            except ValueError:
                raise MalformedInput(f"non-integer item {token!r}", path=path, line=lineno) from None
            if item < 0:
                raise MalformedInput(f"negative item id {item}", path=path, line=lineno)
            row.add(item)
        transactions.append(row)
    return TransactionDatabase.from_transactions(transactions)


def format_fimi(db):
    return "".join(" ".join(map(str, row)) + "\n" for row in db.transactions())


def parse_labels(text, N, *, path=None):
    """
    Parse one 0/1 label per line for ``N`` transactions.

    The result is encoded so that the minor class is 1 (see
    ``LabelVector.flipped``).  Trailing blank lines are ignored.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    values = []
    for lineno, line in enumerate(lines, start=1):
        token = line.strip()
        if token not in ("0", "1"):
            raise MalformedInput(f"label {token!r} is not 0 or 1", path=path, line=lineno)
        values.append(int(token))
    if len(values) != N:
        raise MalformedInput(f"expected {N} labels, found {len(values)}", path=path)
    return LabelVector.from_sequence(values)


def enumerate_frequent(db, support_floor, visitor):
    """
    Depth-first walk over all itemsets whose support meets the floor.

    Items are ordered by ascending support (ties by id) and each node is
    extended with later items only, so every itemset is reached through
    exactly one path.

    Parameters
    ----------
    db : TransactionDatabase
    support_floor : int or callable
        Minimum support.  A callable is queried before each node is
        visited and before its children are built; its value may only
        grow.  A value above ``db.N`` stops the walk.
    visitor : callable
        Called with a ``PatternEvent`` for every itemset delivered.

    Returns
    -------
    EnumerationSummary
    """
    read = support_floor if callable(support_floor) else (lambda: support_floor)

    def floor():
        return max(1, read())

    summary = EnumerationSummary()
    order = sorted(
        (i for i in range(len(db.items)) if len(db.occurrences[i])),
        key=lambda i: (len(db.occurrences[i]), db.items[i]))
    root = [(db.items[i], db.occurrences[i]) for i in order]

    def expand(prefix, candidates, depth):
        summary.max_depth = max(summary.max_depth, depth)
        for pos, (item, occ) in enumerate(candidates):
            f = floor()
            if f > db.N:
                summary.aborted = True
                return
            if len(occ) < f:
                continue
            itemset = prefix + (item,)
            visitor(PatternEvent(tuple(sorted(itemset)), len(occ), occ))
            summary.visited += 1
            f = floor()
            children = []
            for other, other_occ in candidates[pos + 1:]:
                if len(other_occ) < f:
                    continue
                joint = np.intersect1d(occ, other_occ, assume_unique=True)
                assert len(joint) <= len(occ)
                if len(joint) >= f:
                    children.append((other, joint))
            if children:
                expand(itemset, children, depth + 1)

    expand((), root, 1)
    return summary


def frequent_itemsets(db, min_support):
    """Collect every ``PatternEvent`` with support ``>= min_support``."""
    events = []
    enumerate_frequent(db, min_support, events.append)
    return events
