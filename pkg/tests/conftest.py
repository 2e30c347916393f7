import numpy as np
import pytest

from wylight.miner import TransactionDatabase
from wylight.permutation import LabelVector, generate_permutations


def random_instance(rng, N_range=(8, 24), items_range=(3, 8), J_range=(10, 50), ratio=None):
    """A random tiny (db, labels, matrix) triple with integer item ids."""
    N = int(rng.integers(N_range[0], N_range[1] + 1))
    M = int(rng.integers(items_range[0], items_range[1] + 1))
    J = int(rng.integers(J_range[0], J_range[1] + 1))
    X = rng.random((N, M)) < rng.uniform(0.2, 0.8)
    db = TransactionDatabase.from_transactions([[int(i) for i in np.flatnonzero(r)] for r in X])
    if ratio is None:
        ratio = rng.choice([2, 4])
    n = max(1, N // ratio)
    y = np.zeros(N, dtype=np.uint8)
    y[rng.choice(N, n, replace=False)] = 1
    labels = LabelVector.from_sequence(y)
    matrix = generate_permutations(labels, J, seed=int(rng.integers(2**31)))
    return db, labels, matrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def abc_db():
    # T0 = {a, b}, T1 = {a}, T2 = {b} with a = 0, b = 1
    return TransactionDatabase.from_transactions([[0, 1], [0], [1]])
