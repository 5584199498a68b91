import numpy as np
import pytest

from swmax.ingest import DatasetStore


def set_store(*payloads) -> DatasetStore:
    """Build a set-stream store from literal element collections."""
    return DatasetStore("sets", sets=[tuple(p) for p in payloads])


def vec_store(rows) -> DatasetStore:
    return DatasetStore("dense", vectors=np.asarray(rows, dtype=float))


class UnionRecount:
    """Independent coverage oracle: plain frozenset unions, no bit tricks."""

    def __init__(self, store):
        self._sets = {t: frozenset(store.payload(t)) for t in range(1, len(store) + 1)}

    def eval(self, ids):
        union = frozenset().union(*(self._sets[i] for i in ids)) if ids else frozenset()
        return float(len(union))

    def marginal(self, item_id, ids):
        return self.eval(list(ids) + [item_id]) - self.eval(ids)


@pytest.fixture
def abc_store():
    """Three sets A={1,2,3}, B={4,5}, C={3,4}: greedy picks A then B."""
    return set_store((1, 2, 3), (4, 5), (3, 4))
