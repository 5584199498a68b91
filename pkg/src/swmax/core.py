"""Stream, window, and oracle primitives shared by all algorithms.

Streams are 1-based and dense in time: the t-th arrival is item t, and the
item id doubles as its timestep. A window of size W ending at ``end`` covers
timesteps ``max(1, end - W + 1) .. end``.

Objectives are accessed through a two-method oracle (``eval``/``marginal``).
``CountingOracle`` wraps any oracle and counts invocations, which is the
cost metric every benchmark reports; a marginal query counts as a single
call because both shipped objectives compute gains directly rather than by
two evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence


@dataclass(frozen=True)
class Item:
    """A stream element: arrival timestep plus payload position in the store."""

    t: int
    payload_id: int

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"timestep must be positive, got {self.t}")


@dataclass(frozen=True)
class Window:
    """The ``size`` most recent timesteps ending at ``end``, inclusive."""

    end: int
    size: int

    def __post_init__(self):
        if self.end < 1:
            raise ValueError(f"window end must be positive, got {self.end}")
        if self.size < 1:
            raise ValueError(f"window size must be positive, got {self.size}")

    @property
    def start(self) -> int:
        return max(1, self.end - self.size + 1)


@dataclass(frozen=True)
class Bounds:
    """Optimum-value range assumed by the threshold-grid algorithms.

    ``opt_upper`` bounds the best achievable utility of any feasible set
    (every window included). Grids additionally assume the optimum is at
    least 1; callers must arrange that (it holds for coverage whenever a
    window contains a nonempty set, and estimated bounds are clamped to 1).
    """

    opt_upper: float
    epsilon: float

    def __post_init__(self):
        if not self.opt_upper >= 1.0:
            raise ValueError(f"upper bound must be >= 1, got {self.opt_upper}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


class SubmodularOracle(Protocol):
    """Set-function access: ``eval`` a set of item ids, or the gain of adding one."""

    def eval(self, ids: Sequence[int]) -> float: ...

    def marginal(self, item_id: int, ids: Sequence[int]) -> float: ...


class CountingOracle:
    """Forwards to ``inner`` and counts calls; a marginal counts as one call."""

    def __init__(self, inner: SubmodularOracle):
        self.inner = inner
        self.calls = 0

    def eval(self, ids: Sequence[int]) -> float:
        self.calls += 1
        return self.inner.eval(ids)

    def marginal(self, item_id: int, ids: Sequence[int]) -> float:
        self.calls += 1
        return self.inner.marginal(item_id, ids)

    def reset(self) -> None:
        self.calls = 0


def window_members(window: Window, history) -> list[int]:
    """Item ids covered by ``window``, ascending by timestep.

    ``history`` is the arrived stream so far: either the arrival count or
    any sized sequence of items.
    """
    n = history if isinstance(history, int) else len(history)
    if window.end > n:
        raise ValueError(f"window ends at {window.end} but only {n} items arrived")
    return list(range(window.start, window.end + 1))


class StreamAlgorithm(Protocol):
    """One-pass algorithm: feed items, query the current (solution, value)."""

    def step(self, item: Item) -> None: ...

    def query(self) -> tuple[list[int], float]: ...

    def peak_items(self) -> int: ...


class BestSoFar:
    """Makes a streaming algorithm's reported value non-decreasing.

    After every step the inner solution is queried, and queries return the
    best solution observed over any prefix. This certifies prefix-monotone
    behaviour for inner algorithms plugged into the window reduction. It is
    not meant for sliding-window algorithms themselves, whose value
    legitimately drops when items expire.
    """

    def __init__(self, inner):
        self.inner = inner
        self._best: tuple[list[int], float] = ([], 0.0)
        self._peak = 0

    def step(self, item: Item) -> None:
        self.inner.step(item)
        sol, val = self.inner.query()
        if val > self._best[1]:
            self._best = (list(sol), val)
        self._peak = max(self._peak, self.retained_count())

    def query(self) -> tuple[list[int], float]:
        sol, val = self._best
        return list(sol), val

    def retained_count(self) -> int:
        counter = getattr(self.inner, "retained_count", None)
        base = counter() if counter is not None else self.inner.peak_items()
        return base + len(self._best[0])

    def peak_items(self) -> int:
        return self._peak


def monotone_wrap(alg) -> BestSoFar:
    """Wrap ``alg`` so queries report the best solution over all prefixes."""
    return BestSoFar(alg)
