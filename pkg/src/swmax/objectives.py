"""Monotone submodular objectives: set coverage and kernel active-set log-det.

Coverage scores a collection of integer sets by the size of their union.
The active-set objective (informative vector machine, IVM) scores a set S
of vectors by ``0.5 * log det(I + K_S / sigma**2)`` under the squared
exponential kernel ``K(x, y) = exp(-||x - y||^2 / h**2)``. Natural log is
used throughout; the base only rescales utilities uniformly, but upper
bounds must be computed in the same base, so one is fixed globally.

Log-det values come from a Cholesky factor of ``I + K_S / sigma**2`` that
grows one row per accepted element, so a marginal gain costs a single
triangular solve instead of a fresh factorization. Factors are only ever
extended; whenever a buffer shrinks (expiry, greedy repair) the factor is
rebuilt from scratch, since downdating is numerically risky and shrinks are
rare relative to marginal queries.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Schur complements of I + K/sigma^2 are >= 1 in exact arithmetic; a pivot
# at or below this threshold means rounding has destroyed the factor.
DEGENERATE_PIVOT = 1e-12


class NumericDegeneracyError(RuntimeError):
    """A Cholesky pivot collapsed; the kernel matrix is numerically singular."""


class StaleExtensionError(RuntimeError):
    """An extension was applied to a factor that changed since it was probed."""


@dataclass(frozen=True)
class KernelParams:
    """Squared-exponential kernel bandwidth ``h`` and noise scale ``sigma``."""

    h: float = 0.75
    sigma: float = 1.0

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"kernel bandwidth must be positive, got {self.h}")
        if not self.sigma > 0:
            raise ValueError(f"noise scale must be positive, got {self.sigma}")


def coverage_value(payloads: Iterable[Iterable[int]]) -> int:
    """Size of the union of the given element sets."""
    union: set[int] = set()
    for p in payloads:
        union.update(p)
    return len(union)


def se_kernel(x, y, params: KernelParams) -> float:
    """exp(-||x - y||^2 / h^2); symmetric, in (0, 1], and 1 iff x == y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    d2 = float(np.sum((x - y) ** 2))
    return math.exp(-d2 / params.h**2)


@dataclass(frozen=True)
class CholExtension:
    """One probed element, ready to be appended to the factor it was probed on."""

    item_id: int
    x: np.ndarray
    w: np.ndarray
    sqrt_d: float
    gain: float
    degenerate: bool
    base_n: int
    base_version: int


class CholState:
    """Lower-triangular L with ``L @ L.T == I + K_S / sigma**2`` for members S.

    The stored value ``sum(log diag L)`` equals ``0.5 * log det`` of the
    factored matrix. Members enter in insertion order; a degenerate probe
    (pivot <= DEGENERATE_PIVOT) may still be recorded as a member, but the
    factor itself is left untouched so its invariant survives.
    """

    def __init__(self, params: KernelParams):
        self.params = params
        self.ids: list[int] = []
        self.skipped_ids: list[int] = []
        self._X: list[np.ndarray] = []
        self._L = np.zeros((0, 0))
        self._logdiag: list[float] = []
        self._version = 0

    @property
    def n(self) -> int:
        """Order of the factor (degenerate members excluded)."""
        return len(self.ids)

    @property
    def value(self) -> float:
        """0.5 * log det(I + K_S / sigma**2)."""
        return math.fsum(self._logdiag)

    @property
    def version(self) -> int:
        return self._version

    @property
    def L(self) -> np.ndarray:
        return self._L.copy()

    @classmethod
    def from_vectors(cls, ids: Sequence[int], X, params: KernelParams) -> "CholState":
        """Factor I + K/sigma^2 for the given points in one shot."""
        state = cls(params)
        X = np.asarray(X, dtype=float)
        n = X.shape[0]
        if n == 0:
            return state
        diff = X[:, None, :] - X[None, :, :]
        K = np.exp(-np.sum(diff**2, axis=2) / params.h**2)
        A = np.eye(n) + K / params.sigma**2
        try:
            L = np.linalg.cholesky(A)
        except np.linalg.LinAlgError as exc:
            raise NumericDegeneracyError(f"factorization failed: {exc}") from exc
        if float(np.min(np.diag(L)) ** 2) <= DEGENERATE_PIVOT:
            raise NumericDegeneracyError("factorization pivot collapsed")
        state.ids = list(ids)
        state._X = [X[i].copy() for i in range(n)]
        state._L = L
        state._logdiag = [math.log(L[i, i]) for i in range(n)]
        return state

    def copy(self) -> "CholState":
        dup = CholState(self.params)
        dup.ids = list(self.ids)
        dup.skipped_ids = list(self.skipped_ids)
        dup._X = list(self._X)
        dup._L = self._L.copy()
        dup._logdiag = list(self._logdiag)
        dup._version = self._version
        return dup

    def probe(self, item_id: int, x) -> tuple[float, CholExtension]:
        """Marginal log-det gain of adding ``x``, plus the data to append it.

        Solves ``L w = c`` with ``c_j = K(x, s_j) / sigma^2`` and takes the
        Schur complement ``d = 1 + K(x, x)/sigma^2 - w.w``; the gain is
        ``0.5 * log d``. A collapsed pivot reports gain 0 with the extension
        flagged degenerate.
        """
        x = np.asarray(x, dtype=float)
        inv_s2 = self.params.sigma**-2
        if self.n:
            Xm = np.asarray(self._X)
            if x.shape != Xm[0].shape:
                raise ValueError(f"dimension mismatch: {x.shape} vs {Xm[0].shape}")
            c = inv_s2 * np.exp(-np.sum((Xm - x) ** 2, axis=1) / self.params.h**2)
            w = np.linalg.solve(self._L, c)
        else:
            w = np.zeros(0)
        d = 1.0 + inv_s2 * se_kernel(x, x, self.params) - float(w @ w)
        if d <= DEGENERATE_PIVOT:
            ext = CholExtension(item_id, x, w, 0.0, 0.0, True, self.n, self._version)
            return 0.0, ext
        gain = 0.5 * math.log(d)
        ext = CholExtension(item_id, x, w, math.sqrt(d), gain, False, self.n, self._version)
        return gain, ext

    def extend(self, ext: CholExtension) -> "CholState":
        """Append a probed element; the extension must match this exact state."""
        if ext.base_version != self._version or ext.base_n != self.n:
            raise StaleExtensionError(
                f"extension built for version {ext.base_version} (n={ext.base_n}), "
                f"state is at version {self._version} (n={self.n})"
            )
        self._version += 1
        if ext.degenerate:
            self.skipped_ids.append(ext.item_id)
            return self
        n = self.n
        grown = np.zeros((n + 1, n + 1))
        grown[:n, :n] = self._L
        grown[n, :n] = ext.w
        grown[n, n] = ext.sqrt_d
        self._L = grown
        self.ids.append(ext.item_id)
        self._X.append(ext.x)
        self._logdiag.append(math.log(ext.sqrt_d))
        return self


def ivm_value(X, params: KernelParams) -> float:
    """0.5 * log det(I + K/sigma^2) for the given points, freshly factorized."""
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return 0.0
    return CholState.from_vectors(range(1, X.shape[0] + 1), X, params).value


def ivm_marginal(item_id: int, x, chol: CholState) -> tuple[float, CholExtension]:
    """Gain of adding point ``x`` to the set factored by ``chol``."""
    return chol.probe(item_id, x)


def chol_extend(chol: CholState, ext: CholExtension) -> CholState:
    """Append the probed element to the factor it was probed on."""
    return chol.extend(ext)


class CoverageOracle:
    """Union-size objective over a set-stream store.

    Universe ids are arbitrary non-negative integers; they are remapped to
    bit positions once at construction so evaluation is an or/popcount.
    """

    def __init__(self, store):
        if store.kind != "sets":
            raise ValueError(f"coverage needs a set stream, got {store.kind!r}")
        bit_of: dict[int, int] = {}
        masks: dict[int, int] = {}
        for t in range(1, len(store) + 1):
            m = 0
            for el in store.payload(t):
                b = bit_of.setdefault(el, len(bit_of))
                m |= 1 << b
            masks[t] = m
        self._masks = masks

    def _union(self, ids: Sequence[int]) -> int:
        acc = 0
        masks = self._masks
        try:
            for i in ids:
                acc |= masks[i]
        except KeyError as exc:
            raise ValueError(f"unknown item id {exc.args[0]}") from exc
        return acc

    def eval(self, ids: Sequence[int]) -> float:
        return float(self._union(ids).bit_count())

    def marginal(self, item_id: int, ids: Sequence[int]) -> float:
        mask = self._masks.get(item_id)
        if mask is None:
            raise ValueError(f"unknown item id {item_id}")
        return float((mask & ~self._union(ids)).bit_count())


class IVMOracle:
    """Log-det objective over a dense-vector store, with factor reuse.

    One Cholesky state is kept per distinct evaluation set (keyed by the id
    tuple, LRU-bounded). Growth by one element extends the cached factor of
    the prefix; any other shape  (first sight, shrink, reorder) is built
    from scratch.
    """

    def __init__(self, store, params: KernelParams, cache_size: int = 4096):
        if store.kind != "dense":
            raise ValueError(f"log-det objective needs dense vectors, got {store.kind!r}")
        self.params = params
        self._store = store
        self._n = len(store)
        self._cache: OrderedDict[tuple[int, ...], CholState] = OrderedDict()
        self._cache_size = cache_size

    def _vec(self, item_id: int) -> np.ndarray:
        if not 1 <= item_id <= self._n:
            raise ValueError(f"unknown item id {item_id}")
        return self._store.payload(item_id)

    def _state(self, key: tuple[int, ...]) -> CholState:
        cached = self._cache.get(key)
        if cached is not None:
            self._cache.move_to_end(key)
            return cached
        state = None
        for cut in range(len(key) - 1, 0, -1):
            base = self._cache.get(key[:cut])
            if base is not None:
                state = base.copy()
                for item_id in key[cut:]:
                    _, ext = state.probe(item_id, self._vec(item_id))
                    state.extend(ext)
                break
        if state is None:
            X = np.asarray([self._vec(i) for i in key])
            state = CholState.from_vectors(key, X, self.params)
        self._cache[key] = state
        if len(self._cache) > self._cache_size:
            self._cache.popitem(last=False)
        return state

    def eval(self, ids: Sequence[int]) -> float:
        if not ids:
            return 0.0
        return self._state(tuple(ids)).value

    def marginal(self, item_id: int, ids: Sequence[int]) -> float:
        gain, _ = self._state(tuple(ids)).probe(item_id, self._vec(item_id))
        return gain


def estimate_upper_bound(objective: str, store, k: int, params: KernelParams | None = None) -> float:
    """Prescanned upper bound on the best utility of any set of size <= k.

    Coverage: ``k * max |S_i|`` (no k sets can cover more). Log-det: by
    Hadamard's inequality ``det(A) <= prod A_ii`` for positive-definite A,
    so ``f(S) <= (k/2) * log(1 + K_max/sigma^2)`` with ``K_max = 1`` for the
    squared exponential kernel. Both are clamped below at 1.
    """
    if len(store) == 0:
        raise ValueError("cannot estimate a bound for an empty dataset")
    if k < 1:
        raise ValueError(f"cardinality bound must be >= 1, got {k}")
    if objective == "coverage":
        biggest = max(len(store.payload(t)) for t in range(1, len(store) + 1))
        return max(1.0, float(k * biggest))
    if objective == "ivm":
        params = params or KernelParams()
        k_max = 1.0  # SE kernel: K(x, x) = exp(0)
        return max(1.0, 0.5 * k * math.log1p(k_max / params.sigma**2))
    raise ValueError(f"unknown objective {objective!r}")
