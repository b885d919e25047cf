"""Incremental U-statistic estimators for the Gini index.

``RunningState`` keeps the observations sorted together with prefix sums so
that each new observation updates every statistic needed by the stopping
rule in O(n) time:

* the Gini mean difference (mean absolute difference over all pairs),
* the Gini index ``gmd / (2 * mean)``,
* ``tau_hat``, the pair average of ``(x_i + x_j)/2 * |x_i - x_j|``,
* ``s_w_sq``, the jackknife pseudo-value variance of the Gini mean difference,
* ``v_sq``, the plug-in estimate of the asymptotic variance of the Gini index.

For leave-one-out quantities the state tracks, per observation ``j``, the
total ``T_j = sum_i |x_j - x_i|``. Removing ``j`` from the pair sum leaves
``pair_abs_sum - T_j``, which gives every leave-one-out mean difference
without touching the other pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidObservationError, UndefinedGiniError

#: Number of pushes between full recomputations of the accumulated sums.
REBUILD_EVERY = 1024

_INITIAL_CAPACITY = 256


@dataclass(frozen=True)
class StatisticsSnapshot:
    n: int
    mean: float
    variance: float
    gmd: float
    gini: float
    tau: float
    s_w_sq: float
    v_sq: float


def pairwise_totals(sorted_values: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Pair sums of an already sorted sample, from scratch in O(n).

    Returns ``(pair_abs_sum, pair_weighted_sum, t_values)`` where
    ``pair_abs_sum = sum_{i<j} |y_i - y_j|``,
    ``pair_weighted_sum = sum_{i<j} (y_i + y_j)/2 * |y_i - y_j|`` and
    ``t_values[j] = sum_i |y_j - y_i|``.
    """
    y = np.asarray(sorted_values, dtype=float)
    n = y.size
    if n == 0:
        return 0.0, 0.0, np.zeros(0)
    # rank weight 2i - n - 1 for 1-based rank i
    weights = 2.0 * np.arange(1, n + 1) - n - 1
    pair_abs_sum = float(np.dot(weights, y))
    # nonnegative data: (a + b)|a - b| = |a^2 - b^2|
    pair_weighted_sum = 0.5 * float(np.dot(weights, y * y))
    below = np.concatenate(([0.0], np.cumsum(y)[:-1]))
    total = float(y.sum())
    above = total - below - y
    idx = np.arange(n)
    t_values = y * idx - below + above - y * (n - 1 - idx)
    return pair_abs_sum, pair_weighted_sum, t_values


class RunningState:
    """Sorted sample plus running pair totals, updated one observation at a time.

    >>> s = RunningState()
    >>> for x in (1, 2, 3):
    ...     _ = s.push(x)
    >>> s.pair_abs_sum, s.pair_weighted_sum
    (4.0, 8.0)
    """

    def __init__(self, capacity: int = _INITIAL_CAPACITY):
        capacity = max(int(capacity), 4)
        self.n = 0
        self.sum = 0.0
        self.sum_sq = 0.0
        self.pair_abs_sum = 0.0
        self.pair_weighted_sum = 0.0
        self._mean = 0.0
        self._m2 = 0.0
        self._since_rebuild = 0
        self._alloc(capacity)

    def _alloc(self, capacity: int) -> None:
        vals = np.zeros(capacity)
        t = np.zeros(capacity)
        pre = np.zeros(capacity + 1)
        presq = np.zeros(capacity + 1)
        if self.n:
            n = self.n
            vals[:n] = self._vals[:n]
            t[:n] = self._t[:n]
            pre[: n + 1] = self._pre[: n + 1]
            presq[: n + 1] = self._presq[: n + 1]
        self._vals, self._t, self._pre, self._presq = vals, t, pre, presq

    @classmethod
    def from_values(cls, values) -> "RunningState":
        """Build a state from a whole sample in O(n log n)."""
        arr = np.asarray(values, dtype=float).ravel()
        _check_observations(arr)
        state = cls(capacity=max(2 * arr.size, _INITIAL_CAPACITY))
        state.n = arr.size
        state._vals[: arr.size] = np.sort(arr, kind="stable")
        state.rebuild()
        return state

    # views -----------------------------------------------------------------

    @property
    def sorted_values(self) -> np.ndarray:
        return self._vals[: self.n]

    @property
    def prefix_sums(self) -> np.ndarray:
        return self._pre[: self.n + 1]

    @property
    def prefix_sq_sums(self) -> np.ndarray:
        return self._presq[: self.n + 1]

    @property
    def t_values(self) -> np.ndarray:
        return self._t[: self.n]

    @property
    def mean(self) -> float:
        if self.n == 0:
            raise InsufficientDataError("mean needs at least one observation")
        return self._mean

    # updates ---------------------------------------------------------------

    def push(self, x: float) -> "RunningState":
        """Insert one observation and update all running totals in place."""
        x = float(x)
        if not math.isfinite(x) or x < 0.0:
            raise InvalidObservationError(f"observation must be finite and >= 0, got {x!r}")
        n = self.n
        if n + 1 > self._vals.size:
            self._alloc(2 * self._vals.size)
        vals, t, pre, presq = self._vals, self._t, self._pre, self._presq

        # stable insertion: after existing equal values
        k = int(np.searchsorted(vals[:n], x, side="right"))
        total, total_sq = float(pre[n]), float(presq[n])
        below, below_sq = float(pre[k]), float(presq[k])
        xsq = x * x
        abs_inc = (x * k - below) + (total - below - x * (n - k))
        sq_inc = (xsq * k - below_sq) + (total_sq - below_sq - xsq * (n - k))

        if n:
            t[:n] += np.abs(vals[:n] - x)
            vals[k + 1 : n + 1] = vals[k:n]
            t[k + 1 : n + 1] = t[k:n]
            pre[k + 2 : n + 2] = pre[k + 1 : n + 1] + x
            presq[k + 2 : n + 2] = presq[k + 1 : n + 1] + xsq
        vals[k] = x
        t[k] = abs_inc
        pre[k + 1] = pre[k] + x
        presq[k + 1] = presq[k] + xsq

        self.n = n + 1
        self.sum += x
        self.sum_sq += xsq
        self.pair_abs_sum += abs_inc
        self.pair_weighted_sum += 0.5 * sq_inc
        delta = x - self._mean
        self._mean += delta / self.n
        self._m2 += delta * (x - self._mean)

        self._since_rebuild += 1
        if self._since_rebuild >= REBUILD_EVERY:
            self.rebuild()
        return self

    def extend(self, xs) -> "RunningState":
        for x in xs:
            self.push(x)
        return self

    def rebuild(self) -> None:
        """Recompute every accumulated quantity from the sorted values."""
        n = self.n
        y = self._vals[:n]
        self._pre[0] = 0.0
        self._presq[0] = 0.0
        np.cumsum(y, out=self._pre[1 : n + 1])
        np.cumsum(y * y, out=self._presq[1 : n + 1])
        self.sum = float(self._pre[n])
        self.sum_sq = float(self._presq[n])
        self.pair_abs_sum, self.pair_weighted_sum, t = pairwise_totals(y)
        self._t[:n] = t
        if n:
            self._mean = self.sum / n
            dev = y - self._mean
            self._m2 = float(np.dot(dev, dev))
        else:
            self._mean = self._m2 = 0.0
        self._since_rebuild = 0

    # statistics ------------------------------------------------------------

    def _need(self, k: int, what: str) -> None:
        if self.n < k:
            raise InsufficientDataError(f"{what} needs n >= {k}, have n={self.n}")

    def variance(self) -> float:
        """Sample variance with divisor n - 1."""
        self._need(2, "variance")
        return max(self._m2, 0.0) / (self.n - 1)

    def gmd(self) -> float:
        self._need(2, "gmd")
        n = self.n
        return self.pair_abs_sum / (0.5 * n * (n - 1))

    def gini(self) -> float:
        self._need(2, "gini")
        if self.sum <= 0.0:
            raise UndefinedGiniError("Gini index is undefined for a zero sample mean")
        # gmd / (2 * mean) == pair_abs_sum / ((n - 1) * sum); clip float noise at the bounds
        g = self.pair_abs_sum / ((self.n - 1) * self.sum)
        return min(max(g, 0.0), 1.0)

    def tau_hat(self) -> float:
        self._need(2, "tau_hat")
        n = self.n
        return 2.0 / (n * (n - 1)) * self.pair_weighted_sum

    def s_w_sq(self) -> float:
        """Sample variance of the jackknife pseudo-values of the mean difference.

        With ``binom(n-1, 2) * gmd_(j) = binom(n, 2) * gmd - T_j`` the pseudo-values
        ``W_j = n * gmd - (n - 2) * gmd_(j)`` differ from their mean by
        ``(n - 2) / binom(n-1, 2) * (T_j - mean(T))``.
        """
        self._need(4, "s_w_sq")
        n = self.n
        t = self._t[:n]
        scale = (n - 2) / (0.5 * (n - 1) * (n - 2))
        dev = scale * (t - t.mean())
        return float(np.dot(dev, dev)) / (n - 1)

    def v_sq(self) -> float:
        return self.snapshot().v_sq

    def snapshot(self) -> StatisticsSnapshot:
        self._need(4, "snapshot")
        if self.sum <= 0.0:
            raise UndefinedGiniError("Gini index is undefined for a zero sample mean")
        mean = self._mean
        var = self.variance()
        gmd = self.gmd()
        tau = self.tau_hat()
        sw = self.s_w_sq()
        # same sum as gmd^2 var/(4 mean^4) - gmd tau/mean^3 + gmd^2/mean^2 + sw/(4 mean^2),
        # written in scale-free ratios so extreme magnitudes cannot under/overflow
        r = gmd / mean
        v_sq = (
            r * r * (var / mean / mean) / 4.0
            - r * (tau / mean / mean)
            + r * r
            + (sw / mean / mean) / 4.0
        )
        return StatisticsSnapshot(
            n=self.n,
            mean=mean,
            variance=var,
            gmd=gmd,
            gini=self.gini(),
            tau=tau,
            s_w_sq=sw,
            v_sq=v_sq,
        )


def _check_observations(arr: np.ndarray) -> None:
    if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0.0):
        raise InvalidObservationError("observations must be finite and >= 0")
