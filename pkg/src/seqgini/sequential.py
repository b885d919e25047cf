"""Purely sequential fixed-width interval for the Gini index.

A pilot sample of size ``m = max(4, ceil(z/d))`` is drawn, then one
observation at a time is added until

    n >= (z / d)**2 * (V_n**2 + 1/n)

where ``V_n**2`` is the running estimate of the asymptotic variance of the
sample Gini index. The reported interval is ``(G_n - d, G_n + d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import CapExceededError, SourceExhaustedError
from .estimator import RunningState

DEFAULT_N_MAX = 10**7

# Acklam's rational approximation to the lower-tail normal quantile
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    if p > 1.0 - _P_LOW:
        return -_acklam(1.0 - p)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
        ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    )


def z_quantile(p: float) -> float:
    """Upper ``p`` quantile of the standard normal: ``Phi(z) = 1 - p``.

    Rational approximation followed by one Newton step on the exact CDF
    (via ``erfc``), which brings the error well below 1e-8.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    if p == 0.5:
        return 0.0
    x = _acklam(p)  # lower-tail quantile: Phi(x) = p
    err = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    dens = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    x -= err / dens
    return -x


def pilot_size(alpha: float, d: float) -> int:
    """``max(4, ceil(z_{alpha/2} / d))``."""
    _validate(alpha, d)
    return max(4, math.ceil(z_quantile(alpha / 2.0) / d))


def optimal_c(xi_sq: float, alpha: float, d: float) -> int:
    """Optimal fixed sample size when the asymptotic variance is known."""
    if xi_sq < 0:
        raise ValueError(f"xi_sq must be >= 0, got {xi_sq!r}")
    _validate(alpha, d)
    z = z_quantile(alpha / 2.0)
    return math.floor((z / d) ** 2 * xi_sq) + 1


def _validate(alpha: float, d: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    if not (d > 0.0 and math.isfinite(d)):
        raise ValueError(f"d must be a positive finite number, got {d!r}")


@dataclass(frozen=True)
class StoppingConfig:
    alpha: float
    d: float
    n_max: int = DEFAULT_N_MAX
    z: float = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        _validate(self.alpha, self.d)
        if self.n_max < 4:
            raise ValueError("n_max must be at least 4")
        object.__setattr__(self, "z", z_quantile(self.alpha / 2.0))
        object.__setattr__(self, "m", pilot_size(self.alpha, self.d))

    @property
    def scale(self) -> float:
        """``(z/d)**2``, the factor in front of the stopping boundary."""
        return (self.z / self.d) ** 2


def stopping_threshold(n: int, v_sq: float, config: StoppingConfig) -> float:
    return config.scale * (v_sq + 1.0 / n)


def should_stop(n: int, v_sq: float, config: StoppingConfig) -> bool:
    return n >= stopping_threshold(n, v_sq, config)


@dataclass(frozen=True)
class TraceStep:
    n: int
    v_sq: float
    threshold: float


@dataclass(frozen=True)
class SequentialResult:
    n_final: int
    gini: float
    v_sq: float
    ci_low: float
    ci_high: float
    trace: tuple[TraceStep, ...] | None = None


def run_sequential(
    source: Iterable[float],
    config: StoppingConfig,
    trace: bool = False,
) -> SequentialResult:
    """Draw from ``source`` until the stopping rule holds.

    Raises ``SourceExhaustedError`` if the source ends first and
    ``CapExceededError`` if ``config.n_max`` observations do not suffice.
    A zero-mean pilot sample raises ``UndefinedGiniError``.
    """
    it: Iterator[float] = iter(source)
    state = RunningState(capacity=max(2 * config.m, 256))
    steps: list[TraceStep] = []

    for _ in range(config.m):
        try:
            state.push(next(it))
        except StopIteration:
            raise SourceExhaustedError(state.n, _last_threshold(state, config)) from None

    while True:
        n = state.n
        v_sq = state.snapshot().v_sq
        threshold = stopping_threshold(n, v_sq, config)
        if trace:
            steps.append(TraceStep(n, v_sq, threshold))
        if n >= threshold:
            g = state.gini()
            return SequentialResult(
                n_final=n,
                gini=g,
                v_sq=v_sq,
                ci_low=g - config.d,
                ci_high=g + config.d,
                trace=tuple(steps) if trace else None,
            )
        if n >= config.n_max:
            raise CapExceededError(config.n_max)
        try:
            state.push(next(it))
        except StopIteration:
            raise SourceExhaustedError(n, threshold) from None


def _last_threshold(state: RunningState, config: StoppingConfig) -> float | None:
    if state.n < 4 or state.sum <= 0.0:
        return None
    return stopping_threshold(state.n, state.snapshot().v_sq, config)
