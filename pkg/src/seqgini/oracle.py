"""Ground truth for checking the sequential machinery.

``brute_force_statistics`` evaluates every estimator literally from its
double-sum definition, recomputing each leave-one-out mean difference from
scratch. It shares no code with ``RunningState``.

``true_params`` gives the population quantities behind the asymptotic
variance of the sample Gini index for a ``DistributionSpec``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import special

from .errors import InsufficientDataError, MomentExistenceError, UndefinedGiniError
from .estimator import RunningState, StatisticsSnapshot
from .sequential import optimal_c, z_quantile
from .sources import DistributionSpec, SeedSpec, derive_stream, sample_many


def _upper_pairs(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(x.size, k=1)
    return x[i], x[j]


def brute_force_statistics(xs) -> StatisticsSnapshot:
    """All sample statistics by direct summation over pairs.

    O(n^2) for the pair sums and O(n^3) for the jackknife: for every ``j``
    the pair sum over the remaining ``n - 1`` observations is rebuilt.
    """
    x = np.asarray(xs, dtype=float).ravel()
    n = x.size
    if n < 4:
        raise InsufficientDataError(f"need n >= 4, have n={n}")
    mean = math.fsum(x) / n
    if mean <= 0:
        raise UndefinedGiniError("Gini index is undefined for a zero sample mean")

    a, b = _upper_pairs(x)
    n_pairs = n * (n - 1) / 2
    gmd = math.fsum(np.abs(a - b)) / n_pairs
    # S^2 as the U-statistic with kernel (a - b)^2 / 2
    variance = math.fsum((a - b) ** 2 / 2.0) / n_pairs
    tau = 2.0 / (n * (n - 1)) * math.fsum(0.5 * (a + b) * np.abs(a - b))

    loo_pairs = (n - 1) * (n - 2) / 2
    w = np.empty(n)
    for j in range(n):
        aj, bj = _upper_pairs(np.delete(x, j))
        gmd_j = math.fsum(np.abs(aj - bj)) / loo_pairs
        w[j] = n * gmd - (n - 2) * gmd_j
    w_bar = math.fsum(w) / n
    s_w_sq = math.fsum((w - w_bar) ** 2) / (n - 1)

    term_var = gmd**2 * variance / (4 * mean**4)
    term_cov = gmd * tau / mean**3
    term_gmd = gmd**2 / mean**2
    term_sw = s_w_sq / (4 * mean**2)
    return StatisticsSnapshot(
        n=n,
        mean=mean,
        variance=variance,
        gmd=gmd,
        gini=gmd / (2 * mean),
        tau=tau,
        s_w_sq=s_w_sq,
        v_sq=term_var - term_cov + term_gmd + term_sw,
    )


def _std_normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def true_gini(spec: DistributionSpec) -> float:
    fam, p = spec.family, spec.params
    if fam == "gamma":
        k = p[0]
        return math.exp(math.lgamma(k + 0.5) - math.lgamma(k + 1.0)) / math.sqrt(math.pi)
    if fam == "lognormal":
        return 2.0 * _std_normal_cdf(p[1] / math.sqrt(2.0)) - 1.0
    if fam == "pareto":
        if p[1] <= 1:
            raise MomentExistenceError("Pareto Gini index needs shape > 1 (finite mean)")
        return 1.0 / (2.0 * p[1] - 1.0)
    if p[0] == 0:
        raise UndefinedGiniError("Gini index is undefined for a zero mean")
    return 0.0


def mean_and_variance(spec: DistributionSpec) -> tuple[float, float]:
    fam, p = spec.family, spec.params
    if fam == "gamma":
        k, rate = p
        return k / rate, k / rate**2
    if fam == "lognormal":
        m, s = p
        mu = math.exp(m + s * s / 2)
        return mu, math.expm1(s * s) * mu * mu
    if fam == "pareto":
        xm, a = p
        if a <= 2:
            raise MomentExistenceError("Pareto variance needs shape > 2")
        return a * xm / (a - 1), xm * xm * a / ((a - 1) ** 2 * (a - 2))
    return p[0], 0.0


def quantile(spec: DistributionSpec, u: np.ndarray) -> np.ndarray:
    """Inverse CDF, vectorised over ``u`` in (0, 1)."""
    fam, p = spec.family, spec.params
    u = np.asarray(u, dtype=float)
    if fam == "gamma":
        return special.gammaincinv(p[0], u) / p[1]
    if fam == "lognormal":
        return np.exp(p[0] + p[1] * special.ndtri(u))
    if fam == "pareto":
        return p[0] * (1.0 - u) ** (-1.0 / p[1])
    return np.full(u.shape, p[0])


def stratified_sample(spec: DistributionSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """One inverse-CDF draw from each of ``size`` equal-probability strata."""
    u = (np.arange(size) + rng.random(size)) / size
    return quantile(spec, u)


def assemble_xi_sq(mu: float, delta: float, sigma_sq: float, tau: float, sigma1_sq: float) -> float:
    """Asymptotic variance of the sample Gini index from its population ingredients."""
    return (
        delta**2 * sigma_sq / (4 * mu**4)
        - delta * tau / mu**3
        + delta**2 / mu**2
        + sigma1_sq / mu**2
    )


@dataclass(frozen=True)
class TruePopulationParams:
    family: str
    params: tuple[float, ...]
    alpha: float
    d: float
    mc_budget: int
    seed: int
    sampling: str
    mu: float
    delta: float
    sigma_sq: float
    tau: float
    sigma1_sq: float
    xi_sq: float
    gini: float
    c_opt: int
    std_errors: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = asdict(self)
        out["params"] = list(self.params)
        return out


def true_params(
    spec: DistributionSpec,
    alpha: float = 0.1,
    d: float = 0.01,
    mc_budget: int = 10**6,
    seed: int = 0,
    batches: int = 10,
    sampling: str = "stratified",
) -> TruePopulationParams:
    """Population ingredients of the asymptotic Gini variance and the optimal C.

    Mean and variance are analytic. The mean difference, ``tau`` and
    ``sigma1_sq`` come from the U-statistic estimators on one sample of
    ``mc_budget`` draws (``sigma1_sq`` as a quarter of the jackknife
    pseudo-value variance).

    ``sampling="stratified"`` (default) draws one point per probability
    stratum through the inverse CDF, which removes most of the Monte Carlo
    error of the linear part of the U-statistics; ``"iid"`` uses the
    simulation samplers. Standard errors come from ``batches`` interleaved
    sub-samples and are conservative for the stratified design.
    """
    if sampling not in ("stratified", "iid"):
        raise ValueError(f"sampling must be 'stratified' or 'iid', got {sampling!r}")
    if mc_budget < 10**5:
        raise ValueError("mc_budget must be at least 1e5")
    if spec.family == "pareto" and spec.params[1] <= 4:
        raise MomentExistenceError(
            f"Pareto shape {spec.params[1]:g} <= 4: fourth moment, and hence the "
            "asymptotic variance, does not exist"
        )
    mu, sigma_sq = mean_and_variance(spec)
    gini = true_gini(spec)
    rng = derive_stream(SeedSpec(seed, 0))
    if sampling == "stratified":
        xs = stratified_sample(spec, rng, mc_budget)
    else:
        xs = sample_many(spec, rng, mc_budget)

    def ingredients(sample: np.ndarray) -> tuple[float, float, float, float]:
        st = RunningState.from_values(sample)
        delta, tau, s1 = st.gmd(), st.tau_hat(), st.s_w_sq() / 4.0
        return delta, tau, s1, assemble_xi_sq(mu, delta, sigma_sq, tau, s1)

    delta, tau, sigma1_sq, xi_sq = ingredients(xs)
    per_batch = np.array([ingredients(b) for b in (xs[i::batches] for i in range(batches))])
    se = per_batch.std(axis=0, ddof=1) / math.sqrt(batches)
    scale = (z_quantile(alpha / 2) / d) ** 2
    std_errors = {
        "delta": float(se[0]),
        "tau": float(se[1]),
        "sigma1_sq": float(se[2]),
        "xi_sq": float(se[3]),
        "c_opt": float(scale * se[3]),
    }
    return TruePopulationParams(
        family=spec.family,
        params=spec.params,
        alpha=alpha,
        d=d,
        mc_budget=mc_budget,
        seed=seed,
        sampling=sampling,
        mu=mu,
        delta=delta,
        sigma_sq=sigma_sq,
        tau=tau,
        sigma1_sq=sigma1_sq,
        xi_sq=xi_sq,
        gini=gini,
        c_opt=optimal_c(max(xi_sq, 0.0), alpha, d),
        std_errors=std_errors,
    )
