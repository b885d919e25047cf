"""Monte Carlo study of the sequential procedure (average stopping time, coverage)."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from .oracle import true_gini, true_params
from .sequential import DEFAULT_N_MAX, StoppingConfig, run_sequential
from .sources import DistributionSpec, SeedSpec, derive_stream, distribution_source


@dataclass(frozen=True)
class ExperimentConfig:
    spec: DistributionSpec
    alpha: float = 0.1
    d: float = 0.01
    replications: int = 2000
    master_seed: int = 42
    worker_count: int = 1
    oracle_budget: int = 10**6
    oracle_seed: int = 0
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        StoppingConfig(self.alpha, self.d, self.n_max)  # validates alpha, d

    def to_json(self) -> dict:
        out = asdict(self)
        out["spec"] = self.spec.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        obj = dict(obj)
        obj["spec"] = DistributionSpec.from_json(obj["spec"])
        return cls(**obj)


@dataclass(frozen=True)
class SimulationReport:
    family: str
    params: tuple[float, ...]
    alpha: float
    d: float
    replications: int
    master_seed: int
    true_gini: float
    n_bar: float
    se_n: float
    c_opt: int
    ratio: float
    n_max: int
    p: float
    se_p: float

    def label(self) -> str:
        return DistributionSpec(self.family, self.params).label()


class ReplicationError(RuntimeError):
    def __init__(self, index: int, cause: BaseException):
        self.index = index
        super().__init__(f"replication {index} failed: {type(cause).__name__}: {cause}")


def run_replication(config: ExperimentConfig, index: int) -> tuple[int, float]:
    """Stopping time and point estimate of replication ``index``."""
    rng = derive_stream(SeedSpec(config.master_seed, index))
    stop = StoppingConfig(config.alpha, config.d, config.n_max)
    try:
        res = run_sequential(distribution_source(config.spec, rng), stop)
    except Exception as exc:
        raise ReplicationError(index, exc) from exc
    return res.n_final, res.gini


def _run_chunk(args: tuple[ExperimentConfig, range]) -> list[tuple[int, float]]:
    config, indices = args
    return [run_replication(config, i) for i in indices]


def _chunks(n: int, k: int) -> list[range]:
    size = math.ceil(n / k)
    return [range(s, min(s + size, n)) for s in range(0, n, size)]


def run_experiment(config: ExperimentConfig) -> SimulationReport:
    """Run all replications and reduce them to one report.

    Replication ``i`` always draws from ``derive_stream(master_seed, i)`` and
    results are reduced in index order, so the report does not depend on
    ``worker_count``.
    """
    R = config.replications
    if config.worker_count == 1:
        results = _run_chunk((config, range(R)))
    else:
        # several chunks per worker to even out uneven stopping times
        chunks = _chunks(R, 4 * config.worker_count)
        with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
            results = [r for part in pool.map(_run_chunk, [(config, c) for c in chunks]) for r in part]

    g_true = true_gini(config.spec)
    oracle = true_params(
        config.spec, config.alpha, config.d, mc_budget=config.oracle_budget, seed=config.oracle_seed
    )
    ns = [n for n, _ in results]
    covered = sum(1 for _, g in results if abs(g - g_true) < config.d)

    n_bar = math.fsum(ns) / R
    if R > 1:
        sd = math.sqrt(math.fsum((n - n_bar) ** 2 for n in ns) / (R - 1))
    else:
        sd = 0.0
    p = covered / R
    return SimulationReport(
        family=config.spec.family,
        params=config.spec.params,
        alpha=config.alpha,
        d=config.d,
        replications=R,
        master_seed=config.master_seed,
        true_gini=g_true,
        n_bar=n_bar,
        se_n=sd / math.sqrt(R),
        c_opt=oracle.c_opt,
        ratio=n_bar / oracle.c_opt,
        n_max=max(ns),
        p=p,
        se_p=math.sqrt(p * (1 - p) / R),
    )


# formatting -----------------------------------------------------------------

REPORT_FIELDS = tuple(f.name for f in fields(SimulationReport))


def report_to_json(report: SimulationReport) -> dict:
    out = asdict(report)
    out["params"] = list(report.params)
    return out


def report_from_json(obj: dict) -> SimulationReport:
    obj = dict(obj)
    obj["params"] = tuple(float(x) for x in obj["params"])
    return SimulationReport(**obj)


def format_report(reports, style: str = "table") -> str:
    """Render one report or a list of them as ``table``, ``csv`` or ``json``."""
    single = isinstance(reports, SimulationReport)
    rows = [reports] if single else list(reports)
    if style == "json":
        payload = report_to_json(rows[0]) if single else [report_to_json(r) for r in rows]
        return json.dumps(payload, indent=2)
    if style == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_FIELDS)
        for r in rows:
            d = report_to_json(r)
            d["params"] = " ".join(repr(x) for x in r.params)
            writer.writerow([d[k] for k in REPORT_FIELDS])
        return buf.getvalue()
    if style == "table":
        return _table(rows)
    raise ValueError(f"unknown report style {style!r}")


def _table(rows: list[SimulationReport]) -> str:
    # reference-table layout: point estimates, then a row of standard errors under N̄ and p
    width = max([len("Distribution")] + [len(r.label()) for r in rows])
    cols = (("N̄", 11), ("C", 7), ("N̄/C", 8), ("max(N)", 8), ("p", 8))

    def cell(text: str, w: int) -> str:
        # combining macron occupies no column
        shown = len(text) - text.count("̄")
        return " " * max(w - shown, 0) + text

    head1 = "Distribution".ljust(width) + "".join(cell(t, w) for t, w in cols)
    head2 = " " * width + cell("s(N̄)", 11) + " " * (7 + 8 + 8) + cell("s_p", 8)
    lines = [head1, head2, "-" * len(head1)]
    for r in rows:
        lines.append(
            r.label().ljust(width)
            + cell(f"{r.n_bar:.3f}", 11)
            + cell(str(r.c_opt), 7)
            + cell(f"{r.ratio:.4f}", 8)
            + cell(str(r.n_max), 8)
            + cell(f"{r.p:.4f}", 8)
        )
        lines.append(" " * width + cell(f"{r.se_n:.4f}", 11) + " " * 23 + cell(f"{r.se_p:.4f}", 8))
    return "\n".join(lines) + "\n"
