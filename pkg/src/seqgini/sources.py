"""Observation streams: seeded samplers for the simulation families and file readers."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, TextIO

import numpy as np

from .errors import ParseError

FAMILIES = ("gamma", "lognormal", "pareto", "constant")

# parameter names per family, in positional order
PARAM_NAMES = {
    "gamma": ("shape", "rate"),
    "lognormal": ("meanlog", "sdlog"),
    "pareto": ("scale", "shape"),
    "constant": ("value",),
}

# the three income distributions of the reference simulation study
REFERENCE_SPECS = {
    "gamma": (2.649, 0.84),
    "lognormal": (2.185, 0.562),
    "pareto": (20000.0, 5.0),
}


@dataclass(frozen=True)
class DistributionSpec:
    """A named family with positional parameters.

    gamma: (shape k, rate lambda); lognormal: (meanlog, sdlog);
    pareto: (scale x_m, shape a); constant: (value,) -- a degenerate source
    used for smoke tests.
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        want = len(PARAM_NAMES[self.family])
        if len(params) != want:
            raise ValueError(f"{self.family} takes {want} parameters, got {len(params)}")
        if not all(math.isfinite(p) for p in params):
            raise ValueError("distribution parameters must be finite")
        if self.family == "constant":
            if params[0] < 0:
                raise ValueError("constant value must be >= 0")
        elif not all(p > 0 for p in params):
            raise ValueError(f"{self.family} parameters must be > 0, got {params}")

    @classmethod
    def reference(cls, family: str) -> "DistributionSpec":
        return cls(family, REFERENCE_SPECS[family])

    def label(self) -> str:
        return f"{self.family}({', '.join(f'{p:g}' for p in self.params)})"

    def to_json(self) -> dict:
        return {"family": self.family, "params": list(self.params)}

    @classmethod
    def from_json(cls, obj: dict) -> "DistributionSpec":
        return cls(obj["family"], tuple(obj["params"]))


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_index: int = 0


def derive_stream(seed: SeedSpec) -> np.random.Generator:
    """Independent generator for replication ``seed.stream_index``.

    Uses numpy's SeedSequence hashing with the replication number as spawn
    key, so the result does not depend on which other streams were created.
    """
    ss = np.random.SeedSequence(entropy=int(seed.master_seed), spawn_key=(int(seed.stream_index),))
    return np.random.Generator(np.random.PCG64(ss))


def sample_many(spec: DistributionSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    fam, p = spec.family, spec.params
    if fam == "gamma":
        # numpy's standard_gamma is the Marsaglia-Tsang squeeze (boosted for shape < 1)
        return rng.standard_gamma(p[0], size) / p[1]
    if fam == "lognormal":
        return np.exp(p[0] + p[1] * rng.standard_normal(size))
    if fam == "pareto":
        u = 1.0 - rng.random(size)  # (0, 1]
        return p[0] * u ** (-1.0 / p[1])
    return np.full(size, p[0])


def sample(spec: DistributionSpec, rng: np.random.Generator) -> float:
    return float(sample_many(spec, rng, 1)[0])


def distribution_source(
    spec: DistributionSpec, rng: np.random.Generator, block: int = 512
) -> Iterator[float]:
    """Endless stream of draws, generated ``block`` at a time."""
    while True:
        for x in sample_many(spec, rng, block).tolist():
            yield x


def open_file_source(
    path: str | Path | TextIO, header: bool = False
) -> Iterator[float]:
    """Yield values from a text/CSV file in file order.

    Values may be separated by commas or newlines; blank fields are skipped.
    With ``header=True`` the first line is ignored. ``"-"`` reads stdin.
    """
    if hasattr(path, "read"):
        yield from _parse_lines(path, header)
    elif str(path) == "-":
        yield from _parse_lines(sys.stdin, header)
    else:
        with open(path, encoding="utf-8") as fh:
            yield from _parse_lines(fh, header)


def _parse_lines(fh: TextIO, header: bool) -> Iterator[float]:
    for lineno, line in enumerate(fh, start=1):
        if header and lineno == 1:
            continue
        for field in line.split(","):
            field = field.strip()
            if not field:
                continue
            try:
                x = float(field)
            except ValueError:
                raise ParseError(lineno, f"cannot parse {field!r} as a number") from None
            if not math.isfinite(x):
                raise ParseError(lineno, f"non-finite value {field!r}")
            if x < 0:
                raise ParseError(lineno, f"negative value {field!r}")
            yield x

