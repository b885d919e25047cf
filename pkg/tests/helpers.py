"""Shared tolerances and sample generators for the test-suite."""

import numpy as np


def rel_close(a, b, rel, scale=None):
    """``|a - b| <= rel * max(|a|, |b|, scale)``."""
    ref = max(abs(a), abs(b), scale or 0.0)
    return abs(a - b) <= rel * ref or a == b


def v_sq_scale(s):
    """Magnitude of the largest term in the asymptotic-variance sum of a snapshot.

    The terms cancel heavily for near-constant samples, so agreement of two
    floating-point evaluations is only meaningful relative to this size.
    """
    m = s.mean
    return max(
        abs(s.gmd**2 * s.variance / (4 * m**4)),
        abs(s.gmd * s.tau / m**3),
        abs(s.gmd**2 / m**2),
        abs(s.s_w_sq / (4 * m**2)),
    )


def mixed_family_sample(rng, n):
    """Sample from a randomly chosen income-like family, optionally with ties and zeros."""
    kind = rng.integers(5)
    if kind == 0:
        x = rng.gamma(rng.uniform(0.3, 5.0), rng.uniform(0.1, 10.0), n)
    elif kind == 1:
        x = np.exp(rng.normal(rng.uniform(-2, 8), rng.uniform(0.1, 1.5), n))
    elif kind == 2:
        x = rng.uniform(1, 1e5) * (1 - rng.random(n)) ** (-1 / rng.uniform(2.5, 8))
    elif kind == 3:
        x = rng.integers(0, 20, n).astype(float)
    else:
        x = rng.exponential(1.0, n)
        x[rng.random(n) < 0.3] = 0.0
    if x.sum() == 0:
        x[0] = 1.0
    return x


def assert_snapshots_close(a, b, rel, conditioned=False):
    """Field-wise relative comparison of two snapshots.

    ``conditioned=True`` adds the forward-error slack of the jackknife: the
    pseudo-values have magnitude ``n * gmd`` while their spread is
    ``sqrt(s_w_sq)``, so either evaluation may be off by roughly
    ``eps * n * gmd * sqrt(s_w_sq)`` in absolute terms.
    """
    assert a.n == b.n
    for name in ("mean", "variance", "gmd", "gini", "tau"):
        va, vb = getattr(a, name), getattr(b, name)
        assert rel_close(va, vb, rel), f"{name}: {va!r} vs {vb!r}"
    sw_slack = 0.0
    v_scale = None
    if conditioned:
        sw_slack = 1e-12 * b.n * b.gmd * (abs(b.s_w_sq) ** 0.5 + 1e-12 * b.n * b.gmd)
        v_scale = v_sq_scale(b) + sw_slack / (4 * b.mean**2) / rel
    assert abs(a.s_w_sq - b.s_w_sq) <= rel * max(abs(a.s_w_sq), abs(b.s_w_sq)) + sw_slack, (
        f"s_w_sq: {a.s_w_sq!r} vs {b.s_w_sq!r}"
    )
    assert rel_close(a.v_sq, b.v_sq, rel, scale=v_scale), f"v_sq: {a.v_sq!r} vs {b.v_sq!r}"
