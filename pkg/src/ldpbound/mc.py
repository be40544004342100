"""Monte-Carlo cross-checks for the one-factor model quantities.

Every sampler draws through a counter-based Philox stream keyed by the seed,
with one independent jumped substream per fixed-size chunk. Chunks are
tallied as integers and combined in chunk order, so an estimate depends only
on (trials, seed, chunk_size) and never on how the chunks might be scheduled
across workers. Normals come from the generator's ziggurat sampler; beta
variates are built from Marsaglia-Tsang gamma pairs. The beta-normal routes
push beta samples through the package's own normal quantile, so the kernel
under test participates in its own cross-check without being the only
source of randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError
from .mixture import FactorModelParams

__all__ = [
    "McConfig",
    "McEstimate",
    "PROP3_FORMS",
    "simulate_default_count_tail",
    "simulate_copula_diagonal",
    "simulate_prop3_form",
]

# keep per-batch scratch arrays around this many doubles
_BATCH_CELLS = 4_000_000

PROP3_FORMS = ("normal-betanormal", "uniform-betanormal", "uniform-beta")


@dataclass(frozen=True)
class McConfig:
    """Trial count, stream seed and deterministic chunk size.

    chunk_size is clamped to trials so the partition is always valid.
    """

    trials: int
    seed: int
    chunk_size: int = 250_000

    def __post_init__(self) -> None:
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"McConfig: trials={self.trials!r} must be >= 1")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"McConfig: seed={self.seed!r} must fit in 64 unsigned bits")
        if int(self.chunk_size) != self.chunk_size or self.chunk_size < 1:
            raise DomainError(f"McConfig: chunk_size={self.chunk_size!r} must be >= 1")
        if self.chunk_size > self.trials:
            object.__setattr__(self, "chunk_size", int(self.trials))


@dataclass(frozen=True)
class McEstimate:
    """Proportion estimate with its binomial standard error."""

    mean: float
    std_error: float
    trials: int


def _chunk_streams(cfg: McConfig):
    root = np.random.Philox(key=cfg.seed)
    index = 0
    start = 0
    while start < cfg.trials:
        size = min(cfg.chunk_size, cfg.trials - start)
        yield np.random.Generator(root.jumped(index)), size
        index += 1
        start += size


def _proportion(hits: int, trials: int) -> McEstimate:
    mean = hits / trials
    return McEstimate(
        mean=mean,
        std_error=math.sqrt(mean * (1.0 - mean) / trials),
        trials=trials,
    )


def _uniform_open(rng: np.random.Generator, size) -> np.ndarray:
    # random() covers [0, 1); fold the endpoint into the open interval
    return np.clip(rng.random(size), 2.0 ** -53, 1.0 - 2.0 ** -53)


def _beta_sample(rng: np.random.Generator, a: float, b: float, size: int) -> np.ndarray:
    # gamma-pair construction; shape >= 1 here so no boosting is needed
    g1 = rng.standard_gamma(a, size)
    g2 = rng.standard_gamma(b, size)
    return np.clip(g1 / (g1 + g2), 1e-300, 1.0 - 2.0 ** -53)


def _validate_counts(n: int, k: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"n={n!r} must be a positive integer")
    if int(k) != k or k < 0 or k > n:
        raise DomainError(f"k={k!r} must be an integer in [0, n]")


def simulate_default_count_tail(
    n: int, k: int, m: FactorModelParams, cfg: McConfig
) -> McEstimate:
    """Estimate P(defaults <= k) by direct simulation of the factor model.

    Per trial: one systematic normal, n idiosyncratic normals, defaults
    counted by the sqrt(rho)*S + sqrt(1-rho)*xi < Phi^-1(p) rule.
    """
    _validate_counts(n, k)
    x_p = specfun.std_normal_quantile(m.p)
    sq = math.sqrt(m.rho)
    sqc = math.sqrt(1.0 - m.rho)
    max_rows = max(1, _BATCH_CELLS // n)
    hits = 0
    for rng, size in _chunk_streams(cfg):
        done = 0
        while done < size:
            rows = min(max_rows, size - done)
            s = rng.standard_normal(rows)
            xi = rng.standard_normal((rows, n))
            counts = np.count_nonzero(sq * s[:, None] + sqc * xi < x_p, axis=1)
            hits += int(np.count_nonzero(counts <= k))
            done += rows
    return _proportion(hits, cfg.trials)


def simulate_copula_diagonal(
    n: int, m: FactorModelParams, cfg: McConfig
) -> McEstimate:
    """Estimate the equicorrelated orthant probability at -Phi^-1(p).

    Samples the same factor construction, Z_i = sqrt(1-rho)*Y_i - sqrt(rho)*X,
    and counts trials where every coordinate lands below -Phi^-1(p).
    """
    if int(n) != n or n < 1:
        raise DomainError(f"simulate_copula_diagonal: n={n!r} must be a positive integer")
    threshold = -specfun.std_normal_quantile(m.p)
    sq = math.sqrt(m.rho)
    sqc = math.sqrt(1.0 - m.rho)
    max_rows = max(1, _BATCH_CELLS // n)
    hits = 0
    for rng, size in _chunk_streams(cfg):
        done = 0
        while done < size:
            rows = min(max_rows, size - done)
            x = rng.standard_normal(rows)
            y = rng.standard_normal((rows, n))
            inside = np.all(sqc * y - sq * x[:, None] < threshold, axis=1)
            hits += int(np.count_nonzero(inside))
            done += rows
    return _proportion(hits, cfg.trials)


def simulate_prop3_form(
    form: str, n: int, k: int, m: FactorModelParams, cfg: McConfig
) -> McEstimate:
    """Estimate P(Phi(sqrt(rho)*X - sqrt(1-rho)*Y) > p), three sampling routes.

    Y is beta-normal with shapes (n-k, k+1): Y = Phi^-1(W), W ~ Beta. The
    routes differ in where the uniforms enter and where the comparison
    happens:

    * ``normal-betanormal``   X drawn as a normal; compare the linear
      combination against Phi^-1(p)
    * ``uniform-betanormal``  X = Phi^-1(Z) from a uniform Z; same comparison
    * ``uniform-beta``        same draws, but the probability is formed as
      Phi(...) and compared against p itself

    All three estimate the mixture tail probability P(defaults <= k).
    """
    if form not in PROP3_FORMS:
        raise DomainError(f"simulate_prop3_form: unknown form {form!r}; pick from {PROP3_FORMS}")
    _validate_counts(n, k)
    if k == n:
        raise DomainError("simulate_prop3_form: k=n makes the first beta shape n-k=0; the tail is 1 without sampling")
    a = float(n - k)
    b = float(k + 1)
    x_p = specfun.std_normal_quantile(m.p)
    sq = math.sqrt(m.rho)
    sqc = math.sqrt(1.0 - m.rho)
    hits = 0
    for rng, size in _chunk_streams(cfg):
        if form == "normal-betanormal":
            x = rng.standard_normal(size)
        else:
            x = specfun.std_normal_quantile(_uniform_open(rng, size))
        y = specfun.std_normal_quantile(_beta_sample(rng, a, b, size))
        combo = sq * x - sqc * y
        if form == "uniform-beta":
            events = specfun.std_normal_cdf(combo) > m.p
        else:
            events = combo > x_p
        hits += int(np.count_nonzero(events))
    return _proportion(hits, cfg.trials)
