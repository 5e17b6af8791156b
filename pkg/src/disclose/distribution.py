"""Finite breakthrough-time distributions.

Everything downstream works with finitely many atoms; continuous families
enter through equal-mass quantile discretization.  Times are snapped to
1e-12 when merging, masses must be positive, and the total mass must be 1
within 1e-12 — a defective ("never") scenario is not representable here and
is handled explicitly by the discrete-time oracle instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

from .errors import ConfigError

SNAP = 1e-12
MASS_TOL = 1e-12


@dataclass(frozen=True)
class BreakthroughDist:
    """Atoms ``(times, probs)`` with times strictly increasing and probs > 0."""

    times: Tuple[float, ...]
    probs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.times) != len(self.probs) or not self.times:
            raise ConfigError("distribution needs matching, non-empty times/probs")
        for t0, t1 in zip(self.times, self.times[1:]):
            if not t1 > t0:
                raise ConfigError("atom times must be strictly increasing")
        if self.times[0] < 0:
            raise ConfigError("atom times must be non-negative")
        for p in self.probs:
            if not p > 0:
                raise ConfigError(f"atom masses must be positive, got {p}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > MASS_TOL:
            raise ConfigError(f"atom masses must sum to 1 within {MASS_TOL}, got {total!r}")

    def cdf(self, t: float) -> float:
        """G(t) = P(tau <= t)."""
        return math.fsum(p for tk, p in zip(self.times, self.probs) if tk <= t)

    def cdf_left(self, t: float) -> float:
        """G(t-) = P(tau < t)."""
        return math.fsum(p for tk, p in zip(self.times, self.probs) if tk < t)

    @property
    def support_hi(self) -> float:
        return self.times[-1]

    def expect(self, phi: Callable[[float], float]) -> float:
        return math.fsum(p * phi(t) for t, p in zip(self.times, self.probs))

    def discount_weight(self, r: float) -> float:
        """E exp(-r tau)."""
        return self.expect(lambda t: math.exp(-r * t))


def from_atoms(pairs: Sequence[Sequence[float]]) -> BreakthroughDist:
    """Build a distribution from ``(time, mass)`` pairs.

    Atoms closer than 1e-12 in time are merged onto the first occurrence;
    zero masses are dropped after merging; negative masses are an error.
    """
    if not pairs:
        raise ConfigError("no atoms given")
    items = sorted((float(t), float(p)) for t, p in pairs)
    merged = []
    for t, p in items:
        if p < 0:
            raise ConfigError(f"negative atom mass at t={t}")
        if merged and t - merged[-1][0] <= SNAP:
            merged[-1][1] += p
        else:
            merged.append([t, p])
    kept = [(t, p) for t, p in merged if p > 0.0]
    if not kept:
        raise ConfigError("all atoms have zero mass")
    return BreakthroughDist(times=tuple(t for t, _ in kept),
                            probs=tuple(p for _, p in kept))


def discretize(kind: str, m: int, **params) -> BreakthroughDist:
    """Equal-mass quantile discretization of a named family.

    Uses the midpoint quantiles ``F^{-1}((i - 1/2) / m)`` for i = 1..m, each
    carrying mass 1/m.  Supported kinds: ``exponential`` (rate), ``weibull``
    (shape, scale), ``point`` (t).
    """
    if not isinstance(m, int) or m < 1:
        raise ConfigError(f"discretization size must be a positive integer, got {m}")
    if kind == "point":
        t = params.pop("t")
        if params:
            raise ConfigError(f"unexpected parameters for point distribution: {sorted(params)}")
        if t < 0:
            raise ConfigError("point atom must be at a non-negative time")
        return from_atoms([(float(t), 1.0)])
    if kind == "exponential":
        rate = params.pop("rate")
        if params:
            raise ConfigError(f"unexpected parameters for exponential: {sorted(params)}")
        if not rate > 0:
            raise ConfigError("exponential rate must be positive")
        inv = lambda q: -math.log1p(-q) / rate
    elif kind == "weibull":
        shape = params.pop("shape")
        scale = params.pop("scale")
        if params:
            raise ConfigError(f"unexpected parameters for weibull: {sorted(params)}")
        if not (shape > 0 and scale > 0):
            raise ConfigError("weibull shape and scale must be positive")
        inv = lambda q: scale * (-math.log1p(-q)) ** (1.0 / shape)
    else:
        raise ConfigError(f"unknown distribution kind {kind!r}")
    atoms = [(inv((i - 0.5) / m), 1.0 / m) for i in range(1, m + 1)]
    return from_atoms(atoms)


def cond_expect(dist: BreakthroughDist, t: float, phi: Callable[[float], float]) -> float:
    """E(phi(tau) | tau > t), with a *strict* conditioning event."""
    num = 0.0
    mass = 0.0
    for tk, p in zip(dist.times, dist.probs):
        if tk > t:
            num += p * phi(tk)
            mass += p
    if mass <= 0.0:
        raise ConfigError(f"conditioning event tau > {t} has zero probability")
    return num / mass


@dataclass(frozen=True)
class OrderReport:
    """How the first distribution relates to the second."""

    fosd: bool                    # first-order stochastic dominance (first puts mass later)
    mlr: Optional[bool]           # likelihood-ratio dominance; None when supports differ
    equal_support: bool
    detail: str = ""


def order_checks(d: BreakthroughDist, d_dag: BreakthroughDist,
                 *, tol: float = 1e-12) -> OrderReport:
    """Numerically check stochastic orderings of ``d`` over ``d_dag``.

    FOSD holds when the cdf of ``d`` is everywhere <= the cdf of ``d_dag``
    (checked on the union of the supports, which is exact for step cdfs).
    The likelihood-ratio check needs equal supports; the mass ratios
    ``p_k / p_dag_k`` must then be non-decreasing (cross-multiplied to avoid
    dividing).  When supports differ, ``mlr`` is None rather than a guess.
    """
    union = sorted(set(d.times) | set(d_dag.times))
    fosd = all(d.cdf(t) <= d_dag.cdf(t) + tol for t in union)

    equal = len(d.times) == len(d_dag.times) and all(
        abs(a - b) <= SNAP for a, b in zip(d.times, d_dag.times))
    if not equal:
        return OrderReport(fosd=fosd, mlr=None, equal_support=False,
                           detail="supports differ; likelihood-ratio order undefined here")
    mlr = True
    for k in range(len(d.times) - 1):
        # p_{k+1}/pdag_{k+1} >= p_k/pdag_k  <=>  p_{k+1} pdag_k >= p_k pdag_{k+1}
        if d.probs[k + 1] * d_dag.probs[k] < d.probs[k] * d_dag.probs[k + 1] - tol:
            mlr = False
            break
    return OrderReport(fosd=fosd, mlr=mlr, equal_support=True)
