"""Unemployment-insurance application: primitives to frontiers to schedules.

The agent's flow utility is ``phi(C) = C**a`` from consumption (0 < a < 1)
minus, once employable, a search cost ``kappa(L) = L**b`` (b > 1) for labor
``L`` paid wage ``w``.  The planner prices spending at a shadow value
``shadow`` per unit.  This yields closed-form frontiers:

* pre-breakthrough (no work possible): delivering flow utility ``u`` costs
  consumption ``u**(1/a)``, so ``f0(u) = u - shadow * u**(1/a)``;
* post-breakthrough: ``f1(u) = u + shadow * max_L [ w L - (u + L**b)**(1/a) ]``
  — the planner collects output net of the consumption that compensates the
  promised utility plus the search cost.

``f0`` peaks at ``u0 = (a/shadow)**(a/(1-a))`` with value ``(1-a) * u0``;
the frontiers share a slope only at ``u = 0``, so the shared-slope level is
zero and the reward-path solver needs the participation shift exposed by
``TechnologyPair.shifted`` (payoffs are invariant; levels map back by the
shift).  Solved mechanisms translate into benefit/consumption/labor
schedules via the same closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from .deadline import optimize_deadline
from .distribution import BreakthroughDist
from .errors import ConfigError
from .euler import solve as solve_path
from .frontier import ParametricFrontier, TechnologyPair, affine_gap
from .mechanism import Mechanism, reward_value
from .numerics import bisect_down


@dataclass(frozen=True)
class UiPrimitives:
    """Utility curvature ``a``, search-cost convexity ``b``, wage ``w``,
    and the planner's shadow price of spending."""

    a: float
    b: float
    w: float
    shadow: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise ConfigError(f"need 0 < a < 1, got a={self.a}")
        if not self.b > 1.0:
            raise ConfigError(f"need b > 1, got b={self.b}")
        if not self.w > 0.0:
            raise ConfigError(f"need a positive wage, got w={self.w}")
        if not self.shadow > 0.0:
            raise ConfigError(f"need a positive shadow price, got {self.shadow}")


@lru_cache(maxsize=None)
def _inner_max(a: float, b: float, w: float, u: float) -> Tuple[float, float]:
    """``argmax_L`` and ``max_L`` of ``w L - (u + L**b)**(1/a)`` for L >= 0.

    The objective is strictly concave with slope ``w`` at L = 0, so the
    maximizer is the unique root of the slope, bracketed by geometric
    growth and bisected.
    """

    def gp(L: float) -> float:
        return w - (b / a) * L ** (b - 1.0) * (u + L ** b) ** ((1.0 - a) / a)

    hi = 1.0
    for _ in range(200):
        if gp(hi) < 0.0:
            break
        hi *= 2.0
    else:  # pragma: no cover - parameters validated to rule this out
        raise ConfigError("search-cost slope never exceeds the wage")
    l_star = bisect_down(gp, 0.0, hi, f_lo=w, tol_x=1e-13 * hi)
    return l_star, w * l_star - (u + l_star ** b) ** (1.0 / a)


def labor_choice(p: UiPrimitives, u: float) -> float:
    """Optimal post-breakthrough labor when the promised utility is ``u``."""
    return _inner_max(p.a, p.b, p.w, float(u))[0]


@dataclass(frozen=True)
class UiConstants:
    u0: float           # f0 peak utility
    c0: float           # consumption delivering it
    v0: float           # f0 peak value, equals (1 - a) * u0
    eps_linear: float   # curvature budget: bound on f0's deviation from its chord


def ui_constants(p: UiPrimitives) -> UiConstants:
    u0 = (p.a / p.shadow) ** (p.a / (1.0 - p.a))
    c0 = u0 ** (1.0 / p.a)
    v0 = (1.0 - p.a) * u0
    return UiConstants(u0=u0, c0=c0, v0=v0, eps_linear=v0)


def build_frontiers(p: UiPrimitives, r: float, *,
                    domain_factor: float = 2.0) -> TechnologyPair:
    """Technology pair for the primitives, on the domain ``[0, 2 u0]``.

    Both frontiers carry analytic derivatives (the post-breakthrough one by
    the envelope theorem: ``f1'(u) = 1 - (shadow/a) C(u)**(1-a)`` with
    ``C(u)`` the compensating consumption at the optimal labor choice).
    """
    a, b, w, lam = p.a, p.b, p.w, p.shadow
    u0 = ui_constants(p).u0
    hi = domain_factor * u0

    def f0_fn(u: float) -> float:
        return u - lam * u ** (1.0 / a)

    def f0_dfn(u: float) -> float:
        return 1.0 - (lam / a) * u ** ((1.0 - a) / a)

    def f1_fn(u: float) -> float:
        return u + lam * _inner_max(a, b, w, float(u))[1]

    def f1_dfn(u: float) -> float:
        l_star = _inner_max(a, b, w, float(u))[0]
        return 1.0 - (lam / a) * (u + l_star ** b) ** ((1.0 - a) / a)

    f0 = ParametricFrontier(fn=f0_fn, u_lo=0.0, u_hi=hi, dfn=f0_dfn)
    f1 = ParametricFrontier(fn=f1_fn, u_lo=0.0, u_hi=hi, dfn=f1_dfn)
    return TechnologyPair.build(f0, f1, r)


@dataclass(frozen=True)
class UiScheduleRow:
    """One sample time of the implemented contract: flow utility and its
    benefit payment, promised post-breakthrough utility and the package
    (consumption, labor, net output) delivering it."""

    t: float
    flow_u: float
    promise_u: float
    benefit: float
    consumption: float
    labor: float
    net_output: float
    identity_err: float


def schedule(p: UiPrimitives, pair: TechnologyPair, m: Mechanism,
             times: Optional[Sequence[float]] = None) -> Tuple[UiScheduleRow, ...]:
    """Translate a mechanism into the benefit/consumption/labor schedule.

    The benefit pays the flow utility (``benefit = flow**(1/a)``); on
    disclosure at t the promised utility is the reward value, delivered by
    working ``labor_choice`` and consuming what compensates utility plus
    search cost.  ``identity_err`` reports how far the package is from
    delivering the promise exactly (should be numerically zero)."""
    if times is None:
        times = m.grid
    rows = []
    for t in sorted(set(float(t) for t in times)):
        x = m.flow_at(t)
        promise = reward_value(m, pair.r, t)
        benefit = x ** (1.0 / p.a)
        labor = labor_choice(p, promise)
        cons = (promise + labor ** p.b) ** (1.0 / p.a)
        err = cons ** p.a - labor ** p.b - promise
        rows.append(UiScheduleRow(
            t=t, flow_u=x, promise_u=promise, benefit=benefit,
            consumption=cons, labor=labor,
            net_output=p.w * labor - cons, identity_err=err))
    return tuple(rows)


def shift_mechanism(m: Mechanism, k: float) -> Mechanism:
    """Translate all utility levels of a mechanism by ``k`` (used to map a
    participation-shifted solution back to original coordinates)."""
    reward = None if m.reward is None else tuple(v + k for v in m.reward)
    return Mechanism(grid=m.grid, levels=tuple(v + k for v in m.levels),
                     reward=reward)


@dataclass(frozen=True)
class SweepRow:
    """Deadline-vs-reward-path comparison at one shadow price.  ``ratio`` is
    the deadline's share of the unrestricted optimum (at most one, approaching
    one as the pre-breakthrough frontier flattens)."""

    shadow: float
    u0: float
    t_deadline: float
    pi_deadline: float
    pi_path: float
    gain: float
    ratio: float
    gap_bound: float
    eps_linear: float


def welfare_sweep(template: UiPrimitives, shadows: Sequence[float],
                  dist: BreakthroughDist, r: float, *,
                  shift_frac: float = 0.05) -> Tuple[SweepRow, ...]:
    """Compare the best deadline against the solved reward path across
    shadow prices.

    The shared-slope level sits at zero here, so the reward-path solver is
    run on a participation-shifted copy (shift ``shift_frac * u0``), which
    leaves payoffs untouched.  Each row carries the payoff gain, the ratio,
    and the curvature bound ``gap_bound`` that must dominate the gain."""
    rows = []
    for shadow in shadows:
        p = replace(template, shadow=float(shadow))
        pair = build_frontiers(p, r)
        consts = ui_constants(p)
        best = optimize_deadline(pair, dist)
        shift = shift_frac * consts.u0
        sol = solve_path(pair.shifted(shift), dist)
        gain = sol.payoff - best.payoff
        bound = affine_gap(pair.f0, float(pair.u_star), float(pair.u0))
        rows.append(SweepRow(
            shadow=float(shadow), u0=consts.u0, t_deadline=best.T,
            pi_deadline=best.payoff, pi_path=sol.payoff, gain=gain,
            ratio=best.payoff / sol.payoff if sol.payoff != 0 else math.inf,
            gap_bound=bound, eps_linear=consts.eps_linear))
    return tuple(rows)
