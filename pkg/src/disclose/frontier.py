"""Concave utility-possibility frontiers and the pair the solvers consume.

A frontier maps the agent's (per-unit-time) utility ``u`` to the best flow
value the principal can attain while delivering ``u``.  The model works with
two of them: ``f0`` before a breakthrough has been disclosed and ``f1``
after.  Both are concave with a unique peak, the peaks are in conflict
(``u1 < u0``), and ``f1 >= f0`` pointwise.

Two representations are supported:

* piecewise-linear frontiers given by breakpoints, evaluated with plain
  arithmetic so exact types (``fractions.Fraction``) pass through untouched;
* parametric frontiers given by callables over a stated interval, used by the
  insurance application, with analytic derivatives when available and
  central differences otherwise.

Evaluation outside the effective domain returns the distinguished ``NEG_INF``
sentinel.  ``NEG_INF`` supports comparisons but deliberately no arithmetic:
a payoff that silently absorbed an off-domain value would be a bug, so the
attempt raises ``TypeError``.  One-sided slopes at the domain boundary use
ordinary float infinities (those participate in interval intersections
only, never in sums).
"""

from __future__ import annotations

import bisect as _bisect
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence, Tuple

from .errors import ModelAssumptionError
from .numerics import bisect_up

INF = float("inf")

# tolerance for treating a query as sitting exactly on a piecewise
# breakpoint when selecting one-sided slopes; breakpoints are assumed to be
# separated by far more than this
KINK_SNAP = 1e-9


class _NegInf:
    """Off-domain sentinel.  Ordered below every number; no arithmetic."""

    __slots__ = ()

    def __repr__(self):
        return "NEG_INF"

    def __lt__(self, other):
        return not isinstance(other, _NegInf)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _NegInf)

    def __eq__(self, other):
        return isinstance(other, _NegInf)

    def __hash__(self):
        return hash("disclose.NEG_INF")


NEG_INF = _NegInf()


def is_neg_inf(v) -> bool:
    return isinstance(v, _NegInf)


@dataclass(frozen=True)
class PiecewiseFrontier:
    """Concave piecewise-linear frontier defined by its breakpoints.

    Breakpoint abscissae must be strictly increasing and segment slopes
    strictly decreasing (strict concavity).  A zero-slope segment would make
    the peak non-unique and is rejected.
    """

    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((u, v) for u, v in self.points)
        if len(pts) < 2:
            raise ModelAssumptionError("a frontier needs at least two breakpoints")
        for (u0, _), (u1, _) in zip(pts, pts[1:]):
            if not u1 > u0:
                raise ModelAssumptionError(
                    f"breakpoint abscissae must be strictly increasing, got {u0} then {u1}")
        slopes = tuple((v1 - v0) / (u1 - u0) for (u0, v0), (u1, v1) in zip(pts, pts[1:]))
        for s0, s1 in zip(slopes, slopes[1:]):
            if not s1 < s0:
                raise ModelAssumptionError(
                    f"segment slopes must be strictly decreasing (concavity), got {s0} then {s1}")
        for s in slopes:
            if s == 0:
                raise ModelAssumptionError(
                    "flat segment would make the peak non-unique")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_slopes", slopes)
        object.__setattr__(self, "_us", tuple(u for u, _ in pts))

    @property
    def u_lo(self):
        return self.points[0][0]

    @property
    def u_hi(self):
        return self.points[-1][0]

    def _segment(self, u) -> int:
        # index i such that u lies in [u_i, u_{i+1}]; u must be inside the domain
        i = _bisect.bisect_right(self._us, u) - 1
        return min(max(i, 0), len(self.points) - 2)

    def value(self, u):
        if u < self.u_lo or u > self.u_hi:
            return NEG_INF
        i = self._segment(u)
        u_i, v_i = self.points[i]
        return v_i + self._slopes[i] * (u - u_i)

    def derivs(self, u):
        """``(value, d_plus, d_minus)`` at ``u``.

        ``d_plus`` is the right slope, ``d_minus`` the left slope.  At the
        left domain endpoint ``d_minus`` is +inf and at the right endpoint
        ``d_plus`` is -inf, so ``[d_plus, d_minus]`` is the supporting-slope
        interval everywhere.  Off-domain: ``(NEG_INF, None, None)``.

        Queries within ``KINK_SNAP`` of a breakpoint are treated as sitting
        on it, so both one-sided slopes of a kink are reported even when the
        query carries roundoff from an upstream solve.
        """
        j = _bisect.bisect_left(self._us, u)
        for idx in (j - 1, j):
            if 0 <= idx < len(self._us) and abs(u - self._us[idx]) <= KINK_SNAP:
                u = self._us[idx]
                break
        if u < self.u_lo or u > self.u_hi:
            return (NEG_INF, None, None)
        i = self._segment(u)
        u_i, v_i = self.points[i]
        if u == self.u_lo:
            return (self.points[0][1], self._slopes[0], INF)
        if u == self.u_hi:
            return (self.points[-1][1], -INF, self._slopes[-1])
        # interior breakpoint?
        j = _bisect.bisect_left(self._us, u)
        if j < len(self._us) and self._us[j] == u:
            return (self.points[j][1], self._slopes[j], self._slopes[j - 1])
        return (v_i + self._slopes[i] * (u - u_i), self._slopes[i], self._slopes[i])

    @cached_property
    def peak(self):
        """``(u, value)`` of the unique maximum (always at a breakpoint)."""
        best = max(self.points, key=lambda p: p[1])
        return (best[0], best[1])

    def shifted(self, k):
        """The same frontier with the agent-utility axis translated by +k."""
        return PiecewiseFrontier(tuple((u + k, v) for u, v in self.points))


@dataclass(frozen=True)
class ParametricFrontier:
    """Frontier given by callables on a closed interval.

    ``dfn`` (the derivative) is optional; central differences with a 1e-6
    relative step fill in when it is missing, which costs roughly half the
    significant digits — supply the analytic derivative whenever the solver
    output feeds further computation.
    """

    fn: Callable[[float], float]
    u_lo: float
    u_hi: float
    dfn: Optional[Callable[[float], float]] = None
    fd_step: float = 1e-6

    def value(self, u):
        if u < self.u_lo or u > self.u_hi:
            return NEG_INF
        return self.fn(u)

    def _slope(self, u: float) -> float:
        if self.dfn is not None:
            return self.dfn(u)
        h = self.fd_step * max(1.0, abs(u))
        a = max(self.u_lo, u - h)
        b = min(self.u_hi, u + h)
        return (self.fn(b) - self.fn(a)) / (b - a)

    def derivs(self, u):
        if u < self.u_lo or u > self.u_hi:
            return (NEG_INF, None, None)
        v = self.fn(u)
        d = self._slope(u)
        if u == self.u_lo:
            return (v, d, INF)
        if u == self.u_hi:
            return (v, -INF, d)
        return (v, d, d)

    @cached_property
    def peak(self):
        """``(u, value)`` of the maximum, via sign bisection on the slope."""
        d_lo = self._slope(self.u_lo)
        d_hi = self._slope(self.u_hi)
        if d_lo <= 0.0:
            return (self.u_lo, self.fn(self.u_lo))
        if d_hi >= 0.0:
            return (self.u_hi, self.fn(self.u_hi))
        from .numerics import bisect_down
        u = bisect_down(self._slope, self.u_lo, self.u_hi,
                        f_lo=d_lo, f_hi=d_hi, tol_x=1e-13)
        return (u, self.fn(u))

    def shifted(self, k):
        fn = self.fn
        dfn = self.dfn
        return ParametricFrontier(
            fn=lambda u, _f=fn, _k=k: _f(u - _k),
            u_lo=self.u_lo + k,
            u_hi=self.u_hi + k,
            dfn=None if dfn is None else (lambda u, _d=dfn, _k=k: _d(u - _k)),
            fd_step=self.fd_step,
        )


# either concrete representation; useful for isinstance checks and typing
Frontier = (PiecewiseFrontier, ParametricFrontier)
FrontierT = object


def build_piecewise(points: Sequence[Sequence[float]]) -> PiecewiseFrontier:
    """Validate breakpoints and build a piecewise-linear frontier."""
    return PiecewiseFrontier(tuple((u, v) for u, v in points))


def eval_derivs(f, u):
    """``(value, d_plus, d_minus)`` of frontier ``f`` at ``u``."""
    return f.derivs(u)


def peak(f):
    """``(u, value)`` at the frontier's unique maximum."""
    return f.peak


def _supporting_interval(f, u):
    _, d_plus, d_minus = f.derivs(u)
    return d_plus, d_minus


def u_star(f0, f1, *, tol: float = 1e-10) -> float:
    """Rightmost ``u`` in ``[0, u0]`` where ``f0`` and ``f1`` share a
    non-negative supporting slope.

    The non-negativity requirement is what makes the definition match the
    intended object (the local peak of the gap ``f1 - f0``): left of the
    ``f0`` peak all supporting slopes of ``f0`` are non-negative anyway, and
    at the peak itself it discards the spurious intersection that the kink
    of a piecewise-linear ``f0`` would otherwise create where the gap is
    locally *minimal*.

    Piecewise pairs are scanned breakpoint-by-breakpoint right to left
    (exact; preserves Fraction inputs).  Smooth pairs use sign bisection on
    ``d+f0 - d+f1``; if the slopes never cross, the frontiers share a slope
    only at the bottom of the domain, which is then returned.
    """
    u0 = f0.peak[0]
    lo = max(f0.u_lo, f1.u_lo)
    cap = min(u0, f0.u_hi, f1.u_hi)
    if cap < lo:
        raise ModelAssumptionError("frontier domains do not overlap below the f0 peak")

    if isinstance(f0, PiecewiseFrontier) and isinstance(f1, PiecewiseFrontier):
        cands = {lo, cap}
        for f in (f0, f1):
            for u, _ in f.points:
                if lo < u < cap:
                    cands.add(u)
        for u in sorted(cands, reverse=True):
            dp0, dm0 = _supporting_interval(f0, u)
            dp1, dm1 = _supporting_interval(f1, u)
            lo_b = max(dp0, dp1, 0)
            hi_b = min(dm0, dm1)
            if lo_b <= hi_b:
                return u
        raise ModelAssumptionError("no shared supporting slope found")  # pragma: no cover

    def psi(u: float) -> float:
        _, dp0, dm0 = f0.derivs(u)
        _, dp1, dm1 = f1.derivs(u)
        a = dp0 if math.isfinite(dp0) else dm0
        b = dp1 if math.isfinite(dp1) else dm1
        return a - b

    if psi(cap) < 0.0:
        raise ModelAssumptionError(
            "frontiers still diverging at the f0 peak; check the conflict of interest")
    n = 512
    grid = [lo + (cap - lo) * i / n for i in range(n + 1)]
    vals = [psi(u) for u in grid]
    for i in range(n - 1, -1, -1):
        if vals[i] <= 0.0:
            return bisect_up(psi, grid[i], grid[i + 1], tol_x=tol)
    return lo


def affine_gap(f0, lo, hi, *, step: float = 1e-4) -> float:
    """Largest deviation of ``f0`` from the chord over ``[lo, hi]``.

    The chord connects ``(lo, f0(lo))`` and ``(hi, f0(hi))``; the maximum is
    taken on an evenly spaced grid with roughly the given step.  Zero for an
    affine piece; the value bounds how much the best deadline scheme can
    lose relative to the unrestricted optimum.
    """
    lo = float(lo)
    hi = float(hi)
    if hi <= lo:
        return 0.0
    v_lo = float(f0.value(lo))
    v_hi = float(f0.value(hi))
    slope = (v_hi - v_lo) / (hi - lo)
    n = max(1, int(round((hi - lo) / step)))
    gap = 0.0
    for i in range(n + 1):
        u = lo + (hi - lo) * i / n
        dev = float(f0.value(u)) - (v_lo + slope * (u - lo))
        if dev > gap:
            gap = dev
    return gap


@dataclass(frozen=True)
class TechnologyPair:
    """The two frontiers plus the constants every solver needs.

    ``u0``/``u1`` are the peak agent-utility levels of ``f0``/``f1`` and
    ``u_star`` is the rightmost shared-slope level (see :func:`u_star`).
    Build through :meth:`build` so the derived fields stay consistent.
    """

    f0: object
    f1: object
    r: float
    u0: float
    u1: float
    u_star: float

    @classmethod
    def build(cls, f0, f1, r) -> "TechnologyPair":
        if not r > 0:
            raise ModelAssumptionError(f"discount rate must be positive, got {r}")
        return cls(f0=f0, f1=f1, r=r,
                   u0=f0.peak[0], u1=f1.peak[0], u_star=u_star(f0, f1))

    @property
    def f0_peak_value(self):
        return self.f0.value(self.u0)

    @property
    def f1_peak_value(self):
        return self.f1.value(self.u1)

    def shifted(self, k) -> "TechnologyPair":
        """Translate both frontiers by +k in agent utility (participation
        shift).  Payoffs are unchanged; levels map back by subtracting k."""
        return TechnologyPair.build(self.f0.shifted(k), self.f1.shifted(k), self.r)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Optional[float] = None
    detail: str = ""


@dataclass(frozen=True)
class ModelReport:
    checks: Tuple[Check, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> Tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)


def validate_model(pair: TechnologyPair, *, n_grid: int = 400,
                   probe: float = 1e-4, tol: float = 1e-12) -> ModelReport:
    """Grid-check the pair-level model assumptions.

    Returns a report rather than raising: a saddle or a dominance failure is
    something callers may want to surface verbatim (the CLI turns a failed
    report into exit code 2).
    """
    checks = []
    checks.append(Check("discount_rate_positive", pair.r > 0, witness=None,
                        detail=f"r={pair.r}"))
    checks.append(Check(
        "conflict_of_interest", pair.u1 < pair.u0,
        witness=float(pair.u1),
        detail=f"u1={pair.u1}, u0={pair.u0}"))

    lo = max(pair.f0.u_lo, pair.f1.u_lo)
    hi = min(pair.f0.u_hi, pair.f1.u_hi)
    dom_ok = True
    dom_witness = None
    lo_f, hi_f = float(lo), float(hi)
    for i in range(n_grid + 1):
        u = lo_f + (hi_f - lo_f) * i / n_grid
        v0 = pair.f0.value(u)
        v1 = pair.f1.value(u)
        if is_neg_inf(v0) or is_neg_inf(v1):
            continue
        if not float(v1) >= float(v0) - 1e-9:
            dom_ok = False
            dom_witness = u
            break
    checks.append(Check("f1_dominates_f0", dom_ok, witness=dom_witness,
                        detail="grid-sampled pointwise dominance"))

    us = pair.u_star
    checks.append(Check(
        "u_star_in_range", 0 <= us <= pair.u1 + 1e-12,
        witness=float(us), detail=f"u_star={us}, u1={pair.u1}"))

    # strict local max of the gap at u_star: strictly decreasing just right,
    # not increasing just left (left probe skipped at a domain edge)
    def gap(u):
        v0 = pair.f0.value(u)
        v1 = pair.f1.value(u)
        if is_neg_inf(v0) or is_neg_inf(v1):
            return None
        return float(v1) - float(v0)

    g0 = gap(us)
    g_right = gap(min(float(us) + probe, hi_f))
    g_left = gap(max(float(us) - probe, lo_f)) if float(us) - probe > lo_f else None
    strict_ok = g0 is not None and g_right is not None and g_right < g0 - tol
    left_ok = g_left is None or g_left <= g0 + tol
    checks.append(Check(
        "u_star_strict_local_max", bool(strict_ok and left_ok),
        witness=float(us),
        detail="saddle or flat gap at the shared-slope level" if not (strict_ok and left_ok)
        else "gap strictly falls to the right, does not rise from the left"))

    return ModelReport(checks=tuple(checks))
