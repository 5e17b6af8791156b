"""Optimal reward paths in the strictly concave ("simple") case.

With a smooth, strictly concave pair the optimal mechanism is no longer a
deadline: the flow path holds the ``f0`` peak until the first breakthrough
atom and then steps down cell by cell.  The levels satisfy a backward
recursion tying each cell's marginal flow value to the expected marginal
reward value over later breakthrough times, pinned down by the terminal
level ``lam``:

    x_{t_K} = X_{t_K} = lam
    x_{t_k} = invd0( E[ d1(X_tau) | tau > t_k ] )
    X_{t_k} = (1 - exp(-r D)) x_{t_k} + exp(-r D) X_{t_{k+1}},  D = t_{k+1}-t_k

where ``d0``/``d1`` are the frontier derivatives and ``invd0`` inverts
``d0`` on ``[u_star, u0]``.  The scalar residual

    psi(lam) = E[ d1(X_tau^lam) ]

is decreasing with psi(u_star) = d0(u_star) >= 0 >= d1(u0) = psi(u0), so a
sign bisection in ``lam`` closes the system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .distribution import BreakthroughDist, discretize, order_checks, OrderReport
from .errors import AtomAtZero, BracketFailure, NotSimple
from .frontier import TechnologyPair, is_neg_inf
from .mechanism import Mechanism, continuation_value, payoff
from .numerics import bisect_down

PSI_TOL = 1e-10
LAM_TOL = 1e-12


def _slope(f, u: float) -> float:
    """One-sided frontier derivative, finite side preferred (the two sides
    agree in the smooth interior; only the domain endpoints differ)."""
    _, d_plus, d_minus = f.derivs(u)
    if d_plus is not None and math.isfinite(d_plus):
        return d_plus
    if d_minus is not None and math.isfinite(d_minus):
        return d_minus
    raise NotSimple([f"no finite slope at u={u}"])


def simple_reasons(pair: TechnologyPair, *, n_grid: int = 201) -> Tuple[str, ...]:
    """Why the pair falls outside the strictly-concave class (empty = simple).

    Checks, on the band ``[u_star, u0]``: strictly negative second
    differences of both frontiers (kinks and flat pieces fail this), a
    strictly positive ``u_star`` (the backward recursion needs slack below
    the terminal level), and finite one-sided slopes at the band endpoints.
    """
    reasons = []
    ustar, u0 = float(pair.u_star), float(pair.u0)
    if not ustar > 0.0:
        reasons.append(f"u_star={ustar} is not strictly positive")
    if not u0 > ustar:
        reasons.append(f"empty band: u0={u0} <= u_star={ustar}")
        return tuple(reasons)

    h = (u0 - ustar) / (n_grid - 1)
    for name, f in (("f0", pair.f0), ("f1", pair.f1)):
        vals = []
        for i in range(n_grid):
            v = f.value(ustar + h * i)
            if is_neg_inf(v):
                reasons.append(f"{name} undefined inside [u_star, u0] at u={ustar + h * i}")
                break
            vals.append(float(v))
        if len(vals) < n_grid:
            continue
        worst = max(vals[i + 1] - 2.0 * vals[i] + vals[i - 1]
                    for i in range(1, n_grid - 1))
        if not worst < -1e-9:
            reasons.append(
                f"{name} is not strictly concave on [u_star, u0] "
                f"(max second difference {worst:.3e})")
        for u in (ustar, u0):
            try:
                d = _slope(f, u)
            except NotSimple:
                reasons.append(f"{name} has no finite slope at u={u}")
                continue
            if not math.isfinite(d):
                reasons.append(f"{name} slope at u={u} is not finite")
    return tuple(reasons)


def assert_simple(pair: TechnologyPair) -> None:
    reasons = simple_reasons(pair)
    if reasons:
        raise NotSimple(reasons)


def inv_deriv_f0(pair: TechnologyPair, y: float) -> float:
    """Invert the ``f0`` slope on ``[u_star, u0]``, clamping outside.

    The slope is strictly decreasing there, so bisection applies; targets
    above the slope at ``u_star`` clamp to ``u_star`` and targets below the
    slope at the peak (which is ~0) clamp to ``u0``.
    """
    ustar, u0 = float(pair.u_star), float(pair.u0)

    def g(u: float) -> float:
        return _slope(pair.f0, u) - y

    g_lo = g(ustar)
    if g_lo <= 0.0:
        return ustar
    g_hi = g(u0)
    if g_hi >= 0.0:
        return u0
    return bisect_down(g, ustar, u0, f_lo=g_lo, f_hi=g_hi, tol_x=1e-13)


def backward_pass(pair: TechnologyPair, dist: BreakthroughDist,
                  lam: float) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Flow levels and continuation values at the breakthrough atoms for a
    trial terminal level ``lam``.  Returns ``(levels, conts)``, one entry
    per atom; ``levels[-1] == conts[-1] == lam``."""
    times, probs = dist.times, dist.probs
    if times[0] <= 0.0:
        raise AtomAtZero(
            "breakthrough mass at t=0 leaves no pre-atom cell to optimize")
    k_n = len(times)
    x = [0.0] * k_n
    cx = [0.0] * k_n
    x[-1] = cx[-1] = float(lam)
    tail_sum = probs[-1] * _slope(pair.f1, cx[-1])
    tail_mass = probs[-1]
    for k in range(k_n - 2, -1, -1):
        x[k] = inv_deriv_f0(pair, tail_sum / tail_mass)
        d = math.exp(-pair.r * (times[k + 1] - times[k]))
        cx[k] = (1.0 - d) * x[k] + d * cx[k + 1]
        tail_sum += probs[k] * _slope(pair.f1, cx[k])
        tail_mass += probs[k]
    return tuple(x), tuple(cx)


def psi(pair: TechnologyPair, dist: BreakthroughDist, lam: float) -> float:
    """Expected ``f1`` slope at the atom continuation values — the scalar
    whose root in ``lam`` closes the backward recursion."""
    _, conts = backward_pass(pair, dist, lam)
    return math.fsum(p * _slope(pair.f1, c)
                     for p, c in zip(dist.probs, conts))


@dataclass(frozen=True)
class EulerSolution:
    """Solved reward path: atom times, flow levels and continuation values
    per atom cell, the terminal level and its residual, the assembled step
    mechanism (peak flow before the first atom), and its expected payoff.
    ``extra_roots`` lists other residual roots found by the scan (normally
    empty — the residual is monotone for simple pairs)."""

    times: Tuple[float, ...]
    levels: Tuple[float, ...]
    conts: Tuple[float, ...]
    lam: float
    psi: float
    mechanism: Mechanism
    payoff: float
    extra_roots: Tuple[float, ...] = ()


def _assemble(pair: TechnologyPair, dist: BreakthroughDist,
              lam: float) -> Tuple[Tuple[float, ...], Tuple[float, ...], Mechanism]:
    levels, conts = backward_pass(pair, dist, lam)
    mech = Mechanism(grid=(0.0,) + dist.times,
                     levels=(float(pair.u0),) + levels)
    return levels, conts, mech


def solve(pair: TechnologyPair, dist: BreakthroughDist, *,
          tol_psi: float = PSI_TOL, tol_lam: float = LAM_TOL,
          n_scan: int = 32) -> EulerSolution:
    """Solve for the optimal reward path of a simple pair.

    ``psi`` is scanned on ``[u_star, u0]``; every down-crossing is bisected
    and the candidate with the best expected payoff wins (they coincide when
    ``psi`` is monotone, which is the normal case).  A ``psi`` that is
    negative at ``u_star`` or positive at ``u0`` beyond tolerance means the
    theoretical bracket failed, which is reported rather than papered over.
    """
    assert_simple(pair)
    ustar, u0 = float(pair.u_star), float(pair.u0)

    def f(lam: float) -> float:
        return psi(pair, dist, lam)

    grid = [ustar + (u0 - ustar) * i / n_scan for i in range(n_scan + 1)]
    vals = [f(lam) for lam in grid]
    if vals[0] < -1e-9:
        raise BracketFailure(
            f"psi(u_star)={vals[0]:.3e} < 0; expected >= 0 at the bottom level")
    if vals[-1] > 1e-9:
        raise BracketFailure(
            f"psi(u0)={vals[-1]:.3e} > 0; expected <= 0 at the peak level")

    roots = []
    if vals[0] <= 0.0:
        roots.append(grid[0])
    for i in range(n_scan):
        if vals[i] >= 0.0 > vals[i + 1]:
            roots.append(bisect_down(f, grid[i], grid[i + 1],
                                     f_lo=vals[i], f_hi=vals[i + 1],
                                     tol_x=tol_lam, tol_f=tol_psi))
    if vals[-1] >= 0.0:
        roots.append(grid[-1])
    if not roots:
        raise BracketFailure("no psi root located on [u_star, u0]")

    best = None
    for lam in roots:
        levels, conts, mech = _assemble(pair, dist, lam)
        val = payoff(mech, pair, dist).total
        if not isinstance(val, float):
            continue
        if best is None or val > best[0]:
            best = (val, lam, levels, conts, mech)
    if best is None:
        raise BracketFailure("every psi root produced an off-domain payoff")

    val, lam, levels, conts, mech = best
    return EulerSolution(times=dist.times, levels=levels, conts=conts,
                         lam=lam, psi=f(lam), mechanism=mech, payoff=val,
                         extra_roots=tuple(r for r in roots if r != lam))


def euler_residuals(pair: TechnologyPair, dist: BreakthroughDist,
                    levels, conts) -> Tuple[float, ...]:
    """Per-atom stationarity residuals of a candidate path.

    Cell k is stationary when the survival-weighted flow slope balances the
    cumulated reward slopes:

        R_k = [1 - G(t_k)] d0(x_k) + sum_{j <= k} p_j d1(X_j)

    Levels and continuation values enter independently (no recomputation of
    one from the other), so the residuals detect inconsistent inputs; at the
    solved path ``max |R_k|`` is at numerical zero and ``R_K`` equals the
    terminal residual ``psi``.
    """
    out = []
    running = 0.0
    for t_k, p_k, x_k, c_k in zip(dist.times, dist.probs, levels, conts):
        running += p_k * _slope(pair.f1, c_k)
        survival = 1.0 - dist.cdf(t_k)
        out.append(survival * _slope(pair.f0, x_k) + running)
    return tuple(out)


@dataclass(frozen=True)
class GeneralSolution:
    """Reward path under a discretized continuous breakthrough law, with a
    self-convergence gap against the half-resolution discretization."""

    solution: EulerSolution
    m: int
    m_coarse: int
    gap: float


def solve_general(pair: TechnologyPair, kind: str, m: int,
                  *, n_probe: int = 201, **params) -> GeneralSolution:
    """Discretize a named continuous law at ``m`` and ``m // 2`` support
    points, solve both, and report the sup gap between the two continuation
    profiles as the convergence diagnostic."""
    if m < 4:
        raise BracketFailure(f"need at least 4 support points, got {m}")
    fine = discretize(kind, m, **params)
    coarse = discretize(kind, max(m // 2, 2), **params)
    sol_f = solve(pair, fine)
    sol_c = solve(pair, coarse)
    t_hi = max(fine.support_hi, coarse.support_hi)
    gap = 0.0
    for i in range(n_probe):
        t = t_hi * i / (n_probe - 1)
        a = continuation_value(sol_f.mechanism, pair.r, t)
        b = continuation_value(sol_c.mechanism, pair.r, t)
        gap = max(gap, abs(a - b))
    return GeneralSolution(solution=sol_f, m=m, m_coarse=max(m // 2, 2), gap=gap)


@dataclass(frozen=True)
class ComparativeStatics:
    """Pointwise comparison of two solved reward paths.

    ``ok`` means the path under the first (stochastically later) law stays
    weakly above the path under the second everywhere probed."""

    order: OrderReport
    ok: bool
    max_violation: float
    witness: Optional[float] = None


def comparative_statics_check(pair: TechnologyPair, dist: BreakthroughDist,
                              dist_dag: BreakthroughDist, *,
                              n_probe: int = 100,
                              tol: float = 1e-9) -> ComparativeStatics:
    """Solve under both laws and check the continuation profile under
    ``dist`` dominates the one under ``dist_dag`` pointwise (the predicted
    direction when ``dist`` likelihood-ratio dominates ``dist_dag``)."""
    order = order_checks(dist, dist_dag)
    sol = solve(pair, dist)
    sol_dag = solve(pair, dist_dag)
    t_hi = max(dist.support_hi, dist_dag.support_hi) * 1.25
    probes = sorted(set(dist.times) | set(dist_dag.times)
                    | {t_hi * i / (n_probe - 1) for i in range(n_probe)})
    worst, witness = -math.inf, None
    for t in probes:
        a = continuation_value(sol.mechanism, pair.r, t)
        b = continuation_value(sol_dag.mechanism, pair.r, t)
        if b - a > worst:
            worst, witness = b - a, t
    ok = worst <= tol
    return ComparativeStatics(order=order, ok=ok, max_violation=worst,
                              witness=None if ok else witness)
