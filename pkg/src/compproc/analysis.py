"""Derived quantities and empirical diagnostics for the linear model.

The first half is exact algebra around the equilibrium direction of the
linear-interaction chain: the slope ``r`` (positive root of
``beta2 r^2 + (alpha1 - alpha2) r - beta1 = 0``), the offset ``d``, the drift
constant ``rho_tilde = alpha1 alpha2 - beta1 beta2``, the linear functionals
``R, S, T, U`` and the one-step identities they satisfy.  Everything is
stated under the convention ``alpha1 >= alpha2``; when a model violates it
the coordinates are relabelled internally and the ``swapped`` flag records
the fact.

The second half turns trajectories into statistics: boundary-behaviour
classification, hitting-time Monte Carlo, the law-of-large-numbers check for
``S_n / n``, the auxiliary urn with its moment recursion and martingale, and
the ratio-test classification of the hitting/recurrence series built from
diagonal rate extremes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import TrajectoryTooShortError
from .models import (AuxUrnModel, State, TypeIIModel, TypeIModel, _raw_moves,
                     check_state, require_valid)
from .simulate import StopRule, Trajectory, TrajectorySummary, batch

# ---------------------------------------------------------------------------
# equilibrium-direction diagnostics and exact identities


@dataclass(frozen=True)
class LinearDiagnostics:
    """Constants of the equilibrium-direction analysis of a type II model.

    All fields refer to the relabelled model (``swapped`` tells whether the
    user's coordinates were exchanged to enforce ``alpha1 >= alpha2``).
    ``k``/``l`` are the decomposition coefficients in
    ``R = (lambda1+lambda2) + k S + l T`` and are ``None`` in the critical
    regime, where ``S`` and ``T`` are collinear.
    """

    model: TypeIIModel
    swapped: bool
    r: float
    D: float
    d: float
    rho_tilde: float
    regime: str
    k: Optional[float]
    l: Optional[float]
    cubic_coeff: float
    Q1: float
    Q3: float
    y0: int

    def map_state(self, s: State) -> State:
        return (s[1], s[0]) if self.swapped else (s[0], s[1])


def linear_diagnostics(m: TypeIIModel) -> LinearDiagnostics:
    """Solve for the unstable direction and every derived constant."""
    require_valid(m)
    swapped = m.alpha1 < m.alpha2
    mm = m.swapped() if swapped else m
    a1, a2, b1, b2 = mm.alpha1, mm.alpha2, mm.beta1, mm.beta2
    l1, l2 = mm.lambda1, mm.lambda2
    D = math.sqrt((a1 - a2) ** 2 + 4 * b1 * b2)
    r = (-(a1 - a2) + D) / (2 * b2)
    d = -(2 * (l1 - l2 * r) + a1 + b2 * r * r) / (2 * (a1 + b2 * r))
    rho = a1 * a2 - b1 * b2
    if rho > 0:
        regime = "supercritical"
    elif rho < 0:
        regime = "subcritical"
    else:
        regime = "critical"
    if rho != 0:
        k = (a1 + r * b2) / rho
        l = -(((a1 * a2 + 2 * a2 * b2 + b1 * b2) * r
               + a1 * a2 + 2 * a1 * b1 + b1 * b2) / rho)
    else:
        k = l = None
    cubic = b1 + a1 * r + a2 * r**2 + b2 * r**3
    Q1 = d * (a1 + b2 * r) + l1 - r * l2
    Q3 = l1 + l2 * r**2 - 2 * d * (l1 - l2 * r) - 2 * d**2 * (a1 + b2 * r)
    y0 = 0
    while cubic * y0 + Q3 <= 0:
        y0 += 1
    return LinearDiagnostics(mm, swapped, r, D, d, rho, regime, k, l,
                             cubic, Q1, Q3, y0)


def functionals(diag: LinearDiagnostics, s: State) -> tuple[float, float, float, float]:
    """``(R, S, T, U)`` at a state (given in the user's coordinates)."""
    x, y = diag.map_state(check_state(s))
    m = diag.model
    R = ((m.alpha1 + m.beta2) * x + (m.alpha2 + m.beta1) * y
         + m.lambda1 + m.lambda2)
    S = ((m.alpha1 * m.alpha2 + m.beta1 * m.beta2 + 2 * m.alpha2 * m.beta2) * x
         + (m.alpha1 * m.alpha2 + m.beta1 * m.beta2 + 2 * m.alpha1 * m.beta1) * y)
    T = m.beta2 * x + (diag.r * m.beta2 + m.alpha1 - m.alpha2) * y
    U = x - diag.r * y - diag.d
    return R, S, T, U


@dataclass(frozen=True)
class UnSquaredStep:
    """One-step conditional second moment of the departure functional ``U``.

    ``lhs`` is the exact jump-chain expectation by enumeration over the four
    moves; it equals ``rhs_main + rhs_remainder``.  The remainder's numerator
    ``2 U Q1 + Q2`` collapses to ``cubic_coeff * y + Q3``, independent of
    ``x``, and is positive exactly when ``y >= y0``.  Note the ``Q2`` here
    carries the immigration constants ``lambda1 + r^2 lambda2``; without them
    the two identities cannot hold simultaneously.
    """

    lhs: float
    rhs_main: float
    rhs_remainder: float
    remainder_numerator: float
    reduced_numerator: float
    positive: bool


def un_squared_one_step(diag: LinearDiagnostics, s: State) -> UnSquaredStep:
    """Evaluate the one-step ``U^2`` identity at an interior state."""
    x, y = diag.map_state(check_state(s))
    if x == 0 or y == 0:
        raise ValueError(f"state {s} is not interior")
    m = diag.model
    r, d = diag.r, diag.d
    R, _, _, U = functionals(diag, (s[0], s[1]))
    rates = (m.lambda1 + m.alpha1 * x, m.lambda2 + m.alpha2 * y,
             m.beta1 * y, m.beta2 * x)
    deltas = (1.0, -r, -1.0, r)
    lhs = sum(rate / R * (U + du) ** 2 for rate, du in zip(rates, deltas))
    rhs_main = U**2 * (1.0 + 2.0 * (m.alpha1 + r * m.beta2) / R)
    q2 = ((r**2 * m.beta2 + m.alpha1) * x + (m.beta1 + r**2 * m.alpha2) * y
          + m.lambda1 + r**2 * m.lambda2)
    numerator = 2.0 * U * diag.Q1 + q2
    reduced = diag.cubic_coeff * y + diag.Q3
    return UnSquaredStep(lhs, rhs_main, numerator / R, numerator, reduced,
                         reduced > 0)


def s_drift_one_step(diag: LinearDiagnostics, s: State) -> tuple[float, float]:
    """Exact one-step drift of ``S`` versus its closed form.

    Returns ``(enumerated, rho_tilde + correction / R)``; the two must agree
    to rounding for every state, and the closed form is ``>= rho_tilde``.
    """
    x, y = diag.map_state(check_state(s))
    m = diag.model
    R, S0, _, _ = functionals(diag, (s[0], s[1]))
    sx = m.alpha1 * m.alpha2 + m.beta1 * m.beta2 + 2 * m.alpha2 * m.beta2
    sy = m.alpha1 * m.alpha2 + m.beta1 * m.beta2 + 2 * m.alpha1 * m.beta1
    rates = (m.lambda1 + m.alpha1 * x, m.lambda2 + m.alpha2 * y,
             m.beta1 * y if x > 0 else 0.0, m.beta2 * x if y > 0 else 0.0)
    moves = (sx, sy, -sx, -sy)
    total = sum(rates)
    enumerated = sum(rate / total * ds for rate, ds in zip(rates, moves))
    correction = (2 * m.lambda1 * m.beta2 * (m.alpha2 + m.beta1)
                  + 2 * m.lambda2 * m.beta1 * (m.alpha1 + m.beta2))
    return enumerated, diag.rho_tilde + correction / R


# ---------------------------------------------------------------------------
# trajectory classification


@dataclass(frozen=True)
class ClassificationResult:
    """Boundary-behaviour summary of one finished trajectory."""

    confined: bool
    major_axis: int
    kappa_expected: int
    kappa_observed: int
    level_visit_counts: dict[int, int]
    oscillations: int
    escape_slope: float


def _kappa_expected(model, major_axis: int) -> int:
    if isinstance(model, TypeIModel):
        return 1
    if isinstance(model, TypeIIModel):
        alpha_major = model.alpha1 if major_axis == 1 else model.alpha2
        return 1 if alpha_major > 0 else 2
    raise TypeError("classification applies to type I and type II models")


def classify(trajectory: Trajectory, burn_in_fraction: float = 0.5) -> ClassificationResult:
    """Classify confinement of the minor coordinate after a burn-in window.

    The statistic tracked is ``min(x1, x2)``, whose full path is preserved by
    both the ``full`` and ``crossings`` recording modes; once the chain has
    confined it coincides with the non-escaping coordinate.  The reported
    ``kappa_observed`` is the largest minor value seen strictly after the
    burn-in jump, the finite-horizon proxy for its limsup.
    """
    if not 0.0 <= burn_in_fraction < 1.0:
        raise ValueError("burn_in_fraction must lie in [0, 1)")
    if trajectory.record == "none":
        raise ValueError("classification needs a recorded trajectory")
    n_total = trajectory.n_jumps
    n_burn = int(n_total * burn_in_fraction)
    if n_total - n_burn < 1000:
        raise TrajectoryTooShortError(
            f"only {n_total - n_burn} post-burn-in events, need >= 1000")

    minima = np.minimum(trajectory.events_x1, trajectory.events_x2)
    ev_n = trajectory.events_n
    pre = np.nonzero(ev_n <= n_burn)[0]
    start_val = int(minima[pre[-1]]) if pre.size else min(trajectory.initial)
    post = minima[ev_n > n_burn]
    path = np.concatenate(([start_val], post)).astype(np.int64)
    changes = path[np.concatenate(([True], np.diff(path) != 0))]

    kappa_observed = int(path.max())
    counts: dict[int, int] = {}
    for v in changes[1:]:
        counts[int(v)] = counts.get(int(v), 0) + 1

    oscillations = 0
    if kappa_observed > 0:
        reached_top = changes[0] == kappa_observed
        for v in changes[1:]:
            if v == kappa_observed:
                reached_top = True
            elif v == 0 and reached_top:
                oscillations += 1
                reached_top = False

    fx1, fx2 = trajectory.final_state
    major_axis = 1 if fx1 >= fx2 else 2
    kappa_expected = _kappa_expected(trajectory.model, major_axis)
    major_final = fx1 if major_axis == 1 else fx2
    return ClassificationResult(
        confined=kappa_observed <= kappa_expected,
        major_axis=major_axis,
        kappa_expected=kappa_expected,
        kappa_observed=kappa_observed,
        level_visit_counts=counts,
        oscillations=oscillations,
        escape_slope=major_final / max(n_total, 1),
    )


# ---------------------------------------------------------------------------
# hitting times


@dataclass(frozen=True)
class HittingStats:
    start: State
    n_runs: int
    hit_fraction: float
    censored: int
    errors: int
    mean_tau_jumps: Optional[float]
    se_tau_jumps: Optional[float]
    mean_tau_time: Optional[float]
    se_tau_time: Optional[float]


def summarise_hitting(start: State, summaries: Sequence[TrajectorySummary]) -> HittingStats:
    """Aggregate batch summaries of boundary-stopped runs into statistics."""
    taus_j = np.array([s.tau_jumps for s in summaries
                       if s.tau_jumps is not None], dtype=float)
    taus_t = np.array([s.tau_time for s in summaries
                       if s.tau_time is not None], dtype=float)
    errors = sum(1 for s in summaries if s.error is not None)
    n = len(summaries)
    hits = taus_j.size

    def _mean_se(a):
        if a.size == 0:
            return None, None
        se = float(a.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else 0.0
        return float(a.mean()), se

    mj, sj = _mean_se(taus_j)
    mt, st = _mean_se(taus_t)
    return HittingStats(check_state(start), n, hits / n,
                        n - hits - errors, errors, mj, sj, mt, st)


def hitting_stats(model, starts: Sequence[State], seeds: Sequence[int],
                  cap: int, workers: int = 1) -> list[HittingStats]:
    """Monte Carlo estimates of the boundary hitting time per start state.

    Runs stopped by the jump cap are reported as censored, not dropped from
    the run count.
    """
    stop = StopRule(max_jumps=cap, stop_on_boundary=True)
    return [summarise_hitting(start,
                              batch(model, start, stop, seeds,
                                    workers=workers, record="none"))
            for start in starts]


# ---------------------------------------------------------------------------
# law of large numbers for S_n


@dataclass(frozen=True)
class LlnReport:
    """Slope diagnostics of ``S_n`` along the pre-hitting segment.

    ``slope`` is the least-squares slope over the second half of the
    recorded segment; ``log_ratio`` is ``ln(max S_n) / ln(horizon)`` with the
    path frozen at the stop (the sublinearity statistic used in the critical
    regime); ``rel_gap`` is ``None`` when ``rho_tilde = 0``.
    """

    n_events: int
    slope: float
    rho_tilde: float
    rel_gap: Optional[float]
    log_ratio: float
    horizon: int
    inconclusive: bool


def lln_check(trajectory: Trajectory, diag: LinearDiagnostics) -> LlnReport:
    """Compare the empirical growth rate of ``S_n`` with ``rho_tilde``."""
    if not trajectory.jump_chain:
        raise ValueError("lln_check needs a jump-chain trajectory")
    m = diag.model
    sx = m.alpha1 * m.alpha2 + m.beta1 * m.beta2 + 2 * m.alpha2 * m.beta2
    sy = m.alpha1 * m.alpha2 + m.beta1 * m.beta2 + 2 * m.alpha1 * m.beta1
    x = trajectory.events_x1.astype(float)
    y = trajectory.events_x2.astype(float)
    if diag.swapped:
        x, y = y, x
    x0, y0 = diag.map_state(trajectory.initial)
    n = np.concatenate(([0], trajectory.events_n)).astype(float)
    S = np.concatenate(([sx * x0 + sy * y0], sx * x + sy * y))

    N = trajectory.n_jumps
    half = n >= N / 2.0
    if half.sum() >= 2 and N >= 2:
        slope = float(np.polyfit(n[half], S[half], 1)[0])
    else:
        slope = math.nan
    rho = diag.rho_tilde
    rel_gap = abs(slope - rho) / abs(rho) if rho != 0 else None
    horizon = trajectory.stop.max_jumps or N
    log_ratio = math.log(max(S.max(), 1.0)) / math.log(max(horizon, 2))
    return LlnReport(int(trajectory.events_n.size), slope, rho, rel_gap,
                     log_ratio, int(horizon), N < 10**4)


# ---------------------------------------------------------------------------
# auxiliary urn


def _urn_factors(model: AuxUrnModel, s0: int, n: int, j: int) -> np.ndarray:
    """``a_k(j) = 1 + (alpha-beta) j / (s + (alpha+beta) k)`` for k < n."""
    k = np.arange(n, dtype=float)
    s = (model.alpha + model.beta) * s0
    return 1.0 + (model.alpha - model.beta) * j / (s + (model.alpha + model.beta) * k)


@dataclass
class UrnDiagnostics:
    """Path functionals of one urn run: differences, martingale, scaling."""

    model: AuxUrnModel
    initial: State
    seed: int
    rho: float
    U: np.ndarray            # U_0 .. U_n
    Z: np.ndarray            # Z_0 = U_0, then the compensated martingale
    scaled_diff: np.ndarray  # k**-rho * U_k for k >= 1

    @property
    def s0(self) -> int:
        return self.initial[0] + self.initial[1]


def urn_simulate(model: AuxUrnModel, initial: State, n_steps: int,
                 seed: int) -> UrnDiagnostics:
    """Simulate the urn jump chain and compute its martingale normalisation.

    One uniform is consumed per step from a PCG64 stream seeded exactly as in
    :func:`compproc.simulate.simulate`.
    """
    require_valid(model)
    initial = check_state(initial)
    if initial == (0, 0):
        raise ValueError("urn initial state must differ from (0, 0)")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    x, y = initial
    U = np.empty(n_steps + 1, dtype=np.int64)
    U[0] = x - y
    n_done = 0
    chunk = 1 << 16
    while n_done < n_steps:
        u = rng.random(min(chunk, n_steps - n_done))
        out = np.empty(u.size, dtype=np.int64)
        x, y, n_done, used = _kernels.run_urn(model.alpha, model.beta,
                                              x, y, u, n_done, n_steps, out)
        U[n_done - used + 1: n_done + 1] = out[:used]
    factors = _urn_factors(model, initial[0] + initial[1], n_steps, 1)
    prods = np.cumprod(factors)
    Z = np.concatenate(([float(U[0])], U[1:] / prods))
    ks = np.arange(1, n_steps + 1, dtype=float)
    scaled = U[1:] * ks ** (-model.rho)
    return UrnDiagnostics(model, initial, seed, model.rho, U, Z, scaled)


def urn_martingale_residuals(diag: UrnDiagnostics) -> np.ndarray:
    """Relative one-step martingale residuals of ``Z`` along the path.

    Each entry compares the exact conditional expectation of ``Z_{n+1}``
    (two-point enumeration at the visited state) with ``Z_n``; all entries
    vanish to rounding for any valid urn.
    """
    m = diag.model
    n = diag.U.size - 1
    S = diag.s0 + np.arange(n, dtype=float)          # S_k for k = 0..n-1
    U = diag.U[:-1].astype(float)
    X = (S + U) / 2.0
    Y = (S - U) / 2.0
    p_right = (m.alpha * X + m.beta * Y) / ((m.alpha + m.beta) * S)
    expect_U_next = p_right * (U + 1.0) + (1.0 - p_right) * (U - 1.0)
    prods = np.cumprod(_urn_factors(m, diag.s0, n, 1))
    expect_Z_next = expect_U_next / prods
    resid = expect_Z_next - diag.Z[:-1]
    return np.abs(resid) / np.maximum(1.0, np.abs(diag.Z[:-1]))


@dataclass
class UrnMoments:
    """Deterministic moment recursion ``E U_{n+1} = E U_n a_n(1)``,
    ``E U_{n+1}^2 = E U_n^2 a_n(2) + 1``."""

    model: AuxUrnModel
    initial: State
    EU: np.ndarray
    EU2: np.ndarray
    scaled_second: np.ndarray   # n**(-2 rho) E U_n^2 for n >= 1
    running_max: np.ndarray

    def plateau_change(self, n1: int, n2: int) -> float:
        """Relative growth of the running max between steps n1 and n2."""
        return (self.running_max[n2 - 1] - self.running_max[n1 - 1]) \
            / self.running_max[n1 - 1]


def urn_moment_recursion(model: AuxUrnModel, initial: State,
                         n_max: int) -> UrnMoments:
    """Closed-form propagation of the first two moments of ``U_n``."""
    require_valid(model)
    initial = check_state(initial)
    if n_max > 10**7:
        raise ValueError("n_max capped at 1e7")
    u0 = float(initial[0] - initial[1])
    s0 = initial[0] + initial[1]
    a1 = _urn_factors(model, s0, n_max, 1)
    a2 = _urn_factors(model, s0, n_max, 2)
    EU = np.concatenate(([u0], u0 * np.cumprod(a1)))
    Q = np.concatenate(([1.0], np.cumprod(a2)))     # Q_n = prod_{k<n} a_k(2)
    EU2 = Q * (u0**2 + np.concatenate(([0.0], np.cumsum(1.0 / Q[1:]))))
    ns = np.arange(1, n_max + 1, dtype=float)
    scaled = ns ** (-2.0 * model.rho) * EU2[1:]
    return UrnMoments(model, initial, EU, EU2, scaled,
                      np.maximum.accumulate(scaled))


# ---------------------------------------------------------------------------
# hitting / recurrence series from diagonal rate extremes


@dataclass
class SeriesReport:
    """Partial sums and ratio-test verdicts for the two diagonal series.

    ``A`` sums ``(s_2 ... s_k) / (r_2 ... r_k)`` from ``k = 2`` (divergence
    is the hitting-time criterion); ``A_tilde`` sums
    ``(r_1 ... r_{k-1}) / (s_1 ... s_k)`` from ``k = 1`` (finiteness is the
    positive-recurrence criterion and needs boundary-inclusive rates).
    ``A_tilde`` is reported ``undefined`` when some ``s_k`` vanishes, as for
    models with no deaths on the boundary.
    """

    K: int
    a_partial: np.ndarray
    a_last_term: float
    a_ratio_tail: Optional[float]
    a_verdict: str
    at_partial: Optional[np.ndarray]
    at_last_term: Optional[float]
    at_ratio_tail: Optional[float]
    at_verdict: str
    at_undefined_reason: Optional[str] = None


_RATIO_MARGIN = 0.05
_TERM_TOL = 1e-6


def _ratio_verdict(terms: np.ndarray) -> tuple[Optional[float], str]:
    if not np.all(np.isfinite(terms)):
        return math.inf, "diverges"
    window = max(5, terms.size // 10)
    t0 = terms[-window - 1:-1]
    t1 = terms[-window:]
    mask = t0 > 0
    if not mask.any():
        return 0.0, "converges" if terms[-1] < _TERM_TOL else "inconclusive"
    tail = float(np.mean(t1[mask] / t0[mask]))
    if tail > 1.0 + _RATIO_MARGIN:
        return tail, "diverges"
    if tail < 1.0 - _RATIO_MARGIN and terms[-1] < _TERM_TOL:
        return tail, "converges"
    return tail, "inconclusive"


def _value_at(seq, k: int) -> float:
    value = seq(k) if callable(seq) else seq[k - 1]
    return float(value)


def reuter_series(r_k, s_k, K: int) -> SeriesReport:
    """Classify both diagonal series from rate sequences or callables.

    ``r_k``/``s_k`` are indexed from ``k = 1`` (sequences use position
    ``k - 1``).  ``A`` consumes indices from 2 only, so interior-only
    sequences may leave ``k = 1`` undefined by raising ``ValueError``; in
    that case ``A_tilde`` is reported undefined.
    """
    if K < 10:
        raise ValueError("need K >= 10 terms")
    r2 = np.array([_value_at(r_k, k) for k in range(2, K + 1)])
    s2 = np.array([_value_at(s_k, k) for k in range(2, K + 1)])
    if np.any(r2 <= 0):
        raise ValueError("r_k > 0 required for all k >= 2")
    if np.any(s2 < 0):
        raise ValueError("s_k >= 0 required")
    with np.errstate(over="ignore"):
        terms_a = np.cumprod(s2 / r2)
        a_partial = np.cumsum(terms_a)
    a_tail, a_verdict = _ratio_verdict(terms_a)

    at_partial = at_last = at_tail = None
    at_reason = None
    try:
        r1 = np.concatenate(([_value_at(r_k, 1)], r2))
        s1 = np.concatenate(([_value_at(s_k, 1)], s2))
    except ValueError as exc:
        at_verdict, at_reason = "undefined", str(exc)
    else:
        if np.any(s1 == 0):
            first = int(np.nonzero(s1 == 0)[0][0]) + 1
            at_verdict = "undefined"
            at_reason = f"s_{first} = 0, denominator product vanishes"
        else:
            with np.errstate(over="ignore"):
                factors = np.concatenate(([1.0 / s1[0]], r1[:-1] / s1[1:]))
                terms_at = np.cumprod(factors)
                at_partial = np.cumsum(terms_at)
            at_last = float(terms_at[-1])
            at_tail, at_verdict = _ratio_verdict(terms_at)

    return SeriesReport(K, a_partial, float(terms_a[-1]), a_tail, a_verdict,
                        at_partial, at_last, at_tail, at_verdict, at_reason)


def symmetric_linear_rs(lam: float, alpha: float, beta: float):
    """Diagonal rate extremes of the symmetric linear model,
    ``r_k = 2 lam + alpha k`` and ``s_k = beta k``."""
    return (lambda k: 2 * lam + alpha * k), (lambda k: beta * k)


def model_rs(model, boundary: bool = False):
    """Diagonal rate extremes computed directly from a model.

    ``r_k`` maximises the total pure-birth rate and ``s_k`` minimises the
    total pure-death rate over states with ``x1 + x2 = k`` (diagonal moves
    preserve the sum and are excluded).  With ``boundary`` the extremes
    include ``(k, 0)`` and ``(0, k)``, where inactive death moves contribute
    zero.
    """
    def states(k):
        lo, hi = (0, k) if boundary else (1, k - 1)
        if lo > hi:
            raise ValueError(f"no interior states on x1 + x2 = {k}")
        return [(i, k - i) for i in range(lo, hi + 1)]

    def births(s):
        moves = _raw_moves(model, s)
        return moves[0][2] + moves[1][2]

    def deaths(s):
        moves = _raw_moves(model, s)
        return moves[2][2] + moves[3][2]

    return (lambda k: max(births(s) for s in states(k)),
            lambda k: min(deaths(s) for s in states(k)))
