"""Generator evaluation and drift-certificate scans.

``apply_generator`` is the exact rate-weighted difference
``G f(s) = sum_targets rate * (f(target) - f(s))``.  ``certify`` scans a
test function along horizontal strip levels and reports the smallest
threshold ``N`` past which ``G f <= 0`` everywhere scanned, together with a
stability check under doubling of the scan window.  The scan is a numerical
certificate, not a proof; ``leading_order`` complements it with the
analytically dominant term of ``G f`` for the shipped (model, function)
pairs, whose negative sign rules out sign changes beyond any finite window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import GeneratorDomainError
from .models import (State, TypeIIModel, TypeIModel, _transitions, check_state,
                     level_moves, require_valid)

_SCAN_CHUNK = 1 << 19


@dataclass(frozen=True)
class PowerLyapunov:
    """Three-branch power test function.

    ``f(x, 0) = x**-nu - x**-mu``, ``f(x, 1) = x**-nu``, ``f = 1`` for
    ``y >= 2``; needs ``0 < nu < mu``.  Positive and strictly decreasing in
    ``x`` on the two lower branches, which is what the confinement argument
    uses.  Undefined (infinite) at ``x = 0`` on those branches.
    """

    nu: float = 0.3
    mu: float = 0.6

    def __post_init__(self):
        if not (0.0 < self.nu < self.mu):
            raise ValueError("PowerLyapunov needs 0 < nu < mu")

    def __call__(self, s) -> float:
        x, y = s
        if y >= 2:
            return 1.0
        if x <= 0:
            return math.inf
        if y == 1:
            return x**-self.nu
        return x**-self.nu - x**-self.mu

    def value_level(self, y: int, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if y >= 2:
            return np.ones_like(xs)
        with np.errstate(divide="ignore"):
            if y == 1:
                return xs**-self.nu
            return xs**-self.nu - xs**-self.mu

    @property
    def function_id(self) -> str:
        return f"power(nu={self.nu!r}, mu={self.mu!r})"


@dataclass(frozen=True)
class LogLyapunov:
    """Four-branch logarithmic test function for the zero-birth-slope case.

    The ``y = 0`` branch carries the ratio ``lambda1/lambda2`` correction
    terms; all branches with a ``1/ln x`` need ``x >= 2``.
    """

    lambda1: float
    lambda2: float

    def __post_init__(self):
        if not (self.lambda1 > 0 and self.lambda2 > 0):
            raise ValueError("LogLyapunov needs lambda1 > 0 and lambda2 > 0")

    def __call__(self, s) -> float:
        x, y = s
        if y >= 3:
            return 1.0
        if x <= 1:
            return math.inf
        lx = math.log(x)
        if y == 2:
            return 1.0 / lx
        if y == 1:
            return 1.0 / lx - 1.0 / lx**3
        ratio = self.lambda1 / self.lambda2
        return 1.0 / lx - 1.0 / lx**3 - ratio / (x * lx**2) + 1.0 / (x * lx**3)

    def value_level(self, y: int, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if y >= 3:
            return np.ones_like(xs)
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = np.log(xs)
            if y == 2:
                out = 1.0 / lx
            elif y == 1:
                out = 1.0 / lx - 1.0 / lx**3
            else:
                ratio = self.lambda1 / self.lambda2
                out = (1.0 / lx - 1.0 / lx**3 - ratio / (xs * lx**2)
                       + 1.0 / (xs * lx**3))
        return np.where(xs >= 2, out, np.inf)

    @property
    def function_id(self) -> str:
        return f"log(lambda1={self.lambda1!r}, lambda2={self.lambda2!r})"


def apply_generator(model, f: Callable[[State], float], s: State) -> float:
    """Exact ``G f(s)``; raises :class:`GeneratorDomainError` if ``f`` is not
    finite at ``s`` or at a reachable target."""
    s = check_state(s)
    fs = f(s)
    if not math.isfinite(fs):
        raise GeneratorDomainError(s)
    acc = 0.0
    for target, rate in _transitions(model, s).entries:
        ft = f(target)
        if not math.isfinite(ft):
            raise GeneratorDomainError(target)
        acc += rate * (ft - fs)
    return acc


def generator_on_level(model, f, y: int, xs: np.ndarray) -> np.ndarray:
    """Vectorised ``G f`` along the line ``x2 = y`` (type I/II fast path)."""
    xs = np.asarray(xs, dtype=float)
    if hasattr(f, "value_level"):
        fhere = f.value_level(y, xs)
        out = np.zeros_like(xs)
        for dx, dy, rates in level_moves(model, y, xs):
            out += rates * (f.value_level(y + dy, xs + dx) - fhere)
        return out
    return np.array([apply_generator(model, f, (int(x), y)) for x in xs])


@dataclass
class CertificateReport:
    """Result of a strip scan of ``G f``."""

    model_kind: str
    function_id: str
    strip: tuple[int, ...]
    x_hi: int
    scan_start: dict[int, int]
    minimal_N: Optional[int]
    certified: bool
    stability_flag: Optional[bool] = None
    violations: list[tuple[State, float]] = field(default_factory=list)

    def summary_lines(self) -> list[str]:
        lines = [f"function      {self.function_id}",
                 f"model         {self.model_kind}",
                 f"strip levels  {','.join(str(y) for y in self.strip)}",
                 f"scan window   x <= {self.x_hi}" ,
                 "scan start    " + ", ".join(f"y={y}: x>={x}" for y, x in
                                              sorted(self.scan_start.items())),
                 f"certified     {self.certified}",
                 f"minimal_N     {self.minimal_N}",
                 f"stable_x2     {self.stability_flag}"]
        for state, value in self.violations[:10]:
            lines.append(f"violation     Gf{state} = {value!r}")
        return lines


def _first_evaluable(model, f, y: int, x_lo: int) -> int:
    for x in range(max(x_lo, 1), max(x_lo, 1) + 1024):
        try:
            apply_generator(model, f, (x, y))
            return x
        except GeneratorDomainError:
            continue
    raise GeneratorDomainError((x_lo, y),
                               f"no evaluable state on level y={y} near x={x_lo}")


def _scan(model, f, strip, x_lo, x_hi):
    scan_start = {}
    worst_x = -1
    samples = []
    for y in strip:
        start = _first_evaluable(model, f, y, x_lo)
        scan_start[y] = start
        lo = start
        while lo <= x_hi:
            hi = min(lo + _SCAN_CHUNK - 1, x_hi)
            xs = np.arange(lo, hi + 1, dtype=float)
            g = generator_on_level(model, f, y, xs)
            bad = np.nonzero(g > 0.0)[0]
            if bad.size:
                worst_x = max(worst_x, int(xs[bad[-1]]))
                for j in bad[-3:]:
                    samples.append(((int(xs[j]), y), float(g[j])))
            lo = hi + 1
    return scan_start, worst_x, samples


def certify(model, f, strip, x_hi: int, x_lo: int = 1,
            check_stability: bool = True) -> CertificateReport:
    """Scan ``G f`` over the strip up to ``x_hi`` and locate the threshold.

    Levels start at the first state where the generator is evaluable (the
    power branches are singular at ``x = 0``, the log branches below
    ``x = 2``); the per-level start is recorded in the report.  When
    certified, the report is re-run at ``2 * x_hi`` and ``stability_flag``
    says whether ``minimal_N`` was unchanged.
    """
    require_valid(model)
    strip = tuple(sorted(set(int(y) for y in strip)))
    scan_start, worst_x, samples = _scan(model, f, strip, x_lo, x_hi)
    function_id = getattr(f, "function_id", repr(f))
    report = CertificateReport(type(model).__name__, function_id, strip,
                               x_hi, scan_start, None, False)
    if worst_x >= x_hi:
        report.violations = samples[-10:]
        return report
    report.minimal_N = max(worst_x, 0)
    report.certified = True
    if check_stability:
        _, worst_x2, _ = _scan(model, f, strip, x_lo, 2 * x_hi)
        report.stability_flag = max(worst_x2, 0) == report.minimal_N
    return report


@dataclass(frozen=True)
class LeadingTerm:
    """Analytically dominant term of ``G f`` on one strip level."""

    y_level: int
    coefficient: float
    scale: str
    negative: bool


def leading_order(model, f, y_level: int) -> LeadingTerm:
    """Dominant-term table for the shipped (model, function) pairs.

    Raises ``ValueError`` for pairings or parameter windows the table does
    not cover (this is a lookup of hand-derived coefficients, not algebra).
    """
    if isinstance(model, TypeIModel) and isinstance(f, PowerLyapunov):
        rho_min = min(model.g1.index, model.g2.index)
        if not f.mu < rho_min:
            raise ValueError("type I power certificate needs mu < min(rho1, rho2)")
        if y_level == 0:
            return LeadingTerm(0, -model.alpha1 * f.nu, f"x^-{f.nu!r}", True)
        if y_level == 1:
            expo = model.g2.index - f.mu
            scale = f"x^{expo!r}"
            if model.g2.log_exponent:
                scale += f" * log(1+x)^{model.g2.log_exponent!r}"
            return LeadingTerm(1, -model.g2.scale, scale, True)
        raise ValueError(f"no leading-order entry for type I power at y={y_level}")
    if isinstance(model, TypeIIModel) and isinstance(f, PowerLyapunov):
        if not (model.alpha1 > 0):
            raise ValueError("type II power certificate needs alpha1 > 0 "
                             "(use LogLyapunov when alpha1 = 0)")
        if not f.mu < 1:
            raise ValueError("type II power certificate needs mu < 1")
        if y_level == 0:
            return LeadingTerm(0, -f.nu * model.alpha1, f"x^-{f.nu!r}", True)
        if y_level == 1:
            return LeadingTerm(1, -model.beta2, f"x^{1 - f.mu!r}", True)
        raise ValueError(f"no leading-order entry for type II power at y={y_level}")
    if isinstance(model, TypeIIModel) and isinstance(f, LogLyapunov):
        if model.alpha1 != 0:
            raise ValueError("log certificate applies to alpha1 = 0 models")
        if y_level == 0:
            return LeadingTerm(0, -model.lambda2, "1/(x ln^3 x)", True)
        if y_level == 1:
            coef = -model.beta2 * model.lambda1 / model.lambda2
            return LeadingTerm(1, coef, "1/ln^2 x", coef < 0)
        if y_level == 2:
            return LeadingTerm(2, -model.beta2, "x/ln^3 x", True)
        raise ValueError(f"no leading-order entry for log function at y={y_level}")
    raise ValueError(f"unsupported (model, function) pairing: "
                     f"{type(model).__name__} with {type(f).__name__}")


@dataclass
class HittingBound:
    """Pointwise-verified uniform drift bound ``G f <= -epsilon`` on a region.

    When verified, the mean exit time from the region started at ``s0`` is at
    most ``f(s0) / epsilon``.
    """

    epsilon: float
    verified: bool
    states_checked: int
    region: Callable[[State], bool]
    f: Callable[[State], float]
    violation: Optional[tuple[State, float]] = None

    def bound(self, s0: State) -> float:
        if not self.verified:
            raise ValueError("drift bound not verified; no hitting bound available")
        if not self.region(tuple(s0)):
            return 0.0
        return self.f(tuple(s0)) / self.epsilon


def expected_hitting_bound(model, f, region: Callable[[State], bool],
                           epsilon: float, x_max: int, y_max: int) -> HittingBound:
    """Verify ``G f <= -epsilon`` at every region state in the scan box.

    An empty region verifies vacuously with bound 0.  The first violating
    state, if any, is reported instead of raising.
    """
    require_valid(model)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    tol = 1e-9 * max(1.0, epsilon)
    checked = 0
    for x in range(x_max + 1):
        for y in range(y_max + 1):
            if not region((x, y)):
                continue
            checked += 1
            g = apply_generator(model, f, (x, y))
            if g > -epsilon + tol:
                return HittingBound(epsilon, False, checked, region, f,
                                    ((x, y), g))
    return HittingBound(epsilon, True, checked, region, f)
