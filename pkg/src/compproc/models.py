"""Model families of two-dimensional competition processes.

Four process families live here, each an immutable parameter set:

* :class:`TypeIModel`, births ``lambda_i + alpha_i x_i`` and non-linear
  deaths ``x_i * g_i(x_other)``,
* :class:`TypeIIModel`, same births and cross-linear deaths
  ``beta_1 x_2`` / ``beta_2 x_1``,
* :class:`ReuterModel`, the general six-move nearest-neighbour chain with
  user-supplied rate callbacks,
* :class:`AuxUrnModel`, the cooperative two-move jump chain tied to
  Friedman's urn.

All operations are pure functions of ``(model, state)``; model instances are
frozen dataclasses and safe to share across worker threads.  States are plain
``(x1, x2)`` tuples of non-negative integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import AbsorbingStateError, ModelValidationError, StateOverflowError

State = tuple[int, int]

_I64_MAX = 2**63 - 1

# Fixed move order: right, up, left, down, then the two Reuter diagonals.
# Simulation consumes randomness against this order, so it is part of the
# reproducibility contract.
MOVE_ORDER = ((1, 0), (0, 1), (-1, 0), (0, -1), (-1, 1), (1, -1))


def check_state(s) -> State:
    """Validate and normalise a state to a tuple of Python ints."""
    x1, x2 = int(s[0]), int(s[1])
    if x1 < 0 or x2 < 0:
        raise ValueError(f"state {s} has a negative coordinate")
    if x1 > _I64_MAX or x2 > _I64_MAX:
        raise StateOverflowError(f"state {s} exceeds the 64-bit range")
    return (x1, x2)


@dataclass(frozen=True)
class InteractionFunction:
    """Interaction rate ``g(z) = scale * z**index * log(1+z)**log_exponent``.

    The power-times-log family keeps the regular-variation index explicit
    (it equals ``index``; the log factor is slowly varying) while still
    covering the Lotka-Volterra case ``g(z) = z``.  ``g(0) = 0`` by
    construction and ``g(z) > 0`` for ``z > 0`` whenever ``scale > 0``.
    """

    scale: float = 1.0
    index: float = 1.0
    log_exponent: float = 0.0

    def __call__(self, z):
        if np.isscalar(z) or isinstance(z, (int, float)):
            if z <= 0:
                return 0.0
            out = self.scale * float(z) ** self.index
            if self.log_exponent != 0.0:
                out *= math.log1p(z) ** self.log_exponent
            return out
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.scale * z**self.index
            if self.log_exponent != 0.0:
                out = out * np.log1p(z) ** self.log_exponent
        return np.where(z > 0, out, 0.0)

    def violations(self, name: str) -> list[str]:
        out = []
        if not (self.scale > 0):
            out.append(f"{name}: scale must be positive")
        if not (self.index > 0):
            out.append(f"{name}: index must be positive")
        if not np.isfinite(self.log_exponent):
            out.append(f"{name}: log_exponent must be finite")
        return out


@dataclass(frozen=True)
class TypeIModel:
    """Competition process with non-linear interaction (births plus
    deaths ``x_i g_i(x_other)``)."""

    lambda1: float
    lambda2: float
    alpha1: float
    alpha2: float
    g1: InteractionFunction = field(default_factory=InteractionFunction)
    g2: InteractionFunction = field(default_factory=InteractionFunction)

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "alpha1", "alpha2"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def swapped(self) -> "TypeIModel":
        """The same process with the coordinate labels exchanged."""
        return TypeIModel(self.lambda2, self.lambda1, self.alpha2, self.alpha1,
                          self.g2, self.g1)


@dataclass(frozen=True)
class TypeIIModel:
    """Competition process with linear interaction.

    Deaths are cross-coupled: coordinate 1 dies at rate ``beta1 * x2``,
    coordinate 2 at ``beta2 * x1``.  With ``strict_theorem2`` set, validation
    additionally requires ``lambda_i > 0`` (the transience theorem's
    hypotheses); without it only ``lambda_i >= 0`` is checked, which admits
    the plain OK Corral model.
    """

    lambda1: float
    lambda2: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    strict_theorem2: bool = False

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "alpha1", "alpha2", "beta1", "beta2"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def swapped(self) -> "TypeIIModel":
        return TypeIIModel(self.lambda2, self.lambda1, self.alpha2, self.alpha1,
                           self.beta2, self.beta1, self.strict_theorem2)


@dataclass(frozen=True)
class ReuterModel:
    """General nearest-neighbour competition process with six rate callbacks.

    Moves, in order: ``a`` right, ``b`` up, ``c`` left, ``d`` down,
    ``e`` left-up diagonal, ``f`` right-down diagonal.  ``c``/``e`` are
    inactive at ``x1 = 0`` and ``d``/``f`` at ``x2 = 0``.
    """

    a: Callable[[int, int], float]
    b: Callable[[int, int], float]
    c: Callable[[int, int], float]
    d: Callable[[int, int], float]
    e: Callable[[int, int], float] = staticmethod(lambda x1, x2: 0.0)
    f: Callable[[int, int], float] = staticmethod(lambda x1, x2: 0.0)


@dataclass(frozen=True)
class AuxUrnModel:
    """Cooperative jump chain behind Friedman's urn.

    From ``(x, y)`` the chain moves right with probability
    ``(alpha x + beta y) / ((alpha+beta)(x+y))`` and up otherwise.  The urn
    counts ``(W, B) = (alpha X + beta Y, beta X + alpha Y)``.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def rho(self) -> float:
        return (self.alpha - self.beta) / (self.alpha + self.beta)


@dataclass(frozen=True)
class Transitions:
    """Reachable states with positive rate, in the fixed move order."""

    source: State
    entries: tuple[tuple[State, float], ...]
    total: float

    def rates(self) -> np.ndarray:
        return np.array([r for _, r in self.entries])

    def probabilities(self) -> np.ndarray:
        return self.rates() / self.total


def validate(model) -> list[str]:
    """Check every parameter hypothesis; return a list of violations.

    An empty list means the model is valid.
    """
    out: list[str] = []
    if isinstance(model, TypeIModel):
        for i, lam in ((1, model.lambda1), (2, model.lambda2)):
            if not (lam > 0):
                out.append(f"lambda{i}>0 required")
        for i, a in ((1, model.alpha1), (2, model.alpha2)):
            if not (a > 0):
                out.append(f"alpha{i}>0 required")
        out += model.g1.violations("g1")
        out += model.g2.violations("g2")
    elif isinstance(model, TypeIIModel):
        for i, b in ((1, model.beta1), (2, model.beta2)):
            if not (b > 0):
                out.append(f"beta{i}>0 required")
        for i, lam in ((1, model.lambda1), (2, model.lambda2)):
            if lam < 0 or not np.isfinite(lam):
                out.append(f"lambda{i}>=0 required")
            elif model.strict_theorem2 and not (lam > 0):
                out.append(f"lambda{i}>0 required")
        for i, a in ((1, model.alpha1), (2, model.alpha2)):
            if a < 0 or not np.isfinite(a):
                out.append(f"alpha{i}>=0 required")
    elif isinstance(model, ReuterModel):
        for name in "abcdef":
            if not callable(getattr(model, name)):
                out.append(f"rate {name} must be callable")
    elif isinstance(model, AuxUrnModel):
        if model.alpha < 0:
            out.append("alpha>=0 required")
        if model.beta < 0:
            out.append("beta>=0 required")
        if not (model.alpha + model.beta > 0):
            out.append("alpha+beta>0 required")
    else:
        out.append(f"unknown model type {type(model).__name__}")
    return out


def require_valid(model) -> None:
    """Raise :class:`ModelValidationError` if the model is invalid."""
    violations = validate(model)
    if violations:
        raise ModelValidationError(violations)


def _raw_moves(model, s: State) -> list[tuple[int, int, float]]:
    """(dx, dy, rate) triples in the fixed order, zero rates included."""
    x1, x2 = s
    if isinstance(model, TypeIModel):
        return [
            (1, 0, model.lambda1 + model.alpha1 * x1),
            (0, 1, model.lambda2 + model.alpha2 * x2),
            (-1, 0, x1 * model.g1(x2) if x1 > 0 else 0.0),
            (0, -1, x2 * model.g2(x1) if x2 > 0 else 0.0),
        ]
    if isinstance(model, TypeIIModel):
        return [
            (1, 0, model.lambda1 + model.alpha1 * x1),
            (0, 1, model.lambda2 + model.alpha2 * x2),
            (-1, 0, model.beta1 * x2 if x1 > 0 else 0.0),
            (0, -1, model.beta2 * x1 if x2 > 0 else 0.0),
        ]
    if isinstance(model, ReuterModel):
        return [
            (1, 0, float(model.a(x1, x2))),
            (0, 1, float(model.b(x1, x2))),
            (-1, 0, float(model.c(x1, x2)) if x1 > 0 else 0.0),
            (0, -1, float(model.d(x1, x2)) if x2 > 0 else 0.0),
            (-1, 1, float(model.e(x1, x2)) if x1 > 0 else 0.0),
            (1, -1, float(model.f(x1, x2)) if x2 > 0 else 0.0),
        ]
    if isinstance(model, AuxUrnModel):
        tot = x1 + x2
        if tot == 0:
            return [(1, 0, 0.0), (0, 1, 0.0)]
        denom = (model.alpha + model.beta) * tot
        return [
            (1, 0, (model.alpha * x1 + model.beta * x2) / denom),
            (0, 1, (model.alpha * x2 + model.beta * x1) / denom),
        ]
    raise TypeError(f"unknown model type {type(model).__name__}")


def _transitions(model, s: State) -> Transitions:
    """Like :func:`enumerate_transitions` but allows an empty result."""
    s = check_state(s)
    entries = []
    total = 0.0
    for dx, dy, rate in _raw_moves(model, s):
        if rate < 0 or not np.isfinite(rate):
            raise ModelValidationError(
                [f"rate for move ({dx},{dy}) at state {s} is {rate}"])
        if rate == 0.0:
            continue
        tx, ty = s[0] + dx, s[1] + dy
        if tx > _I64_MAX or ty > _I64_MAX:
            raise StateOverflowError(f"transition from {s} exceeds 64-bit range")
        entries.append(((tx, ty), rate))
        total += rate
    if not np.isfinite(total):
        raise ModelValidationError([f"total rate at state {s} overflows"])
    return Transitions(s, tuple(entries), total)


def enumerate_transitions(model, s: State) -> Transitions:
    """Exact list of reachable states and rates prescribed by the model.

    Zero-rate moves are omitted; the remaining entries keep the fixed
    right/up/left/down (then diagonal) order.  Raises
    :class:`AbsorbingStateError` when no move has positive rate, which for
    these families can happen only at ``(0, 0)`` with zero immigration.
    """
    tr = _transitions(model, s)
    if not tr.entries:
        raise AbsorbingStateError(f"state {tr.source} is absorbing")
    return tr


def mean_drift(model, s: State) -> np.ndarray:
    """Rate-weighted mean jump ``sum_rate * (target - s)``, one entry per
    coordinate.  Zero for absorbing states."""
    tr = _transitions(model, s)
    drift = np.zeros(2)
    for (tx, ty), rate in tr.entries:
        drift[0] += rate * (tx - s[0])
        drift[1] += rate * (ty - s[1])
    return drift


def total_rate_type2(model: TypeIIModel, s: State) -> float:
    """Closed form ``(a1+b2) x + (a2+b1) y + l1 + l2`` for interior states."""
    x, y = s
    return ((model.alpha1 + model.beta2) * x + (model.alpha2 + model.beta1) * y
            + model.lambda1 + model.lambda2)


def level_moves(model, y: int, xs: np.ndarray) -> list[tuple[int, int, np.ndarray]]:
    """Vectorised transition rates along the horizontal line ``x2 = y``.

    Returns (dx, dy, rate_array) triples for ``x1`` ranging over ``xs``
    (all entries must be >= 1).  Moves whose rate vanishes identically on
    the line are omitted.  Used by the certificate scans, which need millions
    of generator evaluations.
    """
    xs = np.asarray(xs, dtype=float)
    ones = np.ones_like(xs)
    out = []
    if isinstance(model, TypeIModel):
        out.append((1, 0, model.lambda1 + model.alpha1 * xs))
        out.append((0, 1, (model.lambda2 + model.alpha2 * y) * ones))
        g1y = model.g1(y)
        if g1y > 0:
            out.append((-1, 0, xs * g1y))
        if y > 0:
            out.append((0, -1, y * model.g2(xs)))
    elif isinstance(model, TypeIIModel):
        up = model.lambda2 + model.alpha2 * y
        out.append((1, 0, model.lambda1 + model.alpha1 * xs))
        if up > 0:
            out.append((0, 1, up * ones))
        if y > 0 and model.beta1 > 0:
            out.append((-1, 0, model.beta1 * y * ones))
        if y > 0:
            out.append((0, -1, model.beta2 * xs))
    else:
        raise TypeError("level_moves supports TypeIModel and TypeIIModel only")
    return [(dx, dy, r) for dx, dy, r in out if np.any(r > 0)]
