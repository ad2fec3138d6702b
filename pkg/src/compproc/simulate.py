"""Exact event-driven simulation of the competition chains.

Determinism contract
--------------------
Every trajectory owns a PCG64 generator built from its 64-bit seed.  Batch
seeds are derived from a master seed with
``numpy.random.SeedSequence(master_seed).generate_state(n)``
(:func:`derive_seeds`), so a batch is reproducible independently of worker
count or scheduling, and equals the concatenation of the corresponding
single runs.  Each event consumes exactly two uniforms, move first, holding
time second (the holding draw is discarded in jump-chain mode); uniforms are
drawn in blocks of ``2 * 65536`` which does not change the stream.

Recording modes
---------------
``full`` keeps every jump; ``crossings`` (the default) keeps each event that
changes ``min(x1, x2)`` plus every ``stride``-th event, which bounds memory
on long runs while preserving the whole path of the minor coordinate needed
by the boundary-behaviour diagnostics; ``none`` keeps endpoints only.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import AbsorbingStateError, StateOverflowError
from .models import (State, TypeIIModel, TypeIModel, _transitions, check_state,
                     enumerate_transitions, require_valid)

_CHUNK = 1 << 16
_I64_MAX = 2**63 - 1
_REC_MODES = {"none": _kernels.REC_NONE, "full": _kernels.REC_FULL,
              "crossings": _kernels.REC_CROSSINGS}


@dataclass(frozen=True)
class StopRule:
    """Stopping clauses; at least one of the two caps must be finite, since
    the transient chains drift to infinity."""

    max_jumps: Optional[int] = None
    max_time: Optional[float] = None
    stop_on_boundary: bool = False
    stop_below_y0: Optional[int] = None

    def __post_init__(self):
        finite_jumps = self.max_jumps is not None
        finite_time = self.max_time is not None and math.isfinite(self.max_time)
        if not (finite_jumps or finite_time):
            raise ValueError("StopRule needs a finite max_jumps or max_time")
        if finite_jumps and self.max_jumps < 0:
            raise ValueError("max_jumps must be >= 0")


@dataclass
class Trajectory:
    """A realised path: retained events plus endpoint data.

    ``events_*`` arrays hold one entry per retained jump (jump index, time,
    coordinates); the initial state is not an event.  In jump-chain mode the
    time of jump ``n`` is ``n``.
    """

    model: object
    initial: State
    seed: int
    jump_chain: bool
    stop: StopRule
    record: str
    events_n: np.ndarray
    events_t: np.ndarray
    events_x1: np.ndarray
    events_x2: np.ndarray
    n_jumps: int
    final_state: State
    final_time: float
    stopped_by: str

    def to_csv(self, path, header_lines=()) -> None:
        """Write ``n,time,x1,x2`` rows (initial state included as row 0)."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            fh.write("n,time,x1,x2\n")
            fh.write(f"0,0.0,{self.initial[0]},{self.initial[1]}\n")
            for n, t, x1, x2 in zip(self.events_n, self.events_t,
                                    self.events_x1, self.events_x2):
                fh.write(f"{n},{t!r},{x1},{x2}\n")


@dataclass(frozen=True)
class TrajectorySummary:
    seed: int
    stopped_by: str
    n_jumps: int
    final_state: Optional[State]
    final_time: Optional[float]
    tau_jumps: Optional[int]
    tau_time: Optional[float]
    error: Optional[str] = None

    def to_text(self) -> str:
        fields = [f"seed={self.seed}", f"stopped_by={self.stopped_by}",
                  f"jumps={self.n_jumps}"]
        if self.final_state is not None:
            fields.append(f"final={self.final_state[0]},{self.final_state[1]}")
        if self.tau_jumps is not None:
            fields.append(f"tau_jumps={self.tau_jumps}")
            fields.append(f"tau_time={self.tau_time!r}")
        if self.error is not None:
            fields.append(f"error={self.error}")
        return " ".join(fields)


def derive_seeds(master_seed: int, n: int) -> list[int]:
    """Documented splitting rule for per-trajectory seeds."""
    state = np.random.SeedSequence(master_seed).generate_state(n, np.uint64)
    return [int(s) for s in state]


def _initial_stop(s: State, stop: StopRule) -> Optional[str]:
    if stop.stop_on_boundary and (s[0] == 0 or s[1] == 0):
        return "boundary"
    if stop.stop_below_y0 is not None and (s[0] == 0 or s[1] < stop.stop_below_y0):
        return "below_y0"
    if stop.max_jumps is not None and stop.max_jumps == 0:
        return "max_jumps"
    return None


def step(model, s: State, rng: np.random.Generator):
    """One exponential-clock step: ``(holding_time, next_state)``.

    Consumes two uniforms from ``rng`` (move, then holding time) so that a
    sequence of calls replays a :func:`simulate` path.
    """
    tr = enumerate_transitions(model, s)
    um = rng.random()
    uh = rng.random()
    holding = -math.log1p(-uh) / tr.total
    idx = _select_move(tr, um)
    return holding, tr.entries[idx][0]


def _select_move(tr, um: float) -> int:
    thresh = um * tr.total
    acc = 0.0
    for i, (_, rate) in enumerate(tr.entries):
        acc += rate
        if acc > thresh:
            return i
    return len(tr.entries) - 1


def simulate(model, initial: State, stop: StopRule, seed: int, *,
             jump_chain: bool = False, record: str = "crossings",
             stride: int = 1024, engine: str = "auto") -> Trajectory:
    """Run one trajectory until a stop clause fires.

    ``engine="auto"`` uses the compiled kernel for type I/II models and the
    generic Python walker otherwise; ``engine="generic"`` forces the latter
    (both produce identical paths for the same seed).
    """
    require_valid(model)
    initial = check_state(initial)
    if record not in _REC_MODES:
        raise ValueError(f"unknown record mode {record!r}")
    if stride < 1:
        raise ValueError("stride must be >= 1")

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    empty_i = np.empty(0, np.int64)
    empty_f = np.empty(0, np.float64)

    stopped = _initial_stop(initial, stop)
    if stopped is not None:
        return Trajectory(model, initial, seed, jump_chain, stop, record,
                          empty_i, empty_f, empty_i.copy(), empty_i.copy(),
                          0, initial, 0.0, stopped)

    max_jumps = stop.max_jumps if stop.max_jumps is not None else _I64_MAX
    max_time = stop.max_time if stop.max_time is not None else math.inf
    time_as_jump_cap = False
    if jump_chain and math.isfinite(max_time):
        cap = int(math.floor(max_time))
        if cap < max_jumps:
            max_jumps, time_as_jump_cap = cap, True
        max_time = math.inf

    use_kernel = (engine != "generic"
                  and isinstance(model, (TypeIModel, TypeIIModel)))
    runner = _run_kernel if use_kernel else _run_generic
    events, n_jumps, final_state, final_time, status = runner(
        model, initial, rng, max_jumps, max_time, jump_chain,
        stop.stop_on_boundary,
        -1 if stop.stop_below_y0 is None else stop.stop_below_y0,
        _REC_MODES[record], stride)

    if status == _kernels.ABSORBING:
        raise AbsorbingStateError(f"absorbing state reached at {final_state}")
    if status == _kernels.OVERFLOW:
        raise StateOverflowError("coordinate exceeded the 64-bit range")
    stopped_by = {_kernels.MAX_JUMPS: "max_jumps", _kernels.MAX_TIME: "max_time",
                  _kernels.BOUNDARY: "boundary", _kernels.BELOW_Y0: "below_y0"}[status]
    if stopped_by == "max_jumps" and time_as_jump_cap:
        stopped_by = "max_time"
    ev_n, ev_t, ev_x1, ev_x2 = events
    return Trajectory(model, initial, seed, jump_chain, stop, record,
                      ev_n, ev_t, ev_x1, ev_x2, n_jumps, final_state,
                      final_time, stopped_by)


def _run_kernel(model, initial, rng, max_jumps, max_time, jump_chain,
                stop_boundary, y0_stop, rec_mode, stride):
    if isinstance(model, TypeIIModel):
        params = (True, model.lambda1, model.lambda2, model.alpha1, model.alpha2,
                  model.beta1, model.beta2, 0.0, 0.0, 0.0, 0.0)
    else:
        params = (False, model.lambda1, model.lambda2, model.alpha1, model.alpha2,
                  model.g1.scale, model.g1.index, model.g1.log_exponent,
                  model.g2.scale, model.g2.index, model.g2.log_exponent)
    x1, x2 = initial
    t, n = 0.0, 0
    min_prev = min(x1, x2)
    chunks = []
    rec_n = np.empty(_CHUNK, np.int64)
    rec_t = np.empty(_CHUNK, np.float64)
    rec_x1 = np.empty(_CHUNK, np.int64)
    rec_x2 = np.empty(_CHUNK, np.int64)
    status = _kernels.BUFFER_EXHAUSTED
    while status == _kernels.BUFFER_EXHAUSTED:
        u = rng.random(2 * _CHUNK)
        x1, x2, t, n, min_prev, status, _, n_rec = _kernels.run_competition(
            *params, x1, x2, t, n, min_prev, u, max_jumps, max_time,
            jump_chain, stop_boundary, y0_stop, rec_mode, stride,
            rec_n, rec_t, rec_x1, rec_x2)
        if n_rec:
            chunks.append((rec_n[:n_rec].copy(), rec_t[:n_rec].copy(),
                           rec_x1[:n_rec].copy(), rec_x2[:n_rec].copy()))
    events = _concat_chunks(chunks)
    return events, int(n), (int(x1), int(x2)), float(t), status


def _run_generic(model, initial, rng, max_jumps, max_time, jump_chain,
                 stop_boundary, y0_stop, rec_mode, stride):
    x1, x2 = initial
    t, n = 0.0, 0
    min_prev = min(x1, x2)
    rec = ([], [], [], [])
    status = None
    while status is None:
        u = rng.random(2 * _CHUNK)
        for i in range(_CHUNK):
            if n >= max_jumps:
                status = _kernels.MAX_JUMPS
                break
            tr = _transitions(model, (x1, x2))
            if tr.total <= 0.0:
                status = _kernels.ABSORBING
                break
            um, uh = u[2 * i], u[2 * i + 1]
            if not jump_chain:
                dt = -math.log1p(-uh) / tr.total
                if t + dt > max_time:
                    t = max_time
                    status = _kernels.MAX_TIME
                    break
                t += dt
            idx = _select_move(tr, um)
            (x1, x2) = tr.entries[idx][0]
            if x1 > _I64_MAX or x2 > _I64_MAX:
                status = _kernels.OVERFLOW
                break
            n += 1
            if jump_chain:
                t = float(n)
            if rec_mode != _kernels.REC_NONE:
                mn = min(x1, x2)
                if (rec_mode == _kernels.REC_FULL or mn != min_prev
                        or n % stride == 0):
                    rec[0].append(n)
                    rec[1].append(t)
                    rec[2].append(x1)
                    rec[3].append(x2)
                min_prev = mn
            if stop_boundary and (x1 == 0 or x2 == 0):
                status = _kernels.BOUNDARY
                break
            if y0_stop >= 0 and (x1 == 0 or x2 < y0_stop):
                status = _kernels.BELOW_Y0
                break
    events = (np.array(rec[0], np.int64), np.array(rec[1], np.float64),
              np.array(rec[2], np.int64), np.array(rec[3], np.int64))
    return events, n, (x1, x2), t, status


def _concat_chunks(chunks):
    if not chunks:
        e = np.empty(0, np.int64)
        return e, np.empty(0, np.float64), e.copy(), e.copy()
    return tuple(np.concatenate([c[j] for c in chunks]) for j in range(4))


def simulate_jump_chain(model, initial: State, stop: StopRule, seed: int,
                        **kwargs) -> Trajectory:
    """The embedded discrete chain of :func:`simulate`: same states, same
    seed consumption, unit-spaced times."""
    return simulate(model, initial, stop, seed, jump_chain=True, **kwargs)


def _summarise(model, initial, stop, seed, jump_chain, record, stride, engine):
    try:
        tr = simulate(model, initial, stop, seed, jump_chain=jump_chain,
                      record=record, stride=stride, engine=engine)
    except Exception as exc:  # collected, not fatal to the batch
        return TrajectorySummary(seed, "error", 0, None, None, None, None,
                                 f"{type(exc).__name__}: {exc}")
    hit = tr.stopped_by in ("boundary", "below_y0")
    return TrajectorySummary(seed, tr.stopped_by, tr.n_jumps, tr.final_state,
                             tr.final_time, tr.n_jumps if hit else None,
                             tr.final_time if hit else None)


def batch(model, initial: State, stop: StopRule, seeds, *, workers: int = 1,
          jump_chain: bool = False, record: str = "none", stride: int = 1024,
          engine: str = "auto") -> list[TrajectorySummary]:
    """Independent trajectories, summarised in seed-list order.

    Results do not depend on ``workers``; per-trajectory failures are
    returned as summaries with ``error`` set rather than aborting the batch.
    """
    seeds = list(seeds)
    if len(set(seeds)) != len(seeds):
        raise ValueError("batch seeds must be distinct")
    if workers <= 1 or len(seeds) <= 1:
        return [_summarise(model, initial, stop, s, jump_chain, record,
                           stride, engine) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_summarise, model, initial, stop, s,
                               jump_chain, record, stride, engine)
                   for s in seeds]
        return [f.result() for f in futures]
