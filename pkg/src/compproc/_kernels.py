"""Compiled inner loops for trajectory simulation.

Each kernel advances one trajectory through a block of pre-drawn uniforms and
returns control to Python when the block is exhausted or a stop clause fires.
Randomness never originates here: the caller owns a seeded generator and
feeds ``u`` blocks, so replays and thread counts cannot change a path.

Per event exactly two uniforms are consumed, in order: one selects the move
by inverse CDF over the fixed right/up/left/down order, one drives the
exponential holding time (drawn and discarded in jump-chain mode).  The
Python reference path in :mod:`compproc.simulate` implements the identical
arithmetic; a test pins the two engines to each other.
"""

import numpy as np
from numba import njit

I64_MAX = np.int64(2**63 - 1)

# status codes shared with the wrapper
BUFFER_EXHAUSTED = 0
MAX_JUMPS = 1
MAX_TIME = 2
BOUNDARY = 3
BELOW_Y0 = 4
ABSORBING = 5
OVERFLOW = 6

# recording modes
REC_NONE = 0
REC_FULL = 1
REC_CROSSINGS = 2


@njit(cache=True, nogil=True, inline="always")
def _choose(r0, r1, r2, r3, u):
    """Inverse-CDF move selection over the fixed order, with a clamp to the
    last positive-rate move against floating point shortfall."""
    total = r0 + r1 + r2 + r3
    thresh = u * total
    acc = r0
    if acc > thresh:
        return 0, total
    acc += r1
    if acc > thresh:
        return 1, total
    acc += r2
    if acc > thresh:
        return 2, total
    if r3 > 0.0:
        return 3, total
    if r2 > 0.0:
        return 2, total
    if r1 > 0.0:
        return 1, total
    return 0, total


@njit(cache=True, nogil=True)
def run_competition(
    is_type2, p0, p1, p2, p3, p4, p5, p6, p7, p8, p9,
    x1, x2, t, n, min_prev,
    u, max_jumps, max_time, jump_chain, stop_boundary, y0_stop,
    rec_mode, stride, rec_n, rec_t, rec_x1, rec_x2,
):
    """Advance a type I or type II trajectory through one uniform block.

    For type II the parameter slots are (lam1, lam2, a1, a2, b1, b2, -, -, -, -);
    for type I they are (lam1, lam2, a1, a2, c1, rho1, eta1, c2, rho2, eta2).
    Returns ``(x1, x2, t, n, min_prev, status, pairs_used, n_rec)``.
    """
    n_pairs = u.shape[0] // 2
    n_rec = 0
    for i in range(n_pairs):
        if n >= max_jumps:
            return x1, x2, t, n, min_prev, MAX_JUMPS, i, n_rec

        r0 = p0 + p2 * x1
        r1 = p1 + p3 * x2
        if is_type2:
            r2 = p4 * x2 if x1 > 0 else 0.0
            r3 = p5 * x1 if x2 > 0 else 0.0
        else:
            r2 = 0.0
            if x1 > 0 and x2 > 0:
                g1 = p4 * float(x2) ** p5
                if p6 != 0.0:
                    g1 *= np.log1p(float(x2)) ** p6
                r2 = x1 * g1
            r3 = 0.0
            if x2 > 0 and x1 > 0:
                g2 = p7 * float(x1) ** p8
                if p9 != 0.0:
                    g2 *= np.log1p(float(x1)) ** p9
                r3 = x2 * g2

        total = r0 + r1 + r2 + r3
        if total <= 0.0:
            return x1, x2, t, n, min_prev, ABSORBING, i, n_rec

        um = u[2 * i]
        uh = u[2 * i + 1]
        if not jump_chain:
            dt = -np.log1p(-uh) / total
            if t + dt > max_time:
                return x1, x2, max_time, n, min_prev, MAX_TIME, i + 1, n_rec
            t = t + dt

        move, _ = _choose(r0, r1, r2, r3, um)
        if move == 0:
            if x1 >= I64_MAX:
                return x1, x2, t, n, min_prev, OVERFLOW, i + 1, n_rec
            x1 += 1
        elif move == 1:
            if x2 >= I64_MAX:
                return x1, x2, t, n, min_prev, OVERFLOW, i + 1, n_rec
            x2 += 1
        elif move == 2:
            x1 -= 1
        else:
            x2 -= 1
        n += 1
        if jump_chain:
            t = float(n)

        if rec_mode != REC_NONE:
            mn = x1 if x1 < x2 else x2
            if rec_mode == REC_FULL or mn != min_prev or n % stride == 0:
                rec_n[n_rec] = n
                rec_t[n_rec] = t
                rec_x1[n_rec] = x1
                rec_x2[n_rec] = x2
                n_rec += 1
            min_prev = mn

        if stop_boundary and (x1 == 0 or x2 == 0):
            return x1, x2, t, n, min_prev, BOUNDARY, i + 1, n_rec
        if y0_stop >= 0 and (x1 == 0 or x2 < y0_stop):
            return x1, x2, t, n, min_prev, BELOW_Y0, i + 1, n_rec
    return x1, x2, t, n, min_prev, BUFFER_EXHAUSTED, n_pairs, n_rec


@njit(cache=True, nogil=True)
def run_urn(alpha, beta, x, y, u, n_done, n_steps, u_out):
    """Advance the urn jump chain, writing ``U_n = X_n - Y_n`` per step.

    One uniform per step.  ``u_out[k]`` receives the difference after step
    ``n_done + 1 + k`` within this block.  Returns ``(x, y, n_done, used)``.
    """
    n_draws = u.shape[0]
    used = 0
    for i in range(n_draws):
        if n_done >= n_steps:
            break
        denom = (alpha + beta) * (x + y)
        p_right = (alpha * x + beta * y) / denom
        if u[i] < p_right:
            x += 1
        else:
            y += 1
        u_out[i] = x - y
        n_done += 1
        used += 1
    return x, y, n_done, used
