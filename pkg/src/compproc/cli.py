"""Config-driven command line front end.

Every subcommand reads the same flat ``key = value`` config (model section
plus experiment keys), accepts ``--set key=value`` overrides (flags win), and
writes self-describing outputs: each file starts with comment lines carrying
the tool version and the fully resolved configuration, so a run can be
reproduced from any of its outputs.  All randomness derives from
``master_seed`` through the documented seed-splitting rule, making reruns
byte-identical at any worker count.  Files are written atomically (temp file
then rename).

Exit status: 0 on full success (certified, where that applies), 1 when some
per-seed computation failed or a certificate was not obtained, 2 on config
or model validation errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (classify, linear_diagnostics, lln_check, model_rs,
                       reuter_series, summarise_hitting, urn_moment_recursion,
                       urn_simulate)
from .config import (ConfigError, build_model, get_bool, get_float, get_int,
                     load_config, model_keys)
from .errors import CompprocError
from .lyapunov import LogLyapunov, PowerLyapunov, certify, leading_order
from .models import AuxUrnModel, TypeIIModel
from .simulate import StopRule, batch, derive_seeds, simulate

_COMMON_KEYS = {"master_seed", "workers"}
_SUB_KEYS = {
    "simulate": {"x1", "x2", "max_jumps", "max_time", "stop_on_boundary",
                 "stop_below_y0", "jump_chain", "record", "stride"},
    "classify": {"x1", "x2", "seeds", "max_jumps", "burn_in"},
    "hitting": {"x1", "x2", "seeds", "max_jumps"},
    "lln": {"x1", "x2", "seeds", "max_jumps"},
    "urn": {"x1", "x2", "n_steps", "seeds", "recursion_n"},
    "series": {"terms"},
    "lyapunov": {"function", "nu", "mu", "x_hi", "strip"},
    "diagnostics": set(),
}


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _header_lines(sub: str, cfg: dict) -> list[str]:
    # workers is execution-only and contractually cannot change results, so
    # it stays out of the reproduction header (outputs must be byte-identical
    # at any worker count).
    lines = [f"compproc {__version__} subcommand={sub}"]
    lines += [f"{k} = {cfg[k]}" for k in sorted(cfg) if k != "workers"]
    return lines


def _render(header: list[str], body_lines: list[str]) -> str:
    return "".join(f"# {h}\n" for h in header) + "".join(f"{b}\n" for b in body_lines)


def _pmap(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _initial(cfg) -> tuple[int, int]:
    return (get_int(cfg, "x1"), get_int(cfg, "x2"))


def _master_seed(cfg) -> int:
    return get_int(cfg, "master_seed", 0)


# ---------------------------------------------------------------------------
# subcommand implementations, each returning (exit_code, summary_lines)


def _run_simulate(cfg, model, out: Path, workers: int):
    stop = StopRule(
        max_jumps=get_int(cfg, "max_jumps") if "max_jumps" in cfg else None,
        max_time=get_float(cfg, "max_time") if "max_time" in cfg else None,
        stop_on_boundary=get_bool(cfg, "stop_on_boundary"),
        stop_below_y0=get_int(cfg, "stop_below_y0") if "stop_below_y0" in cfg else None,
    )
    tr = simulate(model, _initial(cfg), stop, _master_seed(cfg),
                  jump_chain=get_bool(cfg, "jump_chain"),
                  record=cfg.get("record", "crossings"),
                  stride=get_int(cfg, "stride", 1024))
    header = _header_lines("simulate", cfg)
    tr.to_csv(out / "trajectory.csv", header)
    summary = [
        f"stopped_by = {tr.stopped_by}",
        f"jumps = {tr.n_jumps}",
        f"final = {tr.final_state[0]},{tr.final_state[1]}",
        f"final_time = {tr.final_time!r}",
        f"events_recorded = {tr.events_n.size}",
    ]
    _write_atomic(out / "summary.txt", _render(header, summary))
    return 0, summary


def _run_classify(cfg, model, out: Path, workers: int):
    n_seeds = get_int(cfg, "seeds")
    burn_in = get_float(cfg, "burn_in", 0.5)
    stop = StopRule(max_jumps=get_int(cfg, "max_jumps"))
    seeds = derive_seeds(_master_seed(cfg), n_seeds)
    initial = _initial(cfg)

    def one(seed):
        try:
            tr = simulate(model, initial, stop, seed, jump_chain=True,
                          record="crossings")
            res = classify(tr, burn_in)
        except CompprocError as exc:
            return f"{seed},,,,,,,,,{type(exc).__name__}: {exc}"
        levels = ";".join(f"{k}:{v}" for k, v in sorted(res.level_visit_counts.items()))
        return (f"{seed},{res.major_axis},{res.kappa_expected},"
                f"{res.kappa_observed},{int(res.confined)},{res.oscillations},"
                f"{_fmt(res.escape_slope)},{levels},{tr.stopped_by},")

    rows = _pmap(one, seeds, workers)
    header = _header_lines("classify", cfg)
    csv_lines = ["seed,major_axis,kappa_expected,kappa_observed,confined,"
                 "oscillations,escape_slope,level_visits,stopped_by,error"] + rows
    _write_atomic(out / "classify.csv", _render(header, csv_lines))

    parsed = [r.split(",") for r in rows]
    errors = sum(1 for p in parsed if p[-1])
    ok = [p for p in parsed if not p[-1]]
    n_ok = len(ok)
    confined = sum(int(p[4]) for p in ok)
    kappa_eq = sum(1 for p in ok if p[4] == "1" and p[3] == p[2])
    osc10 = sum(1 for p in ok if int(p[5]) >= 10)
    summary = [
        f"runs = {n_seeds}",
        f"errors = {errors}",
        f"frac_confined = {_fmt(confined / max(n_ok, 1))}",
        f"frac_confined_kappa_expected = {_fmt(kappa_eq / max(n_ok, 1))}",
        f"frac_oscillations_ge_10 = {_fmt(osc10 / max(n_ok, 1))}",
    ]
    _write_atomic(out / "summary.txt", _render(header, summary))
    return (1 if errors else 0), summary


def _run_hitting(cfg, model, out: Path, workers: int):
    n_seeds = get_int(cfg, "seeds")
    cap = get_int(cfg, "max_jumps")
    seeds = derive_seeds(_master_seed(cfg), n_seeds)
    start = _initial(cfg)
    stop = StopRule(max_jumps=cap, stop_on_boundary=True)
    summaries = batch(model, start, stop, seeds, workers=workers, record="none")
    stats = summarise_hitting(start, summaries)

    header = _header_lines("hitting", cfg)
    csv_lines = ["seed,stopped_by,tau_jumps,tau_time,final_x1,final_x2,error"]
    for s in summaries:
        final = s.final_state or ("", "")
        csv_lines.append(
            f"{s.seed},{s.stopped_by},"
            f"{'' if s.tau_jumps is None else s.tau_jumps},"
            f"{'' if s.tau_time is None else _fmt(s.tau_time)},"
            f"{final[0]},{final[1]},{s.error or ''}")
    _write_atomic(out / "hitting.csv", _render(header, csv_lines))
    summary = [
        f"runs = {stats.n_runs}",
        f"hit_fraction = {_fmt(stats.hit_fraction)}",
        f"censored = {stats.censored}",
        f"errors = {stats.errors}",
        f"mean_tau_jumps = {_fmt(stats.mean_tau_jumps) if stats.mean_tau_jumps is not None else 'n/a'}",
        f"se_tau_jumps = {_fmt(stats.se_tau_jumps) if stats.se_tau_jumps is not None else 'n/a'}",
        f"mean_tau_time = {_fmt(stats.mean_tau_time) if stats.mean_tau_time is not None else 'n/a'}",
        f"se_tau_time = {_fmt(stats.se_tau_time) if stats.se_tau_time is not None else 'n/a'}",
    ]
    _write_atomic(out / "summary.txt", _render(header, summary))
    return (1 if stats.errors else 0), summary


def _run_lln(cfg, model, out: Path, workers: int):
    if not isinstance(model, TypeIIModel):
        raise ConfigError("lln requires a type II model")
    n_seeds = get_int(cfg, "seeds")
    cap = get_int(cfg, "max_jumps")
    diag = linear_diagnostics(model)
    seeds = derive_seeds(_master_seed(cfg), n_seeds)
    initial = _initial(cfg)
    stop = StopRule(max_jumps=cap, stop_on_boundary=True)

    def one(seed):
        tr = simulate(model, initial, stop, seed, jump_chain=True, record="full")
        rep = lln_check(tr, diag)
        gap = "" if rep.rel_gap is None else _fmt(rep.rel_gap)
        return (f"{seed},{tr.n_jumps},{tr.stopped_by},{_fmt(rep.slope)},{gap},"
                f"{_fmt(rep.log_ratio)},{int(rep.inconclusive)}")

    rows = _pmap(one, seeds, workers)
    header = _header_lines("lln", cfg)
    csv_lines = ["seed,pre_tau_jumps,stopped_by,slope,rel_gap,log_ratio,"
                 "inconclusive"] + rows
    _write_atomic(out / "lln.csv", _render(header, csv_lines))

    parsed = [r.split(",") for r in rows]
    qualifying = [p for p in parsed if int(p[1]) >= 10**4]
    within = sum(1 for p in qualifying if p[4] and float(p[4]) <= 0.1)
    sublinear = sum(1 for p in parsed if float(p[5]) <= 0.6)
    summary = [
        f"rho_tilde = {_fmt(diag.rho_tilde)}",
        f"runs = {n_seeds}",
        f"qualifying_runs = {len(qualifying)}",
        f"frac_slope_within_10pct = {_fmt(within / max(len(qualifying), 1))}",
        f"frac_log_ratio_le_0.6 = {_fmt(sublinear / max(len(parsed), 1))}",
    ]
    _write_atomic(out / "summary.txt", _render(header, summary))
    return 0, summary


def _run_urn(cfg, model, out: Path, workers: int):
    if not isinstance(model, AuxUrnModel):
        raise ConfigError("urn requires type = urn")
    initial = _initial(cfg)
    n_steps = get_int(cfg, "n_steps")
    n_seeds = get_int(cfg, "seeds", 0)
    recursion_n = get_int(cfg, "recursion_n", n_steps)
    header = _header_lines("urn", cfg)

    moments = urn_moment_recursion(model, initial, recursion_n)
    step_out = max(1, recursion_n // 1000)
    csv_lines = ["n,EU,EU2,scaled_second,running_max"]
    for n in range(1, recursion_n + 1, step_out):
        csv_lines.append(f"{n},{_fmt(float(moments.EU[n]))},"
                         f"{_fmt(float(moments.EU2[n]))},"
                         f"{_fmt(float(moments.scaled_second[n - 1]))},"
                         f"{_fmt(float(moments.running_max[n - 1]))}")
    _write_atomic(out / "urn_moments.csv", _render(header, csv_lines))

    seeds = derive_seeds(_master_seed(cfg), max(n_seeds, 1))
    path_diag = urn_simulate(model, initial, n_steps, seeds[0])
    step_out = max(1, n_steps // 1000)
    csv_lines = ["n,U,Z,scaled_diff"]
    for n in range(1, n_steps + 1, step_out):
        csv_lines.append(f"{n},{path_diag.U[n]},{_fmt(float(path_diag.Z[n]))},"
                         f"{_fmt(float(path_diag.scaled_diff[n - 1]))}")
    _write_atomic(out / "urn_path.csv", _render(header, csv_lines))

    summary = [
        f"rho = {_fmt(model.rho)}",
        f"recursion_n = {recursion_n}",
        f"running_max_final = {_fmt(float(moments.running_max[-1]))}",
        f"running_max_change_last_decade = "
        f"{_fmt(moments.plateau_change(max(recursion_n // 10, 1), recursion_n))}",
    ]
    if n_seeds:
        half = n_steps // 2
        def one(seed):
            d = urn_simulate(model, initial, n_steps, seed)
            return (f"{seed},{d.U[half]},{d.U[n_steps]},"
                    f"{_fmt(float(d.scaled_diff[half - 1]))},"
                    f"{_fmt(float(d.scaled_diff[n_steps - 1]))}")
        rows = _pmap(one, seeds, workers)
        _write_atomic(out / "urn_mc.csv", _render(
            header, ["seed,U_half,U_final,scaled_half,scaled_final"] + rows))
        sc_half = np.array([float(r.split(",")[3]) for r in rows])
        sc_final = np.array([float(r.split(",")[4]) for r in rows])
        v_half, v_final = sc_half.var(ddof=1), sc_final.var(ddof=1)
        summary += [
            f"mc_seeds = {n_seeds}",
            f"var_scaled_half = {_fmt(float(v_half))}",
            f"var_scaled_final = {_fmt(float(v_final))}",
            f"var_ratio = {_fmt(float(v_final / v_half))}",
        ]
    _write_atomic(out / "summary.txt", _render(header, summary))
    return 0, summary


def _run_series(cfg, model, out: Path, workers: int):
    if isinstance(model, AuxUrnModel):
        raise ConfigError("series requires a competition model (type I or II)")
    K = get_int(cfg, "terms", 200)
    interior = reuter_series(*model_rs(model, boundary=False), K)
    boundary = reuter_series(*model_rs(model, boundary=True), K)
    header = _header_lines("series", cfg)

    csv_lines = ["k,A_partial,At_partial"]
    at = boundary.at_partial
    for i in range(K - 1):
        at_val = "" if at is None else _fmt(float(at[i + 1]))
        csv_lines.append(f"{i + 2},{_fmt(float(interior.a_partial[i]))},{at_val}")
    _write_atomic(out / "series.csv", _render(header, csv_lines))

    summary = [
        f"terms = {K}",
        f"A_verdict = {interior.a_verdict}",
        f"A_last_term = {_fmt(interior.a_last_term)}",
        f"A_ratio_tail = {_fmt(interior.a_ratio_tail)}",
        f"At_verdict = {boundary.at_verdict}",
    ]
    if boundary.at_undefined_reason:
        summary.append(f"At_undefined_reason = {boundary.at_undefined_reason}")
    _write_atomic(out / "summary.txt", _render(header, summary))
    return 0, summary


def _run_lyapunov(cfg, model, out: Path, workers: int):
    kind = cfg.get("function", "power")
    if kind == "power":
        f = PowerLyapunov(get_float(cfg, "nu", 0.3), get_float(cfg, "mu", 0.6))
        default_strip = "0,1"
    elif kind == "log":
        f = LogLyapunov(model.lambda1, model.lambda2)
        default_strip = "0,1,2"
    else:
        raise ConfigError("function must be 'power' or 'log'")
    strip = tuple(int(v) for v in cfg.get("strip", default_strip).split(","))
    x_hi = get_int(cfg, "x_hi", 10**6)
    report = certify(model, f, strip, x_hi)
    lines = report.summary_lines()
    for y in strip:
        try:
            term = leading_order(model, f, y)
            lines.append(f"leading[y={y}]  {_fmt(term.coefficient)} * {term.scale}"
                         f" (negative={term.negative})")
        except ValueError as exc:
            lines.append(f"leading[y={y}]  unavailable: {exc}")
    header = _header_lines("lyapunov", cfg)
    _write_atomic(out / "certificate.txt", _render(header, lines))
    return (0 if report.certified else 1), lines


def _run_diagnostics(cfg, model, out: Path, workers: int):
    if not isinstance(model, TypeIIModel):
        raise ConfigError("diagnostics requires a type II model")
    diag = linear_diagnostics(model)
    summary = [
        f"swapped = {diag.swapped}",
        f"r = {_fmt(diag.r)}",
        f"D = {_fmt(diag.D)}",
        f"d = {_fmt(diag.d)}",
        f"rho_tilde = {_fmt(diag.rho_tilde)}",
        f"regime = {diag.regime}",
        f"k = {'n/a' if diag.k is None else _fmt(diag.k)}",
        f"l = {'n/a' if diag.l is None else _fmt(diag.l)}",
        f"cubic_coeff = {_fmt(diag.cubic_coeff)}",
        f"Q1 = {_fmt(diag.Q1)}",
        f"Q3 = {_fmt(diag.Q3)}",
        f"y0 = {diag.y0}",
    ]
    header = _header_lines("diagnostics", cfg)
    _write_atomic(out / "diagnostics.txt", _render(header, summary))
    return 0, summary


_RUNNERS = {
    "simulate": _run_simulate,
    "classify": _run_classify,
    "hitting": _run_hitting,
    "lln": _run_lln,
    "urn": _run_urn,
    "series": _run_series,
    "lyapunov": _run_lyapunov,
    "diagnostics": _run_diagnostics,
}


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="compproc",
        description="simulation and diagnostics for 2-d competition processes")
    parser.add_argument("subcommand", choices=sorted(_RUNNERS))
    parser.add_argument("--config", required=True, help="key=value config file")
    parser.add_argument("--seed", type=int, help="override master_seed")
    parser.add_argument("--workers", type=int, help="worker threads")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = _parse_args(argv)
    try:
        cfg = load_config(args.config)
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            key, value = item.split("=", 1)
            cfg[key.strip()] = value.strip()
        if args.seed is not None:
            cfg["master_seed"] = str(args.seed)
        if args.workers is not None:
            cfg["workers"] = str(args.workers)

        allowed = model_keys(cfg) | _COMMON_KEYS | _SUB_KEYS[args.subcommand]
        unknown = sorted(set(cfg) - allowed)
        if unknown:
            raise ConfigError(
                f"unknown keys for {args.subcommand}: {', '.join(unknown)}")
        model = build_model(cfg)
        workers = get_int(cfg, "workers", 1)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        code, summary = _RUNNERS[args.subcommand](cfg, model, out, workers)
    except (ConfigError, CompprocError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in summary:
        print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
