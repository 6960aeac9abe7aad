"""Command-line front end.

Subcommands ``simulate``, ``spectrum``, ``predict``, ``scaling`` and
``tulsi-compare`` write CSV (or JSON) tables whose first lines record the
resolved configuration and package version.  Exit status is 0 on success,
1 for usage or configuration errors and 2 for numerical-analysis errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .io import write_table
from .lattice import LatticeConfig, LatticeError
from .search import MODES, ConfigurationError, evolve, fit_scaling, run_search
from .spectral import SpectralAnalysisError, predict, spectral_sums, spectrum_table
from .walk import SearchTarget, default_delta, sample_measurement

OUTPUT_DIR_ENV = "HONEYCOMB_SEARCH_OUTPUT_DIR"

RUN_COLUMNS = ["t", "p_support", "overlap_sq"]
SUMMARY_COLUMNS = ["m", "N", "mode", "t_star", "p_star", "T_pred", "B_pred", "exponent", "expected_cost"]
KTABLE_COLUMNS = ["k1", "k2", "theta", "a_plus", "a_minus", "degenerate"]
SPECTRAL_SUMMARY_COLUMNS = ["m", "N", "a0", "A", "B", "T", "overlap_sq", "excluded"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _cell(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected 'n1,n2', got {text!r}")
    return vals[0], vals[1]


def _steps(text: str):
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("steps must be an integer or 'auto'") from None
    if value < 1:
        raise argparse.ArgumentTypeError("steps must be positive")
    return value


def _common(p: argparse.ArgumentParser, *, single_m=True, mode=True) -> None:
    if single_m:
        p.add_argument("--m", type=int, required=True, help="cells per torus direction (N = 2 m^2)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument(
        "--output-dir",
        type=Path,
        default=None,
        help=f"output directory (default: ${OUTPUT_DIR_ENV} or the current directory)",
    )
    if mode:
        p.add_argument("--mode", choices=MODES, default="akr")
        p.add_argument("--marked", type=_cell, default=(0, 0), help="marked cell 'n1,n2'")
        p.add_argument("--steps", type=_steps, default="auto", help="window length or 'auto' (3 T)")
        p.add_argument("--delta-log-base", choices=("natural", "base2", "base10"), default="natural")
        p.add_argument("--delta", type=float, default=None, help="explicit Tulsi rotation angle")
        p.add_argument(
            "--oracle-control",
            type=int,
            choices=(0, 1),
            default=0,
            help="ancilla value that enables the oracle in Tulsi mode",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="honeycomb-search", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="time series of the marked-cell probability")
    _common(p)
    p.add_argument("--seed", type=int, default=None, help="seed for optional measurement sampling")
    p.add_argument("--shots", type=int, default=0, help="sample this many measurements at t_star")

    p = sub.add_parser("spectrum", help="per-k angles and target amplitudes")
    _common(p, mode=False)

    p = sub.add_parser("predict", help="spectral prediction of T and final overlap")
    _common(p, mode=False)

    p = sub.add_parser("scaling", help="peak scaling across lattice sizes")
    _common(p, single_m=False)
    p.add_argument("--sizes", type=_int_list, required=True, help="comma-separated m values (at least 4)")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("tulsi-compare", help="AKR versus Tulsi peaks per size")
    _common(p, single_m=False)
    p.add_argument("--sizes", type=_int_list, default=[8, 16, 32, 64])
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _output_dir(args) -> Path:
    if args.output_dir is not None:
        return args.output_dir
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _ext(args) -> str:
    return "json" if args.format == "json" else "csv"


def _run_config(args, m: int, steps) -> dict:
    cfg = {
        "command": args.command,
        "m": m,
        "marked": list(args.marked),
        "mode": args.mode,
        "steps": steps,
        "delta_log_base": args.delta_log_base,
        "oracle_control": args.oracle_control,
        "format": args.format,
    }
    if args.mode == "tulsi":
        cfg["delta"] = args.delta if args.delta is not None else default_delta(2 * m * m, args.delta_log_base)
    return cfg


def _execute_run(args, m: int):
    cfg = LatticeConfig(m)
    target = SearchTarget(args.marked[0], args.marked[1], cfg)
    summary = predict(cfg)
    steps = 3 * summary.predicted_steps if args.steps == "auto" else args.steps
    run = run_search(
        cfg,
        target,
        mode=args.mode,
        max_steps=steps,
        delta=args.delta,
        log_base=args.delta_log_base,
        oracle_control=args.oracle_control,
        summary=summary,
    )
    return run, summary, steps


def _summary_row(run, summary, exponent=None) -> list:
    return [
        run.cfg.m,
        run.cfg.N,
        run.mode,
        run.t_star,
        run.p_star,
        summary.predicted_steps,
        summary.B,
        float("nan") if exponent is None else exponent,
        run.expected_cost,
    ]


def _write_run(args, run, steps, out: Path) -> Path:
    rows = zip(run.t.tolist(), run.p_support.tolist(), run.overlap_sq.tolist())
    path = out / f"run_m{run.cfg.m}_{run.mode}.{_ext(args)}"
    return write_table(path, RUN_COLUMNS, rows, _run_config(args, run.cfg.m, steps), args.format)


def cmd_simulate(args) -> int:
    run, summary, steps = _execute_run(args, args.m)
    out = _output_dir(args)
    paths = [_write_run(args, run, steps, out)]
    paths.append(
        write_table(
            out / f"summary_m{args.m}_{args.mode}.{_ext(args)}",
            SUMMARY_COLUMNS,
            [_summary_row(run, summary)],
            _run_config(args, args.m, steps),
            args.format,
        )
    )
    for p in paths:
        print(p)
    if args.shots:
        hits = _sample_at_peak(args, run)
        print(f"sampled {args.shots} measurements at t={run.t_star}: {hits} in the marked cell")
    return 0


def _sample_at_peak(args, run) -> int:
    # replay the deterministic run up to t_star, then sample positions
    state = evolve(
        run.cfg, run.target, run.t_star, mode=run.mode, delta=run.delta,
        oracle_control=args.oracle_control,
    )
    idx = sample_measurement(state, shots=args.shots, seed=args.seed) % run.cfg.dim
    m = run.cfg.m
    n1, n2 = (idx % (m * m)) // m, idx % m
    return int(np.count_nonzero((n1 == run.target.n1) & (n2 == run.target.n2)))


def cmd_spectrum(args) -> int:
    cfg = LatticeConfig(args.m)
    table = spectrum_table(cfg)
    summary = predict(cfg)
    config = {"command": "spectrum", "m": args.m, "format": args.format}
    out = _output_dir(args)
    rows = zip(*(table[c].tolist() for c in KTABLE_COLUMNS))
    paths = [
        write_table(out / f"spectrum_m{args.m}.{_ext(args)}", KTABLE_COLUMNS, rows, config, args.format),
        write_table(
            out / f"spectrum_summary_m{args.m}.{_ext(args)}",
            SPECTRAL_SUMMARY_COLUMNS,
            [_spectral_row(summary)],
            config,
            args.format,
        ),
    ]
    for p in paths:
        print(p)
    return 0


def _spectral_row(summary) -> list:
    r = summary.as_row()
    return [r["m"], r["N"], r["a0"], r["A"], r["B"], r["T"], r["overlap_sq"], summary.excluded]


def cmd_predict(args) -> int:
    cfg = LatticeConfig(args.m)
    summary = predict(cfg)
    sums = spectral_sums(cfg)
    config = {"command": "predict", "m": args.m, "format": args.format}
    path = write_table(
        _output_dir(args) / f"predict_m{args.m}.{_ext(args)}",
        SPECTRAL_SUMMARY_COLUMNS + ["alpha", "A_reduced", "B_reduced"],
        [_spectral_row(summary) + [summary.alpha, sums.A_reduced, sums.B_reduced]],
        config,
        args.format,
    )
    print(path)
    return 0


def _run_sizes(args):
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(lambda m: _execute_run(args, m), args.sizes))
    return [_execute_run(args, m) for m in args.sizes]


def cmd_scaling(args) -> int:
    if len(set(args.sizes)) < 4:
        raise UsageError("scaling needs at least 4 distinct sizes (--sizes m1,m2,m3,m4)")
    for m in args.sizes:
        LatticeConfig(m)
        LatticeConfig(m).check_cell(*args.marked)
    results = _run_sizes(args)
    fit = fit_scaling([r for r, _, _ in results])
    out = _output_dir(args)
    config = {
        "command": "scaling",
        "sizes": args.sizes,
        "mode": args.mode,
        "marked": list(args.marked),
        "steps": args.steps,
        "delta_log_base": args.delta_log_base,
        "oracle_control": args.oracle_control,
        "format": args.format,
    }
    paths = [_write_run(args, run, steps, out) for run, _, steps in results]
    paths.append(
        write_table(
            out / f"scaling_{args.mode}.{_ext(args)}",
            SUMMARY_COLUMNS,
            [_summary_row(run, summary, fit.exponent) for run, summary, _ in results],
            config,
            args.format,
        )
    )
    paths.append(
        write_table(
            out / f"scaling_{args.mode}_fit.{_ext(args)}",
            ["mode", "n_sizes", "exponent", "intercept", "r_squared", "sqrt_nlogn_coef", "sqrt_nlogn_residual"],
            [[fit.mode, len(fit.sizes), fit.exponent, fit.intercept, fit.r_squared,
              fit.sqrt_nlogn_coef, fit.sqrt_nlogn_residual]],
            config,
            args.format,
        )
    )
    for p in paths:
        print(p)
    print(f"exponent {fit.exponent:.4f} (R^2 {fit.r_squared:.4f})")
    return 0


def cmd_tulsi_compare(args) -> int:
    rows = []
    for m in args.sizes:
        per_mode = {}
        for mode in MODES:
            args.mode = mode
            per_mode[mode], _, _ = _execute_run(args, m)
        t = per_mode["tulsi"]
        rows.append([
            m, 2 * m * m,
            per_mode["akr"].t_star, per_mode["akr"].p_star,
            t.t_star, t.p_star, t.delta,
            t.p_star >= per_mode["akr"].p_star,
        ])
    config = {
        "command": "tulsi-compare",
        "sizes": args.sizes,
        "marked": list(args.marked),
        "steps": args.steps,
        "delta_log_base": args.delta_log_base,
        "oracle_control": args.oracle_control,
        "format": args.format,
    }
    path = write_table(
        _output_dir(args) / f"tulsi_compare.{_ext(args)}",
        ["m", "N", "t_star_akr", "p_star_akr", "t_star_tulsi", "p_star_tulsi", "delta", "tulsi_ge_akr"],
        rows,
        config,
        args.format,
    )
    print(path)
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "spectrum": cmd_spectrum,
    "predict": cmd_predict,
    "scaling": cmd_scaling,
    "tulsi-compare": cmd_tulsi_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (LatticeError, ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SpectralAnalysisError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
