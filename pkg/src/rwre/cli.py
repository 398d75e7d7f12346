"""Command-line front end.

Subcommands: classify, simulate, estimate, select, oracle, experiment.
Usage mistakes exit 2 (argparse); runtime failures exit 1 with a one-line
JSON reason on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .densities import density_from_spec
from .errors import ParameterError, RwreError
from .estimator import estimate_density, oracle_density
from .experiment import ExperimentConfig, run_experiment, write_loss_csv, write_summary_csv
from .regime import classify
from .selection import select_order
from .simulate import (
    DEFAULT_MAX_STEPS,
    BranchSequence,
    counts_to_branch,
    run_walk_to_hit,
    simulate_bpire,
)

_EXACT_INT_LIMIT = float(1 << 53)


def _load_density(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"density spec is not valid JSON: {exc}") from None
    return density_from_spec(spec)


def _format_count(v):
    if v <= _EXACT_INT_LIMIT:
        return str(int(v))
    return repr(float(v))


def _write_branch(seq, fh):
    for v in seq.z:
        fh.write(_format_count(v) + "\n")


def read_branch_csv(path):
    """Parse a branch-sequence file: one count per line, first line 0."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ParameterError(
                    f"{path}:{lineno}: not a count: {line!r}"
                ) from None
    if not values:
        raise ParameterError(f"{path}: no data")
    return BranchSequence(np.asarray(values))


def _write_estimate_csv(piece, fh, header_fields):
    fh.write("# " + " ".join(f"{k}={v}" for k, v in header_fields) + "\n")
    fh.write("k,x_left,x_right,f_hat\n")
    m = piece.order
    for k in range(m + 1):
        x_left = k / m if k < m else 1.0
        x_right = (k + 1) / m if k < m else 1.0
        fh.write(f"{k},{x_left!r},{x_right!r},{float(piece.coeffs[k])!r}\n")


def _write_walk_csv(counts, fh):
    fh.write(
        f"# n={counts.n} T_n={counts.hitting_time} "
        f"truncated={1 if counts.truncated else 0}\n"
    )
    fh.write("y,L,R\n")
    for y in range(counts.min_site(), counts.n + 1):
        fh.write(f"{y},{counts.left_count(y)},{counts.right_count(y)}\n")


def _open_out(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _cmd_classify(args):
    d = _load_density(args.density)
    report = classify(d, tol=args.tol)
    json.dump(report.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_simulate(args):
    d = _load_density(args.density)
    rng = np.random.default_rng(args.seed)
    fh, close = _open_out(args.out)
    try:
        if args.mode == "bpire":
            seq = simulate_bpire(d, args.n, rng)
            _write_branch(seq, fh)
        else:
            counts = run_walk_to_hit(d, args.n, args.max_steps, rng)
            _write_walk_csv(counts, fh)
    finally:
        if close:
            fh.close()


def _cmd_estimate(args):
    seq = read_branch_csv(args.data)
    piece = estimate_density(seq, args.M)
    with open(args.out, "w", encoding="utf-8") as fh:
        _write_estimate_csv(piece, fh, [("n", seq.n), ("M", args.M)])


def _cmd_select(args):
    seq = read_branch_csv(args.data)
    grid = [int(tok) for tok in args.grid.split(",") if tok.strip()]
    diag = select_order(seq, grid, scope=args.cn_range)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(diag.to_dict(), fh, indent=2)
        fh.write("\n")


def _cmd_oracle(args):
    d = _load_density(args.density)
    piece = oracle_density(d, args.M)
    with open(args.out, "w", encoding="utf-8") as fh:
        _write_estimate_csv(piece, fh, [("density", d.label), ("M", args.M)])


def _cmd_experiment(args):
    cfg = ExperimentConfig.from_json(args.config)
    result = run_experiment(cfg, threads=args.threads)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "summary.csv", "w", encoding="utf-8") as fh:
        write_summary_csv(result.summary, fh)
    with open(out_dir / "losses.csv", "w", encoding="utf-8") as fh:
        write_loss_csv(result.losses, fh)
    msg = f"wrote {out_dir / 'summary.csv'} and {out_dir / 'losses.csv'}"
    if result.truncated:
        msg += f" ({result.truncated} truncated replications dropped)"
    print(msg)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rwre",
        description="Random walks in random environments: simulate, estimate, select.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="regime report for an environment density")
    p.add_argument("--density", required=True, help="density spec JSON file")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("simulate", help="draw one trajectory")
    p.add_argument("--density", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["walk", "bpire"], required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("estimate", help="density estimate from a branch file")
    p.add_argument("--data", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_estimate)

    p = sub.add_parser("select", help="data-driven smoothing order")
    p.add_argument("--data", required=True)
    p.add_argument("--grid", required=True, help="comma-separated orders")
    p.add_argument("--cn-range", choices=["all", "above"], default="above")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_select)

    p = sub.add_parser("oracle", help="order-M smoother of the exact density")
    p.add_argument("--density", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("experiment", help="replicated study from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=_cmd_experiment)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.fn(args)
    except RwreError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 1
    except OSError as exc:
        print(json.dumps({"error": "OSError", "detail": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
