"""
Command-line driver.

    wylight calibrate --transactions db.dat --labels y.txt
    wylight mine      --transactions db.dat --labels y.txt --format csv
    wylight compare   --transactions db.dat --labels y.txt --permutations 1000
    wylight fwer-curve --transactions db.dat --labels y.txt --J-values 100,1000

Exit status: 0 on success, 2 for unreadable or malformed input, 3 when the
labels have a single class, 1 for anything unexpected.  Reports are
written only after the run has finished.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

from . import __version__
from .analysis import (
    dataset_cost, format_fwer_csv, fwer_sweep, memory_estimates, mined_histogram)
from .baselines import (
    bonferroni_threshold, count_patterns, fastwy_threshold, tarone_lamp_threshold)
from .engine import compute_threshold, extract_significant
from .errors import DegenerateLabels, MalformedInput
from .exact_test import MODES, ONE_TAILED, psi_table
from .miner import parse_fimi, parse_labels
from .permutation import empirical_fwer, generate_permutations, load_permutations
from .testability import iter_states

BASELINES = ("bonferroni", "tarone", "fastwy")


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    transactions: str
    labels: str
    alpha: float = 0.05
    permutations: int = 10000
    seed: int = 0
    matrix: str | None = None
    mode: str = ONE_TAILED
    format: str = "json"
    output: str | None = None
    baselines: tuple = BASELINES
    J_values: tuple = (100, 1000)
    repetitions: int = 10

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InputError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if self.permutations < 1:
            raise InputError("--permutations must be at least 1")
        if any(J < 1 for J in self.J_values) or self.repetitions < 1:
            raise InputError("--J-values and --repetitions must be positive")


def _alpha(text):
    return float(text)


def _baselines(text):
    if text == "all":
        return BASELINES
    chosen = tuple(s.strip() for s in text.split(",") if s.strip())
    unknown = [s for s in chosen if s not in BASELINES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown baseline(s) {unknown}; choose from {BASELINES}")
    return chosen


def _int_list(text):
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wylight",
        description="Westfall-Young corrected thresholds for significant itemset mining.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--transactions", required=True, metavar="PATH",
                        help="FIMI file, one transaction of item ids per line")
    common.add_argument("--labels", required=True, metavar="PATH",
                        help="one 0/1 class label per line")
    common.add_argument("--alpha", type=_alpha, default=0.05, help="target FWER (default 0.05)")
    common.add_argument("--permutations", "-J", type=int, default=10000, dest="permutations",
                        help="number of label permutations (default 10000)")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--seed", type=int, default=None, help="permutation seed (default 0)")
    src.add_argument("--matrix", metavar="PATH",
                     help="explicit permutations, one per line; overrides --permutations")
    common.add_argument("--mode", choices=MODES, default=ONE_TAILED)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", metavar="PATH", help="report file (default stdout)")

    sub.add_parser("calibrate", parents=[common], help="compute the corrected threshold")
    sub.add_parser("mine", parents=[common], help="calibrate and list significant patterns")
    p = sub.add_parser("compare", parents=[common], help="run the baselines side by side")
    p.add_argument("--baselines", type=_baselines, default=BASELINES,
                   help="comma-separated subset of bonferroni,tarone,fastwy or 'all'")
    p = sub.add_parser("fwer-curve", parents=[common], help="FWER at the threshold against J")
    p.add_argument("--J-values", type=_int_list, default=(100, 1000), dest="J_values")
    p.add_argument("--repetitions", type=int, default=10)
    return parser


def config_from_args(args):
    fmt = args.format or ("csv" if args.command == "fwer-curve" else "json")
    return RunConfig(
        command=args.command,
        transactions=args.transactions,
        labels=args.labels,
        alpha=args.alpha,
        permutations=args.permutations,
        seed=0 if args.seed is None else args.seed,
        matrix=args.matrix,
        mode=args.mode,
        format=fmt,
        output=args.output,
        baselines=getattr(args, "baselines", BASELINES),
        J_values=getattr(args, "J_values", (100, 1000)),
        repetitions=getattr(args, "repetitions", 10),
    )


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def load_inputs(config):
    db = parse_fimi(_read(config.transactions), path=config.transactions)
    labels = parse_labels(_read(config.labels), db.N, path=config.labels)
    if config.matrix:
        matrix = load_permutations(_read(config.matrix), labels, path=config.matrix)
    else:
        matrix = generate_permutations(labels, config.permutations, config.seed)
    return db, labels, matrix


def _seed_field(config):
    return "external" if config.matrix else config.seed


def calibration_report(config, result):
    return {
        "delta_star": result.delta_star,
        "k_star": result.k_star,
        "sigma_l": result.sigma_l_final,
        "sigma_u": result.sigma_u_final,
        "n": result.n,
        "N": result.N,
        "J": result.J,
        "alpha": result.alpha,
        "mode": result.mode,
        "flipped_labels": result.flipped,
        "fwer_at_delta_star": result.fwer_at_delta_star,
        "patterns_visited": result.patterns_visited,
        "testable_visited": result.testable_visited,
        "seed": _seed_field(config),
    }


def _csv(rows, columns):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def _json(payload):
    return json.dumps(payload, indent=2) + "\n"


def cmd_calibrate(config):
    db, labels, matrix = load_inputs(config)
    result = compute_threshold(db, labels, matrix, config.alpha, config.mode)
    report = calibration_report(config, result)
    if config.format == "csv":
        return _csv([report], list(report))
    return _json(report)


PATTERN_COLUMNS = ("items", "support", "a", "pvalue")


def cmd_mine(config):
    db, labels, matrix = load_inputs(config)
    result = compute_threshold(db, labels, matrix, config.alpha, config.mode)
    patterns = [
        {"items": [int(i) for i in p.itemset], "support": p.support, "a": p.a, "pvalue": p.pvalue}
        for p in extract_significant(db, labels, result)]
    if config.format == "csv":
        rows = [dict(p, items=" ".join(map(str, p["items"]))) for p in patterns]
        return _csv(rows, PATTERN_COLUMNS)
    report = calibration_report(config, result)
    report["patterns"] = patterns
    return _json(report)


COMPARE_COLUMNS = ("method", "delta", "fwer", "stopping_support", "memory_model_bytes", "seconds")


def cmd_compare(config):
    db, labels, matrix = load_inputs(config)
    N, n, J = db.N, labels.n, matrix.J

    t0 = time.perf_counter()
    wy = compute_threshold(db, labels, matrix, config.alpha, config.mode)
    t_wy = time.perf_counter() - t0
    t0 = time.perf_counter()
    fw = fastwy_threshold(db, labels, matrix, config.alpha, config.mode)
    t_fw = time.perf_counter() - t0
    # FastWY's minima are exact everywhere, so every method's FWER is read off them.
    exact = fw.min_pvalues

    hist = mined_histogram(db, wy.sigma_l_final)
    region = next(s for s in iter_states(psi_table(n, N, config.mode)) if s.k == wy.k_star)
    C_wy, _ = dataset_cost(hist, region, N)
    worst = max(1, fw.sigma_worst)
    C_fw = sum(x * c for x, c in mined_histogram(db, worst).counts.items())

    rows = [{
        "method": "wylight", "delta": wy.delta_star,
        "fwer": empirical_fwer(exact, wy.delta_star),
        "stopping_support": wy.sigma_l_final,
        "memory_model_bytes": memory_estimates(N, J, C_wy).wylight_bytes,
        "seconds": t_wy,
    }]
    if "fastwy" in config.baselines:
        rows.append({
            "method": "fastwy", "delta": fw.delta_star,
            "fwer": empirical_fwer(exact, fw.delta_star),
            "stopping_support": fw.sigma_worst,
            "memory_model_bytes": memory_estimates(N, J, C_fw).fastwy_bytes,
            "seconds": t_fw,
        })
    if "tarone" in config.baselines:
        t0 = time.perf_counter()
        tr = tarone_lamp_threshold(db, n, N, config.alpha, config.mode)
        rows.append({
            "method": "tarone", "delta": tr.delta,
            "fwer": empirical_fwer(exact, tr.delta),
            "stopping_support": tr.sigma,
            "memory_model_bytes": None,
            "seconds": time.perf_counter() - t0,
        })
    if "bonferroni" in config.baselines:
        t0 = time.perf_counter()
        D = count_patterns(db)
        delta = bonferroni_threshold(D, config.alpha) if D else config.alpha
        rows.append({
            "method": "bonferroni", "delta": delta,
            "fwer": empirical_fwer(exact, delta),
            "stopping_support": 1,
            "memory_model_bytes": None,
            "seconds": time.perf_counter() - t0,
        })
    if config.format == "csv":
        return _csv(rows, COMPARE_COLUMNS)
    return _json({
        "n": n, "N": N, "J": J, "alpha": config.alpha, "mode": config.mode,
        "seed": _seed_field(config), "flipped_labels": labels.flipped,
        "memory_model": "analytic estimate, not a measurement",
        "methods": rows,
    })


def cmd_fwer_curve(config):
    db = parse_fimi(_read(config.transactions), path=config.transactions)
    labels = parse_labels(_read(config.labels), db.N, path=config.labels)
    if config.matrix:
        raise InputError("fwer-curve draws its own matrices; --matrix is not supported")
    rows = fwer_sweep(db, labels, config.alpha, config.J_values, config.repetitions,
                      config.seed, config.mode)
    if config.format == "json":
        return _json([vars(r) for r in rows])
    return format_fwer_csv(rows)


COMMANDS = {
    "calibrate": cmd_calibrate,
    "mine": cmd_mine,
    "compare": cmd_compare,
    "fwer-curve": cmd_fwer_curve,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        text = COMMANDS[config.command](config)
    except (InputError, MalformedInput) as exc:
        print(f"wylight: error: {exc}", file=sys.stderr)
        return 2
    except DegenerateLabels as exc:
        print(f"wylight: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - last-resort diagnostic
        print(f"wylight: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
