"""Command-line front end.

Exit status is 0 when a YES/NO decision was reached, 2 when the run ended
UNDECIDED and 1 on any error (including malformed flags).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from typing import Any, Optional, Sequence

from . import baseline, coinflipper, montecarlo, predict
from .core import Decision, SeqCoinError, Transcript, parse_probability
from .schedule import BudgetOverflow, fixed_sample_k
from .sources import FlipSource, RecordedSource, SyntheticSource

DEFAULT_BUDGET = 2**26

CSV_COLUMNS = (
    "p", "q", "delta", "trials", "wrong", "undecided", "error_rate", "wilson_hi99",
    "mean_iters", "sem_iters", "mean_flips", "sem_flips", "d", "iter_bound", "flips_bound",
)

EXIT_DECIDED, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with status 2
        raise UsageError(message)


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not a 64-bit unsigned integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} must be a positive integer")
    return value


def _add_source_flags(cmd: argparse.ArgumentParser) -> None:
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", help="heads probability of a synthetic coin (needs --seed)")
    group.add_argument("--stdin", action="store_true", help="read H/T flips from standard input")
    group.add_argument("--file", help="read H/T flips from a file")
    cmd.add_argument("--seed", type=_u64, help="seed of the synthetic coin")


def _make_source(args: argparse.Namespace) -> FlipSource:
    if args.p is not None:
        if args.seed is None:
            raise UsageError("--p needs --seed")
        return SyntheticSource(float(parse_probability(args.p)), seed=args.seed)
    if args.seed is not None:
        raise UsageError("--seed only applies to --p")
    if args.stdin:
        return RecordedSource.from_stdin()
    return RecordedSource.from_file(args.file)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seqcoin", description="Decide whether a coin's heads probability is below or above q.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    decide = sub.add_parser("decide", help="run the sequential tester once")
    decide.add_argument("--q", required=True)
    decide.add_argument("--delta", required=True)
    decide.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    decide.add_argument("--transcript", action="store_true", help="add thresholds and run parameters")
    _add_source_flags(decide)

    base = sub.add_parser("baseline", help="run the fixed-sample known-gap tester once")
    base.add_argument("--q", required=True)
    base.add_argument("--epsilon", required=True)
    base.add_argument("--delta", required=True)
    _add_source_flags(base)

    workers_default = int(os.environ.get("SEQCOIN_WORKERS", "1"))
    for name, help_text in (("simulate", "Monte Carlo trials at one grid point"),
                            ("sweep", "Monte Carlo trials over comma-separated grids of p, q, delta")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--p", required=True)
        cmd.add_argument("--q", required=True)
        cmd.add_argument("--delta", required=True)
        cmd.add_argument("--trials", type=int, required=True)
        cmd.add_argument("--seed", type=_u64, required=True)
        cmd.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
        cmd.add_argument("--format", choices=("json", "csv"), default="json")
        cmd.add_argument("--workers", type=_positive, default=workers_default)
        cmd.add_argument("--algorithm", choices=("coinflipper", "baseline"), default="coinflipper")
        cmd.add_argument("--epsilon")

    pred = sub.add_parser("predict", help="difficulty and expectation bounds")
    pred.add_argument("--p", required=True)
    pred.add_argument("--q", required=True)
    pred.add_argument("--delta", required=True)
    pred.add_argument("--tail-terms", type=int, default=4)
    return parser


def _dump(obj: Any) -> str:
    return json.dumps(obj, allow_nan=False) + "\n"


def _transcript_json(t: Transcript, detailed: bool) -> dict[str, Any]:
    out = t.to_dict()
    if detailed:
        q = parse_probability(t.q)
        for r, row in zip(t.rounds, out["rounds"]):
            lower, upper = q * r.k - r.epsilon * r.k, q * r.k + r.epsilon * r.k
            row["lower"] = str(lower)
            row["upper"] = str(upper)
        out["params"] = {"q": t.q, "delta": t.delta, "budget": t.budget, "source": t.source}
    return out


def cmd_decide(args: argparse.Namespace, out) -> int:
    source = _make_source(args)
    try:
        t = coinflipper.run(source, args.q, args.delta, budget=args.budget)
    except BudgetOverflow as exc:
        print(f"seqcoin: {exc}; reporting UNDECIDED", file=sys.stderr)
        t = exc.transcript
    out.write(_dump(_transcript_json(t, args.transcript)))
    return EXIT_UNDECIDED if t.decision is Decision.UNDECIDED else EXIT_DECIDED


def cmd_baseline(args: argparse.Namespace, out) -> int:
    source = _make_source(args)
    decision = baseline.run_known_gap(source, args.q, args.epsilon, args.delta)
    out.write(_dump({
        "decision": decision.value,
        "meaning": decision.meaning,
        "k": fixed_sample_k(args.epsilon, args.delta),
        "total_flips": source.consumed,
    }))
    return EXIT_DECIDED


def _split(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _grid(args: argparse.Namespace, sweep: bool) -> list[montecarlo.TrialConfig]:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.algorithm == "baseline" and args.epsilon is None:
        raise UsageError("--algorithm baseline needs --epsilon")
    ps, qs, deltas = (_split(v) if sweep else [v] for v in (args.p, args.q, args.delta))
    configs = []
    for p, q, delta in itertools.product(ps, qs, deltas):
        parse_probability(p)
        configs.append(montecarlo.TrialConfig(
            p=p, q=q, delta=delta, trials=args.trials, master_seed=args.seed,
            budget=args.budget, algorithm=args.algorithm, epsilon=args.epsilon,
        ))
    return configs


def format_stats(stats: Sequence[montecarlo.TrialStats], fmt: str, many: bool) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for s in stats:
            writer.writerow({k: ("" if v is None else v) for k, v in s.to_row().items()})
        return buf.getvalue()
    docs = [s.to_dict() for s in stats]
    return _dump(docs if many else docs[0])


def cmd_simulate(args: argparse.Namespace, out, sweep: bool = False) -> int:
    configs = _grid(args, sweep)
    stats = montecarlo.sweep(configs, workers=args.workers)
    out.write(format_stats(stats, args.format, many=sweep))
    return EXIT_DECIDED


def cmd_predict(args: argparse.Namespace, out) -> int:
    rep = predict.report(args.p, args.q, args.delta, tail_terms=args.tail_terms)
    doc = rep.to_dict()
    out.write(_dump({
        "d": doc["d"],
        "gap": doc["gap"],
        "iteration_bound": doc["iteration_bound"],
        "flips_upper_bound": doc["flips_upper_bound"],
        "series": doc["series"],
    }))
    return EXIT_DECIDED


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command == "decide":
            return cmd_decide(args, out)
        if args.command == "baseline":
            return cmd_baseline(args, out)
        if args.command in ("simulate", "sweep"):
            return cmd_simulate(args, out, sweep=args.command == "sweep")
        return cmd_predict(args, out)
    except UsageError as exc:
        print(f"seqcoin: usage error: {exc}", file=sys.stderr)
    except (SeqCoinError, OSError, ValueError) as exc:
        print(f"seqcoin: error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
