"""Command-line interface.

Exit codes: 0 for success or a positive verdict, 1 for a negative verdict
(false, differ, irreplaceable, nothing found), 2 for usage or validation errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import NetlogicError, SearchExhausted
from .evaluator import satisfies, sequences_equivalent
from .formula import to_text
from .io import dumps_model, export_dot, load_model
from .model import Op, UpdateSequence, apply_sequence, stabilize, to_rational
from .parser import parse
from .reducer import reduce
from .replace import (
    SearchConfig, brute_force_replaceable, find_replacement, find_replacement_multi,
    search_irreplaceable,
)

OK, NEGATIVE, ERROR = 0, 1, 2


def _sequence(text: str) -> UpdateSequence:
    try:
        return UpdateSequence.parse(text)
    except (ValueError, NetlogicError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text: str):
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _load(args):
    return load_model(args.model, args.mode)


def cmd_eval(args) -> int:
    holds = satisfies(_load(args), parse(args.formula))
    print("true" if holds else "false")
    return OK if holds else NEGATIVE


def cmd_update(args) -> int:
    sys.stdout.write(dumps_model(apply_sequence(_load(args), args.seq)))
    return OK


def cmd_stabilize(args) -> int:
    fixpoint, steps = stabilize(_load(args), args.op)
    sys.stdout.write(dumps_model(fixpoint))
    if not args.quiet:
        print(f"steps: {steps}", file=sys.stderr)
    return OK


def cmd_reduce(args) -> int:
    model = _load(args)
    out, trace = reduce(parse(args.formula), model.signature, model.omega, model.tau,
                        model.mode, expand=args.expand)
    print(to_text(out))
    if args.trace:
        for rule, before, after in trace.steps:
            print(f"{rule}: {to_text(before)}  =>  {to_text(after)}", file=sys.stderr)
    return OK


def cmd_equiv(args) -> int:
    report = sequences_equivalent(_load(args), args.seq1, args.seq2)
    if report.equivalent:
        print("equivalent")
        return OK
    print(f"differ at {to_text(report.witness)}")
    return NEGATIVE


def cmd_replace(args) -> int:
    verdict = find_replacement(_load(args))
    if verdict.replaceable:
        print(verdict.sequence.words())
        return OK
    print(f"irreplaceable: {', '.join(verdict.failed_conditions)}")
    return NEGATIVE


def cmd_replace_multi(args) -> int:
    seq = find_replacement_multi(_load(args), args.m)
    if seq is None:
        print("irreplaceable")
        return NEGATIVE
    print(seq.words())
    return OK


def cmd_oracle(args) -> int:
    seq = brute_force_replaceable(_load(args), args.max_len)
    if seq is None:
        print("none")
        return NEGATIVE
    print(seq.words())
    return OK


def cmd_search(args) -> int:
    cfg = SearchConfig(agent_count=args.agents, feature_count=args.features,
                       omega=args.omega, tau=args.tau, mode=args.mode or "literal",
                       seed=args.seed, budget=args.budget, exhaustive=args.exhaustive)
    try:
        result = search_irreplaceable(cfg)
    except SearchExhausted as exc:
        print(f"no witness: {exc}", file=sys.stderr)
        return NEGATIVE
    sys.stdout.write(dumps_model(result.model))
    if not args.quiet:
        print(f"candidates tried: {result.candidates}", file=sys.stderr)
        for name, value in result.facts.items():
            print(f"{name}: {str(value).lower()}", file=sys.stderr)
    return OK


def cmd_export_dot(args) -> int:
    sys.stdout.write(export_dot(_load(args)))
    return OK


def build_parser() -> argparse.ArgumentParser:
    # shared flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["literal", "irreflexive"],
                        default=argparse.SUPPRESS,
                        help="override the mode given in the model document")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress diagnostics on stderr")

    parser = argparse.ArgumentParser(
        prog="netlogic", parents=[common],
        description="Model checking for opinion diffusion and network formation.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = command("eval", cmd_eval, "evaluate a formula on a model")
    p.add_argument("model")
    p.add_argument("formula")

    p = command("update", cmd_update, "apply an update sequence and print the result")
    p.add_argument("model")
    p.add_argument("--seq", type=_sequence, required=True, help="e.g. diff,net,sync")

    p = command("stabilize", cmd_stabilize, "iterate one update to its fixpoint")
    p.add_argument("model")
    p.add_argument("--op", type=Op.coerce, required=True, metavar="{diff,net,sync}")

    p = command("reduce", cmd_reduce, "rewrite a formula into the static fragment")
    p.add_argument("formula")
    p.add_argument("--model", required=True, help="model supplying signature and thresholds")
    p.add_argument("--expand", action="store_true", help="also expand sim/pressure/psi atoms")
    p.add_argument("--trace", action="store_true", help="print the rewrite steps on stderr")

    p = command("equiv", cmd_equiv, "compare two update sequences on a model")
    p.add_argument("model")
    p.add_argument("--seq1", type=_sequence, required=True)
    p.add_argument("--seq2", type=_sequence, required=True)

    p = command("replace", cmd_replace, "find a diff/net sequence equivalent to sync")
    p.add_argument("model")

    p = command("replace-multi", cmd_replace_multi, "stage-wise replacement of sync^m")
    p.add_argument("model")
    p.add_argument("--m", type=_positive, required=True)

    p = command("oracle", cmd_oracle, "brute-force search for a replacement of sync")
    p.add_argument("model")
    p.add_argument("--max-len", type=_positive, default=None)

    p = command("search-counterexample", cmd_search, "search for an irreplaceable model")
    p.add_argument("--agents", type=_positive, default=3)
    p.add_argument("--features", type=_positive, default=3)
    p.add_argument("--omega", type=_rational, default=to_rational("1/2"))
    p.add_argument("--tau", type=_rational, default=to_rational("1/2"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=_positive, default=100_000)
    p.add_argument("--exhaustive", action="store_true",
                   help="enumerate all models instead of sampling")

    p = command("export-dot", cmd_export_dot, "print the influence graph in DOT format")
    p.add_argument("model")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.mode = getattr(args, "mode", None)
    args.quiet = getattr(args, "quiet", False)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (NetlogicError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
