"""Command-line entry point: ``chanup {info,upgrade,verify,gen,compare}``.

Exit status is 0 on success, 1 on usage, I/O or parse errors and 2 when a
verification fails.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from .channel import FLOAT, RATIONAL, classify_symbol, lr_norm, lr_vector, ml_error_probability, symmetric_capacity
from .errors import ChannelError, InstanceTooLarge, InvalidSpec
from .io import GenSpec, gen_channel_text, parse_channel_text, parse_witness_text, write_channel_text, write_witness_text
from .reducer import FOLDED, STRATIFIED, ReductionConfig, upgrade_reduce, _fmt
from .verify import VERIFY_TOL, check_upgrade_witness, feasibility_oracle, metrics_delta


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path, arith=None):
    return parse_channel_text(Path(path).read_text(), arith=arith)


def cmd_info(args):
    ch = _read(args.file)
    classes = Counter(classify_symbol(c, ch.p).value for c in ch.columns())
    norms = [lr_norm(lr_vector(c)) for c in ch.columns()]
    print(f"p: {ch.p}")
    print(f"q: {ch.q}")
    for name in ("normal", "leftover", "odd"):
        print(f"{name}: {classes[name]}")
    print(f"capacity: {symmetric_capacity(ch)!r}")
    print(f"error_probability: {_fmt(ml_error_probability(ch))}")
    print(f"lr_norm_min: {min(norms)!r}")
    print(f"lr_norm_max: {max(norms)!r}")
    return 0


def cmd_upgrade(args):
    ch = _read(args.file, args.arith)
    kw = {"mode": args.mode, "target_size": args.target_size}
    if args.tol is not None:
        kw["split_tol"] = args.tol
    q_prime, witness, report = upgrade_reduce(ch, ReductionConfig(**kw))
    Path(args.output).write_text(write_channel_text(q_prime))
    if args.witness:
        Path(args.witness).write_text(write_witness_text(witness, ch.arith_mode))
    if args.report:
        Path(args.report).write_text(report.to_text())
    return 0


def cmd_verify(args):
    if args.witness is None and not args.oracle:
        print("verify: give a witness file or --oracle", file=sys.stderr)
        return 1
    w, q_prime = _read(args.w), _read(args.q)
    ok = True
    if args.witness is not None:
        witness = parse_witness_text(Path(args.witness).read_text())
        rep = check_upgrade_witness(w, q_prime, witness, args.tol)
        print(f"max_abs_residual: {_fmt(rep.max_abs_residual)}")
        print(f"rows_ok: {rep.rows_ok}")
        print(f"verdict: {rep.verdict}")
        ok = ok and rep.passed
    if args.oracle:
        exact = w.arith_mode == RATIONAL and q_prime.arith_mode == RATIONAL
        feasible = feasibility_oracle(w, q_prime, 0 if exact else args.tol)
        print(f"oracle: {'feasible' if feasible else 'infeasible'}")
        ok = ok and feasible
    return 0 if ok else 2


def cmd_gen(args):
    spec = GenSpec(args.p, args.q, args.dist, args.seed, args.k, args.sigma, args.centers, args.arith)
    Path(args.output).write_text(gen_channel_text(spec))
    return 0


def cmd_compare(args):
    a, b = _read(args.a), _read(args.b)
    dc, de = metrics_delta(a, b)
    print(f"delta_capacity: {dc!r}")
    print(f"delta_error_prob: {_fmt(de)}")
    return 0


def build_parser():
    ap = _Parser(prog="chanup", description="Upgraded output-alphabet reduction for DMCs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", help="summarize a channel file")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("upgrade", help="reduce the output alphabet")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--witness")
    p.add_argument("--mode", choices=(STRATIFIED, FOLDED), default=STRATIFIED)
    p.add_argument("--target-size", type=int)
    p.add_argument("--arith", choices=(FLOAT, RATIONAL))
    p.add_argument("--tol", type=float, help="kernel snapping tolerance (float mode)")
    p.add_argument("--report")
    p.set_defaults(func=cmd_upgrade)

    p = sub.add_parser("verify", help="check W = Q'.P or decide feasibility")
    p.add_argument("w")
    p.add_argument("q")
    p.add_argument("witness", nargs="?")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--tol", type=float, default=VERIFY_TOL)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a seeded random channel")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dist", choices=("dirichlet", "clustered"), default="dirichlet")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--centers", choices=("random", "unit"), default="random")
    p.add_argument("--arith", choices=(FLOAT, RATIONAL), default=FLOAT)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="print capacity and error-probability deltas")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code or 0
    try:
        return args.func(args)
    except (OSError, ChannelError, InvalidSpec, InstanceTooLarge, ValueError) as exc:
        print(f"chanup: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
