"""``orliczops`` command-line interface.

Exit status: 0 on success, 1 when a verification check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import asdict, is_dataclass

import numpy as np

from .bergman import bergman_operator, bergman_schatten_norm
from .functions import PHI_GRAMMAR, CoshMinusOne, Power, parse_phi
from .harness import run_suite
from .norms import (
    DivergenceError,
    TruncationError,
    amemiya_norm,
    classify_membership,
    luxemburg_norm,
    modular,
    rank_one_luxemburg,
)
from .operators import DiagonalOperator, InputError, load_operator, singular_values

BERGMAN_P = (1.5, 2.0, 3.0, 4.0)
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_DIAG_RE = re.compile(r"^\s*diag\((.*)\)\s*$", re.IGNORECASE)


class UsageError(Exception):
    pass


# serialization

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return f"{x:.17g}"


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float printed to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if is_dataclass(obj):
        obj = obj.to_dict() if hasattr(obj, "to_dict") else asdict(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{_json_str(str(k))}: {to_json(v, indent, _level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    return _json_str(str(obj))


def _json_str(s: str) -> str:
    return json.dumps(s)


def _flatten(obj, prefix=""):
    """``key value`` lines for text mode, using the JSON float formatting."""
    if is_dataclass(obj):
        obj = obj.to_dict() if hasattr(obj, "to_dict") else asdict(obj)
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple)) and any(isinstance(v, (dict, list, tuple)) or is_dataclass(v)
                                                for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    elif isinstance(obj, (list, tuple)):
        yield f"{prefix} " + " ".join(to_json(v) for v in obj)
    else:
        yield f"{prefix} {to_json(obj)}"


def render(obj, output: str) -> str:
    if output == "json":
        return to_json(obj) + "\n"
    return "\n".join(_flatten(obj)) + "\n"


# argument handling

def parse_operator(source: str):
    if source is None:
        raise UsageError("an operator is required (--op FILE, 'bergman' or 'diag(a,b,...)')")
    if source.strip().lower() == "bergman":
        return bergman_operator()
    m = _DIAG_RE.match(source)
    if m:
        parts = [s.strip() for s in m.group(1).split(",")]
        try:
            values = [complex(s.replace(" ", "")) for s in parts if s]
        except ValueError as exc:
            raise InputError(f"bad diagonal literal {source!r}: entries must be numbers") from exc
        if not values:
            raise InputError("diagonal literal needs at least one entry")
        return DiagonalOperator(values)
    if not os.path.exists(source):
        raise InputError(f"operator file {source!r} not found (built-ins: 'bergman', 'diag(...)')")
    return load_operator(source)


def _phi(args):
    if args.phi is None:
        raise UsageError(f"--phi is required; expected one of {PHI_GRAMMAR}")
    return parse_phi(args.phi)


def _positive(name):
    def conv(s):
        try:
            v = float(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {s!r}")
        if not (v > 0 and math.isfinite(v)):
            raise argparse.ArgumentTypeError(f"{name} must be positive and finite, got {s!r}")
        return v
    return conv


def _trials(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"trials must be an integer, got {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("trials must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--phi", help=f"Orlicz function: {PHI_GRAMMAR}")
    common.add_argument("--op", help="operator: JSON file, 'bergman' or 'diag(a,b,...)'")
    common.add_argument("--lambda", dest="lam", type=_positive("lambda"), default=None,
                        help="scale for the modular (default 1)")
    common.add_argument("--p", type=float, default=None, help="exponent (bergman: single row)")
    common.add_argument("--rel-tol", type=_positive("rel-tol"), default=1e-10)
    common.add_argument("--eps-tail", type=_positive("eps-tail"), default=1e-11)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=_trials, default=500)
    common.add_argument("--max-terms", type=_trials, default=1000,
                        help="singular values listed for analytic operators")
    common.add_argument("--output", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(
        prog="orliczops",
        description="Orlicz norms and modulars of compact operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("norm", parents=[common], help="Luxemburg and Orlicz norms")
    sub.add_parser("modular", parents=[common], help="Tr phi(lambda x)")
    sub.add_parser("membership", parents=[common], help="S_phi / E_phi membership")
    sub.add_parser("verify", parents=[common], help="run the randomized inequality suite")
    sub.add_parser("bergman", parents=[common], help="Bergman Toeplitz operator table")
    sub.add_parser("svd", parents=[common], help="singular-value spectrum")
    return parser


# commands

def cmd_norm(args):
    op, f = parse_operator(args.op), _phi(args)
    lux = luxemburg_norm(op, f, rel_tol=args.rel_tol, eps_tail=args.eps_tail)
    orl = amemiya_norm(op, f, rel_tol=args.rel_tol, eps_tail=args.eps_tail)
    return {"luxemburg": lux, "orlicz": orl}, EXIT_OK


def cmd_modular(args):
    op, f = parse_operator(args.op), _phi(args)
    lam = 1.0 if args.lam is None else args.lam
    return modular(op, f, lam, args.eps_tail), EXIT_OK


def cmd_membership(args):
    op, f = parse_operator(args.op), _phi(args)
    return classify_membership(op, f), EXIT_OK


def cmd_verify(args):
    reports = run_suite(seed=args.seed, trials=args.trials)
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    return reports, status


def bergman_table(ps=BERGMAN_P, rel_tol=1e-10, eps_tail=1e-11):
    op = bergman_operator()
    rows = []
    for p in ps:
        closed = bergman_schatten_norm(p)
        computed = luxemburg_norm(op, Power(p), rel_tol=rel_tol, eps_tail=eps_tail).value
        rows.append({"p": p, "closed_form": closed, "computed": computed,
                     "difference": computed - closed})
    cosh = rank_one_luxemburg(CoshMinusOne())
    closed = 1.0 / math.log(2.0 + math.sqrt(3.0))
    return {"rows": rows,
            "cosh_rank_one": {"closed_form": closed, "computed": cosh,
                              "difference": cosh - closed}}


def cmd_bergman(args):
    ps = BERGMAN_P if args.p is None else (args.p,)
    if args.p is not None and not args.p > 1:
        raise InputError("the Bergman operator is not trace class; --p must exceed 1")
    return bergman_table(ps, args.rel_tol, args.eps_tail), EXIT_OK


def cmd_svd(args):
    return singular_values(parse_operator(args.op), args.max_terms), EXIT_OK


COMMANDS = {
    "norm": cmd_norm,
    "modular": cmd_modular,
    "membership": cmd_membership,
    "verify": cmd_verify,
    "bergman": cmd_bergman,
    "svd": cmd_svd,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"orliczops {args.command}: {exc}", file=stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"orliczops {args.command}: input error: {exc}", file=stderr)
        return EXIT_INPUT
    except DivergenceError as exc:
        print(f"orliczops {args.command}: operator not in S_phi: {exc}", file=stderr)
        return EXIT_INPUT
    except TruncationError as exc:
        print(f"orliczops {args.command}: {exc}", file=stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"orliczops {args.command}: {exc}", file=stderr)
        return EXIT_INPUT
    stdout.write(render(result, args.output))
    return status


def main(argv=None) -> None:
    sys.exit(run(argv))
