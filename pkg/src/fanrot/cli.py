"""Command-line front end.

Exit status: 0 on success, 1 for a well-formed but invalid element,
2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from . import dyadic, plmap
from .dyadic import InvalidDyadicMap
from .lattice import InvalidFan
from .plmap import InvalidElement, PLAutomorphism
from .rotation import estimate_rotation, finite_order, rotation_number
from .sharp import RefinementError, decompose_simple, deterministic_refinement
from .spec import SpecError, parse_element

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INVALID, EXIT_MALFORMED = 0, 1, 2


def _rays(fan) -> list:
    return [[str(x), str(y)] for x, y in fan.rays]


def _fmt_rays(fan) -> str:
    return " ".join(f"({x},{y})" for x, y in fan.rays)


# Each command maps (element, args) -> (text, json payload).

def cmd_validate(F: PLAutomorphism, args):
    c = F.canonical()
    payload = {
        "valid": True,
        "sectors": F.fan.d,
        "regular": F.fan.is_regular,
        "linear": F.is_linear(),
        "breakpoints": [[str(x), str(y)] for x, y in F.breakpoints()],
        "canonical": plmap.to_json(c),
    }
    text = (
        f"valid: {F.fan.d} sectors, {len(F.breakpoints())} breakpoints, "
        f"{'regular' if F.fan.is_regular else 'not regular'} fan"
    )
    return text, payload


def cmd_rotnum(F, args):
    rho = rotation_number(F)
    return str(rho), {"rotation_number": str(rho)}


def cmd_order(F, args):
    k = finite_order(F, args.cap)
    if k is None:
        return f"infinite (cap {args.cap})", {"order": None, "cap": args.cap}
    return str(k), {"order": k, "cap": args.cap}


def cmd_decompose(F, args):
    steps = decompose_simple(F.regular())
    payload = {
        "steps": [
            {
                "kind": st.kind,
                "source_fan": _rays(st.source_fan),
                "target_fan": _rays(st.target_fan),
                "map": plmap.to_json(st.map),
            }
            for st in steps
        ]
    }
    # the trace is JSON either way
    return json.dumps(payload), payload


def cmd_detfan(F, args):
    fan, _ = deterministic_refinement(F)
    return _fmt_rays(fan), {"rays": _rays(fan)}


def cmd_convert(F, args):
    if args.to == "dyadic":
        payload = dyadic.to_json(dyadic.to_dyadic(F))
    else:
        payload = plmap.to_json(F.canonical())
    return json.dumps(payload), payload


def cmd_estimate(F, args):
    if args.iters < 1:
        raise SpecError("--iters must be >= 1")
    x = estimate_rotation(F, args.iters, args.x0)
    return repr(x), {"estimate": x, "iterations": args.iters, "x0": args.x0}


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "rotnum": cmd_rotnum,
    "order": cmd_order,
    "decompose": cmd_decompose,
    "detfan": cmd_detfan,
    "convert": cmd_convert,
    "estimate": cmd_estimate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    elem = argparse.ArgumentParser(add_help=False, parents=[common])
    elem.add_argument("spec", nargs="?", help="element spec, '-' for stdin")
    elem.add_argument("--batch", metavar="FILE", help="one element spec per line")

    parser = argparse.ArgumentParser(
        prog="fanrot",
        description="Exact rotation numbers for Thompson's group T acting on Z^2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[elem], help="check the element invariants")
    sub.add_parser("rotnum", parents=[elem], help="exact rotation number p/q")
    p = sub.add_parser("order", parents=[elem], help="finite order, if any")
    p.add_argument("--cap", type=int, default=64)
    sub.add_parser("decompose", parents=[elem], help="simple-map decomposition as JSON")
    sub.add_parser("detfan", parents=[elem], help="rays of the deterministic fan")
    p = sub.add_parser("convert", parents=[elem], help="convert between presentations")
    p.add_argument("--to", choices=["dyadic", "fan"], required=True)
    p = sub.add_parser("estimate", parents=[elem], help="floating-point rotation estimate")
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--x0", type=float, default=0.0)
    sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    return parser


def _run_one(spec: str, args, stdin) -> tuple[int, str, dict]:
    try:
        F = parse_element(spec, stdin)
        text, payload = COMMANDS[args.command](F, args)
        return EXIT_OK, text, payload
    except (InvalidElement, InvalidDyadicMap, InvalidFan) as exc:
        if args.command == "validate":
            return EXIT_INVALID, f"invalid: {exc}", {"valid": False, "error": str(exc)}
        return EXIT_INVALID, f"invalid element: {exc}", {"error": str(exc), "kind": "invalid"}
    except (SpecError, ValueError) as exc:
        return EXIT_MALFORMED, f"malformed input: {exc}", {"error": str(exc), "kind": "malformed"}


def _emit(args, spec: str, code: int, text: str, payload: dict, out):
    if args.json:
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "spec": spec,
               "status": code, **payload}
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def run(argv=None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "selftest":
        from .acceptance import CHECKS

        ok = True
        results = []
        for check in CHECKS:
            o = check()
            ok &= o.passed
            results.append({"number": o.number, "name": o.name, "passed": o.passed, "detail": o.detail})
            if not args.json:
                out.write(o.line() + "\n")
                out.flush()
        if args.json:
            out.write(json.dumps({"schema_version": SCHEMA_VERSION, "command": "selftest",
                                  "passed": ok, "criteria": results}, sort_keys=True) + "\n")
        return EXIT_OK if ok else EXIT_INVALID

    if args.batch:
        try:
            with open(args.batch, encoding="utf-8") as fh:
                specs = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        except OSError as exc:
            sys.stderr.write(f"cannot read batch file: {exc}\n")
            return EXIT_MALFORMED
    elif args.spec is not None:
        specs = [args.spec]
    else:
        sys.stderr.write("an element spec or --batch FILE is required\n")
        return EXIT_MALFORMED

    worst = EXIT_OK
    for spec in specs:
        try:
            code, text, payload = _run_one(spec, args, stdin)
        except RefinementError as exc:  # a bug, not bad input
            code, text, payload = 3, f"internal error: {exc}", {"error": str(exc), "kind": "internal"}
        _emit(args, spec, code, text, payload, out)
        worst = max(worst, code)
    return worst


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
