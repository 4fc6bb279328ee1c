"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 domain or parse error,
3 decomposition failure.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import characters as ch
from . import fock, jsonio, verify
from .jsonio import fmt, rational
from .qseries import CharSeries

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_DECOMPOSE = 0, 1, 2, 3

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Accept ``a/b`` or an integer; decimals and floats are refused."""
    text = text.strip()
    if not _RATIONAL.match(text):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational of the form a/b or an integer")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise argparse.ArgumentTypeError(f"{text!r} has a zero denominator")
    return Fraction(int(num), int(den) if den else 1)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Lets ``-1/4`` through as a value instead of an unknown option."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$")


def _default_order(fallback: int) -> int:
    raw = os.environ.get("VIRC1_DEFAULT_ORDER")
    if raw is None:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"VIRC1_DEFAULT_ORDER must be an integer, got {raw!r}")
    if value < 0:
        raise UsageError("VIRC1_DEFAULT_ORDER must be nonnegative")
    return value


def read_config(path: str) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


# --- documents ----------------------------------------------------------------

def document(command: str, inputs: dict[str, Any], results: Any,
             verified_order: Optional[int] = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "schema": jsonio.SCHEMA,
        "command": command,
        "inputs": jsonio.encode(inputs),
        "results": jsonio.encode(results),
    }
    if verified_order is not None:
        doc["verified_order"] = verified_order
    return doc


def _label_json(label: ch.SectorLabel) -> dict[str, Any]:
    return {"h": rational(label.h), "class": label.kind,
            "s": rational(label.s) if label.degenerate else None}


def _fusion_json(result: ch.FusionResult) -> dict[str, Any]:
    return {
        "summands": [dict(_label_json(lab), multiplicity=m) for lab, m in result.summands],
        "unresolved_tail": result.unresolved_tail,
    }


def _char_json(c: CharSeries) -> dict[str, Any]:
    return {"offset": rational(c.offset), "order": c.order,
            "coefficients": [rational(x) for x in c.body.to_list()]}


def _char_line(c: CharSeries) -> str:
    return ", ".join(fmt(x) for x in c.body.to_list())


def _sector_table(result: ch.FusionResult) -> list[str]:
    lines = ["h        class       s      mult"]
    for lab, m in result.summands:
        s = fmt(lab.s) if lab.degenerate else "-"
        lines.append(f"{fmt(lab.h):<8} {lab.kind:<11} {s:<6} {m}")
    return lines


# --- commands -------------------------------------------------------------------

def cmd_fuse(args) -> tuple[dict, list[str], int]:
    try:
        result = ch.fuse(args.q1, args.q2)
    except ch.DomainError as exc:
        raise UsageError(
            f"{exc} (the fusion rule holds only for q1 in (1/2)N0 and q2 outside (1/2)Z)"
        )
    rows = ch.fusion_h_values(args.q1, args.q2)
    payload = _fusion_json(result)
    payload["nu_table"] = [{"nu": nu, "h": rational(h)} for nu, h in rows]
    doc = document("fuse", {"q1": args.q1, "q2": args.q2}, payload, verified_order=0)
    h1, h2 = args.q1 ** 2, args.q2 ** 2
    lines = [f"[{fmt(h1)}] x [{fmt(h2)}] = " + " ⊕ ".join(f"[{fmt(h)}]" for _, h in rows), "",
             "nu   h"]
    lines += [f"{nu:<4} {fmt(h)}" for nu, h in rows]
    return doc, lines, EXIT_OK


def cmd_char(args) -> tuple[dict, list[str], int]:
    if args.h < 0:
        raise UsageError(f"h must be >= 0, got {fmt(args.h)}")
    if args.order < 0:
        raise UsageError("order must be nonnegative")
    label = ch.sector_from_h(args.h)
    c = ch.virasoro_char(label, args.order)
    payload = dict(_char_json(c), label=_label_json(label))
    doc = document("char", {"h": args.h, "order": args.order}, payload, verified_order=args.order)
    kind = label.kind + (f", s={fmt(label.s)}" if label.degenerate else "")
    lines = [f"h = {fmt(label.h)} ({kind})", f"offset {fmt(c.offset)}", _char_line(c)]
    return doc, lines, EXIT_OK


def cmd_decompose(args) -> tuple[dict, list[str], int]:
    if args.nu < 0 or args.order < 0:
        raise UsageError("nu and order must be nonnegative")
    c = ch.twisted_char(args.q, args.nu, args.order)
    inputs = {"q": args.q, "nu": args.nu, "order": args.order}
    try:
        result = ch.decompose(c)
    except ch.NotDecomposable as exc:
        witness = None
        if exc.witness is not None:
            witness = {"exponent": rational(exc.witness[0]), "coefficient": rational(exc.witness[1])}
        doc = document("decompose", inputs, {"error": str(exc), "witness": witness})
        return doc, [f"not decomposable: {exc}"], EXIT_DECOMPOSE
    payload = dict(_fusion_json(result), series=_char_json(c))
    doc = document("decompose", inputs, payload, verified_order=result.verified_order)
    lines = [f"t^({fmt(c.offset)}) p(t) through order {args.order}", ""] + _sector_table(result)
    lines.append("")
    lines.append(f"verified through order {result.verified_order}"
                 + ("; unresolved tail beyond" if result.unresolved_tail else ""))
    return doc, lines, EXIT_OK


def _state_str(state) -> str:
    m, parts = state
    return f"|{m}; {list(parts)}>"


def cmd_oracle(args) -> tuple[dict, list[str], int]:
    sub = args.oracle_command
    try:
        if sub == "basis":
            states = fock.enumerate_basis(args.window, args.cutoff)
            payload = {"count": len(states),
                       "states": [{"charge": m, "partition": list(p), "energy": fock.energy((m, p))}
                                  for m, p in states]}
            inputs = {"window": args.window, "cutoff": args.cutoff}
            lines = [f"{len(states)} states"] + [f"  {_state_str(s)}  E={fock.energy(s)}" for s in states]
        elif sub == "norm":
            v = fock.lowered_vector(args.q1, args.nu, args.cutoff)
            value = fock.norm_squared(v)
            payload = {"norm_squared": rational(value), "zero": v.is_zero()}
            inputs = {"q1": args.q1, "nu": args.nu, "cutoff": args.cutoff}
            lines = [fmt(value)]
        elif sub == "eig":
            v = fock.lowered_vector(args.q1, args.nu, args.cutoff)
            value = fock.deformed_eigenvalue(args.q1 + args.q2, v)
            if value is None:
                raise UsageError("lowered vector is zero or not an eigenvector")
            payload = {"eigenvalue": rational(value)}
            inputs = {"q1": args.q1, "q2": args.q2, "nu": args.nu, "cutoff": args.cutoff}
            lines = [fmt(value)]
        else:  # graded
            c = fock.graded_dimension(args.charge, args.q, args.cutoff)
            payload = _char_json(c)
            inputs = {"charge": args.charge, "q": args.q, "cutoff": args.cutoff}
            lines = [f"offset {fmt(c.offset)}", _char_line(c)]
    except (fock.CutoffExceeded, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc))
    return document(f"oracle {sub}", inputs, payload), lines, EXIT_OK


def cmd_verify(args) -> tuple[dict, list[str], int]:
    overrides = {
        "order": args.order, "cutoff": args.cutoff, "window": args.window,
        "charge_window": args.charge_window, "inject_fault": args.inject_fault or None,
    }
    config = verify.SuiteConfig().with_overrides(**overrides)
    try:
        reports = verify.run_suite(config, only=args.only or None, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc))
    counts = verify.summarize(reports)
    inputs = {"order": config.order, "cutoff": config.cutoff, "window": config.window,
              "charge_window": config.charge_window, "only": list(args.only or [])}
    payload = {"counts": counts, "reports": [r.to_json() for r in reports]}
    lines = []
    for r in reports:
        params = " ".join(f"{k}={fmt(v) if isinstance(v, (int, Fraction)) and not isinstance(v, bool) else v}"
                          for k, v in r.parameters.items() if not isinstance(v, list))
        line = f"{r.status.upper():<8} {r.name:<20} {params}"
        if r.reason:
            line += f"  ({r.reason})"
        if r.witness:
            line += f"  witness: {jsonio.encode(r.witness)}"
        lines.append(line)
    lines.append(f"\n{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped")
    code = EXIT_VERIFY if counts["fail"] else EXIT_OK
    return document("verify", inputs, payload), lines, code


# --- parser ------------------------------------------------------------------------

def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--config", help="key=value file mirroring the flags (flags win)")

    parser = _Parser(prog="virc1",
                                     description="Exact c=1 Virasoro characters, decompositions and fusion.")
    subs = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}

    p = subs.add_parser("fuse", parents=[common], help="fusion of a degenerate with a continuum sector")
    p.add_argument("--q1", type=parse_rational, required=True)
    p.add_argument("--q2", type=parse_rational, required=True)
    p.set_defaults(func=cmd_fuse)
    registry["fuse"] = p

    order_default = _default_order(12)
    p = subs.add_parser("char", parents=[common], help="character of the sector with energy h")
    p.add_argument("--h", type=parse_rational, required=True)
    p.add_argument("--order", type=int, default=order_default)
    p.set_defaults(func=cmd_char)
    registry["char"] = p

    p = subs.add_parser("decompose", parents=[common], help="split t^((q-nu)^2) p(t) into sectors")
    p.add_argument("--q", type=parse_rational, required=True)
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--order", type=int, default=order_default)
    p.set_defaults(func=cmd_decompose)
    registry["decompose"] = p

    p = subs.add_parser("oracle", help="query the Fock-space oracle")
    osubs = p.add_subparsers(dest="oracle_command", required=True)
    p.set_defaults(func=cmd_oracle)
    registry["oracle"] = p
    o = osubs.add_parser("basis", parents=[common])
    o.add_argument("--window", type=int, required=True)
    o.add_argument("--cutoff", type=int, required=True)
    registry["oracle basis"] = o
    o = osubs.add_parser("norm", parents=[common])
    o.add_argument("--q1", type=parse_rational, required=True)
    o.add_argument("--nu", type=int, required=True)
    o.add_argument("--cutoff", type=int, default=14)
    registry["oracle norm"] = o
    o = osubs.add_parser("eig", parents=[common])
    o.add_argument("--q1", type=parse_rational, required=True)
    o.add_argument("--q2", type=parse_rational, required=True)
    o.add_argument("--nu", type=int, required=True)
    o.add_argument("--cutoff", type=int, default=14)
    registry["oracle eig"] = o
    o = osubs.add_parser("graded", parents=[common])
    o.add_argument("--charge", type=int, required=True)
    o.add_argument("--q", type=parse_rational, required=True)
    o.add_argument("--cutoff", type=int, default=14)
    registry["oracle graded"] = o

    p = subs.add_parser("verify", parents=[common], help="run the cross-check suite")
    p.add_argument("--order", type=int, default=order_default)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--charge-window", type=int, default=None)
    p.add_argument("--only", nargs="+", choices=verify.CHECK_NAMES, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    registry["verify"] = p
    return parser, registry


def _config_path(argv: list[str]) -> Optional[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return known.config


def _apply_config(parser, registry, argv: list[str]) -> argparse.Namespace:
    # The config has to be read before the real parse so it can supply
    # required options; the subcommand is always the leading word(s).
    path = _config_path(argv)
    key = " ".join(argv[:2]) if argv[:1] == ["oracle"] else " ".join(argv[:1])
    if not path or key not in registry:
        return parser.parse_args(argv)
    config = read_config(path)
    target = registry[key]
    dests = {a.dest: a for a in target._actions}
    defaults = {}
    for k, raw in config.items():
        if k not in dests or k in ("config", "help"):
            continue
        action = dests[k]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[k] = raw.lower() in ("1", "true", "yes", "on")
        elif action.nargs == "+":
            defaults[k] = raw.split()
        else:
            defaults[k] = raw
            action.required = False
    target.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser, registry = build_parser()
        args = _apply_config(parser, registry, argv)
        doc, lines, code = args.func(args)
    except UsageError as exc:
        print(f"virc1: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"virc1: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:  # argparse
        return int(exc.code) if isinstance(exc.code, int) else EXIT_DOMAIN
    if args.format == "json":
        sys.stdout.write(jsonio.dumps(doc))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
