"""Command line front end.

Reads a graph as JSON (``--graph PATH``, ``--inline TEXT`` or stdin), e.g.

    {"vertices": 2, "edges": [{"id": "A", "ends": [1, 2]}, {"id": "B", "ends": [1, 2]}]}

Exit codes: 0 success, 1 representations disagree, 2 unreadable input or bad
usage, 3 invalid graph or point, 4 graph too large, 5 numeric check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from .algebra import FactoredRational, PoleError, Polynomial
from .graph import MAX_EDGES, MAX_VERTICES, Edge, Graph, GraphSizeError, GraphValidationError
from .numeric import MIN_SAMPLES, NumericPoint, compare
from .tubes import enumerate_tubes, format_tube
from .tubings import enumerate_admissible_tubings, enumerate_complete_tubings
from .wavefunction import (
    COMPUTE,
    Method,
    PsiResult,
    adjoint,
    boundary_terms,
    bulk_terms,
    linear_form,
    psi_canonical,
    recursion_terms,
    verify_all,
)

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_SIZE = 4
EXIT_NUMERIC = 5

SCHEMA = 1


class GraphParseError(ValueError):
    pass


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def _edge_offsets(text: str) -> list[int]:
    """Character offset of each element of the top-level ``edges`` array."""
    dec = json.JSONDecoder()
    ws = " \t\r\n"
    pos = text.find("{") + 1
    offsets: list[int] = []
    while pos < len(text):
        while pos < len(text) and text[pos] in ws + ",":
            pos += 1
        if pos >= len(text) or text[pos] == "}":
            break
        key, pos = dec.raw_decode(text, pos)
        while text[pos] in ws + ":":
            pos += 1
        if key == "edges" and text[pos] == "[":
            pos += 1
            while True:
                while text[pos] in ws + ",":
                    pos += 1
                if text[pos] == "]":
                    return offsets
                offsets.append(pos)
                _, pos = dec.raw_decode(text, pos)
        _, pos = dec.raw_decode(text, pos)
    return offsets


def parse_graph(text: str) -> Graph:
    """Parse and validate the JSON graph format, with line-anchored errors."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise GraphValidationError("top level must be an object", 1)
    try:
        offsets = _edge_offsets(text)
    except (ValueError, IndexError):
        offsets = []

    def line(k: int | None) -> int:
        if k is not None and k < len(offsets):
            return _line_of(text, offsets[k])
        key = text.find('"edges"' if k is not None else '"vertices"')
        return _line_of(text, max(key, 0))

    n = data.get("vertices")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise GraphValidationError('"vertices" must be a non-negative integer', line(None))
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise GraphValidationError('"edges" must be a list', line(0))
    if n > MAX_VERTICES or len(edges) > MAX_EDGES:
        raise GraphSizeError(
            f"graph has {n} vertices and {len(edges)} edges; "
            f"the limit is {MAX_VERTICES} and {MAX_EDGES}"
        )
    out = []
    seen: set[str] = set()
    for k, item in enumerate(edges):
        if isinstance(item, list):
            item = {"ends": item}
        if not isinstance(item, dict) or "ends" not in item:
            raise GraphValidationError('each edge needs "ends": [u, v]', line(k))
        ends = item["ends"]
        if (not isinstance(ends, list) or len(ends) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in ends)):
            raise GraphValidationError('"ends" must be a pair of vertex numbers', line(k))
        eid = str(item.get("id", f"e{k + 1}"))
        if eid in seen:
            raise GraphValidationError(f"duplicate edge id {eid!r}", line(k))
        seen.add(eid)
        for x in ends:
            if not 1 <= x <= n:
                raise GraphValidationError(
                    f"edge {eid!r} has endpoint {x} outside 1..{n}", line(k))
        out.append(Edge(eid, ends[0], ends[1]))
    return Graph(n, tuple(out))


def _read_graph(args) -> Graph:
    if args.inline is not None:
        text = args.inline
    elif args.graph and args.graph != "-":
        try:
            with open(args.graph, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise GraphParseError(f"cannot read {args.graph}: {exc.strerror}") from None
        except UnicodeDecodeError:
            raise GraphParseError(f"{args.graph} is not UTF-8") from None
    else:
        text = sys.stdin.read()
    return parse_graph(text)


# JSON emission

def polynomial_json(p: Polynomial) -> list:
    names = [v.name for v in p.ring.variables]
    return [
        {"coeff": str(c), "monomial": {names[i]: int(k) for i, k in enumerate(exps) if k}}
        for exps, c in p.sorted_terms()
    ]


def rational_json(r: FactoredRational) -> dict:
    names = [v.name for v in r.ring.variables]
    return {
        "variables": names,
        "scalar": str(r.scalar),
        "numerator": polynomial_json(r.numerator),
        "denominator": [
            {"atom": {names[i]: c for i, c in enumerate(a.coeffs) if c},
             "text": str(a), "multiplicity": k}
            for a, k in sorted(r.denominator.items(), key=lambda kv: str(kv[0]))
        ],
        "text": str(r),
    }


def _result_json(res: PsiResult, reduced: bool, timings: bool) -> dict:
    out = {"method": res.method.value, "reduced": reduced, "value": rational_json(res.value)}
    if res.terms is not None:
        out["terms"] = [rational_json(t) for t in res.terms]
    if timings:
        out["seconds"] = round(res.seconds, 6)
    return out


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


# subcommands

def cmd_tubes(g: Graph, args) -> int:
    tubes = enumerate_tubes(g)
    if args.count:
        print(len(tubes))
        return EXIT_OK
    for t in tubes:
        print(f"{format_tube(t)}  {linear_form(g, t)}" if args.forms else format_tube(t))
    return EXIT_OK


def cmd_tubings(g: Graph, args) -> int:
    found = enumerate_complete_tubings(g) if args.kind == "complete" else enumerate_admissible_tubings(g)
    if args.count:
        print(len(found))
        return EXIT_OK
    for t in found:
        print(t)
    return EXIT_OK


TERMS = {
    Method.BULK: bulk_terms,
    Method.BOUNDARY: boundary_terms,
    Method.RECURSION: recursion_terms,
}


def _compute(g: Graph, method: Method, reduce: bool, terms: bool) -> PsiResult:
    res = COMPUTE[method](g, reduce=reduce)
    if terms and method in TERMS:
        res.terms = TERMS[method](g)
    return res


def cmd_psi(g: Graph, args) -> int:
    methods = list(Method) if args.rep == "all" else [Method(args.rep)]
    results = [_compute(g, m, args.reduce, args.terms) for m in methods]
    if args.json:
        body = [_result_json(r, args.reduce, args.timings) for r in results]
        _dump({"schema": SCHEMA, "graph": g.to_dict(),
               "results": body} if args.rep == "all" else
              {"schema": SCHEMA, "graph": g.to_dict(), **body[0]})
        return EXIT_OK
    for r in results:
        prefix = f"{r.method.value}: " if len(results) > 1 else ""
        print(prefix + str(r.value))
        if args.terms and r.terms is not None:
            for t in r.terms:
                print(f"  {t}")
        if args.timings:
            print(f"  ({r.seconds:.3f} s)")
    return EXIT_OK


def cmd_adjoint(g: Graph, args) -> int:
    adj = adjoint(g)
    if args.json:
        _dump({"schema": SCHEMA, "graph": g.to_dict(), "degree": adj.total_degree(),
               "adjoint": polynomial_json(adj), "text": str(adj)})
    else:
        print(adj)
    return EXIT_OK


def cmd_verify(g: Graph, args) -> int:
    report = verify_all(g, reduce=args.reduce)
    if args.json:
        out = {"schema": SCHEMA, "graph": g.to_dict(), "equal": report.ok,
               "summary": report.summary(),
               "mismatches": [[a.value, b.value] for a, b in report.mismatches],
               "value": rational_json(report.canonical)}
        if args.timings:
            out["seconds"] = {m.value: round(t, 6) for m, t in report.seconds.items()}
            out["seconds"]["compare"] = round(report.check_seconds, 6)
        _dump(out)
    else:
        bad = {m for pair in report.mismatches for m in pair}
        for m, t in report.seconds.items():
            if m is Method.RECURSION:
                line = f"{m.value}: reference"
            else:
                line = f"{m.value}: {'DIFFERS' if m in bad else 'equal'}"
            if args.timings:
                line += f" in {t:.3f} s"
            print(line)
        print(f"psi = {report.canonical}")
        print(report.summary())
    return EXIT_OK if report.ok else EXIT_DISAGREE


def _parse_values(text: str, keys: Sequence, what: str, cast=str) -> dict:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) == 1 and "=" not in parts[0]:
        parts = parts * len(keys)
    out = {}
    for pos, part in enumerate(parts):
        if "=" in part:
            k, v = part.split("=", 1)
            k = cast(k.strip())
        else:
            if pos >= len(keys):
                raise GraphValidationError(f"too many {what} values")
            k, v = keys[pos], part
        if k not in keys:
            raise GraphValidationError(f"unknown {what} {k!r}")
        try:
            out[k] = float(v)
        except ValueError:
            raise GraphValidationError(f"{what} value {v!r} is not a number") from None
    missing = [k for k in keys if k not in out]
    if missing:
        raise GraphValidationError(f"missing {what} values for {', '.join(map(str, missing))}")
    return out


def cmd_numeric(g: Graph, args) -> int:
    x = _parse_values(args.x, list(range(1, g.n + 1)), "vertex", int)
    y = _parse_values(args.y, list(g.edge_ids), "edge") if g.m else {}
    try:
        point = NumericPoint(x, y)
    except ValueError as exc:
        raise GraphValidationError(str(exc)) from None
    psi = psi_canonical(g) if args.rep == "canonical" else COMPUTE[Method(args.rep)](g)
    try:
        report = compare(g, point, psi, args.samples, args.seed, args.tolerance, args.relative)
    except PoleError as exc:
        raise GraphValidationError(f"point lies on a pole: {exc}") from None
    if args.json:
        est = report.estimate
        _dump({"schema": SCHEMA, "graph": g.to_dict(), "method": args.rep,
               "exact": str(report.exact), "exact_float": float(report.exact),
               "mean": est.mean, "std_error": est.std_error, "samples": est.samples,
               "seed": est.seed, "sigmas": report.sigmas, "relative": report.relative,
               "passed": report.passed})
    else:
        print(report.describe())
    return EXIT_OK if report.passed else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--graph", metavar="PATH", help="graph JSON file ('-' or omitted: stdin)")
    source.add_argument("--inline", metavar="JSON", help="graph JSON given on the command line")

    ap = argparse.ArgumentParser(
        prog="flatwave", description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tubes", parents=[source], help="list all tubes")
    p.add_argument("--forms", action="store_true", help="print each tube's linear form")
    p.add_argument("--count", action="store_true", help="print only the number of tubes")
    p.set_defaults(func=cmd_tubes)

    p = sub.add_parser("tubings", parents=[source], help="list complete or admissible tubings")
    p.add_argument("--kind", choices=["complete", "admissible"], default="complete")
    p.add_argument("--count", action="store_true", help="print only the number of tubings")
    p.set_defaults(func=cmd_tubings)

    p = sub.add_parser("psi", parents=[source], help="compute the wavefunction")
    p.add_argument("--rep", choices=[m.value for m in Method] + ["all"], default="canonical")
    p.add_argument("--reduce", action=argparse.BooleanOptionalAction, default=True,
                   help="cancel denominator atoms that divide the numerator (default on)")
    p.add_argument("--terms", action="store_true", help="also list the raw summands")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("adjoint", parents=[source], help="print the adjoint polynomial")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("verify", parents=[source], help="check that all representations agree")
    p.add_argument("--reduce", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("numeric-check", parents=[source],
                       help="compare psi with a Monte Carlo estimate of its integral")
    p.add_argument("--x", required=True, help="vertex energies: '1,2', '1' or '1=1,2=2'")
    p.add_argument("--y", default="1", help="edge energies: 'A=1,B=2', '1,2' or '1'")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rep", choices=[m.value for m in Method], default="canonical")
    p.add_argument("--tolerance", type=float, default=4.0, help="pass within this many std errors")
    p.add_argument("--relative", type=float, default=0.02, help="or within this relative error")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_numeric)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        g = _read_graph(args)
        if args.command == "numeric-check" and args.samples < MIN_SAMPLES:
            raise GraphValidationError(f"--samples must be at least {MIN_SAMPLES}")
        return args.func(g, args)
    except GraphParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GraphSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except GraphValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
