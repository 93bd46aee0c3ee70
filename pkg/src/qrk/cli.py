"""``qrk``: command-line front end.

Exit status: 0 success, 1 usage or input error, 2 enumeration budget
exceeded, 3 internal consistency failure (a witness goes to stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .formats import ParseError, format_rep, load_chain, load_quivers, load_rep
from .linalg import Field, LinAlgError, parse_field
from .loci import BudgetExceeded, census, path_order, typea_multiplicities
from .quiver import Quiver, QuiverError
from .rank import (DisconnectedQuiverError, RankChain, VertexRankDisagreement, component_ranks,
                   eval_chain, global_rank, iota_kernel, sigma)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _dims(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",")] if text.strip() else []
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(d < 0 for d in out):
        raise argparse.ArgumentTypeError("dimensions must be non-negative")
    return out


def _field(text: str) -> Field:
    try:
        return parse_field(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


# -- input helpers ------------------------------------------------------------

def _quivers(args) -> tuple[dict[str, Quiver], Quiver | None]:
    paths = args.quiver or []
    quivers = {}
    first = None
    for p in paths:
        loaded = load_quivers(p)
        if first is None and loaded:
            first = next(iter(loaded.values()))
        quivers.update(loaded)
    return quivers, first


def _rep(args):
    if not args.rep:
        raise UsageError("--rep is required")
    quivers, first = _quivers(args)
    if not quivers:
        # fall back to a quiver file beside the representation
        text = Path(args.rep).read_text(encoding="utf-8")
        for line in text.splitlines():
            toks = line.split("#", 1)[0].split()
            if toks[:1] == ["quiver"] and len(toks) == 2:
                qv = Path(args.rep).parent / f"{toks[1]}.qv"
                if qv.exists():
                    quivers = load_quivers(qv)
                break
        if not quivers:
            raise UsageError("no quiver in scope; pass --quiver")
    return load_rep(args.rep, quivers, args.field, default=first), quivers


def _spaces(sub) -> dict:
    return {v: [[str(x) for x in b] for b in w.basis]
            for v, w in zip(sub.parent.quiver.vertices, sub.spaces)}


# -- commands -----------------------------------------------------------------

def cmd_rank(args) -> dict:
    phi, _ = _rep(args)
    try:
        return {"rank": global_rank(phi)}
    except DisconnectedQuiverError:
        return {"component_ranks": component_ranks(phi)}


def cmd_sigma(args) -> dict:
    phi, _ = _rep(args)
    S = sigma(phi)
    return {"dim": list(S.dims), "spaces": _spaces(S)}


def cmd_iota(args) -> dict:
    phi, _ = _rep(args)
    U = iota_kernel(phi)
    return {"dim": [d - u for d, u in zip(phi.dims, U.dims)], "kernel_dim": list(U.dims),
            "kernel": _spaces(U)}


def cmd_chain(args) -> dict:
    phi, quivers = _rep(args)
    if not args.chain:
        raise UsageError("at least one --chain is required")
    values = []
    for path in args.chain:
        chain = load_chain(path, quivers, start=phi.quiver)
        values.append({"chain": Path(path).name, "value": eval_chain(chain, phi)})
    return {"values": values}


def cmd_census(args) -> dict:
    quivers, first = _quivers(args)
    if first is None:
        raise UsageError("--quiver is required")
    if args.dim is None:
        raise UsageError("--dim is required")
    if len(args.dim) != len(first.vertices):
        raise UsageError(f"--dim has {len(args.dim)} entries, quiver {first.name} has {len(first.vertices)} vertices")
    field = args.field
    if field is None:
        raise UsageError("--field is required")
    if args.sample is None and not field.is_finite:
        raise UsageError("an exhaustive census needs a finite field; use --sample over Q")
    chains = []
    for path in args.chain or []:
        c = load_chain(path, quivers, start=first)
        chains.append(RankChain(c.start, c.steps, Path(path).name))
    table = census(first, args.dim, field, chains, sample=args.sample, seed=args.seed, jobs=args.jobs)
    out = table.to_json()
    out["chains"] = [c.name for c in chains]
    return out


def cmd_decompose_typea(args) -> dict:
    phi, _ = _rep(args)
    mult = typea_multiplicities(phi)
    return {"path": path_order(phi.quiver),
            "multiplicities": [{"k": k, "l": l, "multiplicity": m} for (k, l), m in sorted(mult.items())]}


def cmd_grassmannian(args) -> dict:
    from .grassmannian import quiver_grassmannian

    phi, _ = _rep(args)
    if args.sub_dim is None:
        raise UsageError("--sub-dim is required")
    if not phi.field.is_finite:
        raise UsageError("point enumeration needs a finite field")
    if len(args.sub_dim) != len(phi.dims):
        raise UsageError("--sub-dim must have one entry per vertex")
    points = quiver_grassmannian(phi, args.sub_dim)
    return {"field": phi.field.name, "dim": list(phi.dims), "beta": list(args.sub_dim),
            "count": str(len(points)),
            "points": [{"index": i, "spaces": _spaces(U)} for i, U in enumerate(points)]}


def cmd_strata(args) -> dict:
    from .grassmannian import strata

    if args.kronecker_n is None or args.sub_dim is None or args.field is None:
        raise UsageError("--kronecker-n, --sub-dim and --field are required")
    if len(args.sub_dim) != 2:
        raise UsageError("--sub-dim takes two entries for the Kronecker quiver")
    if not args.field.is_finite:
        raise UsageError("strata are counted over a finite field")
    report = strata(args.kronecker_n, args.sub_dim, args.field, jobs=args.jobs)
    out = report.to_json()
    if not report.is_filtration():
        out["disagreements"] = out["disagreements"] + [{"kind": "not-a-filtration"}]
    return out


def cmd_selftest(args) -> dict:
    from .selftest import run

    return run(jobs=args.jobs)


COMMANDS = {
    "rank": (cmd_rank, "global rank of a representation"),
    "sigma": (cmd_sigma, "the subrepresentation Sigma"),
    "iota": (cmd_iota, "the quotient Iota and its kernel"),
    "chain": (cmd_chain, "evaluate rank chains on a representation"),
    "census": (cmd_census, "classify rep(Q, alpha) over a finite field"),
    "decompose-typea": (cmd_decompose_typea, "interval multiplicities of a type-A representation"),
    "grassmannian": (cmd_grassmannian, "points of a quiver Grassmannian"),
    "strata": (cmd_strata, "Kronecker Grassmannian strata by two routes"),
    "selftest": (cmd_selftest, "run the built-in worked examples"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qrk", description="Rank functions and rank loci for quiver representations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--quiver", action="append", help="quiver file (repeatable)")
        p.add_argument("--rep", help="representation file")
        p.add_argument("--morphism", action="append", help="morphism file (repeatable)")
        p.add_argument("--chain", action="append", help="chain file (repeatable)")
        p.add_argument("--dim", type=_dims, help="dimension vector, e.g. 1,2,1")
        p.add_argument("--sub-dim", type=_dims, help="subrepresentation dimension vector")
        p.add_argument("--field", type=_field, help="Q or gf<p>")
        p.add_argument("--sample", type=_positive, help="sample N random points instead of enumerating")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=_positive, default=1)
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--tsv", action="store_true", help="tab-separated output")
        if name == "strata":
            p.add_argument("--kronecker-n", type=_positive)
    return parser


# -- output -------------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def to_tsv(report: dict) -> str:
    """Scalars as ``key<TAB>value`` lines, then each list of records as a table."""
    lines = []
    tables = []
    for k, v in report.items():
        if isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
            tables.append((k, v))
        else:
            lines.append(f"{k}\t{_cell(v)}")
    for k, rows in tables:
        cols = list(dict.fromkeys(c for r in rows for c in r))
        lines.append("")
        lines.append(f"# {k}")
        lines.append("\t".join(cols))
        lines += ["\t".join(_cell(r.get(c, "")) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


def render(report: dict, tsv: bool = False) -> str:
    return to_tsv(report) if tsv else json.dumps(report, indent=2) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    fn = COMMANDS[args.command][0]
    try:
        report = fn(args)
    except BudgetExceeded as e:
        print(f"qrk: {e}", file=sys.stderr)
        return 2
    except VertexRankDisagreement as e:
        print(f"qrk: internal error: {e}\nwitness:\n{format_rep(e.phi)}", file=sys.stderr, end="")
        return 3
    except AssertionError as e:
        print(f"qrk: internal error: {e}", file=sys.stderr)
        return 3
    except (UsageError, ParseError, QuiverError, LinAlgError, ValueError, OSError) as e:
        print(f"qrk: {e}", file=sys.stderr)
        return 1
    _emit(render(report, args.tsv), args.out)
    if args.command == "selftest" and not report["passed"]:
        return 3
    if report.get("disagreements"):
        print("qrk: strata routes disagree:", file=sys.stderr)
        for d in report["disagreements"]:
            print(json.dumps(d), file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
