"""Line-based text formats for quivers, representations, morphisms and chains.

Quiver file::

    quiver A3
    vertices 1 2 3
    arrow a 1 2
    arrow b 3 2

Representation file::

    quiver A3          # optional when only one quiver is in scope
    field Q            # or: field GF 5
    dim 1=1 2=2 3=1
    map a = [1;0]
    map b = [0;1]

Morphism file::

    morphism Qp -> Q
    vertex 3a -> 3
    arrow c1 -> c

Chain file::

    chain
    pull f.qm
    push g.qm

``#`` starts a comment.  Matrices are written ``[1,0;0,1]`` with entries
``p/q`` over Q; a matrix with no rows or no columns is written ``[]``.
Arrows omitted from a representation file carry zero maps.
"""
from __future__ import annotations

from pathlib import Path
from typing import Callable, Iterator, Mapping

from .linalg import Field, LinAlgError, Matrix, parse_field
from .quiver import Quiver, QuiverError, QuiverMorphism, Representation

__all__ = [
    "ParseError", "parse_quivers", "parse_quiver", "parse_rep", "parse_morphism",
    "parse_chain", "parse_matrix", "format_quiver", "format_rep", "format_morphism",
    "load_quivers", "load_rep", "load_morphism", "load_chain",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


def _lines(text: str) -> Iterator[tuple[int, str, list[tuple[int, str]]]]:
    """Yield ``(line number, raw line, [(column, token), ...])`` for nonblank lines."""
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            toks.append((col + 1, tok))
            col += len(tok)
        if toks:
            yield n, line, toks


def _expect(toks, n, count, form):
    if len(toks) != count:
        col = toks[min(len(toks), count) - 1][0] if toks else 1
        raise ParseError(f"expected `{form}`", n, col)


def parse_quivers(text: str) -> list[Quiver]:
    blocks: list[list] = []
    for n, _, toks in _lines(text):
        kw = toks[0][1]
        if kw == "quiver":
            _expect(toks, n, 2, "quiver <name>")
            blocks.append([toks[1][1], [], [], n])
            continue
        if not blocks:
            blocks.append(["Q", [], [], n])
        name, verts, arrows, _ = blocks[-1]
        if kw == "vertices":
            verts.extend((c, t, n) for c, t in toks[1:])
        elif kw == "arrow":
            _expect(toks, n, 4, "arrow <name> <tail> <head>")
            arrows.append((toks, n))
        else:
            raise ParseError(f"unknown keyword {kw!r}", n, toks[0][0])
    out = []
    for name, verts, arrows, start in blocks:
        names = [t for _, t, _ in verts]
        seen = set()
        for c, t, n in verts:
            if t in seen:
                raise ParseError(f"duplicate vertex {t!r}", n, c)
            seen.add(t)
        arrow_names = set()
        triples = []
        for toks, n in arrows:
            (ca, a), (ct, t), (ch, h) = toks[1:]
            if a in arrow_names:
                raise ParseError(f"duplicate arrow {a!r}", n, ca)
            for c, v in ((ct, t), (ch, h)):
                if v not in seen:
                    raise ParseError(f"arrow {a}: undeclared vertex {v!r}", n, c)
            arrow_names.add(a)
            triples.append((a, t, h))
        out.append(Quiver.build(name, names, triples))
    return out


def parse_quiver(text: str) -> Quiver:
    qs = parse_quivers(text)
    if len(qs) != 1:
        raise ParseError(f"expected exactly one quiver, found {len(qs)}")
    return qs[0]


def parse_matrix(field: Field, text: str, shape: tuple[int, int]) -> Matrix:
    """Parse ``[a,b;c,d]`` and check it has the given shape."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"matrix must be bracketed: {text!r}")
    body = s[1:-1].strip()
    r, c = shape
    if not body or r == 0 or c == 0:
        if body.replace(";", "").strip():
            raise ValueError(f"expected an empty {r}x{c} matrix")
        return Matrix.zeros(field, r, c)
    rows = [[e for e in row.replace(",", " ").split()] for row in body.split(";")]
    if len(rows) != r or any(len(row) != c for row in rows):
        got = f"{len(rows)}x{len(rows[0])}" if len(set(map(len, rows))) == 1 else "ragged"
        raise ValueError(f"matrix is {got}, expected {r}x{c}")
    return Matrix.from_rows(field, [[field.parse(e) for e in row] for row in rows], c)


def parse_rep(text: str, quivers: Quiver | Mapping[str, Quiver], field: Field | None = None,
              default: Quiver | None = None) -> Representation:
    """Parse a representation file against the quiver(s) in scope.

    ``field`` supplies the ground field when the file has no ``field`` line;
    if both are present they must agree.  ``default`` is used when several
    quivers are in scope and the file names none.
    """
    if isinstance(quivers, Quiver):
        quivers = {quivers.name: quivers}
    quiver = next(iter(quivers.values())) if len(quivers) == 1 else default
    file_field = None
    dims: dict[str, int] = {}
    maps: list[tuple[int, int, str, str]] = []
    for n, line, toks in _lines(text):
        kw = toks[0][1]
        if kw == "quiver":
            _expect(toks, n, 2, "quiver <name>")
            if toks[1][1] not in quivers:
                raise ParseError(f"unknown quiver {toks[1][1]!r}", n, toks[1][0])
            quiver = quivers[toks[1][1]]
        elif kw == "field":
            try:
                file_field = parse_field("".join(t for _, t in toks[1:]))
            except ValueError as e:
                raise ParseError(str(e), n, toks[1][0] if len(toks) > 1 else 1) from None
        elif kw == "dim":
            for c, tok in toks[1:]:
                v, eq, d = tok.partition("=")
                if not eq or not d.isdigit():
                    raise ParseError(f"expected <vertex>=<n>, got {tok!r}", n, c)
                dims[v] = (int(d), n, c)
        elif kw == "map":
            if len(toks) < 3:
                raise ParseError("expected `map <arrow> = [..]`", n, toks[0][0])
            rest = line[line.index(toks[1][1], toks[1][0] - 1) + len(toks[1][1]):].strip()
            if not rest.startswith("="):
                raise ParseError("expected `=` after arrow name", n, toks[2][0])
            maps.append((n, toks[1][0], toks[1][1], rest[1:].strip()))
        else:
            raise ParseError(f"unknown keyword {kw!r}", n, toks[0][0])
    if quiver is None:
        raise ParseError("several quivers in scope; add a `quiver <name>` line")
    if file_field and field and file_field != field:
        raise ParseError(f"file declares field {file_field} but {field} was requested")
    field = file_field or field
    if field is None:
        raise ParseError("no field given")
    for v, (d, n, c) in dims.items():
        if v not in quiver.vertex_index:
            raise ParseError(f"unknown vertex {v!r}", n, c)
    dvec = tuple(dims.get(v, (0,))[0] for v in quiver.vertices)
    mats = {}
    for n, c, a, body in maps:
        if a not in quiver.arrow_index:
            raise ParseError(f"unknown arrow {a!r}", n, c)
        arr = quiver.arrow(a)
        shape = (dvec[quiver.vertex_index[arr.head]], dvec[quiver.vertex_index[arr.tail]])
        try:
            mats[a] = parse_matrix(field, body, shape)
        except (ValueError, ZeroDivisionError, LinAlgError) as e:
            raise ParseError(f"arrow {a}: {e}", n, c) from None
    return Representation.build(quiver, field, dvec, mats)


def parse_morphism(text: str, quivers: Mapping[str, Quiver]) -> QuiverMorphism:
    src = dst = None
    vmap: dict[str, str] = {}
    amap: dict[str, str] = {}
    for n, _, toks in _lines(text):
        kw = toks[0][1]
        if kw in ("morphism", "vertex", "arrow"):
            _expect(toks, n, 4, f"{kw} <x> -> <y>")
            if toks[2][1] != "->":
                raise ParseError("expected `->`", n, toks[2][0])
            x, y = toks[1][1], toks[3][1]
        else:
            raise ParseError(f"unknown keyword {kw!r}", n, toks[0][0])
        if kw == "morphism":
            for (c, name) in (toks[1], toks[3]):
                if name not in quivers:
                    raise ParseError(f"unknown quiver {name!r}", n, c)
            src, dst = quivers[x], quivers[y]
        elif src is None:
            raise ParseError("`morphism <src> -> <dst>` must come first", n, toks[0][0])
        elif kw == "vertex":
            if x not in src.vertex_index:
                raise ParseError(f"{x!r} is not a vertex of {src.name}", n, toks[1][0])
            if y not in dst.vertex_index:
                raise ParseError(f"{y!r} is not a vertex of {dst.name}", n, toks[3][0])
            vmap[x] = y
        else:
            if x not in src.arrow_index:
                raise ParseError(f"{x!r} is not an arrow of {src.name}", n, toks[1][0])
            if y not in dst.arrow_index:
                raise ParseError(f"{y!r} is not an arrow of {dst.name}", n, toks[3][0])
            amap[x] = y
    if src is None:
        raise ParseError("missing `morphism <src> -> <dst>` header")
    try:
        return QuiverMorphism.build(src, dst, vmap, amap)
    except QuiverError as e:
        raise ParseError(str(e)) from None


def parse_chain(text: str, load_morphism: Callable[[str], QuiverMorphism], start: Quiver | None = None):
    """Parse a chain file; ``load_morphism`` resolves the file names it lists."""
    from .rank import RankChain

    steps = []
    header = False
    for n, _, toks in _lines(text):
        kw = toks[0][1]
        if kw == "chain":
            header = True
            continue
        if not header:
            raise ParseError("chain file must start with `chain`", n, toks[0][0])
        if kw not in ("push", "pull"):
            raise ParseError(f"expected push or pull, got {kw!r}", n, toks[0][0])
        _expect(toks, n, 2, f"{kw} <morphism-file>")
        steps.append((load_morphism(toks[1][1]), kw))
    if not header:
        raise ParseError("chain file must start with `chain`")
    if start is None:
        if not steps:
            raise ParseError("an empty chain needs an explicit starting quiver")
        f, d = steps[0]
        start = f.source if d == "push" else f.target
    try:
        return RankChain(start, tuple(steps))
    except QuiverError as e:
        raise ParseError(str(e)) from None


# -- printing -----------------------------------------------------------------

def format_quiver(q: Quiver) -> str:
    lines = [f"quiver {q.name}", "vertices " + " ".join(q.vertices)]
    lines += [f"arrow {a.name} {a.tail} {a.head}" for a in q.arrows]
    return "\n".join(lines) + "\n"


def format_rep(phi: Representation) -> str:
    f = phi.field
    lines = [f"quiver {phi.quiver.name}",
             "field Q" if not f.is_finite else f"field GF {f.characteristic}",
             "dim " + " ".join(f"{v}={d}" for v, d in zip(phi.quiver.vertices, phi.dims))]
    lines += [f"map {a.name} = {m}" for a, m in zip(phi.quiver.arrows, phi.maps)]
    return "\n".join(lines) + "\n"


def format_morphism(f: QuiverMorphism) -> str:
    lines = [f"morphism {f.source.name} -> {f.target.name}"]
    lines += [f"vertex {x} -> {y}" for x, y in zip(f.source.vertices, f.vertex_map)]
    lines += [f"arrow {b.name} -> {a}" for b, a in zip(f.source.arrows, f.arrow_map)]
    return "\n".join(lines) + "\n"


# -- files --------------------------------------------------------------------

def load_quivers(*paths) -> dict[str, Quiver]:
    out: dict[str, Quiver] = {}
    for p in paths:
        for q in parse_quivers(Path(p).read_text(encoding="utf-8")):
            out[q.name] = q
    return out


def load_rep(path, quivers: Mapping[str, Quiver], field: Field | None = None,
             default: Quiver | None = None) -> Representation:
    return parse_rep(Path(path).read_text(encoding="utf-8"), quivers, field, default)


def _resolve_quivers(path: Path, quivers: dict[str, Quiver], text: str) -> None:
    # morphism headers may name quivers defined in <name>.qv beside the file
    for _, _, toks in _lines(text):
        if toks[0][1] == "morphism" and len(toks) == 4:
            for name in (toks[1][1], toks[3][1]):
                if name not in quivers and (path.parent / f"{name}.qv").exists():
                    quivers.update(load_quivers(path.parent / f"{name}.qv"))
            break


def load_morphism(path, quivers: dict[str, Quiver]) -> QuiverMorphism:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    _resolve_quivers(path, quivers, text)
    return parse_morphism(text, quivers)


def load_chain(path, quivers: dict[str, Quiver], start: Quiver | None = None):
    path = Path(path)
    return parse_chain(path.read_text(encoding="utf-8"),
                       lambda name: load_morphism(path.parent / name, quivers), start)
