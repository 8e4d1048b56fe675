"""GGRID instance files.

Layout (UTF-8, LF line endings)::

    ggrid 1
    <n>
    <x> <y>      # n lines, decimal literals

Lines starting with ``#`` and blank lines are ignored. `serialize_instance`
writes floats with their shortest round-trip representation, so
``serialize(parse(text)) == text`` for files it produced.
"""
from __future__ import annotations

import math
from pathlib import Path

from .errors import InvalidPointError, ParseError
from .geometry import Instance, build_instance

MAGIC = "ggrid 1"


def parse_instance(text: str) -> Instance:
    """Parse GGRID text. Errors carry the offending line number."""
    rows = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise ParseError("empty file", 1)
    no, header = rows[0]
    if header != MAGIC:
        raise ParseError(f"expected header {MAGIC!r}, got {header!r}", no)
    if len(rows) < 2:
        raise ParseError("missing point count", no + 1)
    no, raw = rows[1]
    try:
        n = int(raw)
    except ValueError:
        raise ParseError(f"point count is not an integer: {raw!r}", no) from None
    if n < 1:
        raise ParseError(f"point count must be positive, got {n}", no)
    body = rows[2:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (body[-1][0] + 1 if body else no + 1)
        raise ParseError(f"expected {n} point lines, found {len(body)}", where)
    points = []
    for no, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'x y', got {line!r}", no)
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"non-numeric coordinate in {line!r}", no) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(f"non-finite coordinate in {line!r}", no)
        points.append((x, y))
    try:
        return build_instance(points)
    except InvalidPointError as exc:
        raise ParseError(str(exc)) from None


def serialize_instance(inst: Instance) -> str:
    lines = [MAGIC, str(inst.n)]
    lines.extend(f"{p.x!r} {p.y!r}" for p in inst.points)
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def write_instance(path, inst: Instance) -> None:
    Path(path).write_text(serialize_instance(inst), encoding="utf-8", newline="\n")
