"""
File formats: rack tables (JSON or text) and permutation group specs.

Rack JSON:  {"size": n, "table": [[...], ...], "name": optional}
Rack text:  "RACK n" or "QUANDLE n", then n lines of n integers
Group spec: "PERM n", one generator per line in cycle notation, optional
            "REP <s> | <H generators, comma separated>" lines ("Z" for the
            full centralizer, nothing after "|" for the trivial subgroup)

"#" starts a comment in the text formats. A path of "-" reads stdin.
"""

import json
import logging
import re
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from rackgeom.core.errors import NotAQuandle, ParseError
from rackgeom.models.group import Permutation
from rackgeom.models.rack import CosetRackSpec, FiniteRack, GroupSpecSeed
from rackgeom.services.permgroup_service import from_cycles, permgroup_service
from rackgeom.services.rack_service import rack_service

logger = logging.getLogger(__name__)

_NUMBER = re.compile(r"-?\d+(?:\.\d+)?")


def read_source(path: str) -> Tuple[str, str]:
    """Returns (text, display name)."""
    if path == "-":
        buffer = getattr(sys.stdin, "buffer", None)
        if buffer is None:
            return sys.stdin.read(), "<stdin>"
        return _decode(buffer.read(), "<stdin>"), "<stdin>"
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise ParseError(0, 0, f"cannot read {path}: {e.strerror}") from e
    return _decode(data, path), path


def _decode(data: bytes, display: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        col = e.start - (data.rfind(b"\n", 0, e.start) + 1) + 1
        raise ParseError(line, col, f"{display} is not valid UTF-8") from e


def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _check_entries(grid: List[List[int]], n: int, locate) -> None:
    for x, row in enumerate(grid):
        for y, value in enumerate(row):
            if not 0 <= value < n:
                line, col = locate(x, y)
                raise ParseError(line, col, f"entry {value} out of range 0..{n - 1}")


def parse_rack_json(text: str, name: Optional[str] = None) -> FiniteRack:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.colno, e.msg) from e
    if not isinstance(data, dict) or "size" not in data or "table" not in data:
        raise ParseError(1, 1, 'expected an object with "size" and "table"')
    n, grid = data["size"], data["table"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(1, 1, '"size" must be a positive integer')
    if not isinstance(grid, list) or len(grid) != n:
        raise ParseError(1, 1, f'"table" must have {n} rows')

    table_at = text.find('"table"')
    numbers = list(_NUMBER.finditer(text, table_at))

    def locate(x: int, y: int) -> Tuple[int, int]:
        i = x * n + y
        return _position(text, numbers[i].start()) if i < len(numbers) else (1, 1)

    for x, row in enumerate(grid):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(*locate(x, 0), f"row {x} must have {n} entries")
        for y, value in enumerate(row):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParseError(*locate(x, y), f"entry {value!r} is not an integer")
    _check_entries(grid, n, locate)
    return rack_service.validate(grid, name=data.get("name") or name)


def parse_rack_text(text: str, name: Optional[str] = None) -> FiniteRack:
    lines = [(i + 1, _strip_comment(raw)) for i, raw in enumerate(text.splitlines())]
    lines = [(number, line) for number, line in lines if line.strip()]
    if not lines:
        raise ParseError(1, 1, "empty rack file")
    header_line, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] not in ("RACK", "QUANDLE") or not parts[1].isdigit():
        raise ParseError(header_line, 1, 'expected header "RACK n" or "QUANDLE n"')
    n = int(parts[1])
    if n < 1:
        raise ParseError(header_line, header.find(parts[1]) + 1, "size must be positive")
    rows = lines[1:]
    if len(rows) != n:
        number = rows[n][0] if len(rows) > n else (rows[-1][0] + 1 if rows else header_line + 1)
        raise ParseError(number, 1, f"expected {n} table rows, found {len(rows)}")

    grid: List[List[int]] = []
    columns: List[List[int]] = []
    for number, line in rows:
        row, cols = [], []
        for match in re.finditer(r"\S+", line):
            token = match.group()
            if not re.fullmatch(r"-?\d+", token):
                raise ParseError(number, match.start() + 1, f"{token!r} is not an integer")
            row.append(int(token))
            cols.append(match.start() + 1)
        if len(row) != n:
            raise ParseError(number, 1, f"expected {n} entries, found {len(row)}")
        grid.append(row)
        columns.append(cols)

    _check_entries(grid, n, lambda x, y: (rows[x][0], columns[x][y]))
    rack = rack_service.validate(grid, name=name)
    if parts[0] == "QUANDLE" and not rack.is_quandle:
        bad = next(x for x in rack.elements if rack.op(x, x) != x)
        raise NotAQuandle(f"axiom A2 fails: {bad} > {bad} = {rack.op(bad, bad)}")
    return rack


def parse_rack_file(path: str) -> FiniteRack:
    """
    Parse a rack file in either format, detected by the first character.

    Raises:
        ParseError: Malformed input, with line and column
        ValidationError: Table fails the rack axioms
    """
    text, display = read_source(path)
    name = None if path == "-" else Path(path).stem
    if text.lstrip().startswith("{"):
        rack = parse_rack_json(text, name)
    else:
        rack = parse_rack_text(text, name)
    logger.info(f"Parsed rack of size {rack.size} from {display}")
    return rack


def emit_rack_json(rack: FiniteRack) -> str:
    data = {"size": rack.size, "table": [list(row) for row in rack.table]}
    if rack.name:
        data["name"] = rack.name
    return json.dumps(data)


def emit_rack_text(rack: FiniteRack) -> str:
    header = f"{'QUANDLE' if rack.is_quandle else 'RACK'} {rack.size}"
    rows = [" ".join(str(v) for v in row) for row in rack.table]
    return "\n".join([header] + rows) + "\n"


def _parse_permutation(text: str, degree: int, line: int, col: int) -> Permutation:
    try:
        return from_cycles(text, degree)
    except ValueError as e:
        raise ParseError(line, col, str(e)) from e


def parse_group_spec_text(text: str) -> GroupSpecSeed:
    lines = [(i + 1, _strip_comment(raw)) for i, raw in enumerate(text.splitlines())]
    lines = [(number, line) for number, line in lines if line.strip()]
    if not lines:
        raise ParseError(1, 1, "empty group spec")
    header_line, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "PERM" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError(header_line, 1, 'expected header "PERM n"')
    degree = int(parts[1])

    generators: List[Permutation] = []
    reps: List[Tuple[Permutation, Optional[List[Permutation]]]] = []
    for number, line in lines[1:]:
        stripped = line.strip()
        indent = len(line) - len(line.lstrip()) + 1
        if not stripped.startswith("REP"):
            generators.append(_parse_permutation(stripped, degree, number, indent))
            continue
        body = stripped[3:]
        if "|" not in body:
            raise ParseError(number, indent, 'REP lines need "|" before the subgroup generators')
        s_text, h_text = body.split("|", 1)
        s = _parse_permutation(s_text, degree, number, indent + 3)
        h_col = indent + 3 + len(s_text) + 1
        if h_text.strip() == "Z":
            reps.append((s, None))
        else:
            h = [
                _parse_permutation(piece, degree, number, h_col)
                for piece in h_text.split(",")
                if piece.strip()
            ]
            reps.append((s, h))
    if not generators:
        raise ParseError(header_line, 1, "group spec lists no generators")
    return GroupSpecSeed(degree=degree, generators=generators, reps=reps)


def parse_group_spec(path: str) -> GroupSpecSeed:
    text, _ = read_source(path)
    return parse_group_spec_text(text)


def coset_spec_from_seed(seed: GroupSpecSeed, cap: Optional[int] = None) -> CosetRackSpec:
    """Enumerate the group and resolve "Z" subgroups to centralizers."""
    if not seed.reps:
        raise ParseError(1, 1, "coset racks need at least one REP line")
    group = permgroup_service.generate(seed.degree, seed.generators, cap=cap)
    reps = []
    for s, h in seed.reps:
        if h is None:
            h = list(permgroup_service.centralizer(group, s).elements)
        reps.append((s, tuple(h)))
    return CosetRackSpec(group=group, reps=tuple(reps))
