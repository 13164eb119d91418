"""Input-output tables: parsing, serialization, balance checks, network conversion.

CSV layout::

    sector,<code_1>,...,<code_n>,final_use,total_output[,aux:<name>...]
    <code_i>,w_i1,...,w_in,f_i,y_i[,aux values]      (n rows)
    value_added,x_1,...,x_n,,[,...]
    total_input,y_1,...,y_n,,[,...]

JSON layout: ``{"sectors": [...], "W": [[...]], "F": [...], "X": [...],
"Y": [...], "aux": {"name": [...]}}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyNetworkError, ParseError
from .network import IONetwork
from .registry import STAN, SectorRegistry

DEFAULT_TOL_BALANCE = 1e-6

# node attribute names always carried from a table into its network
BUILTIN_COLUMNS = ("final_use", "value_added", "total_output")


@dataclass(frozen=True, eq=False)
class IOTable:
    sectors: tuple[str, ...]
    W: np.ndarray
    F: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    aux: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        sectors = tuple(str(s) for s in self.sectors)
        n = len(sectors)
        if n == 0:
            raise ParseError("empty table")
        if len(set(sectors)) != n:
            raise ParseError("duplicate sector codes")
        W = np.array(self.W, dtype=float)
        if W.shape != (n, n):
            raise ParseError(f"intermediate block must be {n}x{n}, got {W.shape}")
        vecs = {}
        for name in ("F", "X", "Y"):
            v = np.array(getattr(self, name), dtype=float).reshape(-1)
            if len(v) != n:
                raise ParseError(f"{name} has length {len(v)}, expected {n}")
            vecs[name] = v
        aux = {}
        for name, values in dict(self.aux).items():
            v = np.array(values, dtype=float).reshape(-1)
            if len(v) != n:
                raise ParseError(f"aux column {name!r} has length {len(v)}, expected {n}")
            aux[str(name)] = v
        for arr in (W, *vecs.values(), *aux.values()):
            arr.setflags(write=False)
        object.__setattr__(self, "sectors", sectors)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "F", vecs["F"])
        object.__setattr__(self, "X", vecs["X"])
        object.__setattr__(self, "Y", vecs["Y"])
        object.__setattr__(self, "aux", aux)

    @property
    def n(self) -> int:
        return len(self.sectors)

    def column(self, name: str) -> np.ndarray:
        """Named per-sector column: a builtin name or an aux column."""
        builtin = {"final_use": self.F, "value_added": self.X, "total_output": self.Y}
        if name in builtin:
            return builtin[name]
        if name in self.aux:
            return self.aux[name]
        raise KeyError(f"no column {name!r}; available: {sorted([*builtin, *self.aux])}")

    def scaled(self, c: float) -> "IOTable":
        return IOTable(self.sectors, self.W * c, self.F * c, self.X * c, self.Y * c,
                       {k: v * c for k, v in self.aux.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IOTable):
            return NotImplemented
        return (
            self.sectors == other.sectors
            and all(np.array_equal(getattr(self, a), getattr(other, a)) for a in "WFXY")
            and self.aux.keys() == other.aux.keys()
            and all(np.array_equal(v, other.aux[k]) for k, v in self.aux.items())
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class BalanceReport:
    max_row_residual: float
    max_col_residual: float
    failing_sectors: tuple[tuple[str, str, float], ...]
    passed: bool
    tol_balance: float


# -- parsing ---------------------------------------------------------------


def _number(text: str, row: int, col: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"non-numeric {what} cell {text!r}", row, col) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite {what} cell {text!r}", row, col)
    return value


def _parse_csv(text: str) -> IOTable:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError("empty table")
    header = [c.strip() for c in rows[0]]
    if not header or header[0] != "sector":
        raise ParseError("malformed header: first cell must be 'sector'", 1, 1)
    try:
        fu = header.index("final_use")
    except ValueError:
        raise ParseError("malformed header: missing 'final_use' column", 1) from None
    codes = header[1:fu]
    n = len(codes)
    if n == 0:
        raise ParseError("empty table")
    if fu + 1 >= len(header) or header[fu + 1] != "total_output":
        raise ParseError("malformed header: 'total_output' must follow 'final_use'", 1, fu + 2)
    aux_names = []
    for k, cell in enumerate(header[fu + 2:], start=fu + 3):
        if not cell.startswith("aux:") or not cell[4:]:
            raise ParseError(f"malformed header cell {cell!r}; expected 'aux:<name>'", 1, k)
        name = cell[4:]
        if name in BUILTIN_COLUMNS or name in aux_names:
            raise ParseError(f"aux column name {name!r} is reserved or repeated", 1, k)
        aux_names.append(name)
    width = len(header)
    if len(rows) != n + 3:
        raise ParseError(
            f"expected {n} sector rows plus 'value_added' and 'total_input' rows, "
            f"found {len(rows) - 1} data rows"
        )

    W = np.zeros((n, n))
    F = np.zeros(n)
    Y = np.zeros(n)
    aux = {name: np.zeros(n) for name in aux_names}
    for i in range(n):
        r = i + 2
        cells = [c.strip() for c in rows[i + 1]]
        if len(cells) != width:
            raise ParseError(f"expected {width} cells, found {len(cells)}", r)
        if cells[0] != codes[i]:
            raise ParseError(f"row code {cells[0]!r} does not match column code {codes[i]!r}", r, 1)
        for j in range(n):
            w = _number(cells[j + 1], r, j + 2, "intermediate")
            if w < 0:
                raise ParseError(f"negative intermediate flow {cells[j + 1]!r}", r, j + 2)
            W[i, j] = w
        F[i] = _number(cells[fu], r, fu + 1, "final_use")
        Y[i] = _number(cells[fu + 1], r, fu + 2, "total_output")
        if Y[i] < 0:
            raise ParseError(f"negative total output {cells[fu + 1]!r}", r, fu + 2)
        for k, name in enumerate(aux_names):
            aux[name][i] = _number(cells[fu + 2 + k], r, fu + 3 + k, f"aux:{name}")

    def footer(offset: int, label: str) -> np.ndarray:
        r = n + 2 + offset
        cells = [c.strip() for c in rows[n + 1 + offset]]
        if cells[0] != label:
            raise ParseError(f"expected {label!r} row, found {cells[0]!r}", r, 1)
        if len(cells) > width:
            raise ParseError(f"expected at most {width} cells, found {len(cells)}", r)
        if len(cells) < n + 1:
            raise ParseError(f"{label} row has {len(cells) - 1} values, expected {n}", r)
        for k in range(n + 1, len(cells)):
            if cells[k]:
                raise ParseError(f"unexpected value {cells[k]!r} after {label} block", r, k + 1)
        return np.array([_number(cells[j + 1], r, j + 2, label) for j in range(n)])

    X = footer(0, "value_added")
    Y_in = footer(1, "total_input")
    for j in range(n):
        if abs(Y_in[j] - Y[j]) > 1e-9 * max(1.0, abs(Y[j])):
            raise ParseError(
                f"total_input {Y_in[j]!r} disagrees with total_output {Y[j]!r} for sector {codes[j]}",
                n + 3, j + 2,
            )
    return IOTable(tuple(codes), W, F, X, Y, aux)


def _parse_json(text: str) -> IOTable:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise ParseError("JSON table must be an object")
    missing = [k for k in ("sectors", "W", "F", "X", "Y") if k not in obj]
    if missing:
        raise ParseError(f"JSON table missing keys: {', '.join(missing)}")
    sectors = [str(s) for s in obj["sectors"]]
    n = len(sectors)
    if n == 0:
        raise ParseError("empty table")
    W_rows = obj["W"]
    if not isinstance(W_rows, list) or len(W_rows) != n:
        raise ParseError(f"W must be a list of {n} rows")
    W = np.zeros((n, n))
    for i, row in enumerate(W_rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"W row has wrong length; expected {n}", i + 1)
        for j, cell in enumerate(row):
            w = _json_number(cell, i + 1, j + 1, "W")
            if w < 0:
                raise ParseError(f"negative intermediate flow {cell!r}", i + 1, j + 1)
            W[i, j] = w

    def vector(key: str, values) -> np.ndarray:
        if not isinstance(values, list) or len(values) != n:
            raise ParseError(f"{key} must be a list of {n} numbers")
        return np.array([_json_number(v, None, j + 1, key) for j, v in enumerate(values)])

    F = vector("F", obj["F"])
    X = vector("X", obj["X"])
    Y = vector("Y", obj["Y"])
    if np.any(Y < 0):
        j = int(np.argmax(Y < 0))
        raise ParseError(f"negative total output {Y[j]!r}", None, j + 1)
    aux_obj = obj.get("aux") or {}
    if not isinstance(aux_obj, dict):
        raise ParseError("aux must be an object of arrays")
    aux = {}
    for name, values in aux_obj.items():
        if name in BUILTIN_COLUMNS:
            raise ParseError(f"aux column name {name!r} is reserved")
        aux[name] = vector(f"aux:{name}", values)
    return IOTable(tuple(sectors), W, F, X, Y, aux)


def _json_number(cell, row, col, what) -> float:
    if isinstance(cell, bool) or not isinstance(cell, (int, float)):
        raise ParseError(f"non-numeric {what} cell {cell!r}", row, col)
    value = float(cell)
    if not math.isfinite(value):
        raise ParseError(f"non-finite {what} cell {cell!r}", row, col)
    return value


def parse_iot_text(text: str, format: str = "csv", *, strict_registry: bool = False,
                   registry: SectorRegistry = STAN) -> IOTable:
    if format == "csv":
        table = _parse_csv(text)
    elif format == "json":
        table = _parse_json(text)
    else:
        raise ValueError(f"unknown table format {format!r}")
    if strict_registry:
        registry.check(table.sectors)
    return table


def parse_iot(path, format: str | None = None, *, strict_registry: bool = False,
              registry: SectorRegistry = STAN) -> IOTable:
    """Read a table from ``path``; ``format`` defaults to the file suffix."""
    path = Path(path)
    if format is None:
        format = path.suffix.lower().lstrip(".")
    text = path.read_text(encoding="utf-8")
    return parse_iot_text(text, format, strict_registry=strict_registry, registry=registry)


# -- serialization -----------------------------------------------------------


def _num(x: float) -> str:
    x = float(x)
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_iot(t: IOTable, format: str = "csv") -> str:
    if format == "json":
        obj = {
            "sectors": list(t.sectors),
            "W": [[float(v) for v in row] for row in t.W],
            "F": [float(v) for v in t.F],
            "X": [float(v) for v in t.X],
            "Y": [float(v) for v in t.Y],
            "aux": {k: [float(v) for v in vals] for k, vals in t.aux.items()},
        }
        return json.dumps(obj, indent=1) + "\n"
    if format != "csv":
        raise ValueError(f"unknown table format {format!r}")
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    names = list(t.aux)
    out.writerow(["sector", *t.sectors, "final_use", "total_output", *(f"aux:{a}" for a in names)])
    for i, code in enumerate(t.sectors):
        out.writerow([code, *map(_num, t.W[i]), _num(t.F[i]), _num(t.Y[i]),
                      *(_num(t.aux[a][i]) for a in names)])
    pad = [""] * (2 + len(names))
    out.writerow(["value_added", *map(_num, t.X), *pad])
    out.writerow(["total_input", *map(_num, t.Y), *pad])
    return buf.getvalue()


def write_iot(t: IOTable, path, format: str | None = None) -> None:
    path = Path(path)
    if format is None:
        format = path.suffix.lower().lstrip(".")
    path.write_text(format_iot(t, format), encoding="utf-8")


# -- checks and conversion ---------------------------------------------------


def validate_balance(t: IOTable, tol_balance: float = DEFAULT_TOL_BALANCE) -> BalanceReport:
    """Check row and column balance with a relative tolerance.

    Residuals are scaled by ``max(1, |Y_i|)``, so the pass/fail outcome is
    unchanged when the whole table is multiplied by a positive constant
    (for outputs of magnitude at least one).
    """
    if not tol_balance > 0:
        raise ValueError("tol_balance must be positive")
    scale = np.maximum(1.0, np.abs(t.Y))
    row_res = np.abs(t.Y - (t.W.sum(axis=1) + t.F)) / scale
    col_res = np.abs(t.Y - (t.W.sum(axis=0) + t.X)) / scale
    failing = []
    for i, code in enumerate(t.sectors):
        if row_res[i] > tol_balance:
            failing.append((code, "row", float(row_res[i])))
        if col_res[i] > tol_balance:
            failing.append((code, "column", float(col_res[i])))
    max_row = float(row_res.max())
    max_col = float(col_res.max())
    return BalanceReport(max_row, max_col, tuple(failing),
                         max_row <= tol_balance and max_col <= tol_balance, tol_balance)


def to_network(t: IOTable) -> IONetwork:
    """Edge i->j for every W_ij > 0; self-loops kept; table columns become node attributes."""
    if not np.any(t.W > 0):
        raise EmptyNetworkError("empty network: table has zero total intermediate flow")
    attrs = {"final_use": t.F, "value_added": t.X, "total_output": t.Y, **t.aux}
    return IONetwork.from_matrix(t.sectors, t.W, attrs)
