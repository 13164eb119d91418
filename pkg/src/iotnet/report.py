"""Report serialization.

Every number is written in its shortest round-trip decimal form and every
JSON object with sorted keys, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .assort import AssortativityEstimate
from .centrality import RankTable, ScoreVector
from .community import AmiMatrix, Partition
from .errors import ParseError
from .iot import BalanceReport, IOTable
from .network import IONetwork, StrengthSummary


def fmt(x) -> str:
    """Shortest round-trip decimal; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return ""
    return repr(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return None if not math.isfinite(x) else x
    return x


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(header)
    for row in rows:
        out.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


# -- per-measure payloads: (csv header, rows) and a JSON-ready dict -----------


def balance_rows(t: IOTable, rep: BalanceReport):
    scale = np.maximum(1.0, np.abs(t.Y))
    row_res = np.abs(t.Y - (t.W.sum(axis=1) + t.F)) / scale
    col_res = np.abs(t.Y - (t.W.sum(axis=0) + t.X)) / scale
    rows = []
    for i, code in enumerate(t.sectors):
        rows.append((code, "row", float(row_res[i]), bool(row_res[i] > rep.tol_balance)))
        rows.append((code, "column", float(col_res[i]), bool(col_res[i] > rep.tol_balance)))
    return ["sector", "axis", "residual", "failed"], rows


def balance_json(rep: BalanceReport) -> dict:
    return {
        "passed": rep.passed,
        "tol_balance": rep.tol_balance,
        "max_row_residual": rep.max_row_residual,
        "max_col_residual": rep.max_col_residual,
        "failing_sectors": [{"sector": c, "axis": a, "residual": r} for c, a, r in rep.failing_sectors],
    }


def strength_rows(s: StrengthSummary):
    return ["node", "s_in", "s_out", "s_total"], s.rows()


def strength_stats_rows(s: StrengthSummary):
    header = ["kind", "n_positive", "n_zero", "log10_min", "log10_q1", "log10_median",
              "log10_q3", "log10_max"]
    rows = [(st.kind, st.n_positive, st.n_zero, st.min, st.q1, st.median, st.q3, st.max)
            for st in s.log_stats.values()]
    return header, rows


def edge_rows(g: IONetwork):
    return ["source", "target", "weight"], g.edges()


def strengths_json(g: IONetwork, s: StrengthSummary) -> dict:
    return {
        "strengths": [dict(zip(["node", "s_in", "s_out", "s_total"], r)) for r in s.rows()],
        "log10_stats": {k: vars(v) for k, v in s.log_stats.items()},
        "zero_strength": {k: list(v) for k, v in s.zero_strength.items()},
        "edges": [dict(zip(["source", "target", "weight"], e)) for e in g.edges()],
    }


def assort_rows(profile: Sequence[AssortativityEstimate]):
    rows = [(e.type.value, e.value, e.jackknife_se, e.n_nodes, e.error or "") for e in profile]
    return ["type", "value", "se", "n", "error"], rows


def assort_loo_rows(profile: Sequence[AssortativityEstimate]):
    rows = [(e.type.value, node, v) for e in profile for node, v in (e.leave_one_out or ())]
    return ["type", "removed", "value"], rows


def assort_json(profile: Sequence[AssortativityEstimate]) -> dict:
    return {
        "profile": [
            {
                "type": e.type.value,
                "value": e.value,
                "se": e.jackknife_se,
                "n": e.n_nodes,
                "error": e.error,
                "leave_one_out": [{"removed": v, "value": r} for v, r in (e.leave_one_out or ())],
            }
            for e in profile
        ]
    }


def rank_rows(table: RankTable):
    return ["node", "score", "rank"], [(node, score, rank) for rank, node, score in table.rows]


def pagerank_meta(s: ScoreVector, tol: float, k: int) -> dict:
    return {"gamma": s.gamma, "iterations": s.iterations, "residual": s.residual,
            "lambda_source": s.source, "tol": tol, "top_k": k}


def hits_rows(hub: ScoreVector, auth: ScoreVector):
    def ranks(s: ScoreVector):
        order = sorted(range(len(s.nodes)), key=lambda i: (-s.scores[i], s.nodes[i]))
        r = [0] * len(order)
        for pos, i in enumerate(order, start=1):
            r[i] = pos
        return r

    hr, ar = ranks(hub), ranks(auth)
    rows = [(v, hub.scores[i], auth.scores[i], hr[i], ar[i]) for i, v in enumerate(hub.nodes)]
    return ["node", "hub", "authority", "hub_rank", "authority_rank"], rows


def partition_rows(p: Partition):
    return ["node", "community"], list(zip(p.nodes, p.labels))


def read_partition(path) -> Partition:
    """Load a ``node,community`` CSV; community labels may be any strings."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows or [c.strip() for c in rows[0][:2]] != ["node", "community"]:
        raise ParseError(f"{path}: expected header 'node,community'", 1)
    nodes, labels = [], []
    for k, r in enumerate(rows[1:], start=2):
        if len(r) < 2:
            raise ParseError(f"{path}: expected 2 cells", k)
        nodes.append(r[0].strip())
        labels.append(r[1].strip())
    if len(set(nodes)) != len(nodes):
        raise ParseError(f"{path}: duplicate node")
    return Partition(tuple(nodes), tuple(labels))


def ami_rows(m: AmiMatrix, corner: str = "id"):
    rows = [(rid, *m.values[i]) for i, rid in enumerate(m.row_ids)]
    return [corner, *m.col_ids], rows


def ami_json(m: AmiMatrix) -> dict:
    return {"row_ids": list(m.row_ids), "col_ids": list(m.col_ids), "values": m.values}
