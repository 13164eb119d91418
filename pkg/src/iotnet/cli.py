"""Command-line interface.

Exit codes: 0 success, 1 analysis or validation failure, 2 usage or input error.
Settings come from flags, then an optional JSON ``--config`` file, then
built-in defaults.
"""

from __future__ import annotations

import argparse
import glob
import json
import re
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from . import assort, centrality, community, iot, report
from .errors import IotNetError, ParseError
from .network import strength_summary

MEASURES = ("strengths", "assort", "pagerank", "hits", "communities")
_YEAR_STEM = re.compile(r"^(?P<series>.+)_(?P<year>\d{4})$")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str = "analyze"
    inputs: tuple[str, ...] = ()
    gamma: tuple[float, ...] = (centrality.DEFAULT_GAMMA,)
    aux: str = "value_added"
    assort_types: tuple[str, ...] = tuple(t.value for t in assort.ASSORT_TYPES)
    jackknife: bool = True
    variant: str = community.DEFAULT_VARIANT
    top_k: int = 5
    tol: float = centrality.DEFAULT_TOL
    max_iter: int = centrality.DEFAULT_MAX_ITER
    tol_balance: float = iot.DEFAULT_TOL_BALANCE
    out: str = "."
    format: str = "csv"
    strict_registry: bool = False
    measures: tuple[str, ...] = MEASURES
    series_a: str | None = None
    series_b: str | None = None

    def validate(self) -> "RunConfig":
        if not self.inputs:
            raise UsageError("no inputs given")
        for g in self.gamma:
            if not 0.0 <= g <= 1.0:
                raise UsageError(f"--gamma must lie in [0, 1], got {g!r}")
        if not self.gamma:
            raise UsageError("at least one --gamma is required")
        for t in self.assort_types:
            if t not in {a.value for a in assort.ASSORT_TYPES}:
                raise UsageError(f"unknown assortativity type {t!r}")
        if self.variant not in community.VARIANTS:
            raise UsageError(f"unknown --variant {self.variant!r}")
        if self.top_k < 0:
            raise UsageError("--top-k must be nonnegative (0 = all nodes)")
        if not self.tol > 0 or not self.tol_balance > 0:
            raise UsageError("tolerances must be positive")
        if self.max_iter < 1:
            raise UsageError("--max-iter must be at least 1")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown --format {self.format!r}")
        for m in self.measures:
            if m not in MEASURES:
                raise UsageError(f"unknown --measure {m!r}")
        if not self.aux:
            raise UsageError("--aux must not be empty")
        return self


_LIST_FIELDS = {"inputs", "gamma", "assort_types", "measures"}


def load_config_file(path) -> dict:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"no such config file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid config file {path}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise UsageError("config file must hold a JSON object")
    known = {f.name for f in fields(RunConfig)} - {"command"}
    unknown = sorted(set(obj) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return {k: tuple(v) if k in _LIST_FIELDS else v for k, v in obj.items()}


# -- inputs -----------------------------------------------------------------


@dataclass(frozen=True)
class TableRef:
    path: Path
    series: str
    year: int | None

    @property
    def prefix(self) -> str:
        return self.series if self.year is None else f"{self.series}_{self.year}"


def expand_inputs(inputs) -> list[Path]:
    paths: list[Path] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            found = sorted(q for q in p.iterdir() if q.suffix.lower() in (".csv", ".json"))
            if not found:
                raise UsageError(f"no tables in directory: {item}")
            paths.extend(found)
        elif p.is_file():
            paths.append(p)
        elif glob.has_magic(item):
            found = sorted(Path(q) for q in glob.glob(item))
            if not found:
                raise UsageError(f"no such input: {item}")
            paths.extend(found)
        else:
            raise UsageError(f"no such input: {item}")
    return paths


def table_ref(path: Path) -> TableRef:
    m = _YEAR_STEM.match(path.stem)
    if m:
        return TableRef(path, m["series"], int(m["year"]))
    return TableRef(path, path.stem, None)


def year_series(refs) -> dict[str, list[TableRef]]:
    series: dict[str, list[TableRef]] = {}
    for ref in refs:
        series.setdefault(ref.series, []).append(ref)
    for sid, items in series.items():
        items.sort(key=lambda r: (r.year is None, r.year or 0, str(r.path)))
        years = [r.year for r in items if r.year is not None]
        if len(set(years)) != len(years):
            raise UsageError(f"series {sid!r} lists a year more than once")
    return series


# -- the runner ---------------------------------------------------------------


class Runner:
    def __init__(self, cfg: RunConfig, stdout=None, stderr=None):
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.status = 0

    def fail(self, code: int, message: str) -> None:
        print(f"error: {message}", file=self.stderr)
        self.status = max(self.status, code)

    def emit_csv(self, name: str, header, rows) -> None:
        path = report.write_text(self.out / f"{name}.csv", report.csv_text(header, rows))
        print(f"wrote {path}", file=self.stdout)

    def emit_json(self, name: str, obj) -> None:
        path = report.write_text(self.out / f"{name}.json", report.json_text(obj))
        print(f"wrote {path}", file=self.stdout)

    def load(self, ref: TableRef) -> iot.IOTable | None:
        try:
            return iot.parse_iot(ref.path, strict_registry=self.cfg.strict_registry)
        except (ParseError, IotNetError, ValueError) as exc:
            self.fail(2, f"{ref.path}: {exc}")
            return None

    def refs(self) -> list[TableRef]:
        return [table_ref(p) for p in expand_inputs(self.cfg.inputs)]

    # per-table measures

    def do_validate(self, ref: TableRef, t: iot.IOTable) -> None:
        rep = iot.validate_balance(t, self.cfg.tol_balance)
        name = f"{ref.prefix}_balance"
        if self.cfg.format == "csv":
            self.emit_csv(name, *report.balance_rows(t, rep))
        else:
            self.emit_json(name, report.balance_json(rep))
        if not rep.passed:
            failing = ", ".join(f"{c}/{a}" for c, a, _ in rep.failing_sectors)
            self.fail(1, f"{ref.path}: balance check failed for {failing}")

    def do_strengths(self, ref, g) -> None:
        s = strength_summary(g)
        if self.cfg.format == "csv":
            self.emit_csv(f"{ref.prefix}_strengths", *report.strength_rows(s))
            self.emit_csv(f"{ref.prefix}_strength_stats", *report.strength_stats_rows(s))
            self.emit_csv(f"{ref.prefix}_edges", *report.edge_rows(g))
        else:
            self.emit_json(f"{ref.prefix}_strengths", report.strengths_json(g, s))

    def do_assort(self, ref, g) -> None:
        wanted = set(self.cfg.assort_types)
        profile = [e for e in assort.assortativity_profile(g, with_jackknife=self.cfg.jackknife)
                   if e.type.value in wanted]
        if self.cfg.format == "csv":
            self.emit_csv(f"{ref.prefix}_assort", *report.assort_rows(profile))
            if self.cfg.jackknife:
                self.emit_csv(f"{ref.prefix}_assort_loo", *report.assort_loo_rows(profile))
        else:
            self.emit_json(f"{ref.prefix}_assort", report.assort_json(profile))

    def do_pagerank(self, ref, g) -> None:
        lam = self.aux_vector(g)
        k = min(self.cfg.top_k, g.n_nodes) if self.cfg.top_k else g.n_nodes
        for gamma in self.cfg.gamma:
            s = centrality.extended_pagerank(g, gamma, lam, self.cfg.tol, self.cfg.max_iter)
            s = replace(s, source=self.cfg.aux)
            table = centrality.top_k(s, k)
            name = f"{ref.prefix}_pagerank_g{report.fmt(float(gamma))}"
            meta = report.pagerank_meta(s, self.cfg.tol, k)
            if self.cfg.format == "csv":
                self.emit_csv(name, *report.rank_rows(table))
                report.write_text(self.out / f"{name}.meta.json", report.json_text(meta))
            else:
                header, rows = report.rank_rows(table)
                self.emit_json(name, {"meta": meta, "ranking": [dict(zip(header, r)) for r in rows]})

    def aux_vector(self, g):
        aux = self.cfg.aux
        if aux.startswith("file:"):
            path = Path(aux[5:])
            try:
                text = path.read_text(encoding="utf-8")
            except FileNotFoundError:
                raise UsageError(f"no such input: {path}") from None
            values = {}
            for line in text.splitlines()[1:]:
                if line.strip():
                    node, value = line.split(",")[:2]
                    values[node.strip()] = float(value)
            return values
        return None if aux == "uniform" else aux

    def do_hits(self, ref, g) -> None:
        hub, auth = centrality.weighted_hits(g, self.cfg.tol, self.cfg.max_iter)
        name = f"{ref.prefix}_hits"
        meta = {"iterations": hub.iterations, "residual": hub.residual, "tol": self.cfg.tol}
        if self.cfg.format == "csv":
            self.emit_csv(name, *report.hits_rows(hub, auth))
            report.write_text(self.out / f"{name}.meta.json", report.json_text(meta))
        else:
            header, rows = report.hits_rows(hub, auth)
            self.emit_json(name, {"meta": meta, "scores": [dict(zip(header, r)) for r in rows]})

    def do_communities(self, ref, g) -> community.Partition:
        p = community.greedy_communities(g, self.cfg.variant)
        name = f"{ref.prefix}_communities"
        meta = {"variant": self.cfg.variant, "modularity": p.modularity, "k": p.k}
        if self.cfg.format == "csv":
            self.emit_csv(name, *report.partition_rows(p))
            report.write_text(self.out / f"{name}.meta.json", report.json_text(meta))
        else:
            header, rows = report.partition_rows(p)
            self.emit_json(name, {"meta": meta, "partition": [dict(zip(header, r)) for r in rows]})
        return p

    def emit_matrix(self, name: str, m: community.AmiMatrix, corner: str) -> None:
        if self.cfg.format == "csv":
            self.emit_csv(name, *report.ami_rows(m, corner))
        else:
            self.emit_json(name, report.ami_json(m))

    # commands

    def per_table(self, measures) -> dict[str, list[tuple[TableRef, community.Partition]]]:
        partitions: dict[str, list] = {}
        for ref in self.refs():
            t = self.load(ref)
            if t is None:
                continue
            if measures == ("validate",):
                self.do_validate(ref, t)
                continue
            try:
                g = iot.to_network(t)
            except IotNetError as exc:
                self.fail(1, f"{ref.path}: {exc}")
                continue
            for m in measures:
                try:
                    if m == "communities":
                        partitions.setdefault(ref.series, []).append((ref, self.do_communities(ref, g)))
                    else:
                        getattr(self, f"do_{m}")(ref, g)
                except IotNetError as exc:
                    self.fail(1, f"{ref.path}: {m}: {exc}")
        return partitions

    def run(self) -> int:
        cmd = self.cfg.command
        if cmd == "validate":
            self.per_table(("validate",))
        elif cmd in MEASURES:
            self.per_table((cmd,))
        elif cmd == "analyze":
            measures = tuple(m for m in MEASURES if m in self.cfg.measures)
            partitions = self.per_table(measures)
            for sid, items in sorted(partitions.items()):
                if len(items) > 1:
                    m = self.safe_matrix([(r.prefix, p) for r, p in items])
                    if m is not None:
                        self.emit_matrix(f"{sid}_communities_ami", m, "id")
        elif cmd == "ami":
            self.run_ami()
        elif cmd == "compare":
            self.run_compare()
        else:
            raise UsageError(f"unknown command {cmd!r}")
        return self.status

    def safe_matrix(self, items):
        try:
            return community.ami_matrix(items)
        except IotNetError as exc:
            self.fail(1, str(exc))
            return None

    def run_ami(self) -> None:
        items = []
        for path in expand_inputs(self.cfg.inputs):
            try:
                items.append((path.stem, report.read_partition(path)))
            except ParseError as exc:
                self.fail(2, str(exc))
        if self.status:
            return
        m = self.safe_matrix(items)
        if m is not None:
            self.emit_matrix("ami_matrix", m, "id")

    def run_compare(self) -> None:
        series = year_series(self.refs())
        ids = sorted(series)
        a = self.cfg.series_a or (ids[0] if ids else None)
        b = self.cfg.series_b or (ids[1] if len(ids) > 1 else a)
        for sid in (a, b):
            if sid not in series:
                raise UsageError(f"series {sid!r} not found among inputs (found: {', '.join(ids)})")
        years_a = [r.year for r in series[a]]
        years_b = [r.year for r in series[b]]
        if years_a != years_b:
            missing_b = sorted(set(years_a) - set(years_b), key=str)
            missing_a = sorted(set(years_b) - set(years_a), key=str)
            raise UsageError(
                f"series are not aligned on years; missing in {b}: {missing_b or 'none'}; "
                f"missing in {a}: {missing_a or 'none'}"
            )
        parts = {}
        for sid in dict.fromkeys((a, b)):
            parts[sid] = []
            for ref in series[sid]:
                t = self.load(ref)
                if t is None:
                    continue
                try:
                    p = community.greedy_communities(iot.to_network(t), self.cfg.variant)
                except IotNetError as exc:
                    self.fail(1, f"{ref.path}: {exc}")
                    continue
                label = str(ref.year) if ref.year is not None else ref.prefix
                parts[sid].append((label, p))
        if self.status:
            return
        try:
            m = community.ami_triangle(parts[a], parts[b])
        except IotNetError as exc:
            self.fail(1, str(exc))
            return
        self.emit_matrix(f"compare_{a}_{b}_ami", m, "year")


# -- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="iotnet", description="Input-output network analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, inputs_help="IOT files (.csv/.json), directories or globs"):
        p.add_argument("inputs", nargs="+", help=inputs_help)
        p.add_argument("--out", default=None, help="output directory (default: .)")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--strict-registry", action="store_true", default=None,
                       help="reject sector codes outside the 44-sector registry")

    def numeric(p):
        p.add_argument("--tol", type=float, default=None, help="L1 convergence tolerance")
        p.add_argument("--max-iter", type=int, default=None)

    def pr_opts(p):
        p.add_argument("--gamma", type=float, action="append", default=None,
                       help="damping factor; repeat for a sensitivity run")
        p.add_argument("--aux", default=None,
                       help="lambda source: uniform, a table column (value_added, final_use, "
                            "total_output, aux name) or file:<path> with node,value rows")
        p.add_argument("--top-k", type=int, default=None, help="rows per ranking, capped at the node count (0 = all)")

    def assort_opts(p):
        p.add_argument("--type", dest="assort_types", action="append", default=None,
                       choices=[t.value for t in assort.ASSORT_TYPES])
        p.add_argument("--jackknife", dest="jackknife", action="store_true", default=None)
        p.add_argument("--no-jackknife", dest="jackknife", action="store_false")

    def variant_opt(p):
        p.add_argument("--variant", choices=list(community.VARIANTS), default=None)

    p = sub.add_parser("validate", help="check row/column balance")
    common(p)
    p.add_argument("--tol-balance", type=float, default=None)

    p = sub.add_parser("strengths", help="strength table, log stats and edge list")
    common(p)

    p = sub.add_parser("assort", help="assortativity profile with jackknife SEs")
    common(p)
    assort_opts(p)

    p = sub.add_parser("pagerank", help="extended PageRank rankings")
    common(p)
    pr_opts(p)
    numeric(p)

    p = sub.add_parser("hits", help="weighted hub and authority scores")
    common(p)
    numeric(p)

    p = sub.add_parser("communities", help="greedy modularity communities")
    common(p)
    variant_opt(p)

    p = sub.add_parser("ami", help="pairwise AMI of node,community CSV files")
    common(p, "partition CSV files (node,community)")

    p = sub.add_parser("compare", help="two-series AMI matrix of detected communities")
    common(p)
    variant_opt(p)
    p.add_argument("--series-a", default=None)
    p.add_argument("--series-b", default=None)

    p = sub.add_parser("analyze", help="run every requested measure on every table")
    common(p)
    p.add_argument("--measure", dest="measures", action="append", default=None, choices=MEASURES)
    pr_opts(p)
    numeric(p)
    assort_opts(p)
    variant_opt(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        values.update(load_config_file(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = tuple(v) if f.name in _LIST_FIELDS else v
    values["command"] = args.command
    try:
        return RunConfig(**values).validate()
    except TypeError as exc:
        raise UsageError(str(exc)) from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return Runner(cfg).run()
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
