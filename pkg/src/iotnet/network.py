"""Weighted directed network value type and its elementary statistics.

Networks are immutable.  Derived networks (``remove_node``, ``scaled``,
``binarized``) are new instances, so the lazily computed strength caches
can never go stale.

Self-loops count once toward in-strength and once toward out-strength.
All sums run in edge-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import EmptyNetworkError, NodeLookupError, ParameterError


@dataclass(frozen=True, eq=False)
class IONetwork:
    """Weighted directed network over an ordered node list.

    Edges are stored as three parallel arrays (source index, target index,
    weight), sorted by (source, target).  Every weight is finite and
    strictly positive and each ordered pair appears at most once.
    """

    nodes: tuple[str, ...]
    sources: np.ndarray
    targets: np.ndarray
    weights: np.ndarray
    node_attrs: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        nodes = tuple(str(v) for v in self.nodes)
        if len(set(nodes)) != len(nodes):
            raise ParameterError("node ids must be unique")
        n = len(nodes)
        src = np.asarray(self.sources, dtype=np.int64).reshape(-1)
        tgt = np.asarray(self.targets, dtype=np.int64).reshape(-1)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if not (len(src) == len(tgt) == len(w)):
            raise ParameterError("edge arrays differ in length")
        if len(w):
            if src.min() < 0 or tgt.min() < 0 or src.max() >= n or tgt.max() >= n:
                raise ParameterError("edge endpoint out of range")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ParameterError("edge weights must be finite and strictly positive")
        order = np.lexsort((tgt, src))
        src, tgt, w = src[order], tgt[order], w[order]
        if len(w) > 1:
            dup = (src[1:] == src[:-1]) & (tgt[1:] == tgt[:-1])
            if np.any(dup):
                k = int(np.argmax(dup))
                raise ParameterError(f"duplicate edge {nodes[src[k]]}->{nodes[tgt[k]]}")
        attrs = {}
        for name, values in dict(self.node_attrs).items():
            arr = np.asarray(values, dtype=float).reshape(-1)
            if len(arr) != n:
                raise ParameterError(f"node attribute {name!r} has length {len(arr)}, expected {n}")
            arr.setflags(write=False)
            attrs[str(name)] = arr
        for arr in (src, tgt, w):
            arr.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "sources", src)
        object.__setattr__(self, "targets", tgt)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "node_attrs", attrs)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_matrix(cls, nodes: Iterable, matrix, node_attrs: Mapping | None = None) -> "IONetwork":
        """Edge i->j for every strictly positive entry ``matrix[i, j]``."""
        nodes = tuple(str(v) for v in nodes)
        W = np.asarray(matrix, dtype=float)
        if W.shape != (len(nodes), len(nodes)):
            raise ParameterError(f"matrix shape {W.shape} does not match {len(nodes)} nodes")
        if not np.all(np.isfinite(W)) or np.any(W < 0):
            raise ParameterError("matrix entries must be finite and nonnegative")
        src, tgt = np.nonzero(W > 0)
        return cls(nodes, src, tgt, W[src, tgt], dict(node_attrs or {}))

    @classmethod
    def from_edges(
        cls, nodes: Iterable, edges: Iterable[tuple], node_attrs: Mapping | None = None
    ) -> "IONetwork":
        """Build from ``(source_id, target_id, weight)`` triples."""
        nodes = tuple(str(v) for v in nodes)
        pos = {v: i for i, v in enumerate(nodes)}
        src, tgt, w = [], [], []
        for s, t, weight in edges:
            try:
                src.append(pos[str(s)])
                tgt.append(pos[str(t)])
            except KeyError as exc:
                raise NodeLookupError(f"unknown node {exc.args[0]!r}") from None
            w.append(float(weight))
        return cls(nodes, np.array(src, dtype=np.int64), np.array(tgt, dtype=np.int64),
                   np.array(w, dtype=float), dict(node_attrs or {}))

    # -- basic accessors --------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    def index(self, node) -> int:
        try:
            return self._index[str(node)]
        except KeyError:
            raise NodeLookupError(f"unknown node {node!r}") from None

    def edges(self) -> list[tuple[str, str, float]]:
        return [
            (self.nodes[s], self.nodes[t], float(w))
            for s, t, w in zip(self.sources, self.targets, self.weights)
        ]

    def weight_matrix(self) -> np.ndarray:
        W = np.zeros((self.n_nodes, self.n_nodes))
        W[self.sources, self.targets] = self.weights
        return W

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n_nodes, self.n_nodes))
        A[self.sources, self.targets] = 1.0
        return A

    # -- strengths (cached) -----------------------------------------------

    @cached_property
    def in_strengths(self) -> np.ndarray:
        s = np.bincount(self.targets, weights=self.weights, minlength=self.n_nodes).astype(float)
        s.setflags(write=False)
        return s

    @cached_property
    def out_strengths(self) -> np.ndarray:
        s = np.bincount(self.sources, weights=self.weights, minlength=self.n_nodes).astype(float)
        s.setflags(write=False)
        return s

    @cached_property
    def total_strengths(self) -> np.ndarray:
        s = self.in_strengths + self.out_strengths
        s.setflags(write=False)
        return s

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.sources, minlength=self.n_nodes).astype(float)

    @cached_property
    def total_weight(self) -> float:
        return float(math.fsum(self.weights))

    # -- derived networks -------------------------------------------------

    def remove_node(self, node) -> "IONetwork":
        i = self.index(node)
        if self.n_nodes == 1:
            raise EmptyNetworkError("empty network: cannot remove the last node")
        keep = (self.sources != i) & (self.targets != i)
        src = self.sources[keep]
        tgt = self.targets[keep]
        src = src - (src > i)
        tgt = tgt - (tgt > i)
        nodes = self.nodes[:i] + self.nodes[i + 1:]
        attrs = {k: np.delete(v, i) for k, v in self.node_attrs.items()}
        return IONetwork(nodes, src, tgt, self.weights[keep], attrs)

    def scaled(self, factor: float) -> "IONetwork":
        if not factor > 0:
            raise ParameterError("scale factor must be positive")
        return IONetwork(self.nodes, self.sources, self.targets, self.weights * factor, self.node_attrs)

    def binarized(self) -> "IONetwork":
        """Same edge set with every weight set to 1 (the adjacency matrix A)."""
        return IONetwork(self.nodes, self.sources, self.targets, np.ones(self.n_edges), self.node_attrs)

    def permuted(self, order: Iterable) -> "IONetwork":
        """Relabel the node order; ``order`` lists every node id exactly once."""
        order = [str(v) for v in order]
        if sorted(order) != sorted(self.nodes):
            raise ParameterError("permutation must list every node exactly once")
        new_pos = np.array([order.index(v) for v in self.nodes], dtype=np.int64)
        perm = np.array([self.index(v) for v in order], dtype=np.int64)
        attrs = {k: v[perm] for k, v in self.node_attrs.items()}
        return IONetwork(tuple(order), new_pos[self.sources], new_pos[self.targets], self.weights, attrs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IONetwork):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and np.array_equal(self.sources, other.sources)
            and np.array_equal(self.targets, other.targets)
            and np.array_equal(self.weights, other.weights)
            and self.node_attrs.keys() == other.node_attrs.keys()
            and all(np.array_equal(v, other.node_attrs[k]) for k, v in self.node_attrs.items())
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"IONetwork(n_nodes={self.n_nodes}, n_edges={self.n_edges}, W_n={self.total_weight!r})"


def in_strength(g: IONetwork, i) -> float:
    return float(g.in_strengths[g.index(i)])


def out_strength(g: IONetwork, i) -> float:
    return float(g.out_strengths[g.index(i)])


def total_strength(g: IONetwork, i) -> float:
    return float(g.total_strengths[g.index(i)])


def total_weight(g: IONetwork) -> float:
    return g.total_weight


def remove_node(g: IONetwork, i) -> IONetwork:
    return g.remove_node(i)


STRENGTH_KINDS = ("in", "out", "total")


@dataclass(frozen=True)
class LogStats:
    """log10 summary of the strictly positive strengths of one kind."""

    kind: str
    n_positive: int
    n_zero: int
    min: float
    q1: float
    median: float
    q3: float
    max: float


@dataclass(frozen=True)
class StrengthSummary:
    nodes: tuple[str, ...]
    s_in: np.ndarray
    s_out: np.ndarray
    s_total: np.ndarray
    log_stats: dict[str, LogStats]
    zero_strength: dict[str, tuple[str, ...]]

    def rows(self) -> list[tuple[str, float, float, float]]:
        return [
            (v, float(a), float(b), float(c))
            for v, a, b, c in zip(self.nodes, self.s_in, self.s_out, self.s_total)
        ]


def _log_stats(kind: str, values: np.ndarray) -> LogStats:
    positive = values[values > 0]
    n_zero = int(len(values) - len(positive))
    if len(positive) == 0:
        nan = float("nan")
        return LogStats(kind, 0, n_zero, nan, nan, nan, nan, nan)
    logs = np.log10(positive)
    q1, med, q3 = np.quantile(logs, [0.25, 0.5, 0.75])
    return LogStats(kind, len(positive), n_zero, float(logs.min()), float(q1), float(med),
                    float(q3), float(logs.max()))


def strength_summary(g: IONetwork) -> StrengthSummary:
    """Per-node strengths plus log10 quartiles for distribution plots.

    Nodes with zero strength of a given kind are left out of that kind's
    log statistics and listed in ``zero_strength`` instead.
    """
    series = {"in": g.in_strengths, "out": g.out_strengths, "total": g.total_strengths}
    stats = {k: _log_stats(k, v) for k, v in series.items()}
    zeros = {k: tuple(g.nodes[i] for i in np.flatnonzero(v <= 0)) for k, v in series.items()}
    return StrengthSummary(g.nodes, np.array(g.in_strengths), np.array(g.out_strengths),
                           np.array(g.total_strengths), stats, zeros)
