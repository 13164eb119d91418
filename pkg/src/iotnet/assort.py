"""Weighted, directed assortativity of node strengths with jackknife errors.

For every edge i->j with weight w_ij the coefficient correlates a strength
feature of the source (``alpha``) with a strength feature of the target
(``beta``), each edge counting with weight w_ij.  Means are the
edge-weighted averages over sources and targets.  The ``total`` type uses
total strength on both ends.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AssortativityError, IotNetError
from .network import IONetwork

# relative spread below which a strength feature counts as constant
_DEGENERATE_RTOL = 1e-12


class AssortType(str, enum.Enum):
    IN_IN = "in-in"
    IN_OUT = "in-out"
    OUT_IN = "out-in"
    OUT_OUT = "out-out"
    TOTAL = "total"

    @property
    def source_kind(self) -> str:
        return "total" if self is AssortType.TOTAL else self.value.split("-")[0]

    @property
    def target_kind(self) -> str:
        return "total" if self is AssortType.TOTAL else self.value.split("-")[1]

    def __str__(self) -> str:
        return self.value


ASSORT_TYPES = tuple(AssortType)


@dataclass(frozen=True)
class AssortativityEstimate:
    type: AssortType
    value: float
    n_nodes: int
    jackknife_se: float | None = None
    leave_one_out: tuple[tuple[str, float], ...] | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _strengths(g: IONetwork, kind: str) -> np.ndarray:
    return {"in": g.in_strengths, "out": g.out_strengths, "total": g.total_strengths}[kind]


def _spread_is_zero(x: np.ndarray, var: float) -> bool:
    if np.all(x == x[0]):
        return True
    scale = float(np.max(np.abs(x)))
    return var <= (_DEGENERATE_RTOL * scale) ** 2


def compute_assortativity(g: IONetwork, t: AssortType | str) -> float:
    t = AssortType(t)
    if g.n_edges < 2:
        raise AssortativityError(f"undefined assortativity: need at least 2 edges, got {g.n_edges}")
    w = g.weights
    x = _strengths(g, t.source_kind)[g.sources]
    y = _strengths(g, t.target_kind)[g.targets]
    W_n = math.fsum(w)
    x_bar = math.fsum(w * x) / W_n
    y_bar = math.fsum(w * y) / W_n
    dx = x - x_bar
    dy = y - y_bar
    var_x = math.fsum(w * dx * dx) / W_n
    var_y = math.fsum(w * dy * dy) / W_n
    if _spread_is_zero(x, var_x):
        raise AssortativityError("undefined assortativity: zero variance of source-side strengths")
    if _spread_is_zero(y, var_y):
        raise AssortativityError("undefined assortativity: zero variance of target-side strengths")
    cov = math.fsum(w * dx * dy) / W_n
    r = cov / (math.sqrt(var_x) * math.sqrt(var_y))
    # Cauchy-Schwarz bound; only rounding can push past it
    return min(1.0, max(-1.0, r))


def jackknife_se(values) -> float:
    """Delete-one jackknife standard error from leave-one-out replicates."""
    v = np.asarray(values, dtype=float)
    n = len(v)
    centered = v - v.mean()
    return math.sqrt((n - 1) / n * math.fsum(centered * centered))


def jackknife(g: IONetwork, t: AssortType | str, executor=None) -> AssortativityEstimate:
    """Coefficient plus jackknife SE from dropping one node at a time.

    ``executor`` (a ``concurrent.futures.Executor``) may evaluate the
    leave-one-out networks in parallel; results are always assembled in
    node order.
    """
    t = AssortType(t)
    if g.n_nodes < 3:
        raise AssortativityError(f"jackknife needs at least 3 nodes, got {g.n_nodes}")
    value = compute_assortativity(g, t)

    def one(node: str) -> float:
        try:
            return compute_assortativity(g.remove_node(node), t)
        except AssortativityError as exc:
            raise AssortativityError(f"leave-one-out without node {node}: {exc}", node=node) from exc

    if executor is None:
        loo = [one(v) for v in g.nodes]
    else:
        loo = list(executor.map(one, g.nodes))
    return AssortativityEstimate(
        type=t,
        value=value,
        n_nodes=g.n_nodes,
        jackknife_se=jackknife_se(loo),
        leave_one_out=tuple(zip(g.nodes, loo)),
    )


def assortativity_profile(g: IONetwork, with_jackknife: bool = True, executor=None
                          ) -> list[AssortativityEstimate]:
    """All five coefficient types; a failing type carries its error message in place."""
    out = []
    for t in ASSORT_TYPES:
        try:
            if with_jackknife:
                out.append(jackknife(g, t, executor=executor))
            else:
                out.append(AssortativityEstimate(t, compute_assortativity(g, t), g.n_nodes))
        except IotNetError as exc:
            out.append(AssortativityEstimate(t, float("nan"), g.n_nodes, error=str(exc)))
    return out
