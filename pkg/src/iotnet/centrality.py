"""PageRank with an auxiliary importance vector, and weighted hubs/authorities.

The extended PageRank fixed point is

    P_i = gamma * sum_j (w_ji / s_j_out) * P_j + (1 - gamma) * lambda_i / sum(lambda)

Nodes without outgoing weight (dangling nodes) pass their mass on in
proportion to the normalized auxiliary vector, so the ``gamma = 0`` limit
is exactly ``lambda / sum(lambda)`` and the uniform-lambda case is the
usual weighted PageRank with uniform dangling redistribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateError, ParameterError
from .network import IONetwork

DEFAULT_GAMMA = 0.85
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class ScoreVector:
    kind: str  # "pagerank", "hub" or "authority"
    nodes: tuple[str, ...]
    scores: np.ndarray
    iterations: int
    residual: float
    gamma: float | None = None
    source: str | None = None  # where lambda came from, pagerank only

    def as_dict(self) -> dict[str, float]:
        return {v: float(s) for v, s in zip(self.nodes, self.scores)}


@dataclass(frozen=True)
class RankTable:
    rows: tuple[tuple[int, str, float], ...]

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def nodes(self) -> list[str]:
        return [node for _, node, _ in self.rows]


def auxiliary_vector(g: IONetwork, values) -> np.ndarray:
    """Validate an auxiliary importance vector against ``g``.

    ``values`` may be a sequence in node order, a mapping node -> value,
    the name of a node attribute, or ``None`` for uniform importance.
    """
    if values is None or (isinstance(values, str) and values == "uniform"):
        return np.ones(g.n_nodes)
    if isinstance(values, str):
        if values not in g.node_attrs:
            raise ParameterError(
                f"no auxiliary column {values!r}; available: {sorted(g.node_attrs)}"
            )
        lam = np.array(g.node_attrs[values], dtype=float)
    elif isinstance(values, dict):
        missing = [v for v in g.nodes if v not in values]
        if missing:
            raise ParameterError(f"auxiliary vector missing nodes: {', '.join(missing)}")
        lam = np.array([float(values[v]) for v in g.nodes])
    else:
        lam = np.array(values, dtype=float).reshape(-1)
    if len(lam) != g.n_nodes:
        raise ParameterError(f"auxiliary vector has length {len(lam)}, expected {g.n_nodes}")
    if not np.all(np.isfinite(lam)):
        raise ParameterError("auxiliary vector must be finite")
    if np.any(lam < 0):
        bad = [g.nodes[i] for i in np.flatnonzero(lam < 0)]
        raise ParameterError(f"auxiliary vector has negative entries at nodes {', '.join(bad)}")
    if not lam.sum() > 0:
        raise ParameterError("auxiliary vector must have a positive sum")
    return lam


def _check_common(gamma: float | None, tol: float, max_iter: int) -> None:
    if gamma is not None and not (0.0 <= gamma <= 1.0):
        raise ParameterError(f"gamma must lie in [0, 1], got {gamma!r}")
    if not tol > 0:
        raise ParameterError("tol must be positive")
    if int(max_iter) < 1:
        raise ParameterError("max_iter must be at least 1")


def _pagerank_step(P, src, tgt, share, dangling, lam_n, gamma):
    n = len(P)
    flow = np.bincount(tgt, weights=share * P[src], minlength=n)
    dangling_mass = math.fsum(P[dangling])
    return gamma * (flow + dangling_mass * lam_n) + (1.0 - gamma) * lam_n


def _transition(g: IONetwork, binary: bool):
    if binary:
        w = np.ones(g.n_edges)
        s_out = g.out_degrees
    else:
        w = g.weights
        s_out = g.out_strengths
    share = w / s_out[g.sources]
    dangling = s_out <= 0
    return share, dangling


def _pagerank(g, gamma, lam, tol, max_iter, binary, source):
    _check_common(gamma, tol, max_iter)
    lam = np.asarray(lam, dtype=float)
    lam_n = lam / lam.sum()
    share, dangling = _transition(g, binary)
    P = lam_n.copy()
    residual = math.inf
    for it in range(1, int(max_iter) + 1):
        P_new = _pagerank_step(P, g.sources, g.targets, share, dangling, lam_n, gamma)
        residual = float(np.abs(P_new - P).sum())
        P = P_new
        if residual <= tol:
            return ScoreVector("pagerank", g.nodes, P, it, residual, gamma, source)
    raise ConvergenceError("PageRank did not converge", int(max_iter), residual)


def extended_pagerank(g: IONetwork, gamma: float = DEFAULT_GAMMA, lam=None,
                      tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> ScoreVector:
    """Power iteration for the auxiliary-weighted PageRank, started at lambda/sum(lambda).

    ``lam`` accepts anything :func:`auxiliary_vector` does; ``None`` is uniform.
    """
    source = lam if isinstance(lam, str) else ("uniform" if lam is None else "user")
    return _pagerank(g, gamma, auxiliary_vector(g, lam), tol, max_iter, False, source)


def weighted_pagerank(g: IONetwork, gamma: float = DEFAULT_GAMMA, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> ScoreVector:
    return extended_pagerank(g, gamma, None, tol, max_iter)


def standard_pagerank(g: IONetwork, gamma: float = DEFAULT_GAMMA, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> ScoreVector:
    """Unweighted PageRank: edge indicators over out-degrees, uniform teleportation."""
    return _pagerank(g, gamma, np.ones(g.n_nodes), tol, max_iter, True, "uniform")


def pagerank_residual(g: IONetwork, P, gamma: float, lam=None, binary: bool = False) -> float:
    """L1 distance between ``P`` and one application of the fixed-point map."""
    lam = auxiliary_vector(g, lam)
    share, dangling = _transition(g, binary)
    P = np.asarray(P, dtype=float)
    return float(np.abs(_pagerank_step(P, g.sources, g.targets, share, dangling,
                                       lam / lam.sum(), gamma) - P).sum())


def weighted_hits(g: IONetwork, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
                  ) -> tuple[ScoreVector, ScoreVector]:
    """Hub and authority scores on the weighted adjacency matrix.

    Alternates ``a <- W^T h`` and ``h <- W a`` from a uniform hub vector,
    rescaling each to sum to one, until both change by at most ``tol`` (L1).
    """
    _check_common(None, tol, max_iter)
    if g.n_edges == 0:
        raise DegenerateError("degenerate HITS: network has no edges")
    n = g.n_nodes
    src, tgt, w = g.sources, g.targets, g.weights
    h = np.full(n, 1.0 / n)
    a = np.zeros(n)
    residual = math.inf
    for it in range(1, int(max_iter) + 1):
        a_raw = np.bincount(tgt, weights=w * h[src], minlength=n)
        total = a_raw.sum()
        if not total > 0:
            raise DegenerateError("degenerate HITS: authority vector vanished")
        a_new = a_raw / total
        h_raw = np.bincount(src, weights=w * a_new[tgt], minlength=n)
        total = h_raw.sum()
        if not total > 0:
            raise DegenerateError("degenerate HITS: hub vector vanished")
        h_new = h_raw / total
        residual = max(float(np.abs(a_new - a).sum()), float(np.abs(h_new - h).sum()))
        a, h = a_new, h_new
        if residual <= tol:
            return (ScoreVector("hub", g.nodes, h, it, residual),
                    ScoreVector("authority", g.nodes, a, it, residual))
    raise ConvergenceError("HITS did not converge", int(max_iter), residual)


def top_k(s: ScoreVector, k: int) -> RankTable:
    """The ``k`` best-scoring nodes; exact ties go to the smaller node code."""
    n = len(s.nodes)
    if not 1 <= k <= n:
        raise ParameterError(f"k must lie in [1, {n}], got {k}")
    order = sorted(range(n), key=lambda i: (-s.scores[i], s.nodes[i]))[:k]
    return RankTable(tuple((r, s.nodes[i], float(s.scores[i])) for r, i in enumerate(order, start=1)))
