"""Weighted modularity, greedy agglomerative community detection, and AMI.

Two modularity variants are supported:

``directed``
    Q = (1/W_n) sum_ij (w_ij - s_i_out s_j_in / W_n) [h_i == h_j]
``symmetrized``
    classic undirected weighted modularity on w'_ij = w_ij + w_ji, whose
    node strengths are the total strengths of the directed network.

Both are evaluated through community-level aggregates: with E[a, b] the
share of weight running from community a to community b and out/in the
community shares of source/target strength, Q = sum_a E[a, a] - out_a in_a.
Merging a and b changes Q by E[a, b] + E[b, a] - out_a in_b - out_b in_a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import gammaln

from .errors import EmptyNetworkError, ParameterError, PartitionError
from .network import IONetwork

VARIANTS = ("directed", "symmetrized")
DEFAULT_VARIANT = "symmetrized"


@dataclass(frozen=True)
class Partition:
    """Node -> community labelling with labels 0..k-1.

    Labels are canonical: renumbered in order of first appearance along
    ``nodes``, so two partitions with the same blocks and node order
    compare equal.
    """

    nodes: tuple[str, ...]
    labels: tuple[int, ...]
    modularity: float | None = None

    def __post_init__(self):
        nodes = tuple(str(v) for v in self.nodes)
        if len(nodes) != len(self.labels):
            raise PartitionError("nodes and labels differ in length")
        if len(set(nodes)) != len(nodes):
            raise PartitionError("duplicate node in partition")
        remap: dict = {}
        labels = tuple(remap.setdefault(lab, len(remap)) for lab in self.labels)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_mapping(cls, assignment: Mapping, nodes: Iterable | None = None,
                     modularity: float | None = None) -> "Partition":
        nodes = tuple(str(v) for v in (assignment if nodes is None else nodes))
        assignment = {str(k): v for k, v in assignment.items()}
        missing = [v for v in nodes if v not in assignment]
        if missing:
            raise PartitionError(f"nodes without a community: {', '.join(missing)}")
        return cls(nodes, tuple(assignment[v] for v in nodes), modularity)

    @classmethod
    def from_blocks(cls, nodes: Iterable, blocks: Iterable[Iterable]) -> "Partition":
        assignment = {}
        for label, block in enumerate(blocks):
            for v in block:
                assignment[str(v)] = label
        return cls.from_mapping(assignment, nodes)

    @property
    def k(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    @property
    def assignment(self) -> dict[str, int]:
        return dict(zip(self.nodes, self.labels))

    def blocks(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.k)]
        for v, lab in zip(self.nodes, self.labels):
            out[lab].append(v)
        return out

    def aligned_labels(self, nodes: Sequence[str]) -> np.ndarray:
        """Labels listed in the order of ``nodes``; node sets must match."""
        if set(nodes) != set(self.nodes) or len(nodes) != len(self.nodes):
            raise PartitionError("partition does not cover the same node set")
        lookup = self.assignment
        return np.array([lookup[v] for v in nodes], dtype=np.int64)


def all_in_one(nodes: Iterable) -> Partition:
    nodes = tuple(nodes)
    return Partition(nodes, (0,) * len(nodes))


def singletons(nodes: Iterable) -> Partition:
    nodes = tuple(nodes)
    return Partition(nodes, tuple(range(len(nodes))))


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ParameterError(f"unknown modularity variant {variant!r}; choose from {VARIANTS}")


def _shares(g: IONetwork, variant: str):
    """Node-level (E, out, in) shares; E is dense n x n and sums to one."""
    W_n = g.total_weight
    if not W_n > 0:
        raise EmptyNetworkError("empty network: modularity needs positive total weight")
    W = g.weight_matrix()
    if variant == "directed":
        return W / W_n, g.out_strengths / W_n, g.in_strengths / W_n
    Ws = W + W.T
    s = g.total_strengths / (2.0 * W_n)
    return Ws / (2.0 * W_n), s, s


def modularity(g: IONetwork, p: Partition, variant: str = DEFAULT_VARIANT) -> float:
    _check_variant(variant)
    labels = p.aligned_labels(g.nodes)
    E, s_out, s_in = _shares(g, variant)
    k = p.k
    member = np.zeros((g.n_nodes, k))
    member[np.arange(g.n_nodes), labels] = 1.0
    e_within = np.einsum("ia,ij,ja->a", member, E, member)
    a_out = member.T @ s_out
    a_in = member.T @ s_in
    return float(math.fsum(e_within - a_out * a_in))


def greedy_communities(g: IONetwork, variant: str = DEFAULT_VARIANT) -> Partition:
    """Agglomerative modularity maximization in the style of Clauset-Newman-Moore.

    Starts from singletons and repeatedly merges the connected pair of
    communities with the largest modularity gain (ties: smallest label
    pair; a merged community keeps the smaller label).  Stops when no
    connected pair remains and returns the best partition seen.
    """
    _check_variant(variant)
    if g.n_nodes == 0:
        raise EmptyNetworkError("empty network")
    n = g.n_nodes
    E, s_out, s_in = _shares(g, variant)
    E = E.copy()
    out = np.array(s_out, dtype=float)
    inn = np.array(s_in, dtype=float)
    alive = np.ones(n, dtype=bool)
    labels = np.arange(n)

    best_labels = labels.copy()
    best_q = modularity(g, Partition(g.nodes, tuple(labels)), variant)
    q = best_q
    while True:
        idx = np.flatnonzero(alive)
        sub_E = E[np.ix_(idx, idx)]
        link = sub_E + sub_E.T
        gain = link - np.outer(out[idx], inn[idx]) - np.outer(inn[idx], out[idx])
        connected = np.triu(link > 0, k=1)
        if not connected.any():
            break
        # row-major scan of the upper triangle gives the lexicographic tie rule
        masked = np.where(connected, gain, -np.inf)
        flat = int(np.argmax(masked))
        ia, ib = divmod(flat, len(idx))
        a, b = int(idx[ia]), int(idx[ib])
        q += float(masked[ia, ib])
        E[a, :] += E[b, :]
        E[:, a] += E[:, b]
        E[b, :] = 0.0
        E[:, b] = 0.0
        out[a] += out[b]
        inn[a] += inn[b]
        out[b] = inn[b] = 0.0
        alive[b] = False
        labels[labels == b] = a
        if q > best_q:
            best_q = q
            best_labels = labels.copy()
    part = Partition(g.nodes, tuple(int(x) for x in best_labels))
    return Partition(part.nodes, part.labels, modularity(g, part, variant))


# -- adjusted mutual information ---------------------------------------------


def contingency(p: Partition, q: Partition) -> np.ndarray:
    lp = np.asarray(p.labels)
    lq = q.aligned_labels(p.nodes)
    table = np.zeros((p.k, int(lq.max()) + 1), dtype=np.int64)
    np.add.at(table, (lp, lq), 1)
    return table


def _entropy(counts: np.ndarray, N: int) -> float:
    c = counts[counts > 0].astype(float)
    return float(-math.fsum((c / N) * np.log(c / N)))


def mutual_information(table: np.ndarray) -> float:
    N = int(table.sum())
    a = table.sum(axis=1).astype(float)
    b = table.sum(axis=0).astype(float)
    i, j = np.nonzero(table)
    nij = table[i, j].astype(float)
    return float(math.fsum((nij / N) * np.log(N * nij / (a[i] * b[j]))))


def expected_mutual_information(table: np.ndarray) -> float:
    """Expected MI of two labelings under random permutation (hypergeometric model)."""
    N = int(table.sum())
    a = table.sum(axis=1)
    b = table.sum(axis=0)
    terms = []
    lg_N = gammaln(N + 1)
    for ai in a:
        for bj in b:
            lo = max(1, ai + bj - N)
            hi = min(ai, bj)
            if lo > hi:
                continue
            nij = np.arange(lo, hi + 1, dtype=float)
            log_p = (gammaln(ai + 1) + gammaln(bj + 1) + gammaln(N - ai + 1) + gammaln(N - bj + 1)
                     - lg_N - gammaln(nij + 1) - gammaln(ai - nij + 1) - gammaln(bj - nij + 1)
                     - gammaln(N - ai - bj + nij + 1))
            terms.extend((nij / N) * np.log(N * nij / (float(ai) * float(bj))) * np.exp(log_p))
    return float(math.fsum(terms))


def _same_blocks(p: Partition, q: Partition) -> bool:
    lq = q.aligned_labels(p.nodes)
    return Partition(p.nodes, tuple(int(x) for x in lq)).labels == p.labels


def ami(p: Partition, q: Partition) -> float:
    """Adjusted mutual information with the max-entropy normalizer.

    Identical partitions (up to relabelling) score exactly 1.  When the
    normalizer collapses to zero the score is 1 for identical partitions
    and 0 otherwise.
    """
    if set(p.nodes) != set(q.nodes):
        raise PartitionError("partitions cover different node sets")
    if _same_blocks(p, q):
        return 1.0
    table = contingency(p, q)
    N = int(table.sum())
    h_p = _entropy(table.sum(axis=1), N)
    h_q = _entropy(table.sum(axis=0), N)
    mi = mutual_information(table)
    emi = expected_mutual_information(table)
    denom = max(h_p, h_q) - emi
    if abs(denom) <= 1e-15:
        return 0.0
    return (mi - emi) / denom


@dataclass(frozen=True)
class AmiMatrix:
    row_ids: tuple[str, ...]
    col_ids: tuple[str, ...]
    values: np.ndarray


def ami_matrix(partitions: Sequence[tuple[str, Partition]]) -> AmiMatrix:
    ids = tuple(str(i) for i, _ in partitions)
    parts = [p for _, p in partitions]
    n = len(parts)
    M = np.ones((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            if set(parts[a].nodes) != set(parts[b].nodes):
                raise PartitionError(f"partitions {ids[a]!r} and {ids[b]!r} cover different node sets")
            M[a, b] = M[b, a] = ami(parts[a], parts[b])
    return AmiMatrix(ids, ids, M)


def ami_triangle(series_a: Sequence[tuple[str, Partition]],
                 series_b: Sequence[tuple[str, Partition]]) -> AmiMatrix:
    """Two-series layout: A-vs-A above the diagonal, B-vs-B below, A_t vs B_t on it."""
    if len(series_a) != len(series_b):
        raise ParameterError("both series must have the same length")
    A = ami_matrix(series_a).values
    B = ami_matrix(series_b).values
    T = len(series_a)
    M = np.empty((T, T))
    for t in range(T):
        for s in range(T):
            if t < s:
                M[t, s] = A[t, s]
            elif t > s:
                M[t, s] = B[t, s]
            else:
                pa, pb = series_a[t][1], series_b[t][1]
                if set(pa.nodes) != set(pb.nodes):
                    raise PartitionError(
                        f"partitions {series_a[t][0]!r} and {series_b[t][0]!r} cover different node sets"
                    )
                M[t, t] = ami(pa, pb)
    return AmiMatrix(tuple(i for i, _ in series_a), tuple(i for i, _ in series_b), M)
