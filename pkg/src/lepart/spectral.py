"""Exact observables of the rooted-forest measure via dense linear algebra.

The measure on spanning rooted forests of a weighted digraph G with killing
rate q > 0 puts mass q^{#roots} * prod(edge weights) on each forest; its
normalizing constant is det(qI - L) with L the graph Laplacian. Roots form a
determinantal process with kernel q(qI - L)^{-1}, and two-point block
separation probabilities on trees reduce to partition functions of edge-cut
components.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError, StructureError
from .graphs import WeightedDigraph, is_tree, laplacian, tree_path
from .logvalue import LogValue

__all__ = [
    "partition_function",
    "GreenKernel",
    "green_kernel",
    "roots_marginal",
    "laplacian_spectrum",
    "expected_root_count",
    "hitting_prob",
    "tree_correlation_adjacent",
    "tree_correlation",
    "tree_correlation_profile",
    "TreePairCorrelation",
    "MAX_PATH_EDGES",
]

#: Separation probabilities on trees are exact up to this many path edges.
MAX_PATH_EDGES = 30


def _check_q(q: float) -> None:
    if not q > 0:
        raise ParameterError(f"killing rate must be positive, got q={q}")


def _logdet_shifted(L: np.ndarray, q: float) -> LogValue:
    """det(qI - L) as a LogValue, via LU with partial pivoting."""
    sign, logabs = np.linalg.slogdet(q * np.eye(L.shape[0]) - L)
    if sign == 0:
        raise NumericError(f"singular matrix qI - L at q={q}")
    return LogValue.from_log(float(logabs), int(sign))


def partition_function(g: WeightedDigraph, q: float) -> LogValue:
    """Normalizing constant det(qI - L) of the forest measure, in log space."""
    _check_q(q)
    value = _logdet_shifted(laplacian(g), q)
    if value.sign <= 0:
        raise NumericError(f"partition function came out nonpositive at q={q}")
    return value


@dataclass(frozen=True)
class GreenKernel:
    """The matrix q(qI - L)^{-1} at killing rate q.

    Row v is the distribution of the killed walk's death position started at
    v, so rows sum to 1 and entries lie in [0, 1]. Principal minors give the
    probability that a vertex set is contained in the root set.
    """

    matrix: np.ndarray
    q: float


def green_kernel(g: WeightedDigraph, q: float) -> GreenKernel:
    _check_q(q)
    M = q * np.eye(g.n) - laplacian(g)
    try:
        K = np.linalg.solve(M, q * np.eye(g.n))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"failed to invert qI - L at q={q}: {exc}") from exc
    return GreenKernel(K, q)


def roots_marginal(kernel: GreenKernel, vertices) -> float:
    """Probability that every vertex of the set is a root: det of the minor."""
    idx = sorted(set(int(v) for v in vertices))
    if not idx:
        raise ParameterError("need a nonempty vertex set")
    sub = kernel.matrix[np.ix_(idx, idx)]
    return float(np.linalg.det(sub))


def laplacian_spectrum(g: WeightedDigraph) -> np.ndarray:
    """Eigenvalues of -L sorted ascending (real parts when non-symmetric)."""
    L = laplacian(g)
    if g.is_symmetric:
        vals = np.linalg.eigvalsh(-L)
    else:
        vals = np.real(np.linalg.eigvals(-L))
    return np.sort(vals)


def expected_root_count(g: WeightedDigraph, q: float) -> float:
    """Mean number of roots: sum of q/(q + lambda_i) over the spectrum of -L."""
    _check_q(q)
    lam = laplacian_spectrum(g)
    return float(np.sum(q / (q + lam)))


def hitting_prob(g: WeightedDigraph, x: int, y: int, q: float) -> float:
    """P_x(walk hits y before an independent exponential killing time of rate q).

    Solves, over vertices v != y,
    ``(q + W(v)) h(v) = sum_{z != y} w(v, z) h(z) + w(v, y)``
    with W(v) the total out-weight, and returns h(x).
    """
    _check_q(q)
    if x == y:
        raise ParameterError("need two distinct vertices")
    others = [v for v in range(g.n) if v != y]
    pos = {v: i for i, v in enumerate(others)}
    A = np.zeros((len(others), len(others)))
    b = np.zeros(len(others))
    for i, v in enumerate(others):
        A[i, i] = q + g.out_weight[v]
        for z, w in g.out[v].items():
            if z == y:
                b[i] += w
            else:
                A[i, pos[z]] -= w
    h = np.linalg.solve(A, b)
    return float(h[pos[x]])


def _require_tree(g: WeightedDigraph) -> None:
    if not is_tree(g):
        raise StructureError("operation requires a tree (as an undirected graph)")


def tree_correlation_adjacent(g: WeightedDigraph, x: int, y: int, q: float) -> float:
    """P(x and y fall in different trees), for adjacent vertices of a tree.

    Computed from the two killed-walk hitting probabilities p = P_x(hit y
    first) and r = P_y(hit x first) as (1 - p - r + pr) / (1 - pr).
    """
    _check_q(q)
    _require_tree(g)
    if g.weight(x, y) == 0.0 and g.weight(y, x) == 0.0:
        raise ParameterError(f"vertices {x} and {y} are not adjacent")
    p = hitting_prob(g, x, y, q)
    r = hitting_prob(g, y, x, q)
    return (1.0 - p - r + p * r) / (1.0 - p * r)


class TreePairCorrelation:
    """Exact two-point separation probability on a tree, reusable across q.

    Cutting the d path edges between x and y splits the tree into d+1 pieces,
    one per path vertex. The probability that x and y share a tree is an
    alternating sum over nonempty cut subsets of products of component
    partition functions; grouping subsets by their segments turns that sum
    into a quadratic-time recursion over contiguous piece ranges, which is
    what ``at`` evaluates. Building the object precomputes the segment
    Laplacians; each call then costs O(d^2) small determinants.
    """

    def __init__(self, g: WeightedDigraph, x: int, y: int):
        _require_tree(g)
        if x == y:
            raise ParameterError("need two distinct vertices")
        path = tree_path(g, x, y)
        self.d = len(path) - 1
        if self.d > MAX_PATH_EDGES:
            raise ParameterError(
                f"path distance {self.d} exceeds the exact-method cap {MAX_PATH_EDGES}; "
                "use closed forms or Monte Carlo"
            )
        self.path = path
        L = laplacian(g)
        piece = self._pieces(g, path)
        # Segment (a, b): the component spanning path vertices a..b once the
        # boundary path edges are cut. Its Laplacian is the submatrix of L
        # with the cut edge weights added back on the boundary diagonal.
        self._segments: dict[tuple[int, int], np.ndarray] = {}
        for a in range(self.d + 1):
            members: list[int] = []
            for b in range(a, self.d + 1):
                members.extend(piece[b])
                idx = np.array(sorted(members))
                sub = L[np.ix_(idx, idx)].copy()
                where = {v: i for i, v in enumerate(idx)}
                if a > 0:
                    za = path[a]
                    sub[where[za], where[za]] += g.weight(za, path[a - 1])
                if b < self.d:
                    zb = path[b]
                    sub[where[zb], where[zb]] += g.weight(zb, path[b + 1])
                self._segments[(a, b)] = sub
        self._L = L

    @staticmethod
    def _pieces(g: WeightedDigraph, path: list[int]) -> list[list[int]]:
        on_path = set(path)
        nbrs: list[set[int]] = [set() for _ in range(g.n)]
        for u, v, _ in g.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        pieces = []
        for j, z in enumerate(path):
            block = {z}
            stack = [z]
            while stack:
                v = stack.pop()
                for u in nbrs[v]:
                    # other path vertices are only reachable through cut edges
                    if u in block or u in on_path:
                        continue
                    block.add(u)
                    stack.append(u)
            pieces.append(sorted(block))
        return pieces

    def at(self, q: float) -> float:
        """Separation probability at killing rate q."""
        _check_q(q)
        d = self.d
        T: dict[tuple[int, int], LogValue] = {
            key: _logdet_shifted(sub, q) for key, sub in self._segments.items()
        }
        z_full = _logdet_shifted(self._L, q)
        # E[m] = signed sum over cut subsets of products of segment values
        # for the path prefix 0..m; E[d] is the connection measure.
        E: list[LogValue] = [LogValue.zero()] * (d + 1)
        for m in range(d + 1):
            acc = T[(0, m)]
            for a in range(1, m + 1):
                acc = acc - E[a - 1] * T[(a, m)]
            E[m] = acc
        u = ((z_full - E[d]) / z_full).to_float()
        if not -1e-8 <= u <= 1 + 1e-8:
            warnings.warn(
                f"tree correlation {u!r} left [0,1] beyond roundoff at q={q}",
                RuntimeWarning,
                stacklevel=2,
            )
        return min(1.0, max(0.0, u))


def tree_correlation(g: WeightedDigraph, x: int, y: int, q: float) -> float:
    """P(x and y fall in different trees) for any two vertices of a tree."""
    return TreePairCorrelation(g, x, y).at(q)


def tree_correlation_profile(g: WeightedDigraph, x: int, y: int, qs) -> np.ndarray:
    """Vectorized :func:`tree_correlation` over a grid of killing rates."""
    pair = TreePairCorrelation(g, x, y)
    return np.array([pair.at(float(q)) for q in qs])
