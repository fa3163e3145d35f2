"""
Spectra and energies of graph joins built from regular graphs.

A d-regular graph on n vertices has Perron pair (d, ones/sqrt(n)). Coupling
parts i and j with rho_ij = sqrt(n_i n_j) makes every cross block all ones,
so the coupled block matrix is exactly the adjacency of the join and the
join's spectrum follows from the small k x k coupling matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .blockforge import BlockSystem, assemble, chain, chain_rho
from .numkit import EigenPair, Spectrum, as_square, jacobi_eigs

# cross blocks come out as sqrt(ni*nj) * (1/sqrt(ni)) * (1/sqrt(nj)), not exactly 1
ADJACENCY_ROUNDING = 1e-12


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph held as its 0/1 adjacency matrix."""

    adjacency: np.ndarray

    def __post_init__(self):
        a = as_square(self.adjacency, "adjacency")
        if np.any((a != 0) & (a != 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diagonal(a) != 0):
            raise ValueError("adjacency has loops (nonzero diagonal)")
        if np.any(a != a.T):
            raise ValueError("adjacency is not symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def spectrum(self) -> Spectrum:
        return jacobi_eigs(self.adjacency)[0]

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        a = np.zeros((n, n))
        seen: set = set()
        for u, v in edges:
            _add_edge(seen, n, u, v)
            a[u, v] = a[v, u] = 1.0
        return cls(a)

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency))
        return list(zip(i.tolist(), j.tolist()))


def _add_edge(seen: set, n: int, u: int, v: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    key = (min(u, v), max(u, v))
    if key in seen:
        raise ValueError(f"duplicate edge ({u}, {v})")
    seen.add(key)


@dataclass(frozen=True)
class RegularGraph:
    graph: Graph
    degree: int

    def __post_init__(self):
        deg = self.graph.degrees
        if not np.all(deg == deg[0]):
            raise ValueError(f"graph is not regular (degrees {sorted(set(deg.astype(int).tolist()))})")
        if deg[0] != self.degree:
            raise ValueError(f"graph is {int(deg[0])}-regular, not {self.degree}-regular")

    @classmethod
    def of(cls, graph: Graph) -> "RegularGraph":
        return cls(graph, int(graph.degrees[0]))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def perron(self) -> EigenPair:
        return EigenPair(float(self.degree), np.full(self.n, 1.0 / np.sqrt(self.n)))


@dataclass(frozen=True)
class JoinResult:
    joined: Graph
    predicted: Spectrum
    energy: float
    small: np.ndarray


def energy(s: Union[Spectrum, Sequence[complex], np.ndarray]) -> float:
    """Sum of the moduli of the eigenvalues."""
    vals = s.values if isinstance(s, Spectrum) else np.asarray(s, dtype=complex)
    return float(np.sum(np.abs(vals)))


# ---------------------------------------------------------------------------
# small graphs

def empty_graph(n: int) -> Graph:
    return Graph(np.zeros((n, n)))


def complete_graph(n: int) -> Graph:
    return Graph(np.ones((n, n)) - np.eye(n))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def path_eigenvalues(k: int) -> np.ndarray:
    """Eigenvalues 2 cos(j pi / (k+1)), j = 1..k, of the path on k vertices (descending)."""
    if k < 1:
        raise ValueError("path needs at least one vertex")
    return 2.0 * np.cos(np.arange(1, k + 1) * np.pi / (k + 1))


def permuted_copy(g: Graph, seed: int = 0) -> Graph:
    """P A P^T for a permutation drawn from `seed`; isomorphic to g."""
    perm = np.random.default_rng(seed).permutation(g.n)
    return Graph(g.adjacency[np.ix_(perm, perm)])


# ---------------------------------------------------------------------------
# joins

def _regular(parts) -> list[RegularGraph]:
    return [p if isinstance(p, RegularGraph) else RegularGraph.of(p) for p in parts]


def _system(parts: list[RegularGraph], rho: np.ndarray) -> BlockSystem:
    return BlockSystem([p.graph.adjacency for p in parts], [p.perron for p in parts],
                       [p.graph.spectrum() for p in parts], rho)


def _finish(big: np.ndarray, small: np.ndarray, predicted: Spectrum) -> JoinResult:
    adj = np.rint(big)
    if np.max(np.abs(big - adj)) > ADJACENCY_ROUNDING:
        raise AssertionError("coupled block matrix is not a 0/1 adjacency")
    predicted = Spectrum(predicted.values.real)
    return JoinResult(Graph(adj), predicted, energy(predicted), small)


def join_rho(sizes: Sequence[int]) -> np.ndarray:
    """Coupling sqrt(n_i n_j) off the diagonal, zero on it."""
    r = np.sqrt(np.multiply.outer(sizes, sizes).astype(float))
    np.fill_diagonal(r, 0.0)
    return r


def join_all(parts: Sequence[Union[RegularGraph, Graph]]) -> JoinResult:
    """Union of the parts plus every edge between different parts."""
    parts = _regular(parts)
    if not parts:
        raise ValueError("need at least one part")
    asm = assemble(_system(parts, join_rho([p.n for p in parts])))
    return _finish(asm.big, asm.small, asm.predicted)


def complete_multipartite(sizes: Sequence[int]) -> JoinResult:
    """K_{n_1,...,n_k}: spectrum of the k x k matrix sqrt(n_i n_j) (zero diagonal) plus zeros."""
    if any(s < 1 for s in sizes):
        raise ValueError("part sizes must be positive")
    return join_all([empty_graph(int(s)) for s in sizes])


def join_isomorphic_copies(g: Union[RegularGraph, Graph], spectrum: Spectrum, k: int,
                           seed: int = 0) -> JoinResult:
    """Join of k relabelled copies of a d-regular graph, spectrum in closed form.

    The spectrum is d + n(k-1) once, d - n with multiplicity k-1, and every
    non-Perron eigenvalue of g with multiplicity k. The copies after the
    first are random relabellings drawn from `seed`.
    """
    g = _regular([g])[0]
    n, d = g.n, g.degree
    if len(spectrum) != n:
        raise ValueError(f"spectrum has {len(spectrum)} values, graph has {n} vertices")
    if k < 1:
        raise ValueError("k must be positive")
    rest = spectrum.sorted().without(d, 1e-8).values.real
    rng = np.random.default_rng(seed)
    copies = [g.graph] + [permuted_copy(g.graph, int(rng.integers(2**31))) for _ in range(k - 1)]
    blocks = [c.adjacency for c in copies]
    big = np.ones((n * k, n * k))
    for j, b in enumerate(blocks):
        big[j * n:(j + 1) * n, j * n:(j + 1) * n] = b
    small = d * np.eye(k) + n * (np.ones((k, k)) - np.eye(k))
    values = np.concatenate([[d + n * (k - 1)], np.full(k - 1, float(d - n)), np.tile(rest, k)])
    predicted = Spectrum(values)
    return JoinResult(Graph(big), predicted, energy(predicted), small)


def chain_join(parts: Sequence[Union[RegularGraph, Graph]]) -> JoinResult:
    """Join consecutive parts only (G_j to G_{j+1})."""
    parts = _regular(parts)
    if not parts:
        raise ValueError("need at least one part")
    sizes = np.array([p.n for p in parts], dtype=float)
    asm = chain(_system(parts, chain_rho(np.sqrt(sizes[:-1] * sizes[1:]))))
    return _finish(asm.big, asm.small, asm.predicted)


# ---------------------------------------------------------------------------
# edge-list text format: "n m" then m lines "u v", 0-based

def parse_edge_list(text: str) -> Graph:
    lines = [(no, ln.split()) for no, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise ValueError("empty edge list")
    no, head = lines[0]
    if len(head) != 2:
        raise ValueError(f"line {no}: expected 'n m', got {' '.join(head)!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ValueError(f"line {no}: expected two integers") from None
    if len(lines) - 1 != m:
        raise ValueError(f"header declares {m} edges, found {len(lines) - 1}")
    if n < 0:
        raise ValueError(f"line {no}: vertex count must be nonnegative")
    edges: list[tuple[int, int]] = []
    seen: set = set()
    for no, parts in lines[1:]:
        if len(parts) != 2:
            raise ValueError(f"line {no}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {no}: vertex indices must be integers") from None
        try:
            _add_edge(seen, n, u, v)
        except ValueError as exc:
            raise ValueError(f"line {no}: {exc}") from None
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def read_edge_list(path: Union[str, Path]) -> Graph:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(g: Graph) -> str:
    edges = g.edges()
    return "".join([f"{g.n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])
