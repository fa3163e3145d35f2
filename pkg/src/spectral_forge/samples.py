"""Seeded random inputs: block systems, doubly stochastic matrices, regular graphs."""
from __future__ import annotations

import itertools

import numpy as np

from .blockforge import BlockSystem, lead_pair
from .graphspec import Graph, complete_graph, cycle_graph, empty_graph
from .numkit import EigenPair, Spectrum, jacobi_eigs

DEFECTIVE_BLOCK = np.array([[1.0, 1.0], [0.0, 1.0]])


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n))
    return jacobi_eigs(a + a.T)[1]


def random_symmetric_block(rng, n: int) -> np.ndarray:
    a = rng.uniform(-1, 1, size=(n, n))
    return a + a.T


def random_symmetric_system(rng, k_range=(2, 5), n_range=(1, 8), rho_range=(0.0, 2.0)) -> BlockSystem:
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    blocks = [random_symmetric_block(rng, int(rng.integers(n_range[0], n_range[1] + 1)))
              for _ in range(k)]
    rho = rng.uniform(*rho_range, size=(k, k))
    rho = np.triu(rho) + np.triu(rho, 1).T
    pairs, spectra = zip(*(lead_pair(b) for b in blocks))
    return BlockSystem(blocks, list(pairs), list(spectra), rho)


def triangular_block(rng, n: int):
    """Q T Q^T with T upper triangular: spectrum diag(T), eigenvector Q e_1."""
    t = np.triu(rng.uniform(-1, 1, size=(n, n)))
    q = random_orthogonal(rng, n)
    return q @ t @ q.T, EigenPair.normalized(t[0, 0], q[:, 0]), Spectrum(np.diagonal(t))


def random_general_system(rng, k_range=(2, 5), n_range=(1, 8), rho_range=(0.0, 2.0)) -> BlockSystem:
    """Nonsymmetric coupling over mixed blocks, always including [[1,1],[0,1]]."""
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    slot = int(rng.integers(k))
    blocks, pairs, spectra = [], [], []
    for j in range(k):
        if j == slot:
            b, p, s = DEFECTIVE_BLOCK, EigenPair(1.0, [1.0, 0.0]), Spectrum([1.0, 1.0])
        elif rng.random() < 0.3:
            b = random_symmetric_block(rng, int(rng.integers(n_range[0], n_range[1] + 1)))
            p, s = lead_pair(b)
        else:
            b, p, s = triangular_block(rng, int(rng.integers(n_range[0], n_range[1] + 1)))
        blocks.append(b)
        pairs.append(p)
        spectra.append(s)
    rho = rng.uniform(*rho_range, size=(k, k))
    while np.allclose(rho, rho.T):
        rho = rng.uniform(*rho_range, size=(k, k))
    return BlockSystem(blocks, pairs, spectra, rho)


def birkhoff_matrix(rng, n: int, terms: int | None = None) -> np.ndarray:
    """Convex combination of random permutation matrices."""
    terms = terms or int(rng.integers(1, n + 2))
    weights = rng.dirichlet(np.ones(terms))
    out = np.zeros((n, n))
    for w in weights:
        out[np.arange(n), rng.permutation(n)] += w
    return out


def defective_doubly_stochastic() -> np.ndarray:
    """J/3 plus a nilpotent rank-one term: eigenvalues 1, 0, 0 with one Jordan block."""
    return np.array([[1 / 2, 1 / 2, 0.0],
                     [1 / 6, 1 / 6, 2 / 3],
                     [1 / 3, 1 / 3, 1 / 3]])


def random_regular_graph(rng, max_n: int = 6) -> Graph:
    kind = rng.choice(["cycle", "complete", "empty"])
    if kind == "cycle":
        return cycle_graph(int(rng.integers(3, max_n + 1)))
    if kind == "complete":
        return complete_graph(int(rng.integers(1, max_n + 1)))
    return empty_graph(int(rng.integers(1, max_n + 1)))


def permutation_matrices(n: int):
    for p in itertools.permutations(range(n)):
        m = np.zeros((n, n))
        m[np.arange(n), p] = 1.0
        yield m
