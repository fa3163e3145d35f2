"""
Block matrices coupled through one eigenvector per block.

Given blocks A_1..A_k, a unit eigenpair (lambda_j, u_j) of each, and a
k x k array rho, the big matrix has diagonal blocks A_j + rho_jj u_j u_j^T
and off-diagonal blocks rho_pq u_p u_q^T. Its spectrum is the union of
every block spectrum minus lambda_j, plus the eigenvalues of the k x k
matrix diag(lambda) + rho. Nothing here needs the blocks to be symmetric
or diagonalizable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numkit import (QR_MAX_DIM, EigenPair, Spectrum, as_matrix, as_square,
                     is_symmetric, jacobi_eigs, max_abs, qr_eigs_small)

PAIR_RESIDUAL = 1e-8
MATCH_TOL = 1e-8


@dataclass(frozen=True)
class BlockSystem:
    blocks: Sequence[np.ndarray]
    pairs: Sequence[EigenPair]
    spectra: Sequence[Spectrum]
    rho: np.ndarray

    def __post_init__(self):
        k = len(self.blocks)
        if k < 1:
            raise ValueError("need at least one block")
        if k > QR_MAX_DIM:
            raise ValueError(f"k={k} exceeds the coupling solver limit {QR_MAX_DIM}")
        if len(self.pairs) != k or len(self.spectra) != k:
            raise ValueError(f"got {k} blocks, {len(self.pairs)} pairs, {len(self.spectra)} spectra")
        blocks = tuple(as_square(b, f"block {j}") for j, b in enumerate(self.blocks))
        rho = as_matrix(self.rho, "rho")
        if rho.shape != (k, k):
            raise ValueError(f"rho must be {k}x{k}, got {rho.shape[0]}x{rho.shape[1]}")
        for j, (b, pair, spec) in enumerate(zip(blocks, self.pairs, self.spectra)):
            n = b.shape[0]
            if pair.vector.size != n:
                raise ValueError(f"block {j}: eigenvector length {pair.vector.size} != {n}")
            if len(spec) != n:
                raise ValueError(f"block {j}: spectrum has {len(spec)} values, expected {n}")
            bound = PAIR_RESIDUAL * (1.0 + max_abs(b))
            res = pair.residual(b)
            if res > bound:
                raise ValueError(f"block {j}: eigenpair residual {res:.3g} exceeds {bound:.3g}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "spectra", tuple(self.spectra))
        object.__setattr__(self, "rho", rho)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> list[int]:
        return [b.shape[0] for b in self.blocks]

    @property
    def is_symmetric(self) -> bool:
        return is_symmetric(self.rho) and all(is_symmetric(b) for b in self.blocks)


@dataclass(frozen=True)
class AssembledSystem:
    big: np.ndarray
    small: np.ndarray
    predicted: Spectrum


def coupling_matrix(sys: BlockSystem) -> np.ndarray:
    """The k x k matrix diag(lambda_1j) + rho."""
    return np.diag([p.value for p in sys.pairs]) + sys.rho


def build_big(sys: BlockSystem) -> np.ndarray:
    sizes = sys.sizes
    offs = np.concatenate([[0], np.cumsum(sizes)])
    big = np.zeros((offs[-1], offs[-1]))
    us = [p.vector for p in sys.pairs]
    for p in range(sys.k):
        for q in range(sys.k):
            blk = sys.rho[p, q] * np.multiply.outer(us[p], us[q])
            if p == q:
                blk = blk + sys.blocks[p]
            big[offs[p]:offs[p + 1], offs[q]:offs[q + 1]] = blk
    return big


def assemble(sys: BlockSystem) -> AssembledSystem:
    """Build the big and small matrices and the predicted spectrum.

    The predicted spectrum lists each block's retained eigenvalues in block
    order followed by the eigenvalues of the small matrix.
    """
    retained = []
    for j, (pair, spec) in enumerate(zip(sys.pairs, sys.spectra)):
        try:
            retained.append(spec.without(pair.value, MATCH_TOL))
        except ValueError:
            raise ValueError(f"block {j}: eigenvalue {pair.value} not found in its spectrum") from None
    small = coupling_matrix(sys)
    predicted = Spectrum.concat(retained + [qr_eigs_small(small)])
    return AssembledSystem(build_big(sys), small, predicted)


def fiedler2(a, a_spec: Spectrum, u: EigenPair, b, b_spec: Spectrum, v: EigenPair,
             rho: float, rho11: float = 0.0, rho22: float = 0.0) -> AssembledSystem:
    """Two symmetric blocks joined by rho u v^T, with optional diagonal shifts."""
    a = as_square(a, "a")
    b = as_square(b, "b")
    if not (is_symmetric(a) and is_symmetric(b)):
        raise ValueError("fiedler2 needs symmetric blocks")
    r = np.array([[rho11, rho], [rho, rho22]], dtype=float)
    return assemble(BlockSystem([a, b], [u, v], [a_spec, b_spec], r))


def chain_pattern_ok(rho: np.ndarray) -> bool:
    k = rho.shape[0]
    i, j = np.indices((k, k))
    return bool(np.all(rho[(i == j) | (np.abs(i - j) > 1)] == 0))


def chain(sys: BlockSystem) -> AssembledSystem:
    """Tridiagonal-by-blocks coupling: only consecutive blocks interact."""
    if not chain_pattern_ok(sys.rho):
        raise ValueError("chain coupling must have zero diagonal and zeros beyond the first off-diagonals")
    return assemble(sys)


def chain_rho(links: Sequence[float], lower: Sequence[float] | None = None) -> np.ndarray:
    """k x k chain coupling from the k-1 upper links (lower defaults to upper)."""
    up = np.asarray(links, dtype=float)
    lo = up if lower is None else np.asarray(lower, dtype=float)
    return np.diag(up, 1) + np.diag(lo, -1)


def lead_pair(block) -> tuple[EigenPair, Spectrum]:
    """Largest eigenpair and full spectrum of a symmetric block, via Jacobi.

    The eigenvector sign is fixed so its entries sum to a nonnegative value.
    """
    spec, vecs = jacobi_eigs(block)
    u = vecs[:, 0]
    if u.sum() < 0:
        u = -u
    return EigenPair.normalized(spec.values[0].real, u), spec


def from_symmetric(blocks, rho) -> BlockSystem:
    """BlockSystem for symmetric blocks, coupling through each top eigenvector."""
    pairs, spectra = zip(*(lead_pair(as_square(b)) for b in blocks))
    return BlockSystem(list(blocks), list(pairs), list(spectra), rho)
