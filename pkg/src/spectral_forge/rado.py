"""Rank-r spectral surgery: replace r known eigenvalues of A via A + XC."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numkit import (QR_MAX_DIM, EigenPair, Spectrum, as_matrix, as_square,
                     is_symmetric, max_abs, qr_eigs_small)

PAIR_RESIDUAL = 1e-8
ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class RadoInput:
    """A with its full spectrum, r of its eigenpairs and an r x n coupling C.

    The pairs' eigenvalues must be the first r entries of `full_spectrum`.
    """

    a: np.ndarray
    full_spectrum: Spectrum
    pairs: Sequence[EigenPair]
    c: np.ndarray

    def __post_init__(self):
        a = as_square(self.a, "a")
        n = a.shape[0]
        c = as_matrix(self.c, "c")
        r = len(self.pairs)
        if not 1 <= r <= n:
            raise ValueError(f"need 1 <= r <= n eigenpairs, got r={r}, n={n}")
        if r > QR_MAX_DIM:
            raise ValueError(f"r={r} exceeds the small eigensolver limit {QR_MAX_DIM}")
        if c.shape != (r, n):
            raise ValueError(f"c must be {r}x{n}, got {c.shape[0]}x{c.shape[1]}")
        if len(self.full_spectrum) != n:
            raise ValueError(f"full_spectrum has {len(self.full_spectrum)} values, expected {n}")
        bound = PAIR_RESIDUAL * (1.0 + max_abs(a))
        head = self.full_spectrum.values[:r]
        for i, pair in enumerate(self.pairs):
            if pair.vector.size != n:
                raise ValueError(f"pair {i} has length {pair.vector.size}, expected {n}")
            res = pair.residual(a)
            if res > bound:
                raise ValueError(f"pair {i} is not an eigenpair of a (residual {res:.3g} > {bound:.3g})")
            if abs(head[i] - pair.value) > PAIR_RESIDUAL * (1.0 + abs(pair.value)):
                raise ValueError(f"pair {i} value {pair.value} is not full_spectrum[{i}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "pairs", tuple(self.pairs))

    @property
    def x(self) -> np.ndarray:
        return np.column_stack([p.vector for p in self.pairs])


@dataclass(frozen=True)
class RadoResult:
    updated: np.ndarray
    predicted: Spectrum
    small: np.ndarray


def rado_update(inp: RadoInput) -> RadoResult:
    """A + XC has eigenvalues eig(Lambda + CX) plus the untouched lambda_{r+1..n}."""
    x = inp.x
    r = x.shape[1]
    updated = inp.a + x @ inp.c
    lam = np.array([p.value for p in inp.pairs])
    small = np.diag(lam) + inp.c @ x
    gammas = qr_eigs_small(small)
    predicted = Spectrum.concat([gammas, inp.full_spectrum.values[r:]])
    return RadoResult(updated, predicted, small)


def symmetric_rado(a, full_spectrum: Spectrum, pairs: Sequence[EigenPair], y) -> RadoResult:
    """A + X Y X^T for orthonormal eigenvectors X and symmetric Y.

    Same as ``rado_update`` with C = Y X^T; the small matrix reduces to
    Lambda + Y and the update stays symmetric.
    """
    a = as_square(a, "a")
    y = as_square(y, "y")
    if not is_symmetric(a):
        raise ValueError("symmetric_rado needs a symmetric a")
    if not is_symmetric(y):
        raise ValueError("symmetric_rado needs a symmetric y")
    x = np.column_stack([p.vector for p in pairs])
    gram = x.T @ x
    if np.max(np.abs(gram - np.eye(gram.shape[0]))) > ORTHONORMAL_TOL:
        raise ValueError("eigenvectors are not orthonormal")
    return rado_update(RadoInput(a, full_spectrum, pairs, y @ x.T))
