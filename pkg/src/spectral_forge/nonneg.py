"""Nonnegative block constructions and the circulant spectrum realization."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .blockforge import AssembledSystem, BlockSystem, assemble
from .numkit import EigenPair, Spectrum, as_square, perron_pair

PERRON_MATCH = 1e-8


class NonnegCheck(NamedTuple):
    ok: bool
    violation: Optional[tuple[int, int, float]]


def check_nonnegative(m, tol: float = 1e-12) -> NonnegCheck:
    """True iff every entry is >= -tol; otherwise report the first offender."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    bad = np.argwhere(m < -tol)
    if bad.size == 0:
        return NonnegCheck(True, None)
    i, j = (int(t) for t in bad[0])
    return NonnegCheck(False, (i, j, float(m[i, j])))


def _perron_value(spec: Spectrum) -> float:
    if spec.perron_index is not None:
        return float(spec.perron.real)
    return float(np.max(spec.values.real))


def perron_system(blocks, spectra: Sequence[Spectrum], rho,
                  pairs: Optional[Sequence[EigenPair]] = None) -> BlockSystem:
    """BlockSystem over nonnegative blocks coupled through their Perron vectors.

    With rho >= 0 the assembled matrix is nonnegative.
    """
    blocks = [as_square(b, f"block {j}") for j, b in enumerate(blocks)]
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("coupling constants must be nonnegative")
    for j, b in enumerate(blocks):
        if not check_nonnegative(b, 0.0).ok:
            raise ValueError(f"block {j} has negative entries")
    if pairs is None:
        pairs = [perron_pair(b) for b in blocks]
    return BlockSystem(blocks, list(pairs), list(spectra), rho)


@dataclass(frozen=True)
class CirculantPlan:
    base_row: np.ndarray
    rho_full: np.ndarray

    @property
    def poly_coeffs(self) -> np.ndarray:
        """Coefficients of p(x), lowest degree first."""
        return self.base_row

    @property
    def circulant(self) -> np.ndarray:
        k = self.base_row.size
        i, j = np.indices((k, k))
        return self.base_row[(j - i) % k]


@dataclass(frozen=True)
class CirculantResult:
    plan: CirculantPlan
    assembled: AssembledSystem
    circulant_values: np.ndarray
    predicted: Spectrum


def plan_circulant(perron_roots: Sequence[float], rho_first_row: Sequence[float],
                   tol: float = 1e-12) -> CirculantPlan:
    """Coupling that turns the small matrix into a nonnegative circulant.

    The circulant has constant diagonal lambda_11 + rho_11, which fixes
    rho_jj = lambda_11 + rho_11 - lambda_1j for the other blocks.
    """
    lam = np.asarray(perron_roots, dtype=float)
    row = np.asarray(rho_first_row, dtype=float)
    k = lam.size
    if row.size != k:
        raise ValueError(f"rho_first_row has {row.size} entries, expected {k}")
    if np.any(row < 0):
        raise ValueError("rho_first_row entries must be nonnegative")
    base = row.copy()
    base[0] = lam[0] + row[0]
    diag = base[0] - lam
    if np.any(diag < -tol):
        j = int(np.argmin(diag))
        raise ValueError(
            f"circulant diagonal lambda_11 + rho_11 = {base[0]:g} is below the Perron root "
            f"{lam[j]:g} of block {j}; would need rho_{j + 1}{j + 1} = {diag[j]:g} < 0")
    i, j = np.indices((k, k))
    rho_full = row[(j - i) % k].astype(float)
    rho_full[np.diag_indices(k)] = np.maximum(diag, 0.0)
    return CirculantPlan(base, rho_full)


def circulant_values(coeffs) -> np.ndarray:
    """p(w^l) for l = 0..k-1 with w = exp(2 pi i / k)."""
    c = np.asarray(coeffs, dtype=float)
    k = c.size
    w = np.exp(2j * np.pi * np.arange(k) / k)
    return np.polynomial.polynomial.polyval(w, c)


def circulant_realize(block_spectra: Sequence[Spectrum], blocks, rho_first_row,
                      pairs: Optional[Sequence[EigenPair]] = None) -> CirculantResult:
    """Nonnegative matrix whose spectrum swaps each block's Perron root for p(w^l).

    `predicted` is grouped block by block: p(w^j) followed by the remaining
    eigenvalues of block j, with p(1) flagged as the Perron root.
    """
    lam = [_perron_value(s) for s in block_spectra]
    plan = plan_circulant(lam, rho_first_row)
    sys = perron_system(blocks, block_spectra, plan.rho_full, pairs)
    for j, (pair, root) in enumerate(zip(sys.pairs, lam)):
        if abs(pair.value - root) > PERRON_MATCH * (1.0 + abs(root)):
            raise ValueError(f"block {j}: Perron pair value {pair.value} != spectrum root {root}")
    assembled = assemble(sys)
    vals = circulant_values(plan.base_row)
    groups = []
    for j, (spec, root) in enumerate(zip(block_spectra, lam)):
        groups.append([vals[j]])
        groups.append(spec.without(root, PERRON_MATCH))
    return CirculantResult(plan, assembled, vals, Spectrum(Spectrum.concat(groups).values, 0))
