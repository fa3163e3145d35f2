"""
Joins of two doubly stochastic matrices with closed-form spectra.

Both joins couple T1 (m x m) and T2 (n x n, n >= m) through the
normalized all-ones vectors e_m, e_n, which are Perron vectors of any
doubly stochastic matrix. Neither needs T1 or T2 to be diagonalizable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .blockforge import BlockSystem, assemble
from .numkit import EigenPair, Spectrum, as_square

DS_TOL = 1e-10
Mode = Literal["scaled", "affine"]


class StochasticCheck(NamedTuple):
    ok: bool
    worst: float


def is_doubly_stochastic(m, tol: float = DS_TOL) -> StochasticCheck:
    """Entries >= -tol and every row and column sum within tol of 1.

    `worst` is the largest |sum - 1| over rows and columns.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.shape[0] != m.shape[1]:
        return StochasticCheck(False, float("inf"))
    worst = float(max(np.max(np.abs(m.sum(axis=0) - 1)), np.max(np.abs(m.sum(axis=1) - 1))))
    return StochasticCheck(bool(np.all(m >= -tol)) and worst <= tol, worst)


def ones_unit(n: int) -> np.ndarray:
    return np.full(n, 1.0 / np.sqrt(n))


@dataclass(frozen=True)
class DSJoinSpec:
    t1: np.ndarray
    t2: np.ndarray
    spec1: Spectrum
    spec2: Spectrum
    alpha: float
    rho: float
    mode: Mode = "scaled"

    def __post_init__(self):
        t1 = as_square(self.t1, "t1")
        t2 = as_square(self.t2, "t2")
        m, n = t1.shape[0], t2.shape[0]
        if m > n:
            raise ValueError(f"t1 must not be larger than t2 (m={m} > n={n}); swap them")
        if self.mode not in ("scaled", "affine"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.alpha < 0 or self.rho < 0:
            raise ValueError("alpha and rho must be nonnegative")
        if self.mode == "scaled" and self.alpha == 0 and self.rho == 0:
            raise ValueError("alpha and rho cannot both vanish in scaled mode")
        for name, t, s in (("t1", t1, self.spec1), ("t2", t2, self.spec2)):
            chk = is_doubly_stochastic(t)
            if not chk.ok:
                raise ValueError(f"{name} is not doubly stochastic (worst sum error {chk.worst:.3g})")
            if len(s) != t.shape[0]:
                raise ValueError(f"{name} spectrum has {len(s)} values, expected {t.shape[0]}")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def m(self) -> int:
        return self.t1.shape[0]

    @property
    def n(self) -> int:
        return self.t2.shape[0]


class DSJoin(NamedTuple):
    d: np.ndarray
    predicted: Spectrum


def _retained(spec: Spectrum) -> np.ndarray:
    return spec.without(1.0, 1e-8).values


def ds_join(spec: DSJoinSpec) -> DSJoin:
    if spec.mode == "affine":
        return ds_join_affine(spec)
    m, n, a, r = spec.m, spec.n, spec.alpha, spec.rho
    root = np.sqrt(m * n)
    scale = a + r * n / root
    em, en = ones_unit(m), ones_unit(n)
    top = np.hstack([a * spec.t1, r * np.outer(em, en)])
    bottom = np.hstack([r * np.outer(en, em), (a + r * (n - m) / root) * spec.t2])
    d = np.vstack([top, bottom]) / scale

    second = (a * root - r * m) / (a * root + r * n)
    f1 = a / scale
    f2 = (a * root + r * (n - m)) / (a * root + r * n)
    values = np.concatenate([[1.0, second], f1 * _retained(spec.spec1), f2 * _retained(spec.spec2)])
    return DSJoin(d, Spectrum(values, 0))


def ds_join_affine(spec: DSJoinSpec) -> DSJoin:
    m, n, a, r = spec.m, spec.n, spec.alpha, spec.rho
    root = np.sqrt(m * n)
    scale = 1.0 + a + r * n / root
    em, en = ones_unit(m), ones_unit(n)
    top = np.hstack([spec.t1 + a * np.outer(em, em), r * np.outer(em, en)])
    bottom = np.hstack([r * np.outer(en, em), spec.t2 + (a + r * (n - m) / root) * np.outer(en, en)])
    d = np.vstack([top, bottom]) / scale

    second = ((1 + a) * root - r * m) / ((1 + a) * root + r * n)
    retained = np.concatenate([_retained(spec.spec1), _retained(spec.spec2)])
    values = np.concatenate([[1.0, second], retained / scale])
    return DSJoin(d, Spectrum(values, 0))


def as_block_system(spec: DSJoinSpec) -> BlockSystem:
    """The same join written as a two-block coupled system (before rescaling)."""
    m, n, a, r = spec.m, spec.n, spec.alpha, spec.rho
    root = np.sqrt(m * n)
    pairs = [EigenPair(1.0, ones_unit(m)), EigenPair(1.0, ones_unit(n))]
    if spec.mode == "scaled":
        c2 = a + r * (n - m) / root
        blocks = [a * spec.t1, c2 * spec.t2]
        pairs = [EigenPair(a, ones_unit(m)), EigenPair(c2, ones_unit(n))]
        spectra = [Spectrum(a * spec.spec1.values), Spectrum(c2 * spec.spec2.values)]
        rho = np.array([[0.0, r], [r, 0.0]])
    else:
        blocks = [spec.t1, spec.t2]
        spectra = [spec.spec1, spec.spec2]
        rho = np.array([[a, r], [r, a + r * (n - m) / root]])
    return BlockSystem(blocks, pairs, spectra, rho)


def ds_join_via_blocks(spec: DSJoinSpec) -> DSJoin:
    """Build D through ``assemble``; the spectrum comes from the small-matrix route."""
    asm = assemble(as_block_system(spec))
    root = np.sqrt(spec.m * spec.n)
    scale = (spec.alpha if spec.mode == "scaled" else 1.0 + spec.alpha) + spec.rho * spec.n / root
    return DSJoin(asm.big / scale, Spectrum(asm.predicted.values / scale))
