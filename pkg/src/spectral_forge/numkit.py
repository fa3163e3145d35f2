"""
Dense linear algebra kernels used by every construction in the package.

Matrices are plain ``float64`` numpy arrays; ``as_matrix`` is the single
gate that validates shape and finiteness. The eigensolvers here are the
oracles the rest of the package is checked against:

  - ``jacobi_eigs``     cyclic Jacobi for symmetric matrices
  - ``qr_eigs_small``   Hessenberg + shifted QR for small general matrices
  - ``lu_det_complex``  det(m - shift*I) by complex LU, for residual checks
  - ``perron_pair``     shifted power iteration for nonnegative matrices
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

DEFAULT_TOL = 1e-10
SYMMETRY_TOL = 1e-12
QR_MAX_DIM = 64
JACOBI_MAX_SWEEPS = 100

_EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    """An iterative eigensolver ran out of iterations."""


# ---------------------------------------------------------------------------
# carriers
# ---------------------------------------------------------------------------

def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return `a` as a validated 2-D float64 array (non-empty, all finite)."""
    m = np.array(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_square(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_symmetric(m: np.ndarray, tol: float = SYMMETRY_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and bool(np.all(np.abs(m - m.T) <= tol))


def canonical_order(values) -> np.ndarray:
    """Indices sorting eigenvalues by real part desc, then imaginary part desc.

    Real parts are compared after rounding to 12 decimals so that conjugate
    pairs and numerically equal values group deterministically.
    """
    z = np.asarray(values, dtype=complex)
    re = np.round(z.real, 12) + 0.0
    return np.lexsort((-z.imag, -re))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicity, optionally marking the Perron root."""

    values: np.ndarray
    perron_index: Optional[int] = None

    def __post_init__(self):
        z = np.array(self.values, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(z)):
            raise ValueError("spectrum has non-finite values")
        z.setflags(write=False)
        object.__setattr__(self, "values", z)
        p = self.perron_index
        if p is not None:
            if not 0 <= p < z.size:
                raise ValueError(f"perron_index {p} out of range for {z.size} values")
            if np.any(np.abs(z) > abs(z[p]) + 1e-9):
                raise ValueError("value at perron_index is not of maximal modulus")

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    @property
    def real(self) -> np.ndarray:
        return self.values.real.copy()

    @property
    def perron(self) -> Optional[complex]:
        return None if self.perron_index is None else complex(self.values[self.perron_index])

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.values.imag) <= tol))

    def sorted(self) -> "Spectrum":
        order = canonical_order(self.values)
        perron = None
        if self.perron_index is not None:
            perron = int(np.nonzero(order == self.perron_index)[0][0])
        return Spectrum(self.values[order], perron)

    def without(self, value: complex, tol: float = 1e-8) -> "Spectrum":
        """Drop the single entry closest to `value`; it must lie within `tol`."""
        d = np.abs(self.values - value)
        i = int(np.argmin(d)) if d.size else -1
        if i < 0 or d[i] > tol:
            raise ValueError(f"no eigenvalue within {tol:g} of {value}")
        return Spectrum(np.delete(self.values, i))

    @classmethod
    def concat(cls, parts: Iterable["Spectrum | np.ndarray"]) -> "Spectrum":
        arrs = [np.asarray(p.values if isinstance(p, Spectrum) else p, dtype=complex).reshape(-1)
                for p in parts]
        return cls(np.concatenate(arrs) if arrs else np.zeros(0, dtype=complex))


@dataclass(frozen=True)
class EigenPair:
    """An eigenvalue with a unit-norm eigenvector."""

    value: float
    vector: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.vector, dtype=float).reshape(-1)
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise ValueError("eigenvector must be non-empty and finite")
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError(f"eigenvector norm {np.linalg.norm(v)!r} is not 1")
        v.setflags(write=False)
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "vector", v)

    @classmethod
    def normalized(cls, value: float, vector) -> "EigenPair":
        v = np.asarray(vector, dtype=float).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("zero eigenvector")
        return cls(value, v / nrm)

    def residual(self, m: np.ndarray) -> float:
        return float(np.linalg.norm(m @ self.vector - self.value * self.vector))


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def outer(u, v, scale: float = 1.0) -> np.ndarray:
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    if u.size == 0 or v.size == 0:
        raise ValueError("outer product of an empty vector")
    return scale * np.multiply.outer(u, v)


def direct_sum(blocks) -> np.ndarray:
    sizes = [b.shape[0] for b in blocks]
    out = np.zeros((sum(sizes), sum(sizes)))
    at = 0
    for b, s in zip(blocks, sizes):
        out[at:at + s, at:at + s] = b
        at += s
    return out


# ---------------------------------------------------------------------------
# LU determinants
# ---------------------------------------------------------------------------

def _lu_inplace(a: np.ndarray):
    """Batched LU with partial pivoting on a (batch, n, n) array, in place.

    Returns (perm, sign). Columns whose pivot is exactly zero are skipped,
    leaving a zero on the diagonal of U.
    """
    b, n, _ = a.shape
    idx = np.arange(b)
    perm = np.tile(np.arange(n), (b, 1))
    sign = np.ones(b)
    for k in range(n):
        piv = k + np.argmax(np.abs(a[:, k:, k]), axis=1)
        swap = piv != k
        if np.any(swap):
            rows = a[idx, k].copy()
            a[idx, k] = a[idx, piv]
            a[idx, piv] = rows
            pk = perm[idx, k].copy()
            perm[idx, k] = perm[idx, piv]
            perm[idx, piv] = pk
            sign[swap] *= -1
        if k + 1 == n:
            break
        pivot = a[:, k, k]
        safe = np.where(pivot == 0, 1.0, pivot)
        factors = np.where((pivot == 0)[:, None], 0.0, a[:, k + 1:, k] / safe[:, None])
        a[:, k + 1:, k] = factors
        a[:, k + 1:, k + 1:] -= factors[:, :, None] * a[:, k, None, k + 1:]
    return perm, sign


def lu_det(m) -> float:
    """Determinant of a real square matrix by LU with partial pivoting."""
    a = as_square(m).copy()[None]
    _, sign = _lu_inplace(a)
    return float(sign[0] * np.prod(np.diagonal(a[0])))


def lu_det_shifts(m, shifts) -> np.ndarray:
    """det(m - s*I) for every s in `shifts`, computed in complex arithmetic."""
    m = as_square(m)
    s = np.asarray(shifts, dtype=complex).reshape(-1)
    n = m.shape[0]
    a = np.repeat(m[None].astype(complex), s.size, axis=0)
    a[:, np.arange(n), np.arange(n)] -= s[:, None]
    _, sign = _lu_inplace(a)
    return sign * np.prod(np.diagonal(a, axis1=1, axis2=2), axis=1)


def lu_det_complex(m, shift: complex = 0.0) -> complex:
    """det(m - shift*I) via complex LU with partial pivoting."""
    return complex(lu_det_shifts(m, [shift])[0])


def min_singular_estimates(m, shifts, iters: int = 4) -> np.ndarray:
    """Estimate sigma_min(m - s*I) for each shift by inverse iteration on the LU factors."""
    m = as_square(m)
    s = np.asarray(shifts, dtype=complex).reshape(-1)
    n = m.shape[0]
    a = np.repeat(m[None].astype(complex), s.size, axis=0)
    a[:, np.arange(n), np.arange(n)] -= s[:, None]
    scale = max(max_abs(m), float(np.max(np.abs(s), initial=0.0)), 1.0)
    perm, _ = _lu_inplace(a)
    diag = np.diagonal(a, axis1=1, axis2=2)
    # exactly singular U: treat the zero pivot as roundoff sized
    tiny = (diag == 0)
    if np.any(tiny):
        a[:, np.arange(n), np.arange(n)] = np.where(tiny, _EPS * scale, diag)
    idx = np.arange(s.size)[:, None]
    x = np.ones((s.size, n), dtype=complex) / np.sqrt(n)
    growth = np.ones(s.size)
    for _ in range(iters):
        # solve (P^T L U) y = x
        y = x[idx, perm].copy()
        for i in range(n):
            y[:, i] -= np.einsum("bj,bj->b", a[:, i, :i], y[:, :i])
        for i in range(n - 1, -1, -1):
            y[:, i] = (y[:, i] - np.einsum("bj,bj->b", a[:, i, i + 1:], y[:, i + 1:])) / a[:, i, i]
        # solve (U^H L^H P) z = y
        w = y
        for i in range(n):
            w[:, i] = (w[:, i] - np.einsum("bj,bj->b", np.conj(a[:, :i, i]), w[:, :i])) / np.conj(a[:, i, i])
        for i in range(n - 1, -1, -1):
            w[:, i] -= np.einsum("bj,bj->b", np.conj(a[:, i + 1:, i]), w[:, i + 1:])
        z = np.empty_like(w)
        z[idx, perm] = w
        nrm = np.linalg.norm(z, axis=1)
        growth = nrm
        x = z / np.where(nrm == 0, 1.0, nrm)[:, None]
    with np.errstate(divide="ignore"):
        return np.where(growth > 0, 1.0 / np.sqrt(growth), np.inf)


# ---------------------------------------------------------------------------
# symmetric eigensolver
# ---------------------------------------------------------------------------

def _round_robin(n: int):
    """Rounds of disjoint index pairs covering every pair once (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        rounds.append((np.array(players[:half]), np.array(players[half:][::-1])))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigs(m, tol: float = DEFAULT_TOL):
    """Eigen-decompose a symmetric matrix by cyclic Jacobi rotations.

    Each round applies n/2 disjoint rotations at once (round-robin
    ordering), so a sweep costs n-1 dense products.

    Returns (Spectrum sorted descending, V) with columns of V the matching
    orthonormal eigenvectors.
    """
    a = as_square(m)
    if not is_symmetric(a):
        raise ValueError("jacobi_eigs needs a symmetric matrix "
                         f"(max asymmetry {max_abs(a - a.T):.3g})")
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    size = n + (n % 2)
    work = np.zeros((size, size))
    work[:n, :n] = a
    v = np.eye(size)
    frob = np.linalg.norm(a)
    stop = max(tol * 1e-2, 10 * size * _EPS) * frob
    rounds = _round_robin(size) if size > 1 else []
    off_mask = ~np.eye(size, dtype=bool)

    def off(x):
        return np.sqrt(np.sum(x[off_mask] ** 2))

    sweeps = 0
    while off(work) > stop:
        if sweeps == JACOBI_MAX_SWEEPS:
            raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
        for p, q in rounds:
            apq = work[p, q]
            app = work[p, p]
            aqq = work[q, q]
            active = np.abs(apq) > 1e-300
            safe = np.where(active, apq, 1.0)
            tau = (aqq - app) / (2.0 * safe)
            t = np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(tau == 0, 1.0, t)
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            g = np.eye(size)
            g[p, p] = c
            g[q, q] = c
            g[p, q] = s
            g[q, p] = -s
            work = g.T @ work @ g
            v = v @ g
        sweeps += 1

    lam = np.diagonal(work)[:n].copy()
    # a padded coordinate never rotates, so it stays out of the first n columns
    vecs = v[:n, :n]
    order = np.argsort(-lam, kind="stable")
    return Spectrum(lam[order].astype(complex)), vecs[:, order]


# ---------------------------------------------------------------------------
# small general eigensolver
# ---------------------------------------------------------------------------

def hessenberg(m) -> np.ndarray:
    """Upper Hessenberg form of `m` by Householder similarity transforms."""
    h = np.array(m, dtype=complex)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        x[0] += phase * alpha
        x /= np.linalg.norm(x)
        h[k + 1:, :] -= 2.0 * np.outer(x, np.conj(x) @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ x, np.conj(x))
        h[k + 2:, k] = 0.0
    return h


def _eig2(a, b, c, d):
    half_tr = 0.5 * (a + d)
    disc = np.sqrt(complex(0.25 * (a - d) ** 2 + b * c))
    return half_tr + disc, half_tr - disc


def _polish(a: np.ndarray, vals: np.ndarray, steps: int = 3) -> np.ndarray:
    """Newton steps on det(a - gI), using d/dg log det = -tr((a - gI)^-1).

    A step is kept only when it is tiny and lowers |det|, which leaves clustered
    or defective eigenvalues where QR put them.
    """
    n = a.shape[0]
    eye = np.eye(n)
    limit = 1e-8 * (1.0 + max_abs(a))
    out = vals.copy()
    for i, g in enumerate(vals):
        best = abs(lu_det_complex(a, g))
        for _ in range(steps):
            if best == 0.0:
                break
            try:
                t = np.trace(np.linalg.solve(a - g * eye, eye))
            except np.linalg.LinAlgError:
                break
            if not np.isfinite(t) or t == 0:
                break
            step = 1.0 / t
            if abs(step) > limit:
                break
            d = abs(lu_det_complex(a, g + step))
            if d >= best:
                break
            g, best = g + step, d
        out[i] = g
    return out


def qr_eigs_small(m) -> Spectrum:
    """All eigenvalues of a small general matrix (complex in general).

    Hessenberg reduction followed by single-shift QR in complex arithmetic
    with Wilkinson shifts, deflating 1x1 and 2x2 trailing blocks.
    """
    a = as_square(m)
    n = a.shape[0]
    if n > QR_MAX_DIM:
        raise ValueError(f"qr_eigs_small handles dimension <= {QR_MAX_DIM}, got {n}")
    h = hessenberg(a)
    out = []
    hi = n - 1
    its = 0
    since_deflation = 0
    budget = 30 * n
    while hi >= 0:
        # locate the start of the unreduced trailing block
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            if sub <= _EPS * (abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])) or sub < 1e-300:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            out.append(h[hi, hi])
            hi -= 1
            since_deflation = 0
            continue
        if lo == hi - 1:
            out.extend(_eig2(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi]))
            hi -= 2
            since_deflation = 0
            continue
        if its >= budget:
            raise ConvergenceError(f"QR iteration did not converge in {budget} steps")
        its += 1
        since_deflation += 1
        if since_deflation % 11 == 0:
            mu = h[hi, hi] + abs(h[hi, hi - 1]) * (0.75 + 0.4375j)
        else:
            e1, e2 = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
            mu = e1 if abs(e1 - h[hi, hi]) <= abs(e2 - h[hi, hi]) else e2
        blk = h[lo:hi + 1, lo:hi + 1]
        k = blk.shape[0]
        blk[np.arange(k), np.arange(k)] -= mu
        rots = []
        for i in range(k - 1):
            x, y = blk[i, i], blk[i + 1, i]
            r = np.hypot(abs(x), abs(y))
            if r == 0:
                c, s = 1.0, 0.0
            else:
                c, s = x / r, y / r
            g = np.array([[np.conj(c), np.conj(s)], [-s, c]])
            blk[i:i + 2, i:] = g @ blk[i:i + 2, i:]
            rots.append(g)
        for i, g in enumerate(rots):
            blk[:i + 2, i:i + 2] = blk[:i + 2, i:i + 2] @ np.conj(g.T)
        blk[np.arange(k), np.arange(k)] += mu
        h[lo:hi + 1, lo:hi + 1] = blk

    vals = _polish(a, np.array(out, dtype=complex))
    scale = 1.0 + max_abs(a)
    if is_symmetric(a):
        vals = vals.real.astype(complex)
    else:
        vals.imag[np.abs(vals.imag) <= 8 * _EPS * scale] = 0.0
    return Spectrum(vals).sorted()


# ---------------------------------------------------------------------------
# Perron root
# ---------------------------------------------------------------------------

def perron_pair(m, tol: float = DEFAULT_TOL, max_iter: int = 10_000) -> EigenPair:
    """Perron root and unit Perron vector of a nonnegative matrix.

    Power iteration on m + c*I with c = 1 + max(diag m), started from the
    all-ones vector. Raises ConvergenceError when the residual does not
    drop below `tol`; the caller must then supply the pair explicitly.
    """
    a = as_square(m)
    if np.any(a < 0):
        raise ValueError("perron_pair needs an entrywise nonnegative matrix")
    n = a.shape[0]
    shifted = a + (1.0 + float(np.max(np.diagonal(a)))) * np.eye(n)
    v = np.ones(n) / np.sqrt(n)
    for _ in range(max_iter):
        mv = a @ v
        r = float(v @ mv)
        if np.linalg.norm(mv - r * v) <= tol:
            break
        w = shifted @ v
        v = w / np.linalg.norm(w)
    else:
        raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")
    if np.any(v < -tol):
        raise ConvergenceError("power iteration produced a vector with negative entries")
    return EigenPair.normalized(max(r, 0.0), np.maximum(v, 0.0))
