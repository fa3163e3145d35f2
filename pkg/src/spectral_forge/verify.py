"""
Independent checks of predicted spectra and constructed matrices.

Symmetric matrices are checked against a full Jacobi eigendecomposition.
Nonsymmetric ones are never fully eigendecomposed: each predicted value
gamma is certified by a small |det(M - gamma I)| and, in audits, by a small
estimate of the least singular value of M - gamma I.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .blockforge import BlockSystem, build_big
from .dstoch import is_doubly_stochastic
from .numkit import (Spectrum, as_square, canonical_order, is_symmetric, jacobi_eigs,
                     lu_det_shifts, max_abs, min_singular_estimates)
from .nonneg import check_nonnegative

DEFAULT_TOL = 1e-8
DET_TOL_SCALE = 1e-6
NONSYMMETRIC_MAX_DIM = 128


@dataclass
class MatchReport:
    matched: bool
    max_pair_distance: float
    pairing: list[tuple[int, int]] = field(default_factory=list)
    residuals: Optional[list[float]] = None
    bound: Optional[float] = None
    sigma_min: Optional[list[float]] = None


def _values(s) -> np.ndarray:
    return s.values if isinstance(s, Spectrum) else np.asarray(s, dtype=complex).reshape(-1)


def match_spectra(predicted, oracle, tol: float = DEFAULT_TOL) -> MatchReport:
    """Greedy nearest-neighbour pairing of two equal-length eigenvalue lists.

    Both lists are put in canonical order first; each predicted value then
    takes the closest unused oracle value (lowest index on ties).
    """
    p, o = _values(predicted), _values(oracle)
    if p.size != o.size:
        raise ValueError(f"cannot match {p.size} predicted values against {o.size} oracle values")
    po, oo = canonical_order(p), canonical_order(o)
    used = np.zeros(o.size, dtype=bool)
    pairing = []
    worst = 0.0
    for i in po:
        d = np.abs(o[oo] - p[i])
        d[used] = np.inf
        j = int(np.argmin(d))
        used[j] = True
        worst = max(worst, float(d[j]))
        pairing.append((int(i), int(oo[j])))
    return MatchReport(worst <= tol, worst, pairing)


def det_bound(m: np.ndarray, tol_scale: float = DET_TOL_SCALE) -> float:
    return tol_scale * (1.0 + max_abs(m)) ** m.shape[0]


def certify_eigenvalues(m, candidates, tol_scale: float = DET_TOL_SCALE,
                        sigma_tol: Optional[float] = None) -> MatchReport:
    """Accept each candidate whose |det(m - gamma I)| is within the scaled bound.

    With `sigma_tol`, also require sigma_min(m - gamma I) <= sigma_tol * (1 + max|m|).
    """
    m = as_square(m)
    if m.shape[0] > NONSYMMETRIC_MAX_DIM:
        raise ValueError(f"determinant certification is capped at dimension {NONSYMMETRIC_MAX_DIM}")
    z = _values(candidates)
    if z.size == 0:
        return MatchReport(True, 0.0, [], [], det_bound(m, tol_scale))
    res = np.abs(lu_det_shifts(m, z))
    bound = det_bound(m, tol_scale)
    ok = bool(np.all(res <= bound))
    sig = None
    if sigma_tol is not None:
        sig = min_singular_estimates(m, z)
        ok = ok and bool(np.all(sig <= sigma_tol * (1.0 + max_abs(m))))
        sig = sig.tolist()
    return MatchReport(ok, float(np.max(res)), [(i, i) for i in range(z.size)],
                       res.tolist(), bound, sig)


def spectrum_check(m, predicted, tol: float = DEFAULT_TOL) -> MatchReport:
    """Jacobi match when m is symmetric, determinant certification otherwise."""
    m = as_square(m)
    if len(_values(predicted)) != m.shape[0]:
        return MatchReport(False, float("inf"))
    if is_symmetric(m):
        return match_spectra(predicted, jacobi_eigs(m)[0], tol)
    return certify_eigenvalues(m, predicted, DET_TOL_SCALE, sigma_tol=tol)


# ---------------------------------------------------------------------------
# audit

@dataclass
class Check:
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ""


@dataclass
class AuditReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, value: float, limit: float, detail: str = ""):
        self.checks.append(Check(name, bool(passed), float(value), float(limit), detail))

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            line = f"{c.name}: {'pass' if c.passed else 'FAIL'} value={c.value:.6g} limit={c.limit:.6g}"
            if c.detail:
                line += f" ({c.detail})"
            lines.append(line)
        lines.append(f"audit: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def audit(matrix, predicted, *, system: Optional[BlockSystem] = None,
          symmetric: Optional[bool] = None, nonnegative: bool = False,
          doubly_stochastic: bool = False, adjacency: bool = False,
          perron_root: Optional[float] = None, energy_identity: Optional[float] = None,
          tol: float = DEFAULT_TOL) -> AuditReport:
    """Run every applicable check on a constructed matrix and its predicted spectrum.

    `system`, when given, is rebuilt and compared entrywise; it also sets
    the symmetry expectation unless `symmetric` is passed explicitly.
    `energy_identity` is an independently computed energy the predicted
    spectrum must reproduce.
    """
    m = as_square(matrix)
    vals = _values(predicted)
    n = m.shape[0]
    rep = AuditReport()
    scale = 1.0 + max_abs(m)

    if system is not None:
        ref = build_big(system)
        if ref.shape != m.shape:
            rep.add("construction", False, float("inf"), 0.0, f"shape {m.shape} != {ref.shape}")
        else:
            err = max_abs(m - ref)
            rep.add("construction", err <= 1e-12 * scale, err, 1e-12 * scale)
        if symmetric is None:
            symmetric = system.is_symmetric
    if symmetric:
        asym = max_abs(m - m.T)
        rep.add("symmetric", asym <= 1e-12, asym, 1e-12)
    if nonnegative or doubly_stochastic or adjacency:
        chk = check_nonnegative(m)
        worst = max(0.0, -chk.violation[2]) if chk.violation else 0.0
        rep.add("nonnegative", chk.ok, worst, 1e-12,
                "" if chk.ok else f"entry {chk.violation[:2]} is negative")
    if doubly_stochastic:
        ds = is_doubly_stochastic(m, 1e-10)
        rep.add("doubly_stochastic", ds.ok, ds.worst, 1e-10)
    if adjacency:
        bad = max_abs(np.minimum(np.abs(m), np.abs(m - 1)))
        loops = max_abs(np.diagonal(m)[None])
        rep.add("adjacency_01", bad == 0 and loops == 0 and is_symmetric(m, 0.0), bad + loops, 0.0)

    if vals.size != n:
        rep.add("spectrum", False, float("inf"), tol, f"{vals.size} predicted values for dimension {n}")
    else:
        tr = float(np.trace(m))
        diff = abs(vals.sum() - tr)
        lim = tol * (1.0 + float(np.sum(np.abs(vals))))
        rep.add("trace", diff <= lim, diff, lim)
        if is_symmetric(m):
            rpt = match_spectra(vals, jacobi_eigs(m)[0], tol)
            rep.add("spectrum", rpt.matched, rpt.max_pair_distance, tol, "jacobi match")
        else:
            rpt = certify_eigenvalues(m, vals, DET_TOL_SCALE, sigma_tol=tol)
            worst_sig = max(rpt.sigma_min) if rpt.sigma_min else 0.0
            rep.add("spectrum_det", rpt.max_pair_distance <= rpt.bound, rpt.max_pair_distance,
                    rpt.bound, "determinant residual")
            rep.add("spectrum_sigma", worst_sig <= tol * scale, worst_sig, tol * scale,
                    "least singular value of M - gamma I")
    if perron_root is not None and vals.size:
        top = float(np.max(np.abs(vals)))
        has = float(np.min(np.abs(vals - perron_root)))
        err = max(abs(top - perron_root), has)
        rep.add("perron", err <= tol, err, tol, f"root {perron_root:g}")
    if energy_identity is not None:
        e = float(np.sum(np.abs(vals)))
        err = abs(e - energy_identity)
        rep.add("energy_identity", err <= tol * n, err, tol * n)
    return rep
