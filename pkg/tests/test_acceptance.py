"""Acceptance gate: each criterion at its stated tolerance, one pass/fail line apiece.

Run under pytest (lines appear in the terminal summary) or directly with
`python3 tests/test_acceptance.py`.
"""
import time

import numpy as np
import pytest

from spectral_forge.blockforge import assemble, fiedler2
from spectral_forge.dstoch import DSJoinSpec, ds_join, is_doubly_stochastic
from spectral_forge.graphspec import (chain_join, complete_multipartite, cycle_graph, empty_graph,
                                      energy, join_all, join_isomorphic_copies)
from spectral_forge.nonneg import check_nonnegative, circulant_realize
from spectral_forge.numkit import Spectrum, jacobi_eigs, qr_eigs_small
from spectral_forge.samples import (birkhoff_matrix, defective_doubly_stochastic,
                                    random_general_system, random_regular_graph,
                                    random_symmetric_system)
from spectral_forge.verify import audit, certify_eigenvalues, match_spectra, spectrum_check

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def symmetric_systems():
    return [random_symmetric_system(np.random.default_rng(1000 + s)) for s in range(200)]


def general_systems():
    return [random_general_system(np.random.default_rng(s)) for s in range(100)]


def ds_cases():
    """100 seeded (t1, t2, alpha, rho) with m <= 6, m <= n <= 8, plus one defective t1."""
    out = []
    for s in range(100):
        rng = np.random.default_rng(5000 + s)
        m = int(rng.integers(1, 7))
        n = int(rng.integers(m, 9))
        t1, t2 = birkhoff_matrix(rng, m), birkhoff_matrix(rng, n)
        alpha, rho = rng.uniform(0, 2, size=2)
        out.append((t1, qr_eigs_small(t1), t2, qr_eigs_small(t2), alpha, rho))
    rng = np.random.default_rng(5999)
    t2 = birkhoff_matrix(rng, 6)
    out.append((defective_doubly_stochastic(), Spectrum([1.0, 0.0, 0.0]), t2, qr_eigs_small(t2),
                *rng.uniform(0, 2, size=2)))
    return out


def test_c01_symmetric_closure():
    systems = symmetric_systems()
    t0 = time.perf_counter()
    worst = 0.0
    for sys in systems:
        asm = assemble(sys)
        rpt = match_spectra(asm.predicted, jacobi_eigs(asm.big)[0], 1e-8)
        worst = max(worst, rpt.max_pair_distance)
    secs = time.perf_counter() - t0
    record(1, worst <= 1e-8 and secs < 10,
           f"200 symmetric systems, max pair distance {worst:.2e} <= 1e-8, {secs:.2f}s < 10s")


def test_c02_general_closure():
    systems = general_systems()
    t0 = time.perf_counter()
    bad, worst_ratio = [], 0.0
    for s, sys in enumerate(systems):
        assert any(b.shape == (2, 2) and np.array_equal(b, [[1, 1], [0, 1]]) for b in sys.blocks)
        assert not np.array_equal(sys.rho, sys.rho.T)
        asm = assemble(sys)
        rpt = certify_eigenvalues(asm.big, asm.predicted, 1e-6)
        worst_ratio = max(worst_ratio, rpt.max_pair_distance / rpt.bound)
        if not rpt.matched:
            bad.append(s)
    secs = time.perf_counter() - t0
    record(2, not bad and secs < 10,
           f"100 nonsymmetric systems with a defective block, worst |det|/bound {worst_ratio:.2e}, "
           f"failing seeds {bad}, {secs:.2f}s < 10s")


def test_c03_fiedler_reduction():
    mismatches = 0
    for s in range(50):
        sys = random_symmetric_system(np.random.default_rng(3000 + s), k_range=(2, 2))
        r = sys.rho[0, 1]
        sys0 = type(sys)(sys.blocks, sys.pairs, sys.spectra, np.array([[0.0, r], [r, 0.0]]))
        ref = assemble(sys0)
        got = fiedler2(sys.blocks[0], sys.spectra[0], sys.pairs[0],
                       sys.blocks[1], sys.spectra[1], sys.pairs[1], r)
        same = (np.array_equal(ref.big, got.big) and np.array_equal(ref.small, got.small)
                and np.array_equal(ref.predicted.values, got.predicted.values))
        mismatches += not same
    record(3, mismatches == 0, f"50 fiedler2 instances identical to assemble(k=2), {mismatches} differ")


def test_c04_circulant():
    worst, conj, nonneg, count = 0.0, 0.0, True, 0
    for k in (2, 3, 4):
        for s in range(10):
            row = np.random.default_rng(4000 + 10 * k + s).uniform(0, 2, size=k)
            res = circulant_realize([Spectrum([0.0])] * k, [np.zeros((1, 1))] * k, row)
            rpt = match_spectra(res.circulant_values, qr_eigs_small(res.assembled.small), 1e-8)
            worst = max(worst, rpt.max_pair_distance)
            v = res.circulant_values
            conj = max(conj, float(np.max(np.abs(v[1:][::-1] - np.conj(v[1:])))) if k > 1 else 0.0)
            nonneg &= check_nonnegative(res.assembled.big).ok
            count += 1
    ok = worst <= 1e-8 and conj <= 1e-8 and nonneg
    record(4, ok, f"{count} circulant couplings k in 2..4, p(w^l) vs QR {worst:.2e} <= 1e-8, "
                  f"conjugate symmetry {conj:.2e}, nonnegative {nonneg}")


def test_c05_doubly_stochastic():
    cases = ds_cases()
    worst_ds, failures, runs = 0.0, [], 0
    for i, (t1, s1, t2, s2, alpha, rho) in enumerate(cases):
        for mode in ("scaled", "affine"):
            d, pred = ds_join(DSJoinSpec(t1, t2, s1, s2, alpha, rho, mode))
            ds = is_doubly_stochastic(d, 1e-10)
            worst_ds = max(worst_ds, ds.worst)
            if not (ds.ok and spectrum_check(d, pred, 1e-8).matched):
                failures.append((i, mode))
            runs += 1
    record(5, not failures, f"{runs} joins (both modes, last t1 defective), row/column sum error "
                            f"{worst_ds:.2e} <= 1e-10, spectrum failures {failures}")


def test_c06_multipartite():
    e33 = complete_multipartite([3, 3]).energy
    e222 = complete_multipartite([2, 2, 2]).energy
    k23 = complete_multipartite([2, 3])
    r6 = np.sqrt(6)
    want = Spectrum([r6, 0, 0, 0, -r6])
    d_pred = match_spectra(k23.predicted, want, 1e-10).max_pair_distance
    d_orc = match_spectra(jacobi_eigs(k23.joined.adjacency)[0], want, 1e-10).max_pair_distance
    ok = abs(e33 - 6) <= 1e-10 and abs(e222 - 8) <= 1e-10 and d_pred <= 1e-10 and d_orc <= 1e-10
    record(6, ok, f"E(K3,3)={e33:.12f}, E(K2,2,2)={e222:.12f}, K2,3 predicted/oracle off "
                  f"{{±sqrt6,0,0,0}} by {d_pred:.1e}/{d_orc:.1e}")


def test_c07_isomorphic_copies():
    c4 = cycle_graph(4)
    res = join_isomorphic_copies(c4, c4.spectrum(), 3, seed=7)
    want = Spectrum([10, -2, -2] + [0, 0, -2] * 3)
    oracle = jacobi_eigs(res.joined.adjacency)[0]
    d1 = match_spectra(res.predicted, want, 1e-8).max_pair_distance
    d2 = match_spectra(oracle, want, 1e-8).max_pair_distance
    ok = d1 <= 1e-8 and d2 <= 1e-8 and abs(res.energy - 20) <= 1e-8 and res.joined.n == 12
    record(7, ok, f"C4 x3 join, predicted/oracle distance {d1:.1e}/{d2:.1e}, energy {res.energy:.12f}")


def test_c08_chain_of_empty_graphs():
    res = chain_join([empty_graph(2)] * 3)
    want = 4 * np.sqrt(2)
    e_oracle = energy(jacobi_eigs(res.joined.adjacency)[0])
    ok = abs(res.energy - want) <= 1e-10 and abs(e_oracle - want) <= 1e-10 and res.joined.n == 6
    record(8, ok, f"chain of three empty graphs on 2 vertices, energy {res.energy:.12f} "
                  f"(oracle {e_oracle:.12f}) vs 4*sqrt2")


def test_c09_energy_identity():
    worst = 0.0
    for s in range(50):
        rng = np.random.default_rng(9000 + s)
        parts = [random_regular_graph(rng) for _ in range(int(rng.integers(2, 5)))]
        res = join_all(parts)
        n = res.joined.n
        e_result = energy(jacobi_eigs(res.joined.adjacency)[0])
        rhs = sum(energy(jacobi_eigs(g.adjacency)[0]) - g.degrees[0] for g in parts)
        rhs += energy(jacobi_eigs(res.small)[0])
        worst = max(worst, abs(e_result - rhs) / n)
    record(9, worst <= 1e-8, f"50 joins of regular parts, max |E - identity|/n {worst:.2e} <= 1e-8")


def _perturbed(m: np.ndarray, rng) -> np.ndarray:
    bad = m.copy()
    i, j = rng.integers(m.shape[0], size=2)
    bad[i, j] += 1e-3
    return bad


def test_c10_negative_control():
    rng = np.random.default_rng(10)
    caught, total, by_spectrum = 0, 0, 0

    def run(rep):
        nonlocal caught, total, by_spectrum
        total += 1
        caught += not rep.passed
        by_spectrum += any(c.startswith("spectrum") or c == "trace" for c in rep.failed())

    for sys in symmetric_systems()[:50] + general_systems()[:50]:
        asm = assemble(sys)
        run(audit(_perturbed(asm.big, rng), asm.predicted, system=sys))
    for t1, s1, t2, s2, alpha, rho in ds_cases()[:30]:
        d, pred = ds_join(DSJoinSpec(t1, t2, s1, s2, alpha, rho))
        run(audit(_perturbed(d, rng), pred, doubly_stochastic=True, perron_root=1.0))
    for s in range(20):
        g_rng = np.random.default_rng(9000 + s)
        res = join_all([random_regular_graph(g_rng) for _ in range(3)])
        run(audit(_perturbed(res.joined.adjacency, rng), res.predicted, symmetric=True, adjacency=True))
    record(10, caught == total, f"{caught}/{total} perturbed matrices rejected "
                                f"({by_spectrum} by a spectral check)")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
