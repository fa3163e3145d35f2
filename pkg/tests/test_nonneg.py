import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_forge.blockforge import assemble
from spectral_forge.nonneg import (check_nonnegative, circulant_realize, circulant_values,
                                   perron_system, plan_circulant)
from spectral_forge.numkit import Spectrum, jacobi_eigs, lu_det_complex, qr_eigs_small
from spectral_forge.verify import certify_eigenvalues, match_spectra, spectrum_check

ZERO = np.zeros((1, 1))


def test_check_nonnegative():
    assert check_nonnegative(np.zeros((3, 3))).ok
    assert check_nonnegative([[1.0, -1e-14]], tol=1e-12).ok
    res = check_nonnegative([[1.0, 2.0], [-0.5, 3.0]])
    assert not res.ok and res.violation == (1, 0, -0.5)


def test_perron_system_is_nonnegative():
    rng = np.random.default_rng(2)
    blocks = [rng.uniform(0, 1, size=(n, n)) for n in (2, 3, 4)]
    spectra = [qr_eigs_small(b) for b in blocks]
    sys = perron_system(blocks, spectra, rng.uniform(0, 2, size=(3, 3)))
    asm = assemble(sys)
    assert check_nonnegative(asm.big).ok
    assert certify_eigenvalues(asm.big, asm.predicted, 1e-6, sigma_tol=1e-8).matched
    with pytest.raises(ValueError, match="nonnegative"):
        perron_system(blocks, spectra, -np.ones((3, 3)))


class TestCirculant:
    def test_single_block(self):
        a = np.array([[1.0, 2.0], [2.0, 1.0]])
        res = circulant_realize([Spectrum([3.0, -1.0], 0)], [a], [0.5])
        u = np.ones(2) / np.sqrt(2)
        np.testing.assert_allclose(res.assembled.big, a + 0.5 * np.outer(u, u), rtol=1e-14)
        np.testing.assert_allclose(res.predicted.values, [3.5, -1.0], atol=1e-12)
        assert res.predicted.perron_index == 0

    def test_second_roots(self):
        res = circulant_realize([Spectrum([0.0])] * 2, [ZERO] * 2, [0.0, 1.0])
        assert np.array_equal(res.plan.circulant, [[0, 1], [1, 0]])
        np.testing.assert_allclose(res.circulant_values, [1, -1], atol=1e-15)
        assert np.array_equal(res.assembled.big, [[0, 1], [1, 0]])

    def test_cube_roots(self):
        w = np.exp(2j * np.pi / 3)
        res = circulant_realize([Spectrum([0.0])] * 3, [ZERO] * 3, [1.0, 2.0, 0.0])
        np.testing.assert_allclose(res.circulant_values, [3, 1 + 2 * w, 1 + 2 * w * w], atol=1e-14)
        assert np.array_equal(res.plan.circulant, [[1, 2, 0], [0, 1, 2], [2, 0, 1]])
        assert match_spectra(res.circulant_values, qr_eigs_small(res.assembled.small), 1e-12).matched
        for g in res.predicted:
            assert abs(lu_det_complex(res.assembled.big, g)) < 1e-12
        assert check_nonnegative(res.assembled.big).ok

    def test_grouped_by_block(self):
        # blocks with Perron roots 3 and 2: p(w^j) leads each block's group
        a1 = np.array([[1.0, 2.0], [2.0, 1.0]])
        a2 = np.array([[1.0, 1.0], [1.0, 1.0]])
        res = circulant_realize([Spectrum([3.0, -1.0], 0), Spectrum([2.0, 0.0], 0)], [a1, a2], [0.0, 1.0])
        assert res.plan.rho_full.tolist() == [[0.0, 1.0], [1.0, 1.0]]
        np.testing.assert_allclose(res.predicted.values, [4.0, -1.0, 2.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(np.linalg.eigvalsh(res.assembled.big),
                                   np.sort(res.predicted.real), atol=1e-12)

    def test_infeasible_diagonal(self):
        a1 = np.array([[1.0]])
        a2 = np.array([[5.0]])
        with pytest.raises(ValueError, match="rho_22"):
            circulant_realize([Spectrum([1.0]), Spectrum([5.0])], [a1, a2], [1.0, 1.0])

    def test_negative_rho(self):
        with pytest.raises(ValueError, match="nonnegative"):
            plan_circulant([0.0, 0.0], [0.0, -1.0])

    @given(st.integers(0, 2**32 - 1), st.integers(1, 6))
    @settings(max_examples=60, deadline=None)
    def test_invariants(self, seed, k):
        rng = np.random.default_rng(seed)
        sizes = rng.integers(1, 4, size=k)
        blocks = []
        for n in sizes:
            b = rng.uniform(0, 1, size=(n, n))
            blocks.append(b + b.T)
        spectra = [jacobi_eigs(b)[0] for b in blocks]
        roots = [s.values[0].real for s in spectra]
        order = np.argsort(roots)[::-1]
        blocks = [blocks[i] for i in order]
        spectra = [Spectrum(spectra[i].values, 0) for i in order]
        row = rng.uniform(0, 2, size=k)
        res = circulant_realize(spectra, blocks, row)
        vals = res.circulant_values
        base = res.plan.base_row
        assert abs(vals.sum() - k * base[0]) <= 1e-10 * (1 + abs(k * base[0]))
        assert np.all(vals[0].real + 1e-12 >= np.abs(vals))
        assert check_nonnegative(res.assembled.big).ok
        # conjugate pairs: p(w^(k-l)) = conj(p(w^l))
        np.testing.assert_allclose(vals[1:][::-1], np.conj(vals[1:]), atol=1e-12)
        assert spectrum_check(res.assembled.big, res.predicted, 1e-8).matched


def test_circulant_values_constant():
    assert circulant_values([4.0]).tolist() == [4.0]
