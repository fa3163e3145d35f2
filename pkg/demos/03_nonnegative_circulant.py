"""A nonnegative matrix whose spectrum includes circulant eigenvalues.

Couple k nonnegative blocks with Perron roots l_1 >= ... >= l_k through
their Perron vectors. Choosing the coupling so the small matrix is a
circulant puts the values p(w^j), w = exp(2 pi i / k), into the spectrum,
where p has the circulant's first row as coefficients.
"""
import numpy as np

from spectral_forge import circulant_realize, jacobi_eigs
from spectral_forge.nonneg import check_nonnegative
from spectral_forge.numkit import Spectrum
from spectral_forge.verify import spectrum_check

np.set_printoptions(precision=4, suppress=True)

# simplest case: 1x1 zero blocks, so the whole matrix is the circulant
res = circulant_realize([Spectrum([0.0])] * 3, [np.zeros((1, 1))] * 3, [1.0, 2.0, 0.0])
print("circulant:\n", res.plan.circulant)
print("p(w^j):", res.circulant_values)

# real blocks: Perron roots 3, 2 and 1
blocks = [np.array([[1.0, 2.0], [2.0, 1.0]]), np.ones((2, 2)), np.array([[1.0]])]
spectra = [Spectrum(jacobi_eigs(b)[0].values, 0) for b in blocks]
res = circulant_realize(spectra, blocks, [0.0, 1.0, 0.5])
print("diagonal shifts chosen for consistency:", np.diagonal(res.plan.rho_full))
print("nonnegative:", check_nonnegative(res.assembled.big).ok)
print("predicted spectrum:", res.predicted.values)
print("verified:", spectrum_check(res.assembled.big, res.predicted).matched)

# when a smaller block's root cannot be lifted to the largest, the plan is rejected
try:
    circulant_realize([Spectrum([1.0]), Spectrum([5.0])], [np.eye(1), 5 * np.eye(1)], [1.0, 1.0])
except ValueError as exc:
    print("rejected:", exc)
