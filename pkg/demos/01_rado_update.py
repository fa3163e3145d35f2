"""Changing a few eigenvalues of a matrix without touching the rest.

If the columns of X are eigenvectors of A for eigenvalues l_1..l_r, then
A + X C has the eigenvalues of diag(l_1..l_r) + C X in place of those r,
and keeps every other eigenvalue of A.
"""
import numpy as np

from spectral_forge import EigenPair, RadoInput, jacobi_eigs, rado_update, symmetric_rado

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(0)

# a symmetric 5x5 and its full eigendecomposition
a = rng.normal(size=(5, 5))
a = a + a.T
spec, vecs = jacobi_eigs(a)
print("spectrum of A:", spec.real)

# replace the top two eigenvalues; C is any 2x5 matrix
pairs = [EigenPair.normalized(spec.values[i].real, vecs[:, i]) for i in range(2)]
c = rng.normal(size=(2, 5))
res = rado_update(RadoInput(a, spec, pairs, c))
print("small 2x2 Lambda + C X:\n", res.small)
print("predicted spectrum of A + XC:", res.predicted.values)
print("numpy on A + XC:          ", np.sort_complex(np.linalg.eigvals(res.updated))[::-1])

# with C = Y X^T and Y symmetric the update stays symmetric
y = np.array([[1.0, 0.5], [0.5, -2.0]])
sym = symmetric_rado(a, spec, pairs, y)
print("symmetric update, max |M - M^T| =", np.max(np.abs(sym.updated - sym.updated.T)))
print("predicted:", sym.predicted.real)
