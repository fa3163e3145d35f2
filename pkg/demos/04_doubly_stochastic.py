"""Joining two doubly stochastic matrices into a bigger one with a known spectrum.

T1 (m x m) and T2 (n x n, n >= m) are coupled through their all-ones
eigenvectors. Two forms are available: a scaled join with parameters
alpha and rho, and an affine one. Both keep every eigenvalue of T1 and
T2 except the two 1s, which become 1 and a value depending on the coupling.
"""
import numpy as np

from spectral_forge import DSJoinSpec, ds_join, is_doubly_stochastic, qr_eigs_small
from spectral_forge.numkit import Spectrum
from spectral_forge.samples import birkhoff_matrix, defective_doubly_stochastic
from spectral_forge.verify import audit

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(2)

# convex combinations of permutation matrices are doubly stochastic
t1, t2 = birkhoff_matrix(rng, 3), birkhoff_matrix(rng, 5)
for mode in ("scaled", "affine"):
    d, pred = ds_join(DSJoinSpec(t1, t2, qr_eigs_small(t1), qr_eigs_small(t2), 0.8, 1.2, mode))
    rep = audit(d, pred, doubly_stochastic=True, perron_root=1.0)
    print(f"{mode}: doubly stochastic={is_doubly_stochastic(d).ok}, audit {'pass' if rep.passed else 'FAIL'}")
    print("  predicted:", pred.values)

# T1 need not be diagonalizable
t1 = defective_doubly_stochastic()
d, pred = ds_join(DSJoinSpec(t1, t2, Spectrum([1.0, 0.0, 0.0]), qr_eigs_small(t2), 0.5, 0.5))
print("defective T1, audit:")
print(audit(d, pred, doubly_stochastic=True, perron_root=1.0).to_text())
