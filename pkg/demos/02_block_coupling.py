"""Gluing blocks together through one eigenvector each.

Block j contributes A_j and an eigenpair (l_j, u_j). The big matrix has
A_j + rho_jj u_j u_j^T on the diagonal and rho_pq u_p u_q^T off it. Its
spectrum is every block's spectrum minus l_j, plus the eigenvalues of the
k x k matrix diag(l_j) + rho. Nothing needs to be symmetric.
"""
import numpy as np

from spectral_forge import assemble, chain, chain_rho, fiedler2, from_symmetric, jacobi_eigs
from spectral_forge.blockforge import BlockSystem, lead_pair
from spectral_forge.numkit import EigenPair, Spectrum
from spectral_forge.verify import certify_eigenvalues, match_spectra

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(1)

# three symmetric blocks of sizes 2, 3, 4
blocks = []
for n in (2, 3, 4):
    b = rng.uniform(-1, 1, size=(n, n))
    blocks.append(b + b.T)
rho = np.array([[0.0, 1.0, 0.5], [1.0, 0.2, 2.0], [0.5, 2.0, 0.0]])
asm = assemble(from_symmetric(blocks, rho))
print("big matrix is", asm.big.shape)
print("small matrix:\n", asm.small)
rpt = match_spectra(asm.predicted, jacobi_eigs(asm.big)[0])
print(f"predicted vs Jacobi: matched={rpt.matched}, distance {rpt.max_pair_distance:.1e}")

# a defective block works too: [[1,1],[0,1]] with eigenpair (1, e1)
jordan = BlockSystem([np.array([[1.0, 1.0], [0.0, 1.0]]), blocks[1]],
                     [EigenPair(1.0, [1.0, 0.0]), lead_pair(blocks[1])[0]],
                     [Spectrum([1.0, 1.0]), lead_pair(blocks[1])[1]],
                     np.array([[0.3, 2.0], [-1.0, 0.0]]))
asm = assemble(jordan)
rpt = certify_eigenvalues(asm.big, asm.predicted)
print(f"nonsymmetric with Jordan block: certified={rpt.matched}, worst |det| {rpt.max_pair_distance:.1e}")

# two blocks and one coupling constant
(u, su), (v, sv) = lead_pair(blocks[0]), lead_pair(blocks[1])
two = fiedler2(blocks[0], su, u, blocks[1], sv, v, rho=1.5)
print("two-block join, new eigenvalues:", np.sort(two.predicted.real[-2:]))

# only neighbours talk to each other
line = chain(from_symmetric(blocks, chain_rho([1.0, 2.0])))
print("chain coupling:\n", line.small)
