"""Spectra and energies of joins of regular graphs.

A d-regular graph on n vertices has Perron pair (d, ones/sqrt n). Using
sqrt(n_i n_j) as coupling turns every cross block into all-ones, which is
the graph join. Energy is the sum of the absolute eigenvalues.
"""
import numpy as np

from spectral_forge import (chain_join, complete_multipartite, energy, jacobi_eigs, join_all,
                            join_isomorphic_copies)
from spectral_forge.graphspec import complete_graph, cycle_graph, empty_graph, path_eigenvalues

np.set_printoptions(precision=4, suppress=True)

for sizes in ([3, 3], [2, 2, 2], [2, 3]):
    res = complete_multipartite(sizes)
    print(f"K{sizes}: spectrum {np.sort(res.predicted.real)}, energy {res.energy:.6f}")

# three relabelled copies of C4 joined together
c4 = cycle_graph(4)
res = join_isomorphic_copies(c4, c4.spectrum(), 3, seed=0)
print("C4 x3: energy", res.energy, "oracle", energy(jacobi_eigs(res.joined.adjacency)[0]))

# mixed parts, and the energy identity E = sum(E(G_j) - d_j) + E(small)
parts = [cycle_graph(5), complete_graph(3), empty_graph(2)]
res = join_all(parts)
rhs = sum(energy(g.spectrum()) - g.degrees[0] for g in parts) + energy(jacobi_eigs(res.small)[0])
print(f"C5 + K3 + E2: energy {res.energy:.10f}, identity {rhs:.10f}")

# chain joins of empty graphs have path-like spectra scaled by n
res = chain_join([empty_graph(2)] * 3)
print("chain of three E2:", np.sort(res.predicted.real), "energy", res.energy)
print("2 * path eigenvalues:", 2 * path_eigenvalues(3))
