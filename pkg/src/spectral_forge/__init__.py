"""Block matrices with prescribed spectra, and the oracles that check them."""
from .blockforge import (AssembledSystem, BlockSystem, assemble, chain, chain_rho,
                         fiedler2, from_symmetric)
from .dstoch import DSJoinSpec, ds_join, ds_join_affine, is_doubly_stochastic
from .graphspec import (Graph, JoinResult, RegularGraph, chain_join, complete_multipartite,
                        energy, join_all, join_isomorphic_copies, path_eigenvalues,
                        permuted_copy)
from .nonneg import CirculantPlan, check_nonnegative, circulant_realize
from .numkit import (ConvergenceError, EigenPair, Spectrum, jacobi_eigs, lu_det_complex,
                     matmul, outer, perron_pair, qr_eigs_small)
from .rado import RadoInput, RadoResult, rado_update, symmetric_rado
from .verify import AuditReport, MatchReport, audit, certify_eigenvalues, match_spectra

__version__ = "0.1.0"
