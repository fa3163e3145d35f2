"""Checking a claimed spectrum, and the same flow from the command line.

Symmetric matrices are compared against a Jacobi solve. Nonsymmetric ones
are never fully diagonalized: each claimed eigenvalue g is certified by a
small |det(M - gI)| and a small least singular value of M - gI. The audit
also rebuilds the matrix from its description, so a corrupted entry is
caught even when it happens to leave the spectrum alone.
"""
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from spectral_forge import assemble, audit
from spectral_forge.io import format_mtx, format_spectrum_csv
from spectral_forge.samples import random_general_system

rng = np.random.default_rng(3)
sys_ = random_general_system(rng)
asm = assemble(sys_)
print(audit(asm.big, asm.predicted, system=sys_).to_text())

bad = asm.big.copy()
bad[0, 0] += 1e-3
print("after perturbing one entry, failing checks:", audit(bad, asm.predicted, system=sys_).failed())

# the same check from the shell
with tempfile.TemporaryDirectory() as tmp:
    m, s = Path(tmp, "b.mtx"), Path(tmp, "b.csv")
    m.write_text(format_mtx(asm.big))
    s.write_text(format_spectrum_csv(asm.predicted))
    cli = [sys.executable, "-m", "spectral_forge.cli"]
    out = subprocess.run(cli + ["verify", "--matrix", str(m), "--spectrum", str(s), "--format", "csv"],
                         capture_output=True, text=True)
    print("verify exit status:", out.returncode)
    out = subprocess.run(cli + ["multipartite", "--sizes", "3,3", "--verify", "--format", "csv"],
                         capture_output=True, text=True)
    print("multipartite exit status:", out.returncode)
    print(out.stdout)
    print(out.stderr)
