"""File formats: Matrix Market matrices, CSV spectra and JSON block systems.

Every parse error is a `InputError` naming the line or the JSON field at fault.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import scipy.io
import scipy.sparse

from .blockforge import BlockSystem, lead_pair
from .numkit import EigenPair, Spectrum, as_square, is_symmetric

PathLike = Union[str, Path]


class InputError(ValueError):
    """Malformed or incomplete input; the message names the line or field."""


# ---------------------------------------------------------------------------
# Matrix Market (coordinate, real, general)

def format_mtx(m) -> str:
    """Coordinate Matrix Market text: 1-based indices, nonzeros only, 17 significant digits."""
    buf = io.BytesIO()
    scipy.io.mmwrite(buf, scipy.sparse.coo_array(as_square(m)), precision=17, symmetry="general")
    return buf.getvalue().decode("ascii")


def parse_mtx(text: str, source: str = "<mtx>") -> np.ndarray:
    try:
        out = scipy.io.mmread(io.BytesIO(text.encode("ascii")))
    except (ValueError, UnicodeEncodeError, IndexError) as exc:
        raise InputError(f"{source}: not a Matrix Market file ({exc})") from None
    dense = out.toarray() if scipy.sparse.issparse(out) else np.asarray(out)
    if np.iscomplexobj(dense):
        raise InputError(f"{source}: complex matrices are not supported")
    return dense.astype(float)


def read_mtx(path: PathLike) -> np.ndarray:
    return parse_mtx(read_text(path), str(path))


# ---------------------------------------------------------------------------
# spectrum CSV: header "re,im", canonical order

def format_spectrum_csv(s) -> str:
    spec = s if isinstance(s, Spectrum) else Spectrum(s)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im"])
    for z in spec.sorted().values:
        w.writerow([repr(float(z.real) + 0.0), repr(float(z.imag) + 0.0)])
    return buf.getvalue()


def parse_spectrum_csv(text: str, source: str = "<csv>") -> Spectrum:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["re", "im"]:
        raise InputError(f"{source}:1: expected header 're,im'")
    vals = []
    for no, row in enumerate(rows[1:], 2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 2:
            raise InputError(f"{source}:{no}: expected 2 columns, got {len(row)}")
        try:
            vals.append(complex(float(row[0]), float(row[1])))
        except ValueError:
            raise InputError(f"{source}:{no}: not a number: {','.join(row)!r}") from None
    return Spectrum(vals)


def read_spectrum_csv(path: PathLike) -> Spectrum:
    return parse_spectrum_csv(read_text(path), str(path))


# ---------------------------------------------------------------------------
# JSON block systems

@dataclass(frozen=True)
class BlockInput:
    """One entry of "blocks" with whatever was supplied; missing parts are None."""
    matrix: np.ndarray
    spectrum: Optional[Spectrum]
    pair: Optional[EigenPair]


def load_json(text: str, source: str = "<json>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def real_matrix(obj, field: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise InputError(f"{field}: expected a non-empty list of rows")
    width = len(obj[0])
    for i, r in enumerate(obj):
        if len(r) != width:
            raise InputError(f"{field}[{i}]: row has {len(r)} entries, expected {width}")
        for j, x in enumerate(r):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise InputError(f"{field}[{i}][{j}]: expected a real number, got {x!r}")
    return np.array(obj, dtype=float)


def _real_vector(obj, field: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{field}: expected a non-empty list of reals")
    for i, x in enumerate(obj):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError(f"{field}[{i}]: expected a real number, got {x!r}")
    return np.array(obj, dtype=float)


def spectrum_field(obj, field: str) -> Spectrum:
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{field}: expected a non-empty list of [re, im] pairs")
    vals = []
    for i, z in enumerate(obj):
        if isinstance(z, (int, float)) and not isinstance(z, bool):
            vals.append(complex(z))
        elif (isinstance(z, list) and len(z) == 2
              and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in z)):
            vals.append(complex(z[0], z[1]))
        else:
            raise InputError(f"{field}[{i}]: expected [re, im], got {z!r}")
    return Spectrum(vals)


def _square(obj, field: str) -> np.ndarray:
    m = real_matrix(obj, field)
    if m.shape[0] != m.shape[1]:
        raise InputError(f"{field}: expected a square matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


def parse_blocks(doc, field: str = "blocks", need_pair: bool = True) -> list[BlockInput]:
    """Validate the "blocks" list, filling symmetric blocks from Jacobi where omitted.

    Nonsymmetric blocks must carry "spectrum", and with `need_pair` also
    "eigenvalue" and "eigenvector".
    """
    if not isinstance(doc, list) or not doc:
        raise InputError(f"{field}: expected a non-empty list")
    out = []
    for j, b in enumerate(doc):
        where = f"{field}[{j}]"
        if not isinstance(b, dict):
            raise InputError(f"{where}: expected an object")
        if "matrix" not in b:
            raise InputError(f"{where}.matrix: missing")
        m = _square(b["matrix"], f"{where}.matrix")
        n = m.shape[0]
        sym = is_symmetric(m)
        spec = spectrum_field(b["spectrum"], f"{where}.spectrum") if "spectrum" in b else None
        if spec is not None and len(spec) != n:
            raise InputError(f"{where}.spectrum: has {len(spec)} values, matrix is {n}x{n}")
        has_val, has_vec = "eigenvalue" in b, "eigenvector" in b
        pair = None
        if has_val or has_vec:
            if not has_val:
                raise InputError(f"{where}.eigenvalue: missing (eigenvector was given)")
            if not has_vec:
                raise InputError(f"{where}.eigenvector: missing (eigenvalue was given)")
            val = b["eigenvalue"]
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise InputError(f"{where}.eigenvalue: expected a real number, got {val!r}")
            vec = _real_vector(b["eigenvector"], f"{where}.eigenvector")
            if vec.size != n:
                raise InputError(f"{where}.eigenvector: length {vec.size}, matrix is {n}x{n}")
            if not np.any(vec):
                raise InputError(f"{where}.eigenvector: must be nonzero")
            pair = EigenPair.normalized(float(val), vec)
        if not sym:
            if spec is None:
                raise InputError(f"{where}.spectrum: missing (required for a nonsymmetric matrix)")
            if need_pair and pair is None:
                raise InputError(f"{where}.eigenvalue: missing (required for a nonsymmetric matrix)")
        elif spec is None or (need_pair and pair is None):
            top, full = lead_pair(m)
            spec = full if spec is None else spec
            pair = top if need_pair and pair is None else pair
        out.append(BlockInput(m, spec, pair))
    return out


def parse_system(doc, source: str = "<json>") -> BlockSystem:
    """BlockSystem from {"blocks": [...], "rho": [[...]]}."""
    if not isinstance(doc, dict):
        raise InputError(f"{source}: expected a JSON object at top level")
    if "blocks" not in doc:
        raise InputError(f"{source}: blocks: missing")
    if "rho" not in doc:
        raise InputError(f"{source}: rho: missing")
    blocks = parse_blocks(doc["blocks"])
    rho = real_matrix(doc["rho"], "rho")
    k = len(blocks)
    if rho.shape != (k, k):
        raise InputError(f"rho: expected {k}x{k} for {k} blocks, got {rho.shape[0]}x{rho.shape[1]}")
    try:
        return BlockSystem([b.matrix for b in blocks], [b.pair for b in blocks],
                           [b.spectrum for b in blocks], rho)
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None


def read_system(path: PathLike) -> BlockSystem:
    return parse_system(load_json(read_text(path), str(path)), str(path))


def system_to_json(sys: BlockSystem) -> dict:
    """Inverse of `parse_system`, with every optional field filled in."""
    return {
        "blocks": [{"matrix": b.tolist(),
                    "spectrum": [[float(z.real), float(z.imag)] for z in s.values],
                    "eigenvalue": p.value,
                    "eigenvector": p.vector.tolist()}
                   for b, p, s in zip(sys.blocks, sys.pairs, sys.spectra)],
        "rho": sys.rho.tolist(),
    }


def spectrum_to_json(s: Spectrum) -> list[list[float]]:
    return [[float(z.real) + 0.0, float(z.imag) + 0.0] for z in s.sorted().values]


def read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
