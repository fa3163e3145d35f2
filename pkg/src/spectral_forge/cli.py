"""Command-line entry point: build a construction, optionally audit it, emit the result.

Exit status is 0 on success, 1 on malformed input or an infeasible
construction, and 2 when a requested audit fails.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .blockforge import BlockSystem, assemble, chain, fiedler2
from .dstoch import DSJoinSpec, ds_join
from .graphspec import (Graph, JoinResult, RegularGraph, chain_join, complete_graph,
                        complete_multipartite, cycle_graph, empty_graph, energy, join_all,
                        join_isomorphic_copies, path_graph, read_edge_list)
from .io import (InputError, format_mtx, format_spectrum_csv, load_json, parse_blocks,
                 parse_system, read_mtx, read_spectrum_csv, read_text, real_matrix,
                 spectrum_field, spectrum_to_json)
from .nonneg import circulant_realize
from .numkit import ConvergenceError, Spectrum, jacobi_eigs, qr_eigs_small
from .samples import birkhoff_matrix, random_general_system, random_symmetric_system
from .verify import DEFAULT_TOL, AuditReport, audit

TOL_ENV = "SPECTRAL_FORGE_TOL"
EXIT_OK, EXIT_INPUT, EXIT_AUDIT = 0, 1, 2


@dataclass
class Outcome:
    """What a command produced; fields left as None are not emitted."""
    matrix: Optional[np.ndarray] = None
    spectrum: Optional[Spectrum] = None
    small: Optional[np.ndarray] = None
    energy: Optional[float] = None
    extra: dict = field(default_factory=dict)
    audit: Optional[Callable[[float], AuditReport]] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# argument helpers

def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return out


_NAMED = {"cycle": cycle_graph, "complete": complete_graph, "empty": empty_graph, "path": path_graph}


def load_graph(src: str) -> Graph:
    """Edge-list file, or one of cycle:N, complete:N, empty:N, path:N."""
    kind, sep, size = src.partition(":")
    if sep and kind in _NAMED:
        try:
            return _NAMED[kind](int(size))
        except ValueError as exc:
            raise InputError(f"{src}: {exc}") from None
    try:
        return read_edge_list(src)
    except OSError as exc:
        raise InputError(f"{src}: {exc.strerror}") from None
    except ValueError as exc:
        raise InputError(f"{src}: {exc}") from None


def _regular(g: Graph, src: str) -> RegularGraph:
    try:
        return RegularGraph.of(g)
    except ValueError as exc:
        raise InputError(f"{src}: {exc}") from None


def _spectrum_of(m: np.ndarray) -> Spectrum:
    return jacobi_eigs(m)[0] if np.array_equal(m, m.T) else qr_eigs_small(m)


# ---------------------------------------------------------------------------
# commands

def _system_audit(asm, sys: BlockSystem):
    return lambda tol: audit(asm.big, asm.predicted, system=sys, tol=tol)


def _system_from(args) -> BlockSystem:
    if args.input:
        return parse_system(load_json(read_text(args.input), args.input), args.input)
    rng = np.random.default_rng(args.seed)
    if args.random == "general":
        return random_general_system(rng)
    return random_symmetric_system(rng)


def cmd_assemble(args) -> Outcome:
    sys = _system_from(args)
    asm = assemble(sys)
    return Outcome(asm.big, asm.predicted, asm.small, audit=_system_audit(asm, sys))


def cmd_fiedler(args) -> Outcome:
    if args.input:
        sys = _system_from(args)
        if sys.k != 2:
            raise InputError(f"{args.input}: blocks: fiedler takes exactly 2 blocks, got {sys.k}")
        if sys.rho[0, 1] != sys.rho[1, 0]:
            raise InputError(f"{args.input}: rho: fiedler needs rho[0][1] == rho[1][0]")
    else:
        sys = random_symmetric_system(np.random.default_rng(args.seed), k_range=(2, 2))
    a, b = sys.blocks
    asm = fiedler2(a, sys.spectra[0], sys.pairs[0], b, sys.spectra[1], sys.pairs[1],
                   sys.rho[0, 1], sys.rho[0, 0], sys.rho[1, 1])
    return Outcome(asm.big, asm.predicted, asm.small, audit=_system_audit(asm, sys))


def cmd_chain(args) -> Outcome:
    if args.input:
        sys = _system_from(args)
    else:
        base = random_symmetric_system(np.random.default_rng(args.seed))
        links = np.diag(base.rho, 1)
        sys = BlockSystem(base.blocks, base.pairs, base.spectra, np.diag(links, 1) + np.diag(links, -1))
    asm = chain(sys)
    return Outcome(asm.big, asm.predicted, asm.small, audit=_system_audit(asm, sys))


def cmd_circulant(args) -> Outcome:
    if args.input:
        doc = load_json(read_text(args.input), args.input)
        if not isinstance(doc, dict):
            raise InputError(f"{args.input}: expected a JSON object at top level")
        for key in ("blocks", "rho_first_row"):
            if key not in doc:
                raise InputError(f"{args.input}: {key}: missing")
        blocks = parse_blocks(doc["blocks"], need_pair=False)
        row = real_matrix([doc["rho_first_row"]], "rho_first_row")[0]
        mats = [b.matrix for b in blocks]
        spectra = [b.spectrum for b in blocks]
    else:
        if args.rho_first_row is None:
            raise InputError("circulant: give --input or --rho-first-row")
        row = np.array(args.rho_first_row)
        mats = [np.zeros((1, 1))] * row.size
        spectra = [Spectrum([0.0])] * row.size
    res = circulant_realize(spectra, mats, row)
    asm = res.assembled
    root = float(res.circulant_values[0].real)
    return Outcome(asm.big, res.predicted, asm.small,
                   extra={"base_row": res.plan.base_row.tolist(),
                          "circulant_values": spectrum_to_json(Spectrum(res.circulant_values))},
                   audit=lambda tol: audit(asm.big, res.predicted, nonnegative=True,
                                           perron_root=root, tol=tol))


def _ds_join(args, mode: str) -> Outcome:
    if args.input:
        doc = load_json(read_text(args.input), args.input)
        if not isinstance(doc, dict):
            raise InputError(f"{args.input}: expected a JSON object at top level")
        mats, specs = [], []
        for name, sname in (("t1", "spectrum1"), ("t2", "spectrum2")):
            if name not in doc:
                raise InputError(f"{args.input}: {name}: missing")
            t = real_matrix(doc[name], name)
            mats.append(t)
            specs.append(spectrum_field(doc[sname], sname) if sname in doc else None)
        t1, t2 = mats
    else:
        m, n = args.sizes if args.sizes else (3, 4)
        rng = np.random.default_rng(args.seed)
        t1, t2 = birkhoff_matrix(rng, m), birkhoff_matrix(rng, n)
        specs = [None, None]
    specs = [s if s is not None else _spectrum_of(t) for s, t in zip(specs, (t1, t2))]
    d, pred = ds_join(DSJoinSpec(t1, t2, specs[0], specs[1], args.alpha, args.rho, mode))
    return Outcome(d, pred, audit=lambda tol: audit(d, pred, doubly_stochastic=True,
                                                    perron_root=1.0, tol=tol))


def cmd_ds_join(args) -> Outcome:
    return _ds_join(args, "scaled")


def cmd_ds_join_affine(args) -> Outcome:
    return _ds_join(args, "affine")


def _join_outcome(res: JoinResult, parts: Sequence[RegularGraph]) -> Outcome:
    ident = sum(energy(p.graph.spectrum()) - p.degree for p in parts) + energy(qr_eigs_small(res.small))
    adj = res.joined.adjacency
    return Outcome(adj, res.predicted, res.small, res.energy,
                   audit=lambda tol: audit(adj, res.predicted, symmetric=True, adjacency=True,
                                           energy_identity=ident, tol=tol))


def _parts(srcs: Sequence[str]) -> list[RegularGraph]:
    return [_regular(load_graph(s), s) for s in srcs]


def cmd_graph_join(args) -> Outcome:
    parts = _parts(args.graphs)
    return _join_outcome(join_all(parts), parts)


def cmd_chain_join(args) -> Outcome:
    parts = _parts(args.graphs)
    return _join_outcome(chain_join(parts), parts)


def cmd_multipartite(args) -> Outcome:
    if any(s < 1 for s in args.sizes):
        raise InputError("--sizes: part sizes must be positive")
    parts = [RegularGraph.of(empty_graph(s)) for s in args.sizes]
    return _join_outcome(complete_multipartite(args.sizes), parts)


def cmd_iso_join(args) -> Outcome:
    g = _regular(load_graph(args.graph), args.graph)
    if args.k < 1:
        raise InputError("--k: must be positive")
    res = join_isomorphic_copies(g, g.graph.spectrum(), args.k, seed=args.seed)
    return _join_outcome(res, [g] * args.k)


def cmd_energy(args) -> Outcome:
    if args.graph:
        spec = load_graph(args.graph).spectrum()
    elif args.spectrum:
        spec = read_spectrum_csv(args.spectrum)
    else:
        raise InputError("energy: give --graph or --spectrum")
    return Outcome(spectrum=spec, energy=energy(spec))


def cmd_verify(args) -> Outcome:
    m = read_mtx(args.matrix)
    spec = read_spectrum_csv(args.spectrum)
    args.verify = True
    return Outcome(m, spec, audit=lambda tol: audit(
        m, spec, nonnegative=args.nonnegative, doubly_stochastic=args.doubly_stochastic,
        adjacency=args.adjacency, tol=tol))


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "mtx"], default="json",
                        help="json: everything; csv: spectrum; mtx: matrix")
    common.add_argument("--output", "-o", help="write the artifact here instead of stdout")
    common.add_argument("--verify", action="store_true", help="audit the result; exit 2 on failure")
    common.add_argument("--seed", type=int, default=0, help="seed for random inputs (default 0)")
    common.add_argument("--tol", type=float, help=f"tolerance (default ${TOL_ENV} or {DEFAULT_TOL})")

    p = _Parser(prog="spectral-forge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help, description=help)
        sp.set_defaults(fn=fn)
        return sp

    for name, fn, help in (("assemble", cmd_assemble, "couple blocks through chosen eigenvectors"),
                           ("fiedler", cmd_fiedler, "two symmetric blocks coupled by one scalar"),
                           ("chain", cmd_chain, "couple consecutive blocks only")):
        sp = add(name, fn, help)
        src = sp.add_mutually_exclusive_group(required=False)
        src.add_argument("--input", "-i", help="JSON block system")
        if name == "assemble":
            src.add_argument("--random", choices=["symmetric", "general"], default="symmetric",
                             help="seeded random system when --input is absent")

    sp = add("circulant", cmd_circulant, "nonnegative realization through a circulant coupling")
    sp.add_argument("--input", "-i", help='JSON {"blocks": [...], "rho_first_row": [...]}')
    sp.add_argument("--rho-first-row", type=_floats, help="with 1x1 zero blocks, e.g. 1,2,0")

    for name, fn, help in (("ds-join", cmd_ds_join, "join two doubly stochastic matrices"),
                           ("ds-join-affine", cmd_ds_join_affine,
                            "join two doubly stochastic matrices, affine form")):
        sp = add(name, fn, help)
        sp.add_argument("--alpha", type=float, required=True)
        sp.add_argument("--rho", type=float, required=True)
        sp.add_argument("--input", "-i", help='JSON {"t1", "t2", optional "spectrum1", "spectrum2"}')
        sp.add_argument("--sizes", type=_ints, help="m,n for seeded random inputs (default 3,4)")

    sp = add("graph-join", cmd_graph_join, "join regular graphs, all edges between parts")
    sp.add_argument("--graphs", nargs="+", required=True, help="edge-list files or cycle:N etc.")
    sp = add("chain-join", cmd_chain_join, "join regular graphs, consecutive parts only")
    sp.add_argument("--graphs", nargs="+", required=True, help="edge-list files or cycle:N etc.")
    sp = add("multipartite", cmd_multipartite, "complete multipartite graph")
    sp.add_argument("--sizes", type=_ints, required=True, help="part sizes, e.g. 3,3")
    sp = add("iso-join", cmd_iso_join, "join k relabelled copies of one regular graph")
    sp.add_argument("--graph", required=True, help="edge-list file or cycle:N etc.")
    sp.add_argument("--k", type=int, required=True)

    sp = add("verify", cmd_verify, "audit a matrix against a claimed spectrum")
    sp.add_argument("--matrix", required=True, help="Matrix Market file")
    sp.add_argument("--spectrum", required=True, help="CSV spectrum with header re,im")
    sp.add_argument("--nonnegative", action="store_true")
    sp.add_argument("--doubly-stochastic", action="store_true")
    sp.add_argument("--adjacency", action="store_true")

    sp = add("energy", cmd_energy, "graph energy from a graph or a spectrum")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="edge-list file or cycle:N etc.")
    src.add_argument("--spectrum", help="CSV spectrum with header re,im")
    return p


def resolve_tol(flag: Optional[float], env=os.environ) -> float:
    if flag is not None:
        tol = flag
    elif env.get(TOL_ENV):
        try:
            tol = float(env[TOL_ENV])
        except ValueError:
            raise InputError(f"{TOL_ENV}: not a number: {env[TOL_ENV]!r}") from None
    else:
        tol = DEFAULT_TOL
    if not tol > 0 or not np.isfinite(tol):
        raise InputError(f"tolerance must be positive and finite, got {tol}")
    return tol


def render(out: Outcome, fmt: str, command: str, report: Optional[AuditReport]) -> str:
    if fmt == "csv":
        if out.spectrum is None:
            raise InputError(f"{command}: no spectrum to write as csv")
        return format_spectrum_csv(out.spectrum)
    if fmt == "mtx":
        if out.matrix is None:
            raise InputError(f"{command}: no matrix to write as mtx")
        return format_mtx(out.matrix)
    doc = {"command": command}
    if out.matrix is not None:
        doc["dimension"] = int(out.matrix.shape[0])
        doc["matrix"] = out.matrix.tolist()
    if out.small is not None:
        doc["small"] = out.small.tolist()
    if out.spectrum is not None:
        doc["spectrum"] = spectrum_to_json(out.spectrum)
    if out.energy is not None:
        doc["energy"] = out.energy
    doc.update(out.extra)
    if report is not None:
        doc["audit"] = report.to_dict()
    return json.dumps(doc, indent=2) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        tol = resolve_tol(args.tol)
        out = args.fn(args)
        report = out.audit(tol) if args.verify and out.audit is not None else None
        text = render(out, args.format, args.command, report)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (InputError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    if report is not None:
        print(report.to_text().rstrip("\n"), file=sys.stderr)
        if not report.passed:
            return EXIT_AUDIT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
