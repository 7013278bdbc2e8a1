"""Command-line entry point.

Exit status: 0 success, 2 bad input, 3 verification failure, 4 solver gave
no verdict within its budget.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from bookembed import barnette, planar
from bookembed.embedding import EmbeddingGraphMismatch, read_embedding, verify, write_embedding
from bookembed.encoding import MalformedSolverOutput, Symmetry, Verdict, encode, to_dimacs, write_varmap
from bookembed.graph import GraphError, named_graph, read_graph, write_graph
from bookembed.render import render_svg
from bookembed.solver import SolverProcessFailed, decide_dbt, embed

BAD_INPUT, INVALID, UNKNOWN = 2, 3, 4


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _symmetry(text: str) -> Symmetry:
    try:
        return Symmetry.parse(text)
    except (KeyError, ValueError):
        raise InputError(f"unknown symmetry flags {text!r}") from None


def cmd_gen(args) -> int:
    g = named_graph(args.name, args.k, args.k2)
    _emit(write_graph(g), args.output)
    if args.rotation:
        rs = planar.embedded_named(args.name, args.k)
        Path(args.rotation).write_text(planar.write_rotation(rs))
    return 0


def cmd_verify(args) -> int:
    g = read_graph(_read(args.graph))
    emb = read_embedding(g, _read(args.embedding))
    report = verify(g, emb, args.dispersable)
    for v in report.violations:
        print(f"{v.kind} {' '.join(map(str, v.witness))}", file=sys.stderr)
    if not report.valid:
        return INVALID
    print("valid")
    return 0


def cmd_encode(args) -> int:
    g = read_graph(_read(args.graph))
    f, vm = encode(g, args.pages, args.dispersable, _symmetry(args.symmetry))
    _emit(to_dimacs(f), args.output)
    if args.map:
        Path(args.map).write_text(write_varmap(vm))
    return 0


def _write_witness(g, emb, path: str | None, dispersable: bool) -> int:
    text = write_embedding(g, emb)
    # the witness must survive a round trip through its file format
    back = read_embedding(g, text)
    if back != emb or not verify(g, back, dispersable).valid:
        print("witness failed to re-verify", file=sys.stderr)
        return INVALID
    _emit(text, path)
    return 0


def cmd_solve(args) -> int:
    g = read_graph(_read(args.graph))
    res = embed(g, args.pages, args.dispersable, args.backend, args.budget,
                _symmetry(args.symmetry), args.seed)
    print(res.verdict.name)
    if res.verdict is Verdict.UNKNOWN:
        return UNKNOWN
    if res.verdict is Verdict.SAT:
        return _write_witness(g, res.embedding, args.output, args.dispersable)
    return 0


def cmd_dbt(args) -> int:
    g = read_graph(_read(args.graph))
    dispersable = not args.ordinary
    res = decide_dbt(g, args.lower, args.upper, args.backend, args.budget, dispersable,
                     _symmetry(args.symmetry), args.seed)
    for p, v in sorted(res.verdicts.items()):
        print(f"p={p} {v.name}", file=sys.stderr)
    if res.status == "unknown":
        print("unknown")
        return UNKNOWN
    if res.status == "none":
        print("none")
        return 0
    print(res.k)
    return _write_witness(g, res.witness, args.output, dispersable)


def cmd_barnette(args) -> int:
    g = read_graph(_read(args.graph))
    rs = planar.read_rotation(g, _read(args.rotation))
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    res = barnette.dispersable_embedding(rs, check_invariants=True, seed=args.seed, trace=trace)
    cyc = res.cycle
    print(f"cycle {len(cyc.cycle)} vertices, {len(cyc.edges_on)} edges on cycle, "
          f"{len(cyc.virtual)} virtual chords", file=sys.stderr)
    return _write_witness(g, res.embedding, args.output, True)


def cmd_render(args) -> int:
    g = read_graph(_read(args.graph))
    emb = read_embedding(g, _read(args.embedding))
    _emit(render_svg(g, emb), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bookembed", description="Dispersable book embeddings.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write a named graph")
    s.add_argument("name")
    s.add_argument("k", nargs="?", type=int)
    s.add_argument("k2", nargs="?", type=int)
    s.add_argument("-o", "--output")
    s.add_argument("-r", "--rotation", help="also write a plane rotation (planar instances only)")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("verify", help="check an embedding file")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-e", "--embedding", required=True)
    s.add_argument("--dispersable", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("encode", help="write the CNF for a fixed page count")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-p", "--pages", type=int, required=True)
    s.add_argument("--dispersable", action="store_true")
    s.add_argument("-o", "--output")
    s.add_argument("--map", help="sidecar file naming every variable")
    s.add_argument("--symmetry", default="default")
    s.set_defaults(func=cmd_encode)

    for name, func in (("solve", cmd_solve), ("dbt", cmd_dbt)):
        s = sub.add_parser(name, help="decide a page count" if name == "solve" else "least page count")
        s.add_argument("-g", "--graph", required=True)
        if name == "solve":
            s.add_argument("-p", "--pages", type=int, required=True)
            s.add_argument("--dispersable", action="store_true")
        else:
            s.add_argument("--lower", type=int)
            s.add_argument("--upper", type=int)
            s.add_argument("--ordinary", action="store_true", help="plain book thickness instead")
        s.add_argument("--backend", default="internal", help="internal, external or cmd:<solver command>")
        s.add_argument("--budget", type=float, help="wall-clock seconds")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--symmetry", default="default")
        s.add_argument("-o", "--output", help="witness file (stdout if omitted)")
        s.set_defaults(func=func)

    s = sub.add_parser("barnette", help="3-page dispersable embedding of a Barnette graph")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-r", "--rotation", required=True)
    s.add_argument("-o", "--output")
    s.add_argument("--trace", action="store_true")
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_barnette)

    s = sub.add_parser("render", help="SVG chord diagram")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-e", "--embedding", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GraphError, EmbeddingGraphMismatch, planar.BadRotation,
            planar.NotPlanarEmbedding, barnette.BarnetteError, MalformedSolverOutput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except SolverProcessFailed as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
