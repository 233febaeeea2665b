"""Command line interface: ``multitile <subcommand> ...``.

Payloads are JSON on stdout (SVG for ``render``); diagnostics go to stderr.
Exit status is 0 for a positive result, 1 for a negative one and 2 for bad
input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, Optional, Sequence

from . import classifier, multitiling, oracle, render, serialize, wheels
from .geometry import InvalidPolygon, SingularMatrix, Vec2

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (
    serialize.FormatError,
    InvalidPolygon,
    SingularMatrix,
    multitiling.ParamOutOfRange,
    multitiling.VertexOutsideW,
    multitiling.NotConvex,
    multitiling.InvalidInstance,
    wheels.WindowTooSmall,
    classifier.WrongArity,
    ZeroDivisionError,
)


class InputError(Exception):
    pass


def _read_payload(args) -> Any:
    if args.json is not None:
        text, source = args.json, "--json"
    elif args.input in (None, "-"):
        text, source = sys.stdin.read(), "stdin"
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
        source = args.input
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _each(payload, parse: Callable) -> tuple[list, bool]:
    """Parse a single item or a batch list; returns (items, was_batch)."""
    if isinstance(payload, dict) and "items" in payload and isinstance(payload["items"], list):
        return [parse(p, f"items[{i}]") for i, p in enumerate(payload["items"])], True
    if isinstance(payload, list) and payload and isinstance(payload[0], dict):
        return [parse(p, f"[{i}]") for i, p in enumerate(payload)], True
    return [parse(payload, "input")], False


def _emit(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _emit_json(args, payload) -> None:
    _emit(args, json.dumps(payload, indent=2) + "\n")


def _param(text: Optional[str]):
    """A rational ``p/q`` or a point ``x,y``."""
    if text is None:
        return None
    if "," in text:
        parts = text.split(",")
        if len(parts) != 2:
            raise serialize.FormatError(f"--param: expected 'x,y', got {text!r}")
        return Vec2(serialize.parse_rational(parts[0], "--param"), serialize.parse_rational(parts[1], "--param"))
    return serialize.parse_rational(text, "--param")


def _instance_from_args(args):
    if getattr(args, "family", None):
        return multitiling.family_instance(args.family, _param(args.param))
    return serialize.parse_instance(_read_payload(args))


# -- subcommands -------------------------------------------------------------


def cmd_classify(args) -> int:
    polys, batch = _each(_read_payload(args), serialize.parse_polygon)
    out, ok = [], True
    for P in polys:
        if args.fivefold:
            match = multitiling.classify_fivefold_family(P)
            rec = match.to_dict() if match else {"kind": None}
            ok &= match is not None
        else:
            rep = classifier.classify(P, eps_angle=args.eps, eps_len=args.eps)
            rec = rep.to_json()
            rec["fedorov"] = classifier.fedorov_check(P)
            ok &= rep.verdict == "Tile"
        if P.reoriented:
            print("note: clockwise input was reoriented", file=sys.stderr)
        out.append(rec)
    _emit_json(args, out if batch else out[0])
    return EXIT_OK if ok else EXIT_NEGATIVE


def _parse_pair(value, where):
    if not isinstance(value, dict):
        raise serialize.FormatError(f"{where}: expected an object with polygon and lattice")
    P = serialize.parse_polygon(value.get("polygon"), f"{where}.polygon")
    L = serialize.parse_lattice(value.get("lattice"), f"{where}.lattice")
    return P, L


def cmd_bolle(args) -> int:
    if args.family:
        inst = multitiling.family_instance(args.family, _param(args.param))
        pairs, batch = [(inst.polygon, inst.lattice)], False
    else:
        pairs, batch = _each(_read_payload(args), _parse_pair)
    out = [multitiling.bolle_check(P, L).to_dict() for P, L in pairs]
    _emit_json(args, out if batch else out[0])
    return EXIT_OK if all(r["passed"] for r in out) else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    if args.family:
        insts, batch = [multitiling.family_instance(args.family, _param(args.param))], False
    else:
        insts, batch = _each(_read_payload(args), serialize.parse_instance)
    out, ok = [], True
    for inst in insts:
        if args.mode == "exact":
            rep = oracle.exact_uniform_multiplicity(inst.polygon, inst.lattice, expected=inst.fold)
            verified = rep.uniform and rep.fold == inst.fold
        else:
            rep = oracle.sampled_multiplicity(inst.polygon, inst.lattice, args.n, args.seed)
            verified = rep.histogram == {inst.fold: args.n}
        rec = rep.to_dict()
        rec["claimed_fold"] = inst.fold
        rec["verified"] = verified
        ok &= verified
        out.append(rec)
    _emit_json(args, out if batch else out[0])
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_family(args) -> int:
    inst = multitiling.family_instance(args.name, _param(args.param))
    _emit_json(args, serialize.encode_instance(inst))
    return EXIT_OK


def cmd_wheels(args) -> int:
    inst = _instance_from_args(args)
    patch = wheels.build_patch(inst.polygon, inst.lattice, wheels.Window.square(args.window), inst.fold)
    rep = wheels.check_equation2(patch)
    _emit_json(args, rep.to_dict())
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_search(args) -> int:
    polys, batch = _each(_read_payload(args), serialize.parse_polygon)
    out = []
    for P in polys:
        found = multitiling.lattice_multiplicity_search(P, args.pool_bound)
        out.append(None if found is None else {"lattice": serialize.encode(found[0]), "fold": found[1]})
    _emit_json(args, out if batch else out[0])
    return EXIT_OK if all(r is not None for r in out) else EXIT_NEGATIVE


def cmd_render(args) -> int:
    inst = _instance_from_args(args)
    patch = wheels.build_patch(inst.polygon, inst.lattice, wheels.Window.square(args.window), inst.fold)
    _emit(args, render.render_svg(patch, render.SvgStyle(mark_lattice=args.mark_lattice)))
    return EXIT_OK


def cmd_archimedean(args) -> int:
    verdict = classifier.archimedean_vertex_check(args.sequence)
    _emit_json(args, {"sequence": args.sequence, "verdict": verdict})
    return EXIT_OK if verdict == "Listed" else EXIT_NEGATIVE


# -- parser ------------------------------------------------------------------


def _add_io(p: argparse.ArgumentParser, payload: bool = True) -> None:
    if payload:
        src = p.add_mutually_exclusive_group()
        src.add_argument("-i", "--input", help="JSON input file ('-' for stdin, the default)")
        src.add_argument("--json", help="inline JSON input")
    p.add_argument("-o", "--output", help="output file (default stdout)")


def _add_family(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["example1", "octA", "octB", "octAp", "octBp", "decagon"],
                   help="use a built-in family member instead of JSON input")
    p.add_argument("--param", help="family parameter: p/q, or x,y for the decagon vertex")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multitile", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="tile-type membership of convex polygons")
    _add_io(p)
    p.add_argument("--eps", type=float, default=classifier.EPS_ANGLE, help="angle/length tolerance")
    p.add_argument("--fivefold", action="store_true",
                   help="report the five-fold lattice tile family instead")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bolle", help="Bolle's criterion for {polygon, lattice}")
    _add_io(p)
    _add_family(p)
    p.set_defaults(func=cmd_bolle)

    p = sub.add_parser("verify", help="covering multiplicity oracle on an instance")
    _add_io(p)
    _add_family(p)
    p.add_argument("--mode", choices=["exact", "sample"], default="exact")
    p.add_argument("--n", type=int, default=10_000, help="sample count (sample mode)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (sample mode)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("family", help="emit a family instance as JSON")
    _add_io(p, payload=False)
    p.add_argument("--name", required=True, choices=["example1", "octA", "octB", "octAp", "octBp", "decagon"])
    p.add_argument("--param", help="p/q, or x,y for the decagon vertex")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("wheels", help="check phi + varphi = fold at patch vertices")
    _add_io(p)
    _add_family(p)
    p.add_argument("--window", default="4", help="half-width r of the window [-r, r]^2")
    p.set_defaults(func=cmd_wheels)

    p = sub.add_parser("search", help="heuristic smallest-fold lattice search")
    _add_io(p)
    p.add_argument("--pool-bound", type=int, default=4)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("render", help="SVG drawing of a patch")
    _add_io(p)
    _add_family(p)
    p.add_argument("--window", default="3", help="half-width r of the window [-r, r]^2")
    p.add_argument("--mark-lattice", action="store_true", help="draw the translation vectors")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("archimedean", help="check a cyclic Archimedean vertex type")
    p.add_argument("sequence", nargs="+", type=int)
    _add_io(p, payload=False)
    p.set_defaults(func=cmd_archimedean)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "window"):
            args.window = serialize.parse_rational(args.window, "--window")
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
