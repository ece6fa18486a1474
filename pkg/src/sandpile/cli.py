"""Command line interface: ``sandpile {gamma,group,morphism,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import harmonic as hm
from .graph import GraphError, SinkedGraph, path_graph
from .rect import RectMorphismSpec, epi_apply, gamma, mono_apply, rect
from .verify import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

_TERM = re.compile(r"^(?:(-?\d+)\s*\*\s*)?(?:δ|d|delta)?\s*\(?\s*(\d+)\s*,\s*(\d+)\s*\)?$")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def parse_element(text: str, graph: SinkedGraph) -> tuple[int, ...]:
    """Parse ``"δ(1,1)"``, ``"2*(1,2); (3,1)"`` or ``"0"`` into a configuration."""
    f = [0] * len(graph)
    text = text.strip()
    if text in ("", "0"):
        return tuple(f)
    for term in re.split(r"[;+]", text):
        term = term.strip()
        mt = _TERM.match(term)
        if not mt:
            raise UsageError(f"cannot parse element term {term!r}")
        coef = int(mt.group(1) or 1)
        v = (int(mt.group(2)), int(mt.group(3)))
        if v not in graph.index:
            raise UsageError(f"vertex {v} is not in the source rectangle")
        f[graph.index[v]] += coef
    return tuple(f)


def _load_graph(args) -> tuple[str, SinkedGraph]:
    if args.rect:
        p, q = args.rect
        if p < 2 or q < 2:
            raise UsageError("rectangle sides must be at least 2")
        return f"rect({p},{q})", rect(p, q)
    if args.path is not None:
        if args.path < 2:
            raise UsageError("path length must be at least 2")
        return f"path({args.path})", path_graph(args.path)
    try:
        with open(args.graph) as fh:
            return args.graph, SinkedGraph.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, GraphError) as exc:
        raise InputError(str(exc)) from exc


def _check_dim(n: int, args):
    if n > args.max_dim:
        raise UsageError(f"{n} vertices exceeds --max-dim {args.max_dim}")


def cmd_gamma(args) -> int:
    if args.max_m < 2 or args.max_n < 2:
        raise UsageError("--max-m and --max-n must be at least 2")
    _check_dim((args.max_m - 1) * (args.max_n - 1), args)
    ms = range(2, args.max_m + 1)
    ns = range(2, args.max_n + 1)
    grid = [[gamma(m, n) for n in ns] for m in ms]
    if args.format == "json":
        print(_dump({"m": [str(m) for m in ms], "n": [str(n) for n in ns],
                     "gamma": [[str(x) for x in row] for row in grid]}))
    else:
        width = max(len(str(x)) for row in grid for x in row)
        print("m\\n " + " ".join(f"{n:>{width}}" for n in ns))
        for m, row in zip(ms, grid):
            print(f"{m:<3} " + " ".join(f"{x:>{width}}" for x in row))
    return EXIT_OK


def cmd_group(args) -> int:
    name, g = _load_graph(args)
    _check_dim(len(g), args)
    structure = hm.sandpile_group_structure(g)
    components = hm.interior_cokernel(g)
    out = {
        "graph": name,
        "vertices": str(len(g)),
        "boundary": str(len(g.boundary)),
        "invariant_factors": [str(d) for d in structure.invariant_factors],
        "order": str(structure.order),
        "det": str(g.det),
        "order_matches_det": structure.order == g.det and structure.free_rank == 0,
        "extended_torus_dimension": str(len(g.boundary)),
        "interior_cokernel": [str(d) for d in components.invariant_factors],
    }
    if args.format == "json":
        print(_dump(out))
    else:
        print(f"{name}: {structure}  (order {structure.order}, |det Δ| = {g.det})")
        print(f"extended group: torus of dimension {len(g.boundary)}, components {components}")
    return EXIT_OK


def cmd_morphism(args) -> int:
    try:
        spec = RectMorphismSpec(args.p, args.q, args.m, args.n, args.direction)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _check_dim(len(spec.big), args)
    src = spec.source
    f = parse_element(args.element, src)
    psi = hm.strict_harmonic_from_config(src, f)
    image = spec.apply(psi)
    out = {
        "spec": {"p": str(spec.p), "q": str(spec.q), "m": str(spec.m), "n": str(spec.n),
                 "direction": spec.direction},
        "source": psi.to_json(),
        "source_order": str(psi.order),
        "image": image.to_json(),
        "image_order": str(image.order),
        "image_strictly_harmonic": hm.is_strictly_harmonic(spec.target, image),
    }
    if args.roundtrip:
        if spec.direction == "mono":
            back = epi_apply(image, spec.p, spec.q, spec.m, spec.n)
            out["roundtrip_is_mn_times_identity"] = back == (spec.m * spec.n) * psi
        else:
            back = epi_apply(mono_apply(image, spec.p, spec.q, spec.m, spec.n), spec.p, spec.q, spec.m, spec.n)
            out["roundtrip_is_mn_times_identity"] = back == (spec.m * spec.n) * image
    if args.format == "json":
        print(_dump(out))
    else:
        small, big = f"Γ({spec.p},{spec.q})", f"Γ({spec.m * spec.p},{spec.n * spec.q})"
        print(f"{spec.direction} " + (f"{small} -> {big}" if spec.direction == "mono" else f"{big} -> {small}"))
        print(f"source element : {' '.join(out['source'])}  (order {out['source_order']})")
        print(f"image          : {' '.join(out['image'])}  (order {out['image_order']})")
        print(f"strictly harmonic: {out['image_strictly_harmonic']}")
        if args.roundtrip:
            print(f"epi∘mono = mn·id: {out['roundtrip_is_mn_times_identity']}")
    ok = out["image_strictly_harmonic"] and out.get("roundtrip_is_mn_times_identity", True)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed)
    if args.format == "json":
        print(report.dumps())
    else:
        print(report.summary())
        bad = report.first_failure()
        if bad is not None:
            print("first failure:", _dump(bad.to_json()))
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sandpile", description=__doc__.splitlines()[0])
    parser.add_argument("--max-dim", type=int, default=400,
                        help="refuse graphs with more non-sink vertices than this")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("gamma", help="table of rectangle spanning-tree counts")
    p.add_argument("--max-m", type=int, default=6)
    p.add_argument("--max-n", type=int, default=6)
    fmt(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("group", help="invariant factors of a sandpile group")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--rect", type=int, nargs=2, metavar=("P", "Q"))
    src.add_argument("--path", type=int, metavar="N")
    src.add_argument("--graph", metavar="FILE", help="graph JSON file")
    fmt(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("morphism", help="apply a rectangle mono/epimorphism")
    for name in ("p", "q"):
        p.add_argument(f"--{name}", type=int, required=True)
    for name in ("m", "n"):
        p.add_argument(f"--{name}", type=int, default=1)
    p.add_argument("--direction", choices=("mono", "epi"), default="mono")
    p.add_argument("--element", default="0",
                   help="configuration on the source rectangle, e.g. 'δ(1,1)' or '2*(1,1); (2,1)'")
    p.add_argument("--roundtrip", action="store_true", help="also check epi∘mono = mn·id")
    fmt(p)
    p.set_defaults(func=cmd_morphism)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    fmt(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_dim <= 0:
        parser.error("--max-dim must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sandpile: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"sandpile: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
