"""Command-line front door: build, transform and check complexes over JSON.

Exit status is 0 on success, 1 when a check fails (the report carries the
diagnostic) and 2 on unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import builders, cubation, lattice, parity
from .derivative import build_DK, derivative_identity_holds
from .poset import PosetError, RankedPoset, validate_cubical

SCHEMA = "cubeparity/1"


class InputError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("message", ""))
        self.payload = payload


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def load_complex(args, require_lattice: bool = True) -> RankedPoset:
    if getattr(args, "catalogue", None):
        try:
            return builders.catalogue(args.catalogue)
        except builders.UnknownName as exc:
            raise InputError(str(exc)) from None
    if getattr(args, "arrangement", None):
        data = _read_json(args.arrangement)
        normals = data["normals"] if isinstance(data, dict) else data
        try:
            return builders.zonotope_boundary(builders.Arrangement.from_vectors(normals))
        except (builders.NotGeneric, ValueError, TypeError) as exc:
            raise InputError(f"bad arrangement: {exc}") from None
    if getattr(args, "input", None):
        try:
            P = RankedPoset.from_dict(_read_json(args.input))
            return validate_cubical(P, require_lattice=require_lattice)
        except PosetError as exc:
            raise InputError(f"input is not a cubical complex: {exc}") from None
    raise InputError("give one of --catalogue, --arrangement or --input")


def cmd_build(args) -> dict:
    K = load_complex(args)
    return {"f": K.f_vector(), "poset": K.to_dict()}


def cmd_fvec(args) -> dict:
    return {"f": load_complex(args).f_vector()}


def cmd_derive(args) -> dict:
    K = load_complex(args)
    dc = build_DK(K)
    out = {"f": dc.DK.f_vector(), "f_NK": dc.NK.f_vector(), "check_derivative": derivative_identity_holds(K, dc)}
    if args.with_poset:
        out["poset"] = dc.DK.to_dict()
    if not out["check_derivative"]:
        raise CheckFailed({"message": "derivative identity fails", **out})
    return out


def cmd_bicolor(args) -> dict:
    K = load_complex(args, require_lattice=False)
    try:
        col = parity.bicolor(K)
    except parity.Obstruction as exc:
        raise CheckFailed({"message": str(exc), "obstruction_cycle": sorted(exc.cycle)}) from None
    return {"black": sorted(col.black), "white": sorted(col.white), "f_b": len(col.black), "f_w": len(col.white)}


def cmd_eulerian(args) -> dict:
    K = load_complex(args, require_lattice=False)
    try:
        return {"n": parity.eulerian_degree(K)}
    except parity.NotEulerian as exc:
        raise CheckFailed({"message": str(exc), "vertices": list(exc.vertices)}) from None


def cmd_thm52(args) -> dict:
    K = load_complex(args, require_lattice=False)
    try:
        out = parity.theorem52_check(K, chain_level=args.chain_level)
    except parity.HypothesisFailure as exc:
        raise CheckFailed({"message": str(exc), "hypothesis": exc.hypothesis}) from None
    if args.identities:
        ops = parity.ChainOperators(K)
        out["identities"] = ops.check_identities(random.Random(args.seed), trials=args.identities)
        out["seed"] = args.seed
        if not out["identities"]["pass"]:
            raise CheckFailed({"message": "operator identity fails", **out})
    return out


def cmd_lattice(args) -> dict:
    if args.action == "mine":
        return cmd_mine(args)
    L = lattice.span_E(args.d, args.count)
    S = lattice.saturation(L)
    return {
        "d": args.d,
        "rank": L.rank,
        "base": list(L.base),
        "generators": [list(g) for g in L.generators],
        "saturation": [list(g) for g in S.generators],
        "invariants": lattice.smith_invariants(L, S),
    }


def cmd_mine(args) -> dict:
    if args.input:
        vectors = _read_json(args.input)
        if not isinstance(vectors, list) or not vectors:
            raise InputError("expected a nonempty list of integer vectors")
        source = args.input
    else:
        count = args.count if args.count is not None else args.d + 1
        vectors = [lattice.F(args.d, n).as_list() for n in range(count + 1)]
        source = f"F({args.d}, 0..{count})"
    eqs = lattice.mine_modular_equations(vectors)
    return {"source": source, "equations": [e.to_dict() for e in eqs], "moduli": sorted({e.modulus for e in eqs})}


def cmd_cubate(args) -> dict:
    if args.example:
        data = cubation.example(args.example)
    elif args.input:
        data = cubation.ImmersionData.from_dict(_read_json(args.input))
    else:
        raise InputError("give --input or --example")
    try:
        cubation.validate_immersion(data)
    except cubation.CubationError as exc:
        raise InputError(f"invalid immersion: {exc}") from None
    try:
        cub = cubation.quotient_K(data)
        out = {"thm61": cubation.verify_thm61(data, cub)}
        if data.d % 2:
            out["cor62"] = cubation.verify_cor62(data, cub)
    except (cubation.CubationError, AssertionError) as exc:
        raise CheckFailed({"message": str(exc), "error": type(exc).__name__}) from None
    out["f"] = cub.f
    if args.with_poset:
        out["poset"] = cub.Kop.to_dict()
    return out


def cmd_validate(args) -> dict:
    if not args.input:
        raise InputError("validate needs --input")
    P = RankedPoset.from_dict(_read_json(args.input))
    try:
        K = validate_cubical(P, require_lattice=not args.no_lattice)
    except PosetError as exc:
        raise CheckFailed({"message": str(exc), "error": type(exc).__name__}) from None
    return {"cubical": True, "f": K.f_vector()}


def cmd_catalogue(args) -> dict:
    names = builders.catalogue_names()
    if args.fvectors:
        return {"complexes": {n: builders.catalogue(n).f_vector() for n in names}}
    return {"names": names}


def _complex_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--catalogue", metavar="NAME", help="named complex, e.g. cube4, zono(3,5), 4gon*cube3")
    g.add_argument("--arrangement", metavar="FILE", help='JSON {"normals": [[...], ...]}')
    g.add_argument("--input", metavar="FILE", help="poset JSON ('-' for stdin)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for random chain checks")
    common.add_argument("--format", choices=["json"], default="json")

    ap = argparse.ArgumentParser(prog="cubeparity", description="Cubical complexes, derivative complexes and f-vector parity checks.")
    sub = ap.add_subparsers(dest="verb", required=True)

    for verb, fn, helptext in [
        ("build", cmd_build, "construct and validate a complex"),
        ("fvec", cmd_fvec, "f-vector"),
        ("derive", cmd_derive, "derivative complex and the derivative identity"),
        ("bicolor", cmd_bicolor, "vertex bicoloring or an odd-cycle obstruction"),
        ("eulerian", cmd_eulerian, "common Euler characteristic of vertex links"),
        ("thm52", cmd_thm52, "parity of odd-dimensional face counts"),
    ]:
        p = sub.add_parser(verb, help=helptext, parents=[common])
        _complex_args(p)
        p.set_defaults(func=fn)
        if verb == "derive":
            p.add_argument("--with-poset", action="store_true")
        if verb == "thm52":
            p.add_argument("--chain-level", action="store_true", help="also check the P_i chains")
            p.add_argument("--identities", type=int, default=0, metavar="N", help="rounds of random-chain identity checks")

    p = sub.add_parser("lattice", help="affine span of zonotopal f-vectors, or mine its equations", parents=[common])
    p.add_argument("action", nargs="?", choices=["span", "mine"], default="span")
    p.add_argument("--dim", "--d", dest="d", type=int, default=3)
    p.add_argument("--count", type=int, default=None, help="use F(d, 0..count)")
    p.add_argument("--input", help="JSON list of integer vectors (mine only)")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("mine", help="modular equations satisfied by a set of vectors", parents=[common])
    p.add_argument("--input", help="JSON list of integer vectors")
    p.add_argument("--dim", "--d", dest="d", type=int, default=3)
    p.add_argument("--count", type=int, default=None)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("cubate", help="cubical sphere from a normal crossing immersion", parents=[common])
    p.add_argument("--input", help="immersion JSON")
    p.add_argument("--example", choices=cubation.EXAMPLES)
    p.add_argument("--with-poset", action="store_true")
    p.set_defaults(func=cmd_cubate)

    p = sub.add_parser("validate", help="check that a poset JSON is a cubical complex", parents=[common])
    p.add_argument("--input", required=False)
    p.add_argument("--no-lattice", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("catalogue", help="list named complexes", parents=[common])
    p.add_argument("--fvectors", action="store_true")
    p.set_defaults(func=cmd_catalogue)
    return ap


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = {"schema": SCHEMA, "command": args.verb}
    try:
        report.update(args.func(args))
        status = 0
    except CheckFailed as exc:
        report.update({"pass": False, **exc.payload})
        status = 1
    except (InputError, PosetError, cubation.CubationError, lattice.NotStabilized, ValueError) as exc:
        report.update({"error": type(exc).__name__, "message": str(exc)})
        status = 2
    text = dumps(report)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
