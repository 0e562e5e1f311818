"""Batch command-line front end with deterministic JSON reports.

Exit codes: 0 = pass/success, 1 = the checked property fails, 2 = input
error (malformed JSON, invariant violations, caps), 3 = disagreement in
the `equivalence` cross-check (which would indicate a bug).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .emerton import candidate_table, check_emerton_condition
from .filtration import (
    TransversalityError,
    build_transverse_filtration,
    check_admissible,
)
from .frobenius import build_modified_frobenius, realize_matrices
from .model import (
    ModuleSpec,
    SpecError,
    WeightProfile,
    fraction_to_str,
    profile_from_dict,
    spec_from_dict,
    spec_to_dict,
    validate_spec,
)
from .ordering import canonical_order, check_not_precede
from .pairs import fuzz_special_pairs
from .slopes import check_all_block_orders, check_slope_chain
from .subobjects import (
    CapExceededError,
    DEFAULT_CAP,
    enumerate_concrete_subobjects,
)

SUBCOMMANDS = (
    "order",
    "check-iii",
    "check-emerton",
    "build-phi",
    "subobjects",
    "build-filtration",
    "verify-admissible",
    "equivalence",
    "fuzz-special",
)


def _digest(path: str) -> dict:
    with open(path, "rb") as fh:
        data = fh.read()
    return {"path": path, "sha256": hashlib.sha256(data).hexdigest()}


def _load_spec(path: str) -> ModuleSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def _load_weights(path: str) -> WeightProfile:
    with open(path) as fh:
        return profile_from_dict(json.load(fh))


def _cap(args) -> int:
    if getattr(args, "cap", None) is not None:
        return args.cap
    env = os.environ.get("FILTADM_CAP")
    if env is not None:
        return int(env)
    return DEFAULT_CAP


def _emit(report: dict, args) -> None:
    if getattr(args, "timing", False):
        report["timing_ms"] = round((time.perf_counter() - args._t0) * 1000, 3)
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _mat_json(m) -> list:
    return [[fraction_to_str(x) for x in row] for row in m]


def _prepare(args, need_weights: bool):
    spec = _load_spec(args.spec)
    profile = _load_weights(args.weights) if need_weights else None
    validate_spec(spec, profile)
    ordered, partition, perm = canonical_order(spec)
    return spec, profile, ordered, partition, perm


def cmd_order(args) -> int:
    spec, _, ordered, partition, perm = _prepare(args, False)
    ok, pair = check_not_precede(ordered)
    report = {
        "command": "order",
        "inputs": {"spec": _digest(args.spec)},
        "permutation": list(perm),
        "groups": [list(g) for g in partition.groups],
        "groupDims": list(partition.dims),
        "groupSlopes": [fraction_to_str(s) for s in partition.avg_slopes],
        "summands": spec_to_dict(ordered)["summands"],
        "notPrecede": ok,
        "notPrecedeWitness": list(pair) if pair else None,
    }
    _emit(report, args)
    return 0 if ok else 1


def cmd_check_iii(args) -> int:
    _, profile, ordered, _, perm = _prepare(args, True)
    verdict = check_slope_chain(ordered, profile)
    report = {
        "command": "check-iii",
        "inputs": {"spec": _digest(args.spec), "weights": _digest(args.weights)},
        "permutation": list(perm),
        "verdict": verdict.as_dict(),
    }
    _emit(report, args)
    return 0 if verdict.ok else 1


def cmd_check_emerton(args) -> int:
    _, profile, ordered, _, perm = _prepare(args, True)
    verdict = check_emerton_condition(ordered, profile)
    report = {
        "command": "check-emerton",
        "inputs": {"spec": _digest(args.spec), "weights": _digest(args.weights)},
        "permutation": list(perm),
        "verdict": verdict.as_dict(),
        "candidates": candidate_table(ordered, profile, limit=args.max_rows),
    }
    _emit(report, args)
    return 0 if verdict.ok else 1


def cmd_build_phi(args) -> int:
    _, _, ordered, _, perm = _prepare(args, False)
    edges = () if args.no_modify else build_modified_frobenius(ordered)
    realization = realize_matrices(ordered, edges)
    report = {
        "command": "build-phi",
        "inputs": {"spec": _digest(args.spec)},
        "permutation": list(perm),
        "edges": [
            {"src": e.src, "dst": e.dst, "alignment": e.alignment} for e in edges
        ],
        "phi": _mat_json(realization.phi),
        "n": _mat_json(realization.nmat),
        "seeds": {k: fraction_to_str(v) for k, v in sorted(realization.seeds.items())},
    }
    _emit(report, args)
    return 0


def cmd_subobjects(args) -> int:
    _, _, ordered, _, perm = _prepare(args, False)
    edges = build_modified_frobenius(ordered) if args.modified else ()
    realization = realize_matrices(ordered, edges)
    subs = enumerate_concrete_subobjects(realization, cap=_cap(args), seed=args.seed)
    report = {
        "command": "subobjects",
        "inputs": {"spec": _digest(args.spec)},
        "permutation": list(perm),
        "modified": bool(args.modified),
        "count": len(subs),
        "subobjects": [
            {
                "dim": s.rank,
                "basis": _mat_json(s.rows),
                "tN": fraction_to_str(realization.t_n_concrete(s.rows)),
                "levels": [
                    {"family": fid, "twist": tw, "mult": mult}
                    for fid, tw, mult in realization.eigen_multiplicities(s.rows)
                ],
            }
            for s in subs
        ],
    }
    _emit(report, args)
    return 0


def cmd_build_filtration(args) -> int:
    _, profile, ordered, _, perm = _prepare(args, True)
    edges = () if args.no_modify else build_modified_frobenius(ordered)
    realization = realize_matrices(ordered, edges)
    filtration = build_transverse_filtration(ordered, profile, realization, args.seed)
    report = {
        "command": "build-filtration",
        "inputs": {"spec": _digest(args.spec), "weights": _digest(args.weights)},
        "permutation": list(perm),
        "seed": args.seed,
        "attempts": filtration.attempts,
        "bases": [_mat_json(b) for b in filtration.bases],
        "weights": [list(row) for row in profile.weights],
    }
    _emit(report, args)
    return 0


def cmd_verify_admissible(args) -> int:
    _, profile, ordered, _, perm = _prepare(args, True)
    edges = () if args.no_modify else build_modified_frobenius(ordered)
    realization = realize_matrices(ordered, edges)
    filtration = build_transverse_filtration(ordered, profile, realization, args.seed)
    result = check_admissible(
        ordered, profile, realization, filtration, cap=_cap(args), seed=args.seed
    )
    report = {
        "command": "verify-admissible",
        "inputs": {"spec": _digest(args.spec), "weights": _digest(args.weights)},
        "permutation": list(perm),
        "seed": args.seed,
        "attempts": filtration.attempts,
        "modified": not args.no_modify,
        "edges": [
            {"src": e.src, "dst": e.dst, "alignment": e.alignment} for e in edges
        ],
        "verdict": result.as_dict(),
    }
    _emit(report, args)
    return 0 if result.ok else 1


def cmd_equivalence(args) -> int:
    _, profile, ordered, _, perm = _prepare(args, True)
    chain = check_slope_chain(ordered, profile)
    shuffle = check_emerton_condition(ordered, profile)
    agree = chain.ok == shuffle.ok
    report = {
        "command": "equivalence",
        "inputs": {"spec": _digest(args.spec), "weights": _digest(args.weights)},
        "permutation": list(perm),
        "slopeChain": chain.as_dict(),
        "emerton": shuffle.as_dict(),
        "agree": agree,
    }
    _emit(report, args)
    return 0 if agree else 3


def cmd_fuzz_special(args) -> int:
    result = fuzz_special_pairs(args.trials, args.seed)
    report = {
        "command": "fuzz-special",
        "seed": args.seed,
        **result,
    }
    _emit(report, args)
    return 0 if result["failures"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="filtadm",
        description="exact checks and constructions for admissible filtrations "
        "on block-chain Frobenius modules",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, weights=True, seed=False):
        p.add_argument("--spec", required=True, help="module spec JSON file")
        if weights:
            p.add_argument("--weights", required=True, help="weight profile JSON file")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=None, help="dimension cap")
        p.add_argument("--json", action="store_true", help="JSON output (default)")
        p.add_argument("--timing", action="store_true", help="include timing_ms")

    p = sub.add_parser("order", help="canonical summand order and groups")
    common(p, weights=False)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("check-iii", help="slope prefix chain and total equality")
    common(p)
    p.set_defaults(func=cmd_check_iii)

    p = sub.add_parser("check-emerton", help="unitarity and shuffle valuations")
    common(p)
    p.add_argument("--max-rows", type=int, default=50)
    p.set_defaults(func=cmd_check_emerton)

    p = sub.add_parser("build-phi", help="modification edges and exact matrices")
    common(p, weights=False)
    p.add_argument("--no-modify", action="store_true")
    p.set_defaults(func=cmd_build_phi)

    p = sub.add_parser("subobjects", help="enumerate stable subspaces")
    common(p, weights=False, seed=True)
    p.add_argument("--modified", action="store_true")
    p.set_defaults(func=cmd_subobjects)

    p = sub.add_parser("build-filtration", help="sample a transverse filtration")
    common(p, seed=True)
    p.add_argument("--no-modify", action="store_true")
    p.set_defaults(func=cmd_build_filtration)

    p = sub.add_parser("verify-admissible", help="full admissibility verdict")
    common(p, seed=True)
    p.add_argument("--no-modify", action="store_true")
    p.set_defaults(func=cmd_verify_admissible)

    p = sub.add_parser("equivalence", help="cross-check the two slope conditions")
    common(p)
    p.set_defaults(func=cmd_equivalence)

    p = sub.add_parser("fuzz-special", help="randomized special-pair verification")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_fuzz_special)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._t0 = time.perf_counter()
    try:
        return args.func(args)
    except (
        SpecError,
        CapExceededError,
        TransversalityError,
        json.JSONDecodeError,
        OSError,
        ValueError,
    ) as exc:
        report = {
            "command": args.command,
            "error": f"{type(exc).__name__}: {exc}",
        }
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
