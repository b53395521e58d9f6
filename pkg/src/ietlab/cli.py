"""ietlab: command-line front end.

Usage:
    ietlab analyze spec.json [-o report.json]
    ietlab abelianization spec.json
    ietlab compare a.json b.json
    ietlab construct tower 3
    ietlab construct catalog nvs-A5
    ietlab verify conjugation | all

Exit codes: 0 ok, 1 a verification failed, 2 bad input, 3 closure cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import jsonschema

from .classify import DEFAULT_WITNESS_BUDGET, abelianization, classify, non_isomorphism
from .constructions import CATALOG_NAMES, MAX_TOWER, catalog_entry, solvable_tower
from .haq import HaqSpec
from .permgrp import CapExceeded

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_CAP = 3

_PERM = {
    "oneOf": [
        {"type": "string", "pattern": r"^\s*(\(\s*\)|(\(\s*\d+(\s*,\s*\d+)*\s*\)\s*)+)\s*$"},
        {"type": "array", "items": {"type": "integer", "minimum": 1}},
    ]
}

SPEC_SCHEMA = {
    "type": "object",
    "required": ["q", "Qgens"],
    "properties": {
        "q": {"type": "integer", "minimum": 1},
        "Qgens": {"type": "array", "items": _PERM},
        "s": {"type": "integer", "minimum": 1},
        "alphas": {
            "oneOf": [
                {"const": "sqrt-primes"},
                {
                    "type": "object",
                    "required": ["sqrt"],
                    "properties": {"sqrt": {"type": "array", "items": {"type": "integer", "minimum": 2}}},
                    "additionalProperties": False,
                },
            ]
        },
        "rotations": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "name": {"type": "string"},
    },
    "additionalProperties": False,
}


class InputError(Exception):
    pass


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_spec(path: str) -> HaqSpec:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"{path}: {e}") from e
    try:
        jsonschema.validate(obj, SPEC_SCHEMA)
    except jsonschema.ValidationError as e:
        raise InputError(f"{path}: schema violation: {e.message}") from e
    try:
        return HaqSpec.from_json(obj)
    except (ValueError, KeyError) as e:
        raise InputError(f"{path}: {e}") from e


def parse_probes(text: str | None, spec: HaqSpec):
    """"1,-1,2" (multiples of the first rotation) or a JSON list of coefficient vectors."""
    if text is None:
        return None
    try:
        val = json.loads(text) if text.strip().startswith("[") else [int(t) for t in text.split(",")]
    except ValueError as e:
        raise InputError(f"bad --probes value: {e}") from e
    out = []
    for p in val:
        v = [p] + [0] * (spec.s - 1) if isinstance(p, int) else list(p)
        if len(v) != spec.s or not all(isinstance(x, int) for x in v) or not any(v):
            raise InputError(f"probe {p!r} is not a nonzero vector of {spec.s} integers")
        out.append(tuple(v))
    return out


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    spec = load_spec(args.spec)
    try:
        rep = classify(spec, budget=args.witness_budget, probes=parse_probes(args.probes, spec))
    except CapExceeded as e:
        partial = {
            "error": f"closure cap exceeded: {e}",
            "partial": {"q": spec.q, "W_order": spec.W.order(), "V_order": spec.V.order()},
        }
        _write(dump(partial), args.output)
        return EXIT_CAP
    print(rep.summary())
    if args.output:
        Path(args.output).write_text(rep.to_json())
        print(f"report written to {args.output}")
    return EXIT_OK


def cmd_abelianization(args) -> int:
    spec = load_spec(args.spec)
    ab = abelianization(spec, budget=args.witness_budget, probes=parse_probes(args.probes, spec))
    sys.stdout.write(dump(ab.to_dict(realization=True)))
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = load_spec(args.a), load_spec(args.b)
    ev = non_isomorphism(a, b, budget=args.witness_budget)
    _write(dump({"evidence": ev, "verdict": "not isomorphic" if ev else "no evidence"}), args.output)
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.kind == "tower":
        try:
            n = int(args.name)
        except ValueError:
            raise InputError(f"tower level must be an integer, got {args.name!r}") from None
        if not 1 <= n <= MAX_TOWER:
            raise InputError(f"tower level must be in 1..{MAX_TOWER}")
        lvl = solvable_tower(n)
        out = lvl.to_json()
        out["order"] = lvl.group.order()
        out["derived_length"] = lvl.group.derived_length()
    else:
        try:
            out = catalog_entry(args.name).to_json()
        except KeyError:
            raise InputError(f"unknown catalog entry {args.name!r}; known: {', '.join(CATALOG_NAMES)}") from None
        out["name"] = args.name
    _write(dump(out), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .suites import SUITES, run_all, run_suite

    if args.suite == "all":
        results = run_all(seed=args.seed)
    elif args.suite in SUITES:
        results = run_suite(args.suite, seed=args.seed, n=args.n)
    else:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ietlab", description="Classify groups generated by rotations and rational IETs.")
    p.add_argument("--closure-cap", type=int, help="largest group listed element by element")
    p.add_argument("--witness-budget", type=int, default=DEFAULT_WITNESS_BUDGET, help="max witness word length")
    p.add_argument("--probes", help='rotation probes: "1,-1,2" or JSON vectors "[[1,0],[0,1]]"')
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify a spec and write a report")
    a.add_argument("spec")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_analyze)

    a = sub.add_parser("abelianization", help="abelianization F x Z^s, or bounds on F")
    a.add_argument("spec")
    a.set_defaults(func=cmd_abelianization)

    a = sub.add_parser("compare", help="non-isomorphism evidence for two specs")
    a.add_argument("a")
    a.add_argument("b")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_compare)

    a = sub.add_parser("construct", help="build a tower level or a catalog spec")
    a.add_argument("kind", choices=["tower", "catalog"])
    a.add_argument("name", help="tower level n, or catalog entry name")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_construct)

    a = sub.add_parser("verify", help="run a property suite, or all of them")
    a.add_argument("suite")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("-n", type=int, help="number of random cases")
    a.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get("IETLAB_CLOSURE_CAP")
    if args.closure_cap is not None:
        os.environ["IETLAB_CLOSURE_CAP"] = str(args.closure_cap)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as e:
        print(f"error: closure cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    finally:
        if saved is None:
            os.environ.pop("IETLAB_CLOSURE_CAP", None)
        else:
            os.environ["IETLAB_CLOSURE_CAP"] = saved


if __name__ == "__main__":
    sys.exit(main())
