"""Command-line front end: ``ddforge build|verify|model|export``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import klein
from .design import (build_design, expected_parameters, group_generators, orbit_lambda,
                     triple_census, verify_dd)
from .export import (MalformedDesign, design_to_dict, dumps, field_dict, incidence_text,
                     loads_design)
from .field import FieldError, prime_power
from .ring import RingSpec

log = logging.getLogger("ddforge")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
# above this order verification samples unless --exhaustive is given
FULL_ENUMERATION_MAX_Q = 9


class UsageError(Exception):
    pass


def parse_modulus(text):
    if text is None:
        return None
    try:
        return [int(c) for c in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --modulus {text!r}") from exc


def make_ring(q, m, modulus=None) -> RingSpec:
    try:
        prime_power(q)
        return RingSpec.build(q, m, parse_modulus(modulus))
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def thread_cap():
    raw = os.environ.get("DDFORGE_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"DDFORGE_THREADS must be a positive integer, got {raw!r}")
    return n


def write_out(path, text):
    if not path:
        raise UsageError("an output path is required")
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def read_design(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return loads_design(text)
    except (MalformedDesign, FieldError) as exc:
        raise UsageError(str(exc)) from exc


# -- commands ------------------------------------------------------------------------

def cmd_build(args) -> int:
    R = make_ring(args.q, args.m, args.modulus)
    design = build_design(R)
    rep = verify_dd(design, 3)
    lam = rep.lambda_t
    if args.format == "incidence":
        write_out(args.out, incidence_text(design))
    else:
        write_out(args.out, dumps(design_to_dict(design, lam)))
    print(f"v={design.v} s={design.s} k={design.k} lambda3={lam} blocks={design.b}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    design, header = read_design(args.design)
    R = design.ring
    q, m = R.q, R.m
    sample = None if args.exhaustive or q <= FULL_ENUMERATION_MAX_Q else args.sample
    ok = True

    def line(name, passed, text):
        nonlocal ok
        ok &= passed
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: {text}")

    exp = expected_parameters(q, m)
    declared = {k: header.get(k) for k in ("v", "s", "k")}
    line("header", declared == {k: exp[k] for k in declared}
         and header.get("parallel_classes") == design.parallel_classes,
         f"declared {declared}")

    rep = verify_dd(design, args.t, sample=sample, seed=args.seed)
    line(f"{args.t}-DD axioms", rep.ok, rep.summary())
    if rep.ok:
        line("transversal", rep.transversal, f"k={rep.k} v/s={design.v // design.s}")
    if rep.ok and args.t == 3:
        line("lambda3", rep.lambda_t == exp["lambda3"] == header.get("lambda3"),
             f"counted {rep.lambda_t}, expected {exp['lambda3']}, declared {header.get('lambda3')}")
        line("block count", design.b == exp["b"], f"{design.b} (expected {exp['b']})")
        formula = orbit_lambda(design.b, 1, design.v, design.s, rep.k, 3)
        line("orbit formula", formula == rep.lambda_t, f"lambda3 from |G|/|G_B0|={design.b}: {formula}")

    if not R.aut.is_identity and rep.ok:
        try:
            census = triple_census(design, sample=sample, seed=args.seed,
                                   witness_limit=None if sample is None else sample)
            line("traces and fourth points", census.ok(m), census.summary())
        except ValueError as exc:
            line("traces and fourth points", False, str(exc))
        if q % 2 == 0 and m == 2 and args.t != 4:
            rep4 = verify_dd(design, 4, sample=sample, seed=args.seed)
            line("4-DD", rep4.ok and rep4.lambda_t == 1, rep4.summary())
    elif R.aut.is_identity:
        print("[N/A ] traces and fourth points: sigma = id")
    return EXIT_OK if ok else EXIT_FAIL


def model_certificate(q, m, modulus=None, seed=0, n_triples=5):
    R = make_ring(q, m, modulus)
    design = build_design(R)
    model = klein.KleinModel(design.line)
    reports = [klein.verify_phi_general(model), klein.verify_parallel_lines(model),
               klein.verify_cone(model), klein.verify_cap(model),
               klein.verify_blocks_geometric(model, design)]
    try:
        reports.append(klein.verify_baer(model))
    except ValueError:
        reports.append(klein.ModelReport("baer", True, {}, applicable=False))
    if not R.aut.is_identity:
        line = design.line
        triples = [(line.infinity, line.zero, line.one)]
        rng = np.random.default_rng(seed)
        while len(triples) < n_triples:
            cls = rng.choice(len(line.classes), size=3, replace=False)
            triples.append(tuple(int(rng.choice(line.classes[c])) for c in cls))
        reports += [klein.trace_plane(model, design, *t) for t in triples]
    reports.append(klein.verify_collineations(model, group_generators(R), seed=seed))
    K = R.field
    cert = {
        "field": field_dict(R),
        "q": q,
        "m": m,
        "checks": [r.to_dict() for r in reports],
        "passed": all(r.passed for r in reports),
        "vertex": [K.coeffs(x) for x in model.S],
        "legend": [{"point": i, "coords": [K.coeffs(x) for x in img]}
                   for i, img in enumerate(model.images)],
    }
    return cert, reports


def cmd_model(args) -> int:
    cert, reports = model_certificate(args.q, args.m, args.modulus, args.seed)
    for r in reports:
        tag = "N/A " if not r.applicable else ("PASS" if r.passed else "FAIL")
        extra = f" {r.details['triple']}" if "triple" in r.details else ""
        print(f"[{tag}] {r.name}{extra}")
    text = json.dumps(cert, separators=(",", ":")) + "\n"
    if args.out:
        write_out(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if cert["passed"] else EXIT_FAIL


def cmd_export(args) -> int:
    design, header = read_design(args.design)
    if args.format == "json":
        write_out(args.out, dumps(design_to_dict(design, header.get("lambda3"))))
    else:
        write_out(args.out, incidence_text(design))
    return EXIT_OK


# -- entry point ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddforge",
        description="Divisible designs over twisted dual numbers and their Klein-quadric model.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def field_args(p):
        p.add_argument("--q", type=int, required=True, help="field order q = p^n")
        p.add_argument("--m", type=int, required=True, help="sigma: x -> x^m; q must be a power of m")
        p.add_argument("--modulus", help="irreducible modulus, coefficients constant term first")

    p = sub.add_parser("build", help="construct a design and write it to a file")
    field_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("json", "incidence"), default="json")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check a design file")
    p.add_argument("design")
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true", help="never sample")
    p.add_argument("--sample", type=int, default=2000, help="sample size above q=9")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("model", help="certify the Klein-quadric model")
    field_args(p)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("export", help="re-export a design file")
    p.add_argument("design")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("json", "incidence"), default="incidence")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        thread_cap()
        return args.func(args)
    except UsageError as exc:
        print(f"ddforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
