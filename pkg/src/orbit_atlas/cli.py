"""Command-line interface.

Exit codes: 0 success (or comparison equal), 1 mismatch or failed check,
2 usage or input error.  Every command is deterministic given its flags.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys

from . import __version__
from .classify import (
    canonical_reduce,
    census_formula,
    census_to_csv,
    census_to_json,
    census_to_markdown,
    census_total,
    orbit_invariants,
    orbit_size_formula,
    orbit_type,
    traceless_valuation,
)
from .errors import OrbitAtlasError
from .mat2 import evaluate_word, factor_unipotent, from_literal, word_to_json
from .orbits import (
    DEFAULT_BUDGET,
    census_brute,
    compare_census,
    encode_mat,
    orbit_of,
    partition_all,
    write_atlas,
)
from .quat import Quat, build_iso, from_matrix, quat_from_literal, to_matrix
from .rings import format_modulus, ring_from_string
from .selftest import run_selftest

ENV_THREADS = "ORBIT_ATLAS_THREADS"


def _threads_default() -> int:
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _write_out(text: str, out: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_matrix_or_quat(ring, literal: str):
    """Matrix literal, quaternion literal, or quaternion JSON 4-tuple;
    quaternions are transported through the matrix model."""
    stripped = literal.strip()
    if stripped.startswith("[["):
        return from_literal(ring, literal), None
    q = quat_from_literal(ring, literal)
    iso = build_iso(ring)
    return to_matrix(iso, q), q


def cmd_ring_info(args) -> int:
    ring = ring_from_string(args.ring)
    info = {
        "ring": ring.spec_string,
        "family": ring.family.value,
        "p": ring.p,
        "r": ring.r,
        "n": ring.n,
        "q": ring.q,
        "size": ring.size,
        "radical_generator": ring.x_idx,
        "teichmuller_generator": ring.g_idx,
        "modulus": format_modulus(ring.spec),
        "radical_layers": {f"|J^{k}|": ring.q ** (ring.n - k) for k in range(ring.n + 1)},
        "units": ring.unit_count,
    }
    if args.format == "json":
        _write_out(json.dumps(info, indent=2), args.out)
    else:
        lines = [f"ring: {info['ring']}", f"family: {info['family']}"]
        lines.append(f"q: {ring.q} (p={ring.p}, r={ring.r})")
        lines.append(f"n: {ring.n}")
        lines.append(f"size: {ring.size}")
        lines.append(f"radical generator x: {ring.x_idx}")
        lines.append(f"teichmuller generator g: {ring.g_idx}")
        lines.append(f"modulus: {info['modulus']}")
        lines.append("radical layers: " + "  ".join(f"|J^{k}|={ring.q ** (ring.n - k)}" for k in range(ring.n + 1)))
        lines.append(f"units: {ring.unit_count}")
        _write_out("\n".join(lines), args.out)
    return 0


def cmd_census(args) -> int:
    ring = ring_from_string(args.ring)
    method = args.method
    if method == "auto":
        method = "both" if ring.size**4 <= 1 << 20 else "formula"
    if args.atlas and method == "formula":
        print("error: --atlas requires --method brute or both", file=sys.stderr)
        return 2
    multiplicity = not args.no_scalar_multiplicity
    formula = census_formula(ring, scalar_multiplicity=multiplicity)
    brute = None
    if method in ("brute", "both"):
        part = partition_all(ring, budget=args.budget, threads=args.threads)
        brute = census_brute(part)
        if args.atlas:
            write_atlas(part, args.atlas)
    rows = formula if method != "brute" else brute
    emit = {"json": census_to_json, "csv": census_to_csv, "md": census_to_markdown}[args.format]
    _write_out(emit(rows), args.out)
    if method == "both":
        cmp = compare_census(formula, brute, "formula", "brute")
        print(cmp.report(), file=sys.stderr)
        if not cmp.equal:
            return 1
        if census_total(formula) != ring.size**4:
            print(f"size*count total {census_total(formula)} != {ring.size ** 4}", file=sys.stderr)
            return 1
    return 0


def cmd_classify(args) -> int:
    ring = ring_from_string(args.ring)
    A, q = _parse_matrix_or_quat(ring, args.literal)
    delta = traceless_valuation(A)
    record = {
        "ring": ring.spec_string,
        "matrix": A.to_literal(),
        "delta": delta,
        "type": orbit_type(A).value,
        "orbit_size": orbit_size_formula(A),
        "invariants": orbit_invariants(A).to_dict(),
    }
    if q is not None:
        record["quaternion"] = q.to_literal()
    if delta < ring.n:
        cf = canonical_reduce(A)
        record["canonical"] = {
            "d": cf.d,
            "delta": cf.delta,
            "residual": cf.residual.to_literal(),
            "residual_ring": cf.residual.ring.spec_string,
            "word": json.loads(word_to_json(cf.word)),
        }
    if args.format == "json":
        _write_out(json.dumps(record, indent=2), args.out)
    else:
        lines = [f"{k}: {v}" for k, v in record.items() if k not in ("invariants", "canonical")]
        lines.append(f"invariants: {record['invariants']}")
        if "canonical" in record:
            lines.append(f"canonical: {record['canonical']}")
        _write_out("\n".join(lines), args.out)
    return 0


def cmd_orbit(args) -> int:
    ring = ring_from_string(args.ring)
    A, _ = _parse_matrix_or_quat(ring, args.literal)
    members = orbit_of(A, budget=args.budget, threads=args.threads)
    predicted = orbit_size_formula(A)
    record = {
        "ring": ring.spec_string,
        "matrix": A.to_literal(),
        "key": encode_mat(A),
        "orbit_size": len(members),
        "formula_size": predicted,
        "representative": int(members[0]),
        "match": bool(len(members) == predicted),
    }
    _write_out(json.dumps(record, indent=2), args.out)
    return 0 if record["match"] else 1


def cmd_factor(args) -> int:
    ring = ring_from_string(args.ring)
    A = from_literal(ring, args.literal)
    word = factor_unipotent(A)
    if evaluate_word(word, ring) != A:
        print("internal error: word does not re-evaluate to the input", file=sys.stderr)
        return 1
    _write_out(word_to_json(word), args.out)
    return 0


def cmd_iso_check(args) -> int:
    ring = ring_from_string(args.ring)
    iso = build_iso(ring)  # relation checks run at build time
    lines = [f"ring: {ring.spec_string}", f"pair: a={iso.a} b={iso.b}", "relations: ok"]
    size = ring.size
    rng = random.Random(0)

    def random_quat():
        return Quat(ring, *(rng.randrange(size) for _ in range(4)))

    if size**4 <= 1 << 16:
        seen = set()
        for parts in itertools.product(range(size), repeat=4):
            x = Quat(ring, *parts)
            M = to_matrix(iso, x)
            seen.add(M.entries())
            if from_matrix(iso, M) != x:
                print("round trip failed", file=sys.stderr)
                return 1
        if len(seen) != size**4:
            print("transport is not bijective", file=sys.stderr)
            return 1
        lines.append(f"bijectivity: ok ({size ** 4} elements, exhaustive)")
    else:
        for _ in range(args.sample):
            x = random_quat()
            if from_matrix(iso, to_matrix(iso, x)) != x:
                print("round trip failed", file=sys.stderr)
                return 1
        lines.append(f"round trip: ok (sampled, {args.sample} elements)")
    if size**8 <= max(args.sample, 100_000):
        quats = [Quat(ring, *parts) for parts in itertools.product(range(size), repeat=4)]
        checked = 0
        for x, y in itertools.product(quats, repeat=2):
            if to_matrix(iso, x * y) != to_matrix(iso, x) * to_matrix(iso, y):
                print("multiplicativity failed", file=sys.stderr)
                return 1
            checked += 1
        lines.append(f"multiplicativity: ok (exhaustive, {checked} pairs)")
    else:
        for _ in range(args.sample):
            x, y = random_quat(), random_quat()
            if to_matrix(iso, x * y) != to_matrix(iso, x) * to_matrix(iso, y):
                print("multiplicativity failed", file=sys.stderr)
                return 1
        lines.append(f"multiplicativity: ok (sampled, {args.sample} pairs)")
    _write_out("\n".join(lines), args.out)
    return 0


def cmd_selftest(args) -> int:
    results = run_selftest(args.level, inject_corruption=args.inject_corruption)
    ok = True
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        detail = f" ({res.detail})" if res.detail else ""
        print(f"{status} {res.name} [{res.seconds:.2f}s]{detail}")
        ok = ok and res.passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbit-atlas",
        description="Unipotent-conjugation orbits of 2x2 matrices and quaternions over finite local principal rings of odd order.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, ring=True):
        if ring:
            p.add_argument("--ring", required=True, help="ring spec, e.g. Z/3^2, GF(9), GF(9)[u]/u^2, GR(9,2)")
        p.add_argument("--out", help="write the primary output to this file")

    p = sub.add_parser("ring-info", help="structural data of a ring")
    add_common(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(fn=cmd_ring_info)

    p = sub.add_parser("census", help="orbit census: formula, brute force, or both")
    add_common(p)
    p.add_argument("--method", choices=["formula", "brute", "both", "auto"], default="auto")
    p.add_argument("--format", choices=["json", "csv", "md"], default="md")
    p.add_argument("--no-scalar-multiplicity", action="store_true", help="drop the q^delta count factor (the weaker stated form)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max enumeration states")
    p.add_argument("--threads", type=int, default=_threads_default())
    p.add_argument("--atlas", help="also write the per-orbit atlas file here (.gz for compression)")
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("classify", help="classify one matrix or quaternion")
    add_common(p)
    p.add_argument("literal", help='"[[a,b],[c,d]]", "r1+r2*i+r3*j+r4*k", or [r1,r2,r3,r4]')
    p.add_argument("--format", choices=["text", "json"], default="json")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("orbit", help="brute-force one orbit and check the formula")
    add_common(p)
    p.add_argument("literal")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--threads", type=int, default=_threads_default())
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("factor", help="factor a unipotent matrix into an elementary word")
    add_common(p)
    p.add_argument("literal")
    p.set_defaults(fn=cmd_factor)

    p = sub.add_parser("iso-check", help="verify the quaternion-to-matrix transport")
    add_common(p)
    p.add_argument("--sample", type=int, default=100_000, help="pair sample size when exhaustive checking is too large")
    p.set_defaults(fn=cmd_iso_check)

    p = sub.add_parser("selftest", help="run invariant suites")
    add_common(p, ring=False)
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.add_argument("--inject-corruption", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OrbitAtlasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
