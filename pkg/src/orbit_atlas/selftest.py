"""Invariant suites runnable from the CLI (quick) or at full acceptance scale.

Each suite raises AssertionError on the first violated invariant; the runner
turns that into per-suite pass/fail lines and an overall exit status.  The
quick level sticks to rings of at most 9 elements and the numpy backend so
it stays fast in a cold process.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

import numpy as np

from . import classify, mat2, orbits, quat
from ._backend import available_backends
from ._kernels_numpy import decode_keys
from .mat2 import Mat, conj, conj_by_l, conj_by_u, evaluate_word, factor_unipotent, identity, mat
from .orbits import (
    census_brute,
    compare_census,
    decode_key,
    encode_mat,
    group_counts,
    orbit_of,
    partition_all,
    sl2_centralizer_order,
    unipotent_keys,
)
from .rings import Ring, SquareClass, build_ring, parse_ring_spec, ring_from_string


def _rings(specs, **kwargs):
    return [ring_from_string(s, **kwargs) for s in specs]


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _axiom_rings(level, corrupted=None):
    if corrupted is not None:
        return [corrupted]
    if level == "quick":
        return _rings(["Z/3^2", "GF(9)", "GF(3)[u]/u^2"])
    rings = _rings(["Z/3^2", "GF(9)", "GF(3)[u]/u^2", "Z/3^3", "GF(25)", "GR(9,2)", "Z/5^2"])
    rings.append(build_ring(parse_ring_spec("Z/3^6"), materialize_tables=True, use_cache=False))
    return rings


def suite_ring_axioms(level, corrupted=None):
    """Associativity, commutativity, distributivity on all triples."""
    for R in _axiom_rings(level, corrupted):
        tb = R.tables
        S = R.size
        add, mul, neg = tb.add, tb.mul, tb.neg
        idx = np.arange(S)
        assert (add == add.T).all(), f"{R}: addition not commutative"
        assert (mul == mul.T).all(), f"{R}: multiplication not commutative"
        assert (add[0] == idx).all(), f"{R}: 0 is not neutral"
        assert (mul[R.embed_int(1)] == idx).all(), f"{R}: 1 is not neutral"
        assert (add[idx, neg[idx]] == 0).all(), f"{R}: negation broken"
        for a in range(S):
            assert (add[add[a]] == add[a][add]).all(), f"{R}: addition not associative at {a}"
            assert (mul[mul[a]] == mul[a][mul]).all(), f"{R}: multiplication not associative at {a}"
            lhs = mul[a][add]
            rhs = add[mul[a][:, None], mul[a][None, :]]
            assert (lhs == rhs).all(), f"{R}: distributivity fails at {a}"


def suite_radical_structure(level):
    """Radical layer sizes, unit stability under J, valuation conventions."""
    specs = ["Z/3^2", "GF(3)", "GF(9)", "GF(3)[u]/u^2"]
    if level == "full":
        specs += ["Z/3^3", "Z/5^2", "GR(9,2)", "GF(9)[u]/u^2", "GF(27)"]
    for R in _rings(specs):
        vals = [R.val(i) for i in range(R.size)]
        for k in range(R.n + 1):
            assert sum(v >= k for v in vals) == R.q ** (R.n - k), f"{R}: |J^{k}| wrong"
        assert vals[0] == R.n and R.val(R.x_idx) == (1 if R.n > 1 else R.n)
        assert R.pow(R.x_idx, R.n) == 0
        if R.n > 1:
            assert R.pow(R.x_idx, R.n - 1) != 0
        units = [i for i in range(R.size) if R.is_unit(i)]
        assert len(units) == R.unit_count
        for u in units:
            for j in R.radical():
                assert R.is_unit(R.add(u, j)), f"{R}: unit + radical left the units"
        # unipotent subgroup closure (commutative case)
        for j1 in R.radical():
            one_j1 = R.add(R.embed_int(1), j1)
            assert R.val(R.sub(R.inv(one_j1), R.embed_int(1))) >= 1
            for j2 in R.radical():
                prod = R.mul(one_j1, R.add(R.embed_int(1), j2))
                assert R.val(R.sub(prod, R.embed_int(1))) >= 1


def suite_teichmuller(level):
    """Coordinates are a bijection and reassembly is exact; g^q = g."""
    specs = ["Z/3^2", "GF(9)", "GF(3)[u]/u^2"]
    if level == "full":
        specs += ["Z/3^3", "GR(9,2)", "GF(9)[u]/u^2", "Z/5^2"]
    for R in _rings(specs):
        assert R.pow(R.g_idx, R.q) == R.g_idx
        res = {R.residue_idx(t) for t in R.teich}
        assert len(res) == R.q, f"{R}: Teichmüller residues collide"
        seen = set()
        for e in range(R.size):
            coords = R.teichmuller_coords(e)
            assert all(c.index in R.teich for c in coords)
            assert R.teichmuller_assemble(coords).index == e
            seen.add(tuple(c.index for c in coords))
        assert len(seen) == R.size


def suite_sqrt_radical(level):
    """x -> x^2 + 2x permutes J and the square root inverts it."""
    specs = ["Z/3^2"] if level == "quick" else ["Z/3^2", "Z/3^3", "GF(9)[u]/u^2"]
    for R in _rings(specs):
        one = R.embed_int(1)
        images = set()
        for xx in R.radical():
            images.add(R.add(R.mul(xx, xx), R.add(xx, xx)))
        assert len(images) == R.radical_size, f"{R}: x^2+2x is not injective on J"
        for j in R.radical():
            root = R.sqrt_one_plus_j(j).index
            assert R.mul(root, root) == R.add(one, j)
            assert R.val(R.sub(root, one)) >= 1


def suite_square_classes(level):
    """Euler criterion agrees with discrete-log parity."""
    qs = [3, 5, 7, 9] if level == "quick" else [3, 5, 7, 9, 25, 27, 49]
    for q in qs:
        F = ring_from_string(f"GF({q})")
        squares = {F.mul(v, v) for v in range(1, q)}
        for u in range(1, q):
            cls = F.square_class(u)
            assert cls == F.square_class_by_generator(u)
            assert (cls is SquareClass.SQUARE) == (u in squares)


def _power_oracle_nilpotent(R, keys):
    """Independent oracle: N^(2^m) = 0 with 2^m >= 2n, via batched squaring."""
    a, b, c, d = decode_keys(keys, R.size)
    m = max(1, int(np.ceil(np.log2(max(2, 2 * R.n)))))
    cur = orbits.batch_matmul((a, b, c, d), (a, b, c, d), R)
    for _ in range(m - 1):
        cur = orbits.batch_matmul(cur, cur, R)
    return (cur[0] == 0) & (cur[1] == 0) & (cur[2] == 0) & (cur[3] == 0)


def _fast_nilpotent_mask(R, keys):
    tb = R.tables
    a, b, c, d = decode_keys(keys, R.size)
    return (tb.val[tb.add[a, d]] >= 1) & (tb.val[tb.add[tb.mul[a, a], tb.mul[b, c]]] >= 1)


def suite_nilpotency_oracle(level):
    """Fast trace/discriminant test vs the matrix power oracle."""
    small = _rings(["GF(3)", "Z/3^2"] if level == "quick" else ["GF(3)", "GF(9)", "Z/3^2", "GF(3)[u]/u^2"])
    for R in small:
        keys = np.arange(R.size**4, dtype=np.int64)
        assert (_fast_nilpotent_mask(R, keys) == _power_oracle_nilpotent(R, keys)).all(), R
        assert int(_fast_nilpotent_mask(R, keys).sum()) == R.q ** (4 * R.n - 2)
    if level == "full":
        R = ring_from_string("Z/3^3")
        rng = np.random.default_rng(0)
        keys = rng.integers(0, R.size**4, size=100_000, dtype=np.int64)
        assert (_fast_nilpotent_mask(R, keys) == _power_oracle_nilpotent(R, keys)).all()


def suite_det_identity_and_conj(level):
    """det(I+A) = 1 + Tr(A) + det(A); closed-form elementary conjugation
    equals generic conjugation, over all (t, A) pairs."""
    specs = ["GF(3)"] if level == "quick" else ["GF(3)", "Z/3^2"]
    for R in _rings(specs):
        S = R.size
        for key in range(S**4):
            A = decode_key(R, key)
            assert mat2.det_one_plus(A) == (A + identity(R)).det()
        for t in range(S):
            U, L = mat2.u_mat(R, t), mat2.l_mat(R, t)
            for key in range(S**4):
                A = decode_key(R, key)
                assert conj_by_u(t, A) == conj(U, A)
                assert conj_by_l(t, A) == conj(L, A)


def suite_factorization(level):
    """Every unipotent factors into a short U/L/central word that
    re-evaluates exactly; diagonal words evaluate to diag(u, 1/u)."""
    specs = ["GF(3)", "GF(5)"] if level == "quick" else ["GF(3)", "GF(5)", "GF(7)", "GF(9)", "Z/3^2"]
    for R in _rings(specs):
        for key in unipotent_keys(R).tolist():
            A = decode_key(R, key)
            word = factor_unipotent(A)
            assert evaluate_word(word, R) == A
            assert len(word) <= 12
            centrals = [f for f in word if f.kind == "C"]
            assert len(centrals) <= 1
            for f in centrals:
                assert R.val(R.sub(f.value, R.embed_int(1))) >= 1
        for u in R.units():
            word = mat2.diag_factorization(R, u)
            assert len(word) == 4
            assert evaluate_word(word, R) == mat(R, u, 0, 0, R.inv(u))


def suite_quat_iso(level):
    """Relations, bijectivity, and multiplicativity of the matrix model."""
    z3 = ring_from_string("Z/3^1")
    iso = quat.build_iso(z3)
    all_quats = [quat.Quat(z3, *t) for t in itertools.product(range(3), repeat=4)]
    images = set()
    for x in all_quats:
        M = quat.to_matrix(iso, x)
        images.add(M.entries())
        assert quat.from_matrix(iso, M) == x
        assert M.det() == x.norm() and M.trace() == x.trace()
    assert len(images) == len(all_quats)
    pairs = (
        itertools.product(all_quats, repeat=2)
        if level == "full"
        else zip(all_quats[::2], all_quats[1::2])
    )
    for x, y in pairs:
        assert quat.to_matrix(iso, x * y) == quat.to_matrix(iso, x) * quat.to_matrix(iso, y)
        assert quat.to_matrix(iso, x + y) == quat.to_matrix(iso, x) + quat.to_matrix(iso, y)
    if level == "full":
        z9 = ring_from_string("Z/3^2")
        iso9 = quat.build_iso(z9)
        seen = set()
        for t in itertools.product(range(9), repeat=4):
            x = quat.Quat(z9, *t)
            M = quat.to_matrix(iso9, x)
            seen.add(M.entries())
            assert quat.from_matrix(iso9, M) == x
        assert len(seen) == 9**4
        rng = random.Random(1)
        for _ in range(100_000):
            x = quat.Quat(z9, *(rng.randrange(9) for _ in range(4)))
            y = quat.Quat(z9, *(rng.randrange(9) for _ in range(4)))
            assert quat.to_matrix(iso9, x * y) == quat.to_matrix(iso9, x) * quat.to_matrix(iso9, y)


def suite_classify_invariance(level):
    """delta is conjugation-invariant; reduction uses only unipotent words."""
    gf3 = ring_from_string("GF(3)")
    invertible = [decode_key(gf3, k) for k in range(3**4)]
    invertible = [P for P in invertible if P.det().is_unit()]
    for key in range(3**4):
        A = decode_key(gf3, key)
        delta = classify.traceless_valuation(A)
        for P in invertible:
            assert classify.traceless_valuation(conj(P, A)) == delta
    z9 = ring_from_string("Z/3^2")
    rng = random.Random(2)
    count = 500 if level == "quick" else 3000
    for _ in range(count):
        A = Mat(z9, *(rng.randrange(9) for _ in range(4)))
        P = Mat(z9, *(rng.randrange(9) for _ in range(4)))
        if not P.det().is_unit():
            continue
        assert classify.traceless_valuation(conj(P, A)) == classify.traceless_valuation(A)
        if not A.is_scalar():
            cf = classify.canonical_reduce(A)
            assert all(f.kind in ("U", "L") for f in cf.word)


def suite_census_oracle(level):
    """Formula census equals the brute-force census."""
    backend = "numpy" if level == "quick" else None
    specs = ["GF(3)", "Z/3^2"] if level == "quick" else [
        "GF(3)", "GF(5)", "GF(7)", "GF(9)", "Z/3^2", "Z/3^3", "Z/5^2", "GF(3)[u]/u^2",
    ]
    tables = {}
    for s in specs:
        R = ring_from_string(s)
        part = partition_all(R, backend=backend)
        brute = census_brute(part)
        formula = classify.census_formula(R)
        assert compare_census(formula, brute).equal, f"{s}: census mismatch"
        assert classify.census_total(formula) == R.size**4
        sizes = {r.orbit_size for r in formula}
        assert len(sizes) == 3 * R.n + 1, f"{s}: orbit sizes not pairwise distinct"
        tables[s] = brute
    if level == "full":
        assert tables["Z/3^2"] == tables["GF(3)[u]/u^2"], "cross-family census differs"
        z9 = ring_from_string("Z/3^2")
        off = classify.census_formula(z9, scalar_multiplicity=False)
        assert classify.census_total(off) == 6405
        assert not compare_census(off, tables["Z/3^2"]).equal


def suite_orbit_sizes(level):
    """Closed-form orbit size equals BFS size orbit by orbit."""
    backend = "numpy" if level == "quick" else None
    specs = ["GF(3)"] if level == "quick" else ["GF(3)", "GF(5)", "Z/3^2", "GF(3)[u]/u^2", "Z/5^2", "Z/3^3"]
    for s in specs:
        R = ring_from_string(s)
        part = partition_all(R, backend=backend)
        for rep, size, _, _ in part.orbit_rows():
            assert classify.orbit_size_formula(decode_key(R, rep)) == size, (s, rep)


def suite_centralizers(level):
    """Centralizer orders in SL2 by type, and orbit-stabilizer products."""
    qs = [3] if level == "quick" else [3, 5]
    expect = {
        classify.OrbitType.SPLIT: lambda q: q - 1,
        classify.OrbitType.RAMIFIED: lambda q: 2 * q,
        classify.OrbitType.INERT: lambda q: q + 1,
    }
    for q in qs:
        F = ring_from_string(f"GF({q})")
        order = q * (q * q - 1)
        assert group_counts(F).sl2_order == order
        for key in range(q**4):
            A = decode_key(F, key)
            if A.is_scalar():
                continue
            cent = sl2_centralizer_order(A)
            typ = classify.orbit_type(A)
            assert cent == expect[typ](q), (q, key, typ)
            assert cent * classify.orbit_size_formula(A) == order


def suite_lifting(level):
    """Orbit sizes over Z/27 with delta = 0 are 81x the residue orbit size."""
    backend = "numpy" if level == "quick" else None
    z27 = ring_from_string("Z/3^3")
    gf3 = ring_from_string("GF(3)")
    qm = z27.quotient(1)
    rng = random.Random(3)
    want = 50 if level == "quick" else 1000
    checked = 0
    while checked < want:
        A = Mat(z27, *(rng.randrange(27) for _ in range(4)))
        if classify.traceless_valuation(A) != 0:
            continue
        Ab = Mat(gf3, *(qm.project_idx(v) for v in A.entries()))
        assert len(orbit_of(A, backend=backend)) == len(orbit_of(Ab, backend=backend)) * 81
        checked += 1


def suite_generator_reduction(level):
    """Reduced Teichmüller generators give the same partition as all of R,
    and elementary unipotents (with centrals) generate the same group as all
    unipotent matrices."""
    z9 = ring_from_string("Z/3^2")
    backend = "numpy" if level == "quick" else None
    p_red = partition_all(z9, backend=backend)
    p_full = partition_all(z9, backend=backend, reduced_generators=False)
    assert (p_red.reps == p_full.reps).all() and (p_red.sizes == p_full.sizes).all()

    specs = ["GF(3)"] if level == "quick" else ["GF(3)", "Z/3^2"]
    for s in specs:
        R = ring_from_string(s)
        elem_gens = [mat2.u_mat(R, t) for t in range(1, R.size)]
        elem_gens += [mat2.l_mat(R, t) for t in range(1, R.size)]
        for j in R.radical():
            if j != 0:
                elem_gens.append(mat2.scalar(R, R.add(R.embed_int(1), j)))
        uni_gens = [decode_key(R, k) for k in unipotent_keys(R).tolist()]
        assert _mult_closure(R, elem_gens) == _mult_closure(R, uni_gens), s


def _mult_closure(R: Ring, gens: list[Mat]) -> set[int]:
    """Keys of the subgroup generated by invertible gens (finite, so the
    multiplicative closure is already a group)."""
    tb = R.tables
    S = R.size
    ga = np.array([g.a for g in gens])
    gb = np.array([g.b for g in gens])
    gc = np.array([g.c for g in gens])
    gd = np.array([g.d for g in gens])
    seen = np.zeros(S**4, dtype=bool)
    start = encode_mat(identity(R))
    seen[start] = True
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        a, b, c, d = decode_keys(frontier, S)
        na = tb.add[tb.mul[a[:, None], ga[None, :]], tb.mul[b[:, None], gc[None, :]]]
        nb = tb.add[tb.mul[a[:, None], gb[None, :]], tb.mul[b[:, None], gd[None, :]]]
        nc = tb.add[tb.mul[c[:, None], ga[None, :]], tb.mul[d[:, None], gc[None, :]]]
        nd = tb.add[tb.mul[c[:, None], gb[None, :]], tb.mul[d[:, None], gd[None, :]]]
        keys = np.unique(((na * S + nb) * S + nc) * S + nd)
        fresh = keys[~seen[keys]]
        seen[fresh] = True
        frontier = fresh
    return set(np.flatnonzero(seen).tolist())


def suite_determinism(level):
    """Identical partitions across runs, worker counts, and backends."""
    z9 = ring_from_string("Z/3^2")
    ref = orbits.atlas_text(partition_all(z9, backend="numpy"))
    assert orbits.atlas_text(partition_all(z9, backend="numpy")) == ref
    if level == "full" and "numba" in available_backends():
        for threads in (1, 2, 4):
            assert orbits.atlas_text(partition_all(z9, backend="numba", threads=threads)) == ref
    # orbit closure under the full generator set
    part = partition_all(z9, backend="numpy")
    members = orbit_of(mat(z9, 0, 1, 0, 0), backend="numpy")
    member_set = set(members.tolist())
    for t in range(z9.size):
        for key in members.tolist():
            A = decode_key(z9, key)
            assert encode_mat(conj_by_u(t, A)) in member_set
            assert encode_mat(conj_by_l(t, A)) in member_set


SUITES = [
    ("ring-axioms", suite_ring_axioms),
    ("radical-structure", suite_radical_structure),
    ("teichmuller", suite_teichmuller),
    ("sqrt-radical", suite_sqrt_radical),
    ("square-classes", suite_square_classes),
    ("nilpotency-oracle", suite_nilpotency_oracle),
    ("det-identity-and-conj", suite_det_identity_and_conj),
    ("factorization", suite_factorization),
    ("quat-iso", suite_quat_iso),
    ("classify-invariance", suite_classify_invariance),
    ("census-oracle", suite_census_oracle),
    ("orbit-sizes", suite_orbit_sizes),
    ("centralizers", suite_centralizers),
    ("lifting", suite_lifting),
    ("generator-reduction", suite_generator_reduction),
    ("determinism", suite_determinism),
]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    seconds: float
    detail: str = ""


def _corrupted_ring() -> Ring:
    """A private Z/9 with one poisoned multiplication entry (negative
    control for the axiom suite)."""
    R = build_ring(parse_ring_spec("Z/3^2"), materialize_tables=True, use_cache=False)
    R.tables.mul[2, 2] = (R.tables.mul[2, 2] + 1) % R.size
    return R


def run_selftest(level: str = "quick", inject_corruption: bool = False) -> list[SuiteResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"level must be quick or full, got {level!r}")
    results = []
    corrupted = _corrupted_ring() if inject_corruption else None
    for name, fn in SUITES:
        t0 = time.perf_counter()
        try:
            if fn is suite_ring_axioms:
                fn(level, corrupted)
            else:
                fn(level)
            results.append(SuiteResult(name, True, time.perf_counter() - t0))
        except AssertionError as exc:
            results.append(SuiteResult(name, False, time.perf_counter() - t0, str(exc)))
    return results
