"""Brute-force orbit enumeration: the oracle the census formulas are
checked against.

Matrices are packed into base-|R| integer keys.  BFS closure under the maps
M -> U(t) M U(t)^-1 and M -> L(s) M L(s)^-1 computes one unipotent-similarity
orbit; central factors conjugate trivially, so elementary generators suffice.
The default generator set is reduced to {t = lam * x^i} over the nonzero
Teichmüller digits, which generates the same closure because
U(t)U(t') = U(t+t') and the digits additively span the ring.
"""

from __future__ import annotations

import gzip
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from ._kernels_numpy import decode_keys
from .classify import OrbitClass, OrbitType, census_sort_key, orbit_type, traceless_valuation
from .errors import BudgetExceeded, NotAField, OrbitAtlasError, ParseError
from .mat2 import Mat
from .rings import Ring, parse_ring_spec

DEFAULT_BUDGET = 1 << 26
_CHUNK = 1 << 20

ATLAS_MAGIC = "orbit-atlas"
ATLAS_VERSION = 1


def encode_mat(A: Mat) -> int:
    S = A.ring.size
    return ((A.a * S + A.b) * S + A.c) * S + A.d


def decode_key(ring: Ring, key: int) -> Mat:
    S = ring.size
    key = int(key)
    if not 0 <= key < S**4:
        raise ParseError(f"key {key} out of range for {ring.spec_string}")
    d = key % S
    key //= S
    c = key % S
    key //= S
    b = key % S
    return Mat(ring, key // S, b, c, d)


def generators(ring: Ring, reduced: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Conjugation generator set as (kinds, values); kind 0 is U, 1 is L."""
    if reduced:
        tvals = []
        xp = ring.embed_int(1)
        for _ in range(ring.n):
            for lam in ring.teich[1:]:
                tvals.append(ring.mul(lam, xp))
            xp = ring.mul(xp, ring.x_idx)
    else:
        tvals = [t for t in range(ring.size) if t != 0]
    kinds = np.array([0] * len(tvals) + [1] * len(tvals), dtype=np.uint8)
    vals = np.array(tvals + tvals, dtype=np.int64)
    return kinds, vals


def _tables(ring: Ring):
    if ring.tables is None:
        raise OrbitAtlasError(
            f"{ring.spec_string} has no materialized tables; enumeration requires them"
        )
    return ring.tables


def _check_budget(ring: Ring, budget: int) -> int:
    n_states = ring.size**4
    if n_states > budget:
        raise BudgetExceeded(n_states, budget)
    return n_states


@dataclass
class OrbitPartition:
    """All orbits of M2(R): ascending minimal-key representatives and sizes.

    The seed scan visits keys in ascending order, so each seed is the
    minimal key of its orbit; that makes the whole output canonical no
    matter which backend or worker count produced it.
    """

    ring: Ring
    reps: np.ndarray
    sizes: np.ndarray
    _rows: list[tuple[int, int, int, OrbitType]] | None = field(default=None, repr=False)

    def __post_init__(self):
        total = int(self.sizes.sum())
        expected = self.ring.size**4
        if total != expected:
            raise OrbitAtlasError(f"partition covers {total} of {expected} states")

    @property
    def orbit_count(self) -> int:
        return len(self.reps)

    def rep_mats(self):
        return [decode_key(self.ring, k) for k in self.reps]

    def orbit_rows(self) -> list[tuple[int, int, int, OrbitType]]:
        """Per-orbit (rep_key, size, delta, type), classified lazily."""
        if self._rows is None:
            rows = []
            for rep, size in zip(self.reps.tolist(), self.sizes.tolist()):
                A = decode_key(self.ring, rep)
                rows.append((rep, size, traceless_valuation(A), orbit_type(A)))
            self._rows = rows
        return self._rows

    def orbit_rep_of(self, key: int, **kwargs) -> int:
        """Minimal key of the orbit containing key (recomputed by BFS)."""
        members = orbit_of(decode_key(self.ring, key), **kwargs)
        return int(members[0])

    def orbit_id_of(self, key: int, **kwargs) -> int:
        rep = self.orbit_rep_of(key, **kwargs)
        idx = int(np.searchsorted(self.reps, rep))
        if idx >= len(self.reps) or self.reps[idx] != rep:
            raise OrbitAtlasError("orbit representative missing from partition")
        return idx


def partition_all(
    ring: Ring,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    backend: str | None = None,
    reduced_generators: bool = True,
) -> OrbitPartition:
    """Partition M2(R) into unipotent-similarity orbits.

    Deterministic: representatives, sizes, and order are identical across
    runs, worker counts, and backends.
    """
    _check_budget(ring, budget)
    tb = _tables(ring)
    kinds, tvals = generators(ring, reduced_generators)
    mod = kernels(backend)
    reps, sizes = mod.partition(tb.add, tb.mul, tb.neg, ring.size, kinds, tvals, max(1, threads))
    return OrbitPartition(ring, reps, sizes)


def orbit_of(
    A: Mat,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    backend: str | None = None,
    reduced_generators: bool = True,
) -> np.ndarray:
    """Sorted key array of the unipotent-similarity orbit of A."""
    ring = A.ring
    _check_budget(ring, budget)
    tb = _tables(ring)
    kinds, tvals = generators(ring, reduced_generators)
    mod = kernels(backend)
    return mod.orbit(tb.add, tb.mul, tb.neg, ring.size, kinds, tvals, encode_mat(A), max(1, threads))


# ---------------------------------------------------------------------------
# brute census and comparison
# ---------------------------------------------------------------------------


def census_brute(partition: OrbitPartition) -> list[OrbitClass]:
    """Group enumerated orbits by (delta, type, size) into census rows."""
    counts: Counter[tuple[int, OrbitType, int]] = Counter()
    for _, size, delta, typ in partition.orbit_rows():
        counts[(delta, typ, size)] += 1
    rows = [OrbitClass(delta, typ, size, cnt) for (delta, typ, size), cnt in counts.items()]
    return sorted(rows, key=census_sort_key)


@dataclass(frozen=True)
class CensusComparison:
    equal: bool
    only_a: tuple[OrbitClass, ...]
    only_b: tuple[OrbitClass, ...]
    label_a: str = "a"
    label_b: str = "b"

    def report(self) -> str:
        if self.equal:
            return "censuses equal"
        lines = ["censuses differ"]
        for row in self.only_a:
            lines.append(
                f"  only in {self.label_a}: delta={row.delta} type={row.type.value} "
                f"size={row.orbit_size} count={row.orbit_count}"
            )
        for row in self.only_b:
            lines.append(
                f"  only in {self.label_b}: delta={row.delta} type={row.type.value} "
                f"size={row.orbit_size} count={row.orbit_count}"
            )
        return "\n".join(lines)


def compare_census(
    a: list[OrbitClass], b: list[OrbitClass], label_a: str = "a", label_b: str = "b"
) -> CensusComparison:
    """Multiset comparison of (delta, type, size, count) rows."""
    ca = Counter((r.delta, r.type, r.orbit_size, r.orbit_count) for r in a)
    cb = Counter((r.delta, r.type, r.orbit_size, r.orbit_count) for r in b)
    only_a = sorted((OrbitClass(*t) for t in (ca - cb).elements()), key=census_sort_key)
    only_b = sorted((OrbitClass(*t) for t in (cb - ca).elements()), key=census_sort_key)
    return CensusComparison(ca == cb, tuple(only_a), tuple(only_b), label_a, label_b)


# ---------------------------------------------------------------------------
# bulk scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupCounts:
    sl2_order: int | None
    unipotent_count: int
    nilpotent_count: int


def group_counts(ring: Ring, budget: int = DEFAULT_BUDGET) -> GroupCounts:
    """Exhaustive scans: nilpotent and unipotent matrix counts (both equal
    q^(4n-2)), and |SL2| for the field case."""
    n_states = _check_budget(ring, budget)
    tb = _tables(ring)
    S = ring.size
    one = ring.embed_int(1)
    neg_one = ring.neg(one)
    add, mul, neg, val = tb.add, tb.mul, tb.neg, tb.val
    nil = uni = sl2 = 0
    for lo in range(0, n_states, _CHUNK):
        keys = np.arange(lo, min(lo + _CHUNK, n_states), dtype=np.int64)
        a, b, c, d = decode_keys(keys, S)
        bc = mul[b, c]
        nil += int(((val[add[a, d]] >= 1) & (val[add[mul[a, a], bc]] >= 1)).sum())
        am, dm = add[a, neg_one], add[d, neg_one]
        uni += int(((val[add[am, dm]] >= 1) & (val[add[mul[am, am], bc]] >= 1)).sum())
        if ring.n == 1:
            det = add[mul[a, d], neg[bc]]
            sl2 += int((det == one).sum())
    return GroupCounts(sl2_order=sl2 if ring.n == 1 else None, unipotent_count=uni, nilpotent_count=nil)


def sl2_centralizer_order(A: Mat, budget: int = DEFAULT_BUDGET) -> int:
    """Number of P in SL2(F) commuting with A; field case only."""
    ring = A.ring
    if ring.n != 1:
        raise NotAField("centralizer orders in SL2 are computed over fields only")
    n_states = _check_budget(ring, budget)
    tb = _tables(ring)
    S = ring.size
    one = ring.embed_int(1)
    add, mul, neg = tb.add, tb.mul, tb.neg
    total = 0
    for lo in range(0, n_states, _CHUNK):
        keys = np.arange(lo, min(lo + _CHUNK, n_states), dtype=np.int64)
        a, b, c, d = decode_keys(keys, S)
        det = add[mul[a, d], neg[mul[b, c]]]
        # PA == AP entrywise, P = [[a,b],[c,d]]
        eq = (
            (add[mul[a, A.a], mul[b, A.c]] == add[mul[A.a, a], mul[A.b, c]])
            & (add[mul[a, A.b], mul[b, A.d]] == add[mul[A.a, b], mul[A.b, d]])
            & (add[mul[c, A.a], mul[d, A.c]] == add[mul[A.c, a], mul[A.d, c]])
            & (add[mul[c, A.b], mul[d, A.d]] == add[mul[A.c, b], mul[A.d, d]])
        )
        total += int(((det == one) & eq).sum())
    return total


def unipotent_keys(ring: Ring, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Keys of all unipotent matrices, ascending."""
    n_states = _check_budget(ring, budget)
    tb = _tables(ring)
    S = ring.size
    neg_one = ring.neg(ring.embed_int(1))
    add, mul, val = tb.add, tb.mul, tb.val
    out = []
    for lo in range(0, n_states, _CHUNK):
        keys = np.arange(lo, min(lo + _CHUNK, n_states), dtype=np.int64)
        a, b, c, d = decode_keys(keys, S)
        am, dm = add[a, neg_one], add[d, neg_one]
        mask = (val[add[am, dm]] >= 1) & (val[add[mul[am, am], mul[b, c]]] >= 1)
        out.append(keys[mask])
    return np.concatenate(out)


def batch_matmul(x, y, ring: Ring):
    """Entrywise 2x2 products of two batches given as (a, b, c, d) arrays."""
    tb = _tables(ring)
    add, mul = tb.add, tb.mul
    xa, xb, xc, xd = x
    ya, yb, yc, yd = y
    return (
        add[mul[xa, ya], mul[xb, yc]],
        add[mul[xa, yb], mul[xb, yd]],
        add[mul[xc, ya], mul[xd, yc]],
        add[mul[xc, yb], mul[xd, yd]],
    )


# ---------------------------------------------------------------------------
# atlas files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtlasData:
    spec_string: str
    q: int
    n: int
    rows: tuple[tuple[int, int, int, str], ...]  # (rep, size, delta, type)


def atlas_text(partition: OrbitPartition) -> str:
    """Stable atlas serialization: header then one line per orbit."""
    ring = partition.ring
    lines = [
        f"{ATLAS_MAGIC} {ATLAS_VERSION}",
        f"ring {ring.spec_string}",
        f"q {ring.q}",
        f"n {ring.n}",
        f"orbits {partition.orbit_count}",
        "rep size delta type",
    ]
    for rep, size, delta, typ in partition.orbit_rows():
        lines.append(f"{rep} {size} {delta} {typ.value}")
    return "\n".join(lines) + "\n"


def write_atlas(partition: OrbitPartition, path) -> None:
    data = atlas_text(partition).encode("utf-8")
    if str(path).endswith(".gz"):
        with gzip.open(path, "wb") as fh:
            fh.write(data)
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def read_atlas(path) -> AtlasData:
    if str(path).endswith(".gz"):
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            text = fh.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = text.splitlines()
    if not lines or not lines[0].startswith(ATLAS_MAGIC):
        raise ParseError("not an atlas file")
    version = int(lines[0].split()[1])
    if version != ATLAS_VERSION:
        raise ParseError(f"unsupported atlas version {version}")
    header = {}
    idx = 1
    while idx < len(lines) and not lines[idx].startswith("rep "):
        key, _, value = lines[idx].partition(" ")
        header[key] = value
        idx += 1
    idx += 1  # column header line
    spec_string = header["ring"]
    parse_ring_spec(spec_string)  # validates
    rows = []
    for line in lines[idx:]:
        if not line:
            continue
        rep, size, delta, typ = line.split()
        rows.append((int(rep), int(size), int(delta), typ))
    return AtlasData(spec_string=spec_string, q=int(header["q"]), n=int(header["n"]), rows=tuple(rows))
