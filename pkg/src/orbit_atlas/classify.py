"""Canonical reduction, orbit typing, and closed-form orbit census.

Every non-scalar matrix is unipotent-conjugate to d*I + x^delta * B with
B = [[a,b],[c,0]] and a a unit, where delta is the radical valuation of the
traceless part. The residue discriminant of B then sorts the orbit into one
of three types, which together with delta determines the orbit size.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum

from .errors import ScalarInput
from .mat2 import ElementaryWord, Factor, Mat, conj_by_l, conj_by_u
from .rings import Ring, SquareClass


class OrbitType(Enum):
    SCALAR = "scalar"
    SPLIT = "split"
    RAMIFIED = "ramified"
    INERT = "inert"


_TYPE_ORDER = {OrbitType.SCALAR: -1, OrbitType.SPLIT: 0, OrbitType.RAMIFIED: 1, OrbitType.INERT: 2}


@dataclass(frozen=True)
class OrbitClass:
    """One census row: all orbits sharing (delta, type) have the same size."""

    delta: int
    type: OrbitType
    orbit_size: int
    orbit_count: int


@dataclass(frozen=True)
class CanonicalForm:
    """Result of reducing A to d*I + x^delta * residual.

    The residual matrix lives over the quotient ring R/J^(n-delta), the only
    ring where division by x^delta is well defined; its (1,1) entry is a
    unit there and its (2,2) entry is 0.  The word records the unipotent
    conjugations applied (at most one).
    """

    d: int
    delta: int
    residual: Mat | None
    word: ElementaryWord


def traceless_valuation(A: Mat) -> int:
    """Radical valuation delta of A - (Tr(A)/2)I; n exactly when A is scalar.

    Invariant under conjugation by any invertible matrix.
    """
    R = A.ring
    half_trace = R.half(A.trace().index)
    return min(
        R.val(R.sub(A.a, half_trace)),
        R.val(A.b),
        R.val(A.c),
        R.val(R.sub(A.d, half_trace)),
    )


def canonical_reduce(A: Mat) -> CanonicalForm:
    """Reduce a non-scalar matrix by at most one elementary conjugation.

    With alpha = val(a-d), beta = val(b), gamma = val(c) and delta their
    minimum: if alpha is minimal nothing is needed; else if gamma is,
    conjugating by U(1) moves value onto a-d (val(a-d+2c) = gamma since
    val(a-d) > gamma); otherwise conjugate by L(1).
    """
    R = A.ring
    delta = traceless_valuation(A)
    if delta == R.n:
        raise ScalarInput(f"{A.to_literal()} is scalar")
    one = R.embed_int(1)
    alpha = R.val(R.sub(A.a, A.d))
    gamma = R.val(A.c)
    if alpha == delta:
        word: ElementaryWord = ()
        B = A
    elif gamma == delta:
        word = (Factor("U", one),)
        B = conj_by_u(one, A)
    else:
        word = (Factor("L", one),)
        B = conj_by_l(one, A)
    qmap = R.quotient(R.n - delta)
    qring = qmap.ring

    def drop(idx: int) -> int:
        for _ in range(delta):
            idx = R._arith.divexact_x(idx)
        return qmap.project_idx(idx)

    residual = Mat(qring, drop(R.sub(B.a, B.d)), drop(B.b), drop(B.c), 0)
    return CanonicalForm(d=B.d, delta=delta, residual=residual, word=word)


def discriminant(A: Mat) -> int:
    """Tr(A)^2 - 4 det(A); conjugation-invariant."""
    R = A.ring
    tr = A.trace().index
    four_det = R.mul(R.embed_int(4), A.det().index)
    return R.sub(R.mul(tr, tr), four_det)


def orbit_type(A: Mat) -> OrbitType:
    """Type from the residue discriminant of the canonical residual:
    nonzero square -> split, zero -> ramified, non-square -> inert."""
    R = A.ring
    if traceless_valuation(A) == R.n:
        return OrbitType.SCALAR
    res = canonical_reduce(A).residual
    qring = res.ring
    F = qring.residue_ring
    disc = F._idx(qring.residue_idx(discriminant(res)))
    if disc == 0:
        return OrbitType.RAMIFIED
    if F.square_class(disc) is SquareClass.SQUARE:
        return OrbitType.SPLIT
    return OrbitType.INERT


def orbit_size_for(q: int, n: int, delta: int, typ: OrbitType) -> int:
    if typ is OrbitType.SCALAR:
        return 1
    k = n - delta
    if typ is OrbitType.SPLIT:
        return q ** (2 * k - 1) * (q + 1)
    if typ is OrbitType.INERT:
        return q ** (2 * k - 1) * (q - 1)
    return q ** (2 * (k - 1)) * (q * q - 1) // 2


def orbit_size_formula(A: Mat) -> int:
    """Closed-form size of the unipotent-similarity orbit of A."""
    R = A.ring
    delta = traceless_valuation(A)
    if delta == R.n:
        return 1
    return orbit_size_for(R.q, R.n, delta, orbit_type(A))


@dataclass(frozen=True)
class OrbitInvariants:
    """Quantities constant on unipotent-similarity orbits."""

    trace: int
    det: int
    delta: int
    d_mod_radical_pow: int  # trace/2 reduced mod J^delta (0 when delta = 0)
    type: OrbitType

    def to_dict(self) -> dict:
        return {
            "trace": self.trace,
            "det": self.det,
            "delta": self.delta,
            "d_mod_radical_pow": self.d_mod_radical_pow,
            "type": self.type.value,
        }


def orbit_invariants(A: Mat) -> OrbitInvariants:
    R = A.ring
    delta = traceless_valuation(A)
    half_trace = R.half(A.trace().index)
    if delta == 0:
        d_mod = 0
    else:
        d_mod = R.quotient(delta).project_idx(half_trace)
    return OrbitInvariants(
        trace=A.trace().index,
        det=A.det().index,
        delta=delta,
        d_mod_radical_pow=d_mod,
        type=orbit_type(A),
    )


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------


def census_sort_key(row: OrbitClass):
    scalar_first = 0 if row.type is OrbitType.SCALAR else 1
    return (scalar_first, row.delta, _TYPE_ORDER[row.type], row.orbit_size)


def census_formula(ring: Ring, scalar_multiplicity: bool = True) -> list[OrbitClass]:
    """Closed-form census: one scalar row plus three rows per delta.

    With scalar_multiplicity on (the default), row counts carry the factor
    q^delta contributed by the choice of scalar part, and the total
    size*count mass is exactly q^(4n).  Switching it off reproduces the
    weaker count that ignores the scalar part, which does not sum to q^(4n)
    for n > 1 and is kept for comparison.
    """
    q, n = ring.q, ring.n
    rows = [OrbitClass(n, OrbitType.SCALAR, 1, q**n)]
    for delta in range(n):
        m = q**delta if scalar_multiplicity else 1
        half_units = q ** (2 * (n - delta) - 1) * (q - 1) // 2
        rows.append(
            OrbitClass(delta, OrbitType.SPLIT, orbit_size_for(q, n, delta, OrbitType.SPLIT), m * half_units)
        )
        rows.append(
            OrbitClass(
                delta,
                OrbitType.RAMIFIED,
                orbit_size_for(q, n, delta, OrbitType.RAMIFIED),
                m * 2 * q ** (2 * (n - delta) - 1),
            )
        )
        rows.append(
            OrbitClass(delta, OrbitType.INERT, orbit_size_for(q, n, delta, OrbitType.INERT), m * half_units)
        )
    return sorted(rows, key=census_sort_key)


def census_total(rows: list[OrbitClass]) -> int:
    return sum(r.orbit_size * r.orbit_count for r in rows)


def census_to_json(rows: list[OrbitClass]) -> str:
    data = [
        {"delta": r.delta, "type": r.type.value, "orbit_size": r.orbit_size, "orbit_count": r.orbit_count}
        for r in sorted(rows, key=census_sort_key)
    ]
    return json.dumps(data, indent=2)


def census_from_json(text: str) -> list[OrbitClass]:
    return [
        OrbitClass(d["delta"], OrbitType(d["type"]), d["orbit_size"], d["orbit_count"])
        for d in json.loads(text)
    ]


def census_to_csv(rows: list[OrbitClass]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["delta", "type", "orbit_size", "orbit_count"])
    for r in sorted(rows, key=census_sort_key):
        writer.writerow([r.delta, r.type.value, r.orbit_size, r.orbit_count])
    return buf.getvalue()


def census_to_markdown(rows: list[OrbitClass]) -> str:
    rows = sorted(rows, key=census_sort_key)
    header = ["delta", "type", "orbit_size", "orbit_count"]
    cells = [[str(r.delta), r.type.value, str(r.orbit_size), str(r.orbit_count)] for r in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
    lines = [
        "| " + " | ".join(h.ljust(w) for h, w in zip(header, widths)) + " |",
        "|" + "|".join("-" * (w + 2) for w in widths) + "|",
    ]
    for c in cells:
        lines.append("| " + " | ".join(v.rjust(w) if i != 1 else v.ljust(w) for i, (v, w) in enumerate(zip(c, widths))) + " |")
    return "\n".join(lines) + "\n"
