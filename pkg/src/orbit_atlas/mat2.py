"""2x2 matrices over a local ring.

Covers matrix arithmetic, the fast nilpotency/unipotency tests, elementary
unipotent conjugation in closed form, and the constructive factorization of
a unipotent matrix into elementary unipotents and a central factor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import NotInvertible, NotUnipotent, ParseError, RingMismatch
from .rings import Elem, Ring, check_same_ring


@dataclass(frozen=True)
class Mat:
    """Row-major [[a, b], [c, d]] with entries stored as element indices."""

    ring: Ring
    a: int
    b: int
    c: int
    d: int

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, other: "Mat") -> "Mat":
        check_same_ring(self.ring, other.ring)
        R = self.ring
        return Mat(R, *(R.add(x, y) for x, y in zip(self.entries(), other.entries())))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        R = self.ring
        return Mat(R, *(R.neg(x) for x in self.entries()))

    def __mul__(self, other: "Mat") -> "Mat":
        check_same_ring(self.ring, other.ring)
        R = self.ring
        return Mat(
            R,
            R.add(R.mul(self.a, other.a), R.mul(self.b, other.c)),
            R.add(R.mul(self.a, other.b), R.mul(self.b, other.d)),
            R.add(R.mul(self.c, other.a), R.mul(self.d, other.c)),
            R.add(R.mul(self.c, other.b), R.mul(self.d, other.d)),
        )

    def scale(self, s) -> "Mat":
        R = self.ring
        si = R._idx(s)
        return Mat(R, *(R.mul(si, x) for x in self.entries()))

    def det(self) -> Elem:
        R = self.ring
        return Elem(R, R.sub(R.mul(self.a, self.d), R.mul(self.b, self.c)))

    def trace(self) -> Elem:
        R = self.ring
        return Elem(R, R.add(self.a, self.d))

    def inverse(self) -> "Mat":
        R = self.ring
        det = self.det().index
        if not R.is_unit(det):
            raise NotInvertible(f"determinant {det} is not a unit")
        di = R.inv(det)
        return Mat(
            R,
            R.mul(di, self.d),
            R.mul(di, R.neg(self.b)),
            R.mul(di, R.neg(self.c)),
            R.mul(di, self.a),
        )

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def to_literal(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.ring.spec == other.ring.spec and self.entries() == other.entries()

    def __hash__(self):
        return hash((self.ring.spec, self.entries()))

    def __repr__(self):
        return f"Mat({self.to_literal()} over {self.ring.spec_string})"


def mat(ring: Ring, a, b, c, d) -> Mat:
    return Mat(ring, ring._idx(a), ring._idx(b), ring._idx(c), ring._idx(d))


def zero(ring: Ring) -> Mat:
    return Mat(ring, 0, 0, 0, 0)


def identity(ring: Ring) -> Mat:
    one = ring.embed_int(1)
    return Mat(ring, one, 0, 0, one)


def scalar(ring: Ring, s) -> Mat:
    si = ring._idx(s)
    return Mat(ring, si, 0, 0, si)


def from_literal(ring: Ring, text: str) -> Mat:
    """Parse "[[a,b],[c,d]]" with entries as canonical indices."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad matrix literal {text!r}: {exc}") from None
    if (
        not isinstance(data, list)
        or len(data) != 2
        or any(not isinstance(row, list) or len(row) != 2 for row in data)
    ):
        raise ParseError(f"matrix literal must be [[a,b],[c,d]], got {text!r}")
    flat = [v for row in data for v in row]
    if any(not isinstance(v, int) for v in flat):
        raise ParseError(f"matrix entries must be integer indices, got {text!r}")
    return mat(ring, *flat)


def u_mat(ring: Ring, t) -> Mat:
    """Upper elementary unipotent I + t*E12."""
    one = ring.embed_int(1)
    return Mat(ring, one, ring._idx(t), 0, one)


def l_mat(ring: Ring, s) -> Mat:
    """Lower elementary unipotent I + s*E21."""
    one = ring.embed_int(1)
    return Mat(ring, one, 0, ring._idx(s), one)


# ---------------------------------------------------------------------------
# nilpotency and unipotency
# ---------------------------------------------------------------------------


def is_nilpotent(A: Mat) -> bool:
    """Fast criterion: both a + d and a^2 + bc lie in the radical.

    Equivalent to A^(2n) = 0; the power computation stays in the test suite
    as an independent oracle.
    """
    R = A.ring
    if R.val(R.add(A.a, A.d)) < 1:
        return False
    return R.val(R.add(R.mul(A.a, A.a), R.mul(A.b, A.c))) >= 1


def is_unipotent(A: Mat) -> bool:
    return is_nilpotent(A - identity(A.ring))


def det_one_plus(A: Mat) -> Elem:
    """det(I + A) computed as 1 + Tr(A) + det(A)."""
    R = A.ring
    return Elem(R, R.add(R.embed_int(1), R.add(A.trace().index, A.det().index)))


# ---------------------------------------------------------------------------
# conjugation
# ---------------------------------------------------------------------------


def conj(P: Mat, A: Mat) -> Mat:
    """P A P^-1 (trace- and determinant-preserving)."""
    return P * A * P.inverse()


def conj_by_u(t, A: Mat) -> Mat:
    """U(t) A U(t)^-1 in closed form."""
    R = A.ring
    ti = R._idx(t)
    tc = R.mul(ti, A.c)
    return Mat(
        R,
        R.add(A.a, tc),
        R.add(A.b, R.sub(R.mul(ti, R.sub(A.d, A.a)), R.mul(ti, tc))),
        A.c,
        R.sub(A.d, tc),
    )


def conj_by_l(s, A: Mat) -> Mat:
    """L(s) A L(s)^-1 in closed form."""
    R = A.ring
    si = R._idx(s)
    sb = R.mul(si, A.b)
    return Mat(
        R,
        R.sub(A.a, sb),
        A.b,
        R.add(A.c, R.sub(R.mul(si, R.sub(A.a, A.d)), R.mul(si, sb))),
        R.add(A.d, sb),
    )


def ad_apply(A: Mat, Y: Mat) -> Mat:
    """The commutator map Y -> YA - AY."""
    return Y * A - A * Y


def ad_rank_residue(A: Mat) -> int:
    """Rank over GF(q) of the induced 4x4 commutator map of the reduction
    of A; 0 exactly when the reduction is scalar, otherwise 2."""
    R = A.ring
    F = R.residue_ring
    Ab = Mat(F, *(R.residue_idx(v) for v in A.entries()))
    one = F.embed_int(1)
    basis = [Mat(F, one, 0, 0, 0), Mat(F, 0, one, 0, 0), Mat(F, 0, 0, one, 0), Mat(F, 0, 0, 0, one)]
    rows = [ad_apply(Ab, Y).entries() for Y in basis]
    return _rank_over_field(rows, F)


def _rank_over_field(rows, F: Ring) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    for col in range(4):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(inv, v) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [F.sub(v, F.mul(f, w)) for v, w in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# elementary words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factor:
    """One word factor: U(t), L(s), or a central scalar C(r)."""

    kind: str  # "U" | "L" | "C"
    value: int


ElementaryWord = tuple[Factor, ...]


def word_to_json(word: ElementaryWord) -> str:
    return json.dumps([{"kind": f.kind, "value": f.value} for f in word])


def word_from_json(text: str) -> ElementaryWord:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad word JSON: {exc}") from None
    out = []
    for item in data:
        kind, value = item.get("kind"), item.get("value")
        if kind not in ("U", "L", "C") or not isinstance(value, int):
            raise ParseError(f"bad word factor {item!r}")
        out.append(Factor(kind, value))
    return tuple(out)


def factor_matrix(ring: Ring, f: Factor) -> Mat:
    if not 0 <= f.value < ring.size:
        raise RingMismatch(f"factor value {f.value} outside {ring.spec_string}")
    if f.kind == "U":
        return u_mat(ring, f.value)
    if f.kind == "L":
        return l_mat(ring, f.value)
    return scalar(ring, f.value)


def evaluate_word(word: ElementaryWord, ring: Ring) -> Mat:
    """Left-to-right product of the factor matrices; the empty word is I."""
    out = identity(ring)
    for f in word:
        out = out * factor_matrix(ring, f)
    return out


def diag_factorization(ring: Ring, u) -> ElementaryWord:
    """The 4-factor word L(-1/u) U(u-1) L(1) U(1/u - 1) evaluating to
    diag(u, 1/u); requires u to be a unit."""
    ui = ring._idx(u)
    uinv = ring.inv(ui)
    one = ring.embed_int(1)
    return (
        Factor("L", ring.neg(uinv)),
        Factor("U", ring.sub(ui, one)),
        Factor("L", one),
        Factor("U", ring.sub(uinv, one)),
    )


def _simplify_word(word: ElementaryWord, ring: Ring) -> ElementaryWord:
    """Drop identity factors and merge adjacent same-kind ones
    (U(t)U(t') = U(t+t'), likewise L; central factors multiply)."""
    one = ring.embed_int(1)
    out: list[Factor] = []
    for f in word:
        if (f.kind == "C" and f.value == one) or (f.kind != "C" and f.value == 0):
            continue
        if out and out[-1].kind == f.kind:
            prev = out.pop()
            if f.kind == "C":
                merged = ring.mul(prev.value, f.value)
                if merged != one:
                    out.append(Factor("C", merged))
            else:
                merged = ring.add(prev.value, f.value)
                if merged != 0:
                    out.append(Factor(f.kind, merged))
            continue
        out.append(f)
    return tuple(out)


def _factor_unit_corner(A: Mat) -> ElementaryWord:
    # A = L(c/a) * rI * diag(a/r, r/a) * U(b/a) where r^2 = det(A) and r-1 in J
    R = A.ring
    a_inv = R.inv(A.a)
    det = A.det().index
    r = R.sqrt_one_plus_j(R.sub(det, R.embed_int(1))).index
    u = R.mul(A.a, R.inv(r))
    return (
        (Factor("L", R.mul(A.c, a_inv)), Factor("C", r))
        + diag_factorization(R, u)
        + (Factor("U", R.mul(A.b, a_inv)),)
    )


def factor_unipotent(A: Mat) -> ElementaryWord:
    """Write a unipotent matrix as a product of elementary unipotents and at
    most one central factor r*I with r in 1 + J.

    The word re-evaluates to A exactly and has at most 7 non-identity
    factors. When the (1,1) entry is not a unit the (2,2) entry must be one,
    and the factorization of the swapped matrix is transported back by
    exchanging U and L factors.
    """
    R = A.ring
    if not is_unipotent(A):
        raise NotUnipotent(f"{A.to_literal()} is not unipotent over {R.spec_string}")
    if A == identity(R):
        return ()
    if R.is_unit(A.a):
        return _simplify_word(_factor_unit_corner(A), R)
    # a unipotent matrix cannot have both diagonal corners in the radical
    assert R.is_unit(A.d)
    swapped = Mat(R, A.d, A.c, A.b, A.a)
    word = _factor_unit_corner(swapped)
    flipped = tuple(
        Factor({"U": "L", "L": "U", "C": "C"}[f.kind], f.value) for f in word
    )
    return _simplify_word(flipped, R)
