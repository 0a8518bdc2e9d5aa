"""Quaternions r1 + r2*i + r3*j + r4*k over a local ring of odd order,
and the explicit isomorphism onto the 2x2 matrix ring.

With a^2 + b^2 = -1 the assignment i -> [[a,b],[b,-a]], j -> [[0,1],[-1,0]],
k -> ij is an isomorphism (2 must be a unit, which odd q guarantees); it
transports every orbit question about quaternions to matrices.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import IsoMismatch, OrbitAtlasError, ParseError
from .mat2 import Mat, identity, is_nilpotent, is_unipotent, scalar
from .rings import Elem, Ring, check_same_ring, find_sum_of_squares_minus_one


@dataclass(frozen=True)
class Quat:
    """Coefficients of 1, i, j, k as element indices of the owning ring."""

    ring: Ring
    r1: int
    r2: int
    r3: int
    r4: int

    def parts(self) -> tuple[int, int, int, int]:
        return (self.r1, self.r2, self.r3, self.r4)

    def __add__(self, other: "Quat") -> "Quat":
        check_same_ring(self.ring, other.ring)
        R = self.ring
        return Quat(R, *(R.add(x, y) for x, y in zip(self.parts(), other.parts())))

    def __sub__(self, other: "Quat") -> "Quat":
        return self + (-other)

    def __neg__(self) -> "Quat":
        R = self.ring
        return Quat(R, *(R.neg(x) for x in self.parts()))

    def __mul__(self, other: "Quat") -> "Quat":
        check_same_ring(self.ring, other.ring)
        R = self.ring
        a1, a2, a3, a4 = self.parts()
        b1, b2, b3, b4 = other.parts()
        m, add, sub = R.mul, R.add, R.sub

        def dot4(s1, s2, s3, s4):
            return add(add(s1, s2), add(s3, s4))

        return Quat(
            R,
            sub(m(a1, b1), dot4(m(a2, b2), m(a3, b3), m(a4, b4), 0)),
            dot4(m(a1, b2), m(a2, b1), m(a3, b4), R.neg(m(a4, b3))),
            dot4(m(a1, b3), R.neg(m(a2, b4)), m(a3, b1), m(a4, b2)),
            dot4(m(a1, b4), m(a2, b3), R.neg(m(a3, b2)), m(a4, b1)),
        )

    def conjugate(self) -> "Quat":
        R = self.ring
        return Quat(R, self.r1, R.neg(self.r2), R.neg(self.r3), R.neg(self.r4))

    def norm(self) -> Elem:
        R = self.ring
        total = 0
        for v in self.parts():
            total = R.add(total, R.mul(v, v))
        return Elem(R, total)

    def trace(self) -> Elem:
        R = self.ring
        return Elem(R, R.add(self.r1, self.r1))

    def to_literal(self) -> str:
        return f"{self.r1}+{self.r2}*i+{self.r3}*j+{self.r4}*k"

    def to_json(self) -> str:
        return json.dumps(list(self.parts()))

    def __eq__(self, other):
        if not isinstance(other, Quat):
            return NotImplemented
        return self.ring.spec == other.ring.spec and self.parts() == other.parts()

    def __hash__(self):
        return hash((self.ring.spec, self.parts()))

    def __repr__(self):
        return f"Quat({self.to_literal()} over {self.ring.spec_string})"


def quaternion(ring: Ring, r1, r2, r3, r4) -> Quat:
    return Quat(ring, *(ring._idx(v) for v in (r1, r2, r3, r4)))


_QUAT_RE = re.compile(r"^(\d+)\+(\d+)\*i\+(\d+)\*j\+(\d+)\*k$")


def quat_from_literal(ring: Ring, text: str) -> Quat:
    """Parse "r1+r2*i+r3*j+r4*k" or the JSON tuple form [r1,r2,r3,r4]."""
    s = re.sub(r"\s+", "", text).lower()
    m = _QUAT_RE.match(s)
    if m:
        return quaternion(ring, *(int(g) for g in m.groups()))
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise ParseError(f"bad quaternion literal {text!r}") from None
    if not isinstance(data, list) or len(data) != 4 or any(not isinstance(v, int) for v in data):
        raise ParseError(f"quaternion JSON form must be [r1,r2,r3,r4], got {text!r}")
    return quaternion(ring, *data)


@dataclass(frozen=True)
class QuatMatIso:
    """The matrix model of the quaternion ring fixed by a pair (a, b) with
    a^2 + b^2 = -1 and a a unit."""

    ring: Ring
    a: int
    b: int
    m_i: Mat
    m_j: Mat
    m_k: Mat


def build_iso(ring: Ring) -> QuatMatIso:
    """Pick the canonical (a, b) and verify the defining relations of the
    images: squares equal -I and i,j anticommute."""
    a, b = find_sum_of_squares_minus_one(ring)
    ai, bi = a.index, b.index
    one = ring.embed_int(1)
    m_i = Mat(ring, ai, bi, bi, ring.neg(ai))
    m_j = Mat(ring, 0, one, ring.neg(one), 0)
    m_k = m_i * m_j
    minus_identity = -identity(ring)
    if m_i * m_i != minus_identity or m_j * m_j != minus_identity or m_k * m_k != minus_identity:
        raise OrbitAtlasError("isomorphism images do not square to -I")
    if m_i * m_j != -(m_j * m_i):
        raise OrbitAtlasError("isomorphism images do not anticommute")
    return QuatMatIso(ring, ai, bi, m_i, m_j, m_k)


def _check_iso(iso: QuatMatIso, ring: Ring):
    if iso.ring is not ring and iso.ring.spec != ring.spec:
        raise IsoMismatch(
            f"isomorphism built over {iso.ring.spec_string}, got {ring.spec_string}"
        )


def to_matrix(iso: QuatMatIso, x: Quat) -> Mat:
    _check_iso(iso, x.ring)
    R = iso.ring
    out = scalar(R, x.r1)
    for coef, img in ((x.r2, iso.m_i), (x.r3, iso.m_j), (x.r4, iso.m_k)):
        out = out + img.scale(coef)
    return out


def from_matrix(iso: QuatMatIso, M: Mat) -> Quat:
    """Invert the linear system; closed form because [[a,-b],[b,a]] has
    determinant a^2 + b^2 = -1, a unit."""
    _check_iso(iso, M.ring)
    R = iso.ring
    r1 = R.half(R.add(M.a, M.d))
    r3 = R.half(R.sub(M.b, M.c))
    u = R.half(R.sub(M.a, M.d))
    v = R.half(R.add(M.b, M.c))
    r2 = R.neg(R.add(R.mul(iso.a, u), R.mul(iso.b, v)))
    r4 = R.sub(R.mul(iso.b, u), R.mul(iso.a, v))
    return Quat(R, r1, r2, r3, r4)


def quat_is_nilpotent(iso: QuatMatIso, x: Quat) -> bool:
    """Transported test; agrees with (trace in J and norm in J)."""
    return is_nilpotent(to_matrix(iso, x))


def quat_is_unipotent(iso: QuatMatIso, x: Quat) -> bool:
    return is_unipotent(to_matrix(iso, x))
