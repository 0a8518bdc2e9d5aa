"""Quaternion arithmetic and the transport onto 2x2 matrices."""

import itertools
import random

import pytest

from orbit_atlas import (
    IsoMismatch,
    ParseError,
    Quat,
    build_iso,
    from_matrix,
    identity,
    mat,
    orbit_of,
    quat_from_literal,
    quat_is_nilpotent,
    quat_is_unipotent,
    quaternion,
    ring_from_string,
    to_matrix,
)


@pytest.fixture(scope="module")
def z3():
    return ring_from_string("Z/3^1")


@pytest.fixture(scope="module")
def iso3(z3):
    return build_iso(z3)


def units_ijk(R):
    one = quaternion(R, 1, 0, 0, 0)
    i = quaternion(R, 0, 1, 0, 0)
    j = quaternion(R, 0, 0, 1, 0)
    k = quaternion(R, 0, 0, 0, 1)
    return one, i, j, k


def test_defining_relations(z3):
    one, i, j, k = units_ijk(z3)
    assert i * i == -one and j * j == -one and k * k == -one
    assert i * j == k and j * i == -k
    assert j * k == i and k * j == -i
    assert k * i == j and i * k == -j
    assert i * j * k == -one


def test_mul_examples(z3):
    one, i, _, _ = units_ijk(z3)
    assert (one + i) * (one - i) == quaternion(z3, 2, 0, 0, 0)
    assert quaternion(z3, 1, 1, 1, 1).norm() == 1
    assert quaternion(z3, 1, 1, 1, 1).trace() == 2


def test_conjugate_and_norm(z3):
    rng = random.Random(0)
    for _ in range(100):
        x = Quat(z3, *(rng.randrange(3) for _ in range(4)))
        assert x.conjugate().conjugate() == x
        assert x * x.conjugate() == quaternion(z3, x.norm().index, 0, 0, 0)


def test_build_iso_examples(z3):
    iso = build_iso(z3)
    assert (iso.a, iso.b) == (1, 1)
    assert iso.m_i == mat(z3, 1, 1, 1, 2)
    assert iso.m_i * iso.m_i == -identity(z3)
    gf5 = ring_from_string("GF(5)")
    iso5 = build_iso(gf5)
    assert (iso5.a, iso5.b) == (2, 0)
    assert iso5.m_i == mat(gf5, 2, 0, 0, 3)
    assert iso5.m_j * iso5.m_j == -identity(gf5)


def test_to_matrix_examples(z3, iso3):
    one, i, _, _ = units_ijk(z3)
    assert to_matrix(iso3, one) == identity(z3)
    assert to_matrix(iso3, i) == mat(z3, 1, 1, 1, 2)


def test_round_trip_exhaustive(z3, iso3):
    images = set()
    for parts in itertools.product(range(3), repeat=4):
        x = Quat(z3, *parts)
        M = to_matrix(iso3, x)
        images.add(M.entries())
        assert from_matrix(iso3, M) == x
    assert len(images) == 81


def test_homomorphism_exhaustive_z3(z3, iso3):
    quats = [Quat(z3, *parts) for parts in itertools.product(range(3), repeat=4)]
    for x, y in itertools.product(quats, repeat=2):
        assert to_matrix(iso3, x * y) == to_matrix(iso3, x) * to_matrix(iso3, y)
        assert to_matrix(iso3, x + y) == to_matrix(iso3, x) + to_matrix(iso3, y)


def test_norm_trace_transport_exhaustive_z3(z3, iso3):
    for parts in itertools.product(range(3), repeat=4):
        x = Quat(z3, *parts)
        M = to_matrix(iso3, x)
        assert M.det() == x.norm()
        assert M.trace() == x.trace()


def test_bijectivity_z9(z9):
    iso = build_iso(z9)
    seen = set()
    for parts in itertools.product(range(9), repeat=4):
        x = Quat(z9, *parts)
        M = to_matrix(iso, x)
        seen.add(M.entries())
        assert from_matrix(iso, M) == x
    assert len(seen) == 9**4


def test_multiplicativity_sampled_z9(z9):
    iso = build_iso(z9)
    rng = random.Random(7)
    for _ in range(20_000):
        x = Quat(z9, *(rng.randrange(9) for _ in range(4)))
        y = Quat(z9, *(rng.randrange(9) for _ in range(4)))
        assert to_matrix(iso, x * y) == to_matrix(iso, x) * to_matrix(iso, y)


def test_nilpotency_transport(z3, iso3):
    assert quat_is_nilpotent(iso3, quaternion(z3, 0, 0, 0, 0))
    assert quat_is_unipotent(iso3, quaternion(z3, 1, 0, 0, 0))
    x = quaternion(z3, 0, 1, 1, 1)
    assert x.trace() == 0 and x.norm() == 0
    assert quat_is_nilpotent(iso3, x)
    assert not quat_is_nilpotent(iso3, quaternion(z3, 1, 1, 0, 0))


def test_nilpotency_criterion_agreement(z3, iso3):
    for parts in itertools.product(range(3), repeat=4):
        x = Quat(z3, *parts)
        by_j = z3.val(x.trace().index) >= 1 and z3.val(x.norm().index) >= 1
        assert by_j == quat_is_nilpotent(iso3, x)


def test_iso_mismatch(z3, z9):
    iso = build_iso(z3)
    with pytest.raises(IsoMismatch):
        to_matrix(iso, quaternion(z9, 1, 0, 0, 0))
    with pytest.raises(IsoMismatch):
        from_matrix(iso, identity(z9))


def test_literals(z3):
    i = quaternion(z3, 0, 1, 0, 0)
    assert quat_from_literal(z3, "0+1*i+0*j+0*k") == i
    assert quat_from_literal(z3, " 0 + 1*I + 0*J + 0*K ") == i
    assert quat_from_literal(z3, "[0,1,0,0]") == i
    assert i.to_literal() == "0+1*i+0*j+0*k"
    assert quat_from_literal(z3, i.to_json()) == i
    with pytest.raises(ParseError):
        quat_from_literal(z3, "1+i")
    with pytest.raises(ParseError):
        quat_from_literal(z3, "[1,2]")


def _quat_inverse(R, x):
    # native quaternion inverse: conjugate times 1/norm (norm must be a unit)
    scale = quaternion(R, R.inv(x.norm().index), 0, 0, 0)
    return x.conjugate() * scale


@pytest.mark.parametrize("spec", ["Z/3^1", "Z/3^2"])
def test_orbit_transport_partition(spec):
    """The quaternion-side BFS partition (native arithmetic only) is the
    pullback of the matrix partition."""
    R = ring_from_string(spec)
    iso = build_iso(R)
    S = R.size
    # unipotent conjugation generators, native on the quaternion side
    gens = []
    for t in range(1, S):
        for M in (mat(R, R.embed_int(1), t, 0, R.embed_int(1)), mat(R, R.embed_int(1), 0, t, R.embed_int(1))):
            u = from_matrix(iso, M)
            gens.append((u, _quat_inverse(R, u)))
    for u, uinv in gens:
        assert u * uinv == quaternion(R, 1, 0, 0, 0)

    def qkey(x):
        return ((x.r1 * S + x.r2) * S + x.r3) * S + x.r4

    visited = set()
    quat_orbits = {}
    for parts in itertools.product(range(S), repeat=4):
        x = Quat(R, *parts)
        if qkey(x) in visited:
            continue
        orbit = {qkey(x)}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for u, uinv in gens:
                z = u * y * uinv
                k = qkey(z)
                if k not in orbit:
                    orbit.add(k)
                    frontier.append(z)
        visited |= orbit
        quat_orbits[qkey(x)] = orbit
        # pullback: matrix orbit of the image has the same size, and every
        # member's preimage is in the quaternion orbit
        m_orbit = orbit_of(to_matrix(iso, x))
        assert len(m_orbit) == len(orbit)
    assert sum(len(o) for o in quat_orbits.values()) == S**4
