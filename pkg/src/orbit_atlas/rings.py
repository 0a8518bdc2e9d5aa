"""Finite commutative local principal rings of odd order q^n.

Three families are supported, all with residue field GF(q), q = p^r odd:

* ``Z/p^n``          integers modulo a prime power,
* ``GF(q)[u]/u^n``   truncated polynomials over a finite field,
* ``GR(p^n, r)``     Galois rings (unramified extensions of Z/p^n).

Every element is addressed by a dense integer index in ``[0, q^n)`` using a
positional (mixed radix) encoding of its coefficient vector, so small rings
can precompute total operation tables that double as gather tables for the
vectorized enumeration kernels.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import (
    InvalidK,
    InvalidParams,
    NonOddPrime,
    NotAField,
    NotAUnit,
    NotInRadical,
    OrbitAtlasError,
    ParseError,
    ReducibleModulus,
    RingMismatch,
    ZeroArgument,
)

# Full operation tables are materialized only up to this size; larger rings
# fall back to on-demand coefficient arithmetic.
TABLE_LIMIT = 512


class Family(Enum):
    INTEGERS_MOD_PN = "IntegersModPn"
    TRUNCATED_POLY = "TruncatedPolynomialOverField"
    GALOIS_RING = "GaloisRing"


class SquareClass(Enum):
    SQUARE = "square"
    NONSQUARE = "nonsquare"


@dataclass(frozen=True)
class RingSpec:
    """Parameters picking one ring: family, odd prime p, extension degree r,
    radical length n, and (for r > 1) a monic irreducible modulus over GF(p)
    stored as a coefficient tuple, lowest degree first, including the leading 1.
    """

    family: Family
    p: int
    r: int
    n: int
    modulus: tuple[int, ...] | None = None


# ---------------------------------------------------------------------------
# primes and polynomials over GF(p)
# ---------------------------------------------------------------------------


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def _prime_power(m: int) -> tuple[int, int] | None:
    """Write m = p^k with p prime, or return None."""
    if m < 2:
        return None
    p = 2
    while p * p <= m:
        if m % p == 0:
            break
        p += 1
    else:
        return (m, 1)
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


def _poly_trim(v):
    while v and v[-1] == 0:
        v = v[:-1]
    return v


def _poly_divmod(u, f, p):
    """u mod monic f over GF(p); returns remainder coefficients."""
    u = list(u)
    df = len(f) - 1
    for d in range(len(u) - 1, df - 1, -1):
        c = u[d] % p
        if c:
            for j in range(df):
                u[d - df + j] = (u[d - df + j] - c * f[j]) % p
        u[d] = 0
    return _poly_trim(tuple(c % p for c in u[:df]))


def _poly_mulmod(u, v, f, p):
    out = [0] * (len(u) + len(v) - 1) if u and v else []
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                out[i + j] = (out[i + j] + a * b) % p
    return _poly_divmod(out, f, p)


def _poly_powmod(u, e, f, p):
    res = (1,)
    base = _poly_divmod(u, f, p)
    while e:
        if e & 1:
            res = _poly_mulmod(res, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return res


def _poly_gcd(u, v, p):
    u = _poly_trim(tuple(c % p for c in u))
    v = _poly_trim(tuple(c % p for c in v))
    while v:
        lead_inv = pow(v[-1], p - 2, p)
        monic = tuple(c * lead_inv % p for c in v)
        u, v = v, _poly_divmod(u, monic, p)
    return u


def _poly_sub(u, v, p):
    m = max(len(u), len(v))
    return _poly_trim(tuple(((u[i] if i < len(u) else 0) - (v[i] if i < len(v) else 0)) % p for i in range(m)))


def is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p), coefficients low-first."""
    r = len(f) - 1
    if r < 1 or f[-1] % p != 1:
        return False
    t = (0, 1)
    # x^(p^k) mod f by iterating the Frobenius
    frob = [t]
    for _ in range(r):
        frob.append(_poly_powmod(frob[-1], p, f, p))
    if _poly_trim(_poly_sub(frob[r], t, p)):
        return False
    d = r
    ell = 2
    primes = set()
    while ell * ell <= d:
        if d % ell == 0:
            primes.add(ell)
            while d % ell == 0:
                d //= ell
        ell += 1
    if d > 1:
        primes.add(d)
    for ell in primes:
        g = _poly_sub(frob[r // ell], t, p)
        if len(_poly_gcd(f, g, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def lex_least_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree r over GF(p), ordered by the
    integer encoding of the non-leading coefficient vector (low digit first)."""
    for code in range(p**r):
        coeffs = []
        c = code
        for _ in range(r):
            coeffs.append(c % p)
            c //= p
        f = tuple(coeffs) + (1,)
        if is_irreducible(f, p):
            return f
    raise OrbitAtlasError(f"no irreducible of degree {r} over GF({p})")


# ---------------------------------------------------------------------------
# coefficient arithmetic backends
# ---------------------------------------------------------------------------


class _PolyArith:
    """Z/p^n[t]/(f) with f monic of degree r lifted from GF(p).

    r = 1 is plain Z/p^n (modulus None); n = 1 is the field GF(p^r).
    Index encoding: r digits in base p^n, lowest degree first.
    """

    def __init__(self, p, n, r, modulus):
        self.p, self.n, self.r = p, n, r
        self.pn = p**n
        self.q = p**r
        self.size = self.pn**r
        self.modulus = modulus
        if r > 1:
            self.red = tuple((-modulus[i]) % self.pn for i in range(r))
        self._res = self if n == 1 else _PolyArith(p, 1, r, modulus)

    def decode(self, i):
        out = []
        for _ in range(self.r):
            out.append(i % self.pn)
            i //= self.pn
        return out

    def encode(self, digits):
        i = 0
        for d in reversed(digits):
            i = i * self.pn + d
        return i

    def embed_int(self, c):
        return c % self.pn

    def add(self, i, j):
        if self.r == 1:
            return (i + j) % self.pn
        return self.encode([(a + b) % self.pn for a, b in zip(self.decode(i), self.decode(j))])

    def neg(self, i):
        if self.r == 1:
            return (-i) % self.pn
        return self.encode([(-a) % self.pn for a in self.decode(i)])

    def sub(self, i, j):
        return self.add(i, self.neg(j))

    def mul(self, i, j):
        if self.r == 1:
            return (i * j) % self.pn
        u, v = self.decode(i), self.decode(j)
        out = [0] * (2 * self.r - 1)
        for a, ua in enumerate(u):
            if ua:
                for b, vb in enumerate(v):
                    out[a + b] = (out[a + b] + ua * vb) % self.pn
        for d in range(2 * self.r - 2, self.r - 1, -1):
            c = out[d]
            if c:
                for j2 in range(self.r):
                    out[d - self.r + j2] = (out[d - self.r + j2] + c * self.red[j2]) % self.pn
                out[d] = 0
        return self.encode(out[: self.r])

    def val(self, i):
        if i == 0:
            return self.n
        best = self.n
        for d in self.decode(i):
            if d:
                v = 0
                while d % self.p == 0:
                    d //= self.p
                    v += 1
                best = min(best, v)
                if best == 0:
                    return 0
        return best

    def divexact_x(self, i):
        return self.encode([d // self.p for d in self.decode(i)])

    def residue_proj(self, i):
        out = 0
        for d in reversed(self.decode(i)):
            out = out * self.p + d % self.p
        return out

    def section(self, fi):
        digits = []
        for _ in range(self.r):
            digits.append(fi % self.p)
            fi //= self.p
        return self.encode(digits)

    def project_to(self, k, i):
        pk = self.p**k
        out = 0
        for d in reversed(self.decode(i)):
            out = out * pk + d % pk
        return out

    def section_from(self, k, i):
        pk = self.p**k
        digits = []
        for _ in range(self.r):
            digits.append(i % pk)
            i //= pk
        return self.encode(digits)

    def pow(self, i, e):
        res = self.embed_int(1)
        while e:
            if e & 1:
                res = self.mul(res, i)
            i = self.mul(i, i)
            e >>= 1
        return res

    def inv(self, i):
        if self.val(i) != 0:
            raise NotAUnit(f"element {i} is not a unit")
        y = self.section(self._res.pow(self.residue_proj(i), self.q - 2))
        two = self.embed_int(2)
        k = 1
        while k < self.n:
            y = self.mul(y, self.sub(two, self.mul(i, y)))
            k *= 2
        return y

    def iter_radical(self):
        span = self.pn // self.p
        for digits in itertools.product(range(span), repeat=self.r):
            yield self.encode([self.p * d for d in digits])

    # vectorized table construction -------------------------------------

    def digit_matrix(self):
        idx = np.arange(self.size, dtype=np.int64)
        cols = []
        for _ in range(self.r):
            cols.append(idx % self.pn)
            idx = idx // self.pn
        return np.stack(cols, axis=1)

    def encode_matrix(self, digits):
        out = np.zeros(digits.shape[:-1], dtype=np.int64)
        for k in range(self.r - 1, -1, -1):
            out = out * self.pn + digits[..., k]
        return out

    def table_arrays(self):
        D = self.digit_matrix()
        add = self.encode_matrix((D[:, None, :] + D[None, :, :]) % self.pn)
        neg = self.encode_matrix((-D) % self.pn)
        mul = np.empty((self.size, self.size), dtype=np.int64)
        red = np.array(self.red, dtype=np.int64) if self.r > 1 else None
        for i in range(self.size):
            u = D[i]
            conv = np.zeros((self.size, 2 * self.r - 1), dtype=np.int64)
            for k in range(self.r):
                if u[k]:
                    conv[:, k : k + self.r] += u[k] * D
            conv %= self.pn
            if self.r > 1:
                for d in range(2 * self.r - 2, self.r - 1, -1):
                    coef = conv[:, d]
                    conv[:, d - self.r : d] = (conv[:, d - self.r : d] + coef[:, None] * red) % self.pn
                    conv[:, d] = 0
            mul[i] = self.encode_matrix(conv[:, : self.r])
        val = np.zeros(self.size, dtype=np.int64)
        for k in range(1, self.n + 1):
            val += np.all(D % self.p**k == 0, axis=1)
        return add, mul, neg, val


class _TruncArith:
    """GF(q)[u]/u^n: n digits that are indices into a base field backend."""

    def __init__(self, base: _PolyArith, n: int):
        assert base.n == 1 and n >= 2
        self.base = base
        self.n = n
        self.p, self.r = base.p, base.r
        self.q = base.size
        self.size = self.q**n

    def decode(self, i):
        out = []
        for _ in range(self.n):
            out.append(i % self.q)
            i //= self.q
        return out

    def encode(self, digits):
        i = 0
        for d in reversed(digits):
            i = i * self.q + d
        return i

    def embed_int(self, c):
        return c % self.p

    def add(self, i, j):
        return self.encode([self.base.add(a, b) for a, b in zip(self.decode(i), self.decode(j))])

    def neg(self, i):
        return self.encode([self.base.neg(a) for a in self.decode(i)])

    def sub(self, i, j):
        return self.add(i, self.neg(j))

    def mul(self, i, j):
        u, v = self.decode(i), self.decode(j)
        out = [0] * self.n
        for a in range(self.n):
            if u[a]:
                for b in range(self.n - a):
                    out[a + b] = self.base.add(out[a + b], self.base.mul(u[a], v[b]))
        return self.encode(out)

    def val(self, i):
        for k, d in enumerate(self.decode(i)):
            if d:
                return k
        return self.n

    def divexact_x(self, i):
        return self.encode(self.decode(i)[1:] + [0])

    def residue_proj(self, i):
        return i % self.q

    def section(self, fi):
        return fi

    def project_to(self, k, i):
        return i % self.q**k if k < self.n else i

    def section_from(self, k, i):
        return i

    def pow(self, i, e):
        res = self.embed_int(1)
        while e:
            if e & 1:
                res = self.mul(res, i)
            i = self.mul(i, i)
            e >>= 1
        return res

    def inv(self, i):
        if self.val(i) != 0:
            raise NotAUnit(f"element {i} is not a unit")
        y = self.base.pow(self.residue_proj(i), self.q - 2)
        two = self.embed_int(2)
        k = 1
        while k < self.n:
            y = self.mul(y, self.sub(two, self.mul(i, y)))
            k *= 2
        return y

    def iter_radical(self):
        for rest in range(self.q ** (self.n - 1)):
            yield rest * self.q

    def digit_matrix(self):
        idx = np.arange(self.size, dtype=np.int64)
        cols = []
        for _ in range(self.n):
            cols.append(idx % self.q)
            idx = idx // self.q
        return np.stack(cols, axis=1)

    def encode_matrix(self, digits):
        out = np.zeros(digits.shape[:-1], dtype=np.int64)
        for k in range(self.n - 1, -1, -1):
            out = out * self.q + digits[..., k]
        return out

    def table_arrays(self):
        fadd, fmul, fneg, _ = self.base.table_arrays()
        D = self.digit_matrix()
        add = self.encode_matrix(fadd[D[:, None, :], D[None, :, :]])
        neg = self.encode_matrix(fneg[D])
        mul = np.empty((self.size, self.size), dtype=np.int64)
        for i in range(self.size):
            u = D[i]
            acc = np.zeros((self.size, self.n), dtype=np.int64)
            for a in range(self.n):
                if u[a]:
                    row = fmul[u[a]]
                    for b in range(self.n - a):
                        acc[:, a + b] = fadd[acc[:, a + b], row[D[:, b]]]
            mul[i] = self.encode_matrix(acc)
        nz = D != 0
        val = np.where(nz.any(axis=1), nz.argmax(axis=1), self.n)
        return add, mul, neg, val.astype(np.int64)


# ---------------------------------------------------------------------------
# rings and elements
# ---------------------------------------------------------------------------


@dataclass
class OpTables:
    """Total operation maps on element indices (int64 numpy arrays)."""

    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # -1 marks non-units
    val: np.ndarray


class Ring:
    """A ring instance: spec, arithmetic backend, optional tables, and the
    canonical structural data (radical generator x, Teichmüller generator g).

    Immutable after construction; all operations are pure reads, so instances
    are safe to share across threads.
    """

    def __init__(self, spec: RingSpec, arith, tables: OpTables | None):
        self.spec = spec
        self.family = spec.family
        self.p, self.r, self.n = spec.p, spec.r, spec.n
        self.q = spec.p**spec.r
        self.size = self.q**spec.n
        self._arith = arith
        self.tables = tables
        self.x_idx = self._compute_x()
        self.g_idx, self.teich, self.teich_by_residue = self._compute_teichmuller()
        self._quotients: dict[int, QuotientMap] = {}
        self._sum_of_squares: tuple[int, int] | None = None

    # -- structural setup -------------------------------------------------

    def _compute_x(self):
        if self.n == 1:
            return 0
        if isinstance(self._arith, _TruncArith):
            return self._arith.encode([0, 1] + [0] * (self.n - 2))
        return self._arith.embed_int(self.p)

    def _compute_teichmuller(self):
        # residue generator: least field index of multiplicative order q - 1
        res = self._arith._res if isinstance(self._arith, _PolyArith) else self._arith.base
        q = self.q
        fac = []
        d = q - 1
        f = 2
        while f * f <= d:
            if d % f == 0:
                fac.append(f)
                while d % f == 0:
                    d //= f
            f += 1
        if d > 1:
            fac.append(d)
        gen = None
        for u in range(1, q):
            if all(res.pow(u, (q - 1) // ell) != 1 for ell in fac):
                gen = u
                break
        if gen is None:
            raise OrbitAtlasError("residue field has no generator (impossible)")
        g = self._arith.pow(self._arith.section(gen), q ** (self.n - 1))
        if self._arith.pow(g, q) != g:
            raise OrbitAtlasError("Teichmüller lift failed (g^q != g)")
        powers = [g]
        for _ in range(q - 2):
            powers.append(self._arith.mul(powers[-1], g))
        teich = (0, *powers)
        by_res = [0] * q
        for t in teich:
            by_res[self._arith.residue_proj(t)] = t
        if len(set(teich)) != q:
            raise OrbitAtlasError("Teichmüller set is not a transversal")
        return g, teich, tuple(by_res)

    # -- raw index operations ---------------------------------------------

    def add(self, i: int, j: int) -> int:
        if self.tables is not None:
            return int(self.tables.add[i, j])
        return self._arith.add(i, j)

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg(j))

    def neg(self, i: int) -> int:
        if self.tables is not None:
            return int(self.tables.neg[i])
        return self._arith.neg(i)

    def mul(self, i: int, j: int) -> int:
        if self.tables is not None:
            return int(self.tables.mul[i, j])
        return self._arith.mul(i, j)

    def inv(self, i: int) -> int:
        if self.tables is not None:
            out = int(self.tables.inv[i])
            if out < 0:
                raise NotAUnit(f"element {i} of {self.spec_string} is not a unit")
            return out
        return self._arith.inv(i)

    def val(self, i: int) -> int:
        if self.tables is not None:
            return int(self.tables.val[i])
        return self._arith.val(i)

    def is_unit(self, i: int) -> bool:
        return self.val(i) == 0

    def pow(self, i: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(i), -e)
        return self._arith.pow(i, e) if self.tables is None else self._pow_table(i, e)

    def _pow_table(self, i, e):
        res = 1
        while e:
            if e & 1:
                res = int(self.tables.mul[res, i])
            i = int(self.tables.mul[i, i])
            e >>= 1
        return res

    def embed_int(self, c: int) -> int:
        return self._arith.embed_int(c)

    def half(self, i: int) -> int:
        """i / 2; defined because q is odd."""
        return self.mul(i, self.inv(self.embed_int(2)))

    # -- element constructors ----------------------------------------------

    def elem(self, i) -> "Elem":
        if isinstance(i, Elem):
            check_same_ring(self, i.ring)
            return i
        i = int(i)
        if not 0 <= i < self.size:
            raise ParseError(f"index {i} out of range for {self.spec_string}")
        return Elem(self, i)

    @property
    def zero(self) -> "Elem":
        return Elem(self, 0)

    @property
    def one(self) -> "Elem":
        return Elem(self, self.embed_int(1))

    @property
    def x(self) -> "Elem":
        return Elem(self, self.x_idx)

    @property
    def g(self) -> "Elem":
        return Elem(self, self.g_idx)

    @property
    def unit_count(self) -> int:
        return self.size - self.size // self.q

    @property
    def radical_size(self) -> int:
        return self.size // self.q

    def units(self):
        return (i for i in range(self.size) if self.val(i) == 0)

    def radical(self):
        return self._arith.iter_radical()

    # -- structured operations ----------------------------------------------

    def teichmuller_coords(self, e) -> tuple["Elem", ...]:
        """Digits of e in the unique expansion sum(lam_i * x^i) with every
        lam_i in the Teichmüller set {0, g, ..., g^(q-1)}."""
        cur = self._idx(e)
        out = []
        for _ in range(self.n):
            lam = self.teich_by_residue[self._arith.residue_proj(cur)]
            out.append(Elem(self, lam))
            cur = self._arith.divexact_x(self.sub(cur, lam))
        return tuple(out)

    def teichmuller_assemble(self, coords) -> "Elem":
        acc = 0
        xp = self.embed_int(1)
        for lam in coords:
            li = self._idx(lam)
            if li not in self.teich:
                raise ValueError(f"{li} is not a Teichmüller digit")
            acc = self.add(acc, self.mul(li, xp))
            xp = self.mul(xp, self.x_idx)
        return Elem(self, acc)

    def sqrt_one_plus_j(self, j) -> "Elem":
        """The unique 1 + x, x in J, with (1 + x)^2 = 1 + j."""
        ji = self._idx(j)
        if self.val(ji) < 1:
            raise NotInRadical(f"element {ji} is not in the radical")
        one = self.embed_int(1)
        if self.radical_size <= 4096:
            for xx in self.radical():
                if self.add(self.mul(xx, xx), self.add(xx, xx)) == ji:
                    return Elem(self, self.add(one, xx))
            raise OrbitAtlasError("square root search failed (impossible)")
        # Newton iteration on f(x) = x^2 + 2x - j; f'(x) = 2 + 2x is a unit
        two = self.embed_int(2)
        xx = 0
        for _ in range(self.n.bit_length() + 2):
            fx = self.sub(self.add(self.mul(xx, xx), self.add(xx, xx)), ji)
            if fx == 0:
                return Elem(self, self.add(one, xx))
            xx = self.sub(xx, self.mul(fx, self.inv(self.add(two, self.add(xx, xx)))))
        raise OrbitAtlasError("square root refinement did not converge")

    def square_class(self, u) -> SquareClass:
        """Euler criterion u^((q-1)/2) over the field case n = 1."""
        ui = self._idx(u)
        if self.n != 1:
            raise NotAField("square classes are defined over the residue field only")
        if ui == 0:
            raise ZeroArgument("square class of 0 is undefined")
        e = self.pow(ui, (self.q - 1) // 2)
        if e == self.embed_int(1):
            return SquareClass.SQUARE
        if e != self.neg(self.embed_int(1)):
            raise OrbitAtlasError("Euler criterion returned a non-sign value")
        return SquareClass.NONSQUARE

    def square_class_by_generator(self, u) -> SquareClass:
        """Independent check: parity of the discrete log base g."""
        ui = self._idx(u)
        if self.n != 1:
            raise NotAField("square classes are defined over the residue field only")
        if ui == 0:
            raise ZeroArgument("square class of 0 is undefined")
        cur = self.embed_int(1)
        for k in range(self.q - 1):
            if cur == ui:
                return SquareClass.SQUARE if k % 2 == 0 else SquareClass.NONSQUARE
            cur = self.mul(cur, self.g_idx)
        raise OrbitAtlasError("element not in the unit group")

    def quotient(self, k: int) -> "QuotientMap":
        """R/J^k together with the canonical projection and its section."""
        if not 1 <= k <= self.n:
            raise InvalidK(f"k must be in 1..{self.n}, got {k}")
        if k in self._quotients:
            return self._quotients[k]
        if k == self.n:
            qm = QuotientMap(self, self, k)
        else:
            qm = QuotientMap(self, build_ring(replace(self.spec, n=k)), k)
        self._quotients[k] = qm
        return qm

    @property
    def residue_ring(self) -> "Ring":
        return self.quotient(1).ring

    def residue_idx(self, i: int) -> int:
        return self._arith.residue_proj(i)

    def _idx(self, e) -> int:
        if isinstance(e, Elem):
            check_same_ring(self, e.ring)
            return e.index
        e = int(e)
        if not 0 <= e < self.size:
            raise ParseError(f"index {e} out of range for {self.spec_string}")
        return e

    @property
    def spec_string(self) -> str:
        return spec_to_string(self.spec)

    def __repr__(self):
        return f"Ring({self.spec_string})"


def check_same_ring(r1: Ring, r2: Ring):
    if r1 is not r2 and r1.spec != r2.spec:
        raise RingMismatch(f"cannot mix {r1.spec_string} and {r2.spec_string}")


@dataclass(frozen=True)
class Elem:
    """A ring element: its dense index plus the owning ring."""

    ring: Ring
    index: int

    def _other(self, other) -> int:
        if isinstance(other, Elem):
            check_same_ring(self.ring, other.ring)
            return other.index
        return self.ring._idx(other)

    def __add__(self, other):
        return Elem(self.ring, self.ring.add(self.index, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Elem(self.ring, self.ring.sub(self.index, self._other(other)))

    def __rsub__(self, other):
        return Elem(self.ring, self.ring.sub(self._other(other), self.index))

    def __mul__(self, other):
        return Elem(self.ring, self.ring.mul(self.index, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Elem(self.ring, self.ring.neg(self.index))

    def __pow__(self, e: int):
        return Elem(self.ring, self.ring.pow(self.index, e))

    def inverse(self) -> "Elem":
        return Elem(self.ring, self.ring.inv(self.index))

    def val(self) -> int:
        return self.ring.val(self.index)

    def is_unit(self) -> bool:
        return self.val() == 0

    def __eq__(self, other):
        if isinstance(other, Elem):
            return self.ring.spec == other.ring.spec and self.index == other.index
        if isinstance(other, int):
            return self.index == other
        return NotImplemented

    def __hash__(self):
        # matches hash(int) so indices and elements can share sets
        return hash(self.index)

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"Elem({self.index} in {self.ring.spec_string})"


@dataclass(frozen=True)
class QuotientMap:
    """R -> R/J^k: a surjective ring homomorphism with a canonical section
    (section o project = id mod J^k, project o section = id)."""

    source: Ring
    ring: Ring
    k: int

    def project_idx(self, i: int) -> int:
        if self.k == self.source.n:
            return i
        return self.source._arith.project_to(self.k, i)

    def section_idx(self, i: int) -> int:
        if self.k == self.source.n:
            return i
        return self.source._arith.section_from(self.k, i)

    def project(self, e) -> Elem:
        return Elem(self.ring, self.project_idx(self.source._idx(e)))

    def section(self, e) -> Elem:
        return Elem(self.source, self.section_idx(self.ring._idx(e)))


def quotient_ring(ring: Ring, k: int) -> QuotientMap:
    return ring.quotient(k)


# ---------------------------------------------------------------------------
# construction, parsing, formatting
# ---------------------------------------------------------------------------


def _validate(spec: RingSpec) -> RingSpec:
    if spec.n < 1 or spec.r < 1:
        raise InvalidParams(f"need n >= 1 and r >= 1, got n={spec.n}, r={spec.r}")
    if spec.p == 2 or not _is_prime(spec.p):
        raise NonOddPrime(f"p must be an odd prime, got {spec.p}")
    if spec.family is Family.INTEGERS_MOD_PN and spec.r != 1:
        raise InvalidParams("IntegersModPn requires r = 1")
    if spec.r == 1:
        if spec.modulus is not None:
            raise InvalidParams("modulus is only meaningful for r > 1")
        return spec
    mod = spec.modulus
    if mod is None:
        mod = lex_least_irreducible(spec.p, spec.r)
    else:
        mod = tuple(int(c) % spec.p for c in mod)
        if len(mod) != spec.r + 1 or mod[-1] != 1:
            raise InvalidParams("modulus must be monic of degree r")
        if not is_irreducible(mod, spec.p):
            raise ReducibleModulus(f"{mod} is reducible over GF({spec.p})")
    return replace(spec, modulus=mod)


_build_cache: dict[tuple[RingSpec, bool], Ring] = {}


def build_ring(spec: RingSpec, materialize_tables: bool | None = None, use_cache: bool = True) -> Ring:
    """Construct (and cache) the ring described by spec.

    Tables are materialized when the ring has at most TABLE_LIMIT elements
    unless overridden; larger rings compute arithmetic on demand from
    coefficient vectors.
    """
    spec = _validate(spec)
    want_tables = spec.p ** (spec.r * spec.n) <= TABLE_LIMIT if materialize_tables is None else materialize_tables
    key = (spec, want_tables)
    if use_cache and key in _build_cache:
        return _build_cache[key]

    if spec.family is Family.TRUNCATED_POLY:
        base = _PolyArith(spec.p, 1, spec.r, spec.modulus)
        arith = base if spec.n == 1 else _TruncArith(base, spec.n)
    else:
        arith = _PolyArith(spec.p, spec.n, spec.r, spec.modulus)

    tables = None
    if want_tables:
        add, mul, neg, val = arith.table_arrays()
        inv = np.full(arith.size, -1, dtype=np.int64)
        rows, cols = np.nonzero(mul == arith.embed_int(1))
        inv[rows] = cols
        if (val[rows] > 0).any():
            raise OrbitAtlasError("table construction bug: non-unit with an inverse")
        tables = OpTables(add=add, mul=mul, neg=neg, inv=inv, val=val)

    ring = Ring(spec, arith, tables)
    if use_cache:
        _build_cache[key] = ring
    return ring


_Z_RE = re.compile(r"^z/(\d+)(?:\^(\d+))?$")
_GF_RE = re.compile(r"^gf\((\d+)(?:\^(\d+))?\)$")
_GFU_RE = re.compile(r"^gf\((\d+)(?:\^(\d+))?\)\[u\]/u(?:\^(\d+))?$")
_GR_RE = re.compile(r"^gr\((\d+),(\d+)\)$")


def _field_params(base: str, exp: str | None) -> tuple[int, int]:
    if exp is not None:
        return int(base), int(exp)
    pp = _prime_power(int(base))
    if pp is None:
        raise InvalidParams(f"{base} is not a prime power")
    return pp


def parse_ring_spec(text: str) -> RingSpec:
    """Parse ring spec grammar: Z/p^n, GF(p^r), GF(p^r)[u]/u^n, GR(p^n,r).

    Case-insensitive; whitespace ignored. Validation of p happens at build
    time so that e.g. Z/4^1 reports NonOddPrime rather than a parse failure.
    """
    s = re.sub(r"\s+", "", text).lower()
    m = _Z_RE.match(s)
    if m:
        if m.group(2) is not None:
            p, n = int(m.group(1)), int(m.group(2))
        else:
            p, n = _field_params(m.group(1), None)
        return RingSpec(Family.INTEGERS_MOD_PN, p, 1, n)
    m = _GFU_RE.match(s)
    if m:
        p, r = _field_params(m.group(1), m.group(2))
        n = int(m.group(3)) if m.group(3) else 1
        return RingSpec(Family.TRUNCATED_POLY, p, r, n)
    m = _GF_RE.match(s)
    if m:
        p, r = _field_params(m.group(1), m.group(2))
        return RingSpec(Family.TRUNCATED_POLY, p, r, 1)
    m = _GR_RE.match(s)
    if m:
        p, n = _field_params(m.group(1), None)
        return RingSpec(Family.GALOIS_RING, p, int(m.group(2)), n)
    raise ParseError(f"cannot parse ring spec {text!r}")


def spec_to_string(spec: RingSpec) -> str:
    if spec.family is Family.INTEGERS_MOD_PN:
        return f"Z/{spec.p}^{spec.n}"
    if spec.family is Family.TRUNCATED_POLY:
        base = f"GF({spec.p ** spec.r})"
        return base if spec.n == 1 else f"{base}[u]/u^{spec.n}"
    return f"GR({spec.p ** spec.n},{spec.r})"


def ring_from_string(text: str, **kwargs) -> Ring:
    return build_ring(parse_ring_spec(text), **kwargs)


def format_modulus(spec: RingSpec) -> str:
    if spec.modulus is None:
        return "-"
    terms = []
    for k in range(len(spec.modulus) - 1, -1, -1):
        c = spec.modulus[k]
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            coef = "" if c == 1 else str(c)
            power = "t" if k == 1 else f"t^{k}"
            terms.append(coef + power)
    return "+".join(terms) if terms else "0"


def find_sum_of_squares_minus_one(ring: Ring) -> tuple[Elem, Elem]:
    """Lexicographically smallest pair (a, b) with a a unit and a^2 + b^2 = -1.

    Exists for every supported ring since q is odd; found with one pass that
    records the smallest square root of each square.
    """
    if ring._sum_of_squares is not None:
        a, b = ring._sum_of_squares
        return ring.elem(a), ring.elem(b)
    smallest_root: dict[int, int] = {}
    for b in range(ring.size):
        v = ring.mul(b, b)
        if v not in smallest_root:
            smallest_root[v] = b
    minus_one = ring.neg(ring.embed_int(1))
    for a in range(ring.size):
        if ring.val(a) != 0:
            continue
        b = smallest_root.get(ring.sub(minus_one, ring.mul(a, a)))
        if b is not None:
            ring._sum_of_squares = (a, b)
            return ring.elem(a), ring.elem(b)
    raise OrbitAtlasError("no unit solution of a^2 + b^2 = -1 (impossible for odd q)")
