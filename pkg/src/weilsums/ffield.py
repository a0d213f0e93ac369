"""Exact arithmetic in finite fields F_{p^e} and exponent classification.

Elements are packed integers: the element with coefficients
``(c_0, ..., c_{e-1})`` on the power basis of the modulus is stored as
``sum(c_k * p**k)``, an integer in ``[0, p**e)``.  Every field keeps eager
discrete-log tables (``exp``/``log`` against a fixed generator of the unit
group), which makes multiplication, powers and inverses O(1) lookups.
Construction refuses orders above 2**20, which is far beyond the exhaustive
range this library targets.

The default modulus is deterministic: monic irreducible polynomials of
degree e are scanned in ascending order of their packed non-leading
coefficients (constant term least significant) and the first hit wins.  The
generator is the smallest element, in packed order, of multiplicative order
q - 1.  Presentation independence of every derived quantity is covered by
tests rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegreeMismatch,
    FieldTooLarge,
    NotASubfield,
    NotCoprime,
    NotPrime,
    OddDegree,
    ReducibleModulus,
    ZeroInverse,
)

MAX_ORDER = 1 << 20


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial helpers over F_p (dense coefficient lists, constant first) --


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for k in range(len(a) - 1 - df, -1, -1):
        c = (a[k + df] * inv_lead) % p
        if c:
            for j in range(df + 1):
                a[k + j] = (a[k + j] - c * f[j]) % p
    del a[df:]
    while a and a[-1] == 0:
        a.pop()
    return a

def _ppowmod(base: list[int], k: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while k:
        if k & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        k >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(u: list[int], v: list[int], p: int) -> list[int]:
    out = [0] * max(len(u), len(v))
    for i, c in enumerate(u):
        out[i] = c % p
    for i, c in enumerate(v):
        out[i] = (out[i] - c) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    e = len(f) - 1
    if e < 1:
        return False
    x_red = _pmod([0, 1], f, p)
    xq = _ppowmod([0, 1], p**e, f, p)
    if _psub(xq, x_red, p):
        return False
    for r in prime_factors(e):
        xr = _ppowmod([0, 1], p ** (e // r), f, p)
        g = _pgcd(f, _psub(xr, x_red, p), p)
        if len(g) - 1 > 0:
            return False
    return True


def iter_irreducible(p: int, e: int):
    """Monic irreducible degree-e polynomials over F_p in canonical order.

    Yields coefficient tuples (constant first, length e+1).  Polynomials with
    a vanishing constant term are skipped: x divides them, and for degree one
    this pins x + 1 as the canonical choice.
    """
    for m in range(p**e):
        if m % p == 0:
            continue
        coeffs = [(m // p**k) % p for k in range(e)] + [1]
        if _is_irreducible(coeffs, p):
            yield tuple(coeffs)


@dataclass(frozen=True)
class ExponentClass:
    """An exponent orbit modulo q-1 under multiplication by p and inversion."""

    d: int
    orbit: tuple[int, ...]
    degenerate: bool
    niho: bool | None  # defined only for even extension degree


class FieldCtx:
    """A concrete finite field with fixed modulus and unit-group generator.

    Immutable after construction and safe to share across threads; all
    operations are pure functions of their inputs.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...], _checked: bool = False):
        if not _checked:
            raise TypeError("use make_field()")
        self.p = p
        self.e = e
        self.q = p**e
        self.n = self.q - 1  # unit group order
        self.modulus = modulus
        self._build_tables()
        self._trace_table: np.ndarray | None = None
        self._tr_basis: np.ndarray | None = None
        self._spread_exp: np.ndarray | None = None

    # -- construction helpers -------------------------------------------

    def _poly_of(self, x: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.e):
            out.append(x % p)
            x //= p
        while out and out[-1] == 0:
            out.pop()
        return out

    def _pack(self, coeffs) -> int:
        x = 0
        for k, c in enumerate(coeffs):
            x += (c % self.p) * self.p**k
        return x

    def _mul_poly(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        prod = _pmul(self._poly_of(x), self._poly_of(y), self.p)
        return self._pack(_pmod(prod, list(self.modulus), self.p))

    def _order_is_full(self, x: int) -> bool:
        if x == 0:
            return False
        base = self._poly_of(x)
        f = list(self.modulus)
        for r in prime_factors(self.n):
            if _ppowmod(base, self.n // r, f, self.p) == [1]:
                return False
        return True

    def _build_tables(self) -> None:
        n, q = self.n, self.q
        if n == 1:
            self.g = 1
        else:
            g = None
            for cand in range(2, q):
                if self._order_is_full(cand):
                    g = cand
                    break
            if g is None:  # pragma: no cover - impossible for a true field
                raise ReducibleModulus("no generator found; modulus not a field")
            self.g = g
        exp = np.zeros(n, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = 1
        for i in range(n):
            exp[i] = cur
            log[cur] = i
            cur = self._mul_poly(cur, self.g)
        if cur != 1 or np.any(log[1:] < 0):
            raise ReducibleModulus("generator does not enumerate the units")
        exp.setflags(write=False)
        log.setflags(write=False)
        self.exp = exp
        self.log = log

    # -- element arithmetic ----------------------------------------------

    def element(self, coeffs) -> int:
        """Pack a coefficient sequence (length <= e, entries any ints)."""
        return self._pack(coeffs)

    def coeff_vector(self, x: int) -> tuple[int, ...]:
        p = self.p
        return tuple((x // p**k) % p for k in range(self.e))

    def add(self, x: int, y: int) -> int:
        p = self.p
        if p == 2:
            return x ^ y
        if self.e == 1:
            s = x + y
            return s - p if s >= p else s
        out = 0
        scale = 1
        for _ in range(self.e):
            s = x % p + y % p
            if s >= p:
                s -= p
            out += s * scale
            scale *= p
            x //= p
            y //= p
        return out

    def neg(self, x: int) -> int:
        p = self.p
        if p == 2:
            return x
        out = 0
        scale = 1
        for _ in range(self.e):
            c = x % p
            out += (p - c if c else 0) * scale
            scale *= p
            x //= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp[(self.log[x] + self.log[y]) % self.n])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroInverse("zero has no inverse")
        return int(self.exp[(-self.log[x]) % self.n])

    def pow(self, x: int, k: int) -> int:
        if x == 0:
            if k < 0:
                raise ZeroInverse("negative power of zero")
            return 1 if k == 0 else 0
        return int(self.exp[(self.log[x] * (k % self.n)) % self.n])

    def frob(self, x: int) -> int:
        return self.pow(x, self.p)

    def minus_one(self) -> int:
        """The additive inverse of 1 (equals 1 itself in characteristic 2)."""
        return self.neg(1)

    # -- traces, norms, tables --------------------------------------------

    @property
    def tr_basis(self) -> np.ndarray:
        """Absolute traces of the power-basis elements 1, t, ..., t^(e-1)."""
        if self._tr_basis is None:
            vals = []
            for k in range(self.e):
                x = self.p**k  # packed t^k
                acc = x
                cur = x
                for _ in range(self.e - 1):
                    cur = self.frob(cur)
                    acc = self.add(acc, cur)
                if acc >= self.p:
                    raise ReducibleModulus("trace left the prime subfield")
                vals.append(acc)
            arr = np.array(vals, dtype=np.int64)
            arr.setflags(write=False)
            self._tr_basis = arr
        return self._tr_basis

    @property
    def trace_table(self) -> np.ndarray:
        """Absolute trace of every element, indexed by packed value."""
        if self._trace_table is None:
            table = np.empty(self.q, dtype=np.int64)
            powers = self.p ** np.arange(self.e, dtype=np.int64)
            block = 1 << 16
            for start in range(0, self.q, block):
                idx = np.arange(start, min(start + block, self.q), dtype=np.int64)
                digits = (idx[:, None] // powers) % self.p
                table[start : start + len(idx)] = (digits @ self.tr_basis) % self.p
            table.setflags(write=False)
            self._trace_table = table
        return self._trace_table

    def trace_abs(self, x: int) -> int:
        """Absolute trace x + x^p + ... + x^(p^(e-1)), as an integer in [0, p)."""
        return int(self.trace_table[x])

    @property
    def digit_width(self) -> int:
        """Bit width per digit in the spread (carry-free) element encoding."""
        return 63 // self.e

    @property
    def spread_exp(self) -> np.ndarray:
        """exp table re-encoded with digits spread into digit_width bit fields."""
        if self._spread_exp is None:
            if self.p == 2 or self.e == 1:
                arr = self.exp
            else:
                w = self.digit_width
                if 2 * self.p - 1 >= 1 << w:
                    raise FieldTooLarge("digits do not fit the spread encoding")
                digits = (
                    self.exp[:, None] // self.p ** np.arange(self.e, dtype=np.int64)
                ) % self.p
                arr = digits @ (1 << (w * np.arange(self.e, dtype=np.int64)))
                arr.setflags(write=False)
            self._spread_exp = arr
        return self._spread_exp

    def descriptor(self) -> str:
        return f"{self.p}^{self.e}/{','.join(str(c) for c in self.modulus)}"

    def same_field(self, other: "FieldCtx") -> bool:
        """Same presentation: equal (p, e, modulus); the generator follows."""
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __repr__(self) -> str:
        return f"FieldCtx({self.descriptor()!r}, g={self.g})"


def make_field(p: int, e: int, modulus=None) -> FieldCtx:
    """Build F_{p^e} with a deterministic default modulus and generator."""
    if not _is_prime_int(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise DegreeMismatch("extension degree must be at least 1")
    if p**e > MAX_ORDER:
        raise FieldTooLarge(f"order {p}^{e} exceeds {MAX_ORDER}")
    if modulus is None:
        modulus = next(iter_irreducible(p, e))
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise DegreeMismatch(f"modulus must be monic of degree {e}")
        if not _is_irreducible(list(modulus), p):
            raise ReducibleModulus(f"{modulus} is reducible over F_{p}")
    return FieldCtx(p, e, tuple(modulus), _checked=True)


def parse_field_descriptor(text: str) -> FieldCtx:
    """Parse "p^e" or "p^e/c0,c1,...,ce" (constant term first)."""
    body, _, tail = text.partition("/")
    try:
        p_str, _, e_str = body.partition("^")
        p = int(p_str)
        e = int(e_str) if e_str else 1
    except ValueError as exc:
        raise ValueError(f"bad field descriptor {text!r}") from exc
    modulus = None
    if tail:
        try:
            modulus = tuple(int(c) for c in tail.split(","))
        except ValueError as exc:
            raise ValueError(f"bad modulus in descriptor {text!r}") from exc
    return make_field(p, e, modulus)


# -- subfields and embeddings ----------------------------------------------


def _check_subfield(sub_degree: int, ctx: FieldCtx) -> None:
    if sub_degree < 1 or ctx.e % sub_degree != 0:
        raise NotASubfield(f"degree {sub_degree} does not divide {ctx.e}")


def trace_rel(L: FieldCtx, sub_degree: int, x: int) -> int:
    """Relative trace onto the subfield of the given absolute degree."""
    _check_subfield(sub_degree, L)
    step = L.p**sub_degree
    acc = x
    cur = x
    for _ in range(L.e // sub_degree - 1):
        cur = L.pow(cur, step)
        acc = L.add(acc, cur)
    return acc


def norm_rel(L: FieldCtx, sub_degree: int, x: int) -> int:
    """Relative norm onto the subfield of the given absolute degree."""
    _check_subfield(sub_degree, L)
    step = L.p**sub_degree
    acc = x
    cur = x
    for _ in range(L.e // sub_degree - 1):
        cur = L.pow(cur, step)
        acc = L.mul(acc, cur)
    return acc


def minimal_polynomial(ctx: FieldCtx, x: int) -> tuple[int, ...]:
    """Minimal polynomial of x over F_p (constant first, monic)."""
    conjugates = []
    cur = x
    while cur not in conjugates:
        conjugates.append(cur)
        cur = ctx.frob(cur)
    poly = [1]  # polynomial with field-element coefficients
    for c in conjugates:
        nxt = [0] * (len(poly) + 1)
        for k, a in enumerate(poly):
            nxt[k + 1] = ctx.add(nxt[k + 1], a)
            nxt[k] = ctx.add(nxt[k], ctx.mul(a, ctx.neg(c)))
        poly = nxt
    out = []
    for a in poly:
        if a >= ctx.p:
            raise NotASubfield("minimal polynomial left the prime field")
        out.append(a)
    return tuple(out)


def _eval_poly(ctx: FieldCtx, poly: tuple[int, ...], x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


@lru_cache(maxsize=None)
def embedding_exponent(K: FieldCtx, L: FieldCtx) -> int:
    """Exponent s such that g_K -> g_L**s defines a field embedding K -> L.

    The multiplicative rule g_K -> g_L**((|L|-1)/(|K|-1)) is used whenever it
    already respects addition (i.e. lands on a root of g_K's minimal
    polynomial); otherwise the root with the smallest packed value is taken.
    Either way the map is a genuine injective ring homomorphism fixing F_p.
    """
    if K.p != L.p or L.e % K.e != 0:
        raise NotASubfield(f"F_{K.p}^{K.e} does not embed in F_{L.p}^{L.e}")
    if K.n == 1:
        return 0
    m = L.n // K.n
    minpoly = minimal_polynomial(K, K.g)
    if _eval_poly(L, minpoly, int(L.exp[m % L.n])) == 0:
        return m
    roots = []
    for j in range(1, K.n):
        if math.gcd(j, K.n) != 1:
            continue
        cand = int(L.exp[(m * j) % L.n])
        if _eval_poly(L, minpoly, cand) == 0:
            roots.append((cand, (m * j) % L.n))
    if not roots:  # pragma: no cover - a root always exists in L
        raise NotASubfield("no embedding found")
    return min(roots)[1]


def embed(K: FieldCtx, L: FieldCtx, x: int) -> int:
    """Deterministic field embedding of x in K into L."""
    if x == 0:
        return 0
    s = embedding_exponent(K, L)
    return int(L.exp[(s * int(K.log[x])) % L.n])


def subfield_unit_exponents(L: FieldCtx, sub_degree: int) -> range:
    """Discrete logs (base g_L) of the units of the degree-sub_degree subfield."""
    _check_subfield(sub_degree, L)
    m = L.n // (L.p**sub_degree - 1)
    return range(0, L.n, m)


# -- exponent classification ------------------------------------------------


def normalize_exponent(ctx: FieldCtx, d: int) -> int:
    """Residue of d in [1, q-1] modulo q-1 (exponents act through q-1)."""
    if ctx.n == 1:
        return 1
    return 1 + (d - 1) % ctx.n


def _require_coprime(ctx: FieldCtx, d: int) -> int:
    d = normalize_exponent(ctx, d)
    if math.gcd(d, ctx.n) != 1:
        raise NotCoprime(f"gcd({d}, {ctx.n}) != 1")
    return d


def is_degenerate_int(p: int, e: int, d: int) -> bool:
    """True iff d is a power of p modulo p**e - 1."""
    n = p**e - 1
    if n == 1:
        return True
    d %= n
    return any(d == pow(p, j, n) for j in range(e))


def is_degenerate(ctx: FieldCtx, d: int) -> bool:
    d = _require_coprime(ctx, d)
    return is_degenerate_int(ctx.p, ctx.e, d)


def is_niho(ctx: FieldCtx, d: int) -> bool:
    """True iff d is a power of p modulo sqrt(q) - 1 (even degree only)."""
    if ctx.e % 2 != 0:
        raise OddDegree("Niho classification needs an even extension degree")
    d = _require_coprime(ctx, d)
    return is_degenerate_int(ctx.p, ctx.e // 2, d)


def exponent_class(ctx: FieldCtx, d: int) -> ExponentClass:
    """The orbit of d under multiplication by p and inversion modulo q-1."""
    d = _require_coprime(ctx, d)
    n = ctx.n
    if n == 1:
        return ExponentClass(1, (1,), True, None if ctx.e % 2 else True)
    orbit = set()
    stack = [d]
    while stack:
        t = stack.pop()
        if t in orbit:
            continue
        orbit.add(t)
        stack.append((t * ctx.p) % n)
        stack.append(pow(t, -1, n))
    orbit_t = tuple(sorted(orbit))
    rep = orbit_t[0]
    niho = is_niho(ctx, rep) if ctx.e % 2 == 0 else None
    return ExponentClass(rep, orbit_t, is_degenerate_int(ctx.p, ctx.e, rep), niho)


def exponent_classes(ctx: FieldCtx) -> list[ExponentClass]:
    """All exponent orbits, one canonical representative each, ascending."""
    n = ctx.n
    if n == 1:
        return [exponent_class(ctx, 1)]
    seen: set[int] = set()
    out = []
    for d in range(1, n):
        if d in seen or math.gcd(d, n) != 1:
            continue
        cls = exponent_class(ctx, d)
        seen.update(cls.orbit)
        out.append(cls)
    return out
