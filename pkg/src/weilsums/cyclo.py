"""Exact arithmetic in rings of cyclotomic integers Z[zeta_n].

Two internal representations are used, chosen by the root order ``n``:

* prime ``n``: coefficients are stored on the canonical integral basis
  ``1, zeta, ..., zeta^(n-2)`` (``zeta^(n-1) = -(1 + zeta + ... + zeta^(n-2))``).
  The representation is unique, so equality is plain tuple equality.
* composite ``n``: coefficients are stored as a length-``n`` group-ring
  vector (exponents taken modulo ``n``).  Zero testing reduces modulo the
  n-th cyclotomic polynomial, which is computed once per order by exact
  division of ``x^n - 1`` by the product of the lower-order factors.

Accumulating character sums is cheap in both forms; the normal-form cost is
paid only on equality tests, which suits this workload.

All coefficients are Python integers, so there is no overflow anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import NotAUnit, NotRealElement, OrderMismatch, OrderNotPrime

INFINITY = math.inf


@lru_cache(maxsize=None)
def _is_prime(n: int) -> bool:
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


def _poly_trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials; raises if a remainder is left."""
    num = list(num)
    dn, dd = len(num) - 1, len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * (dn - dd + 1)
    for k in range(dn - dd, -1, -1):
        c = num[k + dd]
        quot[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num):
        raise ValueError("inexact polynomial division")
    return quot


def _poly_rem(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Remainder of an integer polynomial modulo a monic divisor."""
    num = list(num)
    dd = len(den) - 1
    for k in range(len(num) - 1 - dd, -1, -1):
        c = num[k + dd]
        if c:
            for j in range(dd + 1):
                num[k + j] -= c * den[j]
    del num[dd:]
    return num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    poly = [0] * (n + 1)
    poly[0], poly[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_exact_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    result = n
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            result -= result // f
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        result -= result // m
    return result


class CycInt:
    """An element of Z[zeta_n] with exact integer coefficients.

    Instances are immutable; arithmetic returns new objects.  Mixing orders
    raises :class:`OrderMismatch` rather than silently coercing.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs) -> None:
        if n < 1:
            raise ValueError("order must be positive")
        folded = [0] * n
        for j, c in enumerate(coeffs):
            if c:
                folded[j % n] += c
        object.__setattr__(self, "n", n)
        if _is_prime(n):
            top = folded[n - 1]
            canon = tuple(folded[j] - top for j in range(n - 1))
            object.__setattr__(self, "coeffs", canon)
        else:
            object.__setattr__(self, "coeffs", tuple(folded))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("CycInt is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "CycInt":
        return cls(n, ())

    @classmethod
    def one(cls, n: int) -> "CycInt":
        return cls(n, (1,))

    @classmethod
    def integer(cls, n: int, m: int) -> "CycInt":
        return cls(n, (m,))

    @classmethod
    def root(cls, n: int, k: int = 1) -> "CycInt":
        """zeta_n**k."""
        out = [0] * (k % n + 1)
        out[k % n] = 1
        return cls(n, out)

    @classmethod
    def from_exponent_counts(cls, n: int, counts) -> "CycInt":
        """sum(counts[j] * zeta_n**j); ``counts`` indexed by exponent."""
        return cls(n, counts)

    # -- structure ------------------------------------------------------

    def group_ring(self) -> tuple[int, ...]:
        """Length-n exponent vector representing this element."""
        if _is_prime(self.n):
            return self.coeffs + (0,)
        return self.coeffs

    def reduced(self) -> tuple[int, ...]:
        """Unique coefficients on the power basis of Z[x]/Phi_n, length phi(n)."""
        if _is_prime(self.n):
            return self.coeffs
        rem = _poly_rem(list(self.coeffs), cyclotomic_polynomial(self.n))
        rem.extend([0] * (euler_phi(self.n) - len(rem)))
        return tuple(rem)

    def _check_order(self, other: "CycInt") -> None:
        if self.n != other.n:
            raise OrderMismatch(f"orders {self.n} and {other.n} differ")

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "CycInt") -> "CycInt":
        if isinstance(other, int):
            other = CycInt.integer(self.n, other)
        self._check_order(other)
        out = CycInt.__new__(CycInt)
        object.__setattr__(out, "n", self.n)
        object.__setattr__(
            out, "coeffs", tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )
        return out

    __radd__ = __add__

    def __neg__(self) -> "CycInt":
        out = CycInt.__new__(CycInt)
        object.__setattr__(out, "n", self.n)
        object.__setattr__(out, "coeffs", tuple(-a for a in self.coeffs))
        return out

    def __sub__(self, other: "CycInt") -> "CycInt":
        if isinstance(other, int):
            other = CycInt.integer(self.n, other)
        return self + (-other)

    def __rsub__(self, other) -> "CycInt":
        return (-self) + other

    def __mul__(self, other) -> "CycInt":
        if isinstance(other, int):
            out = CycInt.__new__(CycInt)
            object.__setattr__(out, "n", self.n)
            object.__setattr__(out, "coeffs", tuple(a * other for a in self.coeffs))
            return out
        self._check_order(other)
        n = self.n
        a, b = self.coeffs, other.coeffs
        conv = [0] * n
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        k = i + j
                        if k >= n:
                            k -= n
                        conv[k] += ai * bj
        return CycInt(n, conv)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CycInt":
        if k < 0:
            raise ValueError("negative powers are not defined in the ring")
        result = CycInt.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        if _is_prime(self.n):
            return not any(self.coeffs)
        return not any(self.reduced())

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CycInt.integer(self.n, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        self._check_order(other)
        if _is_prime(self.n):
            return self.coeffs == other.coeffs
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.n, self.reduced()))

    def as_rational_integer(self) -> int | None:
        """The integer m when the element equals m, else None."""
        red = self.reduced()
        if any(red[1:]):
            return None
        return red[0]

    # -- Galois action ----------------------------------------------------

    def galois(self, j: int) -> "CycInt":
        """Ring automorphism substituting zeta -> zeta**j, gcd(j, n) = 1."""
        if math.gcd(j, self.n) != 1:
            raise NotAUnit(f"{j} is not a unit modulo {self.n}")
        n = self.n
        out = [0] * n
        for t, c in enumerate(self.group_ring()):
            if c:
                out[(t * j) % n] += c
        return CycInt(n, out)

    def conj(self) -> "CycInt":
        """Complex conjugation, zeta -> zeta**(n-1)."""
        if self.n == 1:
            return self
        return self.galois(self.n - 1)

    def lift(self, bigger: int) -> "CycInt":
        """Image in Z[zeta_N] under zeta_n = zeta_N**(N/n); requires n | N."""
        if bigger % self.n != 0:
            raise OrderMismatch(f"{self.n} does not divide {bigger}")
        step = bigger // self.n
        out = [0] * bigger
        for t, c in enumerate(self.group_ring()):
            if c:
                out[t * step] += c
        return CycInt(bigger, out)

    # -- rendering --------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text: plain integer when rational, else "n:[c0,c1,...]"."""
        m = self.as_rational_integer()
        if m is not None:
            return str(m)
        return f"{self.n}:[{','.join(str(c) for c in self.reduced())}]"

    def __repr__(self) -> str:
        return f"CycInt({self.n}, {self.coeffs!r})"


def _div_one_minus_zeta(p: int, coeffs: list[int]) -> list[int]:
    """Exact quotient x / (1 - zeta_p) for canonical coefficients of length p-1.

    Solving (1 - zeta) * y = x coefficientwise gives y[p-2] = sum(x)/p and
    y[k] = x[k] + y[k-1] - y[p-2] for ascending k.
    """
    total = sum(coeffs)
    if total % p:
        raise ValueError("element is not divisible by 1 - zeta")
    top = total // p
    out = [0] * (p - 1)
    out[p - 2] = top
    prev = coeffs[0] - top
    out[0] = prev
    for k in range(1, p - 2):
        prev = coeffs[k] + prev - top
        out[k] = prev
    return out


def p_adic_valuation(x: CycInt) -> Fraction | float:
    """Valuation normalised so that v(p) = 1 and v(1 - zeta_p) = 1/(p-1).

    Defined for elements of Z[zeta_p] with p prime; v(0) is infinity.
    Computed by repeated exact division by 1 - zeta_p, using the criterion
    that the coefficient sum must vanish modulo p.
    """
    p = x.n
    if not _is_prime(p):
        raise OrderNotPrime(f"valuation needs a prime order, got {p}")
    if x.is_zero():
        return INFINITY
    cur = list(x.coeffs)
    k = 0
    while sum(cur) % p == 0:
        cur = _div_one_minus_zeta(p, cur)
        k += 1
    return Fraction(k, p - 1)


def divisible_by_integer(x: CycInt, m: int) -> bool:
    """True iff x = m * y for some cyclotomic integer y.

    Valid because the power basis of Z[x]/Phi_n is an integral basis.
    """
    if m < 1:
        raise ValueError("divisor must be positive")
    return all(c % m == 0 for c in x.reduced())


# -- exact sign of real elements -----------------------------------------
#
# Signs of real irrational values are decided by interval arithmetic with
# rational endpoints, refined until zero is excluded.  Refinement terminates
# because a nonzero algebraic number is bounded away from zero (the exact
# zero test runs first).


def _pi_bounds(bits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of pi with width below 2**-bits (Machin's formula)."""

    def arctan_inv(x: int) -> tuple[Fraction, Fraction]:
        # alternating series with decreasing terms: partial sums bracket
        s = Fraction(0)
        sign = 1
        k = 0
        while True:
            term = Fraction(sign, (2 * k + 1) * x ** (2 * k + 1))
            nxt = s + term
            if abs(term) < Fraction(1, 1 << (bits + 8)):
                return min(s, nxt), max(s, nxt)
            s = nxt
            sign = -sign
            k += 1

    a_lo, a_hi = arctan_inv(5)
    b_lo, b_hi = arctan_inv(239)
    return 16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo


@lru_cache(maxsize=None)
def _cos_bounds(j: int, n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of cos(2*pi*j/n) with outward rounding to 2**-bits."""
    pi_lo, pi_hi = _pi_bounds(bits + 16)
    pi_mid = (pi_lo + pi_hi) / 2
    t_mid = 2 * pi_mid * Fraction(j, n)
    slack = 2 * (pi_hi - pi_lo) * Fraction(j, n)  # |t - t_mid| bound
    # Taylor expansion of cos at t_mid with Lagrange remainder
    acc = Fraction(1)
    term = Fraction(1)
    k = 0
    t2 = t_mid * t_mid
    while True:
        k += 1
        term = term * t2 / ((2 * k - 1) * (2 * k))
        if term < Fraction(1, 1 << (bits + 16)):
            break
        acc += term if k % 2 == 0 else -term
    rem = term  # |R| <= first omitted term bound via |cos^(m)| <= 1
    width = rem + slack
    lo, hi = acc - width, acc + width
    scale = 1 << bits
    lo = Fraction(math.floor(lo * scale), scale)
    hi = Fraction(math.ceil(hi * scale), scale)
    return lo, hi


def real_sign(x: CycInt) -> int:
    """Sign (-1, 0, +1) of a real cyclotomic integer, decided exactly."""
    if x != x.conj():
        raise NotRealElement("element is not fixed by conjugation")
    if x.is_zero():
        return 0
    m = x.as_rational_integer()
    if m is not None:
        return 1 if m > 0 else -1
    vec = x.group_ring()
    bits = 32
    while True:
        lo = hi = Fraction(0)
        for j, c in enumerate(vec):
            if not c:
                continue
            clo, chi = _cos_bounds(j, x.n, bits)
            if c > 0:
                lo += c * clo
                hi += c * chi
            else:
                lo += c * chi
                hi += c * clo
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
