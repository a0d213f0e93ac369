"""Characters of finite fields and the exact sums built from them.

Conventions, fixed once for the whole library:

* the canonical additive character is psi(x) = zeta_p ** Tr(x) with Tr the
  absolute trace, so psi values live in Z[zeta_p];
* multiplicative characters are indexed against the field's generator g:
  the character of index k sends g**i to zeta_{q-1} ** (k*i) and ignores 0;
* the binomial sum of exponent d (coprime to q - 1) at shift a is
  W(d, a) = sum over x in K of psi(x**d + a*x), an element of Z[zeta_p];
* Gauss sums G(chi) = sum over nonzero a of chi(a) * psi(a) live in
  Z[zeta_N] with N = p*(q-1), realised via zeta_p = zeta_N**(q-1) and
  zeta_{q-1} = zeta_N**p (an ambient multiple of N may be requested when
  sums over different fields must be compared in one ring).

All results are exact cyclotomic integers; nothing here is floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .cyclo import CycInt, divisible_by_integer, p_adic_valuation
from .errors import (
    BadExtensionDegree,
    DegeneracyMismatch,
    NotASubfield,
    NotCoprime,
    NotQuadratic,
    OrderMismatch,
)
from .ffield import (
    FieldCtx,
    embed,
    embedding_exponent,
    is_degenerate_int,
    normalize_exponent,
    prime_factors,
    subfield_unit_exponents,
    trace_rel,
)


def _coprime_exponent(ctx: FieldCtx, d: int) -> int:
    d = normalize_exponent(ctx, d)
    if math.gcd(d, ctx.n) != 1:
        raise NotCoprime(f"gcd({d}, {ctx.n}) != 1")
    return d


@dataclass(frozen=True)
class MultChar:
    """Multiplicative character of index k: g**i -> zeta_{q-1}**(k*i)."""

    ctx: FieldCtx
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.ctx.n if self.ctx.n else 0)

    @property
    def is_trivial(self) -> bool:
        return self.k == 0

    def conjugate(self) -> "MultChar":
        return MultChar(self.ctx, (-self.k) % self.ctx.n)

    def power(self, d: int) -> "MultChar":
        return MultChar(self.ctx, (self.k * d) % self.ctx.n)


def all_characters(ctx: FieldCtx) -> list[MultChar]:
    return [MultChar(ctx, k) for k in range(ctx.n)]


def additive_char(ctx: FieldCtx, x: int) -> CycInt:
    """psi(x) = zeta_p ** Tr(x)."""
    return CycInt.root(ctx.p, ctx.trace_abs(x))


# -- binomial character sums -------------------------------------------------


def weil_sum(ctx: FieldCtx, d: int, a: int) -> CycInt:
    """Exact value of sum over x in K of psi(x**d + a*x), in Z[zeta_p].

    Computed through the trace histogram of x -> x**d + a*x.
    """
    hist = kernels.weil_histogram_single(ctx, d, a)
    return CycInt.from_exponent_counts(ctx.p, hist.tolist())


def weil_sum_naive(ctx: FieldCtx, d: int, a: int) -> CycInt:
    """Reference evaluation by direct accumulation of character values.

    Deliberately shares no code with the histogram path; used to cross-check
    it.  O(q) cyclotomic additions, so keep q small.
    """
    d = _coprime_exponent(ctx, d)
    total = CycInt.zero(ctx.p)
    for x in range(ctx.q):
        arg = ctx.add(ctx.pow(x, d), ctx.mul(a, x))
        total = total + additive_char(ctx, arg)
    return total


def _row_value(p: int, row) -> CycInt:
    return CycInt.from_exponent_counts(p, [int(c) for c in row])


class Spectrum:
    """The multiset {W(d, a) : a in K^x} with exact multiplicities.

    Distinct values are kept as trace histograms (rows of shape (p,)):
    two shifts share a value exactly when their histograms coincide, since
    the histograms have equal totals and the only relation among the p-th
    roots of unity is the vanishing of their full sum.  Rows are sorted by
    their canonical coefficient vectors, so iteration order is deterministic.
    """

    __slots__ = ("ctx", "d", "rows", "mults", "_values")

    def __init__(self, ctx: FieldCtx, d: int, rows: np.ndarray, mults: np.ndarray):
        self.ctx = ctx
        self.d = d
        self.rows = rows
        self.mults = mults
        self._values: tuple[CycInt, ...] | None = None
        if int(mults.sum()) != ctx.n:
            raise ArithmeticError("spectrum multiplicities do not sum to q-1")
        p = ctx.p
        perm = (p - np.arange(p)) % p
        if not (rows[:, perm] == rows).all():
            raise ArithmeticError("spectrum contains a non-real value")

    @property
    def values(self) -> tuple[CycInt, ...]:
        if self._values is None:
            self._values = tuple(_row_value(self.ctx.p, r) for r in self.rows)
        return self._values

    def pairs(self) -> list[tuple[CycInt, int]]:
        return list(zip(self.values, (int(m) for m in self.mults)))

    def value_count(self) -> int:
        return len(self.mults)

    def canonical_rows(self) -> np.ndarray:
        """Rows turned into canonical coefficient vectors (length p-1)."""
        p = self.ctx.p
        return self.rows[:, : p - 1] - self.rows[:, p - 1 :]

    def multiplicity_of(self, value: CycInt) -> int:
        for v, m in zip(self.values, self.mults):
            if v == value:
                return int(m)
        return 0

    def to_pairs_text(self) -> list[tuple[str, int]]:
        return [(v.to_text(), int(m)) for v, m in zip(self.values, self.mults)]

    def __repr__(self) -> str:
        inner = ", ".join(f"{t}:{m}" for t, m in self.to_pairs_text())
        return f"Spectrum({self.ctx.descriptor()}, d={self.d}, {{{inner}}})"


def spectrum_from_counts(ctx: FieldCtx, d: int, counts: np.ndarray) -> Spectrum:
    """Group a (q-1, p) histogram matrix into a Spectrum."""
    groups: dict[bytes, int] = {}
    order: dict[bytes, np.ndarray] = {}
    for row in counts:
        key = row.tobytes()
        if key in groups:
            groups[key] += 1
        else:
            groups[key] = 1
            order[key] = row
    rows = np.array([order[k] for k in groups], dtype=np.int64)
    mults = np.array([groups[k] for k in groups], dtype=np.int64)
    p = ctx.p
    canon = rows[:, : p - 1] - rows[:, p - 1 :]
    perm = np.lexsort(canon[:, ::-1].T) if canon.shape[1] else np.arange(len(rows))
    return Spectrum(ctx, d, rows[perm], mults[perm])


def weil_spectrum(ctx: FieldCtx, d: int) -> Spectrum:
    """All values W(d, a) for a in K^x, grouped by exact equality."""
    d = _coprime_exponent(ctx, d)
    return spectrum_from_counts(ctx, d, kernels.weil_histograms(ctx, d))


# -- power moments -----------------------------------------------------------


def power_moment(spectrum: Spectrum, m: int) -> CycInt:
    """sum over a of W(d, a)**m via cyclotomic arithmetic, m in {1, 2, 3}."""
    if m not in (1, 2, 3):
        raise ValueError("only the first three power moments are supported")
    total = CycInt.zero(spectrum.ctx.p)
    for value, mult in zip(spectrum.values, spectrum.mults):
        total = total + int(mult) * value**m
    return total


def power_moments(spectrum: Spectrum) -> tuple[CycInt, CycInt, CycInt]:
    """The first three power moments in one vectorised pass.

    Row self-convolutions run in int64; entries are bounded by q**4, so the
    fast path is exact up to q = 2**15 and falls back to the cyclotomic
    route beyond that.
    """
    ctx = spectrum.ctx
    if ctx.q > 1 << 15:
        return tuple(power_moment(spectrum, m) for m in (1, 2, 3))  # type: ignore[return-value]
    p = ctx.p
    rows, mults = spectrum.rows, spectrum.mults
    m1 = mults @ rows
    conv2 = np.zeros_like(rows)
    idx = np.arange(p)
    for j in range(p):
        conv2[:, (idx + j) % p] += rows * rows[:, j : j + 1]
    m2 = mults @ conv2
    conv3 = np.zeros_like(rows)
    for j in range(p):
        conv3[:, (idx + j) % p] += conv2 * rows[:, j : j + 1]
    m3 = mults @ conv3
    make = lambda vec: CycInt.from_exponent_counts(p, [int(c) for c in vec])
    return make(m1), make(m2), make(m3)


def root_count(ctx: FieldCtx, d: int) -> int:
    """Number of roots of (x+1)**d - x**d - 1 in K (always contains 0 and -1)."""
    d = _coprime_exponent(ctx, d)
    q, p, n = ctx.q, ctx.p, ctx.n
    x = np.arange(q, dtype=np.int64)
    logs = ctx.log

    def pow_vec(v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        nz = v > 0
        out[nz] = ctx.exp[(logs[v[nz]] * d) % n]
        return out

    # x + 1 touches only the lowest digit
    wrap = (x % p) == p - 1
    xplus1 = np.where(wrap, x + 1 - p, x + 1)
    lhs = pow_vec(xplus1)
    xd = pow_vec(x)
    wrap = (xd % p) == p - 1
    rhs = np.where(wrap, xd + 1 - p, xd + 1)
    return int((lhs == rhs).sum())


def restricted_first_moment(L: FieldCtx, sub_degree: int, d: int) -> int:
    """sum over a in the embedded subfield units of W_L(d, a), as an integer.

    Only quadratic extensions are accepted.
    """
    if L.e != 2 * sub_degree:
        raise NotQuadratic(f"degree {L.e} is not twice {sub_degree}")
    d = _coprime_exponent(L, d)
    counts = kernels.weil_histograms(L, d)
    total = np.zeros(L.p, dtype=np.int64)
    for j in subfield_unit_exponents(L, sub_degree):
        total += counts[j]
    value = CycInt.from_exponent_counts(L.p, total.tolist())
    out = value.as_rational_integer()
    if out is None:
        raise ArithmeticError("restricted moment is not a rational integer")
    return out


# -- Gauss sums --------------------------------------------------------------


def gauss_sum(ctx: FieldCtx, chi: MultChar, ambient: int | None = None) -> CycInt:
    """G(chi) = sum over nonzero a of chi(a) * psi(a), in Z[zeta_N].

    N defaults to p*(q-1); an ambient multiple may be passed so that sums
    over a field and a subfield land in one ring.
    """
    if not chi.ctx.same_field(ctx):
        raise OrderMismatch("character belongs to a different field")
    n, p = ctx.n, ctx.p
    N = p * n if ambient is None else ambient
    if N % p or N % n:
        raise OrderMismatch(f"ambient order {N} incompatible with p={p}, q-1={n}")
    step_psi = N // p
    step_chi = N // n
    k = chi.k
    acc = [0] * N
    trace = ctx.trace_table
    for i in range(n):
        a = int(ctx.exp[i])
        acc[(step_psi * int(trace[a]) + step_chi * k * i) % N] += 1
    return CycInt(N, acc)


def gauss_sums_all(ctx: FieldCtx, ambient: int | None = None) -> list[CycInt]:
    """G(chi) for every character index 0..q-2 (index order)."""
    return [gauss_sum(ctx, MultChar(ctx, k), ambient) for k in range(ctx.n)]


def fourier_inversion_check(
    ctx: FieldCtx,
    d: int,
    chi: MultChar,
    counts: np.ndarray | None = None,
    gauss: list[CycInt] | None = None,
) -> tuple[CycInt, CycInt]:
    """Both sides of the inversion identity for a -> W(d, a**t), t = (-d)^-1.

    Returns (lhs, rhs) in Z[zeta_{p(q-1)}]: lhs sums Weil values against chi,
    rhs is q for the trivial character and G(chi) * G(conj(chi)**d) otherwise.
    The two sides are computed along independent routes.
    """
    d = _coprime_exponent(ctx, d)
    n, p, q = ctx.n, ctx.p, ctx.q
    N = p * n
    t = pow((-d) % n, -1, n)
    if counts is None:
        counts = kernels.weil_histograms(ctx, d)
    k = chi.k
    acc = [0] * N
    step_psi = N // p
    step_chi = N // n
    for i in range(n):
        row = counts[(i * t) % n]
        base = step_chi * k * i
        for tau in range(p):
            c = int(row[tau])
            if c:
                acc[(base + step_psi * tau) % N] += c
    lhs = CycInt(N, acc)
    if chi.is_trivial:
        rhs = CycInt.integer(N, q)
    else:
        if gauss is None:
            rhs = gauss_sum(ctx, chi) * gauss_sum(ctx, chi.conjugate().power(d))
        else:
            rhs = gauss[k] * gauss[(-k * d) % n]
    return lhs, rhs


def gauss_product_formula_check(ctx: FieldCtx, d: int, gauss: list[CycInt] | None = None) -> int:
    """The integer prod over nontrivial chi of G(chi) * G(conj(chi)**d).

    The result is plus or minus q**(q-2); callers assert the magnitude.
    """
    d = _coprime_exponent(ctx, d)
    n = ctx.n
    if gauss is None:
        gauss = gauss_sums_all(ctx)
    prod = CycInt.one(ctx.p * n)
    for k in range(1, n):
        prod = prod * gauss[k]
        prod = prod * gauss[(-k * d) % n]
    out = prod.as_rational_integer()
    if out is None:
        raise ArithmeticError("Gauss product did not reduce to an integer")
    return out


def lift_character(K: FieldCtx, L: FieldCtx, chi: MultChar) -> MultChar:
    """The character of L obtained by composing chi with the norm onto K.

    Norm values are identified with K through the library's deterministic
    embedding, so the lift is chi(embed^-1(N(x))).
    """
    if K.p != L.p or L.e % K.e:
        raise NotASubfield(f"F_{K.p}^{K.e} is not a subfield of F_{L.p}^{L.e}")
    if K.n == 1:
        return MultChar(L, 0)
    m = L.n // K.n
    s = embedding_exponent(K, L)
    u = s // m
    i0 = pow(u, -1, K.n)
    return MultChar(L, (m * chi.k * i0) % L.n)


def davenport_hasse_check(K: FieldCtx, L: FieldCtx, chi: MultChar) -> tuple[CycInt, CycInt]:
    """(-G_L(lifted chi), (-G_K(chi)) ** [L:K]) in the common ring Z[zeta_{p(|L|-1)}]."""
    lifted = lift_character(K, L, chi)
    N = L.p * L.n
    lhs = -gauss_sum(L, lifted, ambient=N)
    rhs = (-gauss_sum(K, chi, ambient=N)) ** (L.e // K.e)
    return lhs, rhs


# -- valuations --------------------------------------------------------------


def min_valuation(ctx: FieldCtx, d: int, spectrum: Spectrum | None = None) -> Fraction | float:
    """Minimum p-adic valuation over the value set of W(d, .)."""
    if spectrum is None:
        spectrum = weil_spectrum(ctx, d)
    return min(p_adic_valuation(v) for v in spectrum.values)


def digit_sum(k: int, p: int) -> int:
    s = 0
    while k:
        s += k % p
        k //= p
    return s


def stickelberger_valuation_oracle(ctx: FieldCtx, k: int) -> Fraction:
    """Valuation s_p(k)/(p-1) of G(chi**-k) at the prime fixed by zeta_{q-1} -> g.

    Classical digit-sum formula, imported as an independent oracle; only the
    minimum over all characters is ever asserted against Weil-sum valuations,
    since individual Gauss-sum valuations depend on the choice of prime.
    """
    if not 1 <= k <= ctx.n - 1:
        raise ValueError(f"character index {k} out of range")
    return Fraction(digit_sum(k, ctx.p), ctx.p - 1)


def stickelberger_min_valuation(ctx: FieldCtx, d: int) -> Fraction:
    """min over nontrivial chi of v(G(chi) G(conj(chi)**d)) by digit sums."""
    d = _coprime_exponent(ctx, d)
    n, p = ctx.n, ctx.p
    best = None
    for k in range(1, n):
        s = digit_sum(k, p) + digit_sum((-k * d) % n, p)
        if best is None or s < best:
            best = s
    if best is None:
        raise ValueError("field has no nontrivial characters")
    return Fraction(best, p - 1)


# -- quadratic-extension machinery -------------------------------------------


def coset_trace_count(L: FieldCtx, sub_degree: int, d: int, a: int) -> int:
    """Z(a): zeros of the relative trace of y**d + a*y over coset representatives.

    Requires [L:K] = 2 with d degenerate over K but not over L.  The
    exponent is replaced by the orbit member congruent to 1 modulo |K|-1
    (which leaves every Weil value unchanged and makes the count independent
    of the choice of coset representatives); representatives are g**0..g**|K|.
    Satisfies |K| * (Z(a) - 1) = W_L(d, a).
    """
    if L.e != 2 * sub_degree:
        raise NotQuadratic(f"degree {L.e} is not twice {sub_degree}")
    d = _coprime_exponent(L, d)
    p = L.p
    r_sub = p**sub_degree - 1
    if not is_degenerate_int(p, sub_degree, d):
        raise DegeneracyMismatch("exponent is not degenerate over the subfield")
    if is_degenerate_int(p, L.e, d):
        raise DegeneracyMismatch("exponent is degenerate over the extension")
    dd = d
    if r_sub > 1:
        for _ in range(L.e):
            if dd % r_sub == 1:
                break
            dd = normalize_exponent(L, dd * p)
        else:  # pragma: no cover - guaranteed by degeneracy
            raise DegeneracyMismatch("no orbit member is 1 modulo |K|-1")
    count = 0
    for j in range(p**sub_degree + 1):
        y = int(L.exp[j])
        val = L.add(L.pow(y, dd), L.mul(a, y))
        if trace_rel(L, sub_degree, val) == 0:
            count += 1
    return count


def scaled_second_moment(ctx: FieldCtx, d: int, b: int) -> CycInt:
    """sum over a in K^x of W(d, a) * W(d, b*a); 0 for b != 1, q**2 at b = 1."""
    d = _coprime_exponent(ctx, d)
    counts = kernels.weil_histograms(ctx, d)
    values = {}

    def value_at(j: int) -> CycInt:
        if j not in values:
            values[j] = _row_value(ctx.p, counts[j])
        return values[j]

    total = CycInt.zero(ctx.p)
    if b == 0:
        w0 = weil_sum(ctx, d, 0)
        for j in range(ctx.n):
            total = total + value_at(j) * w0
        return total
    jb = int(ctx.log[b])
    for j in range(ctx.n):
        total = total + value_at(j) * value_at((j + jb) % ctx.n)
    return total


def galois_twist_scalar(ctx: FieldCtx, j: int, d: int) -> int:
    """The prime-subfield element j**(1 - 1/d), 1/d inverted modulo p-1.

    Conjugating W(d, a) by zeta_p -> zeta_p**j matches shifting a by this
    scalar.
    """
    p = ctx.p
    if j % p == 0:
        raise ValueError("twist index must be a unit modulo p")
    if p == 2:
        return 1
    inv_d = pow(d, -1, p - 1)
    return pow(j % p, (1 - inv_d) % (p - 1), p)


def extension_congruence_check(K: FieldCtx, L: FieldCtx, d: int, a: int) -> bool:
    """W_L(d, a) = W_K(d, [L:K]**(1-1/d) * a) modulo ell, for a in K.

    [L:K] must be a power of a prime ell; in odd characteristic ell must
    differ from p, while for p = 2 the case ell = 2 is also accepted (the
    scalar [L:K] then reduces to zero, sending the base-field side to
    W_K(d, 0) = 0, and the extension side is even as well).  The congruence
    is an exact divisibility test in Z[zeta_p].
    """
    if K.p != L.p or L.e % K.e:
        raise NotASubfield(f"F_{K.p}^{K.e} is not a subfield of F_{L.p}^{L.e}")
    degree = L.e // K.e
    if degree < 2:
        raise BadExtensionDegree("extension must be proper")
    factors = prime_factors(degree)
    if len(factors) != 1:
        raise BadExtensionDegree(f"[L:K] = {degree} is not a prime power")
    ell = factors[0]
    if ell == K.p and K.p != 2:
        raise BadExtensionDegree("[L:K] must be coprime to an odd characteristic")
    d = _coprime_exponent(L, d)
    p = K.p
    # 1/d is inverted modulo p-1; for p = 2 the exponent is identically 1
    scalar = degree % 2 if p == 2 else pow(degree % p, (1 - pow(d, -1, p - 1)) % (p - 1), p)
    w_ext = weil_sum(L, d, embed(K, L, a))
    w_base = weil_sum(K, d, K.mul(scalar, a))
    return divisible_by_integer(w_ext - w_base, ell)
