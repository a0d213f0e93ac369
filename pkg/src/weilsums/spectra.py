"""Classification of Weil spectra and empirical verifiers for the structural
results that constrain three-valued value sets.

A spectrum is *v-valued* when its value set has size v, *symmetric
three-valued* when the value set is exactly {-A, 0, +A}, and *preferred*
when additionally |A| is the least magnitude a symmetric three-valued
spectrum can have (sqrt(p*q) for odd extension degree, p*sqrt(q) for even).

Verifiers return three-state verdicts so that exhaustive scans can
distinguish vacuous truth from actual evidence:

* "n/a"  - the statement's hypothesis does not apply;
* "pass" - hypothesis applies and the assertion holds;
* "FAIL" - hypothesis applies and the assertion is violated (a witness is
  recorded alongside).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import charsum, kernels
from .errors import NotSymmetricThreeValued, OddDegree
from .ffield import (
    FieldCtx,
    exponent_class,
    exponent_classes,
    is_degenerate_int,
    make_field,
    normalize_exponent,
)

PASS = "pass"
FAIL = "FAIL"
NA = "n/a"


# -- value-field degree -------------------------------------------------------


def predicted_value_field_degree(p: int, d: int) -> int:
    """Smallest divisor m of p-1 with d = 1 modulo (p-1)/m.

    This is the degree over Q of the field the spectrum's values generate.
    """
    if d < 1:
        raise ValueError("exponent must be positive")
    for m in range(1, p):
        if (p - 1) % m == 0 and (d - 1) % ((p - 1) // m) == 0:
            return m
    return p - 1


def _smallest_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    n = p - 1
    from .ffield import prime_factors

    for r in range(2, p):
        if all(pow(r, n // f, p) != 1 for f in prime_factors(n)):
            return r
    raise ValueError(f"no primitive root modulo {p}")  # pragma: no cover


def _fixes_all_rows(rows: np.ndarray, p: int, j: int) -> bool:
    """Whether zeta -> zeta**j fixes every value, read off the histograms."""
    jinv = pow(j, -1, p)
    perm = (jinv * np.arange(p)) % p
    return bool((rows[:, perm] == rows).all())


def observed_value_field_degree(spectrum: charsum.Spectrum) -> int:
    """Degree over Q of the field generated by all spectrum values.

    Computed as the index of the subgroup of substitutions zeta -> zeta**j
    fixing every value; the subgroup is located by testing one generator
    per candidate index, in ascending divisor order.
    """
    p = spectrum.ctx.p
    if p == 2:
        return 1
    r = _smallest_primitive_root(p)
    for m in sorted(d for d in range(1, p) if (p - 1) % d == 0):
        if _fixes_all_rows(spectrum.rows, p, pow(r, m, p)):
            return m
    return p - 1  # pragma: no cover - m = p-1 always fixes


def conjugate_multiplicity_check(spectrum: charsum.Spectrum) -> bool:
    """Values conjugate over Q must occur with equal multiplicities."""
    p = spectrum.ctx.p
    table = {row.tobytes(): int(m) for row, m in zip(spectrum.rows, spectrum.mults)}
    base = np.arange(p)
    for row, mult in zip(spectrum.rows, spectrum.mults):
        for j in range(2, p):
            if math.gcd(j, p) != 1:
                continue
            jinv = pow(j, -1, p)
            other = table.get(row[(jinv * base) % p].tobytes())
            if other is not None and other != int(mult):
                return False
    return True


# -- per-class statistics -----------------------------------------------------


@dataclass
class ClassStats:
    """Cheap row-level facts about one exponent class's spectrum."""

    d: int
    degenerate: bool
    niho: bool | None
    v: int
    rational: bool
    contains_zero: bool
    symmetric: bool
    magnitude: int | None  # |A| for symmetric three-valued sets
    n_plus: int
    n_minus: int
    n_zero: int
    pairs_rational: tuple[tuple[int, int], ...]  # (value, mult) when rational


def class_stats(ctx: FieldCtx, d: int, spectrum: charsum.Spectrum | None = None) -> ClassStats:
    if spectrum is None:
        spectrum = charsum.weil_spectrum(ctx, d)
    d = spectrum.d
    p = ctx.p
    cls = exponent_class(ctx, d)
    canon = spectrum.canonical_rows()
    v = len(spectrum.mults)
    rational_mask = (
        ~canon[:, 1:].any(axis=1) if p > 2 else np.ones(v, dtype=bool)
    )
    rational = bool(rational_mask.all())
    zero_mask = rational_mask & (canon[:, 0] == 0)
    contains_zero = bool(zero_mask.any())
    symmetric = False
    magnitude = None
    n_plus = n_minus = n_zero = 0
    if v == 3 and contains_zero:
        others = np.flatnonzero(~zero_mask)
        if len(others) == 2 and (canon[others[0]] == -canon[others[1]]).all():
            symmetric = True
            if rational:
                vals = canon[others, 0]
                pos = others[0] if vals[0] > 0 else others[1]
                neg = others[1] if vals[0] > 0 else others[0]
                magnitude = int(abs(vals[0]))
                n_plus = int(spectrum.mults[pos])
                n_minus = int(spectrum.mults[neg])
            n_zero = int(spectrum.mults[np.flatnonzero(zero_mask)[0]])
    pairs_rational: tuple[tuple[int, int], ...] = ()
    if rational:
        pairs_rational = tuple(
            (int(c), int(m)) for c, m in zip(canon[:, 0], spectrum.mults)
        )
    return ClassStats(
        d=d,
        degenerate=cls.degenerate,
        niho=cls.niho,
        v=v,
        rational=rational,
        contains_zero=contains_zero,
        symmetric=symmetric,
        magnitude=magnitude,
        n_plus=n_plus,
        n_minus=n_minus,
        n_zero=n_zero,
        pairs_rational=pairs_rational,
    )


# -- named structural checks --------------------------------------------------


def check_degenerate_shape(ctx: FieldCtx, stats: ClassStats) -> str:
    """Degenerate exponents collapse the value set to {0, q} with
    multiplicities (q-2, 1)."""
    if not stats.degenerate:
        return NA
    q = ctx.q
    expected = {(q, 1)} if q == 2 else {(0, q - 2), (q, 1)}
    return PASS if set(stats.pairs_rational) == expected else FAIL


def check_min_value_count(stats: ClassStats) -> str:
    """Nondegenerate exponents take at least three values."""
    if stats.degenerate:
        return NA
    return PASS if stats.v >= 3 else FAIL


def check_three_valued_rationality(ctx: FieldCtx, stats: ClassStats) -> str:
    """Three-valued spectra have rational integer values, one of them zero,
    and d = 1 modulo p-1."""
    if stats.v != 3:
        return NA
    ok = (
        stats.rational
        and stats.contains_zero
        and (stats.d - 1) % (ctx.p - 1 or 1) == 0
    )
    return PASS if ok else FAIL


def symmetric_three_valued_facts(ctx: FieldCtx, stats: ClassStats, roots: int) -> str:
    """Constraints a symmetric three-valued spectrum must satisfy:
    |A| = p**k, sqrt(q) < |A| < q, |A| = sqrt(roots * q),
    N_A = (q**2 + q A)/(2 A**2), and d = 1 modulo p-1."""
    if not (stats.symmetric and stats.v == 3):
        return NA
    q, p = ctx.q, ctx.p
    a = stats.magnitude
    if a is None:
        return FAIL  # symmetric but irrational: impossible when all is well
    m = a
    while m % p == 0:
        m //= p
    if m != 1 or a == 1:
        return FAIL
    if not (a * a > q and a < q):
        return FAIL
    if a * a != roots * q:
        return FAIL
    num = q * q + q * a
    if num % (2 * a * a) or stats.n_plus != num // (2 * a * a):
        return FAIL
    if (stats.d - 1) % (p - 1 or 1):
        return FAIL
    return PASS


def verify_symmetric_three_valued(ctx: FieldCtx, d: int) -> bool:
    """Raise unless the spectrum is symmetric three-valued; then run
    :func:`symmetric_three_valued_facts` and return whether it passes."""
    stats = class_stats(ctx, d)
    if not (stats.symmetric and stats.v == 3):
        raise NotSymmetricThreeValued(f"(q={ctx.q}, d={d}) is not symmetric three-valued")
    return symmetric_three_valued_facts(ctx, stats, charsum.root_count(ctx, d)) == PASS


def quadratic_tower_applies(p: int, e: int, d: int) -> bool:
    """Is there a subfield step I < J, [J:I] = 2, with d degenerate over I
    but not over J?"""
    for half in range(1, e // 2 + 1):
        if e % (2 * half):
            continue
        if is_degenerate_int(p, half, d) and not is_degenerate_int(p, 2 * half, d):
            return True
    return False


def check_quadratic_tower(p: int, e: int, d: int, stats: ClassStats) -> str:
    """Where a degenerate-to-nondegenerate quadratic step exists, the value
    set cannot be of the form {-A, 0, +A}."""
    if not quadratic_tower_applies(p, e, d):
        return NA
    return FAIL if (stats.symmetric and stats.v == 3) else PASS


def check_two_adic_magnitude_bound(ctx: FieldCtx, stats: ClassStats) -> str:
    """Symmetric three-valued with s = v_2(e) >= 1 forces
    |A| >= p**(2**(s-1)) * sqrt(q)."""
    if not (stats.symmetric and stats.v == 3):
        return NA
    e = ctx.e
    s = (e & -e).bit_length() - 1  # 2-adic valuation of e
    if s < 1:
        return NA
    if stats.magnitude is None:
        return FAIL
    a = stats.magnitude
    return PASS if a * a >= ctx.p ** (2**s) * ctx.q else FAIL


def check_niho_exclusion(ctx: FieldCtx, stats: ClassStats) -> str:
    """Niho exponents (even degree) are never three-valued."""
    if ctx.e % 2:
        raise OddDegree("Niho exclusion needs an even extension degree")
    if not stats.niho:
        return NA
    return PASS if stats.v != 3 else FAIL


# -- the full report ---------------------------------------------------------


@dataclass
class SpectrumReport:
    """Everything the scanner records about one exponent class."""

    p: int
    e: int
    q: int
    field: str
    d: int
    orbit: tuple[int, ...]
    degenerate: bool
    niho: bool | None
    v: int
    values: list[tuple[str, int]]
    rational: bool
    contains_zero: bool
    symmetric: bool
    preferred: bool
    magnitude: int | None
    n_plus: int | None
    n_minus: int | None
    n_zero: int | None
    root_count: int
    val: Fraction | float
    m_observed: int
    m_predicted: int
    verdicts: dict[str, str] = field(default_factory=dict)
    witnesses: dict[str, str] = field(default_factory=dict)

    def has_failure(self) -> bool:
        return any(v == FAIL for v in self.verdicts.values())


def preferred_magnitude(p: int, e: int) -> int:
    """The minimal admissible |A|: sqrt(p*q) for odd e, p*sqrt(q) for even e."""
    return p ** ((e + 1) // 2) if e % 2 else p ** (e // 2 + 1)


def classify(ctx: FieldCtx, d: int) -> SpectrumReport:
    """Compute the exact spectrum of one exponent class and classify it."""
    spectrum = charsum.weil_spectrum(ctx, d)
    stats = class_stats(ctx, spectrum.d, spectrum)
    cls = exponent_class(ctx, spectrum.d)
    roots = charsum.root_count(ctx, spectrum.d)
    val = charsum.min_valuation(ctx, spectrum.d, spectrum)
    m_obs = observed_value_field_degree(spectrum)
    m_pred = predicted_value_field_degree(ctx.p, spectrum.d)
    preferred = bool(
        stats.symmetric
        and stats.v == 3
        and stats.magnitude == preferred_magnitude(ctx.p, ctx.e)
    )
    verdicts = {
        "degenerate_shape": check_degenerate_shape(ctx, stats),
        "min_value_count": check_min_value_count(stats),
        "three_valued_rationality": check_three_valued_rationality(ctx, stats),
        "symmetric_constraints": symmetric_three_valued_facts(ctx, stats, roots),
        "tower_asymmetry": check_quadratic_tower(ctx.p, ctx.e, stats.d, stats),
        "magnitude_bound": check_two_adic_magnitude_bound(ctx, stats),
        "value_field_degree": PASS if m_obs == m_pred else FAIL,
        "conjugate_multiplicities": PASS if conjugate_multiplicity_check(spectrum) else FAIL,
    }
    if ctx.e % 2 == 0:
        verdicts["niho_exclusion"] = check_niho_exclusion(ctx, stats)
    witnesses = {
        name: f"p={ctx.p} e={ctx.e} d={stats.d} values={spectrum.to_pairs_text()}"
        for name, verdict in verdicts.items()
        if verdict == FAIL
    }
    return SpectrumReport(
        p=ctx.p,
        e=ctx.e,
        q=ctx.q,
        field=ctx.descriptor(),
        d=stats.d,
        orbit=cls.orbit,
        degenerate=stats.degenerate,
        niho=stats.niho,
        v=stats.v,
        values=spectrum.to_pairs_text(),
        rational=stats.rational,
        contains_zero=stats.contains_zero,
        symmetric=stats.symmetric,
        preferred=preferred,
        magnitude=stats.magnitude,
        n_plus=stats.n_plus if stats.symmetric else None,
        n_minus=stats.n_minus if stats.symmetric else None,
        n_zero=stats.n_zero if stats.symmetric else None,
        root_count=roots,
        val=val,
        m_observed=m_obs,
        m_predicted=m_pred,
        verdicts=verdicts,
        witnesses=witnesses,
    )


# -- lean exhaustive theorem scan --------------------------------------------


@dataclass
class ScanFailure:
    p: int
    e: int
    d: int
    check: str
    detail: str


def theorem_scan_field(ctx: FieldCtx) -> tuple[int, list[ScanFailure], dict[str, int]]:
    """Run the structural checks over every exponent class of one field.

    Works directly on histogram rows (no cyclotomic objects), so it stays
    fast on large prime fields.  Returns (classes checked, failures, tally).
    """
    failures: list[ScanFailure] = []
    tally = {"three_valued": 0, "symmetric": 0, "preferred": 0}
    classes = exponent_classes(ctx)
    for cls in classes:
        stats = class_stats(ctx, cls.d)
        if stats.v == 3:
            tally["three_valued"] += 1
        if stats.symmetric:
            tally["symmetric"] += 1
            if stats.magnitude == preferred_magnitude(ctx.p, ctx.e):
                tally["preferred"] += 1
        named = [
            ("degenerate_shape", check_degenerate_shape(ctx, stats)),
            ("min_value_count", check_min_value_count(stats)),
            ("three_valued_rationality", check_three_valued_rationality(ctx, stats)),
            ("tower_asymmetry", check_quadratic_tower(ctx.p, ctx.e, stats.d, stats)),
            ("magnitude_bound", check_two_adic_magnitude_bound(ctx, stats)),
        ]
        if stats.symmetric and stats.v == 3:
            named.append(
                ("symmetric_constraints",
                 symmetric_three_valued_facts(ctx, stats, charsum.root_count(ctx, cls.d)))
            )
        if ctx.e % 2 == 0:
            named.append(("niho_exclusion", check_niho_exclusion(ctx, stats)))
        for name, verdict in named:
            if verdict == FAIL:
                failures.append(
                    ScanFailure(ctx.p, ctx.e, cls.d, name, f"v={stats.v} symmetric={stats.symmetric}")
                )
    return len(classes), failures, tally


# -- the catalogue of known three-valued families ------------------------------


@dataclass(frozen=True)
class FamilyEntry:
    """One applicable instance of the known three-valued families.

    ``row`` numbers the family (1-10) in the conventional presentation;
    ``d`` is the exponent reduced modulo q-1, ``d_class`` its canonical
    class representative, and ``expected_magnitude`` the predicted |A| of
    the symmetric value set {0, +-A}.  ``merged`` lists other (row, i)
    parameter choices that landed in the same exponent class.
    """

    row: int
    p: int
    e: int
    i: int | None
    d: int
    d_class: int
    expected_magnitude: int
    preferred: bool
    merged: tuple[str, ...] = ()


def _two_adic(n: int) -> int:
    return (n & -n).bit_length() - 1


def _family_candidates(p: int, e: int):
    """Yield (row, i, d, expected |A|) before reduction and filtering."""
    q = p**e
    if p == 2:
        for i in range(1, e + 1):
            if _two_adic(i) >= _two_adic(e):
                a = 2 ** ((math.gcd(e, i) + e) // 2)
                yield 1, i, 2**i + 1, a
                yield 3, i, 2 ** (2 * i) - 2**i + 1, a
        if e > 1 and _two_adic(e) == 1:
            a = 2 ** (e // 2 + 1)
            yield 5, None, 2 ** (e // 2) + 2 ** ((e + 2) // 4) + 1, a
            yield 6, None, 2 ** ((e + 2) // 4) + 3, a
        if e % 2:
            a = 2 ** ((e + 1) // 2)
            yield 7, None, 2 ** ((e - 1) // 2) + 3, a
            for i in range(1, e + 1):
                if (4 * i + 1) % e == 0:
                    yield 9, i, 2 ** (2 * i) + 2**i - 1, a
    else:
        for i in range(1, e + 1):
            if _two_adic(i) >= _two_adic(e):
                a = p ** ((math.gcd(e, i) + e) // 2)
                yield 2, i, (p ** (2 * i) + 1) // 2, a
                yield 4, i, p ** (2 * i) - p**i + 1, a
        if p == 3 and e % 2:
            a = 3 ** ((e + 1) // 2)
            yield 8, None, 2 * 3 ** ((e - 1) // 2) + 1, a
            for i in range(1, e + 1):
                if (4 * i + 1) % e == 0:
                    yield 10, i, 2 * 3**i + 1, a


def known_three_valued_families(p: int, e: int) -> list[FamilyEntry]:
    """All applicable known-family instances for F_{p^e}.

    Exponents are reduced modulo q-1; instances that are not coprime to
    q-1 or are degenerate are dropped, and instances falling into the same
    exponent class are merged (the survivor records what it absorbed).
    """
    n = p**e - 1
    if n < 2:
        return []
    ctx = make_field(p, e)
    picked: dict[int, FamilyEntry] = {}
    for row, i, d_raw, a in sorted(_family_candidates(p, e), key=lambda t: (t[0], t[1] or 0)):
        d = normalize_exponent(ctx, d_raw)
        if math.gcd(d, n) != 1 or is_degenerate_int(p, e, d):
            continue
        rep = exponent_class(ctx, d).d
        tag = f"row{row}" + (f",i={i}" if i is not None else "")
        if rep in picked:
            entry = picked[rep]
            if entry.expected_magnitude != a:
                raise ArithmeticError(
                    f"family collision with conflicting magnitudes at (p={p}, e={e}, d={rep})"
                )
            picked[rep] = FamilyEntry(
                entry.row, p, e, entry.i, entry.d, rep, a, entry.preferred,
                entry.merged + (tag,),
            )
            continue
        picked[rep] = FamilyEntry(
            row, p, e, i, d, rep, a, a == preferred_magnitude(p, e)
        )
    return [picked[rep] for rep in sorted(picked)]


def verify_family_entry(ctx: FieldCtx, entry: FamilyEntry) -> tuple[bool, str]:
    """Check the computed spectrum against the family's predicted values.

    The value set must be exactly {0, -A, +A} and the multiplicities must
    match N_(+-A) = (q**2 +- q A)/(2 A**2) with the remainder on zero.
    """
    q = ctx.q
    a = entry.expected_magnitude
    stats = class_stats(ctx, entry.d)
    expected = {
        (a, (q * q + q * a) // (2 * a * a)),
        (-a, (q * q - q * a) // (2 * a * a)),
        (0, q - 1 - (q * q + q * a) // (2 * a * a) - (q * q - q * a) // (2 * a * a)),
    }
    if not stats.rational:
        return False, "irrational values"
    got = set(stats.pairs_rational)
    if got != expected:
        return False, f"expected {sorted(expected)}, got {sorted(got)}"
    return True, "ok"
