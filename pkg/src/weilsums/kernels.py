"""Trace-histogram kernels behind every spectrum computation.

For a field K of order q with unit-group generator g, exponent d coprime to
q - 1 and a = g^j, the kernel tabulates

    counts[j][t] = #{ x in K : Tr(x^d + a x) = t },      0 <= t < p,

for all j at once (the x = 0 term always lands on t = 0).  Everything else
in the library reads spectra off these exact integer histograms.

Two interchangeable implementations exist: a compiled extension
(``weilsums._speedups``) and the numpy version below.  The compiled kernel
is preferred when importable; set ``WEILSUMS_PURE=1`` to force the fallback.
Both produce identical arrays, which the test suite checks.

The inner loop needs one field addition per (x, a) pair.  Three encodings
keep that addition branch-free: XOR on packed bits for p = 2, a conditional
subtract for prime fields, and otherwise carry-free "spread" integers with
one digit per fixed-width bit field, from which the trace is read off
digit-by-digit via the traces of the power basis.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import NotCoprime
from .ffield import FieldCtx, normalize_exponent

if os.environ.get("WEILSUMS_PURE"):
    _speedups = None
else:
    try:
        from . import _speedups  # type: ignore[attr-defined]
    except ImportError:
        _speedups = None


def backend_name() -> str:
    """Which kernel implementation import-time selection picked."""
    return "compiled" if _speedups is not None else "numpy"


def has_compiled_kernel() -> bool:
    return _speedups is not None


def weil_histograms(ctx: FieldCtx, d: int, force: str | None = None) -> np.ndarray:
    """Trace histograms for all a in K^x; shape (q-1, p), dtype int64.

    Row j corresponds to a = g^j.  ``force`` picks a backend explicitly
    ("compiled" or "numpy"); the default follows import-time selection.
    """
    d = normalize_exponent(ctx, d)
    if math.gcd(d, ctx.n) != 1:
        raise NotCoprime(f"gcd({d}, {ctx.n}) != 1")
    args = (
        ctx.p,
        ctx.e,
        ctx.digit_width,
        d,
        np.ascontiguousarray(ctx.exp),
        np.ascontiguousarray(ctx.trace_table),
        np.ascontiguousarray(ctx.tr_basis),
        np.ascontiguousarray(ctx.spread_exp),
    )
    if force == "compiled":
        if _speedups is None:
            raise RuntimeError("compiled kernel is not available")
        return _speedups.weil_histograms(*args)
    if force == "numpy":
        return _weil_histograms_numpy(*args)
    if force is not None:
        raise ValueError(f"unknown backend {force!r}")
    if _speedups is not None:
        return _speedups.weil_histograms(*args)
    return _weil_histograms_numpy(*args)


def _weil_histograms_numpy(p, e, width, d, exp_packed, trace_table, tr_basis, spread_exp):
    n = exp_packed.shape[0]
    powers = (d * np.arange(n, dtype=np.int64)) % n
    if p == 2 or e == 1:
        xd = exp_packed[powers]
        ax = exp_packed
    else:
        xd = spread_exp[powers]
        ax = spread_exp
    counts = np.zeros((n, p), dtype=np.int64)
    cols = np.arange(n, dtype=np.int64)
    block = max(1, 4_000_000 // max(n, 1))
    mask = (1 << width) - 1
    for start in range(0, n, block):
        rows = np.arange(start, min(start + block, n), dtype=np.int64)
        colidx = cols[None, :] + rows[:, None]
        colidx[colidx >= n] -= n
        b = ax[colidx]
        if p == 2:
            t = trace_table[xd[None, :] ^ b]
        elif e == 1:
            s = xd[None, :] + b
            s[s >= p] -= p
            t = trace_table[s]
        else:
            s = xd[None, :] + b
            acc = np.zeros_like(s)
            for k in range(e):
                acc += ((s >> (width * k)) & mask) * int(tr_basis[k])
            t = acc % p
        flat = (np.arange(len(rows), dtype=np.int64)[:, None] * p + t).ravel()
        counts[rows] = np.bincount(flat, minlength=len(rows) * p).reshape(len(rows), p)
    counts[:, 0] += 1  # the x = 0 term
    return counts


def weil_histogram_single(ctx: FieldCtx, d: int, a: int) -> np.ndarray:
    """Trace histogram of x -> x^d + a x for one a (any element, 0 allowed)."""
    d = normalize_exponent(ctx, d)
    if math.gcd(d, ctx.n) != 1:
        raise NotCoprime(f"gcd({d}, {ctx.n}) != 1")
    n, p, e = ctx.n, ctx.p, ctx.e
    powers = (d * np.arange(n, dtype=np.int64)) % n
    hist = np.zeros(p, dtype=np.int64)
    hist[0] += 1  # x = 0
    if a == 0:
        vals = ctx.exp[powers]
        hist += np.bincount(ctx.trace_table[vals], minlength=p)
        return hist
    j = int(ctx.log[a])
    shifted = np.arange(n, dtype=np.int64) + j
    shifted[shifted >= n] -= n
    if p == 2:
        s = ctx.exp[powers] ^ ctx.exp[shifted]
        t = ctx.trace_table[s]
    elif e == 1:
        s = ctx.exp[powers] + ctx.exp[shifted]
        s[s >= p] -= p
        t = ctx.trace_table[s]
    else:
        width = ctx.digit_width
        mask = (1 << width) - 1
        s = ctx.spread_exp[powers] + ctx.spread_exp[shifted]
        acc = np.zeros_like(s)
        for k in range(e):
            acc += ((s >> (width * k)) & mask) * int(ctx.tr_basis[k])
        t = acc % p
    hist += np.bincount(t, minlength=p)
    return hist
