"""Closed-form space/time bounds and exact threshold predicates.

Thresholds involving square roots or base-2 logarithms are decided with
integer arithmetic (compare squares, compare powers of two). Time bounds,
which involve ``e`` and huge powers, are evaluated with mpmath at
``MP_DIGITS`` significant digits.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath.ctx_mp import MPContext

MP_DIGITS = 60
# Time bounds whose base-10 logarithm exceeds this are reported as unclaimed.
TIME_BOUND_LOG10_CAP = 18

_MP = MPContext()
_MP.dps = MP_DIGITS


def _ctx() -> MPContext:
    return _MP


# -- exact predicates ----------------------------------------------------

def exceeds_log2(k: int, m: int) -> bool:
    """``k > log2(m)`` for integers ``k >= 0`` and ``m >= 1``."""
    return k >= 0 and (1 << k) > m


def at_most_log2_fraction(k: int, m: int, den: int) -> bool:
    """``k <= log2(m) / den``, i.e. ``2**(den*k) <= m``."""
    return (1 << (den * k)) <= m


def ceil_sqrt(x: int) -> int:
    if x <= 0:
        return 0
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def sqrt_at_least(k: int, num: int, den: int = 1) -> bool:
    """``k >= sqrt(num/den)`` for ``k >= 0``."""
    return k * k * den >= num


def const_times_m_over_log2m_floor(num: int, den: int, m: int) -> int:
    """Largest integer ``s`` with ``s <= (num/den) * m / log2(m)``, for m >= 2.

    ``s * log2(m) <= (num/den) * m`` iff ``m**(den*s) <= 2**(num*m)``.
    """
    if m < 2:
        raise ValueError("m must be at least 2")

    def ok(s: int) -> bool:
        # Compare bit lengths first; only near ties need the exact power.
        lhs_bits = den * s * math.log2(m)
        rhs_bits = num * m
        if lhs_bits < rhs_bits - 1:
            return True
        if lhs_bits > rhs_bits + 1:
            return False
        return m ** (den * s) <= 1 << (num * m)

    s = int(num * m / (den * math.log2(m)))
    while not ok(s):
        s -= 1
    while ok(s + 1):
        s += 1
    return s


# -- budget-decomposition bounds -----------------------------------------

def log2_exp_floor(m: int, budget: Fraction) -> int | None:
    """``floor(m / B)``; ``None`` stands for +infinity when ``B == 0``."""
    if budget == 0:
        return None
    return math.floor(Fraction(m) / budget)


def decomposition_space_bound(budget: Fraction, m: int, d: int) -> int | None:
    """``floor(B) + 1 + (d-1) * (2**floor(m/B) - 1)``; ``None`` if infinite."""
    k = log2_exp_floor(m, budget)
    if k is None:
        return 1 if d <= 1 else None
    return math.floor(budget) + 1 + max(d - 1, 0) * ((1 << k) - 1)


def decomposition_time_bound(n: int, m: int, d: int, budget: Fraction):
    """``2 d/(d-1) * max(e, n / 2**k) ** (2**k)`` with ``k = floor(m/B)``.

    Returns an mpmath number, or ``None`` when ``d < 2``, ``B == 0`` or the
    value exceeds ``10**TIME_BOUND_LOG10_CAP``.
    """
    k = log2_exp_floor(m, budget)
    if d < 2 or k is None or k > 62:
        return None
    ctx = _ctx()
    parts = ctx.mpf(1 << k)
    base = ctx.mpf(n) / parts
    if base < ctx.e:
        base = ctx.e
    log10 = ctx.log10(2 * ctx.mpf(d) / (d - 1)) + parts * ctx.log10(base)
    if log10 > TIME_BOUND_LOG10_CAP:
        return None
    return 2 * ctx.mpf(d) / (d - 1) * base ** parts


def merged_time_bound(n: int, d: int, parts: int):
    """``2 d/(d-1) * (n / l) ** l`` with ``l = min(parts, ceil(n/d), n/e)``."""
    if d < 2:
        raise ValueError("needs d >= 2")
    ctx = _ctx()
    ell = min(ctx.mpf(parts), ctx.mpf(-(-n // d)), ctx.mpf(n) / ctx.e)
    return 2 * ctx.mpf(d) / (d - 1) * (ctx.mpf(n) / ell) ** ell


def merged_move_count(sizes: list[int]) -> int:
    """``2 * sum_i prod_{j >= i} sizes[j]``: moves of the replay construction
    when every vertex of every later part reaches back into earlier parts."""
    total, prod = 0, 1
    for s in reversed(sizes):
        prod *= s
        total += prod
    return 2 * total


def as_int_bound(x) -> int | None:
    """Largest integer not exceeding an mpmath/Fraction bound."""
    if x is None:
        return None
    return int(_MP.floor(x)) if not isinstance(x, (int, Fraction)) else math.floor(x)


# -- budget choices --------------------------------------------------------

def g(m: int) -> float:
    """``log2 m - 3 log2 log2 m`` (at least 1 once ``m >= 2**12``)."""
    lg = math.log2(m)
    return lg - 3 * math.log2(lg)


def budget_m_over_g(m: int) -> Fraction:
    ctx = _ctx()
    lg = ctx.log(m, 2)
    val = ctx.mpf(m) / (lg - 3 * ctx.log(lg, 2))
    return Fraction(str(ctx.nstr(val, 30))).limit_denominator(10**6)


def budget_2m_over_log2m(m: int) -> Fraction:
    if m & (m - 1) == 0:
        return Fraction(2 * m, m.bit_length() - 1)
    ctx = _ctx()
    val = 2 * ctx.mpf(m) / ctx.log(m, 2)
    return Fraction(str(ctx.nstr(val, 30))).limit_denominator(10**6)


def log_constant_space_bound(m: int) -> int:
    """``floor(2.8125 * m / log2 m)``."""
    return const_times_m_over_log2m_floor(45, 16, m)


def log_constant_time_bound(n: int, m: int):
    """``2 * (n log2 m / m) ** (m / log2 m)``, or ``None`` past the cap."""
    ctx = _ctx()
    lg = ctx.log(m, 2)
    expo = ctx.mpf(m) / lg
    base = ctx.mpf(n) * lg / m
    if base <= 0:
        return None
    log10 = ctx.log10(2) + expo * ctx.log10(base)
    if log10 > TIME_BOUND_LOG10_CAP:
        return None
    return 2 * base ** expo


# -- depth and planar bounds ---------------------------------------------

def classic_depth_bound(depth: int, d: int) -> int:
    return depth * (d - 1) + 1 if d >= 1 else 1


def depth_sqrt_bound(m: int, depth: int, d: int) -> int:
    """``ceil(2 sqrt(m l)) - l + 1 + d``."""
    return ceil_sqrt(4 * m * depth) - depth + 1 + d


def planar_bound(n: int, d: int):
    """``6 (sqrt2 + sqrt3)(1 + sqrt(2/3)) sqrt(n) + d`` as an mpmath number."""
    ctx = _ctx()
    c = 6 * (ctx.sqrt(2) + ctx.sqrt(3)) * (1 + ctx.sqrt(ctx.mpf(2) / 3))
    return c * ctx.sqrt(n) + d


def separator_certified(size: int, n: int) -> bool:
    """``size <= 2 sqrt(2) sqrt(n)``."""
    return size * size <= 8 * n


def loui_reference(n: int, d: int) -> float:
    return 3 * d * n / math.log2(n) + 4 if n >= 2 else float("nan")


def m_log_m_reference(m: int, d: int) -> float:
    return m / math.log2(m) + d if m >= 2 else float("nan")
