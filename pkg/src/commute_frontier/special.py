"""Regularized incomplete beta function and the t / F tail probabilities built on it."""

from __future__ import annotations

import math

from .errors import DomainError, NumericError

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000


def _betacf(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the continued fraction for I_x(a, b)
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise NumericError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """Return I_x(a, b), the regularized incomplete beta function.

    Uses the continued fraction directly when ``x < (a + 1) / (a + b + 2)``
    and the symmetry ``I_x(a, b) = 1 - I_{1-x}(b, a)`` otherwise, which keeps
    the fraction in its rapidly converging region.
    """
    a, b, x = float(a), float(b), float(x)
    if not (math.isfinite(a) and a > 0 and math.isfinite(b) and b > 0):
        raise DomainError(f"a and b must be finite and > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _betacf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _betacf(b, a, 1.0 - x) / b


def _check_df(df, name="df") -> float:
    df = float(df)
    if not (math.isfinite(df) and df > 0):
        raise DomainError(f"{name} must be a positive number, got {df}")
    return df


def t_tail_p(t: float, df: float) -> float:
    """Two-sided p-value of Student's t statistic with ``df`` degrees of freedom."""
    df = _check_df(df)
    t = float(t)
    if math.isnan(t):
        raise DomainError("t is nan")
    if math.isinf(t):
        return 0.0
    t2 = t * t
    # evaluate in whichever argument is small so 1 - x never cancels
    if t2 < df:
        return 1.0 - regularized_incomplete_beta(0.5, df / 2.0, t2 / (df + t2))
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t2))


def f_tail_p(f: float, df1: float, df2: float) -> float:
    """Upper-tail p-value of an F statistic on (df1, df2) degrees of freedom."""
    df1 = _check_df(df1, "df1")
    df2 = _check_df(df2, "df2")
    f = float(f)
    if math.isnan(f) or f < 0:
        raise DomainError(f"F must be >= 0, got {f}")
    if math.isinf(f):
        return 0.0
    u = df1 * f
    if u < df2:
        return 1.0 - regularized_incomplete_beta(df1 / 2.0, df2 / 2.0, u / (df2 + u))
    return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + u))
