"""Scalar special functions used by the closed-form relay analysis.

Only the argument ranges the analysis needs are covered: positive shapes,
and the Gauss hypergeometric function on the non-positive real axis.
"""

import math

MAX_SERIES_TERMS = 500
MAX_CF_STEPS = 300

_EPS = 1e-16
_TINY = 1e-300


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class ConvergenceError(ArithmeticError):
    """A series or continued fraction exhausted its iteration budget."""


def _check_finite(*args):
    for a in args:
        if not math.isfinite(a):
            raise DomainError(f"non-finite argument: {a!r}")


def log_gamma(x):
    """Natural log of the Gamma function for x > 0.

    Delegates to the C library ``lgamma`` exposed by :mod:`math` (a
    Lanczos-type approximation with special handling near 1 and 2).
    """
    _check_finite(x)
    if x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_beta(p, q):
    _check_finite(p, q)
    if p <= 0 or q <= 0:
        raise DomainError(f"beta requires p, q > 0, got ({p}, {q})")
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q)


def beta(p, q):
    """Complete beta function B(p, q)."""
    return math.exp(log_beta(p, q))


def _betacf(u, p, q):
    # Modified Lentz evaluation of the continued fraction for I_u(p, q).
    qab = p + q
    qap = p + 1.0
    qam = p - 1.0
    c = 1.0
    d = 1.0 - qab * u / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, MAX_CF_STEPS + 1):
        m2 = 2 * m
        aa = m * (q - m) * u / ((qam + m2) * (p + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(p + m) * (qab + m) * u / ((p + m2) * (qap + m2))
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
    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge in {MAX_CF_STEPS} steps "
        f"(u={u}, p={p}, q={q})"
    )


def reg_inc_beta(u, p, q):
    """Regularized incomplete beta function I_u(p, q) for 0 <= u <= 1."""
    _check_finite(u, p, q)
    if p <= 0 or q <= 0:
        raise DomainError(f"reg_inc_beta requires p, q > 0, got ({p}, {q})")
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"reg_inc_beta requires 0 <= u <= 1, got {u}")
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return 1.0
    swap = u > (p + 1.0) / (p + q + 2.0)
    if swap:
        u, p, q = 1.0 - u, q, p
    log_front = p * math.log(u) + q * math.log1p(-u) - log_beta(p, q)
    val = math.exp(log_front) * _betacf(u, p, q) / p
    val = min(max(val, 0.0), 1.0)
    return 1.0 - val if swap else val


def _series_2f1(a, b, c, w):
    """Power series of 2F1(a, b; c; w) for 0 <= w < 1."""
    total = 1.0
    term = 1.0
    for n in range(MAX_SERIES_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * w
        total += term
        if term == 0.0 or abs(term) <= _EPS * abs(total):
            return total
    raise ConvergenceError(
        f"2F1 series did not converge in {MAX_SERIES_TERMS} terms "
        f"(a={a}, b={b}, c={c}, w={w})"
    )


def log_gauss_2f1_neg(a, b, c, z):
    """Log of 2F1(a, b; c; z) for z <= 0, where the function is positive.

    The caller must ensure positivity; this holds for the pattern
    c = a + 1 with a, b > 0 that the per-hop SIR CDF uses.
    """
    val_log, sign = _gauss_2f1_neg_parts(a, b, c, z)
    if sign <= 0:
        raise DomainError(f"2F1({a}, {b}; {c}; {z}) is not positive")
    return val_log


def gauss_2f1_neg(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 0.

    The argument is mapped to w = z / (z - 1) in [0, 1) by the Pfaff
    transformation and the resulting series is summed. When c = a + 1,
    b > a and w > 1/2, the series in w is replaced by its expansion about
    w = 1, which converges geometrically in 1 - w = 1 / (1 - z).
    """
    log_val, sign = _gauss_2f1_neg_parts(a, b, c, z)
    return sign * math.exp(log_val) if sign != 0 else 0.0


def _gauss_2f1_neg_parts(a, b, c, z):
    _check_finite(a, b, c, z)
    if z > 0:
        raise DomainError(f"gauss_2f1_neg requires z <= 0, got {z}")
    if c <= 0:
        raise DomainError(f"gauss_2f1_neg requires c > 0, got {c}")
    if z == 0.0:
        return 0.0, 1.0
    one_minus_z = 1.0 - z
    w = -z / one_minus_z
    log_pref = -a * math.log(one_minus_z)
    s = b - a
    if c == a + 1.0 and s > 0 and w > 0.5:
        # 2F1(a, b; a+1; z) = (1-z)^-a [G w^-a - (a/s) v^s 2F1(1, b; s+1; v)]
        # with v = 1 - w = 1/(1-z) and G = Gamma(a+1) Gamma(s) / Gamma(b).
        v = 1.0 / one_minus_z
        log_g = math.lgamma(a + 1.0) + math.lgamma(s) - math.lgamma(b)
        first = math.exp(log_g - a * math.log(w))
        second = (a / s) * math.exp(s * math.log(v)) * _series_2f1(1.0, b, s + 1.0, v)
        bracket = first - second
    else:
        bracket = _series_2f1(a, c - b, c, w)
    if bracket == 0.0:
        return -math.inf, 0.0
    return log_pref + math.log(abs(bracket)), math.copysign(1.0, bracket)
