"""Exact rationals, p-adic valuations and the correction function N_p(r, N0).

Rationals are :class:`fractions.Fraction`; ``math.inf`` plays the role of the
valuation of zero.  N_p(r, N0) is the least positive N such that
``r*(n - N0) > floor(log_p n)`` for every ``n >= N``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import kernels
from .errors import PreconditionError, SchemaError

INF = math.inf

DEFAULT_PRECISION = 128


def as_rational(x):
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Decimal strings and floats are refused so that no precision is lost
    silently.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise SchemaError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        num, sep, den = s.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise SchemaError(f"not a rational of the form num/den: {x!r}") from None
        if d == 0:
            raise SchemaError(f"zero denominator: {x!r}")
        return Fraction(n, d)
    raise SchemaError(f"not a rational: {x!r}")


def as_extended(x):
    if isinstance(x, str) and x.strip() == "inf":
        return INF
    if isinstance(x, float) and x == INF:
        return INF
    return as_rational(x)


def format_rational(x):
    """``"num/den"``, with the denominator omitted when it is 1; ``"inf"`` for +oo."""
    if x == INF:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise PreconditionError(f"p must be prime, got {p!r}")


def padic_valuation(p, n):
    """Exponent of the largest power of p dividing the nonzero integer n."""
    _check_prime(p)
    if n == 0:
        raise PreconditionError("valuation of 0 is +inf; use INF explicitly")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def floor_log(p, n):
    """Largest k with p**k <= n, by integer comparison only."""
    if n <= 0:
        raise PreconditionError(f"floor_log needs n >= 1, got {n}")
    k = 0
    pk = p
    while pk <= n:
        pk *= p
        k += 1
    return k


def _check_radius(r):
    r = as_rational(r)
    if r <= 0:
        raise PreconditionError(f"radius must be positive, got {format_rational(r)}")
    return r


def np_blocks(p, r, n0):
    """Per-block largest violators of ``r*(n - n0) > floor(log_p n)``.

    Yields ``(k, largest_violator)`` for every block ``[p**k, p**(k+1))`` that
    contains a violator.  Block k holds a violator iff its first element is
    at most ``n0 + k/r``.  Iteration stops at the first k with
    ``p**k > n0 + k/r`` and ``r*p**k*(p-1) > 1``; past that point the block
    starts outrun the violation threshold, which grows by only 1/r per block.
    """
    _check_prime(p)
    r = _check_radius(r)
    n0 = int(n0)
    k = 0
    pk = 1
    while True:
        threshold = n0 + k / r
        if pk <= threshold:
            top = min(pk * p - 1, math.floor(threshold))
            yield k, top
        elif r * pk * (p - 1) > 1:
            return
        k += 1
        pk *= p


def np_value(p, r, n0):
    """Exact N_p(r, n0) by the block method; O(log_p(1/r)) blocks."""
    last = 0
    for _, top in np_blocks(p, r, n0):
        last = top
    return last + 1


def _certify_cutoff(p, r, n0, cutoff):
    k = floor_log(p, cutoff)
    pk = p**k
    return (
        r * (cutoff - n0) > k
        and r * pk * (p - 1) > 1
        and pk * p > n0 + (k + 1) / r
    )


def np_naive(p, r, n0, cutoff):
    """N_p(r, n0) by a linear scan over ``n = 1..cutoff``.

    The cutoff must be certified: it satisfies the inequality itself, the
    next block starts beyond the violation threshold, and the block starts
    grow faster than the threshold from there on.
    """
    _check_prime(p)
    r = _check_radius(r)
    n0 = int(n0)
    if cutoff < 1 or not _certify_cutoff(p, r, n0, cutoff):
        raise PreconditionError(f"cutoff {cutoff} is not certified for p={p}, r={format_rational(r)}, n0={n0}")
    return kernels.last_violator(p, r.numerator, r.denominator, n0, cutoff) + 1


def safe_cutoff(p, r, n0):
    """Smallest power-of-p-minus-one cutoff that `np_naive` accepts."""
    r = _check_radius(r)
    c = p - 1
    while not _certify_cutoff(p, r, int(n0), c):
        c = c * p + p - 1
    return c


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed rational interval enclosing a real number."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    def __mul__(self, other):
        if not isinstance(other, CertifiedInterval):
            other = CertifiedInterval(Fraction(other), Fraction(other))
        prods = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return CertifiedInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def certainly_ge(self, x):
        return self.lo >= x

    def certainly_lt(self, x):
        return self.hi < x


def _raw_to_fraction(raw):
    sign, man, exp, _ = raw
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def _endpoints(v):
    lo, hi = v._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def ln_interval(p, prec=DEFAULT_PRECISION):
    """Outward-rounded enclosure of ln(p)."""
    ctx = mpmath.iv
    saved = ctx.prec
    ctx.prec = prec
    try:
        v = ctx.log(ctx.mpf(p))
        return CertifiedInterval(*_endpoints(v))
    finally:
        ctx.prec = saved


def exp_upper(x, prec=DEFAULT_PRECISION):
    """Rational upper bound for exp(x), x rational."""
    ctx = mpmath.iv
    saved = ctx.prec
    ctx.prec = prec
    try:
        x = Fraction(x)
        v = ctx.exp(ctx.mpf(x.numerator) / x.denominator)
        return _endpoints(v)[1]
    finally:
        ctx.prec = saved


def log_upper(x, prec=DEFAULT_PRECISION):
    """Rational upper bound for ln(x), x positive rational."""
    ctx = mpmath.iv
    saved = ctx.prec
    ctx.prec = prec
    try:
        x = Fraction(x)
        v = ctx.log(ctx.mpf(x.numerator) / x.denominator)
        return _endpoints(v)[1]
    finally:
        ctx.prec = saved


@dataclass(frozen=True)
class ClosedFormBound:
    """Result of `np_upper_bound_remark`.

    ``valid`` is False only if no bound could be certified at the working
    precision; ``doubled`` is None unless ``r*ln p >= 1`` was certified.
    """

    bound: int
    valid: bool
    exp_form: int | None
    doubled: int | None
    rlnp: CertifiedInterval | None


def np_upper_bound_remark(p, r, n0, prec=DEFAULT_PRECISION):
    """Closed-form upper bounds on N_p(r, n0), evaluated with outward rounding.

    For ``n0 >= 1`` the exponential bound is ``ceil(n0*exp(2/c))`` when
    ``n0 <= 7`` and ``ceil(n0**(1 + 1/c))`` otherwise, ``c = n0*r*ln p``.
    When ``r*ln p >= 1`` is certified the reported bound is ``2*n0``.
    For ``n0 <= 0`` the exact value is returned.
    """
    _check_prime(p)
    r = _check_radius(r)
    n0 = int(n0)
    if n0 <= 0:
        return ClosedFormBound(np_value(p, r, n0), True, None, None, None)
    lnp = ln_interval(p, prec)
    rlnp = lnp * r
    # c is bounded below by n0*r*lo(ln p); a smaller c only enlarges the bound
    c_lo = n0 * rlnp.lo
    if n0 <= 7:
        x = exp_upper(2 / c_lo, prec) * n0
    else:
        x = exp_upper((1 + 1 / c_lo) * log_upper(n0, prec), prec)
    exp_form = int(math.ceil(x))
    doubled = 2 * n0 if rlnp.certainly_ge(1) else None
    bound = doubled if doubled is not None else exp_form
    return ClosedFormBound(bound, True, exp_form, doubled, rlnp)
