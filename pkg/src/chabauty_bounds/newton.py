"""Tropicalized Laurent series on open annuli and discs.

A `ValuationSeries` keeps only the valuations of the nonzero coefficients of
``sum a_n T^n``.  The radius parameter r runs from the outer end of the
annulus (r -> 0) to the inner end (r -> a); "inner" slopes point toward
smaller r.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import PreconditionError, SchemaError
from .exact import as_rational, format_rational, is_prime, np_value, padic_valuation

TOWARD_INNER = "toward_inner"
TOWARD_OUTER = "toward_outer"


class ResidueObstruction(PreconditionError):
    """The n = 0 term of a differential has no single-valued antiderivative."""


@dataclass(frozen=True)
class ValuationSeries:
    p: int
    terms: Mapping[int, Fraction]
    modulus: Fraction | None = None  # None means disc mode

    def __post_init__(self):
        if not is_prime(self.p):
            raise SchemaError(f"p must be prime, got {self.p}")
        terms = {int(n): as_rational(v) for n, v in dict(self.terms).items()}
        if not terms:
            raise SchemaError("series must have at least one nonzero term")
        if self.modulus is None:
            if min(terms) < 0:
                raise SchemaError("disc series cannot have negative exponents")
        else:
            object.__setattr__(self, "modulus", as_rational(self.modulus))
            if self.modulus <= 0:
                raise SchemaError("annulus modulus must be positive")
        object.__setattr__(self, "terms", dict(sorted(terms.items())))

    @property
    def is_disc(self):
        return self.modulus is None

    def check_radius(self, r):
        r = as_rational(r)
        if r <= 0 or (self.modulus is not None and r >= self.modulus):
            hi = "inf" if self.modulus is None else format_rational(self.modulus)
            raise PreconditionError(f"radius {format_rational(r)} outside the open range (0, {hi})")
        return r

    def to_json(self):
        d = {"p": self.p, "mode": "disc" if self.is_disc else "annulus"}
        if not self.is_disc:
            d["modulus"] = format_rational(self.modulus)
        d["terms"] = [{"n": n, "val": format_rational(v)} for n, v in self.terms.items()]
        return d

    @classmethod
    def from_json(cls, d):
        try:
            mode = d["mode"]
            p = d["p"]
            raw = d["terms"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"series file missing field {exc}") from None
        if mode not in ("disc", "annulus"):
            raise SchemaError(f"mode must be 'disc' or 'annulus', got {mode!r}")
        if not isinstance(p, int):
            raise SchemaError("p must be an integer")
        terms = {}
        seen = set()
        if not isinstance(raw, list):
            raise SchemaError("terms must be a list")
        for i, t in enumerate(raw):
            if not isinstance(t, dict) or not isinstance(t.get("n"), int) or isinstance(t["n"], bool):
                raise SchemaError(f"terms[{i}].n must be an integer")
            if "val" not in t:
                raise SchemaError(f"terms[{i}].val missing")
            if t["n"] in seen:
                raise SchemaError(f"terms[{i}]: duplicate exponent {t['n']}")
            seen.add(t["n"])
            if t["val"] == "inf":
                continue  # zero coefficient
            terms[t["n"]] = as_rational(t["val"])
        modulus = None
        if mode == "annulus":
            if "modulus" not in d:
                raise SchemaError("annulus series needs a modulus")
            modulus = as_rational(d["modulus"])
        return cls(p, terms, modulus)


@dataclass(frozen=True)
class HullSegment:
    left: int
    right: int
    slope: Fraction


def tropical_eval(s, r):
    """F(xi_r) = min over the support of val(a_n) + n*r."""
    r = s.check_radius(r)
    return min(v + n * r for n, v in s.terms.items())


def attaining_set(s, r):
    """Smallest and largest exponents attaining the minimum at radius r."""
    r = s.check_radius(r)
    best = tropical_eval(s, r)
    hits = [n for n, v in s.terms.items() if v + n * r == best]
    return hits[0], hits[-1]


def slope(s, r, direction=TOWARD_INNER):
    n_min, n_max = attaining_set(s, r)
    if direction == TOWARD_INNER:
        return -n_max
    if direction == TOWARD_OUTER:
        return n_min
    raise ValueError(f"unknown direction {direction!r}")


def lower_hull(s):
    """Lower convex hull of the points (n, val(a_n)) by monotone chain."""
    pts = list(s.terms.items())
    hull = []
    for x, y in pts:
        # pop while the last turn is not strictly convex (cross <= 0)
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0) <= 0:
                hull.pop()
            else:
                break
        hull.append((x, y))
    return [
        HullSegment(a[0], b[0], Fraction(b[1] - a[1]) / (b[0] - a[0]))
        for a, b in zip(hull, hull[1:])
    ]


def hull_vertices(s):
    segs = lower_hull(s)
    if not segs:
        (n, v), = s.terms.items()
        return [(n, v)]
    xs = [segs[0].left] + [seg.right for seg in segs]
    return [(x, s.terms[x]) for x in xs]


def breakpoints(s):
    """Radii (within the valid range) at which the attaining set is not a singleton."""
    out = []
    for seg in lower_hull(s):
        r = -seg.slope
        if r > 0 and (s.modulus is None or r < s.modulus):
            out.append(r)
    return sorted(out)


def antiderivative(s, constant=None):
    """Valuations of f with df = sum a_n T^n dT/T, i.e. b_n = a_n / n.

    ``constant`` is the valuation of the integration constant b_0; it is
    omitted by default.
    """
    if 0 in s.terms:
        raise ResidueObstruction("nonzero residue term at n=0: dT/T has no antiderivative")
    terms = {n: v - padic_valuation(s.p, n) for n, v in s.terms.items()}
    if constant is not None:
        terms[0] = as_rational(constant)
    return ValuationSeries(s.p, terms, s.modulus)


def end_slope_n0(s):
    """N0 = -(largest exponent attaining min val(a_n) + n*a at the inner end)."""
    if s.is_disc:
        raise PreconditionError("end slope is defined for annuli only")
    a = s.modulus
    best = min(v + n * a for n, v in s.terms.items())
    return -max(n for n, v in s.terms.items() if v + n * a == best)


@dataclass(frozen=True)
class AnnularBoundReport:
    slope_found: int
    bound: int
    n0: int
    holds: bool


def verify_annular_bound(omega, r):
    """Check that the inner slope of -log|f| at xi_r is at most N_p(a - r, N0)."""
    if omega.is_disc:
        raise PreconditionError("annular bound needs an annulus series")
    r = omega.check_radius(r)
    f = antiderivative(omega)
    found = slope(f, r, TOWARD_INNER)
    n0 = end_slope_n0(omega)
    bound = np_value(omega.p, omega.modulus - r, n0)
    return AnnularBoundReport(found, bound, n0, found <= bound)


def zeros_in_open_subdisc(f, r):
    """Zeros (with multiplicity) of valuation > r of a power series on the unit disc."""
    if not f.is_disc:
        raise PreconditionError("use zeros_in_subannulus for annulus series")
    return attaining_set(f, r)[0]


def zeros_in_subannulus(f, r1, r2):
    """Zeros with valuation strictly between r1 and r2."""
    r1, r2 = as_rational(r1), as_rational(r2)
    if r1 >= r2:
        raise PreconditionError("need r1 < r2")
    return attaining_set(f, r1)[0] - attaining_set(f, r2)[1]


def derivative(f):
    """Valuations of f' = sum n b_n T^(n-1) for a power series f."""
    if not f.is_disc:
        raise PreconditionError("derivative is implemented for disc series")
    terms = {n - 1: v + padic_valuation(f.p, n) for n, v in f.terms.items() if n != 0}
    if not terms:
        raise PreconditionError("f is constant; its differential vanishes")
    return ValuationSeries(f.p, terms)


def zeros_in_open_unit_disc(f):
    """Zeros of a power series with positive valuation (the r -> 0+ slope)."""
    low = min(f.terms.values())
    return min(n for n, v in f.terms.items() if v == low)


def disc_zero_bound(f, r):
    """N_p(r, N0 + 1), N0 the number of zeros of df on the open unit disc."""
    r = f.check_radius(r)
    n0 = zeros_in_open_unit_disc(derivative(f))
    return np_value(f.p, r, n0 + 1)
