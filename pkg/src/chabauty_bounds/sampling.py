"""Seeded random generators for graphs, PL functions and valuation series.

Used by the property and acceptance suites.  Every generator takes a
``random.Random`` so runs are reproducible.
"""

import math
from fractions import Fraction

from .graphs import Edge, MetricGraph, PLFunction
from .newton import ValuationSeries


def random_rational(rng, lo, hi, max_den=6):
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(math.ceil(lo * den), math.floor(hi * den)), den)


def random_graph(rng, max_vertices=5, max_extra_edges=4, max_weight=2):
    """Connected vertex-weighted multigraph: random spanning tree plus extra edges and loops."""
    n = rng.randint(1, max_vertices)
    verts = [(f"v{i}", rng.randint(0, max_weight)) for i in range(n)]
    pairs = [(f"v{rng.randrange(i)}", f"v{i}") for i in range(1, n)]
    for _ in range(rng.randint(0, max_extra_edges)):
        pairs.append((f"v{rng.randrange(n)}", f"v{rng.randrange(n)}"))
    edges = [Edge(f"e{k}", u, v, random_rational(rng, Fraction(1, 4), 3, 4))
             for k, (u, v) in enumerate(pairs)]
    return MetricGraph(verts, edges)


def _edge_breaks(rng, length, start, end, concave):
    """Breakpoints joining ``start`` to ``end`` with integer slopes over ``length``."""
    ratio = (end - start) / length
    if ratio.denominator == 1 and rng.random() < 0.3:
        return []
    hi = math.floor(ratio) + 1 + rng.choice((0, 0, 0, 1))
    lo = math.ceil(ratio) - 1 - rng.choice((0, 0, 0, 1))
    first, second = (hi, lo) if concave else (lo, hi)
    x = (end - start - second * length) / (first - second)
    return [(x, start + first * x)]


def random_pl_function(rng, G, concave_bias=0.9, spread=2):
    """Integer-slope PL function: random vertex values, one or two pieces per edge.

    Interior breakpoints are concave with probability ``concave_bias``, so a
    useful fraction of samples are sections of the canonical divisor.
    """
    values = {v: random_rational(rng, -spread, spread, 3) for v in G.vertex_ids}
    breaks = {}
    for e in G.edges:
        if e.is_loop and rng.random() < 0.5:
            # tent or valley around the loop
            top = values[e.u] + rng.choice((-1, 1)) * rng.randint(0, 2) * e.length / 2
            mid = e.length / 2
            breaks[e.id] = [(mid, top)] if top != values[e.u] else []
            continue
        breaks[e.id] = _edge_breaks(rng, e.length, values[e.u], values[e.v], rng.random() < concave_bias)
    return PLFunction(G, values, breaks)


def leaf_extremal(g):
    """Weight-g vertex with a genus-zero leaf; F rises with slope 2g-1 toward the leaf."""
    G = MetricGraph([("v", g), ("z", 0)], [Edge("e", "v", "z", Fraction(1))])
    return PLFunction(G, {"v": 0, "z": 2 * g - 1})


def random_series(rng, primes=(2, 3, 5, 7), max_modulus=5, span=12, max_terms=8):
    """Annulus series without a residue term, plus a radius inside the annulus."""
    p = rng.choice(primes)
    a = random_rational(rng, Fraction(1, 6), max_modulus, 6)
    exps = rng.sample([n for n in range(-span, span + 1) if n != 0], rng.randint(1, max_terms))
    terms = {n: random_rational(rng, -5, 5, 6) for n in exps}
    r = a * Fraction(rng.randint(1, 99), 100)
    return ValuationSeries(p, terms, a), r
