"""Canonical forms and exhaustive enumeration of stable graph types.

A combinatorial type is held as ``(weights, mult)``: a tuple of vertex
weights and a symmetric multiplicity matrix whose diagonal counts loops.
"""

import itertools
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import PreconditionError
from .graphs import Edge, MetricGraph

DEFAULT_MAX_GENUS = 5


def type_of(G):
    """``(weights, mult)`` of a metric graph, lengths dropped."""
    ids = G.vertex_ids
    index = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    mult = [[0] * n for _ in range(n)]
    for e in G.edges:
        i, j = index[e.u], index[e.v]
        mult[i][j] += 1
        if i != j:
            mult[j][i] += 1
    return tuple(G.weight(v) for v in ids), tuple(map(tuple, mult))


def graph_of(weights, mult):
    """Unit-length MetricGraph with ids v1.. and e1.. in slot order."""
    n = len(weights)
    verts = [(f"v{i + 1}", w) for i, w in enumerate(weights)]
    edges = []
    for i in range(n):
        for j in range(i, n):
            for _ in range(mult[i][j]):
                edges.append(Edge(f"e{len(edges) + 1}", f"v{i + 1}", f"v{j + 1}", 1))
    return MetricGraph(verts, edges)


def _degrees(mult):
    return [sum(row) + row[i] for i, row in enumerate(mult)]


def _refine(weights, mult):
    """Label-invariant vertex colours by iterated neighbourhood refinement."""
    n = len(weights)
    deg = _degrees(mult)
    sigs = [(weights[i], mult[i][i], deg[i]) for i in range(n)]
    colours = _rank(sigs)
    while True:
        sigs = [
            (colours[i], tuple(sorted((colours[j], mult[i][j]) for j in range(n) if j != i and mult[i][j])))
            for i in range(n)
        ]
        new = _rank(sigs)
        if len(set(new)) == len(set(colours)):
            return new
        colours = new


def _rank(sigs):
    order = {s: k for k, s in enumerate(sorted(set(sigs)))}
    return [order[s] for s in sigs]


@lru_cache(maxsize=None)
def _cell_permutations(sizes):
    """All orderings of positions that permute within consecutive cells."""
    blocks = []
    start = 0
    for s in sizes:
        blocks.append([list(p) for p in itertools.permutations(range(start, start + s))])
        start += s
    return np.array([sum(combo, []) for combo in itertools.product(*blocks)], dtype=np.int64)


def canonical_form(weights, mult):
    """Encoding ``(weights, upper_triangle)`` invariant under relabelling."""
    n = len(weights)
    colours = _refine(weights, mult)
    base = sorted(range(n), key=lambda i: colours[i])
    sizes = tuple(len(list(grp)) for _, grp in itertools.groupby(sorted(colours)))
    perms = np.asarray(base, dtype=np.int64)[_cell_permutations(sizes)]
    mat = np.asarray(mult, dtype=np.int64)
    best = perms[kernels.best_permutation(mat, perms)]
    sub = mat[np.ix_(best, best)]
    upper = tuple(int(sub[i, j]) for i in range(n) for j in range(i, n))
    return tuple(weights[i] for i in best), upper


def graph_canonical_form(G):
    return canonical_form(*type_of(G))


def decode(form):
    weights, upper = form
    n = len(weights)
    mult = [[0] * n for _ in range(n)]
    it = iter(upper)
    for i in range(n):
        for j in range(i, n):
            mult[i][j] = mult[j][i] = next(it)
    return weights, tuple(map(tuple, mult))


def _sort_key(form):
    return (len(form[0]), form)


def _is_stable_type(weights, mult):
    if len(weights) == 1 and mult[0][0] == 0:
        return weights[0] >= 2
    return all(2 * w - 2 + d > 0 for w, d in zip(weights, _degrees(mult)))


def _connected(mult):
    n = len(mult)
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if mult[i][j] and j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def _check_genus(g, max_genus):
    if not 2 <= g <= max_genus:
        raise PreconditionError(f"genus must lie in [2, {max_genus}], got {g}")


def _children(weights, mult):
    """Every type that contracts to (weights, mult) along one edge."""
    n = len(weights)
    for v in range(n):
        w = weights[v]
        # new loop at v, absorbing one unit of weight
        if w >= 1:
            ws = list(weights)
            ws[v] -= 1
            m = [list(r) for r in mult]
            m[v][v] += 1
            yield tuple(ws), tuple(map(tuple, m))
        # split v into v and a new vertex n joined by a new edge
        nbrs = [u for u in range(n) if u != v and mult[v][u]]
        loops = mult[v][v]
        for ks in itertools.product(*(range(mult[v][u] + 1) for u in nbrs)):
            for a in range(loops + 1):
                for b in range(loops - a + 1):
                    c = loops - a - b
                    for w1 in range(w + 1):
                        w2 = w - w1
                        d1 = 2 * a + sum(ks) + c + 1
                        d2 = 2 * b + sum(mult[v][u] for u in nbrs) - sum(ks) + c + 1
                        if 2 * w1 - 2 + d1 <= 0 or 2 * w2 - 2 + d2 <= 0:
                            continue
                        m = [list(r) + [0] for r in mult] + [[0] * (n + 1)]
                        for u, k in zip(nbrs, ks):
                            m[v][u] = m[u][v] = k
                            m[n][u] = m[u][n] = mult[v][u] - k
                        m[v][v] = a
                        m[n][n] = b
                        m[v][n] = m[n][v] = c + 1
                        ws = list(weights) + [w2]
                        ws[v] = w1
                        yield tuple(ws), tuple(map(tuple, m))


def enumerate_by_degeneration(g):
    """Canonical forms of all stable types of genus g, grown edge by edge.

    Contracting any edge of a stable graph gives a stable graph, so every
    type with k+1 edges is a child of some type with k edges.
    """
    level = {canonical_form((g,), ((0,),))}
    found = set(level)
    while level:
        nxt = set()
        for form in level:
            for child in _children(*decode(form)):
                cf = canonical_form(*child)
                if cf not in found:
                    nxt.add(cf)
        found |= nxt
        level = nxt
    return sorted(found, key=_sort_key)


def _weight_vectors(n, total_max):
    # nonincreasing weight tuples of length n with sum <= total_max
    def rec(k, cap, left):
        if k == 0:
            yield ()
            return
        for w in range(min(cap, left), -1, -1):
            for rest in rec(k - 1, w, left - w):
                yield (w,) + rest
    yield from rec(n, total_max, total_max)


def enumerate_brute_force(g):
    """Same set as `enumerate_by_degeneration`, by scanning every multigraph.

    Walks vertex counts up to 2g-2, sorted weight vectors and all multisets
    of edge slots.  Practical for g <= 3.
    """
    found = set()
    for n in range(1, max(1, 2 * g - 2) + 1):
        slots = [(i, j) for i in range(n) for j in range(i, n)]
        for weights in _weight_vectors(n, g):
            edges = g - sum(weights) + n - 1
            if edges < n - 1:
                continue
            for combo in itertools.combinations_with_replacement(slots, edges):
                mult = [[0] * n for _ in range(n)]
                for i, j in combo:
                    mult[i][j] += 1
                    if i != j:
                        mult[j][i] += 1
                if not _connected(mult) or not _is_stable_type(weights, mult):
                    continue
                found.add(canonical_form(weights, tuple(map(tuple, mult))))
    return sorted(found, key=_sort_key)


def enumerate_stable_graphs(g, max_genus=DEFAULT_MAX_GENUS, weight_zero_only=False):
    """All stable combinatorial types of genus g as unit-length graphs, canonical order."""
    _check_genus(g, max_genus)
    forms = enumerate_by_degeneration(g)
    if weight_zero_only:
        forms = [f for f in forms if not any(f[0])]
    return [graph_of(*decode(f)) for f in forms]
