"""Vertex-weighted metric graphs, divisors and tropical meromorphic functions.

Loops count twice toward the valency of their vertex, everywhere.
"""

from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InvariantBreach, PreconditionError, SchemaError
from .exact import as_rational, format_rational


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Fraction = Fraction(1)

    @property
    def is_loop(self):
        return self.u == self.v


class MetricGraph:
    """Connected vertex-weighted multigraph with positive rational edge lengths."""

    def __init__(self, vertices, edges=()):
        self._weights = {}
        for vid, w in vertices:
            if vid in self._weights:
                raise SchemaError(f"duplicate vertex id {vid!r}")
            if not isinstance(w, int) or isinstance(w, bool) or w < 0:
                raise SchemaError(f"vertex {vid!r}: weight must be a nonnegative integer")
            self._weights[vid] = w
        if not self._weights:
            raise SchemaError("graph needs at least one vertex")
        self._edges = {}
        for e in edges:
            if e.id in self._edges:
                raise SchemaError(f"duplicate edge id {e.id!r}")
            for end in (e.u, e.v):
                if end not in self._weights:
                    raise SchemaError(f"edge {e.id!r}: unknown endpoint {end!r}")
            length = as_rational(e.length)
            if length <= 0:
                raise SchemaError(f"edge {e.id!r}: length must be positive")
            self._edges[e.id] = Edge(e.id, e.u, e.v, length)
        if not self._connected():
            raise PreconditionError("graph is not connected")

    def _connected(self):
        adj = defaultdict(set)
        for e in self._edges.values():
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        start = next(iter(self._weights))
        seen = {start}
        todo = deque([start])
        while todo:
            x = todo.popleft()
            for y in adj[x] - seen:
                seen.add(y)
                todo.append(y)
        return len(seen) == len(self._weights)

    @property
    def vertex_ids(self):
        return list(self._weights)

    @property
    def edges(self):
        return list(self._edges.values())

    def edge(self, eid):
        return self._edges[eid]

    def weight(self, v):
        return self._weights[v]

    def degree(self, v):
        return sum((e.u == v) + (e.v == v) for e in self._edges.values())

    def loops(self):
        return sum(e.is_loop for e in self._edges.values())

    def incident(self, v):
        return [e for e in self._edges.values() if v in (e.u, e.v)]

    def __eq__(self, other):
        return isinstance(other, MetricGraph) and self.to_json() == other.to_json()

    def __repr__(self):
        return f"MetricGraph(V={len(self._weights)}, E={len(self._edges)}, g={genus(self)})"

    def to_json(self):
        return {
            "vertices": [{"id": v, "weight": w} for v, w in self._weights.items()],
            "edges": [
                {"id": e.id, "ends": [e.u, e.v], "length": format_rational(e.length)}
                for e in self._edges.values()
            ],
        }

    @classmethod
    def from_json(cls, d):
        if not isinstance(d, dict) or "vertices" not in d:
            raise SchemaError("graph file needs a 'vertices' list")
        verts = []
        for i, v in enumerate(d["vertices"]):
            if not isinstance(v, dict) or "id" not in v:
                raise SchemaError(f"vertices[{i}].id missing")
            if "weight" not in v:
                raise SchemaError(f"vertices[{i}].weight missing")
            verts.append((str(v["id"]), v["weight"]))
        edges = []
        for i, e in enumerate(d.get("edges", [])):
            if not isinstance(e, dict) or "id" not in e:
                raise SchemaError(f"edges[{i}].id missing")
            ends = e.get("ends")
            if not isinstance(ends, list) or len(ends) != 2:
                raise SchemaError(f"edges[{i}].ends must list two vertex ids")
            if "length" not in e:
                raise SchemaError(f"edges[{i}].length missing")
            length = as_rational(str(e["length"]))
            if length <= 0:
                raise SchemaError(f"edges[{i}].length must be positive")
            edges.append(Edge(str(e["id"]), str(ends[0]), str(ends[1]), length))
        return cls(verts, edges)


@dataclass(frozen=True)
class GraphPoint:
    """A vertex, or a point strictly inside an edge at ``pos`` from its first end."""

    vertex: str | None = None
    edge: str | None = None
    pos: Fraction | None = None

    @classmethod
    def at_vertex(cls, v):
        return cls(vertex=v)

    @classmethod
    def on_edge(cls, e, pos):
        return cls(edge=e, pos=as_rational(pos))

    def sort_key(self):
        if self.vertex is not None:
            return (0, self.vertex, Fraction(0))
        return (1, self.edge, self.pos)

    def __str__(self):
        if self.vertex is not None:
            return self.vertex
        return f"{self.edge}@{format_rational(self.pos)}"


class GraphDivisor:
    """Finitely supported integer combination of graph points."""

    def __init__(self, coeffs: Mapping[GraphPoint, int] = ()):
        acc = defaultdict(int)
        for pt, c in dict(coeffs).items():
            acc[pt] += int(c)
        self._c = {pt: c for pt, c in sorted(acc.items(), key=lambda kv: kv[0].sort_key()) if c}

    def __getitem__(self, pt):
        return self._c.get(pt, 0)

    def items(self):
        return self._c.items()

    def __len__(self):
        return len(self._c)

    @property
    def degree(self):
        return sum(self._c.values())

    def __add__(self, other):
        acc = defaultdict(int, self._c)
        for pt, c in other.items():
            acc[pt] += c
        return GraphDivisor(acc)

    def __neg__(self):
        return GraphDivisor({pt: -c for pt, c in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, GraphDivisor) and self._c == other._c

    def is_effective(self):
        return all(c >= 0 for c in self._c.values())

    def to_dict(self):
        return {str(pt): c for pt, c in self._c.items()}

    def __repr__(self):
        return f"GraphDivisor({self.to_dict()})"


class PLFunction:
    """Continuous piecewise-affine function with integer slopes on a metric graph.

    Given by its value at each vertex and, per edge, the interior breakpoints
    ``(pos, value)`` measured from the edge's first endpoint.
    """

    def __init__(self, graph, vertex_values, breakpoints=None):
        self.graph = graph
        self.vertex_values = {}
        for v in graph.vertex_ids:
            if v not in vertex_values:
                raise SchemaError(f"vertex_values: missing value for vertex {v!r}")
            self.vertex_values[v] = as_rational(vertex_values[v])
        extra = set(vertex_values) - set(graph.vertex_ids)
        if extra:
            raise SchemaError(f"vertex_values: unknown vertex {sorted(extra)[0]!r}")
        self.breakpoints = {}
        for eid, pts in (breakpoints or {}).items():
            try:
                e = graph.edge(eid)
            except KeyError:
                raise SchemaError(f"edges: unknown edge {eid!r}") from None
            pts = [(as_rational(x), as_rational(y)) for x, y in pts]
            last = Fraction(0)
            for x, _ in pts:
                if not last < x < e.length:
                    raise SchemaError(f"edges.{eid}: breakpoint positions must increase strictly inside (0, length)")
                last = x
            self.breakpoints[eid] = pts
        self._pieces = {e.id: self._edge_pieces(e) for e in graph.edges}

    def _edge_pieces(self, e):
        pts = [(Fraction(0), self.vertex_values[e.u]), *self.breakpoints.get(e.id, []),
               (e.length, self.vertex_values[e.v])]
        pieces = []
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            s = (y1 - y0) / (x1 - x0)
            if s.denominator != 1:
                raise SchemaError(f"edge {e.id!r}: slope {format_rational(s)} on [{format_rational(x0)}, {format_rational(x1)}] is not an integer")
            pieces.append((x0, x1, int(s)))
        return pieces

    def pieces(self, eid):
        """``(start, end, slope)`` for each affine piece, slope in the increasing-pos direction."""
        return list(self._pieces[eid])

    def slopes(self):
        for ps in self._pieces.values():
            for _, _, s in ps:
                yield s

    def to_json(self):
        return {
            "vertex_values": {v: format_rational(x) for v, x in self.vertex_values.items()},
            "edges": {
                eid: [{"pos": format_rational(x), "val": format_rational(y)} for x, y in pts]
                for eid, pts in self.breakpoints.items() if pts
            },
        }

    @classmethod
    def from_json(cls, graph, d):
        if not isinstance(d, dict) or "vertex_values" not in d:
            raise SchemaError("function file needs 'vertex_values'")
        bps = {}
        for eid, pts in d.get("edges", {}).items():
            out = []
            for i, pt in enumerate(pts):
                if "pos" not in pt or "val" not in pt:
                    raise SchemaError(f"edges.{eid}[{i}] needs 'pos' and 'val'")
                out.append((str(pt["pos"]), str(pt["val"])))
            bps[eid] = out
        return cls(graph, {k: str(v) for k, v in d["vertex_values"].items()}, bps)


def genus(G):
    """First Betti number plus total vertex weight."""
    V = len(G.vertex_ids)
    E = len(G.edges)
    return (E - V + 1) + sum(G.weight(v) for v in G.vertex_ids)


def canonical_divisor(G):
    return GraphDivisor({
        GraphPoint.at_vertex(v): 2 * G.weight(v) - 2 + G.degree(v) for v in G.vertex_ids
    })


def divisor_of(F):
    """Sum of incoming slopes at every vertex and breakpoint."""
    acc = defaultdict(int)
    for e in F.graph.edges:
        ps = F.pieces(e.id)
        acc[GraphPoint.at_vertex(e.u)] -= ps[0][2]
        acc[GraphPoint.at_vertex(e.v)] += ps[-1][2]
        for (_, x, s_in), (_, _, s_out) in zip(ps, ps[1:]):
            acc[GraphPoint.on_edge(e.id, x)] += s_in - s_out
    return GraphDivisor(acc)


def is_canonical_section(F):
    return (divisor_of(F) + canonical_divisor(F.graph)).is_effective()


def max_abs_slope(F):
    return max((abs(s) for s in F.slopes()), default=0)


def has_genus_zero_leaf(G):
    return any(G.weight(v) == 0 and G.degree(v) == 1 for v in G.vertex_ids)


def is_stable(G):
    g = genus(G)
    if g < 2:
        raise PreconditionError(f"stability is only defined here for genus >= 2, got {g}")
    if len(G.vertex_ids) == 1 and not G.edges:
        return True
    return all(2 * G.weight(v) - 2 + G.degree(v) > 0 for v in G.vertex_ids)


@dataclass(frozen=True)
class StableStats:
    genus: int
    vertices: int
    edges: int
    loops: int
    max_degree: int

    @property
    def margins(self):
        g = self.genus
        return {
            "vertices": 2 * g - 2 - self.vertices,
            "edges": 3 * g - 3 - self.edges,
            "loops": g - self.loops,
            "max_degree": 2 * g - self.max_degree,
        }

    @property
    def holds(self):
        return all(m >= 0 for m in self.margins.values())


def stable_stats_check(G):
    """Vertex, edge, loop and valency counts against their stable-graph ceilings."""
    if not is_stable(G):
        raise PreconditionError("graph is not stable")
    return StableStats(
        genus(G), len(G.vertex_ids), len(G.edges), G.loops(),
        max(G.degree(v) for v in G.vertex_ids),
    )


def discrete_laplacian(G, f):
    """sum_v sum_{e = vw} (f(w) - f(v)) (v) on the unit-length model."""
    acc = defaultdict(int)
    for e in G.edges:
        if e.is_loop:
            continue
        acc[GraphPoint.at_vertex(e.u)] += f[e.v] - f[e.u]
        acc[GraphPoint.at_vertex(e.v)] += f[e.u] - f[e.v]
    return GraphDivisor(acc)


def star_mass_formula(F, center):
    """Sum of the end slopes (pointing inward) of F on a star around ``center``.

    The same number is recomputed as the total order of div(F) away from the
    leaves; a mismatch raises `InvariantBreach`.
    """
    G = F.graph
    leaves = [v for v in G.vertex_ids if v != center]
    for e in G.edges:
        if center not in (e.u, e.v) or e.is_loop:
            raise PreconditionError(f"not a star around {center!r}: edge {e.id!r}")
    if any(G.degree(v) != 1 for v in leaves):
        raise PreconditionError(f"not a star around {center!r}: every other vertex must be a leaf")
    total = 0
    for e in G.edges:
        ps = F.pieces(e.id)
        # slope at the leaf end, in the direction of the center
        total += ps[0][2] if e.v == center else -ps[-1][2]
    inner = sum(c for pt, c in divisor_of(F).items() if pt.vertex not in leaves)
    if inner != total:
        raise InvariantBreach(f"mass formula mismatch: end slopes {total}, interior order {inner}")
    return total


def check_dagger(G, variant=1):
    """Per-vertex hypotheses for the geometric torsion bound (variant 1 or 2)."""
    g = genus(G)
    if variant in (1, "one"):
        return all(g > 2 * G.weight(v) + G.degree(v) for v in G.vertex_ids)
    if variant in (2, "two"):
        return all(g > 2 * G.weight(v) + 2 * G.degree(v) - 2 for v in G.vertex_ids)
    raise ValueError(f"unknown variant {variant!r}")
