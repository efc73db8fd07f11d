"""Exact weighted multigraphs and their shortest-path metric.

All weights and distances are exact rationals.  Each graph keeps an
integer-scaled copy of its weights (common denominator cleared) so the
Dijkstra inner loop runs on machine integers; results convert back to
fractions on the way out.  Graphs are immutable after construction and
every operation here is a pure function.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple


class _Infinite:
    """Distance value for a disconnected pair.

    Compares strictly above every rational; addition saturates.
    """

    _instance: Optional["_Infinite"] = None

    def __new__(cls) -> "_Infinite":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("wdcolor.INF")

    def __add__(self, other: object) -> "_Infinite":
        return self

    __radd__ = __add__

    def __mul__(self, other: object) -> "_Infinite":
        return self

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return "INF"


INF = _Infinite()

#: A distance: an exact nonnegative rational, or INF for disconnected pairs.
ExtendedDistance = object


def is_finite(d: object) -> bool:
    return d is not INF


def as_fraction(x: object) -> Fraction:
    """Coerce ints, strings ("3/4" or "0.75"), and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("refusing float weight %r; pass a string or Fraction" % (x,))
    raise TypeError("cannot interpret %r as an exact rational" % (x,))


def frac_str(x: object) -> str:
    if x is INF:
        return "inf"
    f = x if isinstance(x, Fraction) else Fraction(x)
    return str(f)


def ceil_frac(x: Fraction) -> int:
    """Exact ceiling of a rational."""
    return math.ceil(x)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


class GraphError(ValueError):
    """Invalid graph input (unknown vertex, bad weight, bad parameter)."""


class WeightedGraph:
    """Finite multigraph with strictly positive exact-rational edge weights.

    Parallel edges are permitted; self-loops are not.  Vertex ids are
    nonnegative integers and need not be contiguous.
    """

    __slots__ = ("vertices", "edges", "names", "_vset", "_adj", "_scale", "_sadj")

    def __init__(
        self,
        vertices: Iterable[int] = (),
        edges: Iterable[Tuple[int, int, object]] = (),
        names: Optional[Dict[int, str]] = None,
    ):
        vset = set()
        for v in vertices:
            if not isinstance(v, int) or v < 0:
                raise GraphError("vertex ids must be nonnegative integers, got %r" % (v,))
            vset.add(v)
        elist: List[Tuple[int, int, Fraction]] = []
        for (u, v, w) in edges:
            wf = as_fraction(w)
            if wf <= 0:
                raise GraphError("edge weight must be positive, got %s on (%s,%s)" % (wf, u, v))
            if u == v:
                raise GraphError("self-loop at vertex %s" % (u,))
            if u not in vset or v not in vset:
                raise GraphError("edge (%s,%s) references an unknown vertex" % (u, v))
            elist.append((u, v, wf))
        self.vertices: Tuple[int, ...] = tuple(sorted(vset))
        self.edges: Tuple[Tuple[int, int, Fraction], ...] = tuple(elist)
        self.names = dict(names) if names else {}
        self._vset: FrozenSet[int] = frozenset(vset)
        adj: Dict[int, List[Tuple[int, Fraction]]] = {v: [] for v in self.vertices}
        for (u, v, w) in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        self._adj = adj
        scale = 1
        for (_, _, w) in self.edges:
            scale = _lcm(scale, w.denominator)
        self._scale = scale
        self._sadj: Dict[int, List[Tuple[int, int]]] = {
            v: [(n, int(w * scale)) for (n, w) in nbrs] for v, nbrs in adj.items()
        }

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    def has_vertex(self, v: int) -> bool:
        return v in self._vset

    def vertex_set(self) -> FrozenSet[int]:
        return self._vset

    def neighbors(self, v: int) -> List[Tuple[int, Fraction]]:
        return self._adj[v]

    def min_edge_weight(self) -> Optional[Fraction]:
        """Smallest edge weight, or None for an edgeless graph."""
        if not self.edges:
            return None
        return min(w for (_, _, w) in self.edges)

    def max_edge_weight(self) -> Optional[Fraction]:
        if not self.edges:
            return None
        return max(w for (_, _, w) in self.edges)

    # -- derived graphs ----------------------------------------------------

    def induced(self, keep: Iterable[int]) -> "WeightedGraph":
        ks = set(keep)
        unknown = ks - self._vset
        if unknown:
            raise GraphError("induced() got unknown vertices %s" % sorted(unknown))
        return WeightedGraph(
            ks,
            [(u, v, w) for (u, v, w) in self.edges if u in ks and v in ks],
            {v: n for v, n in self.names.items() if v in ks},
        )

    def without(self, drop: Iterable[int]) -> "WeightedGraph":
        ds = set(drop)
        return self.induced(self._vset - ds)

    # -- metric ------------------------------------------------------------

    def distances_from(
        self,
        sources: Iterable[int],
        radius: object = None,
        within: Optional[FrozenSet[int]] = None,
        targets: Optional[Set[int]] = None,
        max_weight: object = None,
    ) -> Dict[int, Fraction]:
        """Multi-source Dijkstra.  Returns {vertex: exact distance}.

        radius: stop exploring past this distance (inclusive).
        within: restrict the walk to this vertex set (induced subgraph).
        targets: stop early once all of these are settled.
        max_weight: ignore edges heavier than this.
        """
        srcs = [s for s in sources]
        for s in srcs:
            if s not in self._vset:
                raise GraphError("unknown source vertex %s" % (s,))
        scale = self._scale
        rnum = rden = None
        if radius is not None:
            r = as_fraction(radius) * scale
            rnum, rden = r.numerator, r.denominator
        wnum = wden = None
        if max_weight is not None:
            mw = as_fraction(max_weight) * scale
            wnum, wden = mw.numerator, mw.denominator
        sadj = self._sadj
        dist: Dict[int, int] = {}
        remaining = set(targets) if targets is not None else None
        heap: List[Tuple[int, int]] = []
        for s in srcs:
            if within is not None and s not in within:
                continue
            if s not in dist or dist[s] > 0:
                dist[s] = 0
                heapq.heappush(heap, (0, s))
        settled: Set[int] = set()
        while heap:
            d, v = heapq.heappop(heap)
            if v in settled or dist.get(v, -1) != d:
                continue
            settled.add(v)
            if remaining is not None:
                remaining.discard(v)
                if not remaining:
                    break
            for (n, w) in sadj[v]:
                if within is not None and n not in within:
                    continue
                if wnum is not None and w * wden > wnum:
                    continue
                nd = d + w
                if rnum is not None and nd * rden > rnum:
                    continue
                if n not in dist or nd < dist[n]:
                    dist[n] = nd
                    heapq.heappush(heap, (nd, n))
        return {v: Fraction(d, scale) for v, d in dist.items() if v in settled}

    def shortest_distance(self, u: int, v: int) -> ExtendedDistance:
        """Exact shortest-path distance; INF if u, v are disconnected."""
        if u not in self._vset or v not in self._vset:
            raise GraphError("unknown vertex in shortest_distance(%s, %s)" % (u, v))
        if u == v:
            return Fraction(0)
        d = self.distances_from([u], targets={v})
        return d.get(v, INF)

    def connected_components(self) -> List[Tuple[int, ...]]:
        seen: Set[int] = set()
        out: List[Tuple[int, ...]] = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = sorted(self.distances_from([v]).keys())
            seen.update(comp)
            out.append(tuple(comp))
        return out

    def is_connected(self) -> bool:
        return len(self) <= 1 or len(self.connected_components()) == 1


def neighborhood(g: WeightedGraph, s: Iterable[int], r: object) -> Set[int]:
    """All vertices at distance <= r from the set s (s itself included)."""
    rf = as_fraction(r)
    if rf < 0:
        raise GraphError("neighborhood radius must be nonnegative")
    return set(g.distances_from(s, radius=rf).keys())


def weak_diameter(g: WeightedGraph, s: Iterable[int]) -> ExtendedDistance:
    """Sup of pairwise distances measured in the full graph g.

    0 for a set with at most one vertex; INF if s meets two components.
    """
    ss = sorted(set(s))
    for v in ss:
        if not g.has_vertex(v):
            raise GraphError("unknown vertex %s in weak_diameter" % (v,))
    if len(ss) <= 1:
        return Fraction(0)
    best = Fraction(0)
    tgt = set(ss)
    for u in ss:
        d = g.distances_from([u], targets=set(tgt))
        for v in ss:
            dv = d.get(v)
            if dv is None:
                return INF
            if dv > best:
                best = dv
    return best


# -- subdivision graph ------------------------------------------------------


@dataclass(frozen=True)
class Subdivision:
    """The graph (g, r)-subdivision together with its bookkeeping.

    graph: the subdivided weighted graph; original vertex ids unchanged.
    embedding: map original vertex -> vertex of `graph` (the identity).
    edge_paths: per original edge, the two replacement paths as vertex
        tuples running from the first end to the second.
    """

    graph: WeightedGraph
    embedding: Dict[int, int]
    edge_paths: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]


def subdivision_graph(g: WeightedGraph, r: object) -> Subdivision:
    """Replace each edge by two internally disjoint paths of ceil(w/r) edges.

    On the path leaving end x the edge at x gets weight w - r*(ceil(w/r)-1)
    and all others get weight r, so every new weight lies in (0, r] and each
    path has length exactly w.  Distances between original vertices are
    preserved exactly.
    """
    rf = as_fraction(r)
    if rf <= 0:
        raise GraphError("subdivision parameter must be positive")
    verts: List[int] = list(g.vertices)
    next_id = (max(g.vertices) + 1) if g.vertices else 0
    edges: List[Tuple[int, int, Fraction]] = []
    paths: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = []
    for (u, v, w) in g.edges:
        k = ceil_frac(w / rf)
        first = w - rf * (k - 1)
        pair: List[Tuple[int, ...]] = []
        for (a, b) in ((u, v), (v, u)):
            path = [a]
            prev = a
            wt = first
            for _ in range(k - 1):
                nid = next_id
                next_id += 1
                verts.append(nid)
                edges.append((prev, nid, wt))
                path.append(nid)
                prev = nid
                wt = rf
            edges.append((prev, b, wt))
            path.append(b)
            pair.append(tuple(path))
        paths.append((pair[0], pair[1]))
    sub = WeightedGraph(verts, edges, dict(g.names))
    return Subdivision(sub, {v: v for v in g.vertices}, tuple(paths))


# -- hop graphs (power graphs live here) -------------------------------------


class HopGraph:
    """Simple unweighted graph; distances are hop counts."""

    __slots__ = ("vertices", "_adj", "_vset")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Tuple[int, int]]):
        vs = sorted(set(vertices))
        adj: Dict[int, Set[int]] = {v: set() for v in vs}
        for (u, v) in edges:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        self.vertices: Tuple[int, ...] = tuple(vs)
        self._adj: Dict[int, Tuple[int, ...]] = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._vset: FrozenSet[int] = frozenset(vs)

    def __len__(self) -> int:
        return len(self.vertices)

    def has_vertex(self, v: int) -> bool:
        return v in self._vset

    def vertex_set(self) -> FrozenSet[int]:
        return self._vset

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edge_list(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in self.vertices for v in self._adj[u] if u < v]

    def hop_distances(
        self,
        sources: Iterable[int],
        cutoff: Optional[int] = None,
        targets: Optional[Set[int]] = None,
        within: Optional[FrozenSet[int]] = None,
    ) -> Dict[int, int]:
        """BFS hop distances, optionally depth-capped / early-stopped / induced."""
        frontier = [s for s in sources if within is None or s in within]
        dist: Dict[int, int] = {s: 0 for s in frontier}
        remaining = set(targets) - set(frontier) if targets is not None else None
        depth = 0
        while frontier:
            if remaining is not None and not remaining:
                break
            if cutoff is not None and depth >= cutoff:
                break
            depth += 1
            nxt: List[int] = []
            for v in frontier:
                for n in self._adj[v]:
                    if n in dist:
                        continue
                    if within is not None and n not in within:
                        continue
                    dist[n] = depth
                    nxt.append(n)
                    if remaining is not None:
                        remaining.discard(n)
            frontier = nxt
        return dist

    def components(self, within: Optional[FrozenSet[int]] = None) -> List[Tuple[int, ...]]:
        """Connected components (restricted to `within` if given), each sorted,
        listed by ascending minimum vertex."""
        pool = self.vertices if within is None else sorted(within & self._vset)
        seen: Set[int] = set()
        out: List[Tuple[int, ...]] = []
        wset = frozenset(pool)
        for v in pool:
            if v in seen:
                continue
            comp = sorted(self.hop_distances([v], within=wset).keys())
            seen.update(comp)
            out.append(tuple(comp))
        return out


class PowerGraph(HopGraph):
    """The simple graph joining vertices of the subdivision at metric
    distance <= ell; carries its metric host for weak-diameter measurement."""

    __slots__ = ("base", "metric", "ell", "original_vertices")

    def __init__(self, base: WeightedGraph, sub: Subdivision, ell: Fraction,
                 edges: Iterable[Tuple[int, int]]):
        super().__init__(sub.graph.vertices, edges)
        self.base = base
        self.metric = sub.graph
        self.ell = ell
        self.original_vertices = base.vertex_set()


def power_graph(g: WeightedGraph, ell: object) -> PowerGraph:
    """(g, ell) power graph: subdivide at ell, join pairs at distance <= ell."""
    lf = as_fraction(ell)
    if lf <= 0:
        raise GraphError("power graph scale must be positive")
    sub = subdivision_graph(g, lf)
    sg = sub.graph
    edges: List[Tuple[int, int]] = []
    for v in sg.vertices:
        for n in sg.distances_from([v], radius=lf):
            if n > v:
                edges.append((v, n))
    return PowerGraph(g, sub, lf, edges)


# -- edge-list file format ----------------------------------------------------


def parse_edge_list(text: str) -> WeightedGraph:
    """Parse the "u v w" edge-list format.

    One edge per line, weight a decimal or p/q rational; '#' starts a
    comment; a line holding a single vertex id declares an isolated vertex.
    """
    verts: Set[int] = set()
    edges: List[Tuple[int, int, Fraction]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if len(parts) == 1:
                verts.add(int(parts[0]))
            elif len(parts) == 3:
                u, v = int(parts[0]), int(parts[1])
                w = as_fraction(parts[2])
                verts.add(u)
                verts.add(v)
                edges.append((u, v, w))
            else:
                raise ValueError("expected 'u v w' or a bare vertex id")
        except (ValueError, TypeError) as exc:
            raise GraphError("edge list line %d: %s" % (lineno, exc)) from exc
    return WeightedGraph(verts, edges)


def write_edge_list(g: WeightedGraph) -> str:
    lines: List[str] = []
    touched: Set[int] = set()
    for (u, v, w) in g.edges:
        lines.append("%d %d %s" % (u, v, frac_str(w)))
        touched.add(u)
        touched.add(v)
    for v in g.vertices:
        if v not in touched:
            lines.append("%d" % v)
    return "\n".join(lines) + ("\n" if lines else "")
