"""Rooted tree decompositions and the condensation machinery built on them.

A condensation compresses everything hanging below a frontier of tree edges
into small certified gadgets: parts with a small adhesion become layered
forests recording how the adhesion merges as the allowed search radius
grows, and parts with a large adhesion become direct shortcut edges.  A
coloring of the condensed graph then lifts back to a zone around the
frontier with a computable weak-diameter bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from wdcolor.graph import (
    GraphError,
    PowerGraph,
    WeightedGraph,
    as_fraction,
    ceil_frac,
    frac_str,
    neighborhood,
)
from wdcolor.partition import (
    Coloring,
    ContractViolation,
    VerificationReport,
    check_weak_diameter,
    verify_weak_diameter,
)

TreeEdge = Tuple[int, int]  # (parent, child)


def con_color_bound(ell: object, n: object, m: int, theta: int, mu: object) -> Fraction:
    """Weak-diameter bound for a lifted condensation coloring:
    (28 + 8*mu/ell)*theta + (16*(theta+mu/ell)*(3*theta+1) + 4)
    + 8*(theta+mu/ell)*(3*theta+1)*n."""
    lf = as_fraction(ell)
    nf = as_fraction(n)
    mf = as_fraction(mu)
    if lf <= 0 or nf <= 0 or mf < 0 or theta < 1:
        raise GraphError("invalid lift-bound parameters")
    if m < 2:
        raise GraphError("lift bound needs m >= 2")
    t = theta + mf / lf
    return (28 + 8 * mf / lf) * theta + (16 * t * (3 * theta + 1) + 4) + 8 * t * (3 * theta + 1) * nf


class RootedTreeDecomposition:
    """Tree of bags with parent pointers; edges identified as (parent, child)."""

    def __init__(self, bags: Dict[int, Iterable[int]], edges: Iterable[Tuple[int, int]], root: int):
        bag_map = {int(t): frozenset(bs) for t, bs in bags.items()}
        if root not in bag_map:
            raise GraphError("root %s has no bag" % (root,))
        adj: Dict[int, Set[int]] = {t: set() for t in bag_map}
        n_edges = 0
        for (a, b) in edges:
            if a not in bag_map or b not in bag_map:
                raise GraphError("tree edge (%s,%s) references an unknown node" % (a, b))
            if a == b or b in adj[a]:
                raise GraphError("bad tree edge (%s,%s)" % (a, b))
            adj[a].add(b)
            adj[b].add(a)
            n_edges += 1
        if n_edges != len(bag_map) - 1:
            raise GraphError("decomposition graph is not a tree (%d nodes, %d edges)" % (len(bag_map), n_edges))
        parent: Dict[int, Optional[int]] = {root: None}
        order = [root]
        for t in order:
            for s in sorted(adj[t]):
                if s not in parent:
                    parent[s] = t
                    order.append(s)
        if len(order) != len(bag_map):
            raise GraphError("decomposition tree is disconnected")
        self.bags: Dict[int, FrozenSet[int]] = bag_map
        self.root: int = root
        self.parent: Dict[int, Optional[int]] = parent
        self.nodes: Tuple[int, ...] = tuple(sorted(bag_map))
        children: Dict[int, List[int]] = {t: [] for t in bag_map}
        for t in self.nodes:
            p = parent[t]
            if p is not None:
                children[p].append(t)
        self.children: Dict[int, Tuple[int, ...]] = {t: tuple(sorted(cs)) for t, cs in children.items()}
        self.tree_edges: Tuple[TreeEdge, ...] = tuple(
            sorted((parent[t], t) for t in self.nodes if parent[t] is not None)
        )
        self._subtree_cache: Dict[int, Tuple[int, ...]] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def check_edge(self, e: TreeEdge) -> TreeEdge:
        p, c = e
        if self.parent.get(c) != p:
            raise GraphError("(%s,%s) is not a (parent, child) tree edge" % (p, c))
        return (p, c)

    def adhesion_of(self, e: TreeEdge) -> FrozenSet[int]:
        p, c = self.check_edge(e)
        return self.bags[p] & self.bags[c]

    def subtree_nodes(self, e: TreeEdge) -> Tuple[int, ...]:
        """Nodes of the component of T - e away from the root."""
        p, c = self.check_edge(e)
        if c not in self._subtree_cache:
            out = [c]
            for t in out:
                out.extend(self.children[t])
            self._subtree_cache[c] = tuple(sorted(out))
        return self._subtree_cache[c]

    def subtree_vertices(self, e: TreeEdge) -> FrozenSet[int]:
        return self.bag_union(self.subtree_nodes(e))

    def bag_union(self, nodes: Iterable[int]) -> FrozenSet[int]:
        out: Set[int] = set()
        for t in nodes:
            out |= self.bags[t]
        return frozenset(out)

    def all_vertices(self) -> FrozenSet[int]:
        return self.bag_union(self.nodes)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    @property
    def adhesion(self) -> int:
        if not self.tree_edges:
            return 0
        return max(len(self.adhesion_of(e)) for e in self.tree_edges)

    def reroot(self, new_root: int) -> "RootedTreeDecomposition":
        if new_root not in self.bags:
            raise GraphError("unknown node %s" % (new_root,))
        und = [(p, c) for (p, c) in self.tree_edges]
        return RootedTreeDecomposition(dict(self.bags), und, new_root)

    def restrict(self, nodes: Iterable[int], root: int) -> "RootedTreeDecomposition":
        keep = set(nodes)
        bags = {t: self.bags[t] for t in keep}
        edges = [(p, c) for (p, c) in self.tree_edges if p in keep and c in keep]
        return RootedTreeDecomposition(bags, edges, root)

    def subdivide_edge(self, e: TreeEdge, new_node: int, bag: Iterable[int]) -> "RootedTreeDecomposition":
        p, c = self.check_edge(e)
        if new_node in self.bags:
            raise GraphError("node id %s already used" % (new_node,))
        bags = dict(self.bags)
        bags[new_node] = frozenset(bag)
        edges = [(a, b) for (a, b) in self.tree_edges if (a, b) != (p, c)]
        edges += [(p, new_node), (new_node, c)]
        return RootedTreeDecomposition(bags, edges, self.root)

    def to_json_dict(self) -> dict:
        return {
            "nodes": [{"id": t, "bag": sorted(self.bags[t])} for t in self.nodes],
            "edges": [[p, c] for (p, c) in self.tree_edges],
            "root": self.root,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "RootedTreeDecomposition":
        try:
            bags = {int(nd["id"]): [int(v) for v in nd["bag"]] for nd in data["nodes"]}
            edges = [(int(a), int(b)) for a, b in data["edges"]]
            root = int(data["root"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError("malformed tree-decomposition JSON: %s" % (exc,))
        return RootedTreeDecomposition(bags, edges, root)


def validate_td(g: WeightedGraph, td: RootedTreeDecomposition) -> dict:
    """Check the decomposition axioms; report-based, never raises."""
    failures: List[str] = []
    covered = td.all_vertices()
    missing = g.vertex_set() - covered
    if missing:
        failures.append("vertices not in any bag: %s" % sorted(missing)[:5])
    alien = covered - g.vertex_set()
    if alien:
        failures.append("bags contain unknown vertices: %s" % sorted(alien)[:5])
    edges_ok = True
    for (u, v, _) in g.edges:
        if not any(u in b and v in b for b in td.bags.values()):
            failures.append("edge (%s,%s) is in no bag" % (u, v))
            edges_ok = False
            break
    connected_ok = True
    for v in g.vertices:
        holders = {t for t in td.nodes if v in td.bags[t]}
        if not holders:
            continue
        seen = {min(holders)}
        stack = [min(holders)]
        while stack:
            t = stack.pop()
            for s in td.children[t] + ((td.parent[t],) if td.parent[t] is not None else ()):
                if s in holders and s not in seen:
                    seen.add(s)
                    stack.append(s)
        if seen != holders:
            failures.append("bags containing vertex %s are not connected in the tree" % (v,))
            connected_ok = False
            break
    return {
        "ok": not failures,
        "coverageOk": not missing and not alien,
        "edgesOk": edges_ok,
        "connectedOk": connected_ok,
        "width": td.width if td.bags else -1,
        "adhesion": td.adhesion,
        "failures": failures,
    }


@dataclass(frozen=True)
class PartitionChain:
    """Partitions of a ground set indexed by level; level 0 is singletons,
    each level refines the next, and only change points are stored."""

    ground: Tuple[int, ...]
    eps: Fraction
    max_level: int
    partitions: Dict[int, Tuple[FrozenSet[int], ...]]  # change levels (and 0) -> parts

    def partition_at(self, i: int) -> Tuple[FrozenSet[int], ...]:
        if i < 0 or i > self.max_level:
            raise GraphError("level %s outside 0..%s" % (i, self.max_level))
        best = max(k for k in self.partitions if k <= i)
        return self.partitions[best]

    @property
    def change_levels(self) -> Tuple[int, ...]:
        return tuple(sorted(k for k in self.partitions if k > 0))

    def verify(self) -> None:
        if 0 not in self.partitions:
            raise ContractViolation("chain misses level 0")
        if self.partitions[0] != tuple(frozenset([x]) for x in self.ground):
            raise ContractViolation("level 0 is not the singleton partition")
        levels = sorted(self.partitions)
        gset = set(self.ground)
        for k in levels:
            parts = self.partitions[k]
            seen: Set[int] = set()
            for part in parts:
                if part & seen:
                    raise ContractViolation("level %s parts overlap" % (k,))
                seen |= part
            if seen != gset:
                raise ContractViolation("level %s does not cover the ground set" % (k,))
        for a, b in zip(levels, levels[1:]):
            coarse = {x: i for i, part in enumerate(self.partitions[b]) for x in part}
            for part in self.partitions[a]:
                if len({coarse[x] for x in part}) != 1:
                    raise ContractViolation("level %s does not refine level %s" % (a, b))


class _DSU:
    def __init__(self, items: Iterable[int]):
        self.up = {x: x for x in items}

    def find(self, x: int) -> int:
        while self.up[x] != x:
            self.up[x] = self.up[self.up[x]]
            x = self.up[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.up[rb] = ra
        return True


def adhesion_partition_chain(
    g: WeightedGraph, td: RootedTreeDecomposition, e: TreeEdge, eps: object, max_level: int
) -> PartitionChain:
    """Level-i partition of the adhesion X_e: two members are together when a
    path inside the subtree part joins them using only vertices within i*eps
    of X_e and edges of weight at most i*eps.

    A path works at level i exactly when its bottleneck (the largest of its
    vertex distances to X_e and its edge weights) is at most i*eps, so the
    change levels come out of one bottleneck union-find sweep.
    """
    ef = as_fraction(eps)
    if ef <= 0 or max_level < 0:
        raise GraphError("need positive eps and nonnegative max level")
    td.check_edge(e)
    x_e = td.adhesion_of(e)
    part = td.subtree_vertices(e)
    ground = tuple(sorted(x_e))
    parts0 = tuple(frozenset([x]) for x in ground)
    partitions: Dict[int, Tuple[FrozenSet[int], ...]] = {0: parts0}
    if len(ground) > 1 and max_level > 0:
        radius = ef * max_level
        dist = g.distances_from(ground, radius=radius, within=part)
        events: List[Tuple[Fraction, int, int]] = []
        for (u, v, w) in g.edges:
            if u in dist and v in dist and u in part and v in part:
                t = max(w, dist[u], dist[v])
                if t <= radius:
                    events.append((t, min(u, v), max(u, v)))
        events.sort()
        dsu = _DSU(dist.keys())
        marks = {x: x for x in ground}  # DSU root -> min ground member, where present

        def snapshot() -> Tuple[FrozenSet[int], ...]:
            groups: Dict[int, Set[int]] = {}
            for x in ground:
                groups.setdefault(dsu.find(x), set()).add(x)
            return tuple(sorted((frozenset(s) for s in groups.values()), key=min))

        idx = 0
        while idx < len(events):
            t = events[idx][0]
            level = max(1, ceil_frac(t / ef))
            if level > max_level:
                break
            changed = False
            while idx < len(events) and max(1, ceil_frac(events[idx][0] / ef)) == level:
                _, u, v = events[idx]
                ru, rv = dsu.find(u), dsu.find(v)
                if ru != rv:
                    mu_, mv_ = marks.get(ru), marks.get(rv)
                    dsu.union(u, v)
                    r = dsu.find(u)
                    if mu_ is not None and mv_ is not None:
                        changed = True
                    keep = [m for m in (mu_, mv_) if m is not None]
                    if keep:
                        marks[r] = min(keep)
                idx += 1
            if changed:
                partitions[level] = snapshot()
    chain = PartitionChain(ground, ef, max_level, partitions)
    chain.verify()
    return chain


HVertex = Tuple[int, FrozenSet[int]]  # (level, part)


@dataclass(frozen=True)
class Hierarchy:
    """Layered forest over the change levels of a partition chain.  Level-0
    vertices (the base B) are the singletons of the ground set; each part
    links to its parent at the next recorded level."""

    ground: Tuple[int, ...]
    levels: Tuple[int, ...]
    parts: Dict[int, Tuple[FrozenSet[int], ...]]
    edges: Tuple[Tuple[HVertex, HVertex, Fraction], ...]
    ell: Fraction
    eps: Fraction
    theta: int
    mu: Fraction

    def vertices(self) -> List[HVertex]:
        return [(i, y) for i in self.levels for y in self.parts[i]]

    def base(self) -> List[HVertex]:
        return [(0, y) for y in self.parts[0]]

    def _as_weighted_graph(self) -> Tuple[WeightedGraph, Dict[HVertex, int]]:
        vs = self.vertices()
        ids = {v: i for i, v in enumerate(sorted(vs, key=lambda v: (v[0], min(v[1]) if v[1] else -1)))}
        edges = [(ids[a], ids[b], w) for (a, b, w) in self.edges]
        return WeightedGraph(ids.values(), edges), ids

    def verify(self) -> None:
        half = self.ell / 2
        for (_, _, w) in self.edges:
            if not 0 < w <= half:
                raise ContractViolation("hierarchy edge weight %s outside (0, %s]" % (w, half))
        if not self.ground:
            return
        h, ids = self._as_weighted_graph()
        base_ids = [ids[v] for v in self.base()]
        reach = h.distances_from(base_ids, radius=half)
        if set(reach) != set(ids.values()):
            raise ContractViolation("hierarchy vertex farther than %s from the base" % (half,))
        for comp in h.connected_components():
            src = comp[0]
            dist = h.distances_from([src], within=comp)
            for v in comp:
                if dist[v] > self.ell:
                    raise ContractViolation(
                        "hierarchy component pair at distance %s > %s" % (frac_str(dist[v]), self.ell)
                    )
        n_base = len(self.parts[0])
        n_upper = sum(len(self.parts[i]) for i in self.levels if i != 0)
        if n_upper > n_base * n_base:
            raise ContractViolation("hierarchy has %d non-base vertices > |B|^2 = %d" % (n_upper, n_base**2))


def build_hierarchy(chain: PartitionChain, ell: object, theta: int, mu: object) -> Hierarchy:
    """Assemble the layered forest for a chain; levels are {0,1} plus the
    chain's change levels, edge weights (j-i)*eps / (8*(theta+mu/ell))."""
    lf = as_fraction(ell)
    mf = as_fraction(mu)
    if chain.eps > lf:
        raise GraphError("eps %s exceeds ell %s" % (chain.eps, lf))
    if theta < 1 or mf < 0:
        raise GraphError("need theta >= 1 and mu >= 0")
    if chain.max_level < 1:
        raise GraphError("hierarchy needs a chain reaching level 1")
    levels = tuple(sorted({0, 1} | {i for i in chain.change_levels if 1 <= i <= chain.max_level}))
    parts = {i: chain.partition_at(i) for i in levels}
    unit = chain.eps / (8 * (theta + mf / lf))
    edges: List[Tuple[HVertex, HVertex, Fraction]] = []
    for i, j in zip(levels, levels[1:]):
        parent_of = {x: yj for yj in parts[j] for x in yj}
        for yi in parts[i]:
            yj = parent_of[min(yi)]
            edges.append(((i, yi), (j, yj), (j - i) * unit))
    h = Hierarchy(chain.ground, levels, parts, tuple(edges), lf, chain.eps, theta, mf)
    h.verify()
    return h


@dataclass(frozen=True)
class HierarchyAttachment:
    tree_edge: TreeEdge
    adhesion: FrozenSet[int]
    part_vertices: FrozenSet[int]
    chain: PartitionChain
    hierarchy: Hierarchy
    vertex_ids: Dict[HVertex, int]  # level-0 parts map to original vertex ids


@dataclass(frozen=True)
class ShortcutAttachment:
    tree_edge: TreeEdge
    adhesion: FrozenSet[int]
    part_vertices: FrozenSet[int]
    reach: FrozenSet[int]  # ball of radius ell around X_e inside the part
    shortcuts: Tuple[Tuple[int, int, Fraction], ...]


@dataclass(frozen=True)
class Condensation:
    g: WeightedGraph
    td: RootedTreeDecomposition
    g0: WeightedGraph
    u_e: Tuple[TreeEdge, ...]
    u_e_prime: Tuple[TreeEdge, ...]
    ell: Fraction
    theta: int
    mu: Fraction
    eps: Fraction
    t0_nodes: Tuple[int, ...]
    t0_vertices: FrozenSet[int]
    base_vertices: FrozenSet[int]  # V(G0) shared with V(G)
    hierarchies: Dict[TreeEdge, HierarchyAttachment]
    shortcut_parts: Dict[TreeEdge, ShortcutAttachment]


def condense(
    g: WeightedGraph,
    td: RootedTreeDecomposition,
    u_e: Iterable[TreeEdge],
    u_e_prime: Iterable[TreeEdge],
    ell: object,
    theta: int,
    mu: object,
) -> Condensation:
    """Build the condensed graph over the frontier u_e: the root side plus,
    per frontier edge, either an attached hierarchy forest (u_e_prime) or
    the radius-ell fringe with distance-scaled shortcut edges."""
    lf = as_fraction(ell)
    mf = as_fraction(mu)
    if theta < 1 or lf <= 0 or mf < 0:
        raise GraphError("need theta >= 1, ell > 0, mu >= 0")
    mw = g.max_edge_weight()
    if mw is not None and mw > lf:
        raise GraphError("edge weight %s exceeds ell %s" % (mw, lf))
    frontier = tuple(sorted(td.check_edge(e) for e in set(u_e)))
    prime = tuple(sorted(td.check_edge(e) for e in set(u_e_prime)))
    if set(prime) - set(frontier):
        raise GraphError("u_e_prime must be a subset of u_e")
    removed: Set[int] = set()
    for e in frontier:
        removed.update(td.subtree_nodes(e))
    t0_nodes = tuple(t for t in td.nodes if t not in removed)
    for (p, c) in frontier:
        if p in removed:
            raise GraphError(
                "frontier edge (%s,%s) hangs below another frontier edge" % (p, c)
            )
    for e in prime:
        if len(td.adhesion_of(e)) > theta:
            raise GraphError("adhesion of %s has more than theta=%d vertices" % (e, theta))
    ew = g.min_edge_weight()
    eps = ew if ew is not None else lf
    max_level = ceil_frac((3 * lf + mf) / eps)

    t0_vertices = td.bag_union(t0_nodes)
    base: Set[int] = set(t0_vertices)
    shortcut_parts: Dict[TreeEdge, ShortcutAttachment] = {}
    extra_edges: List[Tuple[int, int, Fraction]] = []
    names: Dict[int, str] = {}
    for e in frontier:
        if e in prime:
            continue
        x_e = td.adhesion_of(e)
        part = td.subtree_vertices(e)
        reach = frozenset(g.distances_from(sorted(x_e), radius=lf, within=part)) if x_e else frozenset()
        base |= reach
        fringe = sorted(reach - x_e)
        fset = set(fringe)
        shortcuts: List[Tuple[int, int, Fraction]] = []
        for u in fringe:
            du = g.distances_from([u], radius=3 * lf + mf, within=part)
            for v, d in du.items():
                if v in fset and v > u:
                    shortcuts.append((u, v, lf * d / (3 * lf + mf)))
        shortcuts.sort()
        extra_edges.extend(shortcuts)
        shortcut_parts[e] = ShortcutAttachment(e, x_e, part, reach, tuple(shortcuts))

    hierarchies: Dict[TreeEdge, HierarchyAttachment] = {}
    next_id = max(g.vertices) + 1 if g.vertices else 0
    for e in prime:
        x_e = td.adhesion_of(e)
        part = td.subtree_vertices(e)
        chain = adhesion_partition_chain(g, td, e, eps, max_level)
        hier = build_hierarchy(chain, lf, theta, mf)
        ids: Dict[HVertex, int] = {}
        for i in hier.levels:
            for y in hier.parts[i]:
                if i == 0:
                    ids[(0, y)] = min(y)
                else:
                    ids[(i, y)] = next_id
                    names[next_id] = "part %s at level %d below %s" % (sorted(y), i, (e,))
                    next_id += 1
        for (a, b, w) in hier.edges:
            extra_edges.append((ids[a], ids[b], w))
        hierarchies[e] = HierarchyAttachment(e, x_e, part, chain, hier, ids)

    vertices = set(base)
    for att in hierarchies.values():
        vertices.update(att.vertex_ids.values())
    base_graph = g.induced(base)
    g0 = WeightedGraph(vertices, list(base_graph.edges) + extra_edges, names)
    mw0 = g0.max_edge_weight()
    if mw0 is not None and mw0 > lf:
        raise ContractViolation("condensed graph carries weight %s > ell" % (mw0,))
    return Condensation(
        g=g, td=td, g0=g0, u_e=frontier, u_e_prime=prime, ell=lf, theta=theta, mu=mf,
        eps=eps, t0_nodes=t0_nodes, t0_vertices=t0_vertices, base_vertices=frozenset(base),
        hierarchies=hierarchies, shortcut_parts=shortcut_parts,
    )


@dataclass(frozen=True)
class LiftResult:
    coloring: Coloring
    bound: Fraction
    n_claimed: Fraction
    report: VerificationReport
    zone_of: Dict[int, int]


def lift_condensation_coloring(
    cond: Condensation,
    c0: Coloring,
    m: int,
    deleted: Iterable[int] = (),
    centers_per_big_adhesion: Optional[Dict[TreeEdge, Iterable[int]]] = None,
    n_claimed: object = None,
    power: Optional[PowerGraph] = None,
    what: str = "condensation lift",
    exact: bool = True,
) -> LiftResult:
    """Pull a coloring of the condensed graph back to the frontier zone.

    Vertices of the root side and the fringe keep their condensed color; a
    vertex at distance d of an adhesion with a hierarchy inherits the color
    of the hierarchy part its nearest adhesion vertex sits in at level
    ceil(d/eps); the two outer zones (distance in (ell,2*ell] and
    (2*ell,3*ell] of an adhesion) take guard colors 1 and 2.  The result is
    re-verified at the lift bound.
    """
    if m < 2:
        raise GraphError("lift needs m >= 2")
    g, td, lf = cond.g, cond.td, cond.ell
    rset = set(deleted)
    if rset - g.vertex_set():
        raise GraphError("deleted set contains unknown vertices")
    centers = {td.check_edge(e): tuple(sorted(a)) for e, a in (centers_per_big_adhesion or {}).items()}
    for e in cond.u_e:
        x_e = td.adhesion_of(e)
        if len(x_e) <= cond.theta:
            continue
        if e not in centers:
            raise GraphError("adhesion of %s exceeds theta and has no center certificate" % (e,))
        a = centers[e]
        if len(a) > cond.theta:
            raise ContractViolation("center set for %s larger than theta" % (e,))
        stray = x_e - neighborhood(g, a, cond.mu)
        if stray:
            raise ContractViolation(
                "centers for %s miss %s at radius %s" % (e, sorted(stray)[:5], frac_str(cond.mu))
            )

    pool0 = set(cond.g0.vertices) - rset
    uncolored = pool0 - c0.domain
    if uncolored:
        raise GraphError(
            "input coloring misses condensed vertices %s" % sorted(uncolored)[:5]
        )
    claimed = None if n_claimed is None else as_fraction(n_claimed)
    rep0 = verify_weak_diameter(
        cond.g0, lf, c0, restrict_to=pool0, bound=claimed, exact=exact
    )
    measured0 = Fraction(max(1, rep0.max_weak_diameter_hops))
    nf = measured0 if claimed is None else claimed
    if measured0 > nf or not rep0.ok:
        raise ContractViolation(
            "%s: input coloring measures %s hops, claimed %s" % (what, measured0, frac_str(nf))
        )

    assignment: Dict[int, int] = {}
    zone_of: Dict[int, int] = {}
    for v in cond.t0_vertices:
        if v not in rset:
            assignment[v] = c0.color(v)
    for e in cond.u_e:
        x_e = td.adhesion_of(e)
        if not x_e:
            continue
        part = (
            cond.hierarchies[e].part_vertices
            if e in cond.hierarchies
            else cond.shortcut_parts[e].part_vertices
        )
        dist = g.distances_from(sorted(x_e), radius=3 * lf, within=part)
        att = cond.hierarchies.get(e)
        per_source: Dict[int, Dict[int, Fraction]] = {}
        if att is not None:
            for x in sorted(x_e):
                per_source[x] = g.distances_from([x], radius=3 * lf, within=part)
        for v, d in sorted(dist.items()):
            zone = max(1, ceil_frac(d / lf))
            if zone_of.get(v, 4) > zone:
                zone_of[v] = zone
            if v in rset or (v in assignment and zone == 1):
                continue
            if zone == 1:
                if v in cond.base_vertices:
                    assignment[v] = c0.color(v)
                else:
                    if att is None:
                        raise ContractViolation(
                            "fringe vertex %s of %s missing from the condensed graph" % (v, e)
                        )
                    assignment[v] = c0.color(_hierarchy_color_vertex(cond, att, per_source, v, d))
            elif v not in assignment:
                assignment[v] = zone - 1
    domain = set(assignment)
    coloring = Coloring(assignment, max(m, c0.num_colors))
    bound = con_color_bound(lf, nf, m, cond.theta, cond.mu)
    report = check_weak_diameter(
        g, lf, coloring, bound=bound, what=what, restrict_to=domain, power=power,
        exact=exact,
    )
    return LiftResult(coloring, bound, nf, report, zone_of)


def _hierarchy_color_vertex(
    cond: Condensation,
    att: HierarchyAttachment,
    per_source: Dict[int, Dict[int, Fraction]],
    v: int,
    d: Fraction,
) -> int:
    """The condensed vertex whose color a fringe vertex inherits: the part,
    at the deepest recorded level not above ceil(d/eps), holding the nearest
    adhesion vertex.  Nearness ties break by ascending vertex id, and the
    part is checked to be the only one within reach."""
    p_v = max(1, ceil_frac(d / cond.eps))
    j_v = max(i for i in att.hierarchy.levels if i <= p_v)
    nearest = min(
        (x for x in per_source if v in per_source[x]),
        key=lambda x: (per_source[x][v], x),
    )
    parts = att.chain.partition_at(j_v)
    y_v = next(y for y in parts if nearest in y)
    reach = p_v * cond.eps
    for y in parts:
        dy = min((per_source[x][v] for x in y if v in per_source[x]), default=None)
        if y == y_v:
            if dy is None or dy > reach:
                raise ContractViolation("nearest part of %s is out of reach" % (v,))
        elif dy is not None and dy <= reach:
            raise ContractViolation("vertex %s reaches two level-%d parts" % (v, j_v))
    return att.vertex_ids[(j_v, y_v)]


def check_quasi_isometry(g: WeightedGraph, cond: Condensation) -> None:
    """Exhaustive distance comparison between the graph and its condensation
    on the shared vertices: short distances never grow, and condensed
    distances stretch back by at most 4*(3*theta+1)*(theta+mu/ell).  Meant
    for small instances."""
    shared = sorted(cond.base_vertices & g.vertex_set())
    lift_factor = 4 * (3 * cond.theta + 1) * (cond.theta + cond.mu / cond.ell)
    horizon = 3 * cond.ell + cond.mu
    for x in shared:
        dg = g.distances_from([x])
        d0 = cond.g0.distances_from([x])
        for y in shared:
            if y <= x:
                continue
            a, b = dg.get(y), d0.get(y)
            if a is not None and a <= horizon:
                if b is None or b > a:
                    raise ContractViolation(
                        "distance (%s,%s): %s in the graph but %s condensed"
                        % (x, y, frac_str(a), "inf" if b is None else frac_str(b))
                    )
            if b is not None:
                if a is None or a > lift_factor * b:
                    raise ContractViolation(
                        "distance (%s,%s): %s condensed lifts beyond factor %s"
                        % (x, y, frac_str(b), frac_str(lift_factor))
                    )
