"""Two-colorings of bounded-treewidth weighted graphs with weak-diameter bounds.

The recursion peels the radius-3*ell ball around the root bag, condenses
everything beyond the surrounding tree region into a bounded stand-in graph,
colors that stand-in one guard level down, lifts the coloring back through
the condensation, and recurses into each far part with the lifted boundary
colors.  Every merge re-verifies its claimed bound; the public entry points
verify the assembled coloring end to end.
"""

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .graph import GraphError, WeightedGraph, as_fraction, frac_str
from .partition import (
    Coloring,
    ContractViolation,
    VerificationReport,
    check_weak_diameter,
)
from .patching import (
    CenterCertificate,
    centered_bound,
    centered_color,
    patch_bound,
    patch_colorings,
    vertex_cover_bound,
)
from .treedec import (
    RootedTreeDecomposition,
    TreeEdge,
    con_color_bound,
    condense,
    lift_condensation_coloring,
    validate_td,
)

_RECURSION_HEADROOM = 300_000


# -- tree-decomposition search ----------------------------------------------


def _simple_adjacency(g: WeightedGraph) -> Dict[int, Set[int]]:
    adj: Dict[int, Set[int]] = {v: set() for v in g.vertices}
    for (u, v, _) in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _eliminate(work: Dict[int, Set[int]], v: int) -> Dict[int, Set[int]]:
    out = {u: set(ns) for u, ns in work.items() if u != v}
    ns = sorted(work[v])
    for a in ns:
        out[a].discard(v)
    for i, a in enumerate(ns):
        for b in ns[i + 1:]:
            out[a].add(b)
            out[b].add(a)
    return out


def _elimination_width(adj: Dict[int, Set[int]], order: Sequence[int]) -> int:
    work = {v: set(ns) for v, ns in adj.items()}
    width = 0
    for v in order:
        width = max(width, len(work[v]))
        work = _eliminate(work, v)
    return width


def _min_fill_order(adj: Dict[int, Set[int]]) -> List[int]:
    work = {v: set(ns) for v, ns in adj.items()}
    order: List[int] = []
    while work:
        best: Optional[Tuple[int, int, int]] = None
        for v in sorted(work):
            ns = sorted(work[v])
            fill = sum(1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in work[a])
            key = (fill, len(ns), v)
            if best is None or key < best:
                best = key
        v = best[2]
        order.append(v)
        work = _eliminate(work, v)
    return order


def _mmd_lower_bound(adj: Dict[int, Set[int]]) -> int:
    """Peel minimum-degree vertices; the largest degree seen lower-bounds the width."""
    work = {v: set(ns) for v, ns in adj.items()}
    out = 0
    while work:
        v = min(work, key=lambda u: (len(work[u]), u))
        out = max(out, len(work[v]))
        for a in work.pop(v):
            work[a].discard(v)
    return out


def _exact_order(
    adj: Dict[int, Set[int]], upper_order: Sequence[int], upper_width: int
) -> Tuple[int, List[int]]:
    """Branch and bound over elimination orders, seeded by the heuristic order."""
    best_width = upper_width
    best_order = list(upper_order)
    memo: Dict[FrozenSet[int], int] = {}

    def rec(work: Dict[int, Set[int]], cur: int, prefix: List[int]) -> None:
        nonlocal best_width, best_order
        if cur >= best_width:
            return
        if len(work) <= 1:
            best_width = cur
            best_order = prefix + sorted(work)
            return
        key = frozenset(work)
        seen = memo.get(key)
        if seen is not None and seen <= cur:
            return
        memo[key] = cur
        if max(cur, _mmd_lower_bound(work)) >= best_width:
            return
        # a vertex whose neighborhood is a clique is always safe to take first
        pick: Optional[int] = None
        for v in sorted(work):
            ns = sorted(work[v])
            if all(b in work[a] for i, a in enumerate(ns) for b in ns[i + 1:]):
                pick = v
                break
        cand = [pick] if pick is not None else sorted(work, key=lambda v: (len(work[v]), v))
        for v in cand:
            rec(_eliminate(work, v), max(cur, len(work[v])), prefix + [v])

    rec({v: set(ns) for v, ns in adj.items()}, 0, [])
    return best_width, best_order


def _order_to_td(g: WeightedGraph, order: Sequence[int]) -> RootedTreeDecomposition:
    """Bags {v} + later fill-neighbors; each bag hangs below its earliest
    later member, and leftover roots chain up to the final vertex."""
    pos = {v: i for i, v in enumerate(order)}
    work = _simple_adjacency(g)
    bags: Dict[int, FrozenSet[int]] = {}
    parent_of: Dict[int, Optional[int]] = {}
    for v in order:
        later = {u for u in work[v] if pos[u] > pos[v]}
        bags[v] = frozenset({v} | later)
        parent_of[v] = min(later, key=lambda u: pos[u]) if later else None
        work = _eliminate(work, v)
    edges: List[TreeEdge] = []
    prev_root: Optional[int] = None
    for v in order:
        p = parent_of[v]
        if p is not None:
            edges.append((p, v))
        else:
            if prev_root is not None:
                edges.append((v, prev_root))
            prev_root = v
    return RootedTreeDecomposition(bags, edges, order[-1])


def compute_tree_decomposition(
    g: WeightedGraph,
    target_width: Optional[int] = None,
    exact_max: int = 20,
) -> RootedTreeDecomposition:
    """Rooted tree decomposition from an elimination order: exhaustive search
    up to exact_max vertices, min-fill heuristic beyond that.  Raises when a
    width target is missed (definitely for exact search, with a pointer to
    user-supplied decompositions for the heuristic)."""
    if len(g) == 0:
        return RootedTreeDecomposition({0: ()}, [], 0)
    adj = _simple_adjacency(g)
    order = _min_fill_order(adj)
    width = _elimination_width(adj, order)
    exact = len(g) <= exact_max
    if exact:
        width, order = _exact_order(adj, order, width)
    if target_width is not None and width > target_width:
        if exact:
            raise GraphError(
                "graph has treewidth %d, above the target %d" % (width, target_width)
            )
        raise GraphError(
            "heuristic decomposition has width %d, above the target %d; "
            "supply a decomposition computed elsewhere" % (width, target_width)
        )
    td = _order_to_td(g, order)
    rep = validate_td(g, td)
    if not rep["ok"]:
        raise ContractViolation(
            "elimination decomposition failed validation: %s" % "; ".join(rep["failures"][:3])
        )
    return td


# -- bag colorers and constructions ------------------------------------------


@dataclass(frozen=True)
class BagColorer:
    """Callback coloring the graphs appearing at tree nodes (bags plus their
    per-child augmentations); every returned coloring is re-verified against
    the declared hop bound n."""

    color: Callable[[WeightedGraph, Fraction, int], Coloring]
    n: Fraction


def constant_bag_colorer(n: object) -> BagColorer:
    nf = as_fraction(n)

    def paint(h: WeightedGraph, ell: Fraction, m: int) -> Coloring:
        return Coloring.constant(h.vertex_set(), m)

    return BagColorer(paint, nf)


def cover_bag_colorer(theta: int, ell: object) -> BagColorer:
    """Constant colorer certified for graphs where some <= theta vertices
    cover all but components of <= theta**2 vertices, and for graphs on at
    most 2*theta**2 + theta vertices."""
    if theta < 0:
        raise GraphError("need theta >= 0")
    nf = max(
        vertex_cover_bound(theta, theta * theta, ell),
        Fraction(2 * theta * theta + theta),
    )
    return constant_bag_colorer(nf)


@dataclass(frozen=True)
class AdhesionConstruction:
    """Rooted tree decomposition of adhesion at most theta whose oversized
    adhesions (more than eta shared vertices) occur only on leaf-attached
    edges adding at most lam new vertices."""

    td: RootedTreeDecomposition
    eta: int
    theta: int
    colorer: BagColorer
    lam: Optional[int] = None

    @property
    def new_vertex_limit(self) -> int:
        return self.theta * self.theta if self.lam is None else self.lam

    def big_edges(self) -> Tuple[TreeEdge, ...]:
        td = self.td
        return tuple(e for e in td.tree_edges if len(td.adhesion_of(e)) > self.eta)

    def validate(self, g: WeightedGraph, full: bool = True) -> None:
        """Structural checks are linear in the tree; full validation also
        re-checks the decomposition axioms against g (quadratic, so the
        recursion only repeats it per level under deep verification)."""
        if not 0 <= self.eta <= self.theta:
            raise ContractViolation(
                "need 0 <= eta <= theta, got eta=%d theta=%d" % (self.eta, self.theta)
            )
        lam = self.new_vertex_limit
        if lam > self.theta * self.theta:
            raise ContractViolation(
                "new-vertex limit %d above theta**2 = %d" % (lam, self.theta * self.theta)
            )
        td = self.td
        if full:
            rep = validate_td(g, td)
            if not rep["ok"]:
                raise ContractViolation(
                    "invalid decomposition: %s" % "; ".join(rep["failures"][:3])
                )
        root_bag = td.bags[td.root]
        if len(root_bag) > self.theta:
            raise ContractViolation(
                "root bag has %d > theta=%d vertices" % (len(root_bag), self.theta)
            )
        if self.eta >= 1 and not root_bag:
            raise ContractViolation("root bag must be nonempty when eta >= 1")
        for e in td.tree_edges:
            x_e = td.adhesion_of(e)
            if len(x_e) > self.theta:
                raise ContractViolation(
                    "adhesion of %s has %d > theta=%d vertices" % (e, len(x_e), self.theta)
                )
            if len(x_e) > self.eta:
                p, ch = e
                if td.children[ch]:
                    raise ContractViolation(
                        "edge %s shares %d > eta=%d vertices but its lower end has children"
                        % (e, len(x_e), self.eta)
                    )
                if len(td.bags[ch] - td.bags[p]) > lam:
                    raise ContractViolation(
                        "leaf below %s adds %d > %d new vertices"
                        % (e, len(td.bags[ch] - td.bags[p]), lam)
                    )


# -- bound calculators --------------------------------------------------------


def tree_extension_bound(eta: int, theta: int, ell: object, n: object, m: int) -> Fraction:
    """Hop bound achieved by color_adhesion_construction: the level-0 term
    covers pieces, the patch over the root ball, and bag sizes; each further
    guard level routes through one condensation round trip."""
    if not 0 <= eta <= theta:
        raise GraphError("need 0 <= eta <= theta, got eta=%d theta=%d" % (eta, theta))
    if m < 2:
        raise GraphError("need m >= 2")
    lf = as_fraction(ell)
    nf = as_fraction(n)
    if lf <= 0 or nf <= 0:
        raise GraphError("need ell > 0 and n > 0")
    out = (
        nf
        + centered_bound(theta, 3 * lf, lf)
        + patch_bound(theta, 3 * lf, lf, nf)
        + theta * theta
        + theta
    )
    for _ in range(eta):
        out = con_color_bound(lf, patch_bound(theta, 3 * lf, lf, out), m, theta, 0)
    return out


def treewidth_color_bound(width: int, ell: object, m: int = 2) -> Fraction:
    """Hop bound achieved by color_bounded_treewidth at the given width."""
    theta = width + 1
    return tree_extension_bound(theta, theta, ell, cover_bag_colorer(theta, ell).n, m)


# -- the recursion -------------------------------------------------------------


@dataclass(frozen=True)
class TreeColorResult:
    coloring: Coloring
    bound: Fraction
    report: VerificationReport


@dataclass(frozen=True)
class TwColorResult:
    coloring: Coloring
    bound: Fraction
    report: VerificationReport
    td: RootedTreeDecomposition
    width: int
    theta: int


@dataclass
class _Ctx:
    lf: Fraction
    theta: int
    lam: int
    m: int
    colorer: BagColorer
    deep: bool
    exact: bool = True


def _paint_piece(ctx: _Ctx, h: WeightedGraph, what: str) -> Coloring:
    c = ctx.colorer.color(h, ctx.lf, ctx.m)
    if c.domain != h.vertex_set():
        raise ContractViolation("%s: piece colorer domain mismatch" % what)
    if c.num_colors > ctx.m:
        raise ContractViolation("%s: piece colorer used more than m colors" % what)
    check_weak_diameter(h, ctx.lf, c, bound=ctx.colorer.n, what=what, exact=ctx.exact)
    return Coloring(dict(c.assignment), ctx.m)


def _merge_disjoint(parts: Iterable[Coloring], m: int, what: str) -> Coloring:
    out: Dict[int, int] = {}
    for part in parts:
        for v, col in part.assignment.items():
            if out.get(v, col) != col:
                raise ContractViolation("%s: colorings disagree on vertex %s" % (what, v))
            out[v] = col
    return Coloring(out, m)


def _color_rec(
    ctx: _Ctx,
    g: WeightedGraph,
    td: RootedTreeDecomposition,
    eta: int,
    zset: FrozenSet[int],
    c: Coloring,
    parent_measure: Optional[Tuple[int, int]],
    what: str,
) -> Coloring:
    lf = ctx.lf
    AdhesionConstruction(td, eta, ctx.theta, ctx.colorer, ctx.lam).validate(g, full=ctx.deep)
    if zset - g.vertex_set():
        raise GraphError("%s: precolored vertices outside the graph" % what)
    if c.domain != zset:
        raise GraphError("%s: precoloring domain differs from the precolored set" % what)
    root_bag = td.bags[td.root]
    ball = (
        frozenset(g.distances_from(sorted(root_bag), radius=3 * lf))
        if root_bag
        else frozenset()
    )
    if zset - ball:
        raise ContractViolation(
            "%s: precolored set reaches beyond distance 3*ell of the root bag" % what
        )
    measure = (eta, len(td) + (len(g) - len(zset)) + len(g))
    if parent_measure is not None and not measure < parent_measure:
        raise ContractViolation(
            "%s: recursion measure did not decrease (%s -> %s)"
            % (what, parent_measure, measure)
        )
    bound = tree_extension_bound(eta, ctx.theta, lf, ctx.colorer.n, ctx.m)

    # everything already precolored: the root bag centers the whole graph
    if zset == g.vertex_set():
        cert = CenterCertificate.build(g, sorted(root_bag), 3 * lf, sorted(zset), ctx.theta)
        cc = Coloring(dict(c.assignment), ctx.m)
        centered_color(
            g, lf, (), cert, m=ctx.m, coloring=cc,
            what=what + ": fully precolored", exact=ctx.exact,
        )
        return cc

    if eta == 0:
        return _color_flat(ctx, g, td, zset, c, bound, what)

    comps = g.connected_components()
    if len(comps) != 1:
        return _color_split(ctx, g, td, eta, zset, c, measure, comps, what)

    # saturate the precolored set to the full ball around the root bag
    z0 = ball
    sat = dict(c.assignment)
    for v in sorted(z0 - zset):
        sat[v] = ctx.m
    c_sat = Coloring(sat, ctx.m)
    if z0 == g.vertex_set():
        cert = CenterCertificate.build(g, sorted(root_bag), 3 * lf, sorted(z0), ctx.theta)
        centered_color(
            g, lf, (), cert, m=ctx.m, coloring=c_sat,
            what=what + ": saturated ball", exact=ctx.exact,
        )
        return c_sat

    # the tree region whose bags meet the ball, and the frontier leaving it
    t0_nodes = [t for t in td.nodes if td.bags[t] & z0]
    t0_set = set(t0_nodes)
    for t in t0_nodes:
        if t != td.root and td.parent[t] not in t0_set:
            raise ContractViolation("%s: ball region is not connected in the tree" % what)
    u_e = sorted(
        (p, ch) for (p, ch) in td.tree_edges if p in t0_set and ch not in t0_set
    )
    for (p, ch) in td.tree_edges:
        if ch in t0_set and p not in t0_set:
            raise ContractViolation("%s: ball region misses a parent node" % what)

    cond = condense(g, td, u_e, u_e, lf, ctx.theta, 0)
    g0 = cond.g0
    if z0 - g0.vertex_set():
        raise ContractViolation("%s: ball leaks out of the condensed graph" % what)

    # decomposition of the condensed graph: region bags plus one leaf per
    # frontier edge holding that edge's attached stand-in vertices
    bags0: Dict[int, FrozenSet[int]] = {t: td.bags[t] for t in t0_nodes}
    edges0: List[TreeEdge] = [
        (p, ch) for (p, ch) in td.tree_edges if p in t0_set and ch in t0_set
    ]
    fresh_node = max(td.nodes) + 1
    for e in u_e:
        att = cond.hierarchies[e]
        bags0[fresh_node] = frozenset(att.vertex_ids.values())
        edges0.append((e[0], fresh_node))
        fresh_node += 1
    td0 = RootedTreeDecomposition(bags0, edges0, td.root)
    rep0 = validate_td(g0, td0)
    if not rep0["ok"]:
        raise ContractViolation(
            "%s: condensed decomposition failed validation: %s"
            % (what, "; ".join(rep0["failures"][:3]))
        )

    # color the condensed graph beyond the ball one guard level down
    n_prev = tree_extension_bound(eta - 1, ctx.theta, lf, ctx.colorer.n, ctx.m)
    rest0 = g0.vertex_set() - z0
    if rest0:
        bags00 = {t: b - z0 for t, b in bags0.items()}
        edges00 = list(edges0)
        root00 = td0.root
        if eta - 1 >= 1:
            # pull one far vertex up to a fresh root; all bags strictly
            # between the root and its holder are empty, so adhesions stay 1
            dist0 = {td0.root: 0}
            frontier = [td0.root]
            t_far: Optional[int] = None
            while frontier and t_far is None:
                hits = [t for t in frontier if bags00[t]]
                if hits:
                    t_far = min(hits)
                    break
                step: List[int] = []
                for t in frontier:
                    for ch in td0.children[t]:
                        if ch not in dist0:
                            dist0[ch] = dist0[t] + 1
                            step.append(ch)
                frontier = sorted(step)
            if t_far is None:
                raise ContractViolation("%s: no far vertex found outside the ball" % what)
            v0 = min(bags00[t_far])
            t = td0.parent[t_far]
            while t is not None:
                if bags00[t]:
                    raise ContractViolation(
                        "%s: nonempty bag strictly between root and its far holder" % what
                    )
                bags00[t] = frozenset({v0})
                t = td0.parent[t]
            root00 = fresh_node
            bags00[root00] = frozenset({v0})
            edges00.append((root00, td0.root))
            fresh_node += 1
        td00 = RootedTreeDecomposition(bags00, edges00, root00)
        c0_rest = _color_rec(
            ctx,
            g0.without(z0),
            td00,
            eta - 1,
            frozenset(),
            Coloring.empty(ctx.m),
            measure,
            what + ": condensed far side",
        )
    else:
        c0_rest = Coloring.empty(ctx.m)

    # glue the saturated ball colors over the condensed coloring
    cert0 = CenterCertificate.build(g0, sorted(root_bag), 3 * lf, sorted(z0), ctx.theta)
    mr = patch_colorings(
        g0, lf, cert0, (), c_sat, c0_rest,
        mode="delete", n_claimed=n_prev, m=ctx.m, what=what + ": ball patch",
        exact=ctx.exact,
    )

    # lift the condensed coloring back to the graph around the region
    lift_claim = patch_bound(ctx.theta, 3 * lf, lf, n_prev)
    if mr.bound != lift_claim:
        raise ContractViolation("%s: patch bound bookkeeping drifted" % what)
    lr = lift_condensation_coloring(
        cond, mr.coloring, ctx.m, n_claimed=lift_claim, what=what + ": lift",
        exact=ctx.exact,
    )
    if lr.bound != bound:
        raise ContractViolation(
            "%s: lift bound %s differs from the level bound %s"
            % (what, frac_str(lr.bound), frac_str(bound))
        )
    c3 = lr.coloring

    # recurse into each far part with the lifted boundary colors
    parts_out: List[Coloring] = []
    for e in u_e:
        part = td.subtree_vertices(e)
        x_e = td.adhesion_of(e)
        if not x_e:
            if part:
                raise ContractViolation(
                    "%s: empty shared set on a populated part of a connected graph" % what
                )
            continue
        dist = g.distances_from(sorted(x_e), radius=3 * lf, within=part)
        z_e = frozenset(dist)
        missing = z_e - c3.domain
        if missing:
            raise ContractViolation(
                "%s: lift left part vertices uncolored: %s" % (what, sorted(missing)[:5])
            )
        c_e = Coloring({v: c3.color(v) for v in z_e}, ctx.m)
        g_e = g.induced(part)
        if len(x_e) > eta:
            # oversized shared set: the part is one childless bag, any
            # completion has components of at most |part| vertices
            if len(part) > ctx.theta + ctx.lam:
                raise ContractViolation(
                    "%s: oversized-adhesion part has %d > theta + lam = %d vertices"
                    % (what, len(part), ctx.theta + ctx.lam)
                )
            full = dict(c_e.assignment)
            for v in sorted(part - z_e):
                full[v] = ctx.m
            c_e_full = Coloring(full, ctx.m)
            check_weak_diameter(
                g_e, lf, c_e_full,
                bound=Fraction(ctx.theta + ctx.lam),
                what=what + ": oversized part",
                exact=ctx.exact,
            )
            parts_out.append(c_e_full)
            continue
        sub_nodes = td.subtree_nodes(e)
        bags_e: Dict[int, FrozenSet[int]] = {t: td.bags[t] for t in sub_nodes}
        bags_e[fresh_node] = x_e
        keep_e = set(sub_nodes)
        edges_e = [(p, ch) for (p, ch) in td.tree_edges if p in keep_e and ch in keep_e]
        edges_e.append((fresh_node, e[1]))
        td_e = RootedTreeDecomposition(bags_e, edges_e, fresh_node)
        fresh_node += 1
        sub = _color_rec(ctx, g_e, td_e, eta, z_e, c_e, measure, what + ": far part")
        parts_out.append(sub)

    keep0 = cond.base_vertices & g.vertex_set()
    out = _merge_disjoint([c3.restrict(keep0)] + parts_out, ctx.m, what)
    if out.domain != g.vertex_set():
        raise ContractViolation("%s: assembled coloring misses vertices" % what)
    for v in sorted(zset):
        if out.color(v) != c.color(v):
            raise ContractViolation("%s: precolored vertex %s was recolored" % (what, v))
    if ctx.deep:
        check_weak_diameter(g, lf, out, bound=bound, what=what + ": assembled", exact=ctx.exact)
    return out


def _color_flat(
    ctx: _Ctx,
    g: WeightedGraph,
    td: RootedTreeDecomposition,
    zset: FrozenSet[int],
    c: Coloring,
    bound: Fraction,
    what: str,
) -> Coloring:
    """No guard levels left: empty-adhesion tree edges split the tree into
    stars whose vertex sets are pairwise disconnected; color each star piece
    with the bag colorer, patching the precolored ball into the root piece."""
    lf = ctx.lf
    tops = [
        t
        for t in td.nodes
        if td.parent[t] is None or not td.adhesion_of((td.parent[t], t))
    ]
    pieces: List[Coloring] = []
    seen: Set[int] = set()
    for top in sorted(tops):
        members = [top] + [ch for ch in td.children[top] if td.adhesion_of((top, ch))]
        verts = td.bag_union(members)
        if verts & seen:
            raise ContractViolation("%s: star pieces share vertices" % what)
        seen |= verts
        if zset & verts:
            if td.root not in members:
                raise ContractViolation(
                    "%s: precolored vertices in a piece away from the root" % what
                )
            h = g.induced(verts)
            cp = _paint_piece(ctx, g.induced(verts - zset), what + ": root piece")
            cert = CenterCertificate.build(
                h, sorted(td.bags[td.root]), 3 * lf, sorted(zset), ctx.theta
            )
            mr = patch_colorings(
                h, lf, cert, (), c, cp,
                mode="delete", n_claimed=ctx.colorer.n, m=ctx.m,
                what=what + ": root piece patch",
                exact=ctx.exact,
            )
            pieces.append(mr.coloring)
        else:
            pieces.append(_paint_piece(ctx, g.induced(verts), what + ": piece"))
    out = _merge_disjoint(pieces, ctx.m, what)
    if out.domain != g.vertex_set():
        raise ContractViolation("%s: star pieces miss vertices" % what)
    if ctx.deep:
        check_weak_diameter(g, lf, out, bound=bound, what=what + ": assembled", exact=ctx.exact)
    return out


def _color_split(
    ctx: _Ctx,
    g: WeightedGraph,
    td: RootedTreeDecomposition,
    eta: int,
    zset: FrozenSet[int],
    c: Coloring,
    measure: Tuple[int, int],
    comps: Sequence[Tuple[int, ...]],
    what: str,
) -> Coloring:
    """Color each connected component under its own restricted decomposition,
    adding a one-vertex root bag to components the root bag does not meet."""
    pieces: List[Coloring] = []
    fresh_node = max(td.nodes) + 1
    for comp in comps:
        cs = frozenset(comp)
        nodes_c = [t for t in td.nodes if td.bags[t] & cs]
        keep = set(nodes_c)
        bags_c = {t: td.bags[t] & cs for t in nodes_c}
        edges_c = [(p, ch) for (p, ch) in td.tree_edges if p in keep and ch in keep]
        tops = [t for t in nodes_c if td.parent[t] is None or td.parent[t] not in keep]
        if len(tops) != 1:
            raise ContractViolation("%s: component bags do not span a subtree" % what)
        top = tops[0]
        g_c = g.induced(cs)
        z_c = zset & cs
        if td.root in keep:
            if top != td.root:
                raise ContractViolation("%s: component subtree misplaced the root" % what)
            td_c = RootedTreeDecomposition(bags_c, edges_c, td.root)
        else:
            if z_c:
                raise ContractViolation(
                    "%s: precolored vertices in a component away from the root" % what
                )
            v0 = min(bags_c[top])
            bags_c[fresh_node] = frozenset({v0})
            edges_c.append((fresh_node, top))
            td_c = RootedTreeDecomposition(bags_c, edges_c, fresh_node)
            fresh_node += 1
        pieces.append(
            _color_rec(
                ctx, g_c, td_c, eta, z_c, c.restrict(z_c), measure, what + ": component"
            )
        )
    out = _merge_disjoint(pieces, ctx.m, what)
    if out.domain != g.vertex_set():
        raise ContractViolation("%s: component colorings miss vertices" % what)
    return out


# -- public entry points --------------------------------------------------------


def color_adhesion_construction(
    g: WeightedGraph,
    ell: object,
    con: AdhesionConstruction,
    z: Iterable[int] = (),
    precoloring: Optional[Coloring] = None,
    m: int = 2,
    deep_verify: bool = False,
    exact_check: bool = True,
) -> TreeColorResult:
    """Extend a precoloring of Z (within distance 3*ell of the root bag) to
    all of g, with monochromatic components of weak diameter at most the
    computed level bound in the power graph."""
    lf = as_fraction(ell)
    if lf <= 0:
        raise GraphError("need ell > 0")
    if m < 2:
        raise GraphError("need m >= 2 colors")
    mw = g.max_edge_weight()
    if mw is not None and mw > lf:
        raise GraphError("edge weight %s exceeds ell %s" % (frac_str(mw), frac_str(lf)))
    zf = frozenset(z)
    if precoloring is None:
        precoloring = Coloring.constant(zf, m)
    if precoloring.domain != zf:
        raise GraphError("precoloring domain differs from the precolored set")
    if precoloring.num_colors > m:
        raise GraphError("precoloring uses more than m colors")
    sys.setrecursionlimit(max(sys.getrecursionlimit(), _RECURSION_HEADROOM))
    con.validate(g)
    ctx = _Ctx(lf, con.theta, con.new_vertex_limit, m, con.colorer, deep_verify, exact_check)
    out = _color_rec(
        ctx, g, con.td, con.eta, zf,
        Coloring(dict(precoloring.assignment), m),
        None, "adhesion coloring",
    )
    bound = tree_extension_bound(con.eta, con.theta, lf, con.colorer.n, m)
    report = check_weak_diameter(
        g, lf, out, bound=bound, what="adhesion coloring", exact=exact_check
    )
    return TreeColorResult(out, bound, report)


def color_bounded_treewidth(
    g: WeightedGraph,
    ell: object,
    td: Optional[RootedTreeDecomposition] = None,
    exact_td_max: int = 20,
    deep_verify: bool = False,
    exact_check: bool = True,
) -> TwColorResult:
    """Two-coloring of a weighted graph with all weights at most ell, with
    monochromatic components of weak diameter bounded by a constant that
    depends only on the decomposition width.

    Each connected component's decomposition gets one tree edge subdivided
    into a fresh root bag (the edge's shared set), which yields a
    construction with all guard levels available; the bag colorer is the
    constant coloring certified through the vertex-cover route."""
    lf = as_fraction(ell)
    if lf <= 0:
        raise GraphError("need ell > 0")
    mw = g.max_edge_weight()
    if mw is not None and mw > lf:
        raise GraphError("edge weight %s exceeds ell %s" % (frac_str(mw), frac_str(lf)))
    if td is None:
        td = compute_tree_decomposition(g, exact_max=exact_td_max)
    rep = validate_td(g, td)
    if not rep["ok"]:
        raise GraphError("invalid decomposition: %s" % "; ".join(rep["failures"][:3]))
    width = max(td.width, 0)
    theta = width + 1
    colorer = cover_bag_colorer(theta, lf)
    bound = tree_extension_bound(theta, theta, lf, colorer.n, 2)
    ctx = _Ctx(lf, theta, theta * theta, 2, colorer, deep_verify, exact_check)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), _RECURSION_HEADROOM))
    pieces: List[Coloring] = []
    fresh_node = max(td.nodes) + 1
    for comp in g.connected_components():
        cs = frozenset(comp)
        nodes_c = [t for t in td.nodes if td.bags[t] & cs]
        keep = set(nodes_c)
        bags_c = {t: td.bags[t] & cs for t in nodes_c}
        edges_c = [(p, ch) for (p, ch) in td.tree_edges if p in keep and ch in keep]
        tops = [t for t in nodes_c if td.parent[t] is None or td.parent[t] not in keep]
        if len(tops) != 1:
            raise ContractViolation("component bags do not span a subtree")
        td_c = RootedTreeDecomposition(bags_c, edges_c, tops[0])
        g_c = g.induced(cs)
        if len(td_c) == 1:
            pieces.append(_paint_piece(ctx, g_c, "treewidth coloring: single bag"))
            continue
        e0 = min(td_c.tree_edges)
        x0 = td_c.adhesion_of(e0)
        if not x0:
            raise ContractViolation("empty shared set inside a connected component")
        td_c = td_c.subdivide_edge(e0, fresh_node, x0).reroot(fresh_node)
        fresh_node += 1
        pieces.append(
            _color_rec(
                ctx, g_c, td_c, theta, frozenset(), Coloring.empty(2),
                None, "treewidth coloring: component",
            )
        )
    out = _merge_disjoint(pieces, 2, "treewidth coloring")
    if out.domain != g.vertex_set():
        raise ContractViolation("treewidth coloring misses vertices")
    report = check_weak_diameter(
        g, lf, out, bound=bound, what="treewidth coloring", exact=exact_check
    )
    return TwColorResult(out, bound, report, td, width, theta)
