"""Coloring engine driven by guarded tree decompositions, plus the slab
pipelines that two-color planar and layered graphs four colors at a time.

The central object is a control construction: a rooted tree decomposition
whose root and edges carry small guard triples.  The guards certify that
the part of the graph still waiting for a color is either reachable only
through few vertices or very far from the precolored zone, which is what
the recursive engine needs to extend a partial coloring across the whole
graph at a fixed weak-diameter bound.

The planar pipeline cuts the graph into metric slabs along a geodesic
projection, colors each padded slab through a tripod tree decomposition
(every bag is a union of at most three vertical paths of a shortest-path
tree), and combines two interleaved slab families into four colors.  The
layered pipeline does the same with a layering projection and the bounded
treewidth colorer per slab.
"""

import bisect
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .graph import (
    GraphError,
    PowerGraph,
    WeightedGraph,
    as_fraction,
    ceil_frac,
    frac_str,
    neighborhood,
    power_graph,
)
from .partition import (
    Coloring,
    ContractViolation,
    VerificationReport,
    check_weak_diameter,
    monochromatic_components,
)
from .patching import (
    CenterCertificate,
    centered_bound,
    centered_color,
    control_radii,
    patch_bound,
    patch_colorings,
)
from .treedec import (
    RootedTreeDecomposition,
    TreeEdge,
    con_color_bound,
    condense,
    lift_condensation_coloring,
    validate_td,
)

_RECURSION_HEADROOM = 20000


# -- control constructions ---------------------------------------------------


@dataclass(frozen=True)
class GuardTriple:
    """Guard sets attached to one site (the root or one tree edge).

    free:    guards outside the removed set; together with `both` they must
             cover the non-removed part of the site's bag within radius mu.
    removed: guards inside the removed set; together with `both` they must
             cover the removed part of the bag within radius mu.
    both:    guards usable on either side.
    """

    free: FrozenSet[int]
    removed: FrozenSet[int]
    both: FrozenSet[int]

    @property
    def anchor(self) -> FrozenSet[int]:
        """Guards that anchor the colored zone: free | both."""
        return self.free | self.both

    @property
    def all_guards(self) -> FrozenSet[int]:
        return self.free | self.removed | self.both

    @staticmethod
    def single(v: int) -> "GuardTriple":
        return GuardTriple(frozenset((v,)), frozenset(), frozenset((v,)))


@dataclass(frozen=True)
class ControlConstruction:
    """Rooted tree decomposition with guard triples for the coloring engine.

    removed: vertex set R cut out of the graph; the engine colors V - R and
             weak diameters are still measured in the full power graph.
    eta:     recursion budget; an edge whose anchor exceeds eta must end in
             a childless node whose bag stays within ell of the adhesion.
    theta:   cap on the total size of every triple.
    mu:      guard coverage radius.
    ell:     coloring scale; also caps edge weights.
    """

    td: RootedTreeDecomposition
    removed: FrozenSet[int]
    eta: int
    theta: int
    mu: Fraction
    ell: Fraction
    root_triple: GuardTriple
    edge_triples: Dict[TreeEdge, GuardTriple]

    def radii(self) -> List[Fraction]:
        """Exclusion radii a_0..a_eta for this construction's parameters."""
        return control_radii(self.theta, self.mu, self.ell, self.eta)

    def _sites(self) -> List[Tuple[object, FrozenSet[int], GuardTriple]]:
        out: List[Tuple[object, FrozenSet[int], GuardTriple]] = [
            ("root", self.td.bags[self.td.root], self.root_triple)
        ]
        for e in self.td.tree_edges:
            out.append((e, self.td.adhesion_of(e), self.edge_triples[e]))
        return out

    def validate(self, g: WeightedGraph, full: bool = True) -> None:
        """Check the construction against g; raises on failure.

        Structural checks always run.  `full` adds the metric checks: bag
        coverage by the guards, the two root exclusion balls, and the reach
        of oversized-anchor edges.
        """
        if self.theta < 1 or not 0 <= self.eta <= self.theta:
            raise GraphError(
                "need 1 <= theta and 0 <= eta <= theta, got eta=%s theta=%s"
                % (self.eta, self.theta)
            )
        if self.mu < 0 or self.ell <= 0:
            raise GraphError("need mu >= 0 and ell > 0")
        vset = g.vertex_set()
        if not self.removed <= vset:
            raise GraphError(
                "removed set has unknown vertices %s" % sorted(self.removed - vset)[:5]
            )
        if self.td.all_vertices() != vset:
            raise GraphError("tree decomposition does not cover the graph exactly")
        keys = set(self.edge_triples)
        edges = set(self.td.tree_edges)
        if keys != edges:
            raise GraphError(
                "edge triples do not match the tree edges (missing %s, extra %s)"
                % (sorted(edges - keys)[:3], sorted(keys - edges)[:3])
            )
        for site, bag, tri in self._sites():
            if not tri.free <= bag - self.removed:
                raise ContractViolation("site %s: free guards leave bag - removed" % (site,))
            if not tri.removed <= bag & self.removed:
                raise ContractViolation("site %s: removed guards leave bag & removed" % (site,))
            if not tri.both <= bag:
                raise ContractViolation("site %s: shared guards leave the bag" % (site,))
            if len(tri.all_guards) > self.theta:
                raise ContractViolation(
                    "site %s: %d guards exceed theta=%d"
                    % (site, len(tri.all_guards), self.theta)
                )
        for e in self.td.tree_edges:
            tri = self.edge_triples[e]
            if len(tri.anchor) > self.eta and self.td.children[e[1]]:
                raise ContractViolation(
                    "edge %s has %d anchors > eta=%d but its lower end has children"
                    % (e, len(tri.anchor), self.eta)
                )
        if not full:
            return
        mw = g.max_edge_weight()
        if mw is not None and mw > self.ell:
            raise GraphError("edge weight %s exceeds ell=%s" % (frac_str(mw), frac_str(self.ell)))
        rep = validate_td(g, self.td)
        if not rep["ok"]:
            raise ContractViolation("tree decomposition invalid: %s" % rep["failures"][:3])
        for site, bag, tri in self._sites():
            self._check_cover(g, site, bag - self.removed, tri.free | tri.both, "free")
            self._check_cover(g, site, bag & self.removed, tri.removed | tri.both, "removed")
        exsets: List[Tuple[TreeEdge, Set[int]]] = []
        for e in self.td.tree_edges:
            tri = self.edge_triples[e]
            cand = self.td.adhesion_of(e) & self.removed
            if not cand:
                continue
            if tri.both:
                near = g.distances_from(sorted(tri.both), radius=self.mu, targets=set(cand))
                cand = {v for v in cand if v not in near}
            if cand:
                exsets.append((e, cand))
        if exsets:
            zone = sorted(self.root_triple.anchor - self.removed)
            ball_zone = neighborhood(g, zone, 3 * self.ell + self.mu) if zone else set()
            far = sorted(vset - (self.removed | self.root_triple.anchor))
            ball_far = neighborhood(g, far, self.radii()[-1]) if far else set()
            for e, cand in exsets:
                hit = cand & ball_zone
                if hit:
                    raise ContractViolation(
                        "edge %s: unguarded removed vertices %s sit near the root zone"
                        % (e, sorted(hit)[:5])
                    )
                hit = cand & ball_far
                if hit:
                    raise ContractViolation(
                        "edge %s: unguarded removed vertices %s sit near unanchored territory"
                        % (e, sorted(hit)[:5])
                    )
        for e in self.td.tree_edges:
            tri = self.edge_triples[e]
            if len(tri.anchor) <= self.eta:
                continue
            x_e = self.td.adhesion_of(e)
            low = self.td.bags[e[1]]
            if x_e:
                near = g.distances_from(sorted(x_e), radius=self.ell, targets=set(low))
                stray = low - set(near)
            else:
                stray = set(low)
            if stray:
                raise ContractViolation(
                    "edge %s exceeds eta but its end bag strays %s beyond radius ell"
                    % (e, sorted(stray)[:5])
                )

    def _check_cover(
        self, g: WeightedGraph, site: object, need: FrozenSet[int], guards: FrozenSet[int], kind: str
    ) -> None:
        if not need:
            return
        if not guards:
            raise ContractViolation("site %s: no %s-side guards but the bag needs them" % (site, kind))
        near = g.distances_from(sorted(guards), radius=self.mu, targets=set(need))
        stray = need - set(near)
        if stray:
            raise ContractViolation(
                "site %s: %s-side vertices %s beyond radius mu of their guards"
                % (site, kind, sorted(stray)[:5])
            )


def control_extension_bound(eta: int, theta: int, mu: object, ell: object, m: int) -> Fraction:
    """Weak-diameter bound for extending a zone coloring along a control
    construction with the given parameters and m colors."""
    mf = as_fraction(mu)
    lf = as_fraction(ell)
    if theta < 1 or not 0 <= eta <= theta:
        raise GraphError("need 1 <= theta and 0 <= eta <= theta")
    if mf < 0 or lf <= 0:
        raise GraphError("need mu >= 0 and ell > 0")
    if m < 2:
        raise GraphError("extension bound needs m >= 2")
    val = patch_bound(theta, 4 * lf + mf, lf, 1)
    if eta == 0:
        return val
    radii = control_radii(theta, mf, lf, eta - 1)
    for x in range(1, eta + 1):
        a = radii[x - 1]
        patched = patch_bound(theta, 3 * lf + 3 * mf + a, lf, val)
        val = con_color_bound(lf, patched, m, theta, a + mf)
    return val


def centered_bags_bound(theta: int, radius: object, ell: object) -> Fraction:
    """Bound for color_centered_bags: every bag is within `radius` of at
    most theta centers, and the derived construction runs at mu=2*radius."""
    return control_extension_bound(theta, theta, 2 * as_fraction(radius), ell, 2)


@dataclass(frozen=True)
class ControlColorResult:
    coloring: Coloring
    bound: Fraction
    report: VerificationReport


# -- the extension engine ----------------------------------------------------


@dataclass(frozen=True)
class _EngineCtx:
    lf: Fraction
    m: int
    deep: bool


def _check_centers(
    g: WeightedGraph,
    td: RootedTreeDecomposition,
    centers: Dict[int, Tuple[int, ...]],
    theta: int,
    radius: Fraction,
    metric: bool,
    what: str,
) -> None:
    if set(centers) != set(td.nodes):
        raise GraphError("%s: center map must cover the nodes exactly" % what)
    for t in td.nodes:
        bag = td.bags[t]
        cs = centers[t]
        if len(set(cs)) > theta:
            raise ContractViolation("%s: node %s carries %d centers > theta" % (what, t, len(cs)))
        if not set(cs) <= bag:
            raise ContractViolation("%s: node %s centers leave its bag" % (what, t))
        if bag and not cs:
            raise ContractViolation("%s: node %s has a nonempty bag but no centers" % (what, t))
        if metric and bag:
            near = g.distances_from(sorted(set(cs)), radius=radius, targets=set(bag))
            stray = bag - set(near)
            if stray:
                raise ContractViolation(
                    "%s: node %s bag strays %s beyond the center radius"
                    % (what, t, sorted(stray)[:5])
                )


def _rekey_triples(
    old: Dict[TreeEdge, GuardTriple],
    new_td: RootedTreeDecomposition,
    fresh: Dict[TreeEdge, GuardTriple],
) -> Dict[TreeEdge, GuardTriple]:
    """Carry triples over to a re-oriented copy of the same tree."""
    by_pair = {frozenset(e): tri for e, tri in old.items()}
    out = dict(fresh)
    for e in new_td.tree_edges:
        if e in out:
            continue
        tri = by_pair.get(frozenset(e))
        if tri is None:
            raise ContractViolation("rebuilt edge %s has no guard triple to inherit" % (e,))
        out[e] = tri
    return out


def _pick_attach(
    g: WeightedGraph,
    con: ControlConstruction,
    candidates: Sequence[int],
) -> int:
    """Node to hang a fresh root bag on so that no re-oriented edge ends up
    with an oversized anchor above a node that has children."""
    td = con.td
    cands = sorted(set(candidates))
    if not cands:
        raise ContractViolation("no node available to attach a fresh root to")
    for t in cands:
        if td.children[t]:
            return t
    for t in cands:
        p = td.parent[t]
        if p is None:
            return t
        if len(con.edge_triples[(p, t)].anchor) <= con.eta:
            return t
    for t in cands:
        p = td.parent[t]
        if p is None or p != td.root or len(td.children[p]) != 1:
            continue
        x_e = td.adhesion_of((p, t))
        top = td.bags[p]
        if x_e:
            near = g.distances_from(sorted(x_e), radius=con.ell, targets=set(top))
            if top <= set(near):
                return t
    raise ContractViolation(
        "no safe attachment node: every candidate is a leaf whose tree edge "
        "carries more than eta anchors"
    )


def _color_stars(
    ctx: _EngineCtx,
    g: WeightedGraph,
    con: ControlConstruction,
    zset: FrozenSet[int],
    c: Coloring,
    centers: Dict[int, Tuple[int, ...]],
    level_bound: Fraction,
    what: str,
    pg: PowerGraph,
) -> Coloring:
    """eta = 0: every anchored edge ends in a childless bag, so the tree
    splits along anchor-free edges into stars and each star's bag union is
    centered at its middle node.  Any coloring then meets the bound."""
    td, rset = con.td, con.removed
    vfree = g.vertex_set() - rset
    loose = {e for e in td.tree_edges if not con.edge_triples[e].anchor}
    adj: Dict[int, List[int]] = {t: [] for t in td.nodes}
    for (p, ch) in td.tree_edges:
        if (p, ch) in loose:
            continue
        adj[p].append(ch)
        adj[ch].append(p)
    seen: Set[int] = set()
    merged: Dict[int, int] = {}
    for start in td.nodes:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        for t in comp:
            for n in adj[t]:
                if n not in seen:
                    seen.add(n)
                    comp.append(n)
        if len(comp) == 1:
            center_node = comp[0]
        else:
            parents = {td.parent[t] for t in comp if td.parent[t] in comp}
            kids = set(comp) - parents
            if len(parents) != 1 or any(td.children[t] for t in kids):
                raise ContractViolation(
                    "%s: anchored edges were expected to form a star around one node" % what
                )
            center_node = next(iter(parents))
        piece = td.bag_union(comp) - rset
        if not piece:
            continue
        overlap = piece & set(merged)
        if overlap:
            raise ContractViolation(
                "%s: star pieces overlap outside the removed set at %s"
                % (what, sorted(overlap)[:5])
            )
        cmap = {v: (c.assignment[v] if v in c.assignment else ctx.m) for v in piece}
        cert = CenterCertificate.build(
            g,
            centers[center_node],
            4 * con.ell + con.mu,
            covered=sorted(piece),
            k=con.theta,
        )
        res = centered_color(
            g,
            ctx.lf,
            sorted(g.vertex_set() - piece),
            cert,
            m=ctx.m,
            coloring=Coloring(cmap, ctx.m),
            power=pg,
            what="%s: star piece at node %s" % (what, center_node),
            exact=False,
        )
        merged.update(res.coloring.assignment)
    if set(merged) != vfree:
        raise ContractViolation("%s: star pieces fail to cover everything uncolored" % what)
    out = Coloring(merged, ctx.m)
    check_weak_diameter(
        g, ctx.lf, out, level_bound, "%s: merged star pieces" % what,
        restrict_to=vfree, power=pg, exact=False,
    )
    return out


def _control_rec(
    ctx: _EngineCtx,
    g: WeightedGraph,
    con: ControlConstruction,
    zset: FrozenSet[int],
    c: Coloring,
    centers: Dict[int, Tuple[int, ...]],
    parent_measure: Optional[Tuple[int, int]],
    what: str,
    pg: Optional[PowerGraph],
) -> Coloring:
    con.validate(g, full=ctx.deep)
    _check_centers(g, con.td, centers, con.theta, 3 * con.ell + con.mu, ctx.deep, what)
    td, rset, eta, theta = con.td, con.removed, con.eta, con.theta
    lf, mu, m = ctx.lf, con.mu, ctx.m
    vset = g.vertex_set()
    vfree = vset - rset
    if not zset <= vfree or c.domain != zset:
        raise ContractViolation("%s: precolored set out of step with the removed set" % what)
    root_anchor = con.root_triple.anchor
    far_count = len(vset - (rset | root_anchor))
    measure = (eta, (len(vfree) - len(zset)) + far_count)
    if parent_measure is not None and not measure < parent_measure:
        raise ContractViolation(
            "%s: recursion measure failed to drop (%s -> %s)" % (what, parent_measure, measure)
        )
    level_bound = control_extension_bound(eta, theta, mu, lf, m)
    if not vfree:
        return Coloring({}, m)
    if pg is None:
        pg = power_graph(g, lf)
    if eta == 0:
        return _color_stars(ctx, g, con, zset, c, centers, level_bound, what, pg)
    zone = root_anchor - rset
    if not zone:
        # nothing anchors the zone yet: hang a fresh single-vertex root on a
        # safely chosen node and restart with that vertex as the whole zone
        if zset:
            raise ContractViolation("%s: precolored vertices without an anchored zone" % what)
        cands = [t for t in td.nodes if td.bags[t] - rset]
        t0 = _pick_attach(g, con, cands)
        v = min(td.bags[t0] - rset)
        t1 = max(td.nodes) + 1
        bags = dict(td.bags)
        bags[t1] = frozenset((v,))
        td1 = RootedTreeDecomposition(bags, list(td.tree_edges) + [(t1, t0)], t1)
        triples1 = _rekey_triples(con.edge_triples, td1, {(t1, t0): GuardTriple.single(v)})
        con1 = ControlConstruction(
            td1, rset, eta, theta, mu, lf, GuardTriple.single(v), triples1
        )
        centers1 = dict(centers)
        centers1[t1] = (v,)
        return _control_rec(
            ctx, g, con1, frozenset((v,)), Coloring({v: m}, m), centers1,
            measure, what + " >restart", pg,
        )
    z_ball = frozenset(neighborhood(g, sorted(zone), 3 * lf + mu))
    zsat = z_ball - rset
    if not zset <= zsat:
        raise ContractViolation("%s: precolored vertices outside the zone ball" % what)
    csat = dict(c.assignment)
    for v in zsat - zset:
        csat[v] = m
    measure_sat = (eta, (len(vfree) - len(zsat)) + far_count)
    if vfree <= zsat:
        # the zone ball swallows everything: the uncolored part is centered
        # at the zone anchors and any coloring of it meets the bound
        cert = CenterCertificate.build(g, sorted(zone), 3 * lf + mu, covered=sorted(vfree), k=theta)
        if centered_bound(theta, 3 * lf + mu, lf) > level_bound:
            raise ContractViolation("%s: centered shortcut bound exceeds the level bound" % what)
        res = centered_color(
            g, lf, sorted(rset), cert, m=m,
            coloring=Coloring(csat, m), power=pg,
            what="%s: zone-saturated finish" % what, exact=False,
        )
        return res.coloring
    # main branch: condense everything beyond the zone's bag neighborhood,
    # color the condensed graph one budget level down, patch the zone over
    # the result, lift the patched coloring back, then finish the far parts
    a_prev = control_radii(theta, mu, lf, eta - 1)[-1]
    nf_prev = control_extension_bound(eta - 1, theta, mu, lf, m)
    t0set = {t for t in td.nodes if td.bags[t] & z_ball}
    if td.root not in t0set:
        raise ContractViolation("%s: the root bag lost contact with its own zone" % what)
    reach0 = {td.root}
    grow = [td.root]
    for t in grow:
        for ch in td.children[t]:
            if ch in t0set and ch not in reach0:
                reach0.add(ch)
                grow.append(ch)
    if reach0 != t0set:
        raise ContractViolation("%s: zone bags do not form a rooted subtree" % what)
    u_edges = tuple((p, ch) for (p, ch) in td.tree_edges if p in t0set and ch not in t0set)
    cond = condense(g, td, u_edges, (), lf, theta, a_prev + mu)
    g0 = cond.g0
    bags0: Dict[int, FrozenSet[int]] = {t: td.bags[t] for t in t0set}
    edges0 = [(p, ch) for (p, ch) in td.tree_edges if p in t0set and ch in t0set]
    for e in u_edges:
        bags0[e[1]] = cond.shortcut_parts[e].reach
        edges0.append(e)
    td0 = RootedTreeDecomposition(bags0, edges0, td.root)
    rep0 = validate_td(g0, td0)
    if not rep0["ok"]:
        raise ContractViolation("%s: condensed decomposition invalid: %s" % (what, rep0["failures"][:3]))
    for e in u_edges:
        if td0.adhesion_of(e) != td.adhesion_of(e):
            raise ContractViolation("%s: condensed leaf %s changed its adhesion" % (what, e))
    r_zs: Dict[TreeEdge, FrozenSet[int]] = {}
    for e in edges0:
        if e in cond.shortcut_parts:
            r_zs[e] = frozenset()
            continue
        zx = td.adhesion_of(e) & z_ball
        if not zx:
            raise ContractViolation("%s: zone-internal edge %s misses the zone ball" % (what, e))
        tri = con.edge_triples[e]
        near = g.distances_from(sorted(zx), radius=mu, targets=set(tri.anchor))
        hits = frozenset(v for v in tri.anchor if v in near)
        if not hits:
            raise ContractViolation("%s: edge %s has no guard within mu of the zone" % (what, e))
        r_zs[e] = hits
    r_root = frozenset(zone)
    all_rz: Set[int] = set(r_root)
    for hits in r_zs.values():
        all_rz |= hits
    v0 = g0.vertex_set()
    if not all_rz <= v0:
        raise ContractViolation("%s: zone guards fell outside the condensed graph" % what)
    rp = frozenset((rset & v0) | neighborhood(g0, sorted(all_rz), a_prev + mu))
    ball_rp_mu = set(g0.distances_from(sorted(rp), radius=mu)) if rp else set()

    def derive(tri: GuardTriple, r_z: FrozenSet[int]) -> GuardTriple:
        promoted = frozenset(v for v in tri.free if v in ball_rp_mu)
        return GuardTriple(tri.free - rp, tri.removed | r_z, (tri.both | promoted) - r_z)

    triples0: Dict[TreeEdge, GuardTriple] = {}
    centers0: Dict[int, Tuple[int, ...]] = {t: centers[t] for t in t0set}
    for e in edges0:
        base = con.edge_triples[e]
        triples0[e] = derive(base, r_zs[e])
        if e in cond.shortcut_parts:
            centers0[e[1]] = tuple(sorted(base.all_guards))
    con0 = ControlConstruction(
        td0, rp, eta - 1, theta, mu, lf, derive(con.root_triple, r_root), triples0
    )
    pg0 = power_graph(g0, lf)
    c0 = _control_rec(
        ctx, g0, con0, frozenset(), Coloring({}, m), centers0,
        measure, what + " >condensed", pg0,
    )
    if not zsat <= rp:
        raise ContractViolation("%s: the zone escaped the patch region" % what)
    covered = rp - rset
    c_z = Coloring({v: (csat[v] if v in csat else m) for v in covered}, m)
    cert = CenterCertificate.build(
        g0, sorted(r_root), 3 * lf + 3 * mu + a_prev, covered=sorted(covered), k=theta
    )
    patched = patch_colorings(
        g0, lf, cert, sorted(rset & v0), c_z, c0,
        mode="general", n_claimed=nf_prev, m=m, power=pg0,
        what="%s: zone patch" % what, exact=False,
    )
    big_centers: Dict[TreeEdge, List[int]] = {}
    for e in u_edges:
        if len(td.adhesion_of(e)) > theta:
            big_centers[e] = sorted(con.edge_triples[e].all_guards)
    lr = lift_condensation_coloring(
        cond, patched.coloring, m, deleted=sorted(rset),
        centers_per_big_adhesion=big_centers, n_claimed=patched.bound,
        power=pg, what="%s: zone lift" % what, exact=False,
    )
    if lr.bound != level_bound:
        raise ContractViolation(
            "%s: lift bound %s drifted from the level bound %s"
            % (what, frac_str(lr.bound), frac_str(level_bound))
        )
    cprime = lr.coloring
    out = dict(cprime.assignment)
    for e in u_edges:
        part = td.subtree_vertices(e)
        part_free = part - rset
        missing = part_free - set(out)
        if not missing:
            continue
        tri = con.edge_triples[e]
        if len(tri.anchor) > eta:
            raise ContractViolation(
                "%s: edge %s exceeds eta yet its part was not finished by the lift" % (what, e)
            )
        if part & (root_anchor - rset):
            raise ContractViolation("%s: far part %s contains zone anchors" % (what, e))
        x_e = td.adhesion_of(e)
        z_e = frozenset(g.distances_from(sorted(x_e), radius=3 * lf, within=part))
        zr = z_e - rset
        w_cands = tri.all_guards
        if zr and w_cands:
            near = g.distances_from(sorted(zr), radius=3 * lf + mu, targets=set(w_cands))
            wset = frozenset(v for v in w_cands if v in near)
        else:
            wset = frozenset()
        rstar = frozenset(((part & (rset | root_anchor)) - wset) | (vset - part))
        if rstar & (part - rset):
            raise ContractViolation("%s: far guard set bit into the part itself" % what)
        if not (z_ball | rset) <= (z_e | rstar):
            raise ContractViolation("%s: far re-rooting shrank the zone" % what)
        anchor_star = tri.anchor | wset
        if not (rset | root_anchor) <= (rstar | anchor_star):
            raise ContractViolation("%s: far re-rooting shrank the anchored territory" % what)
        m_new = len(vset - (z_e | rstar)) + len(vset - (rstar | anchor_star))
        if m_new > measure_sat[1]:
            raise ContractViolation("%s: far measure grew at edge %s" % (what, e))
        q = max(td.nodes) + 1
        if m_new < measure_sat[1]:
            td_star = td.subdivide_edge(e, q, x_e).reroot(q)
            te_edges = {fe for fe in td.tree_edges if fe[0] in set(td.subtree_nodes(e))}
            fresh = {
                (q, e[1]): GuardTriple(tri.free - rstar, tri.removed - wset, tri.free | tri.both),
                (q, e[0]): GuardTriple(tri.free - rstar, tri.removed - wset, tri.free | tri.both),
            }
            triples_star: Dict[TreeEdge, GuardTriple] = dict(fresh)
            by_pair = {frozenset(fe): (fe, con.edge_triples[fe]) for fe in td.tree_edges if fe != e}
            for ne in td_star.tree_edges:
                if ne in triples_star:
                    continue
                fe, t2 = by_pair[frozenset(ne)]
                if fe in te_edges:
                    triples_star[ne] = GuardTriple(
                        t2.free - rstar, t2.removed - wset, t2.free | t2.both
                    )
                else:
                    triples_star[ne] = GuardTriple(
                        t2.free - rstar,
                        (t2.all_guards) - ((wset & rset) | (x_e - rset)),
                        t2.free | t2.both,
                    )
            root_star = GuardTriple(tri.free - rstar, tri.removed - wset, tri.free | tri.both | wset)
            con_star = ControlConstruction(td_star, rstar, eta, theta, mu, lf, root_star, triples_star)
            centers_star = dict(centers)
            centers_star[q] = tuple(sorted(tri.all_guards))
            zstar = z_e - rstar
            cs_map = {v: (cprime.assignment[v] if v in cprime.assignment else m) for v in zstar}
            sub = _control_rec(
                ctx, g, con_star, zstar, Coloring(cs_map, m), centers_star,
                measure_sat, what + " >far", pg,
            )
            if not part_free <= sub.domain:
                raise ContractViolation("%s: far coloring misses part of edge %s" % (what, e))
            c_e = {v: sub.assignment[v] for v in part_free}
        else:
            # measure tie: the part holds no fresh zone at all, so restart
            # inside it from one untouched vertex with everything colored so
            # far stamped into the removed set
            if not z_e <= rset or not rstar <= (z_ball | rset):
                raise ContractViolation("%s: stalled far part is not in the endgame shape" % what)
            leftover = vfree - z_ball
            if not leftover or not leftover <= part:
                raise ContractViolation("%s: endgame leftover strayed outside the part" % what)
            v_star = min(leftover)
            cands = [t for t in td.subtree_nodes(e) if v_star in td.bags[t]]
            t0 = _pick_attach(g, con, cands)
            t1 = max(td.nodes) + 1
            bags1 = dict(td.bags)
            bags1[t1] = frozenset((v_star,))
            td1 = RootedTreeDecomposition(bags1, list(td.tree_edges) + [(t1, t0)], t1)
            r1 = frozenset(z_ball | rset)
            derived1: Dict[TreeEdge, GuardTriple] = {}
            for fe, t2 in con.edge_triples.items():
                derived1[fe] = GuardTriple(t2.free - r1, t2.removed, t2.free | t2.both)
            triples1 = _rekey_triples(derived1, td1, {(t1, t0): GuardTriple.single(v_star)})
            con1 = ControlConstruction(
                td1, r1, eta, theta, mu, lf, GuardTriple.single(v_star), triples1
            )
            centers1 = dict(centers)
            centers1[t1] = (v_star,)
            sub = _control_rec(
                ctx, g, con1, frozenset((v_star,)), Coloring({v_star: m}, m), centers1,
                measure_sat, what + " >endgame", pg,
            )
            if not part_free <= sub.domain:
                raise ContractViolation("%s: endgame coloring misses part of edge %s" % (what, e))
            c_e = {v: sub.assignment[v] for v in part_free}
        for v, col in c_e.items():
            if v in out and out[v] != col:
                raise ContractViolation("%s: far parts disagree at vertex %s" % (what, v))
            out[v] = col
    if set(out) != vfree:
        raise ContractViolation("%s: merged coloring does not cover everything uncolored" % what)
    for v in zset:
        if out[v] != c.assignment[v]:
            raise ContractViolation("%s: the extension changed a precolored vertex" % what)
    result = Coloring(out, m)
    if ctx.deep:
        check_weak_diameter(
            g, lf, result, level_bound, "%s: level check" % what,
            restrict_to=vfree, power=pg, exact=False,
        )
    return result


def color_control_construction(
    g: WeightedGraph,
    ell: object,
    con: ControlConstruction,
    z: Iterable[int] = (),
    precoloring: Optional[Coloring] = None,
    m: int = 2,
    bag_centers: Optional[Dict[int, Iterable[int]]] = None,
    deep_verify: bool = False,
    exact_check: bool = True,
    what: str = "control coloring",
) -> ControlColorResult:
    """Extend a coloring of the guarded zone to all of V - removed.

    z must sit inside the radius 3*ell+mu ball of the root anchors; the
    precoloring (constant m by default) is kept verbatim.  bag_centers maps
    every node to at most theta vertices of its bag covering the bag within
    radius 3*ell+mu.  The result is an m-coloring whose monochromatic
    components have weak diameter at most control_extension_bound hops in
    the full power graph, re-verified before returning.
    """
    lf = as_fraction(ell)
    if lf != con.ell:
        raise GraphError("scale %s does not match the construction's %s" % (frac_str(lf), frac_str(con.ell)))
    if m < 2:
        raise GraphError("the extension engine needs m >= 2 colors")
    con.validate(g, full=True)
    if bag_centers is None:
        raise GraphError("per-node bag centers are required")
    centers = {t: tuple(sorted(set(cs))) for t, cs in bag_centers.items()}
    _check_centers(g, con.td, centers, con.theta, 3 * lf + con.mu, True, what)
    zf = frozenset(z)
    unknown = zf - g.vertex_set()
    if unknown:
        raise GraphError("precolored vertices %s are not in the graph" % sorted(unknown)[:5])
    zone = con.root_triple.anchor - con.removed
    ball = neighborhood(g, sorted(zone), 3 * lf + con.mu) if zone else set()
    if not zf <= ball:
        raise GraphError("the precolored set must sit inside the guarded zone ball")
    if precoloring is None:
        precoloring = Coloring.constant(zf, m, color=m)
    if precoloring.domain != zf:
        raise GraphError("precoloring domain must equal the precolored set")
    if precoloring.num_colors > m:
        raise GraphError("precoloring uses more than m colors")
    zset = zf - con.removed
    c0 = Coloring({v: precoloring.assignment[v] for v in zset}, m)
    ctx = _EngineCtx(lf, m, deep_verify)
    limit = 6 * len(g) + _RECURSION_HEADROOM
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
    pg = power_graph(g, lf)
    out = _control_rec(ctx, g, con, zset, c0, centers, None, what, pg)
    bound = control_extension_bound(con.eta, con.theta, con.mu, lf, m)
    report = check_weak_diameter(
        g, lf, out, bound, what,
        restrict_to=g.vertex_set() - con.removed, power=pg, exact=exact_check,
    )
    return ControlColorResult(out, bound, report)


def color_centered_bags(
    g: WeightedGraph,
    ell: object,
    td: RootedTreeDecomposition,
    centers: Dict[int, Iterable[int]],
    radius: object,
    removed: Iterable[int] = (),
    m: int = 2,
    deep_verify: bool = False,
    exact_check: bool = True,
    what: str = "centered bags",
) -> ControlColorResult:
    """Color a graph whose tree decomposition has every bag within `radius`
    of a few per-node centers.

    Per tree edge the parent's centers are re-anchored inside the adhesion
    (one witness per center that can see the adhesion), which turns the
    center map into a control construction at mu = 2*radius whose exclusion
    conditions hold vacuously for any removed set.
    """
    lf = as_fraction(ell)
    rf = as_fraction(radius)
    if rf < 0:
        raise GraphError("center radius must be nonnegative")
    cmap = {t: tuple(sorted(set(cs))) for t, cs in centers.items()}
    if set(cmap) != set(td.nodes):
        raise GraphError("center map must cover the nodes exactly")
    theta = 1
    for t in td.nodes:
        bag = td.bags[t]
        cs = cmap[t]
        if not set(cs) <= bag:
            raise GraphError("node %s centers leave its bag" % t)
        if bag and not cs:
            raise GraphError("node %s has a nonempty bag but no centers" % t)
        theta = max(theta, len(cs))
        if bag:
            near = g.distances_from(list(cs), radius=rf, targets=set(bag))
            stray = bag - set(near)
            if stray:
                raise ContractViolation(
                    "%s: node %s bag strays %s beyond the claimed radius"
                    % (what, t, sorted(stray)[:5])
                )
    triples: Dict[TreeEdge, GuardTriple] = {}
    empty = frozenset()
    for e in td.tree_edges:
        x_e = td.adhesion_of(e)
        if not x_e:
            triples[e] = GuardTriple(empty, empty, empty)
            continue
        witnesses: Set[int] = set()
        for v in cmap[e[0]]:
            near = g.distances_from([v], radius=rf, targets=set(x_e))
            hits = [x for x in x_e if x in near]
            if hits:
                witnesses.add(min(hits))
        if not witnesses:
            raise ContractViolation("%s: adhesion of %s sees no parent center" % (what, e))
        triples[e] = GuardTriple(empty, empty, frozenset(witnesses))
    root_triple = GuardTriple(empty, empty, frozenset(cmap[td.root]))
    con = ControlConstruction(
        td, frozenset(removed), theta, theta, 2 * rf, lf, root_triple, triples
    )
    return color_control_construction(
        g, lf, con, z=(), precoloring=None, m=m, bag_centers=cmap,
        deep_verify=deep_verify, exact_check=exact_check, what=what,
    )


# -- geodesic trees and tripod decompositions --------------------------------


@dataclass(frozen=True)
class GeodesicTree:
    """Shortest-path tree: parent links plus exact root distances."""

    root: int
    parent: Dict[int, Optional[int]]
    dist: Dict[int, Fraction]


def bfs_geodesic_tree(g: WeightedGraph, root: int) -> GeodesicTree:
    """Exact-distance shortest-path tree from root; the parent is always the
    smallest-id neighbor lying on some shortest path."""
    if root not in g.vertex_set():
        raise GraphError("unknown root %s" % (root,))
    dist = g.distances_from([root])
    missing = g.vertex_set() - set(dist)
    if missing:
        raise GraphError("graph is disconnected; unreached %s" % sorted(missing)[:5])
    parent: Dict[int, Optional[int]] = {root: None}
    for v in g.vertices:
        if v == root:
            continue
        best: Optional[int] = None
        for (u, w) in g.neighbors(v):
            if dist[u] + w == dist[v] and (best is None or u < best):
                best = u
        if best is None:
            raise ContractViolation("no predecessor reproduces the distance of %s" % v)
        parent[v] = best
    return GeodesicTree(root, parent, dist)


def distance_projection(g: WeightedGraph, root: int) -> Dict[int, Fraction]:
    """Exact distance from root as a 1-Lipschitz vertex projection."""
    dist = g.distances_from([root])
    missing = g.vertex_set() - set(dist)
    if missing:
        raise GraphError("graph is disconnected; unreached %s" % sorted(missing)[:5])
    return dist


def layering_projection(
    g: WeightedGraph, layering: Sequence[Iterable[int]], eps0: object
) -> Dict[int, Fraction]:
    """eps0 * layer-index as a vertex projection.

    Every edge must join the same or adjacent layers and weigh at least
    eps0 times the layer gap, which makes the projection exactly
    1-Lipschitz.
    """
    ef = as_fraction(eps0)
    if ef <= 0:
        raise GraphError("layer resolution eps0 must be positive")
    idx: Dict[int, int] = {}
    for i, layer in enumerate(layering):
        for v in layer:
            if v in idx:
                raise GraphError("vertex %s appears in two layers" % v)
            idx[v] = i
    missing = g.vertex_set() - set(idx)
    if missing:
        raise GraphError("layering misses vertices %s" % sorted(missing)[:5])
    alien = set(idx) - g.vertex_set()
    if alien:
        raise GraphError("layering names unknown vertices %s" % sorted(alien)[:5])
    for (u, v, w) in g.edges:
        gap = abs(idx[u] - idx[v])
        if gap > 1:
            raise GraphError("edge (%s, %s) spans %d layers" % (u, v, gap))
        if ef * gap > w:
            raise GraphError(
                "edge (%s, %s) is lighter than eps0 across a layer step" % (u, v)
            )
    return {v: ef * i for v, i in idx.items()}


@dataclass(frozen=True)
class TripodDecomposition:
    """Tree decomposition in which every bag is the union of at most three
    vertical paths (bottom to top) of the geodesic tree."""

    td: RootedTreeDecomposition
    paths: Dict[int, Tuple[Tuple[int, ...], ...]]
    tree: GeodesicTree


def _check_simple(g: WeightedGraph) -> None:
    seen: Set[Tuple[int, int]] = set()
    for (u, v, _) in g.edges:
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError("parallel edge (%s, %s); the embedding machinery needs a simple graph" % key)
        seen.add(key)


def _trace_faces(
    g: WeightedGraph, rotation: Dict[int, Sequence[int]]
) -> List[Tuple[int, ...]]:
    """Face walks of the rotation system; checks the Euler count and that
    every face walk is a simple cycle."""
    if set(rotation) != set(g.vertex_set()):
        raise GraphError("rotation system must cover the vertices exactly")
    succ: Dict[Tuple[int, int], int] = {}
    for v in g.vertices:
        order = tuple(rotation[v])
        around = sorted(n for (n, _) in g.neighbors(v))
        if sorted(order) != around or len(set(order)) != len(order):
            raise GraphError("rotation at %s does not list its neighbors exactly once" % v)
        k = len(order)
        for i, u in enumerate(order):
            succ[(v, u)] = order[(i + 1) % k]
    faces: List[Tuple[int, ...]] = []
    visited: Set[Tuple[int, int]] = set()
    for start in sorted(succ):
        if start in visited:
            continue
        walk: List[int] = []
        cur = start
        while True:
            visited.add(cur)
            walk.append(cur[0])
            cur = (cur[1], succ[(cur[1], cur[0])])
            if cur == start:
                break
        if len(set(walk)) != len(walk):
            raise GraphError(
                "a face walk revisits a vertex; the embedding must be 2-connected"
            )
        faces.append(tuple(walk))
    e_count = len(g.edges)
    if len(g) - e_count + len(faces) != 2:
        raise GraphError("rotation system does not describe a sphere embedding")
    return faces


def tripod_decomposition(
    g: WeightedGraph,
    rotation: Optional[Dict[int, Sequence[int]]],
    tree: GeodesicTree,
) -> TripodDecomposition:
    """Tree decomposition of a connected embedded graph into bags made of at
    most three vertical paths of `tree`.

    Faces longer than a triangle are star-triangulated with throwaway apex
    vertices (leaves of the tree, stripped from the output).  The recursion
    walks wedges: regions bounded by two root paths and an edge, split at
    the apex of the boundary face.  Trees need no rotation system.
    """
    _check_simple(g)
    verts = list(g.vertices)
    if not verts:
        raise GraphError("nothing to decompose")
    if not g.is_connected():
        raise GraphError("tripod decomposition needs a connected graph")
    root = tree.root
    if len(verts) == 1:
        td = RootedTreeDecomposition({0: frozenset(verts)}, [], 0)
        return TripodDecomposition(td, {0: (tuple(verts),)}, tree)
    if len(g.edges) == len(verts) - 1:
        bags = {root: frozenset((root,))}
        edges: List[TreeEdge] = []
        paths: Dict[int, Tuple[Tuple[int, ...], ...]] = {root: ((root,),)}
        for v in verts:
            if v == root:
                continue
            p = tree.parent[v]
            bags[v] = frozenset((v, p))
            edges.append((p, v))
            paths[v] = ((v, p),)
        td = RootedTreeDecomposition(bags, edges, root)
        return TripodDecomposition(td, paths, tree)
    if rotation is None:
        raise GraphError("a rotation system is required once the graph has cycles")
    faces = _trace_faces(g, rotation)
    third: Dict[Tuple[int, int], int] = {}
    star_parent: Dict[int, int] = {}
    next_star = max(verts) + 1
    star_edges = 0
    for face in faces:
        k = len(face)
        if k == 3:
            a, b, ccc = face
            third[(a, b)] = ccc
            third[(b, ccc)] = a
            third[(ccc, a)] = b
        else:
            s = next_star
            next_star += 1
            star_parent[s] = face[0]
            star_edges += k
            for i in range(k):
                x, y = face[i], face[(i + 1) % k]
                third[(x, y)] = s
                third[(y, s)] = x
                third[(s, x)] = y
    if len(third) != 2 * (len(g.edges) + star_edges):
        raise ContractViolation("triangulation left directed edges uncovered")
    parent_h: Dict[int, Optional[int]] = dict(tree.parent)
    parent_h.update(star_parent)
    tree_pairs = {
        frozenset((v, p)) for v, p in parent_h.items() if p is not None
    }
    path_cache: Dict[int, Tuple[int, ...]] = {root: (root,)}

    def rp(x: int) -> Tuple[int, ...]:
        stackx = []
        while x not in path_cache:
            stackx.append(x)
            x = parent_h[x]
        for y in reversed(stackx):
            path_cache[y] = (y,) + path_cache[parent_h[y]]
        return path_cache[stackx[0]] if stackx else path_cache[x]

    def real_path(x: int) -> Tuple[int, ...]:
        p = rp(x)
        return p[1:] if x in star_parent else p

    bags2: Dict[int, FrozenSet[int]] = {}
    paths2: Dict[int, Tuple[Tuple[int, ...], ...]] = {}
    td_edges: List[TreeEdge] = []
    counter = [0]

    def new_node(corners: Tuple[int, ...], parent_node: Optional[int]) -> int:
        nid = counter[0]
        counter[0] += 1
        ps: List[Tuple[int, ...]] = []
        for x in corners:
            px = real_path(x)
            if px and px not in ps:
                ps.append(px)
        bag: Set[int] = set()
        for px in ps:
            bag.update(px)
        bags2[nid] = frozenset(bag)
        paths2[nid] = tuple(ps)
        if parent_node is not None:
            td_edges.append((parent_node, nid))
        return nid

    nontree = sorted(
        (min(u, v), max(u, v))
        for (u, v, _) in g.edges
        if frozenset((u, v)) not in tree_pairs
    )
    a0, b0 = nontree[0]
    root_node = new_node((a0, b0), None)
    stack: List[Tuple[int, int, int]] = [(b0, a0, root_node), (a0, b0, root_node)]
    seen_states: Set[Tuple[int, int]] = {(a0, b0), (b0, a0)}
    faces_done: Set[Tuple[int, int, int]] = set()
    while stack:
        a, b, pnode = stack.pop()
        snode = new_node((a, b), pnode)
        w = third[(a, b)]
        key = min(((a, b, w), (b, w, a), (w, a, b)))
        if key in faces_done:
            raise ContractViolation("wedge recursion met the same face twice")
        faces_done.add(key)
        mnode = new_node((a, b, w), snode)
        for (x, y) in ((a, w), (w, b)):
            if frozenset((x, y)) in tree_pairs:
                continue
            if (x, y) in seen_states:
                raise ContractViolation("wedge recursion met the same directed edge twice")
            seen_states.add((x, y))
            stack.append((x, y, mnode))
    if 3 * len(faces_done) != len(third):
        raise ContractViolation(
            "wedge recursion covered %d of %d faces" % (len(faces_done), len(third) // 3)
        )
    td = RootedTreeDecomposition(bags2, td_edges, root_node)
    rep = validate_td(g, td)
    if not rep["ok"]:
        raise ContractViolation("tripod decomposition invalid: %s" % rep["failures"][:3])
    return TripodDecomposition(td, paths2, tree)


@dataclass(frozen=True)
class GeodesicCertificate:
    """Checkable witness that a tree decomposition is made of vertical
    paths of a shortest-path tree (up to `slack` per path)."""

    tree: GeodesicTree
    td: RootedTreeDecomposition
    paths: Dict[int, Tuple[Tuple[int, ...], ...]]
    slack: Fraction = Fraction(0)

    def verify(self, g: WeightedGraph) -> None:
        tree = self.tree
        if tree.root not in g.vertex_set():
            raise ContractViolation("certificate root is not a vertex")
        dist = g.distances_from([tree.root])
        if set(tree.dist) != g.vertex_set() or set(tree.parent) != g.vertex_set():
            raise ContractViolation("certificate tree does not cover the vertices")
        for v in g.vertices:
            if v == tree.root:
                if tree.parent[v] is not None or tree.dist[v] != 0:
                    raise ContractViolation("certificate root data is wrong")
                continue
            p = tree.parent[v]
            w = None
            for (u, wu) in g.neighbors(v):
                if u == p and (w is None or wu < w):
                    w = wu
            if w is None:
                raise ContractViolation("tree parent of %s is not a neighbor" % v)
            if tree.dist[v] > dist[v] + self.slack or tree.dist[v] < dist[v]:
                raise ContractViolation("certified distance of %s is off" % v)
            if tree.dist[p] + w != tree.dist[v] and self.slack == 0:
                raise ContractViolation("tree edge into %s is not on a shortest path" % v)
        rep = validate_td(g, self.td)
        if not rep["ok"]:
            raise ContractViolation("certified decomposition invalid: %s" % rep["failures"][:3])
        if set(self.paths) != set(self.td.nodes):
            raise ContractViolation("certificate paths do not cover the nodes")
        for t in self.td.nodes:
            ps = self.paths[t]
            if len(ps) > 3:
                raise ContractViolation("node %s carries %d > 3 paths" % (t, len(ps)))
            union: Set[int] = set()
            for path in ps:
                if not path:
                    raise ContractViolation("node %s carries an empty path" % t)
                for i in range(len(path) - 1):
                    if tree.parent[path[i]] != path[i + 1]:
                        raise ContractViolation(
                            "node %s path breaks the parent chain at %s" % (t, path[i])
                        )
                union.update(path)
            if frozenset(union) != self.td.bags[t]:
                raise ContractViolation("node %s bag is not the union of its paths" % t)


# -- slabs --------------------------------------------------------------------


@dataclass(frozen=True)
class Slab:
    family: str
    index: int
    lo: Fraction
    hi: Fraction
    window_lo: Fraction
    window_hi: Fraction
    owned: Tuple[int, ...]
    window: Tuple[int, ...]


@dataclass(frozen=True)
class SlabSystem:
    """Two interleaved families of slabs over a 1-Lipschitz projection.

    Family a tiles [j*W, (j+1)*W); family b is shifted by W/2.  Every
    vertex is owned by the family in which it sits deeper (ties go to a),
    so owned regions of one family are pairwise further than W/2 apart.
    Windows pad each slab by `pad` on both sides.
    """

    ell: Fraction
    width: Fraction
    pad: Fraction
    projection: Dict[int, Fraction]
    slabs: Tuple[Slab, ...]
    owner_of: Dict[int, Tuple[str, int]]

    def slab_of(self, family: str, index: int) -> Slab:
        for s in self.slabs:
            if s.family == family and s.index == index:
                return s
        raise GraphError("no slab (%s, %s)" % (family, index))


def make_slabs(
    g: WeightedGraph,
    ell: object,
    projection: Dict[int, Fraction],
    slab_width_factor: object = 8,
    padding: object = None,
) -> SlabSystem:
    """Cut the projection range into two padded slab families."""
    lf = as_fraction(ell)
    if lf <= 0:
        raise GraphError("slab scale must be positive")
    swf = as_fraction(slab_width_factor)
    if swf < 4:
        raise GraphError("slab width must be at least 4*ell")
    width = swf * lf
    pad = 2 * lf if padding is None else as_fraction(padding)
    if pad < 0:
        raise GraphError("padding must be nonnegative")
    if set(projection) < g.vertex_set():
        raise GraphError("projection misses vertices")
    for (u, v, w) in g.edges:
        if abs(projection[u] - projection[v]) > w:
            raise GraphError("projection is not 1-Lipschitz across edge (%s, %s)" % (u, v))
    half = width / 2
    owner_of: Dict[int, Tuple[str, int]] = {}
    owned: Dict[Tuple[str, int], List[int]] = {}
    for v in g.vertices:
        f = projection[v]
        j = (f / width).__floor__()
        depth_a = min(f - j * width, (j + 1) * width - f)
        k = ((f - half) / width).__floor__()
        depth_b = min(f - (k * width + half), (k + 1) * width + half - f)
        key = ("a", j) if depth_a >= depth_b else ("b", k)
        owner_of[v] = key
        owned.setdefault(key, []).append(v)
    by_f = sorted(g.vertices, key=lambda v: (projection[v], v))
    fvals = [projection[v] for v in by_f]
    slabs: List[Slab] = []
    for (family, index) in sorted(owned):
        lo = index * width + (half if family == "b" else 0)
        hi = lo + width
        wlo, whi = lo - pad, hi + pad
        left = bisect.bisect_left(fvals, wlo)
        right = bisect.bisect_left(fvals, whi)
        window = tuple(sorted(by_f[left:right]))
        slabs.append(
            Slab(family, index, lo, hi, wlo, whi, tuple(sorted(owned[(family, index)])), window)
        )
    return SlabSystem(lf, width, pad, dict(projection), tuple(slabs), owner_of)


@dataclass(frozen=True)
class SlabColoring:
    family: str
    index: int
    coloring: Coloring
    bound: Fraction


def combine_slab_colorings(
    g: WeightedGraph,
    ell: object,
    system: SlabSystem,
    slab_colorings: Sequence[SlabColoring],
    power: Optional[PowerGraph] = None,
    what: str = "slab combination",
) -> Tuple[Coloring, Fraction]:
    """Four-color the graph from per-slab two-colorings: every vertex keeps
    the color its owner slab gave it, offset by the family.  Checks that
    each monochromatic power-graph component stays inside one padded slab;
    the combined bound is the worst slab bound plus two padding hops."""
    lf = as_fraction(ell)
    by_key = {(sc.family, sc.index): sc for sc in slab_colorings}
    assign: Dict[int, int] = {}
    for v in g.vertices:
        fam, idx = system.owner_of[v]
        sc = by_key.get((fam, idx))
        if sc is None:
            raise GraphError("%s: no slab coloring for (%s, %s)" % (what, fam, idx))
        if sc.coloring.num_colors > 2:
            raise GraphError("%s: slab colorings must use at most 2 colors" % what)
        if v not in sc.coloring.assignment:
            raise ContractViolation("%s: owner slab left vertex %s uncolored" % (what, v))
        assign[v] = sc.coloring.assignment[v] + (2 if fam == "b" else 0)
    combined = Coloring(assign, 4)
    pgr = power if power is not None else power_graph(g, lf)
    for comp in monochromatic_components(pgr, combined, within=g.vertex_set()):
        fam, idx = system.owner_of[comp[0]]
        slab = system.slab_of(fam, idx)
        for v in comp:
            if system.owner_of[v] != (fam, idx):
                raise ContractViolation(
                    "%s: a monochromatic component crosses slab ownership" % what
                )
            f = system.projection[v]
            if not slab.window_lo <= f < slab.window_hi:
                raise ContractViolation(
                    "%s: a monochromatic component leaves its padded slab" % what
                )
    worst = max((sc.bound for sc in slab_colorings), default=Fraction(0))
    bound = worst + 2 * ceil_frac(system.pad / lf)
    return combined, bound


# -- planar and layered pipelines ---------------------------------------------


@dataclass(frozen=True)
class SlabColorResult:
    coloring: Coloring
    bound: Fraction
    report: VerificationReport
    systems: Tuple[SlabSystem, ...]
    certificates: Tuple[GeodesicCertificate, ...]


def _window_segments(
    trip: TripodDecomposition, wset: Set[int]
) -> Dict[int, Tuple[Tuple[int, ...], ...]]:
    """Per node, the window slices of its certified paths.  The projection
    is monotone along every path, so each slice must be contiguous."""
    segs: Dict[int, Tuple[Tuple[int, ...], ...]] = {}
    for t in trip.td.nodes:
        out: List[Tuple[int, ...]] = []
        for path in trip.paths[t]:
            idx = [i for i, v in enumerate(path) if v in wset]
            if not idx:
                continue
            if idx[-1] - idx[0] != len(idx) - 1:
                raise ContractViolation("a path's window slice is not contiguous")
            out.append(tuple(path[idx[0]:idx[-1] + 1]))
        segs[t] = tuple(out)
    return segs


def _restrict_tripods(
    trip: TripodDecomposition,
    window_segs: Dict[int, Tuple[Tuple[int, ...], ...]],
    keep: Set[int],
) -> Tuple[RootedTreeDecomposition, Dict[int, Tuple[int, ...]]]:
    """Keep only the window slices inside one window component, contract
    slack nodes away, and return the pruned decomposition together with its
    min-projection path centers."""
    segs: Dict[int, List[Tuple[int, ...]]] = {}
    bags: Dict[int, FrozenSet[int]] = {}
    for t in trip.td.nodes:
        out: List[Tuple[int, ...]] = []
        for sl in window_segs[t]:
            if sl[0] not in keep:
                if any(v in keep for v in sl):
                    raise ContractViolation("a window slice straddles two window components")
                continue
            if not all(v in keep for v in sl):
                raise ContractViolation("a window slice straddles two window components")
            out.append(sl)
        segs[t] = out
        bags[t] = frozenset(v for s in out for v in s)
    alive = set(trip.td.nodes)
    adj: Dict[int, Set[int]] = {t: set() for t in alive}
    for (p, ch) in trip.td.tree_edges:
        adj[p].add(ch)
        adj[ch].add(p)
    root = trip.td.root
    work = list(trip.td.tree_edges)
    while work:
        a, b = work.pop()
        if a not in alive or b not in alive or b not in adj[a]:
            continue
        if bags[a] <= bags[b]:
            a, b = b, a  # absorb b into a only below; flip so the superset survives
        if not bags[b] <= bags[a]:
            continue
        adj[a].discard(b)
        for n in adj[b]:
            adj[n].discard(b)
            if n != a:
                adj[n].add(a)
                adj[a].add(n)
                work.append((a, n))
        alive.discard(b)
        if root == b:
            root = a
    seen = {root}
    edges: List[TreeEdge] = []
    queue = [root]
    for t in queue:
        for n in sorted(adj[t]):
            if n not in seen:
                seen.add(n)
                edges.append((t, n))
                queue.append(n)
    if seen != alive:
        raise ContractViolation("slab restriction disconnected the decomposition")
    td = RootedTreeDecomposition({t: bags[t] for t in alive}, edges, root)
    centers = {
        t: tuple(sorted({s[-1] for s in segs[t]}))
        for t in alive
    }
    return td, centers


def color_planar(
    g: WeightedGraph,
    ell: object,
    rotation: Optional[Dict[int, Sequence[int]]],
    slab_width_factor: object = 8,
    padding: object = None,
    deep_verify: bool = False,
    what: str = "planar coloring",
) -> SlabColorResult:
    """Four-color an embedded planar graph so every monochromatic component
    of the scale-ell power graph has bounded weak diameter.

    Per connected component: a geodesic tree from the smallest vertex, a
    tripod decomposition over the rotation system, metric slabs over the
    root-distance projection, one guarded-bags coloring per padded slab
    component, and the two-family combiner.  The certificate, the slab
    containment, and the final bound are all re-verified.
    """
    lf = as_fraction(ell)
    _check_simple(g)
    mw = g.max_edge_weight()
    if mw is not None and mw > lf:
        raise GraphError("edge weight %s exceeds ell; rescale first" % frac_str(mw))
    assign: Dict[int, int] = {}
    bound = Fraction(0)
    systems: List[SlabSystem] = []
    certs: List[GeodesicCertificate] = []
    for comp in g.connected_components():
        gc = g.induced(comp)
        tree = bfs_geodesic_tree(gc, comp[0])
        rot_c = None if rotation is None else {v: rotation[v] for v in comp}
        trip = tripod_decomposition(gc, rot_c, tree)
        cert = GeodesicCertificate(tree, trip.td, trip.paths, Fraction(0))
        cert.verify(gc)
        system = make_slabs(gc, lf, dict(tree.dist), slab_width_factor, padding)
        radius = system.width + 2 * system.pad + 2 * cert.slack
        scs: List[SlabColoring] = []
        for slab in system.slabs:
            wset = set(slab.window)
            window_segs = _window_segments(trip, wset)
            slab_assign: Dict[int, int] = {}
            slab_bound = Fraction(0)
            wg = gc.induced(sorted(wset))
            for kcomp in wg.connected_components():
                gk = gc.induced(kcomp)
                tdk, centersk = _restrict_tripods(trip, window_segs, set(kcomp))
                res = color_centered_bags(
                    gk, lf, tdk, centersk, radius, m=2,
                    deep_verify=deep_verify, exact_check=False,
                    what="%s: slab %s%d" % (what, slab.family, slab.index),
                )
                slab_assign.update(res.coloring.assignment)
                slab_bound = max(slab_bound, res.bound)
            scs.append(SlabColoring(slab.family, slab.index, Coloring(slab_assign, 2), slab_bound))
        combined, cbound = combine_slab_colorings(gc, lf, system, scs, what=what)
        assign.update(combined.assignment)
        bound = max(bound, cbound)
        systems.append(system)
        certs.append(cert)
    coloring = Coloring(assign, 4)
    report = check_weak_diameter(g, lf, coloring, bound, what)
    return SlabColorResult(coloring, bound, report, tuple(systems), tuple(certs))


def color_layered(
    g: WeightedGraph,
    ell: object,
    layering: Sequence[Iterable[int]],
    eps0: object,
    slab_width_factor: object = 8,
    padding: object = None,
    exact_td_max: int = 20,
    deep_verify: bool = False,
    what: str = "layered coloring",
) -> SlabColorResult:
    """Four-color a layered graph: slabs over the layering projection, the
    bounded-treewidth colorer per padded slab component, then the
    two-family combiner.  Weights must sit in [eps0, ell]."""
    from .twcolor import color_bounded_treewidth

    lf = as_fraction(ell)
    ef = as_fraction(eps0)
    mn = g.min_edge_weight()
    if mn is not None and mn < ef:
        raise GraphError("edge weight %s is below eps0" % frac_str(mn))
    mw = g.max_edge_weight()
    if mw is not None and mw > lf:
        raise GraphError("edge weight %s exceeds ell" % frac_str(mw))
    projection = layering_projection(g, layering, ef)
    assign: Dict[int, int] = {}
    bound = Fraction(0)
    systems: List[SlabSystem] = []
    for comp in g.connected_components():
        gc = g.induced(comp)
        system = make_slabs(gc, lf, {v: projection[v] for v in comp}, slab_width_factor, padding)
        scs: List[SlabColoring] = []
        for slab in system.slabs:
            wset = set(slab.window)
            slab_assign: Dict[int, int] = {}
            slab_bound = Fraction(0)
            wg = gc.induced(sorted(wset))
            for kcomp in wg.connected_components():
                gk = gc.induced(kcomp)
                res = color_bounded_treewidth(
                    gk, lf, exact_td_max=exact_td_max,
                    deep_verify=deep_verify, exact_check=False,
                )
                slab_assign.update(res.coloring.assignment)
                slab_bound = max(slab_bound, res.bound)
            scs.append(SlabColoring(slab.family, slab.index, Coloring(slab_assign, 2), slab_bound))
        combined, cbound = combine_slab_colorings(gc, lf, system, scs, what=what)
        assign.update(combined.assignment)
        bound = max(bound, cbound)
        systems.append(system)
    coloring = Coloring(assign, 4)
    report = check_weak_diameter(g, lf, coloring, bound, what)
    return SlabColorResult(coloring, bound, report, tuple(systems), ())
