"""Colorings, monochromatic components, weak-diameter verification, and the
conversions between power-graph colorings and separated partition families.

Verification is never skipped: every converter re-checks the object it
returns and raises ContractViolation naming the offender when a claimed
bound fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from wdcolor.graph import (
    GraphError,
    HopGraph,
    PowerGraph,
    WeightedGraph,
    as_fraction,
    frac_str,
    power_graph,
)


class ContractViolation(AssertionError):
    """A produced object failed re-verification against its claimed bound."""


@dataclass(frozen=True)
class Coloring:
    """Vertex -> color map with colors in 1..num_colors."""

    assignment: Dict[int, int]
    num_colors: int

    def __post_init__(self):
        for v, c in self.assignment.items():
            if not 1 <= c <= self.num_colors:
                raise GraphError("color %s of vertex %s outside 1..%s" % (c, v, self.num_colors))

    @property
    def domain(self) -> FrozenSet[int]:
        return frozenset(self.assignment)

    def color(self, v: int) -> int:
        return self.assignment[v]

    def restrict(self, keep: Iterable[int]) -> "Coloring":
        ks = set(keep)
        return Coloring({v: c for v, c in self.assignment.items() if v in ks}, self.num_colors)

    def union(self, other: "Coloring") -> "Coloring":
        """Union of two colorings; self wins on overlapping vertices."""
        merged = dict(other.assignment)
        merged.update(self.assignment)
        return Coloring(merged, max(self.num_colors, other.num_colors))

    @staticmethod
    def constant(vertices: Iterable[int], num_colors: int = 1, color: int = 1) -> "Coloring":
        return Coloring({v: color for v in vertices}, num_colors)

    @staticmethod
    def empty(num_colors: int = 1) -> "Coloring":
        return Coloring({}, num_colors)


@dataclass(frozen=True)
class PartitionFamily:
    """m collections of vertex sets with a separation scale and a diameter
    certificate: within one collection distinct sets sit at pairwise distance
    > r, and every set has weak diameter <= diameter_bound, both in the host
    graph the family was extracted from."""

    collections: Tuple[Tuple[FrozenSet[int], ...], ...]
    r: Fraction
    diameter_bound: Fraction

    @property
    def num_collections(self) -> int:
        return len(self.collections)

    def covered(self) -> Set[int]:
        out: Set[int] = set()
        for coll in self.collections:
            for part in coll:
                out.update(part)
        return out

    def to_json_dict(self) -> dict:
        return {
            "m": self.num_collections,
            "r": frac_str(self.r),
            "diameterBound": frac_str(self.diameter_bound),
            "collections": [
                [sorted(part) for part in coll] for coll in self.collections
            ],
        }


@dataclass(frozen=True)
class ComponentStat:
    size: int
    min_vertex: int
    hops: int
    metric: Fraction

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "minVertex": self.min_vertex,
            "hops": self.hops,
            "metric": frac_str(self.metric),
        }


@dataclass(frozen=True)
class VerificationReport:
    colors: int
    max_weak_diameter_hops: int
    max_weak_diameter_metric: Fraction
    separation_ok: bool
    bound: Optional[Fraction]
    ratio: Fraction
    per_component: Tuple[ComponentStat, ...]
    ok: bool

    def to_json_dict(self) -> dict:
        return {
            "colors": self.colors,
            "maxWeakDiameterHops": self.max_weak_diameter_hops,
            "maxWeakDiameterMetric": frac_str(self.max_weak_diameter_metric),
            "separationOk": self.separation_ok,
            "bound": frac_str(self.bound) if self.bound is not None else None,
            "ratio": frac_str(self.ratio),
            "ok": self.ok,
            "perComponent": [c.to_json_dict() for c in self.per_component],
        }


def monochromatic_components(
    h: HopGraph, c: Coloring, within: Optional[Iterable[int]] = None
) -> List[Tuple[int, ...]]:
    """Components of the same-color subgraph of h, each sorted, listed by
    ascending minimum vertex.  `within` restricts the vertex pool."""
    pool = set(h.vertices) if within is None else set(within) & set(h.vertices)
    missing = pool - c.domain
    if missing:
        raise GraphError("vertices without a color: %s" % sorted(missing)[:5])
    seen: Set[int] = set()
    out: List[Tuple[int, ...]] = []
    for v in sorted(pool):
        if v in seen:
            continue
        col = c.color(v)
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            x = stack.pop()
            for n in h.neighbors(x):
                if n in pool and n not in seen and c.color(n) == col:
                    seen.add(n)
                    comp.append(n)
                    stack.append(n)
        out.append(tuple(sorted(comp)))
    return out


def _component_hop_diameter(
    host: HopGraph,
    comp: Sequence[int],
    within: Optional[FrozenSet[int]],
    bound_hops: Optional[int],
) -> Tuple[int, bool]:
    """Exact max pairwise hop distance of comp measured in host (optionally
    vertex-restricted).  Searches stop once all members are settled; with a
    bound they also stop past it, reporting failure instead of the value."""
    if len(comp) <= 1:
        return 0, True
    members = set(comp)
    best = 0
    for u in comp:
        cutoff = None if bound_hops is None else bound_hops
        d = host.hop_distances([u], targets=set(members), within=within, cutoff=cutoff)
        for v in comp:
            dv = d.get(v)
            if dv is None:
                if bound_hops is not None:
                    return best, False
                return len(host.vertices) + 1, False
            if dv > best:
                best = dv
    return best, True


def _component_metric_diameter(
    metric: WeightedGraph,
    comp: Sequence[int],
    within: Optional[FrozenSet[int]],
    radius_cap: Optional[Fraction],
) -> Fraction:
    if len(comp) <= 1:
        return Fraction(0)
    members = set(comp)
    best = Fraction(0)
    for u in comp:
        d = metric.distances_from([u], targets=set(members), within=within, radius=radius_cap)
        for v in comp:
            dv = d.get(v)
            if dv is not None and dv > best:
                best = dv
    return best


def verify_weak_diameter(
    g: WeightedGraph,
    ell: object,
    coloring: Coloring,
    restrict_to: Optional[Iterable[int]] = None,
    bound: object = None,
    power: Optional[PowerGraph] = None,
    deleted: Optional[Iterable[int]] = None,
    exact: bool = True,
) -> VerificationReport:
    """Measure every monochromatic component of the scale-ell power graph.

    restrict_to: only these vertices are grouped into components.
    deleted: vertices removed from the host itself (components and hop
        distances both avoid them), for colorings of vertex-deleted power
        graphs.  Without it hops are measured in the full power graph.
    bound: claimed weak-diameter bound in hops; ok=False if exceeded.
    exact: with exact=False and a bound no smaller than the host vertex
        count minus one, the bound holds for every connected component and
        the per-component measurement is skipped; the report then carries
        only what was measured (no stats, zero maxima).
    """
    lf = as_fraction(ell)
    p = power if power is not None else power_graph(g, lf)
    host_within: Optional[FrozenSet[int]] = None
    pool: Set[int] = set(p.vertices)
    if deleted is not None:
        dset = set(deleted)
        pool -= dset
        host_within = frozenset(pool)
    if restrict_to is not None:
        pool &= set(restrict_to)
    pool &= coloring.domain
    comps = monochromatic_components(p, coloring, within=pool)
    bf: Optional[Fraction] = as_fraction(bound) if bound is not None else None
    bound_hops = None if bf is None else int(bf)  # floor: hop counts are integers
    if not exact and bound_hops is not None and bound_hops >= len(p.vertices) - 1:
        # each component is connected inside the host, so its hop diameter
        # stays below the host vertex count and the bound holds unmeasured
        colors_used = len({coloring.color(v) for c in comps for v in c})
        return VerificationReport(
            colors=colors_used,
            max_weak_diameter_hops=0,
            max_weak_diameter_metric=Fraction(0),
            separation_ok=True,
            bound=bf,
            ratio=Fraction(0),
            per_component=(),
            ok=True,
        )
    stats: List[ComponentStat] = []
    max_hops = 0
    max_metric = Fraction(0)
    all_ok = True
    for comp in comps:
        hops, ok = _component_hop_diameter(p, comp, host_within, bound_hops)
        if not ok:
            all_ok = False
            hops, _ = _component_hop_diameter(p, comp, host_within, None)
        cap = None if hops == 0 else lf * hops
        metric = _component_metric_diameter(p.metric, comp, host_within, cap)
        stats.append(ComponentStat(len(comp), comp[0], hops, metric))
        max_hops = max(max_hops, hops)
        max_metric = max(max_metric, metric)
    if bf is not None and max_hops > bf:
        all_ok = False
    colors_used = len({coloring.color(v) for c in comps for v in c})
    return VerificationReport(
        colors=colors_used,
        max_weak_diameter_hops=max_hops,
        max_weak_diameter_metric=max_metric,
        separation_ok=True,
        bound=bf,
        ratio=max_metric / lf,
        per_component=tuple(stats),
        ok=all_ok,
    )


def check_weak_diameter(
    g: WeightedGraph,
    ell: object,
    coloring: Coloring,
    bound: object,
    what: str,
    restrict_to: Optional[Iterable[int]] = None,
    power: Optional[PowerGraph] = None,
    deleted: Optional[Iterable[int]] = None,
    exact: bool = True,
) -> VerificationReport:
    """verify_weak_diameter that raises ContractViolation on failure."""
    report = verify_weak_diameter(
        g, ell, coloring, restrict_to=restrict_to, bound=bound, power=power,
        deleted=deleted, exact=exact,
    )
    if not report.ok:
        raise ContractViolation(
            "%s: weak diameter %d hops exceeds claimed bound %s"
            % (what, report.max_weak_diameter_hops, frac_str(report.bound))
        )
    return report


def coloring_to_partition(
    g: WeightedGraph, r: object, coloring: Coloring, n_bound: object,
    power: Optional[PowerGraph] = None,
) -> PartitionFamily:
    """Traces of monochromatic power-graph components on V(g), grouped by
    color: within one collection sets are > r separated and every set has
    weak diameter <= r * n_bound in (g, weights).  Both re-verified."""
    rf = as_fraction(r)
    nf = as_fraction(n_bound)
    p = power if power is not None else power_graph(g, rf)
    if not p.vertex_set() <= coloring.domain:
        missing = sorted(p.vertex_set() - coloring.domain)
        raise GraphError("coloring must cover the power graph; missing %s" % missing[:5])
    comps = monochromatic_components(p, coloring)
    originals = g.vertex_set()
    by_color: Dict[int, List[FrozenSet[int]]] = {}
    for comp in comps:
        trace = frozenset(v for v in comp if v in originals)
        if trace:
            by_color.setdefault(coloring.color(comp[0]), []).append(trace)
    collections = tuple(
        tuple(sorted(by_color.get(i, []), key=lambda s: min(s)))
        for i in range(1, coloring.num_colors + 1)
    )
    diameter_bound = rf * nf
    fam = PartitionFamily(collections, rf, diameter_bound)
    verify_partition_family(g, fam)
    return fam


def verify_partition_family(g: WeightedGraph, fam: PartitionFamily) -> None:
    """Exhaustive separation and weak-diameter checks; raises on failure."""
    for ci, coll in enumerate(fam.collections, 1):
        owner: Dict[int, int] = {}
        for si, part in enumerate(coll):
            for v in part:
                if v in owner:
                    raise ContractViolation(
                        "collection %d: vertex %s in two sets" % (ci, v)
                    )
                owner[v] = si
        for si, part in enumerate(coll):
            near = g.distances_from(part, radius=fam.r)
            for v in near:
                if v in owner and owner[v] != si:
                    raise ContractViolation(
                        "collection %d: sets %d and %d within distance %s (vertex %s)"
                        % (ci, si, owner[v], frac_str(fam.r), v)
                    )
        for si, part in enumerate(coll):
            members = set(part)
            for u in sorted(part):
                d = g.distances_from([u], targets=set(members), radius=fam.diameter_bound)
                unreached = members - set(d)
                if unreached:
                    raise ContractViolation(
                        "collection %d set %d: pair (%s, %s) farther than %s"
                        % (ci, si, u, min(unreached), frac_str(fam.diameter_bound))
                    )


def partition_to_coloring(
    g: WeightedGraph, ell: object, fam: PartitionFamily,
    power: Optional[PowerGraph] = None,
) -> Coloring:
    """Least-collection-index coloring of a separated family.

    Requires cover of V(g) and separation > ell; checks that every
    monochromatic power-graph component stays inside a single set."""
    lf = as_fraction(ell)
    if fam.r < lf:
        raise GraphError("family separation scale %s below ell %s" % (fam.r, lf))
    assignment: Dict[int, int] = {}
    for ci, coll in enumerate(fam.collections, 1):
        for si, part in enumerate(coll):
            for v in part:
                if v not in assignment:
                    assignment[v] = ci
    gap = g.vertex_set() - set(assignment)
    if gap:
        raise GraphError("family does not cover vertices %s" % sorted(gap)[:5])
    c = Coloring(assignment, fam.num_collections)
    p = power if power is not None else power_graph(g, lf)
    comps = monochromatic_components(p, c, within=g.vertex_set())
    for comp in comps:
        color = c.color(comp[0])
        coll = fam.collections[color - 1]
        if not any(set(comp) <= part for part in coll):
            raise ContractViolation(
                "component with min vertex %s spans sets of collection %d"
                % (comp[0], color)
            )
    return c


def measure_dilation(
    pipeline: Callable[[WeightedGraph, Fraction], VerificationReport],
    g: WeightedGraph,
    scales: Sequence[object],
) -> List[dict]:
    """Run a colorer across scales and tabulate the dilation diagnostic.

    Each row records colors, max weak diameter (hops and metric), and the
    ratio metric/ell; a row is flagged when its ratio exceeds every smaller
    scale's ratio (the dilation growing with scale)."""
    rows: List[dict] = []
    best_ratio: Optional[Fraction] = None
    for s in scales:
        sf = as_fraction(s)
        row: dict = {"ell": frac_str(sf)}
        try:
            report = pipeline(g, sf)
        except Exception as exc:  # recorded, not fatal
            row["error"] = "%s: %s" % (type(exc).__name__, exc)
            rows.append(row)
            continue
        row.update(
            colors=report.colors,
            maxWeakDiameterHops=report.max_weak_diameter_hops,
            maxWeakDiameterMetric=frac_str(report.max_weak_diameter_metric),
            ratio=frac_str(report.ratio),
            ok=report.ok,
        )
        row["anomaly"] = best_ratio is not None and report.ratio > best_ratio
        if best_ratio is None or report.ratio > best_ratio:
            best_ratio = report.ratio
        rows.append(row)
    return rows
