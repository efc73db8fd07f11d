"""Coloring merges for vertex sets near few centers, with their bound
recursions.

The pattern shared by every operation here: a set Z lying within distance r
of at most k centers may receive an arbitrary coloring, and gluing it onto
a certified coloring of the rest multiplies the weak-diameter bound by a
computable factor.  Each merge recomputes the bound exactly and re-verifies
the merged coloring against it before returning; the bound is never trusted
on faith.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from wdcolor.graph import (
    GraphError,
    PowerGraph,
    WeightedGraph,
    as_fraction,
    ceil_frac,
    neighborhood,
)
from wdcolor.partition import (
    Coloring,
    ContractViolation,
    VerificationReport,
    check_weak_diameter,
)

MergeMode = str  # "general" | "delete" | "power"


def patch_bound(k: int, r: object, ell: object, n: object) -> Fraction:
    """Weak-diameter bound for merging a coloring over a (k, r)-centered set.

    f(0, y) = y and f(x, y) = 2*f(x-1, ceil((4/ell)*(ell+r+ell*y)) + y)
    + 2*ceil(2*(ell+r)/ell), evaluated with exact rational ceilings.
    Satisfies f(k, n) >= (k+1)*n.
    """
    if k < 0:
        raise GraphError("center count k must be nonnegative")
    rf = as_fraction(r)
    lf = as_fraction(ell)
    nf = as_fraction(n)
    if lf <= 0 or nf <= 0:
        raise GraphError("ell and N must be positive")
    if rf < 0:
        raise GraphError("radius r must be nonnegative")
    step = 2 * ceil_frac(2 * (lf + rf) / lf)

    def f(x: int, y: Fraction) -> Fraction:
        if x == 0:
            return y
        return 2 * f(x - 1, ceil_frac(Fraction(4) / lf * (lf + rf + lf * y)) + y) + step

    return f(k, nf)


def control_radii(theta: int, mu: object, ell: object, count: int) -> List[Fraction]:
    """The strictly increasing radius sequence a_0..a_count used by the
    deleted-set tree recursion: a_0 = 3*ell + mu and
    a_i = 4*(3*theta+1)*(theta + (a_{i-1}+mu)/ell) * a_{i-1}."""
    mf = as_fraction(mu)
    lf = as_fraction(ell)
    if theta < 1 or lf <= 0 or mf < 0 or count < 0:
        raise GraphError("invalid control-radius parameters")
    out = [3 * lf + mf]
    for _ in range(count):
        prev = out[-1]
        out.append(4 * (3 * theta + 1) * (theta + (prev + mf) / lf) * prev)
    return out


@dataclass(frozen=True)
class CenterCertificate:
    """Witness that a set is within distance `radius` of at most k centers."""

    centers: Tuple[int, ...]
    radius: Fraction
    covered: Tuple[int, ...]
    k: int

    @staticmethod
    def build(
        g: WeightedGraph,
        centers: Iterable[int],
        radius: object,
        covered: Iterable[int],
        k: Optional[int] = None,
    ) -> "CenterCertificate":
        cs = tuple(sorted(set(centers)))
        rf = as_fraction(radius)
        zs = tuple(sorted(set(covered)))
        kk = len(cs) if k is None else k
        cert = CenterCertificate(cs, rf, zs, kk)
        cert.verify(g)
        return cert

    def verify(self, g: WeightedGraph) -> None:
        if len(self.centers) > self.k:
            raise ContractViolation(
                "certificate lists %d centers but claims k=%d" % (len(self.centers), self.k)
            )
        if not self.covered:
            return
        reach = neighborhood(g, self.centers, self.radius) if self.centers else set()
        stray = set(self.covered) - reach
        if stray:
            raise ContractViolation(
                "certificate coverage fails: %s beyond distance %s of the centers"
                % (sorted(stray)[:5], self.radius)
            )


@dataclass(frozen=True)
class MergeResult:
    coloring: Coloring
    bound: Fraction
    report: VerificationReport


def patch_colorings(
    g: WeightedGraph,
    ell: object,
    cert: CenterCertificate,
    deleted: Iterable[int],
    c_z: Optional[Coloring],
    c: Coloring,
    mode: MergeMode = "general",
    n_claimed: object = 1,
    m: int = 1,
    power: Optional[PowerGraph] = None,
    what: str = "patch",
    exact: bool = True,
) -> MergeResult:
    """Glue a coloring of the centered set Z onto the coloring c of the rest.

    mode "general": c colors the Z-deleted power graph minus `deleted`, with
        weak diameter at most n_claimed measured in the full power graph.
    mode "delete": `deleted` must be empty; c colors the Z-deleted power
        graph with weak diameter measured there.
    mode "power": c colors the full power graph minus (deleted union Z).
    All modes return c union c_Z restricted away from `deleted`, re-verified
    at patch_bound(cert.k, cert.radius, ell, n_claimed) in the full power
    graph.
    """
    if mode not in ("general", "delete", "power"):
        raise GraphError("unknown merge mode %r" % (mode,))
    lf = as_fraction(ell)
    mw = g.max_edge_weight()
    if mw is not None and mw > lf:
        raise GraphError("edge weight %s exceeds ell %s" % (mw, lf))
    rset = set(deleted)
    if mode == "delete" and rset:
        raise GraphError("delete mode takes an empty deleted set")
    cert.verify(g)
    z = set(cert.covered)
    if c_z is None:
        c_z = Coloring.constant(z, max(m, c.num_colors))
    merged = c.union(c_z.restrict(z - rset))
    bound = patch_bound(cert.k, cert.radius, lf, n_claimed)
    keep = g.vertex_set() - rset
    report = check_weak_diameter(
        g, lf, merged, bound=bound, what=what, restrict_to=keep, power=power, exact=exact
    )
    return MergeResult(merged, bound, report)


def centered_bound(k: int, r: object, ell: object) -> Fraction:
    """Bound for any coloring of a graph whose undeleted part is (k, r)-centered."""
    return patch_bound(k, r, ell, 1)


def centered_color(
    g: WeightedGraph,
    ell: object,
    deleted: Iterable[int],
    cert: CenterCertificate,
    m: int = 1,
    coloring: Optional[Coloring] = None,
    power: Optional[PowerGraph] = None,
    what: str = "centered",
    exact: bool = True,
) -> MergeResult:
    """Color everything outside `deleted` (constant color 1 unless given);
    any such coloring has weak diameter at most centered_bound."""
    lf = as_fraction(ell)
    rset = set(deleted)
    cert.verify(g)
    missing = (g.vertex_set() - rset) - set(cert.covered)
    if missing:
        raise ContractViolation(
            "certificate must cover all undeleted vertices; missing %s" % sorted(missing)[:5]
        )
    if coloring is None:
        coloring = Coloring.constant(g.vertex_set() - rset, m)
    bound = centered_bound(cert.k, cert.radius, lf)
    keep = g.vertex_set() - rset
    report = check_weak_diameter(
        g, lf, coloring, bound=bound, what=what, restrict_to=keep, power=power, exact=exact
    )
    return MergeResult(coloring, bound, report)


def vertex_cover_bound(k: int, w: int, ell: object) -> Fraction:
    """Composed bound: centered bound for the <= w-vertex components, then a
    delete-mode patch over the k cover vertices."""
    n1 = centered_bound(w, 0, ell)
    return patch_bound(k, 0, ell, n1)


def vertex_cover_color(
    g: WeightedGraph,
    ell: object,
    cover: Iterable[int],
    w: int,
    m: int = 1,
    coloring: Optional[Coloring] = None,
    power: Optional[PowerGraph] = None,
    what: str = "vertex-cover",
) -> MergeResult:
    """Color a graph whose cover-deleted components have at most w vertices."""
    cov = set(cover)
    unknown = cov - g.vertex_set()
    if unknown:
        raise GraphError("cover contains unknown vertices %s" % sorted(unknown)[:5])
    rest = g.without(cov)
    for comp in rest.connected_components():
        if len(comp) > w:
            raise GraphError(
                "component with min vertex %s has %d > w=%d vertices after removing the cover"
                % (comp[0], len(comp), w)
            )
    if coloring is None:
        coloring = Coloring.constant(g.vertex_set(), m)
    bound = vertex_cover_bound(len(cov), w, ell)
    report = check_weak_diameter(g, ell, coloring, bound=bound, what=what, power=power)
    return MergeResult(coloring, bound, report)


BaseColorer = Callable[[WeightedGraph, Fraction], Tuple[Coloring, Fraction]]


def apex_color(
    base_colorer: BaseColorer,
    n: int,
    g: WeightedGraph,
    ell: object,
    apex_set: Iterable[int],
    m: int = 1,
    power: Optional[PowerGraph] = None,
    what: str = "apex",
    exact: bool = True,
) -> MergeResult:
    """Color g by deleting up to n apex vertices, coloring the rest with the
    base colorer, and gluing the apexes back with a delete-mode patch."""
    z = set(apex_set)
    if len(z) > n:
        raise GraphError("apex set larger than declared n=%d" % n)
    lf = as_fraction(ell)
    rest = g.without(z)
    c, n_claimed = base_colorer(rest, lf)
    cert = CenterCertificate.build(g, z, 0, z, k=n)
    return patch_colorings(
        g, lf, cert, (), None, c,
        mode="delete", n_claimed=n_claimed, m=m, power=power, what=what, exact=exact,
    )
