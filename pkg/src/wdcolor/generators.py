"""Deterministic instance generators, each carrying its own certificate.

Every family is driven by one seeded PRNG stream, so a (family, parameters,
seed) triple always reproduces the same instance byte for byte.  Grids come
with their row layering, a planar rotation system, and a column tripod
certificate; k-trees come with the width-k tree decomposition they grew
along; triangulations come with their rotation system.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .graph import GraphError, WeightedGraph, as_fraction, frac_str
from .treedec import RootedTreeDecomposition, validate_td
from .geodesic import GeodesicCertificate, GeodesicTree

FAMILIES = (
    "path",
    "cycle",
    "grid",
    "ktree",
    "random-series-parallel",
    "random-planar-triangulation",
    "random-weights-overlay",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate: a family, its size knobs, and the weight law.

    Weights are uniform rationals k/denominator inside [weight_lo,
    weight_hi]; the default law is constant unit weights.  The overlay
    family redraws weights on a base graph supplied separately.
    """

    family: str
    n: int = 0
    rows: int = 0
    cols: int = 0
    k: int = 2
    seed: int = 0
    weight_lo: object = 1
    weight_hi: object = 1
    weight_den: int = 1


@dataclass(frozen=True)
class Instance:
    family: str
    graph: WeightedGraph
    td: Optional[RootedTreeDecomposition] = None
    rotation: Optional[Dict[int, Tuple[int, ...]]] = None
    layering: Optional[Tuple[Tuple[int, ...], ...]] = None
    tripods: Optional[GeodesicCertificate] = None
    meta: Dict[str, str] = field(default_factory=dict)


def _draw_weight(rng: random.Random, lo: Fraction, hi: Fraction, den: int) -> Fraction:
    kmin = -((-lo * den).__floor__())
    kmax = (hi * den).__floor__()
    if kmin > kmax:
        raise GraphError(
            "no multiple of 1/%d lies in [%s, %s]" % (den, frac_str(lo), frac_str(hi))
        )
    return Fraction(rng.randint(kmin, kmax), den)


def _weights(spec: GeneratorSpec, rng: random.Random, count: int) -> List[Fraction]:
    lo = as_fraction(spec.weight_lo)
    hi = as_fraction(spec.weight_hi)
    if lo <= 0 or hi < lo:
        raise GraphError("need 0 < weight_lo <= weight_hi")
    if spec.weight_den < 1:
        raise GraphError("weight denominator must be a positive integer")
    if lo == hi:
        return [lo] * count
    return [_draw_weight(rng, lo, hi, spec.weight_den) for _ in range(count)]


def overlay_random_weights(
    g: WeightedGraph, seed: int, lo: object, hi: object, den: int
) -> WeightedGraph:
    """Same graph, fresh uniform rational weights with resolution 1/den."""
    lof = as_fraction(lo)
    hif = as_fraction(hi)
    if lof <= 0 or hif < lof:
        raise GraphError("need 0 < lo <= hi")
    if den < 1:
        raise GraphError("weight denominator must be a positive integer")
    rng = random.Random(seed)
    edges = [(u, v, _draw_weight(rng, lof, hif, den)) for (u, v, _) in g.edges]
    return WeightedGraph(g.vertices, edges)


def gen_path(spec: GeneratorSpec) -> Instance:
    n = spec.n
    if n < 1:
        raise GraphError("path needs n >= 1")
    rng = random.Random(spec.seed)
    ws = _weights(spec, rng, n - 1)
    edges = [(v, v + 1, ws[v]) for v in range(n - 1)]
    layering = tuple((v,) for v in range(n))
    bags = {0: frozenset({0})}
    bags.update({v: frozenset({v - 1, v}) for v in range(1, n)})
    td = RootedTreeDecomposition(bags, [(v - 1, v) for v in range(1, n)], 0)
    return Instance("path", WeightedGraph(range(n), edges), td=td, layering=layering)


def gen_cycle(spec: GeneratorSpec) -> Instance:
    n = spec.n
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    rng = random.Random(spec.seed)
    ws = _weights(spec, rng, n)
    edges = [(v, (v + 1) % n, ws[v]) for v in range(n)]
    rotation = {v: ((v - 1) % n, (v + 1) % n) for v in range(n)}
    return Instance("cycle", WeightedGraph(range(n), edges), rotation=rotation)


def _grid_tripods(rows: int, cols: int) -> GeodesicCertificate:
    """Column tripod certificate over the comb tree: spine along row 0,
    teeth down each column; every bag is two full column paths."""
    vid = lambda i, j: i * cols + j
    parent: Dict[int, Optional[int]] = {0: None}
    dist: Dict[int, Fraction] = {0: Fraction(0)}
    for j in range(1, cols):
        parent[vid(0, j)] = vid(0, j - 1)
    for j in range(cols):
        for i in range(1, rows):
            parent[vid(i, j)] = vid(i - 1, j)
    for i in range(rows):
        for j in range(cols):
            dist[vid(i, j)] = Fraction(i + j)
    tree = GeodesicTree(0, parent, dist)

    def column_path(j: int) -> Tuple[int, ...]:
        down = [vid(i, j) for i in range(rows - 1, -1, -1)]
        spine = [vid(0, t) for t in range(j - 1, -1, -1)]
        return tuple(down + spine)

    bags: Dict[int, frozenset] = {}
    paths: Dict[int, Tuple[Tuple[int, ...], ...]] = {}
    edges: List[Tuple[int, int]] = []
    if cols == 1:
        bags[0] = frozenset(column_path(0))
        paths[0] = (column_path(0),)
    else:
        for t in range(cols - 1):
            p1, p2 = column_path(t), column_path(t + 1)
            bags[t] = frozenset(p1) | frozenset(p2)
            paths[t] = (p1, p2)
            if t > 0:
                edges.append((t - 1, t))
    td = RootedTreeDecomposition(bags, edges, 0)
    return GeodesicCertificate(tree, td, paths, Fraction(0))


def gen_grid(spec: GeneratorSpec) -> Instance:
    rows, cols = spec.rows, spec.cols
    if rows < 1 or cols < 1:
        raise GraphError("grid needs rows >= 1 and cols >= 1")
    vid = lambda i, j: i * cols + j
    rng = random.Random(spec.seed)
    raw: List[Tuple[int, int]] = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                raw.append((vid(i, j), vid(i, j + 1)))
            if i + 1 < rows:
                raw.append((vid(i, j), vid(i + 1, j)))
    ws = _weights(spec, rng, len(raw))
    edges = [(u, v, w) for (u, v), w in zip(raw, ws)]
    rotation: Dict[int, Tuple[int, ...]] = {}
    for i in range(rows):
        for j in range(cols):
            order: List[int] = []
            if i > 0:
                order.append(vid(i - 1, j))
            if j + 1 < cols:
                order.append(vid(i, j + 1))
            if i + 1 < rows:
                order.append(vid(i + 1, j))
            if j > 0:
                order.append(vid(i, j - 1))
            rotation[vid(i, j)] = tuple(order)
    layering = tuple(tuple(vid(i, j) for j in range(cols)) for i in range(rows))
    g = WeightedGraph(range(rows * cols), edges)
    tripods = _grid_tripods(rows, cols)
    rep = validate_td(g, tripods.td)
    if not rep["ok"]:
        raise GraphError("grid tripod certificate failed validation: %s" % rep["failures"][:3])
    return Instance(
        "grid", g, td=tripods.td, rotation=rotation, layering=layering, tripods=tripods,
        meta={"rows": str(rows), "cols": str(cols)},
    )


def gen_ktree(spec: GeneratorSpec) -> Instance:
    n, k = spec.n, spec.k
    if k < 1 or n < k + 1:
        raise GraphError("ktree needs k >= 1 and n >= k + 1")
    rng = random.Random(spec.seed)
    base = list(range(k + 1))
    raw: List[Tuple[int, int]] = [(a, b) for ai, a in enumerate(base) for b in base[ai + 1:]]
    bags: Dict[int, frozenset] = {0: frozenset(base)}
    td_edges: List[Tuple[int, int]] = []
    cliques: List[Tuple[frozenset, int]] = [
        (frozenset(base) - {x}, 0) for x in base
    ]
    for v in range(k + 1, n):
        clique, owner = cliques[rng.randrange(len(cliques))]
        for u in sorted(clique):
            raw.append((u, v))
        node = v
        bags[node] = clique | {v}
        td_edges.append((owner, node))
        for x in sorted(clique):
            cliques.append(((clique - {x}) | {v}, node))
    ws = _weights(spec, rng, len(raw))
    edges = [(u, v, w) for (u, v), w in zip(raw, ws)]
    g = WeightedGraph(range(n), edges)
    td = RootedTreeDecomposition(bags, td_edges, 0)
    if td.width != k:
        raise GraphError("ktree construction drifted from width %d" % k)
    rep = validate_td(g, td)
    if not rep["ok"]:
        raise GraphError("ktree certificate failed validation: %s" % rep["failures"][:3])
    return Instance("ktree", g, td=td, meta={"k": str(k)})


def gen_series_parallel(spec: GeneratorSpec) -> Instance:
    """Random series-parallel graph grown from one edge by subdividing an
    edge (series) or doubling it with a fresh 2-path (parallel)."""
    n = spec.n
    if n < 2:
        raise GraphError("series-parallel needs n >= 2")
    rng = random.Random(spec.seed)
    pairs: List[Tuple[int, int]] = [(0, 1)]
    nxt = 2
    while nxt < n:
        u, v = pairs[rng.randrange(len(pairs))]
        w = nxt
        nxt += 1
        if rng.random() < 0.5:
            pairs.remove((u, v))
            pairs.append((u, w))
            pairs.append((w, v))
        else:
            pairs.append((u, w))
            pairs.append((w, v))
    ws = _weights(spec, rng, len(pairs))
    edges = [(u, v, wt) for (u, v), wt in zip(pairs, ws)]
    return Instance("random-series-parallel", WeightedGraph(range(n), edges))


def gen_triangulation(spec: GeneratorSpec) -> Instance:
    """Random planar triangulation grown by repeatedly dropping a fresh
    vertex into a uniformly chosen triangular face, rotation system kept
    consistent throughout."""
    n = spec.n
    if n < 3:
        raise GraphError("triangulation needs n >= 3")
    rng = random.Random(spec.seed)
    rotation: Dict[int, List[int]] = {0: [1, 2], 1: [2, 0], 2: [0, 1]}
    faces: List[Tuple[int, int, int]] = [(0, 1, 2), (0, 2, 1)]
    pairs: List[Tuple[int, int]] = [(0, 1), (0, 2), (1, 2)]
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces.extend([(a, b, v), (b, c, v), (c, a, v)])
        pairs.extend([(a, v), (b, v), (c, v)])
        rotation[v] = [a, c, b]
        for x, nxt_corner, prev_corner in ((a, b, c), (b, c, a), (c, a, b)):
            order = rotation[x]
            order.insert(order.index(nxt_corner), v)
    ws = _weights(spec, rng, len(pairs))
    edges = [(u, v, w) for (u, v), w in zip(pairs, ws)]
    g = WeightedGraph(range(n), edges)
    return Instance(
        "random-planar-triangulation", g,
        rotation={v: tuple(order) for v, order in rotation.items()},
    )


def generate(spec: GeneratorSpec, base: Optional[WeightedGraph] = None) -> Instance:
    """Dispatch a GeneratorSpec; the overlay family needs the base graph."""
    if spec.family == "path":
        return gen_path(spec)
    if spec.family == "cycle":
        return gen_cycle(spec)
    if spec.family == "grid":
        return gen_grid(spec)
    if spec.family == "ktree":
        return gen_ktree(spec)
    if spec.family == "random-series-parallel":
        return gen_series_parallel(spec)
    if spec.family == "random-planar-triangulation":
        return gen_triangulation(spec)
    if spec.family == "random-weights-overlay":
        if base is None:
            raise GraphError("weight overlay needs a base graph")
        g = overlay_random_weights(
            base, spec.seed, spec.weight_lo, spec.weight_hi, spec.weight_den
        )
        return Instance("random-weights-overlay", g)
    raise GraphError("unknown generator family %r" % (spec.family,))


# -- certificate (de)serialization ---------------------------------------------


def rotation_to_json(rotation: Dict[int, Tuple[int, ...]]) -> dict:
    return {"rotation": {str(v): list(order) for v, order in sorted(rotation.items())}}


def rotation_from_json(data: dict) -> Dict[int, Tuple[int, ...]]:
    try:
        return {int(v): tuple(int(u) for u in order) for v, order in data["rotation"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError("malformed rotation JSON: %s" % (exc,))


def layering_to_json(layering: Sequence[Sequence[int]]) -> dict:
    return {"layers": [sorted(layer) for layer in layering]}


def layering_from_json(data: dict) -> Tuple[Tuple[int, ...], ...]:
    try:
        return tuple(tuple(int(v) for v in layer) for layer in data["layers"])
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError("malformed layering JSON: %s" % (exc,))


def tripods_to_json(cert: GeodesicCertificate) -> dict:
    return {
        "tree": {
            "root": cert.tree.root,
            "parent": {str(v): p for v, p in sorted(cert.tree.parent.items())},
            "dist": {str(v): frac_str(d) for v, d in sorted(cert.tree.dist.items())},
        },
        "td": cert.td.to_json_dict(),
        "paths": {str(t): [list(p) for p in ps] for t, ps in sorted(cert.paths.items())},
        "slack": frac_str(cert.slack),
    }


def tripods_from_json(data: dict) -> GeodesicCertificate:
    try:
        tree = GeodesicTree(
            int(data["tree"]["root"]),
            {int(v): (None if p is None else int(p)) for v, p in data["tree"]["parent"].items()},
            {int(v): as_fraction(d) for v, d in data["tree"]["dist"].items()},
        )
        td = RootedTreeDecomposition.from_json_dict(data["td"])
        paths = {
            int(t): tuple(tuple(int(v) for v in p) for p in ps)
            for t, ps in data["paths"].items()
        }
        slack = as_fraction(data["slack"])
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError("malformed tripod certificate JSON: %s" % (exc,))
    return GeodesicCertificate(tree, td, paths, slack)
