"""Value-preserving automorphisms of Reeb graphs.

An automorphism is a pair of permutations (vertices, edges) preserving
incidence, vertex values, and edge value intervals exactly.  The full group
is enumerated by backtracking over vertices pre-partitioned by invariants
with iterative refinement; parallel edges with equal intervals contribute a
factorial multiplier per class.

Construction symmetries (grid translations and rectangle cycles) are pushed
to graph automorphisms through the cell map: the image of every element's
triangle set must be exactly one element's triangle set, which both
validates the symmetry and produces the permutations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Optional

import numpy as np

from kronrod.errors import AutOverflow, IncompleteRecord, NotAnAutomorphism
from kronrod.permgroups import PermGroup, enumerate_elements
from kronrod.records import ConstructionRecord, GridTranslation, Rect, RectCycle, SymmetrySpec
from kronrod.reeb import ReebGraph
from kronrod.terms import GroupTerm, Prod, Triv, Wr, Wr2, normalize

DEFAULT_AUT_CAP = 10_000


@dataclass(frozen=True)
class GraphAut:
    """Automorphism of a Reeb graph: permutations of vertex and edge ids."""

    vperm: tuple[int, ...]
    eperm: tuple[int, ...]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.vperm)) and all(
            i == j for i, j in enumerate(self.eperm)
        )

    def compose(self, other: "GraphAut") -> "GraphAut":
        """Apply self, then other."""
        return GraphAut(
            tuple(other.vperm[i] for i in self.vperm),
            tuple(other.eperm[i] for i in self.eperm),
        )

    def inverse(self) -> "GraphAut":
        vinv = [0] * len(self.vperm)
        einv = [0] * len(self.eperm)
        for i, j in enumerate(self.vperm):
            vinv[j] = i
        for i, j in enumerate(self.eperm):
            einv[j] = i
        return GraphAut(tuple(vinv), tuple(einv))


def validate_graph_aut(g: ReebGraph, aut: GraphAut) -> None:
    """Raise NotAnAutomorphism unless `aut` preserves values and incidence."""
    nv, ne = g.n_vertices, g.n_edges
    if sorted(aut.vperm) != list(range(nv)) or sorted(aut.eperm) != list(range(ne)):
        raise NotAnAutomorphism("not a permutation of the element ids")
    for v in g.vertices:
        w = g.vertices[aut.vperm[v.id]]
        if v.value != w.value:
            raise NotAnAutomorphism(f"vertex {v.id} value {v.value} -> {w.value}")
        if len(v.crits) != len(w.crits) or v.boundary != w.boundary:
            raise NotAnAutomorphism(f"vertex {v.id} critical structure changes")
    for e in g.edges:
        f_ = g.edges[aut.eperm[e.id]]
        if (e.lo, e.hi) != (f_.lo, f_.hi):
            raise NotAnAutomorphism(f"edge {e.id} interval changes")
        if {aut.vperm[e.u], aut.vperm[e.v]} != {f_.u, f_.v}:
            raise NotAnAutomorphism(f"edge {e.id} incidence changes")


def identity_aut(g: ReebGraph) -> GraphAut:
    return GraphAut(tuple(range(g.n_vertices)), tuple(range(g.n_edges)))


# ---------------------------------------------------------------------------
# full value-preserving automorphism group
# ---------------------------------------------------------------------------


@dataclass
class AutGroup:
    """Full f-hat-preserving automorphism group of a Reeb graph.

    `vertex_auts` lists every valid vertex permutation; the edge freedom on
    top of a fixed vertex permutation is a product of symmetric groups on
    parallel-edge classes, accounted for by `order`.
    """

    carrier: ReebGraph
    vertex_auts: list[tuple[int, ...]]
    order: int
    generators: list[GraphAut] = field(default_factory=list)

    def contains(self, aut: GraphAut) -> bool:
        try:
            validate_graph_aut(self.carrier, aut)
        except NotAnAutomorphism:
            return False
        return aut.vperm in set(self.vertex_auts)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "generators": [
                {"vertices": list(a.vperm), "edges": list(a.eperm)} for a in self.generators
            ],
        }


def _vertex_invariants(g: ReebGraph) -> list[tuple]:
    inv = []
    for v in g.vertices:
        incident = sorted(
            (g.edges[ei].lo, g.edges[ei].hi) for ei in g.incident_edges(v.id)
        )
        inv.append((v.value, v.boundary, len(v.crits), tuple(incident)))
    return inv


def _refine_colors(g: ReebGraph, colors: list[int]) -> list[int]:
    while True:
        sig = []
        for v in g.vertices:
            nb = []
            for ei in g.incident_edges(v.id):
                e = g.edges[ei]
                other = e.v if e.u == v.id else e.u
                nb.append((e.lo, e.hi, colors[other]))
            sig.append((colors[v.id], tuple(sorted(nb))))
        fresh: dict[tuple, int] = {}
        new_colors = []
        for s in sig:
            if s not in fresh:
                fresh[s] = len(fresh)
            new_colors.append(fresh[s])
        if new_colors == colors:
            return colors
        colors = new_colors


def _edge_classes(g: ReebGraph) -> dict[tuple, list[int]]:
    """Parallel-edge classes keyed by (endpoints, interval)."""
    classes: dict[tuple, list[int]] = {}
    for e in g.edges:
        key = (min(e.u, e.v), max(e.u, e.v), e.lo, e.hi)
        classes.setdefault(key, []).append(e.id)
    return classes


def value_preserving_auts(g: ReebGraph, cap: int = DEFAULT_AUT_CAP) -> AutGroup:
    """The group of all automorphisms preserving values and incidence."""
    nv = g.n_vertices
    base = _vertex_invariants(g)
    fresh: dict[tuple, int] = {}
    colors = []
    for b in base:
        if b not in fresh:
            fresh[b] = len(fresh)
        colors.append(fresh[b])
    colors = _refine_colors(g, colors)

    eclasses = _edge_classes(g)
    edge_multiplier = 1
    for ids in eclasses.values():
        edge_multiplier *= factorial(len(ids))

    # adjacency multiset between vertex pairs must be preserved
    adjacency: dict[tuple[int, int], list[tuple[float, float, int]]] = {}
    for (u, v, lo, hi), ids in eclasses.items():
        adjacency.setdefault((u, v), []).append((lo, hi, len(ids)))
    for k in adjacency:
        adjacency[k].sort()

    order_of_assignment = sorted(range(nv), key=lambda v: (colors[v], v))
    vertex_auts: list[tuple[int, ...]] = []

    def compatible(p: dict[int, int], a: int, b: int) -> bool:
        if colors[a] != colors[b]:
            return False
        for c, d in p.items():
            ka = (min(a, c), max(a, c))
            kb = (min(b, d), max(b, d))
            if adjacency.get(ka, []) != adjacency.get(kb, []):
                return False
        return True

    def backtrack(i: int, p: dict[int, int], used: set[int]) -> None:
        if len(vertex_auts) * edge_multiplier > cap:
            raise AutOverflow(cap)
        if i == nv:
            vertex_auts.append(tuple(p[v] for v in range(nv)))
            return
        a = order_of_assignment[i]
        for b in range(nv):
            if b in used or not compatible(p, a, b):
                continue
            p[a] = b
            used.add(b)
            backtrack(i + 1, p, used)
            used.remove(b)
            del p[a]

    backtrack(0, {}, set())
    order = len(vertex_auts) * edge_multiplier
    if order > cap:
        raise AutOverflow(cap)

    gens = _generators_from_vertex_auts(g, vertex_auts, eclasses)
    return AutGroup(carrier=g, vertex_auts=vertex_auts, order=order, generators=gens)


def _canonical_eperm(g: ReebGraph, vperm: tuple[int, ...], eclasses) -> tuple[int, ...]:
    """One edge permutation compatible with a vertex permutation: map each
    parallel class to its image class in id order."""
    eperm = [0] * g.n_edges
    for (u, v, lo, hi), ids in eclasses.items():
        tu, tv = vperm[u], vperm[v]
        target = eclasses.get((min(tu, tv), max(tu, tv), lo, hi))
        if target is None or len(target) != len(ids):
            raise NotAnAutomorphism("vertex map does not transport edge classes")
        for a, b in zip(sorted(ids), sorted(target)):
            eperm[a] = b
    return tuple(eperm)


def _generators_from_vertex_auts(g, vertex_auts, eclasses) -> list[GraphAut]:
    gens = []
    for vperm in vertex_auts:
        aut = GraphAut(vperm, _canonical_eperm(g, vperm, eclasses))
        if not aut.is_identity():
            gens.append(aut)
    idperm = tuple(range(g.n_vertices))
    for ids in eclasses.values():
        if len(ids) > 1:  # transposition of two parallel edges
            eperm = list(range(g.n_edges))
            eperm[ids[0]], eperm[ids[1]] = eperm[ids[1]], eperm[ids[0]]
            gens.append(GraphAut(idperm, tuple(eperm)))
    return gens


# ---------------------------------------------------------------------------
# induced automorphisms from construction symmetries
# ---------------------------------------------------------------------------


def _cell_permutation(g: ReebGraph, sym: SymmetrySpec) -> np.ndarray:
    """Triangle-level map of a symmetry.  Cells not moved map to themselves."""
    tri = g.tri
    if tri is None:
        raise NotAnAutomorphism("graph carries no triangulation")
    f = tri.field
    w, h = f.width, f.height
    ncx, ncy = tri.ncx, tri.ncy
    perm = np.arange(tri.ntri, dtype=np.int64)
    if isinstance(sym, GridTranslation):
        if f.kind != "torus":
            raise NotAnAutomorphism("grid translation on a non-torus field")
        cells = np.arange(ncx * ncy)
        cy, cx = np.divmod(cells, ncx)
        tx = (cx + sym.dx) % ncx
        ty = (cy + sym.dy) % ncy
        target = ty * ncx + tx
        perm[2 * cells] = 2 * target
        perm[2 * cells + 1] = 2 * target + 1
        return perm
    if isinstance(sym, RectCycle):
        rects = sym.rects
        for r, r_next in zip(rects, rects[1:] + rects[:1]):
            if (r.w, r.h) != (r_next.w, r_next.h):
                raise NotAnAutomorphism("rect cycle with mismatched rectangles")
            # cells whose four corners lie inside the rectangle
            for j in range(r.h - 1):
                for i in range(r.w - 1):
                    cx = (r.x0 + i) % w if f.wraps_x else r.x0 + i
                    cy = (r.y0 + j) % h if f.wraps_y else r.y0 + j
                    tx = (r_next.x0 + i) % w if f.wraps_x else r_next.x0 + i
                    ty = (r_next.y0 + j) % h if f.wraps_y else r_next.y0 + j
                    if not (0 <= cx < ncx and 0 <= cy < ncy):
                        raise NotAnAutomorphism("rect cycle leaves the grid")
                    if not (0 <= tx < ncx and 0 <= ty < ncy):
                        raise NotAnAutomorphism("rect cycle leaves the grid")
                    src = cy * ncx + cx
                    dst = ty * ncx + tx
                    perm[2 * src] = 2 * dst
                    perm[2 * src + 1] = 2 * dst + 1
        return perm
    raise NotAnAutomorphism(f"unknown symmetry {sym!r}")


def induced_graph_aut(g: ReebGraph, sym: SymmetrySpec) -> GraphAut:
    """Push a cell-level symmetry through the cell map to a GraphAut.

    The cell map partitions triangles among graph elements; the symmetry is
    an automorphism exactly when the image of every element's partition
    class is a single element's class.
    """
    perm = _cell_permutation(g, sym)
    if sorted(perm.tolist()) != list(range(len(perm))):
        raise NotAnAutomorphism("cell map of the symmetry is not a bijection")
    cm = np.asarray(g.cell_map)
    target = cm[perm]  # element owning the image of each triangle

    vperm: list[Optional[int]] = [None] * g.n_vertices
    eperm: list[Optional[int]] = [None] * g.n_edges
    for vid in range(g.n_vertices):
        owned = target[cm == vid]
        if owned.size == 0:
            continue  # element owns no cells; resolved by incidence below
        codes = np.unique(owned)
        if len(codes) != 1:
            raise NotAnAutomorphism(f"vertex {vid} cells map to {len(codes)} elements")
        code = int(codes[0])
        if code < 0:
            raise NotAnAutomorphism(f"vertex {vid} maps to an edge")
        vperm[vid] = code
    for eid in range(g.n_edges):
        owned = target[cm == -eid - 1]
        if owned.size == 0:
            continue
        codes = np.unique(owned)
        if len(codes) != 1:
            raise NotAnAutomorphism(f"edge {eid} cells map to {len(codes)} elements")
        code = int(codes[0])
        if code >= 0:
            raise NotAnAutomorphism(f"edge {eid} maps to a vertex")
        eperm[eid] = -code - 1

    _propagate_push(g, vperm, eperm)
    aut = GraphAut(tuple(vperm), tuple(eperm))
    validate_graph_aut(g, aut)
    return aut


def _propagate_push(g: ReebGraph, vperm: list, eperm: list) -> None:
    """Resolve elements whose partition class is empty (sharp peaks can be
    starved of cells by lower-level components) using incidence and values.

    An unmapped vertex on a mapped edge is the image edge's endpoint with the
    matching value; an unmapped edge with a mapped endpoint goes to an unused
    image edge with the same interval at the image endpoint, parallel classes
    being matched in id order (parallel equal-interval edges are genuinely
    interchangeable).
    """
    used_edges = {e for e in eperm if e is not None}

    def edge_key(u: int, v: int, lo: float, hi: float) -> tuple:
        return (min(u, v), max(u, v), lo, hi)

    literal: dict[tuple, list[int]] = {}
    for e in g.edges:
        literal.setdefault(edge_key(e.u, e.v, e.lo, e.hi), []).append(e.id)

    progress = True
    while progress:
        progress = False
        # edges whose endpoints are both mapped: the image class is pinned by
        # the mapped endpoints; edges within one class are parallel with equal
        # intervals and genuinely interchangeable, matched in id order
        pending: dict[tuple, list[int]] = {}
        for e in g.edges:
            if eperm[e.id] is None and vperm[e.u] is not None and vperm[e.v] is not None:
                pending.setdefault(
                    edge_key(vperm[e.u], vperm[e.v], e.lo, e.hi), []
                ).append(e.id)
        for key, sibs in pending.items():
            cands = [i for i in literal.get(key, []) if i not in used_edges]
            if len(cands) != len(sibs):
                raise NotAnAutomorphism("pushed edge classes do not correspond")
            for sid, cid in zip(sorted(sibs), sorted(cands)):
                eperm[sid] = cid
                used_edges.add(cid)
                progress = True
        # unmapped vertex on a mapped edge: the image endpoint is pinned by
        # its value (the two endpoints of an edge always differ in value)
        for v in g.vertices:
            if vperm[v.id] is not None:
                continue
            for ei in g.incident_edges(v.id):
                if eperm[ei] is None:
                    continue
                img = g.edges[eperm[ei]]
                for w in (img.u, img.v):
                    if g.vertices[w].value == v.value:
                        vperm[v.id] = w
                        progress = True
                        break
                if vperm[v.id] is not None:
                    break
        if progress:
            continue
        # last resort: an unmapped edge with one mapped endpoint and an
        # unmapped far end; pick among unused candidates at the image
        # endpoint (sibling groups matched in id order)
        for e in g.edges:
            if eperm[e.id] is not None:
                continue
            for end, other in ((e.u, e.v), (e.v, e.u)):
                if vperm[end] is None or vperm[other] is not None:
                    continue
                sibs = sorted(
                    s.id
                    for s in (g.edges[i] for i in g.incident_edges(end))
                    if s.id is not None
                    and eperm[s.id] is None
                    and (s.lo, s.hi) == (e.lo, e.hi)
                    and vperm[s.u if s.u != end else s.v] is None
                )
                cands = [
                    f_.id
                    for f_ in (g.edges[i] for i in g.incident_edges(vperm[end]))
                    if (f_.lo, f_.hi) == (e.lo, e.hi) and f_.id not in used_edges
                ]
                if sibs and len(cands) == len(sibs):
                    for sid, cid in zip(sibs, sorted(cands)):
                        eperm[sid] = cid
                        used_edges.add(cid)
                    progress = True
                    break
            if progress:
                break
    if any(p is None for p in vperm) or any(p is None for p in eperm):
        raise NotAnAutomorphism("could not resolve every element of the pushed map")


def induced_auts_of_record(g: ReebGraph, rec: ConstructionRecord) -> list[GraphAut]:
    return [induced_graph_aut(g, sym) for sym in rec.symmetries]


# ---------------------------------------------------------------------------
# generated permutation groups and the structural recursion
# ---------------------------------------------------------------------------


def generated_group(g: ReebGraph, gens: Iterable[GraphAut], cap: int = 5000) -> PermGroup:
    """Permutation group on vertex + edge ids generated by graph automorphisms."""
    nv = g.n_vertices
    degree = nv + g.n_edges
    perms = []
    for a in gens:
        perms.append(tuple(list(a.vperm) + [nv + e for e in a.eperm]))
    group = PermGroup(degree=degree, generators=perms)
    if enumerate_elements(group, cap) is None:
        raise AutOverflow(cap)
    return group


def structural_group(rec: ConstructionRecord) -> GroupTerm:
    """Group term of a construction record via the wreath recursion.

    Circuit and simple cases wreathe the per-cylinder group with the cyclic
    band rotation; the tree case wreathes the product of the orbit
    representative groups with the two lattice translations; disk records
    recurse over their slot layout.
    """
    if rec.case in ("circuit", "simple"):
        if rec.n < 1:
            raise IncompleteRecord("circuit record needs n >= 1")
        cylinder_terms = {s.term for s in rec.slots}
        if len(cylinder_terms) > 1:
            raise IncompleteRecord("circuit slots carry different terms")
        base = cylinder_terms.pop() if cylinder_terms else Triv()
        return normalize(Wr(base, rec.n))
    if rec.case == "tree":
        if rec.n < 1 or rec.m < 1:
            raise IncompleteRecord("tree record needs n, m >= 1")
        orbit_terms: dict[int, GroupTerm] = {}
        for s in rec.slots:
            orbit_terms[s.orbit] = s.term
        reps = [orbit_terms.get(r, Triv()) for r in range(4)]
        return normalize(Wr2(normalize(Prod(*reps)), rec.n, rec.m))
    if rec.case == "disk":
        layout = rec.disk_layout
        if layout == "triv" or layout is None and not rec.slots:
            return Triv()
        if layout == "prod":
            if not rec.slots:
                raise IncompleteRecord("prod disk record without slots")
            return normalize(Prod(*[s.term for s in rec.slots]))
        if layout == "wrc":
            if not rec.slots:
                raise IncompleteRecord("wreath disk record without slots")
            terms = {s.term for s in rec.slots}
            if len(terms) != 1:
                raise IncompleteRecord("wreath disk slots carry different terms")
            return normalize(Wr(terms.pop(), len(rec.slots)))
        raise IncompleteRecord(f"unknown disk layout {layout!r}")
    raise IncompleteRecord(f"unknown case {rec.case!r}")
