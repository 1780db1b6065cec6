"""The model structure for setoids on finite oriented graphs, exhaustively.

Graphs are stored natively (vertex count plus edge list) so that the
exhaustive corpora stay cheap to enumerate; adapters convert to two-level
presheaves whenever the generic lifting / colimit layer is wanted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .presheaf import GRAPH, FinPresheaf, IndexPresentation, make_presheaf
from .setoids import (Setoid, SetoidMorphism, close_setoid, injection_structure,
                      morphism_from_elements, surjection_structure)
from . import shapes


@dataclass(frozen=True)
class Graph:
    nv: int
    edges: tuple            # tuple of (source, target)

    def __post_init__(self):
        for s, t in self.edges:
            if not (0 <= s < self.nv and 0 <= t < self.nv):
                raise ValueError("edge endpoint out of range")

    @property
    def ne(self) -> int:
        return len(self.edges)

    def to_presheaf(self) -> FinPresheaf:
        index = IndexPresentation(GRAPH, 1)
        ps = make_presheaf(index, [self.nv, self.ne],
                           {"s@1": [e[0] for e in self.edges],
                            "t@1": [e[1] for e in self.edges]})
        shapes._record_labels(ps, [list(range(self.nv)), list(self.edges)])
        return ps


def from_presheaf(ps: FinPresheaf) -> Graph:
    s, t = ps.action("s@1"), ps.action("t@1")
    return Graph(ps.size(0), tuple((s[e], t[e]) for e in ps.cells(1)))


@dataclass(frozen=True)
class GraphMap:
    source: Graph
    target: Graph
    on_vertices: tuple
    on_edges: tuple

    def __call__(self, kind, i):
        return (self.on_vertices if kind == 0 else self.on_edges)[i]


def graph_maps(x: Graph, y: Graph) -> Iterator[GraphMap]:
    """All graph morphisms, in canonical order."""
    if x.nv > 0 and y.nv == 0:
        return
    if x.ne > 0 and y.ne == 0 and x.nv == 0:
        return
    edge_choices = []
    by_pair = {}
    for k, (s, t) in enumerate(y.edges):
        by_pair.setdefault((s, t), []).append(k)
    for vmap in itertools.product(range(max(y.nv, 1)), repeat=x.nv):
        if x.nv > 0 and max(vmap, default=0) >= y.nv:
            continue
        pools = []
        dead = False
        for (s, t) in x.edges:
            pool = by_pair.get((vmap[s], vmap[t]), [])
            if not pool:
                dead = True
                break
            pools.append(pool)
        if dead:
            continue
        for emap in itertools.product(*pools):
            yield GraphMap(x, y, tuple(vmap), tuple(emap))


@dataclass
class SetoidStructure:
    refl: tuple     # vertex -> edge
    inv: tuple      # edge -> edge
    comp: dict      # (edge a: x->y, edge b: y->z) -> edge x->z


def setoid_structure(x: Graph) -> Optional[SetoidStructure]:
    """Chosen lifting data against the reflexivity/inverse/composition shapes.

    Present exactly when the graph is fibrant; every slot picks the least
    available edge so the structure is canonical.
    """
    refl = []
    for v in range(x.nv):
        loops = [k for k, e in enumerate(x.edges) if e == (v, v)]
        if not loops:
            return None
        refl.append(loops[0])
    inv = []
    for (s, t) in x.edges:
        rev = [k for k, e in enumerate(x.edges) if e == (t, s)]
        if not rev:
            return None
        inv.append(rev[0])
    comp = {}
    for a, (s1, t1) in enumerate(x.edges):
        for b, (s2, t2) in enumerate(x.edges):
            if t1 != s2:
                continue
            through = [k for k, e in enumerate(x.edges) if e == (s1, t2)]
            if not through:
                return None
            comp[(a, b)] = through[0]
    return SetoidStructure(tuple(refl), tuple(inv), comp)


def enumerate_graphs(max_v: int, max_e: int) -> Iterator[Graph]:
    """Every oriented multigraph with bounded vertices and edges."""
    for nv in range(max_v + 1):
        pairs = [(s, t) for s in range(nv) for t in range(nv)]
        for ne in range(max_e + 1):
            for combo in itertools.combinations_with_replacement(pairs, ne):
                yield Graph(nv, tuple(combo))


def graph_tensor(x: Graph, y: Graph) -> Graph:
    """V(X x Y) with vertex-by-edge and edge-by-vertex arrows."""
    verts = [(a, b) for a in range(x.nv) for b in range(y.nv)]
    vidx = {v: i for i, v in enumerate(verts)}
    edges = []
    for a in range(x.nv):
        for (s, t) in y.edges:
            edges.append((vidx[(a, s)], vidx[(a, t)]))
    for (s, t) in x.edges:
        for b in range(y.nv):
            edges.append((vidx[(s, b)], vidx[(t, b)]))
    return Graph(len(verts), tuple(edges))


ARROW = Graph(2, ((0, 1),))
LOOP = Graph(1, ((0, 0),))
POINT = Graph(1, ())


def homotopy_relation(f: GraphMap, g: GraphMap) -> Optional[tuple]:
    """A vertexwise family of edges f(x) -> g(x); the least one, if any."""
    y = f.target
    out = []
    for v in range(f.source.nv):
        pool = [k for k, e in enumerate(y.edges)
                if e == (f.on_vertices[v], g.on_vertices[v])]
        if not pool:
            return None
        out.append(pool[0])
    return tuple(out)


def homotopy_classes(x: Graph, y: Graph) -> Setoid:
    """Setoid of maps under the vertexwise-edge relation (both fibrant)."""
    maps = list(graph_maps(x, y))
    relations = []
    for i, f in enumerate(maps):
        for j, g in enumerate(maps):
            r = homotopy_relation(f, g)
            if r is not None:
                relations.append((i, j, r))
    closed = close_setoid(maps, relations)
    if closed is None:
        raise ValueError("homotopy relation fails to close; objects not fibrant?")
    return closed


def homotopy_classes_by_cylinder(x: Graph, y: Graph) -> Setoid:
    """Same setoid computed through tensor-cylinder witnesses.

    A homotopy is a map (arrow (x) X) -> Y restricting to (f, g) on the two
    ends; its middle edge family is exactly the vertexwise relation, so the
    two computations must agree and the acceptance suite asserts they do.
    """
    maps = list(graph_maps(x, y))
    index = {(m.on_vertices, m.on_edges): i for i, m in enumerate(maps)}
    cyl = graph_tensor(ARROW, x)
    relations = []
    for h in graph_maps(cyl, y):
        # vertices of cyl: (0, v) then (1, v); edges: per-vertex copies of
        # x-edges for each arrow-vertex, then the (arrow-edge, v) family.
        f_v = tuple(h.on_vertices[v] for v in range(x.nv))
        g_v = tuple(h.on_vertices[x.nv + v] for v in range(x.nv))
        f_e = tuple(h.on_edges[e] for e in range(x.ne))
        g_e = tuple(h.on_edges[x.ne + e] for e in range(x.ne))
        mid = tuple(h.on_edges[2 * x.ne + v] for v in range(x.nv))
        fi = index.get((f_v, f_e))
        gi = index.get((g_v, g_e))
        if fi is not None and gi is not None:
            relations.append((fi, gi, mid))
    dedup = {}
    for s, t, w in relations:
        dedup.setdefault((s, t), w)
    closed = close_setoid(maps, [(s, t, w) for (s, t), w in sorted(dedup.items())])
    if closed is None:
        raise ValueError("cylinder homotopy relation fails to close")
    return closed


def underlying_setoid(x: Graph) -> Setoid:
    closed = close_setoid(list(range(x.nv)),
                          [(s, t, k) for k, (s, t) in enumerate(x.edges)])
    if closed is None:
        raise ValueError("graph is not a setoid")
    return closed


def setoid_morphism(f: GraphMap) -> SetoidMorphism:
    return SetoidMorphism(underlying_setoid(f.source), underlying_setoid(f.target),
                          list(f.on_vertices), list(f.on_edges))


def is_setoid_iso(f: GraphMap) -> dict:
    """Injection and surjection structures of the underlying setoid map."""
    m = setoid_morphism(f)
    inj = injection_structure(m)
    surj = surjection_structure(m)
    return {"injection": inj is not None, "surjection": surj is not None,
            "iso": inj is not None and surj is not None,
            "injection_table": inj, "surjection_table": surj}


def is_equivalence_graph(f: GraphMap) -> bool:
    """Equivalence between fibrant graphs = isomorphism of setoids."""
    if setoid_structure(f.source) is None or setoid_structure(f.target) is None:
        raise ValueError("setoid-iso criterion needs fibrant endpoints")
    return is_setoid_iso(f)["iso"]


def graph_map_to_presheaf(f: GraphMap):
    from .presheaf import make_map
    return make_map(f.source.to_presheaf(), f.target.to_presheaf(),
                    [list(f.on_vertices), list(f.on_edges)])


def presheaf_map_to_graph(m) -> GraphMap:
    return GraphMap(from_presheaf(m.source), from_presheaf(m.target),
                    tuple(m.components[0]), tuple(m.components[1]))
