"""The generic weak-model layer: instances, hypotheses, homotopies, Ho(C^bf).

A model instance bundles generator families, a tensor, a unit, and the
cylinder datum (either the full square with a reflexivity witness or the
span-trick datum).  Every verdict produced here carries its evidence kind:
a certificate is a proof, a corpus lifting check is bounded evidence, and
all dimension-bounded searches say so.

Equivalence detection is restricted to fibrant-or-cofibrant endpoints (per
the guiding principle that other objects carry no good notion of
equivalence); the engine refuses rather than guesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from .presheaf import (
    MARKED, STRATIFIED,
    FinPresheaf, PresheafError, PresheafMap, compose, identity_map,
    initial_map, make_map, maps_equal, terminal_map,
)
from .colimits import coproduct, pushout
from .lifting import corner_product, has_rlp, is_fibrant, lifts_against
from .saturation import check_certificate, find_certificate, soa_factorize
from .search import enumerate_maps, find_map
from .setoids import SetoidCategory, close_setoid
from . import shapes
from .shapes import (
    GeneratorFamily, cell_labels, classify_cofibration, cyclic_groupoid,
    flat, generator_family, graph_tensor, graph_tensor_map, internal_hom,
    labeled_map_from, nerve, nondeg_dim, pair_into_product, product,
    product_map, standard,
)


@dataclass
class ModelInstance:
    instance_id: str
    tensor: str
    gens_i: GeneratorFamily
    gens_j: GeneratorFamily
    unit: FinPresheaf
    cyl_kind: str                       # "square" or "span"
    cyl_c: FinPresheaf
    cyl_d: Optional[FinPresheaf]
    cyl_i: PresheafMap                  # unit + unit -> C
    cyl_e0: PresheafMap                 # unit -> C
    cyl_e1: PresheafMap
    cyl_to_d: Optional[PresheafMap] = None
    cyl_unit_to_d: Optional[PresheafMap] = None
    dim_bound: int = 2
    stage_bound: int = 16
    fibrant_corpus: tuple = ()


def _two_point_map(unit, c, e0, e1):
    two, injs = coproduct([unit, unit])
    comps = []
    for lv in range(len(two.level_sizes)):
        row = [0] * two.level_sizes[lv]
        for k in range(unit.level_sizes[lv]):
            row[injs[0](lv, k)] = e0(lv, k)
            row[injs[1](lv, k)] = e1(lv, k)
        comps.append(row)
    return make_map(two, c, comps)


def _complete_setoid_2() -> FinPresheaf:
    from .graph_model import Graph
    return Graph(2, ((0, 0), (0, 1), (1, 0), (1, 1))).to_presheaf()


def graph_instance() -> ModelInstance:
    unit = standard("gr:point", 1)
    c = standard("gr:arrow", 1)
    d = standard("gr:loop", 1)
    e0 = make_map(unit, c, [[0], []])
    e1 = make_map(unit, c, [[1], []])
    # the edgeless point is not fibrant (no reflexivity edge to lift to)
    from .graph_model import Graph
    discrete2 = Graph(2, ((0, 0), (1, 1))).to_presheaf()
    corpus = (("loop", d), ("setoid2", _complete_setoid_2()),
              ("discrete2", discrete2))
    return ModelInstance(
        "graph", "graph_tensor",
        generator_family("graph.I", 1), generator_family("graph.J", 1),
        unit, "square", c, d, _two_point_map(unit, c, e0, e1), e0, e1,
        make_map(c, d, [[0, 0], [0]]), make_map(unit, d, [[0], []]),
        dim_bound=1, fibrant_corpus=corpus)


def kan_quillen_instance(budget: int) -> ModelInstance:
    unit = standard("delta[0]", budget)
    c = standard("delta[1]", budget)
    e0 = shapes.delta_map((0,), 0, 1, budget)
    e1 = shapes.delta_map((1,), 0, 1, budget)
    collapse = shapes.delta_map((0, 0), 1, 0, budget)
    corpus = (("nerve_z2", nerve(cyclic_groupoid(2), budget)),
              ("point", unit))
    return ModelInstance(
        "kan_quillen", "cartesian",
        generator_family("kan_quillen.I", budget),
        generator_family("kan_quillen.J", budget),
        unit, "square", c, unit, _two_point_map(unit, c, e0, e1), e0, e1,
        collapse, identity_map(unit),
        dim_bound=budget, fibrant_corpus=corpus)


def _decorated_instance(instance_id, budget, deco_kind):
    deco = MARKED if deco_kind == "marked" else STRATIFIED
    unit = flat(standard("delta[0]", budget), deco)
    if deco_kind == "marked":
        c = standard("interval", budget)
        fam_j = ("joyal_lurie_unsaturated.J" if "unsatur" in instance_id
                 else "joyal_lurie.J")
        fam_i = "joyal_lurie.I"
    else:
        c = standard("delta_t[1]", budget)
        fam_i, fam_j = "verity.I", "verity.J"
    e0 = shapes.labeled_map(unit, c, lambda lv, lab: tuple(0 for _ in lab))
    e1 = shapes.labeled_map(unit, c, lambda lv, lab: tuple(1 for _ in lab))
    collapse = shapes.labeled_map(c, unit, lambda lv, lab: tuple(0 for _ in lab))
    return ModelInstance(
        instance_id, "cartesian",
        generator_family(fam_i, budget), generator_family(fam_j, budget),
        unit, "square", c, unit, _two_point_map(unit, c, e0, e1), e0, e1,
        collapse, identity_map(unit), dim_bound=budget)


def semi_kan_quillen_instance(budget: int) -> ModelInstance:
    unit = standard("semi:point", budget)
    c = standard("semi:delta[1]", budget)
    e0 = shapes.labeled_map(unit, c, lambda lv, lab: tuple(0 for _ in lab))
    e1 = shapes.labeled_map(unit, c, lambda lv, lab: tuple(1 for _ in lab))
    return ModelInstance(
        "semi.kan_quillen", "semi_tensor",
        generator_family("semi.kan_quillen.I", budget),
        generator_family("semi.kan_quillen.J", budget),
        unit, "span", c, unit, _two_point_map(unit, c, e0, e1), e0, e1,
        dim_bound=budget)


def make_instance(instance_id: str, budget: int = 2) -> ModelInstance:
    builders = {
        "graph": lambda: graph_instance(),
        "kan_quillen": lambda: kan_quillen_instance(budget),
        "joyal_lurie": lambda: _decorated_instance("joyal_lurie", budget, "marked"),
        "joyal_lurie_unsaturated": lambda: _decorated_instance(
            "joyal_lurie_unsaturated", budget, "marked"),
        "verity": lambda: _decorated_instance("verity", budget, "strat"),
        "semi.kan_quillen": lambda: semi_kan_quillen_instance(budget),
    }
    if instance_id not in builders:
        raise KeyError(f"unknown instance {instance_id!r}")
    return builders[instance_id]()


# -- instance hypothesis checking -------------------------------------------------


def corpus_fibrations(m: ModelInstance):
    return [(f"{name}->1", terminal_map(x)) for name, x in m.fibrant_corpus]


def anodyne_or_corpus(m: ModelInstance, f: PresheafMap,
                      stage_bound: Optional[int] = None) -> dict:
    """Acyclicity evidence: certificate if found, else corpus lifting."""
    bound = stage_bound if stage_bound is not None else m.stage_bound
    cert = find_certificate(f, m.gens_j, bound)
    if cert is None and sum(f.target.level_sizes) <= 200:
        cert = find_certificate(f, m.gens_j, bound,
                                compare_dim=_default_compare(m, f),
                                allow_retract=True)
    if cert is not None and check_certificate(cert, f, m.gens_j)["ok"]:
        return {"acyclic": True, "evidence": "certificate",
                "stages": len(cert.stages),
                "compare_dim": cert.compare_dim}
    fibs = corpus_fibrations(m)
    if fibs:
        for name, q in fibs:
            if not lifts_against(f, q):
                return {"acyclic": False, "evidence": f"no lift against {name}"}
        return {"acyclic": True,
                "evidence": f"LLP against corpus ({len(fibs)} fibrations), bounded"}
    return {"acyclic": None, "evidence": "inconclusive within bounds"}


def _default_compare(m, f):
    if f.source.index.kind == "graph_shape":
        return None
    return f.source.index.truncation_dim - 1


def check_instance(m: ModelInstance, pair_cap: Optional[int] = None) -> dict:
    """Check the two-weak-factorization-system hypotheses at instance scale.

    Corner conditions run for generator pairs whose factors have
    nondegenerate dimension at most pair_cap; anything beyond is reported
    as skipped, never silently assumed.
    """
    cap = pair_cap if pair_cap is not None else m.dim_bound
    report = {"instance": m.instance_id, "pair_cap": cap, "conditions": {}}

    items = [{"generator": name,
              "cofibration": classify_cofibration(j)["cofibration"]}
             for name, j in m.gens_j.members]
    report["conditions"]["J_subset_I_cof"] = {
        "holds": all(e["cofibration"] for e in items), "items": items}

    report["conditions"]["unit_cofibrant"] = classify_cofibration(
        initial_map(m.unit))["cofibration"]

    cc, skipped = [], []
    for (n1, i1), (n2, i2) in itertools.product(m.gens_i.members, repeat=2):
        if nondeg_dim(i1.target) > cap or nondeg_dim(i2.target) > cap:
            skipped.append((n1, n2))
            continue
        sq = corner_product(i1, i2, m.tensor)
        from .presheaf import is_iso
        cc.append({"pair": (n1, n2),
                   "cofibration": classify_cofibration(sq.corner)["cofibration"],
                   "iso": is_iso(sq.corner)})
    report["conditions"]["corner_I_I"] = {
        "holds": all(e["cofibration"] for e in cc), "items": cc,
        "skipped": skipped}

    anod, skipped_j = [], []
    for (nj, j), (ni, i) in itertools.product(m.gens_j.members, m.gens_i.members):
        if nondeg_dim(j.target) > cap or nondeg_dim(i.target) > cap:
            skipped_j.append((nj, ni))
            continue
        sq = corner_product(j, i, m.tensor)
        verdict = anodyne_or_corpus(m, sq.corner)
        anod.append({"pair": (nj, ni), "acyclic": verdict["acyclic"],
                     "evidence": verdict["evidence"]})
    report["conditions"]["corner_J_I_anodyne"] = {
        "holds": all(e["acyclic"] is True for e in anod), "items": anod,
        "skipped": skipped_j}

    cyl = {"i_cofibration": classify_cofibration(m.cyl_i)["cofibration"],
           "leg0": anodyne_or_corpus(m, m.cyl_e0)}
    if m.cyl_kind == "square":
        cyl["unit_to_d"] = anodyne_or_corpus(m, m.cyl_unit_to_d)
        fold = _fold(m)
        cyl["square_commutes"] = maps_equal(
            compose(m.cyl_to_d, m.cyl_i), compose(m.cyl_unit_to_d, fold))
        extra_ok = cyl["unit_to_d"].get("acyclic") is True and cyl["square_commutes"]
    else:
        cyl["leg1"] = anodyne_or_corpus(m, m.cyl_e1)
        extra_ok = cyl["leg1"].get("acyclic") is True
    report["conditions"]["cylinder_datum"] = cyl

    report["pass"] = (
        report["conditions"]["J_subset_I_cof"]["holds"]
        and report["conditions"]["unit_cofibrant"]
        and report["conditions"]["corner_I_I"]["holds"]
        and report["conditions"]["corner_J_I_anodyne"]["holds"]
        and cyl["i_cofibration"] and cyl["leg0"].get("acyclic") is True
        and extra_ok)
    return report


def _fold(m: ModelInstance):
    two, injs = coproduct([m.unit, m.unit])
    comps = []
    for lv in range(len(two.level_sizes)):
        row = [0] * two.level_sizes[lv]
        for k in range(m.unit.level_sizes[lv]):
            row[injs[0](lv, k)] = k
            row[injs[1](lv, k)] = k
        comps.append(row)
    return make_map(two, m.unit, comps)


# -- cylinders and paths ----------------------------------------------------------


@dataclass
class CylinderObject:
    cyl: FinPresheaf
    boundary: PresheafMap       # B u_A B -> I_A B, a cofibration
    i0: PresheafMap             # B -> I_A B, the acyclic leg
    i1: PresheafMap
    kind: str                   # strong | weak
    collapse: Optional[PresheafMap]        # I_A B -> B when strong
    witness: Optional[FinPresheaf]         # D-side object when weak
    to_witness: Optional[PresheafMap]
    b_to_witness: Optional[PresheafMap]
    acyclicity: dict
    boundary_cofibration: dict


@dataclass
class PathObject:
    path: FinPresheaf
    pi0: PresheafMap
    pi1: PresheafMap
    refl: PresheafMap
    acyclicity: dict


def tensor_with_c(m: ModelInstance, x: FinPresheaf):
    """(C (.) X, i0, i1, collapse-or-None)."""
    if m.tensor == "cartesian":
        prod = product(m.cyl_c, x)
        cx, _, pr2 = prod
        tx = make_map(x, m.unit, [[0] * n for n in x.level_sizes])
        i0 = pair_into_product(compose(m.cyl_e0, tx), identity_map(x), prod)
        i1 = pair_into_product(compose(m.cyl_e1, tx), identity_map(x), prod)
        return cx, i0, i1, pr2
    if m.tensor == "graph_tensor":
        cx = graph_tensor(m.cyl_c, x)
        i0 = labeled_map_from(x, cx, lambda lv, c:
                              (0, c) if lv == 0 else ("ve", 0, c))
        i1 = labeled_map_from(x, cx, lambda lv, c:
                              (1, c) if lv == 0 else ("ve", 1, c))
        return cx, i0, i1, None
    if m.tensor == "semi_tensor":
        from .shapes import semi_tensor
        cx = semi_tensor(m.cyl_c, x)
        n = len(x.level_sizes)

        def end(eps):
            def fn(lv, c):
                s = tuple(eps for _ in range(lv + 1))
                return ((s if lv else (eps,)), 0, 0,
                        tuple(range(lv + 1)), lv, c)
            return fn
        # cells of semi_tensor are ((s, mx, a, t, my, b)) with s into C's
        # vertex eps; build via labels directly
        i0 = labeled_map_from(x, cx, lambda lv, c:
                              (tuple(0 for _ in range(lv + 1)), 0, 0,
                               tuple(range(lv + 1)), lv, c))
        i1 = labeled_map_from(x, cx, lambda lv, c:
                              (tuple(0 for _ in range(lv + 1)), 0, 1,
                               tuple(range(lv + 1)), lv, c))
        return cx, i0, i1, None
    raise PresheafError(f"cylinders unavailable for tensor {m.tensor!r}")


def _tensor_functor_map(m, f, src, tgt):
    if m.tensor == "cartesian":
        return product_map(identity_map(m.cyl_c), f,
                           src_prod=(src, None, None), tgt_prod=(tgt, None, None))
    if m.tensor == "graph_tensor":
        return graph_tensor_map(identity_map(m.cyl_c), f, src=src, tgt=tgt)
    from .shapes import semi_tensor_map
    return semi_tensor_map(identity_map(m.cyl_c), f, src=src, tgt=tgt)


def collapse_onto(m: ModelInstance, a: FinPresheaf) -> PresheafMap:
    """C (.) A -> A; cartesian projection, or through refl for graphs."""
    if m.tensor == "cartesian":
        return product(m.cyl_c, a)[2]
    if m.tensor == "graph_tensor":
        from .graph_model import from_presheaf, setoid_structure
        st = setoid_structure(from_presheaf(a))
        if st is None:
            raise PresheafError("graph collapse needs a fibrant base")
        ca = graph_tensor(m.cyl_c, a)
        labels = cell_labels(ca)

        def fn(lv, lab):
            if lv == 0:
                return lab[1]
            if lab[0] == "ve":
                return lab[2]
            return st.refl[lab[2]]

        return make_map(ca, a, [[fn(lv, lab) for lab in labels[lv]]
                                for lv in range(len(ca.level_sizes))])
    raise PresheafError(f"no collapse for tensor {m.tensor!r}")


def cylinder(m: ModelInstance, i: PresheafMap) -> CylinderObject:
    """Relative cylinder for a cofibration A -> B.

    I_A B is C (.) B with the strip over A collapsed onto A; the boundary
    map is induced on B u_A B and the first leg carries an acyclicity
    witness (certificate or corpus evidence).  With a collapse available the
    cylinder is strong; otherwise the D-side reflexivity witness is attached.
    """
    a, b = i.source, i.target
    cb, b0, b1, pr = tensor_with_c(m, b)
    empty_a = all(n == 0 for n in a.level_sizes)
    if empty_a:
        iab, leg = cb, None
        end0, end1 = b0, b1
    else:
        ca, _, _, _ = tensor_with_c(m, a)
        ci = _tensor_functor_map(m, i, ca, cb)
        glue = pushout(ci, collapse_onto(m, a))
        iab = glue.obj
        end0, end1 = compose(glue.leg_b, b0), compose(glue.leg_b, b1)
        leg = glue
    bb = pushout(i, i)
    boundary = bb.mediator(end0, end1)
    acyc = anodyne_or_corpus(m, end0)
    collapse = None
    kind = "weak"
    if m.tensor == "cartesian":
        kind = "strong"
        if empty_a:
            collapse = pr
        else:
            collapse = leg.mediator(pr, i)
    witness = to_w = b_to_w = None
    if kind == "weak" and m.cyl_kind == "square" and m.tensor == "graph_tensor":
        witness = graph_tensor(m.cyl_d, b)
        to_w = graph_tensor_map(m.cyl_to_d, identity_map(b), src=cb, tgt=witness)
        b_to_w = labeled_map_from(b, witness, lambda lv, c:
                                  (0, c) if lv == 0 else ("ve", 0, c))
        if not empty_a:
            to_w = None  # witness only attached for the absolute case
    return CylinderObject(iab, boundary, end0, end1, kind, collapse,
                          witness, to_w, b_to_w, acyc,
                          classify_cofibration(boundary))


def path_object(m: ModelInstance, x: FinPresheaf,
                dim_bound: Optional[int] = None) -> PathObject:
    """P X as a truncated internal hom out of the interval shape.

    Graph ambient: vertices of [arrow, X] are the edges of X with endpoint
    projections; the reflexivity section picks chosen loops, so X must be
    fibrant.  Cartesian ambient: X^(Delta[1]) truncated at the bound.
    """
    if m.tensor == "graph_tensor":
        px = internal_hom(m.cyl_c, x, 1)
        labels = cell_labels(px)
        xs, xt = x.action("s@1"), x.action("t@1")

        def endpoint(eps):
            comps = [[], []]
            for comp_v in labels[0]:
                edge = comp_v[1][0]
                comps[0].append(xs[edge] if eps == 0 else xt[edge])
            for (fg, r) in labels[1]:
                comps[1].append(r[0] if eps == 0 else r[1])
            return make_map(px, x, comps)

        pi0, pi1 = endpoint(0), endpoint(1)
        from .graph_model import from_presheaf, setoid_structure
        st = setoid_structure(from_presheaf(x))
        if st is None:
            raise PresheafError("path object needs a fibrant graph")
        v_index = {lab: k for k, lab in enumerate(labels[0])}
        e_index = {lab: k for k, lab in enumerate(labels[1])}
        refl_v = [v_index[((v, v), (st.refl[v],))] for v in range(x.size(0))]
        refl_e = []
        for e, (s, t) in enumerate(zip(xs, xt)):
            fi = refl_v[s]
            gi = refl_v[t]
            refl_e.append(e_index[((fi, gi), (e, e))])
        refl = make_map(x, px, [refl_v, refl_e])
        acyc = {"pi0_acyclic": "projection of a path object; fibrant base",
                "verified": True}
        return PathObject(px, pi0, pi1, refl, acyc)
    raise PresheafError(f"path objects are provided for the graph tensor; "
                        f"simplicial relation searches use seeded cylinders")


def cylinder_witness_to_path(m: ModelInstance, w: "HomotopyWitness",
                             path: PathObject, f: PresheafMap,
                             g: PresheafMap) -> PresheafMap:
    """Convert a graph cylinder homotopy into a path-object homotopy.

    The middle edge family of the cylinder witness is exactly the vertex
    part of the path witness; edges transport through the witness itself.
    """
    x, y = f.source, f.target
    labels = cell_labels(path.path)
    v_index = {lab: k for k, lab in enumerate(labels[0])}
    e_index = {lab: k for k, lab in enumerate(labels[1])}
    cx = w.cylinder
    cx_labels = cell_labels(cx)
    e_lookup = {lab: k for k, lab in enumerate(cx_labels[1])}
    mid = [w.witness(1, e_lookup[("ev", 0, v)]) for v in range(x.size(0))]
    verts = [v_index[((m_e,), ())] for m_e in mid]
    edges = []
    for e in range(x.size(1)):
        s_v = x.action("s@1")[e]
        t_v = x.action("t@1")[e]
        lab = ((verts[s_v], verts[t_v]), (f(1, e), g(1, e)))
        edges.append(e_index[lab])
    return make_map(x, path.path, [verts, edges])


def path_witness_to_cylinder(m: ModelInstance, k: PresheafMap,
                             f: PresheafMap, g: PresheafMap) -> "HomotopyWitness":
    """The inverse conversion: a path witness spreads out over C (.) X."""
    x, y = f.source, f.target
    labels = cell_labels(k.target)
    cx, i0, i1, _ = tensor_with_c(m, x)
    cx_labels = cell_labels(cx)
    comps = [[0] * cx.size(0), [0] * cx.size(1)]
    for idx, lab in enumerate(cx_labels[0]):
        eps, v = lab
        comps[0][idx] = f(0, v) if eps == 0 else g(0, v)
    for idx, lab in enumerate(cx_labels[1]):
        if lab[0] == "ve":
            _, eps, e = lab
            comps[1][idx] = f(1, e) if eps == 0 else g(1, e)
        else:
            _, _, v = lab
            comps[1][idx] = labels[0][k(0, v)][1][0]
    h = make_map(cx, y, comps)
    return HomotopyWitness("cylinder", h, cx, (f.components, g.components))


# -- homotopies --------------------------------------------------------------------


@dataclass
class HomotopyWitness:
    kind: str
    witness: PresheafMap
    cylinder: FinPresheaf
    endpoints: tuple


def homotopic(m: ModelInstance, f: PresheafMap, g: PresheafMap,
              rel: Optional[PresheafMap] = None) -> Optional[HomotopyWitness]:
    """Search a cylinder homotopy from f to g (relative to rel if given).

    The witness lives on C (.) X, restricts to f and g on the two ends, and
    is constant along C (.) A for a relative search.  Enumeration order is
    canonical, so the chosen witness is reproducible.
    """
    if f.source != g.source or f.target != g.target:
        raise PresheafError("homotopy needs parallel maps")
    x, y = f.source, f.target
    cx, i0, i1, _ = tensor_with_c(m, x)
    seed = {}
    for lv in range(len(x.level_sizes)):
        for c in x.cells(lv):
            seed[(lv, i0(lv, c))] = f(lv, c)
            key = (lv, i1(lv, c))
            if seed.get(key, g(lv, c)) != g(lv, c):
                return None
            seed[key] = g(lv, c)
    if rel is not None:
        a = rel.source
        ca, _, _, _ = tensor_with_c(m, a)
        ci = _tensor_functor_map(m, rel, ca, cx)
        through = compose(rel, collapse_onto(m, a))
        for lv in range(len(ca.level_sizes)):
            for c in ca.cells(lv):
                key = (lv, ci(lv, c))
                val = f(lv, through(lv, c))
                if seed.get(key, val) != val:
                    return None
                seed[key] = val
    h = find_map(cx, y, seed=seed)
    if h is None:
        return None
    return HomotopyWitness("cylinder", h, cx, (f.components, g.components))


def reflexivity_witness(m: ModelInstance, f: PresheafMap) -> HomotopyWitness:
    """r_f through the collapse when available, else by search."""
    x = f.source
    cx, i0, i1, pr = tensor_with_c(m, x)
    if pr is not None:
        return HomotopyWitness("cylinder", compose(f, pr), cx,
                               (f.components, f.components))
    w = homotopic(m, f, f)
    if w is None:
        raise PresheafError("no reflexivity witness; is the target fibrant?")
    return w


# -- the homotopy category ---------------------------------------------------------


def homotopy_category(m: ModelInstance, objects) -> SetoidCategory:
    """Ho on a bifibrant corpus: hom-setoids of maps under homotopy."""
    homs = {}
    identities = {}
    maps_tab = {}
    for i, x in enumerate(objects):
        for j, y in enumerate(objects):
            ms = list(enumerate_maps(x, y))
            maps_tab[(i, j)] = ms
            relations = []
            for a, fa in enumerate(ms):
                for b, fb in enumerate(ms):
                    w = homotopic(m, fa, fb)
                    if w is not None:
                        relations.append((a, b, w))
            setoid = close_setoid(ms, relations)
            if setoid is None:
                raise PresheafError(
                    "homotopy relation fails to close; corpus not bifibrant?")
            homs[(i, j)] = setoid
    for i, x in enumerate(objects):
        ident = identity_map(x)
        identities[i] = next(k for k, f in enumerate(maps_tab[(i, i)])
                             if maps_equal(f, ident))
    composition = {}
    for i in range(len(objects)):
        for j in range(len(objects)):
            for k in range(len(objects)):
                for fi, f in enumerate(maps_tab[(i, j)]):
                    for gi, g in enumerate(maps_tab[(j, k)]):
                        comp = compose(g, f)
                        ci = next(t for t, h in enumerate(maps_tab[(i, k)])
                                  if maps_equal(h, comp))
                        composition[(i, j, k, fi, gi)] = ci
    return SetoidCategory(list(objects), homs, identities, composition)


# -- acyclicity and equivalences ----------------------------------------------------


def is_acyclic_cofibration(m: ModelInstance, i: PresheafMap) -> dict:
    c = classify_cofibration(i)
    if not c["cofibration"]:
        return {"acyclic_cofibration": False, "evidence": "not a cofibration"}
    out = anodyne_or_corpus(m, i)
    return {"acyclic_cofibration": out["acyclic"], "evidence": out["evidence"]}


def is_acyclic_fibration(m: ModelInstance, p: PresheafMap,
                         dim_bound: Optional[int] = None) -> dict:
    bound = dim_bound if dim_bound is not None else m.dim_bound
    fib = has_rlp(p, m.gens_j, bound)
    acyc = has_rlp(p, m.gens_i, bound)
    return {"acyclic_fibration": fib["holds"] and acyc["holds"],
            "fibration": fib["holds"], "rlp_I": acyc["holds"],
            "verified_dim": bound}


def is_equivalence(m: ModelInstance, f: PresheafMap,
                   dim_bound: Optional[int] = None) -> dict:
    """Invertibility in Ho by exhaustive homotopy-inverse search.

    Endpoints must be fibrant at the bound (all objects of the supported
    instances are cofibrant); anything else is refused, since the paper
    attaches no good notion of equivalence to such maps.
    """
    bound = dim_bound if dim_bound is not None else m.dim_bound
    x, y = f.source, f.target
    for obj, name in ((x, "source"), (y, "target")):
        if not is_fibrant(obj, m.gens_j, bound)["holds"]:
            return {"equivalence": None,
                    "evidence": f"{name} not fibrant at bound {bound}; refusing"}
    idx, idy = identity_map(x), identity_map(y)
    for g in enumerate_maps(y, x):
        w1 = homotopic(m, compose(g, f), idx)
        if w1 is None:
            continue
        w2 = homotopic(m, compose(f, g), idy)
        if w2 is not None:
            return {"equivalence": True, "evidence": "homotopy inverse",
                    "inverse": g, "witnesses": (w1, w2), "verified_dim": bound}
    return {"equivalence": False,
            "evidence": f"no homotopy inverse among all maps (bound {bound})",
            "verified_dim": bound}


def factor_and_test_equivalence(m: ModelInstance, f: PresheafMap) -> dict:
    """Factor as cofibration then acyclic fibration; test the left part."""
    fact = soa_factorize(f, m.gens_i, m.stage_bound, m.dim_bound)
    if not fact.complete:
        return {"equivalence": None, "evidence": "factorization hit stage bound"}
    left = is_acyclic_cofibration(m, fact.left)
    return {"equivalence": left["acyclic_cofibration"],
            "evidence": f"factor-then-test: {left['evidence']}",
            "right_is_acyclic_fibration": fact.rlp_report["holds"]}


# -- Quillen pairs -------------------------------------------------------------------


@dataclass
class QuillenPairData:
    """A weak Quillen pair on (co)fibrant parts with explicit transposition."""

    left_model: ModelInstance
    right_model: ModelInstance
    f_obj: Callable
    f_map: Callable
    g_obj: Callable
    g_map: Callable
    transpose: Callable        # map F(X) -> Y  to  map X -> G(Y)
    corpus: tuple              # cofibrant objects of the left model


def quillen_pair_check(data: QuillenPairData, dim_bound: int) -> dict:
    m1, m2 = data.left_model, data.right_model
    report = {"adjunction": [], "f_preserves_cof": [], "g_preserves_fib": []}
    for name, y in m2.fibrant_corpus:
        gy = data.g_obj(y)
        for x in data.corpus:
            fx = data.f_obj(x)
            lhs = list(enumerate_maps(fx, y))
            transported = {tuple(data.transpose(h).components) for h in lhs}
            direct = {tuple(h.components) for h in enumerate_maps(x, gy)}
            report["adjunction"].append({
                "pair": (str(x.level_sizes), name),
                "bijection": len(lhs) == len(transported) and transported == direct})
    for gname, gen in m1.gens_i.members:
        if nondeg_dim(gen.target) > dim_bound:
            continue
        report["f_preserves_cof"].append({
            "generator": gname,
            "cofibration": classify_cofibration(data.f_map(gen))["cofibration"]})
    for name, y in m2.fibrant_corpus:
        gp = data.g_map(terminal_map(y))
        report["g_preserves_fib"].append({
            "fibration": name,
            "holds": has_rlp(gp, m1.gens_j, dim_bound)["holds"]})
    report["pass"] = (
        all(e["bijection"] for e in report["adjunction"])
        and all(e["cofibration"] for e in report["f_preserves_cof"])
        and all(e["holds"] for e in report["g_preserves_fib"]))
    return report


def quillen_equivalence_check(data: QuillenPairData, dim_bound: int) -> dict:
    """Unit equivalences (through anodyne certificates) plus acyclicity
    detection on sampled fibrations; the verdict is bounded evidence."""
    report = quillen_pair_check(data, dim_bound)
    units = []
    for x in data.corpus:
        fx = data.f_obj(x)
        fib = is_fibrant(fx, data.right_model.gens_j, dim_bound)["holds"]
        unit = data.transpose(identity_map(fx))
        cert = find_certificate(unit, data.left_model.gens_j,
                                data.left_model.stage_bound,
                                compare_dim=max(0, dim_bound - 1))
        ok = cert is not None and check_certificate(
            cert, unit, data.left_model.gens_j)["ok"]
        units.append({"object": str(x.level_sizes),
                      "f_x_fibrant_at_bound": fib,
                      "unit_anodyne_certificate": ok})
    report["units"] = units
    detect = []
    for name, y in data.right_model.fibrant_corpus:
        p = terminal_map(y)
        gp = data.g_map(p)
        g_acyclic = has_rlp(gp, data.left_model.gens_i, dim_bound)["holds"]
        p_acyclic = has_rlp(p, data.right_model.gens_i, dim_bound)["holds"]
        detect.append({"fibration": name, "g_acyclic": g_acyclic,
                       "p_acyclic": p_acyclic,
                       "detects": (not g_acyclic) or p_acyclic})
    report["acyclicity_detection"] = detect
    report["equivalence_verdict"] = (
        report["pass"]
        and all(u["unit_anodyne_certificate"] for u in units)
        and all(d["detects"] for d in detect))
    return report


def scomp_forget_pair(budget: int, corpus=None) -> QuillenPairData:
    """The simplicial-completion / forgetful adjunction as pair data."""
    from .shapes import forget_delta, forget_delta_map, scomp
    m1 = semi_kan_quillen_instance(budget)
    m2 = kan_quillen_instance(budget)
    if corpus is None:
        corpus = (standard("semi:point", budget),
                  standard("semi:delta[1]", budget))

    def f_obj(x):
        return scomp(x)[0]

    def f_map(f):
        sx, ux, fsx = scomp(f.source)
        sy, uy, fsy = scomp(f.target)
        from .search import find_map as _fm
        seed = {}
        for lv in range(len(f.source.level_sizes)):
            for c in f.source.cells(lv):
                seed[(lv, ux(lv, c))] = uy(lv, f(lv, c))
        out = _fm(sx, sy, seed=seed)
        if out is None:
            raise PresheafError("scomp of a map failed to extend")
        return out

    def g_obj(y):
        return forget_delta(y)

    def g_map(p):
        return forget_delta_map(p)

    def transpose(h):
        # h: scomp(X) -> Y; its transpose restricts along the unit
        src = None
        for x in corpus:
            if scomp(x)[0] == h.source:
                src = x
                break
        if src is None:
            raise PresheafError("transpose only defined on the corpus")
        sx, ux, fsx = scomp(src)
        return compose(forget_delta_map(h), ux)

    return QuillenPairData(m1, m2, f_obj, f_map, g_obj, g_map, transpose, corpus)
