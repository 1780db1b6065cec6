"""Pi-setoids, the weak right lifting property, and equivalence detection.

pi_i(X, x) collects the extensions of x along a cofibration i as a setoid
whose relations are homotopies relative to the base.  Relative witnesses are
found through the cylinder (cartesian ambients, where the interval strip
collapses) or through the path object with a reflexivity-seeded base (graph
ambient); each PiSetoid records whether its relation search was exhaustive
at the ambient truncation bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .presheaf import (
    FinPresheaf, PresheafError, PresheafMap, compose, identity_map, make_map,
    maps_equal,
)
from .colimits import pushout
from .lifting import all_squares, has_rlp, is_fibrant, solve_lift, LiftingProblem
from .search import enumerate_maps, find_map
from .setoids import Setoid, close_setoid
from .shapes import cell_labels, generator_family, standard
from .weak_model import (
    ModelInstance, collapse_onto, homotopic, path_object, tensor_with_c,
)


@dataclass
class PiSetoid:
    base: PresheafMap               # i : A -> B
    obj: FinPresheaf                # X, fibrant at the bound
    basepoint: PresheafMap          # x : A -> X
    setoid: Setoid                  # elements: extensions; relations: witnesses
    closed: bool                    # refl/inv/comp tables all found
    verified_dim: int

    def elements(self):
        return self.setoid.elements

    def class_count(self):
        return self.setoid.class_count()


def extensions(i: PresheafMap, x: PresheafMap):
    """All maps B -> X restricting to x along i."""
    seed = {}
    for lv in range(len(i.source.level_sizes)):
        for a in range(i.source.level_sizes[lv]):
            key = (lv, i(lv, a))
            val = x(lv, a)
            if seed.get(key, val) != val:
                return []
            seed[key] = val
    return list(enumerate_maps(i.target, x.target, seed=seed))


def rel_homotopy(m: ModelInstance, i: PresheafMap, x: PresheafMap,
                 v: PresheafMap, w: PresheafMap):
    """A homotopy from v to w relative to the base cofibration, or None."""
    if m.tensor == "cartesian":
        hw = homotopic(m, v, w, rel=i)
        return None if hw is None else hw.witness
    if m.tensor == "graph_tensor":
        y = v.target
        px = path_object(m, y)
        labels = cell_labels(px.path)
        v_pool = [dict() for _ in range(2)]
        by_ends = {}
        for k, lab in enumerate(labels[0]):
            edge = lab[1][0]
            ys, yt = y.action("s@1"), y.action("t@1")
            by_ends.setdefault((ys[edge], yt[edge]), set()).add(k)
        seed = {}
        for a in range(i.source.level_sizes[0]):
            b_cell = i(0, a)
            seed[(0, b_cell)] = px.refl(0, x(0, a))
        for a in range(i.source.level_sizes[1]):
            b_cell = i(1, a)
            seed[(1, b_cell)] = px.refl(1, x(1, a))

        def allowed(lv, c):
            if lv == 0:
                return by_ends.get((v(0, c), w(0, c)), frozenset())
            return None

        k = find_map(i.target, px.path, seed=seed, cell_allowed=allowed)
        if k is None:
            return None
        # confirm the two projections recover v and w
        if maps_equal(compose(px.pi0, k), v) and maps_equal(compose(px.pi1, k), w):
            return k
        return None
    raise PresheafError(f"relative homotopies unavailable for {m.tensor!r}")


def pi(m: ModelInstance, i: PresheafMap, x_obj: FinPresheaf,
       x: PresheafMap, dim_bound: Optional[int] = None) -> PiSetoid:
    """The setoid of extensions of x along i up to homotopy rel the base."""
    bound = dim_bound if dim_bound is not None else m.dim_bound
    if x.target != x_obj:
        raise PresheafError("basepoint must land in the given object")
    elems = extensions(i, x)
    relations = []
    closed = True
    for a, v in enumerate(elems):
        for b, w in enumerate(elems):
            wit = rel_homotopy(m, i, x, v, w)
            if wit is not None:
                relations.append((a, b, wit))
    setoid = close_setoid(elems, relations)
    if setoid is None:
        closed = False
        setoid = Setoid(elems, relations)
    return PiSetoid(i, x_obj, x, setoid, closed, bound)


def pi_n(m: ModelInstance, x_obj: FinPresheaf, basepoint_cell: int, n: int,
         dim_bound: Optional[int] = None) -> PiSetoid:
    """pi_n as pi over the n-boundary inclusion with a constant basepoint."""
    budget = x_obj.index.truncation_dim
    if n == 0:
        src = standard("empty", budget)
        i = make_map(src, standard("delta[0]", budget),
                     [[] for _ in range(budget + 1)])
        x = make_map(src, x_obj, [[] for _ in range(budget + 1)])
        return pi(m, i, x_obj, x, dim_bound)
    bdry = standard(f"partial[{n}]", budget)
    dn = standard(f"delta[{n}]", budget)
    from .shapes import labeled_inclusion, apply_surjection
    i = labeled_inclusion(bdry, dn)
    comps = []
    for lv in range(budget + 1):
        row = []
        for c in bdry.cells(lv):
            row.append(_constant_cell(x_obj, lv, basepoint_cell))
        comps.append(row)
    x = make_map(bdry, x_obj, comps)
    return pi(m, i, x_obj, x, dim_bound)


def _constant_cell(x_obj, lv, v):
    """The fully degenerate lv-cell over a vertex."""
    cur = v
    for k in range(lv):
        cur = x_obj.degeneracy(0, k, cur)
    return cur


# -- weak right lifting property --------------------------------------------------


def weak_rlp(m: ModelInstance, f: PresheafMap, i: PresheafMap) -> dict:
    """Fillers strict on the upper triangle, homotopy-commuting below.

    For every square (top, bottom) of i against f, search v with v i = top
    and a homotopy rel the base from f v to bottom.
    """
    squares = 0
    witnesses = []
    for problem in all_squares(i, f):
        squares += 1
        found = None
        for v in extensions(i, problem.top):
            h = rel_homotopy(m, i, problem.top, compose(f, v), problem.bottom)
            if h is not None:
                found = (v, h)
                break
        if found is None:
            return {"weak_rlp": False, "squares": squares,
                    "failure": {"top": problem.top.components,
                                "bottom": problem.bottom.components}}
        witnesses.append(found)
    return {"weak_rlp": True, "squares": squares, "witnesses": witnesses}


# -- the characterization theorem ---------------------------------------------------


def pi_surjective(m: ModelInstance, f: PresheafMap, i: PresheafMap,
                  x: PresheafMap) -> dict:
    """Surjection structure of pi_i(X, x) -> pi_i(Y, f x)."""
    fx = compose(f, x)
    targets = extensions(i, fx)
    table = {}
    for wi, w in enumerate(targets):
        hit = None
        for v in extensions(i, x):
            h = rel_homotopy(m, i, fx, w, compose(f, v))
            if h is not None:
                hit = (v, h)
                break
        if hit is None:
            return {"surjective": False, "missing": wi, "targets": len(targets)}
        table[wi] = hit
    return {"surjective": True, "targets": len(targets), "table": table}


def charac_equivalence(m: ModelInstance, f: PresheafMap,
                       pseudo_gens, dim_bound: Optional[int] = None) -> dict:
    """Equivalence detection between fibrant objects via pi-surjectivity.

    Checks the surjection structure of pi_i(f, x) for every pseudo-generating
    cofibration i and every basepoint x; all finitely many at desk scale.
    """
    bound = dim_bound if dim_bound is not None else m.dim_bound
    x_obj, y_obj = f.source, f.target
    for obj, name in ((x_obj, "source"), (y_obj, "target")):
        if not is_fibrant(obj, m.gens_j, bound)["holds"]:
            return {"equivalence": None,
                    "evidence": f"{name} not fibrant at bound {bound}"}
    checked = 0
    for gen_name, i in pseudo_gens.members:
        for x in enumerate_maps(i.source, x_obj):
            out = pi_surjective(m, f, i, x)
            checked += 1
            if not out["surjective"]:
                return {"equivalence": False, "generator": gen_name,
                        "basepoint": x.components, "checked": checked,
                        "verified_dim": bound}
    return {"equivalence": True, "checked": checked, "verified_dim": bound}


# -- invariance suite (items 1-4) ----------------------------------------------------


def _setoid_map_tables(src: PiSetoid, tgt: PiSetoid, elem_map) -> dict:
    """Injection/surjection tables for a map of pi-setoids given on elements."""
    inj = True
    for a in range(len(src.elements())):
        for b in range(len(src.elements())):
            if tgt.setoid.related(elem_map[a], elem_map[b]) is not None:
                if src.setoid.related(a, b) is None:
                    inj = False
    surj = True
    covered = set(elem_map)
    for t in range(len(tgt.elements())):
        if any(tgt.setoid.related(t, c) is not None for c in covered):
            continue
        surj = False
    return {"injection": inj, "surjection": surj, "iso": inj and surj}


def invariance_target_iso(m: ModelInstance, i: PresheafMap, u: PresheafMap,
                          x_obj: FinPresheaf, x: PresheafMap) -> dict:
    """Item (1): precomposition along a coslice equivalence of targets.

    u : B -> B' under A; the induced map pi_{i'}(X, x) -> pi_i(X, x) sends
    an extension to its restriction along u.
    """
    i_prime = compose(u, i)
    src = pi(m, i_prime, x_obj, x)
    tgt = pi(m, i, x_obj, x)
    elem_map = []
    tgt_index = {tuple(e.components): k for k, e in enumerate(tgt.elements())}
    for v in src.elements():
        elem_map.append(tgt_index[tuple(compose(v, u).components)])
    out = _setoid_map_tables(src, tgt, elem_map)
    out["src_classes"] = src.class_count()
    out["tgt_classes"] = tgt.class_count()
    return out


def invariance_pushout(m: ModelInstance, i: PresheafMap, g: PresheafMap,
                       x_obj: FinPresheaf, x_prime: PresheafMap) -> dict:
    """Item (2): pushout of the base: pi_{i'}(X, x) ~ pi_i(X, x g)."""
    po = pushout(g, i)      # span A' <- A -> B: legs A' -> B', B -> B'
    i_prime, g_prime = po.leg_b, po.leg_c
    src = pi(m, i_prime, x_obj, x_prime)
    tgt = pi(m, i, x_obj, compose(x_prime, g))
    tgt_index = {tuple(e.components): k for k, e in enumerate(tgt.elements())}
    elem_map = [tgt_index[tuple(compose(v, g_prime).components)]
                for v in src.elements()]
    out = _setoid_map_tables(src, tgt, elem_map)
    out["src_classes"] = src.class_count()
    out["tgt_classes"] = tgt.class_count()
    return out


def invariance_basepoint(m: ModelInstance, i: PresheafMap,
                         x_obj: FinPresheaf, x0: PresheafMap, x1: PresheafMap,
                         h_witness) -> dict:
    """Item (3): transport along a homotopy of basepoints.

    Extensions of x0 move to extensions of x1 by extending the homotopy over
    the whole cylinder of B; the transported map must be a setoid iso.
    """
    a, b = i.source, i.target
    ca, a0, a1, _ = tensor_with_c(m, a)
    cb, b0, b1, _ = tensor_with_c(m, b)
    from .weak_model import _tensor_functor_map
    ci = _tensor_functor_map(m, i, ca, cb)
    src = pi(m, i, x_obj, x0)
    tgt = pi(m, i, x_obj, x1)
    tgt_index = {tuple(e.components): k for k, e in enumerate(tgt.elements())}
    elem_map = []
    for v in src.elements():
        seed = {}
        ok = True
        for lv in range(len(b.level_sizes)):
            for c in b.cells(lv):
                seed[(lv, b0(lv, c))] = v(lv, c)
        for lv in range(len(ca.level_sizes)):
            for c in ca.cells(lv):
                key = (lv, ci(lv, c))
                val = h_witness(lv, c)
                if seed.get(key, val) != val:
                    ok = False
                    break
                seed[key] = val
            if not ok:
                break
        if not ok:
            return {"iso": False, "why": "homotopy seed inconsistent"}
        big = find_map(cb, x_obj, seed=seed)
        if big is None:
            return {"iso": False, "why": "transport extension missing"}
        v1 = compose(big, b1)
        elem_map.append(tgt_index[tuple(v1.components)])
    out = _setoid_map_tables(src, tgt, elem_map)
    return out


def invariance_fibration_rlp(m: ModelInstance, p: PresheafMap,
                             i: PresheafMap) -> dict:
    """Item (4): strict RLP along i iff pi_i(p, x) surjective for all x."""
    strict = True
    for problem in all_squares(i, p):
        if solve_lift(problem) is None:
            strict = False
            break
    surj = True
    for x in enumerate_maps(i.source, p.source):
        out = pi_surjective(m, p, i, x)
        if not out["surjective"]:
            surj = False
            break
    return {"strict_rlp": strict, "pi_surjective": surj,
            "agree": strict == surj}
