"""Lifting problems, lifting-property reports, corner products and retracts.

Diagonal fillers are found by the generic backtracking engine: values are
chosen for cells of the lower-left object in increasing (level, index) order,
with naturality, decoration and both commuting triangles enforced during the
search.  The first filler in this canonical order is the chosen lift, so
witness tables are reproducible run to run.

Every right-lifting-property report is tagged with the dimension bound it
was verified at; nothing is claimed beyond the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .presheaf import (
    DELTA, DELTA_PLUS, GRAPH, FinPresheaf, PresheafError, PresheafMap,
    compose, identity_map, make_map, maps_equal, terminal_map,
)
from .colimits import PushoutResult, pushout
from .search import enumerate_maps, factors_through, find_map
from . import shapes
from .shapes import AmbientMismatch, GeneratorFamily, nondeg_dim


@dataclass(frozen=True)
class LiftingProblem:
    """A commuting square: left i: A -> B, right p: X -> Y, top, bottom."""

    left: PresheafMap
    right: PresheafMap
    top: PresheafMap
    bottom: PresheafMap

    def __post_init__(self):
        if self.top.source != self.left.source or self.top.target != self.right.source:
            raise PresheafError("top map has wrong endpoints")
        if self.bottom.source != self.left.target or self.bottom.target != self.right.target:
            raise PresheafError("bottom map has wrong endpoints")
        if not maps_equal(compose(self.right, self.top),
                          compose(self.bottom, self.left)):
            raise PresheafError("lifting square does not commute")


def _fillers(problem: LiftingProblem) -> Iterator[PresheafMap]:
    i, p = problem.left, problem.right
    b, x = i.target, p.source
    seed = {}
    for lv in range(len(b.level_sizes)):
        for a in range(i.source.level_sizes[lv]):
            key = (lv, i(lv, a))
            val = problem.top(lv, a)
            if key in seed and seed[key] != val:
                return
            seed[key] = val
    fibers = []
    for lv in range(len(x.level_sizes)):
        by_val = {}
        for c in range(x.level_sizes[lv]):
            by_val.setdefault(p(lv, c), set()).add(c)
        fibers.append(by_val)

    def allowed(lv, cell):
        return fibers[lv].get(problem.bottom(lv, cell), frozenset())

    yield from enumerate_maps(b, x, seed=seed, cell_allowed=allowed)


def solve_lift(problem: LiftingProblem, all_fillers: bool = False):
    """First diagonal in canonical cell order, or every diagonal on request.

    Absence is a negative answer (None / empty list), never an error; the
    backtracking is exhaustively complete at finite scale.
    """
    if all_fillers:
        return list(_fillers(problem))
    for d in _fillers(problem):
        return d
    return None


def all_squares(i: PresheafMap, p: PresheafMap) -> Iterator[LiftingProblem]:
    """Every commuting square with left leg i and right leg p."""
    for top in enumerate_maps(i.source, p.source):
        seed = {}
        ok = True
        for lv in range(len(i.source.level_sizes)):
            for a in range(i.source.level_sizes[lv]):
                key = (lv, i(lv, a))
                val = p(lv, top(lv, a))
                if seed.get(key, val) != val:
                    ok = False
                    break
                seed[key] = val
            if not ok:
                break
        if not ok:
            continue
        for bottom in enumerate_maps(i.target, p.target, seed=seed):
            yield LiftingProblem(i, p, top, bottom)


def has_rlp(p: PresheafMap, fam: GeneratorFamily, dim_bound: Optional[int] = None) -> dict:
    """Right lifting property of p against a family, with chosen witnesses.

    Enumerates every commuting square of each generator against p whose
    generator target has nondegenerate dimension <= dim_bound; the report is
    tagged "verified <= bound" and claims nothing beyond it.
    """
    bound = dim_bound if dim_bound is not None else fam.budget
    witnesses = []
    holds = True
    failure = None
    for name, gen in fam.members:
        if nondeg_dim(gen.target) > bound:
            continue
        for k, problem in enumerate(all_squares(gen, p)):
            filler = solve_lift(problem)
            if filler is None:
                holds = False
                failure = {"generator": name, "square_index": k,
                           "top": problem.top.components,
                           "bottom": problem.bottom.components}
                break
            witnesses.append({"generator": name, "square_index": k,
                              "filler": filler})
        if not holds:
            break
    return {"holds": holds, "verified_dim": bound,
            "witnesses": witnesses, "failure": failure}


def is_fibrant(x: FinPresheaf, j_family: GeneratorFamily,
               dim_bound: Optional[int] = None) -> dict:
    """Fibrancy of x at a bound: RLP of x -> 1 against the anodyne family."""
    return has_rlp(terminal_map(x), j_family, dim_bound)


# -- corner products -----------------------------------------------------------


def _tensor_ops(tensor: str):
    if tensor == "cartesian":
        obj = lambda x, y: shapes.product(x, y)[0]

        def cart_map(f, g, src=None, tgt=None):
            sp = (src, None, None) if src is not None else None
            tp = (tgt, None, None) if tgt is not None else None
            return shapes.product_map(f, g, src_prod=sp, tgt_prod=tp)

        return obj, cart_map
    if tensor == "semi_tensor":
        return shapes.semi_tensor, shapes.semi_tensor_map
    if tensor == "graph_tensor":
        return shapes.graph_tensor, shapes.graph_tensor_map
    raise AmbientMismatch(f"unknown tensor {tensor!r}")


@dataclass
class CornerSquare:
    """The defining square of a corner product, plus the pushout data."""

    x1x2: FinPresheaf
    x1y2: FinPresheaf
    y1x2: FinPresheaf
    y1y2: FinPresheaf
    po: PushoutResult
    corner: PresheafMap


def corner_product(f: PresheafMap, g: PresheafMap, tensor: str) -> CornerSquare:
    """(X1.Y2) u_{X1.X2} (Y1.X2) -> Y1.Y2 computed through the pushout."""
    t_obj, t_map = _tensor_ops(tensor)
    x1x2 = t_obj(f.source, g.source)
    x1y2 = t_obj(f.source, g.target)
    y1x2 = t_obj(f.target, g.source)
    y1y2 = t_obj(f.target, g.target)
    id_x1 = identity_map(f.source)
    id_x2 = identity_map(g.source)
    id_y1 = identity_map(f.target)
    id_y2 = identity_map(g.target)
    top = t_map(id_x1, g, src=x1x2, tgt=x1y2)       # X1 . g
    left = t_map(f, id_x2, src=x1x2, tgt=y1x2)      # f . X2
    po = pushout(top, left)
    right = t_map(f, id_y2, src=x1y2, tgt=y1y2)     # f . Y2
    bottom = t_map(id_y1, g, src=y1x2, tgt=y1y2)    # Y1 . g
    corner = po.mediator(right, bottom)
    return CornerSquare(x1x2, x1y2, y1x2, y1y2, po, corner)


def lifts_against(i: PresheafMap, p: PresheafMap) -> bool:
    """Whether every commuting square of i against p has a filler."""
    for problem in all_squares(i, p):
        if solve_lift(problem) is None:
            return False
    return True


# -- retracts ---------------------------------------------------------------------


@dataclass(frozen=True)
class RetractDatum:
    """f a retract of g in the arrow category: section and retraction squares."""

    f: PresheafMap
    g: PresheafMap
    sec_top: PresheafMap
    sec_bot: PresheafMap
    ret_top: PresheafMap
    ret_bot: PresheafMap


def verify_retract(datum: RetractDatum) -> bool:
    f, g = datum.f, datum.g
    try:
        return (
            maps_equal(compose(datum.ret_top, datum.sec_top), identity_map(f.source))
            and maps_equal(compose(datum.ret_bot, datum.sec_bot), identity_map(f.target))
            and maps_equal(compose(g, datum.sec_top), compose(datum.sec_bot, f))
            and maps_equal(compose(f, datum.ret_top), compose(datum.ret_bot, g))
        )
    except PresheafError:
        return False


def search_retract(f: PresheafMap, g: PresheafMap) -> Optional[RetractDatum]:
    """Backtracking search for f as a retract of g (same-ambient rows).

    The section legs are enumerated first; when g is a levelwise mono the
    top section is forced by the bottom one, which keeps the search small.
    """
    if f.source.index != g.source.index:
        raise AmbientMismatch("retract search needs a common ambient")
    from .presheaf import is_mono
    g_mono = is_mono(g)["mono"]
    g_inv = None
    if g_mono:
        g_inv = [{g(lv, c): c for c in g.source.cells(lv)}
                 for lv in range(len(g.source.level_sizes))]

    for sec_bot in enumerate_maps(f.target, g.target):
        if g_mono:
            comps = []
            ok = True
            for lv in range(len(f.source.level_sizes)):
                row = []
                for a in f.source.cells(lv):
                    v = sec_bot(lv, f(lv, a))
                    if v not in g_inv[lv]:
                        ok = False
                        break
                    row.append(g_inv[lv][v])
                if not ok:
                    break
                comps.append(row)
            if not ok:
                continue
            try:
                sec_tops = [make_map(f.source, g.source, comps)]
            except PresheafError:
                continue
        else:
            seed_squares = list(enumerate_maps(f.source, g.source))
            sec_tops = [m for m in seed_squares
                        if maps_equal(compose(g, m), compose(sec_bot, f))]
        for sec_top in sec_tops:
            ret_seed = {(lv, sec_top(lv, a)): a
                        for lv in range(len(f.source.level_sizes))
                        for a in f.source.cells(lv)}
            if any(ret_seed.get((lv, sec_top(lv, a))) != a
                   for lv in range(len(f.source.level_sizes))
                   for a in f.source.cells(lv)):
                continue
            for ret_top in enumerate_maps(g.source, f.source, seed=ret_seed):
                bot_seed = {}
                consistent = True
                for lv in range(len(f.target.level_sizes)):
                    for b in f.target.cells(lv):
                        key = (lv, sec_bot(lv, b))
                        if bot_seed.get(key, b) != b:
                            consistent = False
                            break
                        bot_seed[key] = b
                    if not consistent:
                        break
                if not consistent:
                    continue
                for lv in range(len(g.source.level_sizes)):
                    for c in g.source.cells(lv):
                        key = (lv, g(lv, c))
                        val = f(lv, ret_top(lv, c))
                        if bot_seed.get(key, val) != val:
                            consistent = False
                            break
                        bot_seed[key] = val
                    if not consistent:
                        break
                if not consistent:
                    continue
                ret_bot = find_map(g.target, f.target, seed=bot_seed)
                if ret_bot is not None:
                    datum = RetractDatum(f, g, sec_top, sec_bot, ret_top, ret_bot)
                    if verify_retract(datum):
                        return datum
    return None


def transport_filler(datum: RetractDatum, p: PresheafMap,
                     problem: LiftingProblem) -> Optional[PresheafMap]:
    """Solve a problem of datum.f against p through a filler for datum.g.

    The induced square for g has top = top o ret_top and bottom =
    bottom o ret_bot; composing its filler with the bottom section solves
    the original square.  Returns None if the induced square has no filler.
    """
    induced = LiftingProblem(
        datum.g, p,
        compose(problem.top, datum.ret_top),
        compose(problem.bottom, datum.ret_bot))
    d = solve_lift(induced)
    if d is None:
        return None
    out = compose(d, datum.sec_bot)
    assert maps_equal(compose(out, problem.left), problem.top)
    assert maps_equal(compose(p, out), problem.bottom)
    return out


# -- transposition of lifting problems ----------------------------------------------


def _hom_cells_as_labels(hom: FinPresheaf):
    return shapes.cell_labels(hom)


def hom_postcompose(hom_src: FinPresheaf, hom_tgt: FinPresheaf,
                    f3: PresheafMap) -> PresheafMap:
    """[X1, f3] : [X1, X3] -> [X1, Y3] acting by postcomposition."""
    labels_src = _hom_cells_as_labels(hom_src)
    labels_tgt = _hom_cells_as_labels(hom_tgt)
    comps = []
    for lv in range(len(hom_src.level_sizes)):
        lookup = {lab: i for i, lab in enumerate(labels_tgt[lv])}
        row = []
        for lab in labels_src[lv]:
            moved = tuple(tuple(f3(l2, v) for v in comp)
                          for l2, comp in enumerate(lab))
            row.append(lookup[moved])
        comps.append(row)
    return make_map(hom_src, hom_tgt, comps)


def hom_precompose(hom_src: FinPresheaf, hom_tgt: FinPresheaf,
                   f1: PresheafMap, dim_bound: int) -> PresheafMap:
    """[f1, X3] : [Y1, X3] -> [X1, X3] by precomposition with id x f1."""
    budget = f1.source.index.truncation_dim
    labels_src = _hom_cells_as_labels(hom_src)
    labels_tgt = _hom_cells_as_labels(hom_tgt)
    comps = []
    for k in range(dim_bound + 1):
        if f1.source.index.kind == GRAPH:
            test = shapes.standard("gr:point" if k == 0 else "gr:arrow", 1)
        else:
            test = shapes.standard(f"delta[{k}]", budget)
        small = shapes.product(test, f1.source)
        big = shapes.product(test, f1.target)
        mover = shapes.product_map(identity_map(test), f1, src_prod=small, tgt_prod=big)
        lookup = {lab: i for i, lab in enumerate(labels_tgt[k])}
        row = []
        for lab in labels_src[k]:
            moved = tuple(
                tuple(lab[l2][mover(l2, c)] for c in range(small[0].level_sizes[l2]))
                for l2 in range(len(small[0].level_sizes)))
            row.append(lookup[moved])
        comps.append(row)
    return make_map(hom_src, hom_tgt, comps)


def transpose_check(f1: PresheafMap, f2: PresheafMap, f3: PresheafMap,
                    tensor: str, dim_bound: int) -> dict:
    """Compare f1 corner f2 lifting against f3 with the transposed problem.

    Where a truncated internal hom is available (cartesian on plain delta
    kind, graph tensor) the transposed right map <f1 \\ f3> is built and
    f2 is tested against it; both answers must agree up to the bound.
    """
    corner = corner_product(f1, f2, tensor)
    direct = lifts_against(corner.corner, f3)

    if tensor == "graph_tensor":
        bound = 1
        hom = lambda a, b: shapes.internal_hom(a, b, 1)
    else:
        bound = dim_bound
        hom = lambda a, b: shapes.internal_hom(a, b, dim_bound)
    h_y1x3 = hom(f1.target, f3.source)
    h_y1y3 = hom(f1.target, f3.target)
    h_x1x3 = hom(f1.source, f3.source)
    h_x1y3 = hom(f1.source, f3.target)
    post = hom_postcompose(h_y1x3, h_y1y3, f3)
    post_small = hom_postcompose(h_x1x3, h_x1y3, f3)
    pre = hom_precompose(h_y1x3, h_x1x3, f1, bound)
    pre_big = hom_precompose(h_y1y3, h_x1y3, f1, bound)
    pb, pr1, pr2 = __import__(
        "homotopy_forge.colimits", fromlist=["pullback"]).pullback(pre_big, post_small)
    # mediating map <post, pre>: Y1\X3 -> (Y1\Y3) x_{X1\Y3} (X1\X3)
    labels = shapes.cell_labels(pb)
    comps = []
    for lv in range(len(pb.level_sizes)):
        lookup = {lab: i for i, lab in enumerate(labels[lv])}
        comps.append([lookup[(post(lv, c), pre(lv, c))]
                      for c in h_y1x3.cells(lv)])
    transposed = make_map(h_y1x3, pb, comps)
    dual = lifts_against(f2, transposed)
    return {"direct": direct, "transposed": dual,
            "agree": direct == dual, "verified_dim": bound}
