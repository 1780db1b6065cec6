"""Finite colimits of presheaves with universal-property certificates.

Colimits in a presheaf category are computed levelwise on cell sets.
Quotients use union-find with canonical representative the least
(side, index) pair and densely renumbered output, so replayed constructions
are bit-exact.  A quotient cell is decorated iff any preimage is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .presheaf import (
    NONE, FinPresheaf, PresheafError, PresheafMap, make_map, make_presheaf,
)
from . import shapes as _shapes


class SourceMismatch(PresheafError):
    pass


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self.parent[hi] = lo  # least index is canonical


def _compatible(ps_list):
    first = ps_list[0]
    for ps in ps_list[1:]:
        if ps.index != first.index:
            raise SourceMismatch("colimit factors live over different index categories")
        if ps.decoration_kind != first.decoration_kind:
            raise SourceMismatch("colimit factors carry different decoration kinds")


def coproduct(ps_list) -> tuple[FinPresheaf, list[PresheafMap]]:
    """Levelwise disjoint union; decorations are unioned."""
    if not ps_list:
        raise SourceMismatch("empty coproduct needs an explicit index; use empty_presheaf")
    _compatible(ps_list)
    first = ps_list[0]
    nlevels = len(first.level_sizes)
    offsets = []
    sizes = [0] * nlevels
    for ps in ps_list:
        offsets.append(list(sizes))
        for lv in range(nlevels):
            sizes[lv] += ps.level_sizes[lv]
    actions = {}
    for name, s_lv, t_lv in first.index.generators():
        tab = []
        for pi, ps in enumerate(ps_list):
            tab.extend(offsets[pi][t_lv] + v for v in ps.action(name))
        actions[name] = tab
    deco = []
    for pi, ps in enumerate(ps_list):
        deco.extend((lv, offsets[pi][lv] + c) for lv, c in ps.decorated)
    out = make_presheaf(first.index, sizes, actions, (first.decoration_kind, deco))
    labels = [[(pi, c) for pi, ps in enumerate(ps_list) for c in ps.cells(lv)]
              for lv in range(nlevels)]
    _shapes._record_labels(out, labels)
    injections = [
        make_map(ps, out, [[offsets[pi][lv] + c for c in ps.cells(lv)]
                           for lv in range(nlevels)])
        for pi, ps in enumerate(ps_list)]
    return out, injections


@dataclass
class PushoutResult:
    """Pushout of B <- A -> C with legs and a mediating-map builder."""

    obj: FinPresheaf
    leg_b: PresheafMap
    leg_c: PresheafMap

    def mediator(self, cocone_b: PresheafMap, cocone_c: PresheafMap) -> PresheafMap:
        """The unique map out of the pushout for a commuting cocone."""
        q = cocone_b.target
        if cocone_c.target != q:
            raise SourceMismatch("cocone legs target different objects")
        comps = []
        for lv in range(len(self.obj.level_sizes)):
            row = [None] * self.obj.level_sizes[lv]
            for c in range(self.leg_b.source.level_sizes[lv]):
                row[self.leg_b(lv, c)] = cocone_b(lv, c)
            for c in range(self.leg_c.source.level_sizes[lv]):
                tgt = self.leg_c(lv, c)
                if row[tgt] is not None and row[tgt] != cocone_c(lv, c):
                    raise SourceMismatch("cocone does not coequalize the span")
                row[tgt] = cocone_c(lv, c)
            comps.append(row)
        return make_map(self.obj, q, comps)


def pushout(f: PresheafMap, g: PresheafMap) -> PushoutResult:
    """Pushout of the span f: A -> B, g: A -> C.

    Levelwise quotient of B + C by the relation generated by f(a) ~ g(a).
    """
    if f.source != g.source:
        raise SourceMismatch("pushout needs a common source")
    b, c = f.target, g.target
    _compatible([b, c])
    nlevels = len(b.level_sizes)
    uf, offs = [], []
    for lv in range(nlevels):
        u = _UnionFind(b.level_sizes[lv] + c.level_sizes[lv])
        for a_cell in range(f.source.level_sizes[lv]):
            u.union(f(lv, a_cell), b.level_sizes[lv] + g(lv, a_cell))
        uf.append(u)
        offs.append(b.level_sizes[lv])

    reps, rep_index = [], []
    for lv in range(nlevels):
        rs = sorted({uf[lv].find(i) for i in range(offs[lv] + c.level_sizes[lv])})
        reps.append(rs)
        rep_index.append({r: i for i, r in enumerate(rs)})

    def cls(lv, side, cell):
        raw = cell if side == 0 else offs[lv] + cell
        return rep_index[lv][uf[lv].find(raw)]

    actions = {}
    for name, s_lv, t_lv in b.index.generators():
        tb, tc = b.action(name), c.action(name)
        tab = []
        for r in reps[s_lv]:
            if r < offs[s_lv]:
                tab.append(cls(t_lv, 0, tb[r]))
            else:
                tab.append(cls(t_lv, 1, tc[r - offs[s_lv]]))
        actions[name] = tab
    deco = set()
    for lv, cell in b.decorated:
        deco.add((lv, cls(lv, 0, cell)))
    for lv, cell in c.decorated:
        deco.add((lv, cls(lv, 1, cell)))
    obj = make_presheaf(b.index, [len(r) for r in reps], actions,
                        (b.decoration_kind, sorted(deco)))
    labels = [[(0, r) if r < offs[lv] else (1, r - offs[lv]) for r in reps[lv]]
              for lv in range(nlevels)]
    _shapes._record_labels(obj, labels)
    leg_b = make_map(b, obj, [[cls(lv, 0, i) for i in b.cells(lv)]
                              for lv in range(nlevels)])
    leg_c = make_map(c, obj, [[cls(lv, 1, i) for i in c.cells(lv)]
                              for lv in range(nlevels)])
    return PushoutResult(obj, leg_b, leg_c)


def coequalizer(f: PresheafMap, g: PresheafMap) -> tuple[FinPresheaf, PresheafMap]:
    """Coequalizer of a parallel pair; levelwise quotient of the target."""
    if f.source != g.source or f.target != g.target:
        raise SourceMismatch("coequalizer needs a parallel pair")
    y = f.target
    nlevels = len(y.level_sizes)
    uf = []
    for lv in range(nlevels):
        u = _UnionFind(y.level_sizes[lv])
        for x_cell in range(f.source.level_sizes[lv]):
            u.union(f(lv, x_cell), g(lv, x_cell))
        uf.append(u)
    reps = [sorted({uf[lv].find(i) for i in y.cells(lv)}) for lv in range(nlevels)]
    rep_index = [{r: i for i, r in enumerate(reps[lv])} for lv in range(nlevels)]

    def cls(lv, cell):
        return rep_index[lv][uf[lv].find(cell)]

    actions = {}
    for name, s_lv, t_lv in y.index.generators():
        tab = y.action(name)
        actions[name] = [cls(t_lv, tab[r]) for r in reps[s_lv]]
    deco = sorted({(lv, cls(lv, cell)) for lv, cell in y.decorated})
    obj = make_presheaf(y.index, [len(r) for r in reps], actions,
                        (y.decoration_kind, deco))
    proj = make_map(y, obj, [[cls(lv, i) for i in y.cells(lv)]
                             for lv in range(nlevels)])
    return obj, proj


def pullback(f: PresheafMap, g: PresheafMap):
    """Levelwise fiber product of f: X -> Z and g: Y -> Z with projections."""
    if f.target != g.target:
        raise SourceMismatch("pullback needs a common target")
    x, y = f.source, g.source
    _compatible([x, y])
    nlevels = len(x.level_sizes)
    labels = []
    for lv in range(nlevels):
        labels.append([(a, b) for a in x.cells(lv) for b in y.cells(lv)
                       if f(lv, a) == g(lv, b)])
    lookup = [{lab: i for i, lab in enumerate(labels[lv])} for lv in range(nlevels)]
    actions = {}
    for name, s_lv, t_lv in x.index.generators():
        xa, ya = x.action(name), y.action(name)
        actions[name] = [lookup[t_lv][(xa[a], ya[b])] for a, b in labels[s_lv]]
    deco = []
    if x.decoration_kind != NONE:
        for lv in range(1, nlevels):
            for i, (a, b) in enumerate(labels[lv]):
                if x.is_decorated(lv, a) and y.is_decorated(lv, b):
                    deco.append((lv, i))
    obj = make_presheaf(x.index, [len(l) for l in labels], actions,
                        (x.decoration_kind, deco))
    _shapes._record_labels(obj, labels)
    pr1 = make_map(obj, x, [[a for a, _ in labels[lv]] for lv in range(nlevels)])
    pr2 = make_map(obj, y, [[b for _, b in labels[lv]] for lv in range(nlevels)])
    return obj, pr1, pr2


@dataclass
class CoconeWitness:
    """A computed colimit apex with its legs and cached mediators."""

    apex: FinPresheaf
    legs: tuple[PresheafMap, ...]
    mediators: dict


def verify_universal(result: PushoutResult, competing) -> dict:
    """Check unique mediation against a list of commuting cocones.

    Each competing cocone is a pair (q_b, q_c).  For small apexes the
    mediator's uniqueness is re-checked by exhaustive enumeration of maps.
    """
    from .search import enumerate_maps
    from .presheaf import compose, maps_equal
    report = {"cocones": [], "all_unique": True}
    for q_b, q_c in competing:
        entry = {}
        try:
            m = result.mediator(q_b, q_c)
        except (SourceMismatch, PresheafError) as exc:
            entry["status"] = f"rejected: {exc}"
            report["cocones"].append(entry)
            report["all_unique"] = False
            continue
        ok = maps_equal(compose(m, result.leg_b), q_b) and \
            maps_equal(compose(m, result.leg_c), q_c)
        entry["mediates"] = ok
        count = 0
        total_cells = sum(result.obj.level_sizes)
        if total_cells <= 12:
            for cand in enumerate_maps(result.obj, q_b.target,
                                       respect_decoration=False):
                if maps_equal(compose(cand, result.leg_b), q_b) and \
                        maps_equal(compose(cand, result.leg_c), q_c):
                    count += 1
            entry["mediator_count"] = count
            ok = ok and count == 1
        entry["status"] = "unique" if ok else "not unique"
        report["all_unique"] = report["all_unique"] and ok
        report["cocones"].append(entry)
    return report
