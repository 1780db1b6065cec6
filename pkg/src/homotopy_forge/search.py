"""Backtracking enumeration of presheaf maps under seeds and constraints.

One engine serves every search in the package: plain Hom enumeration,
diagonal fillers of lifting problems, extensions along subobjects, and the
connecting squares of retract data.  Values are assigned to cells in
increasing (level, index) order; assigning a cell immediately propagates
along every generating arrow out of it, so degenerate cells and faces are
forced rather than searched.  Enumeration order is deterministic (candidates
in increasing index order), which makes every chosen witness reproducible.
"""

from __future__ import annotations

import sys
from typing import Callable, Iterator, Optional

from .presheaf import FinPresheaf, PresheafMap

sys.setrecursionlimit(100000)


class _Frame:
    __slots__ = ("assign", "trail")

    def __init__(self, sizes):
        self.assign = [[None] * n for n in sizes]
        self.trail = []


def _arrows_by_source(ps: FinPresheaf):
    out = [[] for _ in ps.level_sizes]
    for name, s_lv, t_lv in ps.index.generators():
        out[s_lv].append((t_lv, ps.action(name), name))
    return out


def enumerate_maps(src: FinPresheaf, tgt: FinPresheaf,
                   seed: Optional[dict] = None,
                   cell_allowed: Optional[Callable[[int, int], object]] = None,
                   respect_decoration: bool = True,
                   max_count: Optional[int] = None) -> Iterator[PresheafMap]:
    """Yield every map src -> tgt compatible with the given constraints.

    ``seed`` maps (level, cell) to a forced value; ``cell_allowed`` returns a
    container of permitted values for a cell (or None for no restriction).
    """
    if src.index != tgt.index:
        return
    if respect_decoration and src.decoration_kind != tgt.decoration_kind \
            and src.decoration_kind != "none":
        return

    sizes = src.level_sizes
    frame = _Frame(sizes)
    src_arrows = _arrows_by_source(src)
    tgt_arrows = {}
    for name, s_lv, t_lv in tgt.index.generators():
        tgt_arrows[name] = tgt.action(name)

    def propagate(lv, c, v):
        """Assign and push consequences; return False on conflict."""
        cur = frame.assign[lv][c]
        if cur is not None:
            return cur == v
        if respect_decoration and src.is_decorated(lv, c) and not tgt.is_decorated(lv, v):
            return False
        if cell_allowed is not None:
            dom = cell_allowed(lv, c)
            if dom is not None and v not in dom:
                return False
        frame.assign[lv][c] = v
        frame.trail.append((lv, c))
        for t_lv, s_tab, name in src_arrows[lv]:
            if not propagate(t_lv, s_tab[c], tgt_arrows[name][v]):
                return False
        return True

    def undo(mark):
        while len(frame.trail) > mark:
            lv, c = frame.trail.pop()
            frame.assign[lv][c] = None

    if seed:
        mark0 = len(frame.trail)
        for (lv, c), v in seed.items():
            if not propagate(lv, c, v):
                undo(mark0)
                return

    order = [(lv, c) for lv in range(len(sizes)) for c in range(sizes[lv])]
    found = [0]

    def candidates(lv, c):
        dom = None
        if cell_allowed is not None:
            dom = cell_allowed(lv, c)
        pool = range(tgt.level_sizes[lv]) if dom is None else sorted(dom)
        need_deco = respect_decoration and src.is_decorated(lv, c)
        out = []
        for v in pool:
            if need_deco and not tgt.is_decorated(lv, v):
                continue
            ok = True
            for t_lv, s_tab, name in src_arrows[lv]:
                img = frame.assign[t_lv][s_tab[c]]
                if img is not None and tgt_arrows[name][v] != img:
                    ok = False
                    break
            if ok:
                out.append(v)
        return out

    def solve(pos) -> Iterator[PresheafMap]:
        while pos < len(order) and frame.assign[order[pos][0]][order[pos][1]] is not None:
            pos += 1
        if pos == len(order):
            comps = tuple(tuple(row) for row in frame.assign)
            yield PresheafMap(src, tgt, comps)
            return
        lv, c = order[pos]
        for v in candidates(lv, c):
            mark = len(frame.trail)
            if propagate(lv, c, v):
                for m in solve(pos + 1):
                    yield m
                    found[0] += 1
                    if max_count is not None and found[0] >= max_count:
                        undo(mark)
                        return
            undo(mark)

    yield from solve(0)


def find_map(src, tgt, **kw) -> Optional[PresheafMap]:
    for m in enumerate_maps(src, tgt, **kw):
        return m
    return None


def count_maps(src, tgt, **kw) -> int:
    return sum(1 for _ in enumerate_maps(src, tgt, **kw))


def factors_through(f: PresheafMap, g: PresheafMap) -> bool:
    """Whether f factors through g levelwise on image sets (g assumed mono)."""
    for lv in range(len(f.components)):
        image = set(g.components[lv])
        if any(v not in image for v in f.components[lv]):
            return False
    return True


def iso_search(x: FinPresheaf, y: FinPresheaf) -> Optional[PresheafMap]:
    """Find an isomorphism x -> y; None if sizes or decorations obstruct.

    Backtracks over levelwise bijections in (level, index) order, pruned by
    the generating-arrow constraints and two-sided decoration matching.
    """
    if x.index != y.index or x.level_sizes != y.level_sizes:
        return None
    if x.decoration_kind != y.decoration_kind:
        return None
    deco_per_level = lambda ps: [
        sum(1 for lv, _ in ps.decorated if lv == k) for k in range(len(ps.level_sizes))]
    if deco_per_level(x) != deco_per_level(y):
        return None

    sizes = x.level_sizes
    assign = [[None] * n for n in sizes]
    used = [set() for _ in sizes]
    trail = []
    x_arrows = _arrows_by_source(x)
    y_tabs = {name: y.action(name) for name, _, _ in y.index.generators()}

    def propagate(lv, c, v):
        cur = assign[lv][c]
        if cur is not None:
            return cur == v
        if v in used[lv]:
            return False
        if x.is_decorated(lv, c) != y.is_decorated(lv, v):
            return False
        assign[lv][c] = v
        used[lv].add(v)
        trail.append((lv, c))
        for t_lv, s_tab, name in x_arrows[lv]:
            if not propagate(t_lv, s_tab[c], y_tabs[name][v]):
                return False
        return True

    def undo(mark):
        while len(trail) > mark:
            lv, c = trail.pop()
            used[lv].discard(assign[lv][c])
            assign[lv][c] = None

    order = [(lv, c) for lv in range(len(sizes)) for c in range(sizes[lv])]

    def solve(pos):
        while pos < len(order) and assign[order[pos][0]][order[pos][1]] is not None:
            pos += 1
        if pos == len(order):
            return PresheafMap(x, y, tuple(tuple(r) for r in assign))
        lv, c = order[pos]
        for v in range(sizes[lv]):
            if v in used[lv]:
                continue
            mark = len(trail)
            if propagate(lv, c, v):
                out = solve(pos + 1)
                if out is not None:
                    return out
            undo(mark)
        return None

    return solve(0)
