"""Finite truncated presheaves over small presented index categories.

Three index shapes are supported:

* ``delta``       -- the simplex category truncated at a dimension bound N:
                     objects [0],...,[N], generated by cofaces and
                     codegeneracies subject to the simplicial identities.
* ``delta_plus``  -- the wide subcategory of injective monotone maps
                     (semi-simplicial shapes): cofaces only.
* ``graph_shape`` -- two objects (vertices, edges) and the two endpoint
                     arrows; presheaves are oriented multigraphs.

A presheaf stores a finite cell set per level (dense integer indices) and one
total function per *generating* arrow; general arrows are obtained by
composing generators.  Construction validates every defining relation of the
presentation exhaustively and rejects invalid decorations, so downstream code
can treat any ``FinPresheaf``/``PresheafMap`` value as law-abiding.

Decorations model the marked / stratified variants: a ``marked`` decoration
is a set of 1-cells containing every degenerate 1-cell, a ``stratified``
decoration ("thin" cells) is a set of cells of positive dimension containing
every degenerate cell.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

DELTA = "delta"
DELTA_PLUS = "delta_plus"
GRAPH = "graph_shape"

NONE = "none"
MARKED = "marked"
STRATIFIED = "stratified"


class PresheafError(ValueError):
    """Base class for construction-time rejections."""


class IdentityViolation(PresheafError):
    """A defining relation of the index presentation fails on some cell."""


class DecorationViolation(PresheafError):
    """Decoration misses a degenerate cell, or decorates a forbidden cell."""


class NaturalityViolation(PresheafError):
    """A would-be map does not commute with some generating arrow."""


class OutOfRange(PresheafError):
    """Requested construction exceeds the truncation budget."""


@dataclass(frozen=True)
class IndexPresentation:
    """A presented index category: shape kind plus truncation bound.

    For ``delta`` and ``delta_plus`` the generating arrows are the coface
    actions ``d_i@k : level k -> level k-1`` (0 <= i <= k <= N) and, for
    ``delta`` only, the codegeneracy actions ``s_i@k : level k -> level k+1``
    (0 <= i <= k, k+1 <= N).  For ``graph_shape`` the two generators are
    ``s@1`` and ``t@1`` from edges to vertices; the truncation is fixed at 1.
    """

    kind: str
    truncation_dim: int

    def __post_init__(self):
        if self.kind not in (DELTA, DELTA_PLUS, GRAPH):
            raise PresheafError(f"unknown index kind {self.kind!r}")
        if self.kind == GRAPH:
            object.__setattr__(self, "truncation_dim", 1)
        elif self.truncation_dim < 0:
            raise PresheafError("truncation_dim must be >= 0")

    @property
    def levels(self) -> int:
        return self.truncation_dim + 1

    def generators(self) -> list[tuple[str, int, int]]:
        """All generating arrows as (name, source_level, target_level)."""
        gens = []
        if self.kind == GRAPH:
            return [("s@1", 1, 0), ("t@1", 1, 0)]
        n = self.truncation_dim
        for k in range(1, n + 1):
            for i in range(k + 1):
                gens.append((f"d_{i}@{k}", k, k - 1))
        if self.kind == DELTA:
            for k in range(n):
                for i in range(k + 1):
                    gens.append((f"s_{i}@{k}", k, k + 1))
        return gens


def _as_tuple_table(table) -> tuple[int, ...]:
    return tuple(int(v) for v in table)


@dataclass(frozen=True)
class FinPresheaf:
    """A validated finite presheaf; immutable and hashable.

    ``actions`` maps generator names (see ``IndexPresentation.generators``)
    to total functions written as integer tuples.  ``decoration`` is
    ``(kind, frozenset of (dim, idx))``.
    """

    index: IndexPresentation
    level_sizes: tuple[int, ...]
    actions: tuple[tuple[str, tuple[int, ...]], ...]
    decoration_kind: str = NONE
    decorated: frozenset = frozenset()

    _action_map: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_action_map", dict(self.actions))

    # -- basic access -----------------------------------------------------

    def size(self, level: int) -> int:
        if 0 <= level < len(self.level_sizes):
            return self.level_sizes[level]
        return 0

    def cells(self, level: int) -> range:
        return range(self.size(level))

    def all_cells(self) -> Iterable[tuple[int, int]]:
        for lv in range(len(self.level_sizes)):
            for i in range(self.level_sizes[lv]):
                yield (lv, i)

    def action(self, name: str) -> tuple[int, ...]:
        return self._action_map[name]

    def face(self, i: int, level: int, cell: int) -> int:
        return self._action_map[f"d_{i}@{level}"][cell]

    def degeneracy(self, i: int, level: int, cell: int) -> int:
        return self._action_map[f"s_{i}@{level}"][cell]

    def faces(self, level: int, cell: int) -> tuple[int, ...]:
        return tuple(self.face(i, level, cell) for i in range(level + 1))

    def is_decorated(self, level: int, cell: int) -> bool:
        return (level, cell) in self.decorated

    @property
    def dim(self) -> int:
        """Largest level with at least one cell (-1 for the empty presheaf)."""
        top = -1
        for lv, n in enumerate(self.level_sizes):
            if n:
                top = lv
        return top

    # -- degeneracy bookkeeping -------------------------------------------

    def degenerate_cells(self, level: int) -> set[int]:
        """Cells of the given level that are degenerate (delta kind only)."""
        if self.index.kind != DELTA or level == 0:
            return set()
        out = set()
        for i in range(level):
            tab = self._action_map.get(f"s_{i}@{level - 1}")
            if tab is not None:
                out.update(tab)
        return out

    def is_degenerate(self, level: int, cell: int) -> bool:
        if self.index.kind != DELTA or level == 0:
            return False
        for i in range(level):
            if self.degeneracy(i, level - 1, self.face(i, level, cell)) == cell:
                return True
        return False

    def nondegenerate_cells(self, level: int) -> list[int]:
        if self.index.kind != DELTA:
            return list(self.cells(level))
        degen = self.degenerate_cells(level)
        return [c for c in self.cells(level) if c not in degen]

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        kind = {DELTA: "delta", DELTA_PLUS: "delta_plus", GRAPH: "graph"}[self.index.kind]
        doc = {
            "index": kind,
            "truncation": self.index.truncation_dim,
            "levels": list(self.level_sizes),
            "actions": {name: list(tab) for name, tab in self.actions},
            "decoration": {
                "kind": self.decoration_kind,
                "cells": sorted([list(c) for c in self.decorated]),
            },
        }
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def presheaf_from_json(doc: dict) -> FinPresheaf:
    kind = {"delta": DELTA, "delta_plus": DELTA_PLUS, "graph": GRAPH}[doc["index"]]
    index = IndexPresentation(kind, int(doc.get("truncation", 0)))
    deco = doc.get("decoration") or {"kind": NONE, "cells": []}
    return make_presheaf(
        index,
        [int(n) for n in doc["levels"]],
        {name: list(tab) for name, tab in doc["actions"].items()},
        decoration=(deco["kind"], [tuple(c) for c in deco["cells"]]),
    )


# -- validation ------------------------------------------------------------


def _check_total(name, table, src_size, tgt_size):
    if len(table) != src_size:
        raise PresheafError(f"action {name}: expected {src_size} entries, got {len(table)}")
    for c, v in enumerate(table):
        if not (0 <= v < tgt_size):
            raise PresheafError(f"action {name}: cell {c} maps to {v} outside target level")


def make_presheaf(index: IndexPresentation, level_sizes, actions,
                  decoration=(NONE, ())) -> FinPresheaf:
    """Validate and build a presheaf.

    Raises ``IdentityViolation`` naming the first failing relation and cell,
    or ``DecorationViolation`` for a bad marking/stratification.
    """
    sizes = tuple(int(n) for n in level_sizes)
    if index.kind == GRAPH:
        if len(sizes) != 2:
            raise PresheafError("graph presheaves have exactly two levels")
    elif len(sizes) != index.levels:
        raise PresheafError(
            f"expected {index.levels} levels for truncation {index.truncation_dim}")

    amap = {}
    for name, src, tgt in index.generators():
        if name not in actions:
            raise PresheafError(f"missing action table {name}")
        tab = _as_tuple_table(actions[name])
        _check_total(name, tab, sizes[src], sizes[tgt])
        amap[name] = tab
    extra = set(actions) - set(amap)
    if extra:
        raise PresheafError(f"unknown action tables: {sorted(extra)}")

    _check_relations(index, sizes, amap)

    kind, cells = decoration
    decorated = frozenset((int(l), int(c)) for l, c in cells)
    ps = FinPresheaf(index, sizes, tuple(sorted(amap.items())), kind, decorated)
    _check_decoration(ps)
    return ps


def _check_relations(index, sizes, amap):
    def d(i, k):
        return amap[f"d_{i}@{k}"]

    def s(i, k):
        return amap[f"s_{i}@{k}"]

    n = index.truncation_dim
    if index.kind == GRAPH:
        return  # no relations between s and t
    # d_i d_j = d_{j-1} d_i  (i < j), acting on cells of level k >= 2
    for k in range(2, n + 1):
        for j in range(k + 1):
            for i in range(j):
                lhs = [d(i, k - 1)[d(j, k)[c]] for c in range(sizes[k])]
                rhs = [d(j - 1, k - 1)[d(i, k)[c]] for c in range(sizes[k])]
                if lhs != rhs:
                    c = next(c for c in range(sizes[k]) if lhs[c] != rhs[c])
                    raise IdentityViolation(
                        f"d_{i} d_{j} != d_{j-1} d_{i} at level {k}, cell {c}")
    if index.kind != DELTA:
        return
    # s_i s_j = s_{j+1} s_i  (i <= j), on cells of level k with k+2 <= n
    for k in range(0, n - 1):
        for j in range(k + 1):
            for i in range(j + 1):
                lhs = [s(i, k + 1)[s(j, k)[c]] for c in range(sizes[k])]
                rhs = [s(j + 1, k + 1)[s(i, k)[c]] for c in range(sizes[k])]
                if lhs != rhs:
                    c = next(c for c in range(sizes[k]) if lhs[c] != rhs[c])
                    raise IdentityViolation(
                        f"s_{i} s_{j} != s_{j+1} s_{i} at level {k}, cell {c}")
    # mixed identities on cells of level k, 0 <= k <= n-1 (via s_j then d_i)
    for k in range(0, n):
        for j in range(k + 1):
            for i in range(k + 2):
                comp = [d(i, k + 1)[s(j, k)[c]] for c in range(sizes[k])]
                if i == j or i == j + 1:
                    ref = list(range(sizes[k]))
                    tag = "id"
                elif i < j:
                    ref = [s(j - 1, k - 1)[d(i, k)[c]] for c in range(sizes[k])]
                    tag = f"s_{j-1} d_{i}"
                else:  # i > j + 1
                    ref = [s(j, k - 1)[d(i - 1, k)[c]] for c in range(sizes[k])]
                    tag = f"s_{j} d_{i-1}"
                if comp != ref:
                    c = next(c for c in range(sizes[k]) if comp[c] != ref[c])
                    raise IdentityViolation(
                        f"d_{i} s_{j} != {tag} at level {k}, cell {c}")


def _check_decoration(ps: FinPresheaf):
    kind = ps.decoration_kind
    if kind == NONE:
        if ps.decorated:
            raise DecorationViolation("undecorated presheaf carries decorated cells")
        return
    if kind not in (MARKED, STRATIFIED):
        raise DecorationViolation(f"unknown decoration kind {kind!r}")
    for lv, c in ps.decorated:
        if not (0 <= lv < len(ps.level_sizes)) or not (0 <= c < ps.level_sizes[lv]):
            raise DecorationViolation(f"decorated cell ({lv},{c}) out of range")
        if lv == 0:
            raise DecorationViolation("a 0-cell cannot be marked or thin")
        if kind == MARKED and lv != 1:
            raise DecorationViolation("marked decorations live in level 1 only")
    if ps.index.kind == DELTA:
        top = 2 if kind == MARKED else len(ps.level_sizes)
        for lv in range(1, top):
            for c in ps.degenerate_cells(lv):
                if (lv, c) not in ps.decorated:
                    raise DecorationViolation(
                        f"degenerate cell ({lv},{c}) must be decorated")


# -- maps -------------------------------------------------------------------


@dataclass(frozen=True)
class PresheafMap:
    """A validated levelwise map commuting with all generating arrows."""

    source: FinPresheaf
    target: FinPresheaf
    components: tuple[tuple[int, ...], ...]

    def __call__(self, level: int, cell: int) -> int:
        return self.components[level][cell]

    def component(self, level: int) -> tuple[int, ...]:
        return self.components[level]

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            tuple(comp) == tuple(range(len(comp))) for comp in self.components)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "components": [list(c) for c in self.components],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def map_from_json(doc: dict, source: Optional[FinPresheaf] = None,
                  target: Optional[FinPresheaf] = None) -> PresheafMap:
    src = source if source is not None else presheaf_from_json(doc["source"])
    tgt = target if target is not None else presheaf_from_json(doc["target"])
    return make_map(src, tgt, [list(c) for c in doc["components"]])


def make_map(src: FinPresheaf, tgt: FinPresheaf, components) -> PresheafMap:
    """Validate naturality and decoration preservation; raise otherwise."""
    if src.index != tgt.index:
        raise NaturalityViolation("source and target live over different index categories")
    comps = tuple(_as_tuple_table(c) for c in components)
    if len(comps) != len(src.level_sizes):
        raise NaturalityViolation("wrong number of level components")
    for lv, comp in enumerate(comps):
        _check_total(f"component@{lv}", comp, src.level_sizes[lv], tgt.level_sizes[lv])
    for name, s_lv, t_lv in src.index.generators():
        s_tab, t_tab = src.action(name), tgt.action(name)
        f_s, f_t = comps[s_lv], comps[t_lv]
        for c in range(src.level_sizes[s_lv]):
            if f_t[s_tab[c]] != t_tab[f_s[c]]:
                raise NaturalityViolation(
                    f"naturality fails for {name} at cell {c}")
    for lv, c in src.decorated:
        if tgt.decoration_kind != NONE and (lv, comps[lv][c]) not in tgt.decorated:
            raise DecorationViolation(
                f"decorated cell ({lv},{c}) maps to an undecorated cell")
    if src.decoration_kind != NONE and tgt.decoration_kind == NONE:
        raise DecorationViolation("decorated source into undecorated target")
    return PresheafMap(src, tgt, comps)


def identity_map(ps: FinPresheaf) -> PresheafMap:
    return PresheafMap(ps, ps, tuple(tuple(range(n)) for n in ps.level_sizes))


def compose(g: PresheafMap, f: PresheafMap) -> PresheafMap:
    """g after f."""
    if f.target != g.source:
        raise NaturalityViolation("composition mismatch")
    comps = tuple(
        tuple(g.components[lv][v] for v in f.components[lv])
        for lv in range(len(f.components)))
    return PresheafMap(f.source, g.target, comps)


def maps_equal(f: PresheafMap, g: PresheafMap) -> bool:
    return (f.source == g.source and f.target == g.target
            and f.components == g.components)


def is_mono(f: PresheafMap) -> dict:
    """Levelwise injectivity report.

    At concrete finite scale every subset is decidable, so the constructive
    complementedness side-condition is automatic; the report records that
    collapse instead of testing it.
    """
    witness = None
    ok = True
    for lv, comp in enumerate(f.components):
        seen = {}
        for c, v in enumerate(comp):
            if v in seen:
                ok = False
                witness = (lv, seen[v], c)
                break
            seen[v] = c
        if not ok:
            break
    return {
        "mono": ok,
        "colliding": witness,
        "complemented": "automatic (finite concrete cells)",
    }


def is_iso(f: PresheafMap) -> bool:
    return all(
        len(set(comp)) == len(comp) == f.target.level_sizes[lv]
        for lv, comp in enumerate(f.components)) and _decoration_reflected(f)


def _decoration_reflected(f: PresheafMap) -> bool:
    if f.source.decoration_kind != f.target.decoration_kind:
        return False
    image = {(lv, f.components[lv][c]) for lv, c in f.source.decorated}
    return image == set(f.target.decorated)


def inverse(f: PresheafMap) -> PresheafMap:
    if not is_iso(f):
        raise PresheafError("not an isomorphism")
    comps = []
    for lv, comp in enumerate(f.components):
        inv = [0] * len(comp)
        for c, v in enumerate(comp):
            inv[v] = c
        comps.append(tuple(inv))
    return PresheafMap(f.target, f.source, tuple(comps))


# -- truncation --------------------------------------------------------------


def truncate(ps: FinPresheaf, m: int) -> FinPresheaf:
    """Restrict all data to levels <= m (delta / delta_plus kinds)."""
    if ps.index.kind == GRAPH:
        raise OutOfRange("graph presheaves have a fixed two-level shape")
    if m > ps.index.truncation_dim or m < 0:
        raise OutOfRange(f"cannot truncate at {m}: budget {ps.index.truncation_dim}")
    if m == ps.index.truncation_dim:
        return ps
    index = IndexPresentation(ps.index.kind, m)
    actions = {name: ps.action(name) for name, _, _ in index.generators()}
    deco = (ps.decoration_kind,
            [(lv, c) for lv, c in ps.decorated if lv <= m])
    return make_presheaf(index, ps.level_sizes[:m + 1], actions, deco)


def truncate_map(f: PresheafMap, m: int) -> PresheafMap:
    src, tgt = truncate(f.source, m), truncate(f.target, m)
    return make_map(src, tgt, f.components[:m + 1])


# -- empty / point helpers ----------------------------------------------------


def empty_presheaf(index: IndexPresentation, decoration_kind: str = NONE) -> FinPresheaf:
    sizes = [0] * (2 if index.kind == GRAPH else index.levels)
    actions = {name: [] for name, _, _ in index.generators()}
    return make_presheaf(index, sizes, actions, (decoration_kind, ()))


def initial_map(tgt: FinPresheaf) -> PresheafMap:
    src = empty_presheaf(tgt.index, tgt.decoration_kind)
    return make_map(src, tgt, [[] for _ in src.level_sizes])


def terminal_presheaf(index: IndexPresentation, decoration_kind: str = NONE) -> FinPresheaf:
    """One cell in every level; all actions collapse."""
    nlevels = 2 if index.kind == GRAPH else index.levels
    sizes = [1] * nlevels
    actions = {name: [0] for name, _, _ in index.generators()}
    if decoration_kind == NONE:
        deco = (NONE, ())
    elif decoration_kind == MARKED:
        deco = (MARKED, [(1, 0)])
    else:
        deco = (STRATIFIED, [(lv, 0) for lv in range(1, nlevels)])
    return make_presheaf(index, sizes, actions, deco)


def terminal_map(src: FinPresheaf, decoration_kind: Optional[str] = None) -> PresheafMap:
    kind = src.decoration_kind if decoration_kind is None else decoration_kind
    tgt = terminal_presheaf(src.index, kind)
    return make_map(src, tgt, [[0] * n for n in src.level_sizes])
