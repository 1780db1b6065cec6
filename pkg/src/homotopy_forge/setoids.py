"""Proof-relevant equivalence data: setoids and setoid-categories.

A setoid stores its relations as an explicit set with endpoints plus chosen
reflexivity / inverse / composition tables pointing back into that set.  The
precise choice of tables is irrelevant (two setoid structures on the same
relation graph are isomorphic); what matters is that a canonical choice
exists, so builders always pick the least witness index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class Setoid:
    """Elements, relations with endpoints, and chosen refl/inv/comp tables."""

    elements: list
    relations: list            # list of (src_idx, tgt_idx, payload)
    refl: dict = field(default_factory=dict)   # element -> relation index
    inv: dict = field(default_factory=dict)    # relation -> relation
    comp: dict = field(default_factory=dict)   # (rel a, rel b) -> relation

    def n_elements(self) -> int:
        return len(self.elements)

    def related(self, i: int, j: int) -> Optional[int]:
        for k, (s, t, _) in enumerate(self.relations):
            if s == i and t == j:
                return k
        return None

    def classes(self) -> list[list[int]]:
        """Connected components of the relation graph, canonical order."""
        parent = list(range(len(self.elements)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for s, t, _ in self.relations:
            rs, rt = find(s), find(t)
            if rs != rt:
                parent[max(rs, rt)] = min(rs, rt)
        out = {}
        for i in range(len(self.elements)):
            out.setdefault(find(i), []).append(i)
        return [out[k] for k in sorted(out)]

    def class_count(self) -> int:
        return len(self.classes())


def close_setoid(elements, relations) -> Optional[Setoid]:
    """Build chosen refl/inv/comp tables; None when some witness is missing.

    The relation set itself is not enlarged: the data only certifies that
    reflexivity, symmetry and transitivity witnesses already exist.
    """
    s = Setoid(list(elements), list(relations))
    by_pair = {}
    for k, (a, b, _) in enumerate(s.relations):
        by_pair.setdefault((a, b), k)
    for i in range(len(s.elements)):
        k = by_pair.get((i, i))
        if k is None:
            return None
        s.refl[i] = k
    for k, (a, b, _) in enumerate(s.relations):
        kk = by_pair.get((b, a))
        if kk is None:
            return None
        s.inv[k] = kk
    for k1, (a, b, _) in enumerate(s.relations):
        for k2, (b2, c, _) in enumerate(s.relations):
            if b2 != b:
                continue
            kk = by_pair.get((a, c))
            if kk is None:
                return None
            s.comp[(k1, k2)] = kk
    return s


@dataclass
class SetoidMorphism:
    source: Setoid
    target: Setoid
    element_map: list           # element index map
    relation_map: list          # relation index map

    def valid(self) -> bool:
        for k, (a, b, _) in enumerate(self.source.relations):
            ka = self.relation_map[k]
            s, t, _ = self.target.relations[ka]
            if s != self.element_map[a] or t != self.element_map[b]:
                return False
        return True


def morphism_from_elements(src: Setoid, tgt: Setoid, element_map) -> Optional[SetoidMorphism]:
    """Extend an element map to relations by picking least witnesses."""
    rel_map = []
    for a, b, _ in src.relations:
        k = tgt.related(element_map[a], element_map[b])
        if k is None:
            return None
        rel_map.append(k)
    return SetoidMorphism(src, tgt, list(element_map), rel_map)


def injection_structure(f: SetoidMorphism) -> Optional[dict]:
    """For every y-relation between images, a chosen x-relation."""
    table = {}
    for x in range(f.source.n_elements()):
        for y in range(f.source.n_elements()):
            for k, (s, t, _) in enumerate(f.target.relations):
                if s == f.element_map[x] and t == f.element_map[y]:
                    back = f.source.related(x, y)
                    if back is None:
                        return None
                    table[(x, y, k)] = back
    return table


def surjection_structure(f: SetoidMorphism) -> Optional[dict]:
    """For every target element, a chosen preimage and a connecting witness."""
    table = {}
    for y in range(f.target.n_elements()):
        found = None
        for x in range(f.source.n_elements()):
            k = f.target.related(y, f.element_map[x])
            if k is not None:
                found = (x, k)
                break
        if found is None:
            return None
        table[y] = found
    return table


def is_isomorphism(f: SetoidMorphism) -> bool:
    return injection_structure(f) is not None and surjection_structure(f) is not None


@dataclass
class SetoidCategory:
    """Objects, hom-setoids, strict composition, coherence witnesses.

    Composition here is composition of actual maps, so the identity and
    associativity witnesses are reflexivities; they are stored anyway since
    the data structure is the contract.
    """

    objects: list
    homs: dict                  # (i, j) -> Setoid
    identities: dict            # i -> element index in homs[(i, i)]
    composition: dict           # (i, j, k, f_elem, g_elem) -> element of homs[(i, k)]

    def hom(self, i, j) -> Setoid:
        return self.homs[(i, j)]

    def compose_elements(self, i, j, k, f, g):
        return self.composition[(i, j, k, f, g)]

    def identity_witness(self, i, j, f):
        """l_f and r_f both exist because composition is strict."""
        hom = self.homs[(i, j)]
        return hom.refl[f], hom.refl[f]

    def associativity_witness(self, i, j, k, l, f, g, h):
        fg = self.composition[(i, j, k, f, g)]
        gh = self.composition[(j, k, l, g, h)]
        lhs = self.composition[(i, k, l, fg, h)]
        rhs = self.composition[(i, j, l, f, gh)]
        if lhs != rhs:
            return None
        return self.homs[(i, l)].refl[lhs]

    def invertible(self, i, j, f) -> Optional[tuple]:
        """Search a two-sided inverse up to the hom-setoid relations."""
        for g in range(self.homs[(j, i)].n_elements()):
            gf = self.composition[(i, j, i, f, g)]
            fg = self.composition[(j, i, j, g, f)]
            r1 = self.homs[(i, i)].related(gf, self.identities[i])
            r2 = self.homs[(j, j)].related(fg, self.identities[j])
            if r1 is not None and r2 is not None:
                return g, r1, r2
        return None
