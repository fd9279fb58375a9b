"""Identities, composition and exact equality of morphisms, plus category-law checks.

Composition is diagrammatic: ``compose(g, h)`` runs ``g`` first, so its
source is ``g.source`` and its target is ``h.target``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional

from .errors import DEFAULT_BOUND, ArtifactError, Budget
from .model import Frame, InfoSystem, Morphism, members_within
from .tokens import set_key, sorted_sets


def identity_of(s, kind: Optional[str] = None) -> Morphism:
    """The entailment relation of ``s`` viewed as a morphism from ``s`` to itself."""
    if isinstance(s, InfoSystem):
        return Morphism("mapping", s, s, frozenset((None, x, a) for x, a in s.entails))
    if isinstance(s, Frame):
        return Morphism(kind or "family", s, s, s.entails)
    raise ArtifactError("E_TYPE", f"no identity for {type(s).__name__}")


def _check_composable(g: Morphism, h: Morphism) -> None:
    if g.kind != h.kind:
        raise ArtifactError("E_TYPE", f"cannot compose a {g.kind} with a {h.kind}")
    if g.target != h.source:
        raise ArtifactError("E_TYPE", "the first morphism's target is not the second's source")


def compose(g: Morphism, h: Morphism, bound: int = DEFAULT_BOUND) -> Morphism:
    """The composite ``g`` then ``h``.

    Mappings: X (g;h) b iff some Y in the middle CON has X g Y and Y h b.
    Families: X (g;h)_i b iff some e, V ∈ Con_e of the middle frame has
    X g_i ({e} ∪ V) and V h_e b.
    """
    _check_composable(g, h)
    budget = Budget(bound)
    mid = g.target
    rel = set()
    if g.kind == "mapping":
        # X with an empty image still composes through ∅ when ∅ is consistent.
        for x in sorted_sets(g.source.con):
            gx = g.image(None, x)
            for y in members_within(mid.con, gx):
                budget.spend()
                rel.update((None, x, b) for b in h.image(None, y))
    else:
        # Heads with the same image reach the same targets; compute each image once.
        reach: dict = {}
        for i, x, _ in _heads(g):
            gx = g.image(i, x)
            if gx not in reach:
                out = set()
                for e in sorted(gx):
                    for v in members_within(mid.con[e], gx):
                        budget.spend()
                        out.update(h.image(e, v))
                reach[gx] = out
            rel.update((i, x, b) for b in reach[gx])
    return Morphism(g.kind, g.source, h.target, frozenset(rel), g.source_ref, h.target_ref)


def _heads(h: Morphism) -> list:
    """One representative triple per (stage, set) key, in canonical order."""
    seen = {}
    for i, x, b in h.rel:
        seen.setdefault((i, x), (i, x, b))
    return [seen[k] for k in sorted(seen, key=lambda k: (() if k[0] is None else (k[0],), set_key(k[1])))]


def rel_equal(g: Morphism, h: Morphism) -> bool:
    """Exact equality of the relation tables of two parallel morphisms."""
    if g.kind != h.kind:
        raise ArtifactError("E_TYPE", f"cannot compare a {g.kind} with a {h.kind}")
    if g.source != h.source or g.target != h.target:
        raise ArtifactError("E_TYPE", "morphisms have different endpoints")
    return g.rel == h.rel


def first_difference(g: Morphism, h: Morphism) -> Optional[tuple]:
    """The canonically first triple in exactly one of the two tables."""
    diff = g.rel ^ h.rel
    if not diff:
        return None
    return min(diff, key=lambda t: (() if t[0] is None else (t[0],), set_key(t[1]), t[2]))


@dataclass(frozen=True)
class CategoryLawReport:
    assoc_ok: bool
    left_id_ok: bool
    right_id_ok: bool
    counterexample: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.assoc_ok and self.left_id_ok and self.right_id_ok


def check_category_laws(
    objects: Sequence,
    morphisms: Sequence[Morphism],
    identities: Optional[Sequence[Morphism]] = None,
) -> CategoryLawReport:
    """Check both identity laws and associativity over a finite diagram.

    ``identities`` defaults to ``identity_of`` for each object; passing a
    tampered list is how a broken identity is detected. Counterexamples are
    ``(law, index..., triple)`` with indices into ``morphisms``.
    """
    ids = list(identities) if identities is not None else [identity_of(o) for o in objects]
    if len(ids) != len(objects):
        raise ArtifactError("E_TYPE", "one identity per object is required")
    for ident, obj in zip(ids, objects):
        if ident.source != obj or ident.target != obj:
            raise ArtifactError("E_TYPE", "identity endpoints must equal their object")

    def id_at(obj, kind: str) -> Optional[Morphism]:
        for ident, o in zip(ids, objects):
            if o == obj and ident.kind == kind:
                return ident
        return None

    left_ok = right_ok = assoc_ok = True
    counter: Optional[tuple] = None
    for n, h in enumerate(morphisms):
        left = id_at(h.source, h.kind)
        right = id_at(h.target, h.kind)
        if left is None or right is None:
            raise ArtifactError("E_TYPE", f"morphism {n} has an endpoint outside the diagram")
        diff = first_difference(compose(left, h), h)
        if diff is not None:
            left_ok = False
            counter = counter or ("left-identity", n, diff)
        diff = first_difference(compose(h, right), h)
        if diff is not None:
            right_ok = False
            counter = counter or ("right-identity", n, diff)

    arrows = list(morphisms) + ids
    for a, f in enumerate(arrows):
        for b, g in enumerate(arrows):
            if f.kind != g.kind or f.target != g.source:
                continue
            fg = compose(f, g)
            for c, h in enumerate(arrows):
                if g.kind != h.kind or g.target != h.source:
                    continue
                diff = first_difference(compose(fg, h), compose(f, compose(g, h)))
                if diff is not None:
                    assoc_ok = False
                    counter = counter or ("associativity", a, b, c, diff)
    return CategoryLawReport(assoc_ok, left_ok, right_ok, counter)
