"""Frames, information systems and morphisms as extensional, immutable tables."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Optional, Union

from .errors import ArtifactError
from .tokens import Token, set_key, show_set

EMPTY: frozenset = frozenset()

Triple = tuple  # (stage or None, frozenset, token)


def _check_known(universe: frozenset, tokens: Iterable[Token], where: str) -> None:
    for t in tokens:
        if t not in universe:
            raise ArtifactError("E_UNKNOWN_TOKEN", f"token {t} in {where} is not declared", (t,))


@dataclass(frozen=True)
class Frame:
    """A token universe with per-token consistency families and entailments.

    ``con[i]`` is the family Con_i; ``entails`` holds triples ``(i, X, a)``
    meaning X ⊨_i a. ``truth`` is an optional declared truth token.
    """

    tokens: frozenset
    con: Mapping[Token, frozenset]
    entails: frozenset
    truth: Optional[Token] = None

    def __post_init__(self) -> None:
        tokens = frozenset(self.tokens)
        if not tokens:
            raise ArtifactError("E_TYPE", "a frame needs at least one token")
        con = {i: frozenset() for i in tokens}
        for i, family in self.con.items():
            _check_known(tokens, [i], "con")
            fam = frozenset(frozenset(x) for x in family)
            for x in fam:
                _check_known(tokens, x, f"con({i})")
            con[i] = fam
        entails = frozenset((i, frozenset(x), a) for i, x, a in self.entails)
        for i, x, a in entails:
            _check_known(tokens, [i, a, *x], "entails")
            if x not in con[i]:
                raise ArtifactError(
                    "E_ENT_DOMAIN", f"entailment {show_set(x)} -> {a} at {i}: set not in con({i})", (i, x, a)
                )
        if self.truth is not None:
            _check_known(tokens, [self.truth], "truth")
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "con", con)
        object.__setattr__(self, "entails", entails)

    def __hash__(self) -> int:
        return hash((self.tokens, self.entails, self.truth))

    @cached_property
    def _targets(self) -> dict:
        out: dict = {}
        for i, x, a in self.entails:
            out.setdefault((i, x), set()).add(a)
        return {k: frozenset(v) for k, v in out.items()}

    def entailed(self, i: Token, x: frozenset) -> frozenset:
        """All a with X ⊨_i a (empty when X is not consistent at i)."""
        return self._targets.get((i, x), EMPTY)

    def entails_all(self, i: Token, x: frozenset, ys: Iterable[Token]) -> bool:
        return x in self.con[i] and frozenset(ys) <= self.entailed(i, x)

    @cached_property
    def relation_R(self) -> frozenset:
        """Pairs (i, j) with {i} ∈ Con_j."""
        return frozenset((i, j) for i in self.tokens for j in self.tokens if frozenset([i]) in self.con[j])


@dataclass(frozen=True)
class InfoSystem:
    """A token universe with one consistency family CON and entailment pairs (X, a)."""

    tokens: frozenset
    con: frozenset
    entails: frozenset
    simplified: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        tokens = frozenset(self.tokens)
        if not tokens:
            raise ArtifactError("E_TYPE", "a system needs at least one token")
        con = frozenset(frozenset(x) for x in self.con)
        for x in con:
            _check_known(tokens, x, "con")
        entails = frozenset((frozenset(x), a) for x, a in self.entails)
        for x, a in entails:
            _check_known(tokens, [a, *x], "entails")
            if x not in con:
                raise ArtifactError("E_ENT_DOMAIN", f"entailment {show_set(x)} -> {a}: set not in con", (x, a))
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "con", con)
        object.__setattr__(self, "entails", entails)

    def __hash__(self) -> int:
        return hash((self.tokens, self.con, self.entails))

    @cached_property
    def _targets(self) -> dict:
        out: dict = {}
        for x, a in self.entails:
            out.setdefault(x, set()).add(a)
        return {k: frozenset(v) for k, v in out.items()}

    def entailed(self, x: frozenset) -> frozenset:
        return self._targets.get(x, EMPTY)


Structure = Union[Frame, InfoSystem]

KINDS = ("mapping", "family", "global")


@dataclass(frozen=True)
class Morphism:
    """A relation table between two structures.

    ``kind`` is ``mapping`` (systems; stage is None), ``family`` (frames) or
    ``global`` (frames presenting conjunctive logics). ``rel`` holds triples
    ``(i, X, b)``. The ``*_ref`` fields remember endpoint file paths and do
    not take part in equality.
    """

    kind: str
    source: Structure
    target: Structure
    rel: frozenset
    source_ref: Optional[str] = field(default=None, compare=False)
    target_ref: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ArtifactError("E_TYPE", f"unknown morphism kind {self.kind!r}")
        wanted = InfoSystem if self.kind == "mapping" else Frame
        if not (isinstance(self.source, wanted) and isinstance(self.target, wanted)):
            raise ArtifactError("E_TYPE", f"{self.kind} morphisms need {wanted.__name__} endpoints")
        rel = frozenset((i, frozenset(x), b) for i, x, b in self.rel)
        src, tgt = self.source, self.target
        for i, x, b in rel:
            _check_known(tgt.tokens, [b], "rel target")
            _check_known(src.tokens, x, "rel source set")
            if self.kind == "mapping":
                if i is not None:
                    raise ArtifactError("E_TYPE", "mapping entries carry no stage")
                if x not in src.con:
                    raise ArtifactError("E_ENT_DOMAIN", f"{show_set(x)} is not in source con", (x, b))
            else:
                _check_known(src.tokens, [i], "rel stage")
                if x not in src.con[i]:
                    raise ArtifactError("E_ENT_DOMAIN", f"{show_set(x)} is not in source con({i})", (i, x, b))
        object.__setattr__(self, "rel", rel)

    def __hash__(self) -> int:
        return hash((self.kind, self.rel))

    @cached_property
    def _images(self) -> dict:
        out: dict = {}
        for i, x, b in self.rel:
            out.setdefault((i, x), set()).add(b)
        return {k: frozenset(v) for k, v in out.items()}

    def image(self, i: Optional[Token], x: frozenset) -> frozenset:
        """All b with X H_i b (``i`` is None for mappings)."""
        return self._images.get((i, x), EMPTY)

    def with_rel(self, rel: Iterable[Triple]) -> Morphism:
        return Morphism(self.kind, self.source, self.target, frozenset(rel), self.source_ref, self.target_ref)


def members_within(family: frozenset, sup: frozenset) -> list:
    """Members of ``family`` that are subsets of ``sup``, in canonical order."""
    if len(sup) < 20 and 2 ** len(sup) <= len(family):
        items = sorted(sup)
        found = [
            frozenset(c) for r in range(len(items) + 1) for c in combinations(items, r) if frozenset(c) in family
        ]
    else:
        found = [x for x in family if x <= sup]
    return sorted(found, key=set_key)
