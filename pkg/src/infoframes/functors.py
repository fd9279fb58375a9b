"""The structure functors F, S, T, W and the witnesses of the equivalences they induce.

Each ``apply_*`` takes either a structure or a morphism. On a morphism the
endpoints are transformed too, so ``apply_X(h).source == apply_X(h.source)``.
Object images are cached, since witness and naturality checks rebuild them often.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .axioms import Report, ReportBuilder, check_family, check_mapping, fmt
from .category import compose, first_difference, identity_of
from .errors import DEFAULT_BOUND, ArtifactError
from .model import Frame, InfoSystem, Morphism, members_within
from .tokens import RESERVED, Atom, Pair, SetTok, Token, powerset

FAMILY_BOUND = 4096
PAIR_IDS = ("PQ", "ST", "MN", "JL")


def _generated_family(top: Token, gens: frozenset, family_bound: int) -> frozenset:
    """{{top}} together with every subset of ``gens``."""
    if 2 ** len(gens) > family_bound:
        raise ArtifactError(
            "E_BOUND", f"consistency family at {top} would have 2^{len(gens)} sets (bound {family_bound})", (top,)
        )
    return frozenset(powerset(gens)) | {frozenset((top,))}


def _need(x, cls, what: str) -> None:
    if not isinstance(x, cls):
        raise ArtifactError("E_TYPE", f"{what} expects a {cls.__name__}, got {type(x).__name__}")


def _family_morphism(h: Morphism, what: str) -> None:
    _need(h, Morphism, what)
    if h.kind != "family":
        raise ArtifactError("E_TYPE", f"{what} acts on families, got a {h.kind}")


# ---------------------------------------------------------------- F


def apply_F(x, family_bound: int = FAMILY_BOUND):
    """Systems to strong frames whose tokens are the consistent sets."""
    if isinstance(x, Morphism):
        if x.kind != "mapping":
            raise ArtifactError("E_TYPE", f"F acts on mappings, got a {x.kind}")
        return _F_mor(x, family_bound)
    _need(x, InfoSystem, "F")
    return _F_obj(x, family_bound)


def _below(s: InfoSystem, x: frozenset) -> frozenset:
    """D_X: the consistent sets entailed by X, as set tokens."""
    return frozenset(SetTok(y) for y in members_within(s.con, s.entailed(x)))


@lru_cache(maxsize=256)
def _F_obj(s: InfoSystem, family_bound: int) -> Frame:
    down = {x: _below(s, x) for x in s.con}
    tokens = frozenset(SetTok(x) for x in s.con)
    con, ent = {}, set()
    for k in tokens:
        family = _generated_family(k, down[k.elems], family_bound)
        con[k] = family
        for fam in family:
            for e in fam | {k}:
                ent.update((k, fam, y) for y in down[e.elems])
    return Frame(tokens, con, frozenset(ent))


def _F_mor(h: Morphism, family_bound: int) -> Morphism:
    src, tgt = _F_obj(h.source, family_bound), _F_obj(h.target, family_bound)
    images = {x: frozenset(SetTok(y) for y in members_within(h.target.con, h.image(None, x))) for x in h.source.con}
    rel = set()
    for k in src.tokens:
        for fam in src.con[k]:
            for e in fam | {k}:
                rel.update((k, fam, y) for y in images[e.elems])
    return Morphism("family", src, tgt, frozenset(rel))


# ---------------------------------------------------------------- S


def apply_S(x):
    """Strong frames to systems: consistent sets gain their witness token."""
    if isinstance(x, Morphism):
        _family_morphism(x, "S")
        return _S_mor(x)
    _need(x, Frame, "S")
    return _S_obj(x)


def _decompositions(f: Frame, x: frozenset) -> list:
    """All (a, X̄) with X = X̄ ∪ {a} and X̄ ∈ Con_a."""
    out = []
    for a in sorted(x):
        for bar in (x, x - {a}):
            if bar in f.con[a] and (a, bar) not in out:
                out.append((a, bar))
    return out


@lru_cache(maxsize=256)
def _S_obj(f: Frame) -> InfoSystem:
    con = frozenset(bar | {a} for a in f.tokens for bar in f.con[a])
    ent = set()
    for x in con:
        for a, bar in _decompositions(f, x):
            ent.update((x, c) for c in f.entailed(a, bar) | f.entailed(a, frozenset((a,))))
    return InfoSystem(f.tokens, con, frozenset(ent))


def _S_mor(h: Morphism) -> Morphism:
    src, tgt = _S_obj(h.source), _S_obj(h.target)
    rel = set()
    for x in src.con:
        for a, bar in _decompositions(h.source, x):
            rel.update((None, x, b) for b in h.image(a, bar) | h.image(a, frozenset((a,))))
    return Morphism("mapping", src, tgt, frozenset(rel))


# ---------------------------------------------------------------- T


def apply_T(x, family_bound: int = FAMILY_BOUND):
    """Frames to strong frames whose tokens are pairs (a, X) with X ∈ Con_a."""
    if isinstance(x, Morphism):
        _family_morphism(x, "T")
        return _T_mor(x, family_bound)
    _need(x, Frame, "T")
    return _T_obj(x, family_bound)


def _pairs_entailed(f: Frame, c: Token, z: frozenset) -> frozenset:
    """All (e, V) with V ∈ Con_e and Z ⊨_c {e} ∪ V."""
    tz = f.entailed(c, z)
    return frozenset(Pair(e, v) for e in tz for v in members_within(f.con[e], tz))


def _pairs_within(f: Frame, avail: frozenset) -> frozenset:
    return frozenset(Pair(b, y) for b in avail for y in members_within(f.con[b], avail))


@lru_cache(maxsize=256)
def _T_obj(f: Frame, family_bound: int) -> Frame:
    tokens = frozenset(Pair(a, x) for a in f.tokens for x in f.con[a])
    down = {p: _pairs_entailed(f, p.first, p.second) for p in tokens}
    con, ent = {}, set()
    for p in tokens:
        family = _generated_family(p, down[p], family_bound)
        con[p] = family
        for fam in family:
            for q in fam | {p}:
                ent.update((p, fam, y) for y in down[q])
    truth = Pair(f.truth, ()) if f.truth is not None else None
    return Frame(tokens, con, frozenset(ent), truth)


def _T_mor(h: Morphism, family_bound: int) -> Morphism:
    src, tgt = _T_obj(h.source, family_bound), _T_obj(h.target, family_bound)
    images = {p: _pairs_within(h.target, h.image(p.first, p.second)) for p in src.tokens}
    rel = set()
    for p in src.tokens:
        for fam in src.con[p]:
            for q in fam | {p}:
                rel.update((p, fam, y) for y in images[q])
    return Morphism("family", src, tgt, frozenset(rel))


# ---------------------------------------------------------------- W


def apply_W(x, truth_name: str = RESERVED, target_truth_name: Optional[str] = None):
    """Frames to frames with a fresh truth token (default ``#T``)."""
    if isinstance(x, Morphism):
        _family_morphism(x, "W")
        return _W_mor(x, truth_name, target_truth_name or truth_name)
    _need(x, Frame, "W")
    return _W_obj(x, truth_name)


def _fresh(f: Frame, name: str) -> Atom:
    t = Atom(name)
    if t in f.tokens:
        raise ArtifactError("E_RESERVED", f"truth name {name} is already a token; choose another name", (t,))
    return t


@lru_cache(maxsize=256)
def _W_obj(f: Frame, truth_name: str) -> Frame:
    t = _fresh(f, truth_name)
    con = {a: f.con[a] | {x | {t} for x in f.con[a]} for a in f.tokens}
    con[t] = frozenset((frozenset(), frozenset((t,))))
    ent = {(t, x, t) for x in con[t]}
    for a in f.tokens:
        for x in con[a]:
            ent.update((a, x, c) for c in f.entailed(a, x - {t}) | {t})
    return Frame(f.tokens | {t}, con, frozenset(ent), t)


def _W_mor(h: Morphism, truth_name: str, target_truth_name: str) -> Morphism:
    src, tgt = _W_obj(h.source, truth_name), _W_obj(h.target, target_truth_name)
    t, t2 = src.truth, tgt.truth
    rel = {(t, x, t2) for x in src.con[t]}
    for a in h.source.tokens:
        for x in src.con[a]:
            rel.update((a, x, c) for c in h.image(a, x - {t}) | {t2})
    return Morphism("family", src, tgt, frozenset(rel))


# ---------------------------------------------------------------- witnesses


@dataclass(frozen=True)
class WitnessPair:
    forward: Morphism
    backward: Morphism
    pair_id: str


def witness(pair_id: str, obj, truth_name: str = RESERVED, family_bound: int = FAMILY_BOUND) -> WitnessPair:
    """The explicit isomorphism between ``obj`` and its round-trip image.

    PQ: strong frame A and F(S(A)). ST: system S and S(F(S)).
    MN: frame A and T(A). JL: frame A and W(A).
    """
    if pair_id == "PQ":
        _need(obj, Frame, "PQ")
        sa = _S_obj(obj)
        fsa = _F_obj(sa, family_bound)
        p = {
            (i, x, SetTok(z))
            for i in obj.tokens
            for x in obj.con[i]
            for z in members_within(sa.con, obj.entailed(i, x))
        }
        q = {
            (k, fam, a)
            for k in fsa.tokens
            for fam in fsa.con[k]
            for e in fam | {k}
            for a in sa.entailed(e.elems)
        }
        return WitnessPair(Morphism("family", obj, fsa, frozenset(p)), Morphism("family", fsa, obj, frozenset(q)), "PQ")
    if pair_id == "ST":
        _need(obj, InfoSystem, "ST")
        sf = _S_obj(_F_obj(obj, family_bound))
        s_rel = {(None, x, SetTok(y)) for x in obj.con for y in members_within(obj.con, obj.entailed(x))}
        t_rel = {(None, fam, a) for fam in sf.con for e in fam for a in obj.entailed(e.elems)}
        return WitnessPair(
            Morphism("mapping", obj, sf, frozenset(s_rel)), Morphism("mapping", sf, obj, frozenset(t_rel)), "ST"
        )
    if pair_id == "MN":
        _need(obj, Frame, "MN")
        ta = _T_obj(obj, family_bound)
        m = {(i, x, y) for i in obj.tokens for x in obj.con[i] for y in _pairs_entailed(obj, i, x)}
        n = {
            (p, fam, a)
            for p in ta.tokens
            for fam in ta.con[p]
            for a in obj.tokens
            if Pair(a, (a,)) in ta.entailed(p, fam)
        }
        return WitnessPair(Morphism("family", obj, ta, frozenset(m)), Morphism("family", ta, obj, frozenset(n)), "MN")
    if pair_id == "JL":
        _need(obj, Frame, "JL")
        wa = _W_obj(obj, truth_name)
        j = {(i, x, c) for i in obj.tokens for x in obj.con[i] for c in wa.entailed(i, x)}
        l_rel = {(b, z, a) for b in wa.tokens for z in wa.con[b] for a in wa.entailed(b, z) if a in obj.tokens}
        return WitnessPair(
            Morphism("family", obj, wa, frozenset(j)), Morphism("family", wa, obj, frozenset(l_rel)), "JL"
        )
    raise ArtifactError("E_TYPE", f"unknown witness pair {pair_id!r}; expected one of {', '.join(PAIR_IDS)}")


def transport(pair_id: str, h: Morphism, truth_name: str = RESERVED, family_bound: int = FAMILY_BOUND) -> Morphism:
    """The image of ``h`` under the round-trip functor of a witness pair."""
    if pair_id == "PQ":
        return apply_F(apply_S(h), family_bound)
    if pair_id == "ST":
        return apply_S(apply_F(h, family_bound))
    if pair_id == "MN":
        return apply_T(h, family_bound)
    if pair_id == "JL":
        return apply_W(h, truth_name)
    raise ArtifactError("E_TYPE", f"unknown witness pair {pair_id!r}")


def naturality_sides(pair_id: str, h: Morphism, at_source: WitnessPair, at_target: WitnessPair, image: Morphism):
    """Both paths around the naturality square for ``h``."""
    if pair_id in ("PQ", "ST"):
        return compose(h, at_target.forward), compose(at_source.forward, image)
    return compose(at_source.forward, image), compose(h, at_target.forward)


def verify_equivalence(
    pair_id: str,
    objects: Sequence,
    morphisms: Sequence[Morphism] = (),
    witnesses: Optional[Sequence[Optional[WitnessPair]]] = None,
    *,
    check_witnesses: bool = True,
    truth_name: str = RESERVED,
    family_bound: int = FAMILY_BOUND,
    bound: int = DEFAULT_BOUND,
    all_witnesses: bool = False,
) -> Report:
    """Witness composites are identities and every naturality square commutes.

    ``witnesses`` may override the computed pair per object (a tampered pair
    is how the check is exercised negatively). Violation witnesses are
    ``(index, triple)``: object index for the composite checks, morphism
    index for naturality.
    """
    given = list(witnesses) if witnesses is not None else [None] * len(objects)
    pairs = [w or witness(pair_id, o, truth_name, family_bound) for w, o in zip(given, objects)]

    def pair_for(obj) -> WitnessPair:
        for o, w in zip(objects, pairs):
            if o == obj:
                return w
        return witness(pair_id, obj, truth_name, family_bound)

    def validity():
        for n, w in enumerate(pairs):
            for direction in (w.forward, w.backward):
                if direction.kind == "mapping":
                    r = check_mapping(direction, direction.source, direction.target, bound=bound)
                else:
                    r = check_family(direction, direction.source, direction.target, bound=bound)
                for v in r.violations:
                    yield (n, v.axiom), f"witness morphism of object {n} fails {v.axiom}: {v.message}"

    def composite(first: str):
        for n, w in enumerate(pairs):
            a, b = (w.forward, w.backward) if first == "forward" else (w.backward, w.forward)
            diff = first_difference(compose(a, b, bound), identity_of(a.source))
            if diff is not None:
                yield (n, diff), f"composite at object {n} differs from the identity at {fmt(diff)}"

    def naturality():
        for n, h in enumerate(morphisms):
            left, right = naturality_sides(
                pair_id, h, pair_for(h.source), pair_for(h.target), transport(pair_id, h, truth_name, family_bound)
            )
            diff = first_difference(left, right)
            if diff is not None:
                yield (n, diff), f"naturality square for morphism {n} fails at {fmt(diff)}"

    rb = ReportBuilder(all_witnesses)
    if check_witnesses:
        rb.run("witness-valid", validity())
    rb.run("forward-then-backward", composite("forward"))
    rb.run("backward-then-forward", composite("backward"))
    rb.run("naturality", naturality())
    return rb.build()
