"""Independent reference implementations used as test oracles.

Each oracle follows the defining formula literally, usually by filtering a
full candidate space, and shares no code with the library beyond the data
types. They are slow and only meant for small inputs.
"""

from __future__ import annotations

from itertools import chain, combinations, product

from infoframes.model import Frame, InfoSystem, Morphism
from infoframes.tokens import Pair, SetTok


def subsets(items, max_size=None):
    items = sorted(items) if not isinstance(items, list) else items
    top = len(items) if max_size is None else min(max_size, len(items))
    return [frozenset(c) for c in chain.from_iterable(combinations(items, r) for r in range(top + 1))]


def ent_set(f: Frame, i, x, ys) -> bool:
    """X ⊨_i Y for a set Y, straight from the triple table."""
    return x in f.con[i] and all((i, x, y) in f.entails for y in ys)


def sys_ent_set(s: InfoSystem, x, ys) -> bool:
    return x in s.con and all((x, y) in s.entails for y in ys)


def rel_set(h: Morphism, i, x, ys) -> bool:
    return all((i, x, y) in h.rel for y in ys)


# ---------------------------------------------------------------- functors


def naive_F(s: InfoSystem) -> Frame:
    a = sorted(s.con, key=lambda x: sorted(x))
    toks = [SetTok(x) for x in a]
    con, ent = {}, set()
    for k in toks:
        fam = {frozenset((k,))}
        for cand in subsets(toks):
            if all(sys_ent_set(s, k.elems, y.elems) for y in cand):
                fam.add(cand)
        con[k] = frozenset(fam)
        for cand in fam:
            for y in toks:
                if any(sys_ent_set(s, e.elems, y.elems) for e in cand | {k}):
                    ent.add((k, cand, y))
    return Frame(frozenset(toks), con, frozenset(ent))


def naive_F_mor(h: Morphism) -> Morphism:
    src, tgt = naive_F(h.source), naive_F(h.target)
    rel = set()
    for k in src.tokens:
        for cand in src.con[k]:
            for y in tgt.tokens:
                if any(rel_set(h, None, e.elems, y.elems) for e in cand | {k}):
                    rel.add((k, cand, y))
    return Morphism("family", src, tgt, frozenset(rel))


def _decomps(f: Frame, x):
    return [(a, bar) for a in x for bar in (x, x - {a}) if bar | {a} == x and bar in f.con[a]]


def naive_S(f: Frame) -> InfoSystem:
    con = set()
    for cand in subsets(f.tokens):
        if any(bar in f.con[a] for a in cand for bar in (cand, cand - {a})):
            con.add(cand)
    ent = {
        (x, c)
        for x in con
        for c in f.tokens
        if any((a, bar, c) in f.entails or (a, frozenset((a,)), c) in f.entails for a, bar in _decomps(f, x))
    }
    return InfoSystem(f.tokens, frozenset(con), frozenset(ent))


def naive_S_mor(h: Morphism) -> Morphism:
    src, tgt = naive_S(h.source), naive_S(h.target)
    rel = {
        (None, x, b)
        for x in src.con
        for b in tgt.tokens
        if any((a, bar, b) in h.rel or (a, frozenset((a,)), b) in h.rel for a, bar in _decomps(h.source, x))
    }
    return Morphism("mapping", src, tgt, frozenset(rel))


def _tilde(f: Frame) -> list:
    return sorted(Pair(a, x) for a in f.tokens for x in f.con[a])


def naive_T(f: Frame) -> Frame:
    toks = _tilde(f)
    con, ent = {}, set()
    for p in toks:
        d = [q for q in toks if ent_set(f, p.first, p.second, q.second | {q.first})]
        fam = {frozenset((p,))} | set(subsets(d))
        con[p] = frozenset(fam)
        for cand in fam:
            for q in toks:
                if any(ent_set(f, c.first, c.second, q.second | {q.first}) for c in cand | {p}):
                    ent.add((p, cand, q))
    truth = Pair(f.truth, ()) if f.truth is not None else None
    return Frame(frozenset(toks), con, frozenset(ent), truth)


def naive_T_mor(h: Morphism) -> Morphism:
    src, tgt = naive_T(h.source), naive_T(h.target)
    rel = set()
    for p in src.tokens:
        for cand in src.con[p]:
            for q in tgt.tokens:
                if any(rel_set(h, c.first, c.second, q.second | {q.first}) for c in cand | {p}):
                    rel.add((p, cand, q))
    return Morphism("family", src, tgt, frozenset(rel))


def naive_W(f: Frame, t) -> Frame:
    tokens = f.tokens | {t}
    con = {a: f.con[a] | {x | {t} for x in f.con[a]} for a in f.tokens}
    con[t] = frozenset((frozenset(), frozenset((t,))))
    ent = set()
    for a in tokens:
        for x in con[a]:
            for c in tokens:
                if (a != t and c != t and (a, x - {t}, c) in f.entails) or c == t:
                    ent.add((a, x, c))
    return Frame(tokens, con, frozenset(ent), t)


def naive_W_mor(h: Morphism, t, t2) -> Morphism:
    src, tgt = naive_W(h.source, t), naive_W(h.target, t2)
    rel = set()
    for a in src.tokens:
        for x in src.con[a]:
            for c in tgt.tokens:
                if (a != t and c != t2 and (a, x - {t}, c) in h.rel) or c == t2:
                    rel.add((a, x, c))
    return Morphism("family", src, tgt, frozenset(rel))


# ---------------------------------------------------------------- composition


def naive_compose(g: Morphism, h: Morphism) -> Morphism:
    """Literal composition formula, scanning every intermediate candidate."""
    mid = g.target
    rel = set()
    if g.kind == "mapping":
        for x, y, b in product(g.source.con, mid.con, h.target.tokens):
            if rel_set(g, None, x, y) and (None, y, b) in h.rel:
                rel.add((None, x, b))
    else:
        for i in g.source.tokens:
            for x in g.source.con[i]:
                for e in mid.tokens:
                    for v in mid.con[e]:
                        if rel_set(g, i, x, v | {e}):
                            rel.update((i, x, b) for b in h.target.tokens if (e, v, b) in h.rel)
    return Morphism(g.kind, g.source, h.target, frozenset(rel))


# ---------------------------------------------------------------- frame conditions


def naive_frame_failures(f: Frame, strong=False, truth=False) -> set:
    """Names of the violated frame conditions, quantifying over every finite Y.

    Two readings follow the library's documented policy: existential
    conditions over Y (soundness, interpolation) skip Y = ∅, and entailment
    transfer is only charged where X ∈ Con_j (otherwise consistency transfer
    already fails).
    """
    toks = sorted(f.tokens)
    every = subsets(toks)
    R = [(i, j) for i in toks for j in toks if frozenset((i,)) in f.con[j]]
    bad = set()
    for i in toks:
        con = f.con[i]
        if frozenset((i,)) not in con:
            bad.add("self-consistency")
        for x in con:
            if any(y <= x and y not in con for y in every):
                bad.add("consistency-preservation")
            for y in every:
                if y and ent_set(f, i, x, y) and y not in con:
                    bad.add("soundness")
                if x <= y and y in con:
                    if any((i, x, c) in f.entails and (i, y, c) not in f.entails for c in toks):
                        bad.add("weakening")
                if ent_set(f, i, x, y) and y in con:
                    if any((i, y, c) in f.entails and (i, x, c) not in f.entails for c in toks):
                        bad.add("cut")
                if y and ent_set(f, i, x, y):
                    if not any(
                        ent_set(f, i, x, z | {e}) and ent_set(f, e, z, y) for e in toks for z in f.con[e]
                    ):
                        bad.add("interpolation")
            if strong and x != frozenset((i,)) and not all((i, frozenset((i,)), c) in f.entails for c in x):
                bad.add("(S)")
        if truth and (i, frozenset(), f.truth) not in f.entails:
            bad.add("(T)")
    for i, j in R:
        for x in f.con[i]:
            if x not in f.con[j]:
                bad.add("consistency-transfer")
            elif any((i, x, c) in f.entails and (j, x, c) not in f.entails for c in toks):
                bad.add("entailment-transfer")
    return bad


# ---------------------------------------------------------------- system condition (6)


def system_cond6_all_F(s: InfoSystem) -> bool:
    """Every F with X ⊢ F has some Z ∈ CON with F ⊆ Z and X ⊢ Z."""
    for x in s.con:
        for f in subsets(s.entailed(x)):
            if f and not any(f <= z and sys_ent_set(s, x, z) for z in s.con):
                return False
    return True


# ---------------------------------------------------------------- bases


def naive_rounded_ideals(carrier, prec) -> list:
    """Nonempty, downward closed, and every finite M ⊆ I (all sizes) has v ∈ I above it."""
    out = []
    for ideal in subsets(carrier):
        if not ideal:
            continue
        if any((m, y) in prec and m not in ideal for y in ideal for m in carrier):
            continue
        if all(any(all((m, v) in prec for m in ms) for v in ideal) for ms in subsets(ideal)):
            out.append(ideal)
    return out


def naive_way_below(elements, leq) -> set:
    """x ≪ y by enumerating every directed subset with a least upper bound."""
    n = len(elements)
    idx = range(n)

    def directed(s):
        return bool(s) and all(any((a, c) in leq and (b, c) in leq for c in s) for a in s for b in s)

    def lub(s):
        ubs = [u for u in idx if all((a, u) in leq for a in s)]
        least = [u for u in ubs if all((u, w) in leq for w in ubs)]
        return least[0] if least else None

    dirs = [(s, lub(s)) for s in subsets(idx) if directed(s)]
    return {
        (x, y)
        for x in idx
        for y in idx
        if all(any((x, u) in leq for u in s) for s, sup in dirs if sup is not None and (y, sup) in leq)
    }


# ---------------------------------------------------------------- sequent calculus


class SequentSaturation:
    """Bottom-up closure of the conjunctive calculus inside a finite universe.

    The universe at stage p: formulas of depth <= 2 over P_p, antecedents of
    at most ``max_ante`` of them, plus the self antecedent {p}. Seeds are the
    atom-level table entries (nonempty X). Each round applies (R⊤), (L∧) and
    (R∧) in both directions, (Cut) and (W) once; ``rounds`` bounds the proof
    height.
    """

    def __init__(self, table, stage, formulas, max_ante=4, rounds=6):
        from infoframes.logic import AtomF, And

        self.AtomF, self.And = AtomF, And
        self.p = stage
        self.top = table.top
        self.formulas = formulas
        self.antes = set(subsets(formulas, max_ante)) | {frozenset((AtomF(stage),))}
        self.derived = set()
        for x in table.keys(stage):
            gamma = frozenset(AtomF(a) for a in x)
            if gamma in self.antes:
                for q in table.derived(stage, x):
                    if AtomF(q) in formulas:
                        self.derived.add((gamma, AtomF(q)))
        self.heights = []
        for _ in range(rounds):
            new = self._round() - self.derived
            self.heights.append(len(new))
            if not new:
                break
            self.derived |= new

    def _round(self) -> set:
        d = self.derived
        And, AtomF = self.And, self.AtomF
        out = set(d)
        top = AtomF(self.top)
        for g in self.antes:
            out.add((g, top))
        by_ante: dict = {}
        for g, phi in d:
            by_ante.setdefault(g, set()).add(phi)
        for g, phi in d:
            # (L∧) downward: Δ, φ, ψ ⊢ θ gives Δ, φ∧ψ ⊢ θ
            for a in g:
                for b in g:
                    for delta in (g - {a, b}, g - {a}, g - {b}, g):
                        cand = delta | {And(a, b)}
                        if cand in self.antes and delta | {a, b} == g:
                            out.add((cand, phi))
            # (L∧) upward: Δ, φ∧ψ ⊢ θ gives Δ, φ, ψ ⊢ θ
            for c in g:
                if isinstance(c, And):
                    cand = (g - {c}) | {c.left, c.right}
                    if cand in self.antes:
                        out.add((cand, phi))
                    cand = g | {c.left, c.right}
                    if cand in self.antes:
                        out.add((cand, phi))
            # (R∧) upward
            if isinstance(phi, And):
                out.add((g, phi.left))
                out.add((g, phi.right))
            # (W)
            for xi in self.formulas:
                cand = g | {xi}
                if cand in self.antes:
                    out.add((cand, phi))
            # (Cut): Γ ⊢ φ, φ ⊢ ψ gives Γ ⊢ ψ
            for psi in by_ante.get(frozenset((phi,)), ()):
                out.add((g, psi))
        # (R∧) downward
        for g, phis in by_ante.items():
            for a in phis:
                for b in phis:
                    if And(a, b) in self.formulas:
                        out.add((g, And(a, b)))
        return out

    def holds(self, gamma, phi) -> bool:
        return (gamma, phi) in self.derived


def formulas_upto_depth2(atoms, AtomF, And) -> list:
    base = [AtomF(a) for a in sorted(atoms)]
    return base + [And(x, y) for x in base for y in base]


# ---------------------------------------------------------------- witnesses


def naive_witness(pair_id: str, obj, t=None):
    """Forward and backward relations read off the defining equivalences."""
    if pair_id == "PQ":
        fsa = naive_F(naive_S(obj))
        p = {
            (i, x, z)
            for i in obj.tokens
            for x in obj.con[i]
            for z in fsa.tokens
            if ent_set(obj, i, x, z.elems)
        }
        q = {
            (k, fam, a)
            for k in fsa.tokens
            for fam in fsa.con[k]
            for a in obj.tokens
            if (k, fam, SetTok((a,))) in fsa.entails
        }
        return (obj, fsa, p), (fsa, obj, q)
    if pair_id == "ST":
        sf = naive_S(naive_F(obj))
        s_rel = {(None, x, y) for x in obj.con for y in sf.tokens if sys_ent_set(obj, x, y.elems)}
        t_rel = {
            (None, fam, a)
            for fam in sf.con
            for a in obj.tokens
            if any(sys_ent_set(obj, e.elems, (a,)) for e in fam)
        }
        return (obj, sf, s_rel), (sf, obj, t_rel)
    if pair_id == "MN":
        ta = naive_T(obj)
        m = {
            (i, x, q)
            for i in obj.tokens
            for x in obj.con[i]
            for q in ta.tokens
            if ent_set(obj, i, x, q.second | {q.first})
        }
        n = {
            (p, fam, a)
            for p in ta.tokens
            for fam in ta.con[p]
            for a in obj.tokens
            if (p, fam, Pair(a, (a,))) in ta.entails
        }
        return (obj, ta, m), (ta, obj, n)
    if pair_id == "JL":
        wa = naive_W(obj, t)
        j = {(i, x, c) for i in obj.tokens for x in obj.con[i] for c in wa.tokens if (i, x, c) in wa.entails}
        l_rel = {(b, z, a) for b in wa.tokens for z in wa.con[b] for a in obj.tokens if (b, z, a) in wa.entails}
        return (obj, wa, j), (wa, obj, l_rel)
    raise ValueError(pair_id)
