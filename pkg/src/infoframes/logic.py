"""Conjunctive formulas, stratified sequent calculi presented by frames, and the functors C and E.

A logic is stored as the strong truth frame presenting it. A sequent
Γ ⊢^p φ holds iff Γ̄ ∈ Con_p and Γ̄ ⊨_p q for every atom q of φ, where Γ̄
is the set of atoms of Γ and the empty antecedent reads as {⊤}.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Optional, Union

from .axioms import Finding, Report, ReportBuilder, check_family, check_frame, fmt
from .category import compose
from .errors import DEFAULT_BOUND, ArtifactError, Budget
from .model import Frame, Morphism
from .tokens import Atom, Token, set_key, show_set, sorted_sets

# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class AtomF:
    token: Token

    def __str__(self) -> str:
        return str(self.token)


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        right = f"({self.right})" if isinstance(self.right, And) else str(self.right)
        return f"{self.left} ∧ {right}"


Formula = Union[AtomF, And]


def flatten(phi: Formula) -> frozenset:
    """The set of atoms occurring in a formula."""
    if isinstance(phi, AtomF):
        return frozenset((phi.token,))
    return flatten(phi.left) | flatten(phi.right)


def big_and(xs: Iterable[Token], top: Token) -> Formula:
    """Left-bracketed conjunction in canonical order; ⊤ for the empty set."""
    items = sorted(xs)
    if not items:
        return AtomF(top)
    return reduce(And, (AtomF(x) for x in items[1:]), AtomF(items[0]))


def depth(phi: Formula) -> int:
    """Atoms have depth 1, a conjunction one more than its deeper part."""
    if isinstance(phi, AtomF):
        return 1
    return 1 + max(depth(phi.left), depth(phi.right))


def atoms_of(gamma: Iterable[Formula]) -> frozenset:
    return frozenset().union(*(flatten(g) for g in gamma))


def show_antecedent(gamma: frozenset) -> str:
    return ", ".join(sorted(map(str, gamma))) if gamma else "∅"


# ---------------------------------------------------------------- logics


@dataclass(frozen=True)
class CSL:
    """A stratified conjunctive logic presented by a strong frame with truth."""

    frame: Frame

    def __post_init__(self) -> None:
        if self.frame.truth is None:
            raise ArtifactError("E_NO_TRUTH", "a logic needs a frame with a truth token")

    @property
    def atoms(self) -> frozenset:
        return self.frame.tokens

    @property
    def top(self) -> Token:
        return self.frame.truth

    def stage(self, p: Token) -> frozenset:
        """P_p: the atoms q with {p} ⊨_p q."""
        if p not in self.frame.tokens:
            raise ArtifactError("E_UNKNOWN_TOKEN", f"{p} is not an atom of this logic", (p,))
        return self.frame.entailed(p, frozenset((p,)))

    @cached_property
    def table(self) -> AtomTable:
        return table_of(self.frame)


@dataclass(frozen=True)
class Sequent:
    stage: Token
    antecedent: frozenset
    consequent: Formula

    def __str__(self) -> str:
        return f"{show_antecedent(self.antecedent)} ⊢^{self.stage} {self.consequent}"


def self_antecedent(p: Token) -> frozenset:
    """The antecedent {p}, always admissible at stage p."""
    return frozenset((AtomF(p),))


def antecedent_atoms(gamma: frozenset, top: Token) -> frozenset:
    """Γ̄, with the empty antecedent read as {⊤}."""
    return atoms_of(gamma) if gamma else frozenset((top,))


def _check_stage(stage_atoms: frozenset, seq: Sequent) -> None:
    if seq.antecedent == self_antecedent(seq.stage):
        return
    outside = atoms_of(seq.antecedent) - stage_atoms
    if outside:
        bad = min(outside)
        raise ArtifactError(
            "E_STAGE", f"antecedent atom {bad} is not in the stage set of {seq.stage}", (seq.stage, bad)
        )


def derives(logic: CSL, seq: Sequent) -> bool:
    """Decide Γ ⊢^p φ by flattening both sides."""
    stage_atoms = logic.stage(seq.stage)
    _check_stage(stage_atoms, seq)
    goal = flatten(seq.consequent)
    if not goal <= stage_atoms:
        return False
    x = antecedent_atoms(seq.antecedent, logic.top)
    return logic.frame.entails_all(seq.stage, x, goal)


# ---------------------------------------------------------------- traces


@dataclass(frozen=True)
class Step:
    rule: str
    sequent: Sequent
    premises: tuple = ()
    note: str = ""

    def __str__(self) -> str:
        src = f"  [from {', '.join(str(n + 1) for n in self.premises)}]" if self.premises else ""
        note = f"  ({self.note})" if self.note else ""
        return f"{self.rule:6} {self.sequent}{src}{note}"


def derivation(logic: CSL, seq: Sequent) -> Optional[list]:
    """A replayable proof of ``seq``, or None when it is not derivable.

    Atom-level axioms come from the presenting frame; (R∧) rebuilds the
    consequent; the bar rule moves between Γ and its atoms; the empty
    antecedent goes through (R⊤) and (Cut) with ⊤ ⊢ φ.
    """
    if not derives(logic, seq):
        return None
    p, top = seq.stage, logic.top
    steps: list[Step] = []
    if not seq.antecedent and seq.consequent == AtomF(top):
        return [Step("(R⊤)", seq)]
    x = antecedent_atoms(seq.antecedent, top)
    atom_gamma = frozenset(AtomF(a) for a in x)

    def build(phi: Formula) -> int:
        if isinstance(phi, AtomF):
            steps.append(Step("axiom", Sequent(p, atom_gamma, phi)))
        else:
            left, right = build(phi.left), build(phi.right)
            steps.append(Step("(R∧)", Sequent(p, atom_gamma, phi), (left, right)))
        return len(steps) - 1

    last = build(seq.consequent)
    if seq.antecedent:
        if seq.antecedent != atom_gamma:
            steps.append(Step("bar", seq, (last,)))
        return steps
    steps.append(Step("(R⊤)", Sequent(p, frozenset(), AtomF(top))))
    note = ""
    if not logic.frame.entails_all(p, frozenset(), flatten(seq.consequent)):
        note = "∅ and {⊤} readings differ here; {⊤} is used"
    steps.append(Step("(Cut)", seq, (len(steps) - 1, last), note))
    return steps


def replay(logic: CSL, steps: list, goal: Sequent) -> bool:
    """Check every step against its rule and that the last step proves ``goal``."""
    if not steps or steps[-1].sequent != goal:
        return False
    frame, top = logic.frame, logic.top
    for n, step in enumerate(steps):
        if any(k >= n for k in step.premises):
            return False
        prem = [steps[k].sequent for k in step.premises]
        s = step.sequent
        if any(q.stage != s.stage for q in prem):
            return False
        if step.rule == "axiom":
            ok = (
                not prem
                and isinstance(s.consequent, AtomF)
                and all(isinstance(g, AtomF) for g in s.antecedent)
                and (s.stage, atoms_of(s.antecedent), s.consequent.token) in frame.entails
            )
        elif step.rule == "(R⊤)":
            ok = not prem and s.consequent == AtomF(top)
        elif step.rule == "(R∧)":
            ok = (
                len(prem) == 2
                and prem[0].antecedent == prem[1].antecedent == s.antecedent
                and s.consequent == And(prem[0].consequent, prem[1].consequent)
            )
        elif step.rule == "(Cut)":
            ok = (
                len(prem) == 2
                and prem[0].antecedent == s.antecedent
                and prem[1].antecedent == frozenset((prem[0].consequent,))
                and prem[1].consequent == s.consequent
            )
        elif step.rule == "bar":
            ok = (
                len(prem) == 1
                and prem[0].consequent == s.consequent
                and bool(prem[0].antecedent)
                and bool(s.antecedent)
                and atoms_of(prem[0].antecedent) == atoms_of(s.antecedent)
            )
        else:
            ok = False
        if not ok:
            return False
    return True


# ---------------------------------------------------------------- formula syntax


def parse_formula(text: str, logic: CSL) -> Formula:
    """Parse a conjunction of atoms; ∧, /\\ and & associate to the left."""
    from .document import _Lexer, _token

    lx = _Lexer(text)
    named_t = Atom("T") in logic.atoms and Atom("T") != logic.top

    def atom(tok: Token) -> AtomF:
        if tok not in logic.atoms:
            raise ArtifactError("E_UNKNOWN_TOKEN", f"{tok} is not an atom of this logic", (tok,))
        return AtomF(tok)

    def primary() -> Formula:
        if lx.at("op", "⊤") or lx.at("ident", "top"):
            lx.next()
            return AtomF(logic.top)
        if lx.at("ident", "T") and not named_t:
            lx.next()
            return AtomF(logic.top)
        if lx.at("("):
            mark = lx.i
            try:
                return atom(_token(lx))
            except ArtifactError as exc:
                if exc.code != "E_SYNTAX":
                    raise
                lx.i = mark
            lx.next()
            inner = conj()
            lx.expect(")")
            return inner
        return atom(_token(lx))

    def conj() -> Formula:
        phi = primary()
        while lx.at("op") and not lx.at("op", "⊤"):
            lx.next()
            phi = And(phi, primary())
        return phi

    phi = conj()
    lx.expect("eof")
    return phi


def parse_antecedent(text: str, logic: CSL, stage: Token) -> frozenset:
    """Comma-separated formulas; ``self`` is {p}; an empty string is ∅."""
    text = text.strip()
    if text == "self":
        return self_antecedent(stage)
    if not text:
        return frozenset()
    return frozenset(parse_formula(part, logic) for part in _split_top_level(text))


def _split_top_level(text: str) -> list:
    parts, level, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            level += 1
        elif ch in ")]}":
            level -= 1
        if ch == "," and level == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if any(not p.strip() for p in parts):
        raise ArtifactError("E_SYNTAX", "empty formula in antecedent list")
    return parts


# ---------------------------------------------------------------- atom tables


@dataclass(frozen=True)
class AtomTable:
    """An atom-level derivability table.

    ``pairs`` holds (p, X, q) meaning ⋀X ⊢^p q. X is a nonempty atom set;
    the empty antecedent is stored as {⊤} and the self antecedent as {p}.
    """

    atoms: frozenset
    top: Token
    stages: dict
    pairs: frozenset

    def __post_init__(self) -> None:
        atoms = frozenset(self.atoms)
        if self.top not in atoms:
            raise ArtifactError("E_TABLE", f"top {self.top} is not a declared atom")
        stages = {p: frozenset(v) for p, v in self.stages.items()}
        if set(stages) != set(atoms):
            missing = sorted(set(atoms) ^ set(stages))
            raise ArtifactError("E_TABLE", f"stage sets must be given exactly for the atoms; mismatch at {missing[0]}")
        for p, ps in stages.items():
            if not ps <= atoms:
                raise ArtifactError("E_TABLE", f"stage set of {p} mentions undeclared atoms")
        pairs = frozenset((p, frozenset(x) or frozenset((self.top,)), q) for p, x, q in self.pairs)
        for p, x, q in pairs:
            if p not in atoms or q not in atoms or not x <= atoms:
                raise ArtifactError("E_TABLE", f"entry {show_set(x)} -> {q} at {p} uses undeclared atoms", (p, x, q))
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "pairs", pairs)

    def __hash__(self) -> int:
        return hash((self.atoms, self.top, self.pairs))

    @cached_property
    def _targets(self) -> dict:
        out: dict = {}
        for p, x, q in self.pairs:
            out.setdefault((p, x), set()).add(q)
        return {k: frozenset(v) for k, v in out.items()}

    def derived(self, p: Token, x: frozenset) -> frozenset:
        """All q with ⋀X ⊢^p q (X = ∅ is looked up as {⊤})."""
        return self._targets.get((p, x or frozenset((self.top,))), frozenset())

    @cached_property
    def _keys(self) -> dict:
        out: dict = {p: set() for p in self.atoms}
        for p, x in self._targets:
            out[p].add(x)
        return {p: sorted_sets(v) for p, v in out.items()}

    def keys(self, p: Token) -> list:
        return list(self._keys.get(p, ()))


def table_of(f: Frame) -> AtomTable:
    """Read the atom-level table off a strong truth frame."""
    if f.truth is None:
        raise ArtifactError("E_NO_TRUTH", "a logic table needs a truth token")
    stages = {p: f.entailed(p, frozenset((p,))) for p in f.tokens}
    pairs = frozenset((i, x, q) for i, x, q in f.entails if x)
    return AtomTable(f.tokens, f.truth, stages, pairs)


def table_lines(t: AtomTable) -> list:
    out = ["logic {", f"  atoms {show_set(t.atoms)}", f"  top {t.top}", "  stages {"]
    for p in sorted(t.atoms):
        out.append(f"    {p}: {show_set(t.stages[p])}")
    out += ["  }", "  derives {"]
    for p in sorted(t.atoms):
        rows = sorted(((x, q) for s, x, q in t.pairs if s == p), key=lambda r: (set_key(r[0]), r[1]))
        if rows:
            out.append(f"    {p}: [" + " ".join(f"[{show_set(x)} -> {q}]" for x, q in rows) + "]")
    out += ["  }", "}"]
    return out


def parse_table_body(lx, strict: bool) -> AtomTable:
    from .document import _check_reserved, _entries, _keyed_block, _keyword, _token, _token_list

    lx.expect("{")
    _keyword(lx, "atoms")
    atoms = _token_list(lx)
    _keyword(lx, "top")
    top = _token(lx)
    _keyword(lx, "stages")
    stages = _keyed_block(lx, _token_list, "stages")
    _keyword(lx, "derives")
    rows = _keyed_block(lx, _entries, "derives")
    lx.expect("}")
    if strict:
        _check_reserved(atoms, top, "logic")
    pairs = set()
    for p, entries in rows.items():
        for x, q in entries:
            key = (p, x or frozenset((top,)), q)
            if key in pairs:
                raise ArtifactError("E_DUP", f"entry {show_set(x)} -> {q} listed twice at {p}", key)
            pairs.add(key)
    return AtomTable(atoms, top, stages, frozenset(pairs))


# ---------------------------------------------------------------- functors C and E


def apply_C(x, *, bound: int = DEFAULT_BOUND):
    """Strong truth frames to logics; truth-respecting families to global relations."""
    if isinstance(x, Morphism):
        if x.kind != "family":
            raise ArtifactError("E_TYPE", f"C acts on families, got a {x.kind}")
        for end in (x.source, x.target):
            _require_sif_t(end, bound)
        report = check_family(x, x.source, x.target, True, bound=bound)
        if not report.passed:
            v = report.violations[0]
            raise ArtifactError("E_TYPE", f"C needs a truth-respecting family; it fails {v.axiom}", v.witness)
        return Morphism("global", x.source, x.target, x.rel, x.source_ref, x.target_ref)
    if not isinstance(x, Frame):
        raise ArtifactError("E_TYPE", f"C expects a frame, got {type(x).__name__}")
    _require_sif_t(x, bound)
    return CSL(x)


def _require_sif_t(f: Frame, bound: int) -> None:
    if f.truth is None:
        raise ArtifactError("E_NO_TRUTH", "C needs frames with a truth token")
    report = check_frame(f, True, True, bound=bound)
    if not report.passed:
        v = report.violations[0]
        raise ArtifactError("E_TYPE", f"C needs a strong frame with truth; it fails {v.axiom}", v.witness)


def apply_E(x):
    """Logics (as tables or frame-backed) to frames; global relations to families."""
    if isinstance(x, CSL):
        return table_frame(x.table)
    if isinstance(x, AtomTable):
        return table_frame(x)
    if isinstance(x, Morphism):
        if x.kind != "global":
            raise ArtifactError("E_TYPE", f"E acts on global relations, got a {x.kind}")
        src = x.source
        top = src.truth
        rel = {
            (i, s, b)
            for i in src.tokens
            for s in src.con[i]
            for b in x.image(i, s or frozenset((top,)))
        }
        return Morphism("family", x.source, x.target, frozenset(rel), x.source_ref, x.target_ref)
    raise ArtifactError("E_TYPE", f"E expects a logic or a global relation, got {type(x).__name__}")


def _stage_con(t: AtomTable, p: Token) -> frozenset:
    """Con_p = {{p}} ∪ {X ⊆ P_p : p ⊢^p x for all x ∈ X}."""
    from .tokens import powerset

    reach = t.derived(p, frozenset((p,))) & t.stages[p]
    return frozenset(powerset(reach)) | {frozenset((p,))}


def table_frame(t: AtomTable) -> Frame:
    con = {p: _stage_con(t, p) for p in t.atoms}
    ent = frozenset((p, x, q) for p in t.atoms for x in con[p] for q in t.derived(p, x))
    return Frame(t.atoms, con, ent, t.top)


def global_derives(g: Morphism, stage: Token, gamma: frozenset, phi: Formula) -> bool:
    """Γ |∼^p φ, answered from the relation table by flattening."""
    if g.kind != "global":
        raise ArtifactError("E_TYPE", f"expected a global relation, got a {g.kind}")
    src = g.source
    if stage not in src.tokens:
        raise ArtifactError("E_UNKNOWN_TOKEN", f"{stage} is not an atom of the source logic", (stage,))
    _check_stage(src.entailed(stage, frozenset((stage,))), Sequent(stage, gamma, phi))
    x = antecedent_atoms(gamma, src.truth)
    return x in src.con[stage] and flatten(phi) <= g.image(stage, x)


def compose_global(g: Morphism, h: Morphism, bound: int = DEFAULT_BOUND) -> Morphism:
    if g.kind != "global" or h.kind != "global":
        raise ArtifactError("E_TYPE", "compose_global needs two global relations")
    return compose(g, h, bound)


# ---------------------------------------------------------------- table checks


def check_csl_table(t: AtomTable, *, all_witnesses: bool = False, bound: int = DEFAULT_BOUND) -> Report:
    """Check a table against the calculus rules, then its frame as a safety net."""
    budget = Budget(bound)
    atoms = sorted(t.atoms)
    top = t.top
    der = t.derived
    keys = {p: t.keys(p) for p in atoms}

    def admissible(p: Token, x: frozenset) -> bool:
        return x == frozenset((p,)) or x <= t.stages[p]

    def stratification() -> Iterator[Finding]:
        for p in atoms:
            own = der(p, frozenset((p,)))
            for q in sorted(t.stages[p] - own):
                yield (p, frozenset((p,)), q), f"{q} ∈ P_{p} but {p} ⊬^{p} {q}"
            for x in keys[p]:
                for q in sorted(der(p, x) - t.stages[p]):
                    yield (p, x, q), f"{show_set(x)} ⊢^{p} {q} but {q} ∉ P_{p}"
                if not admissible(p, x):
                    yield (p, x, min(der(p, x))), f"antecedent {show_set(x)} is neither {{{p}}} nor inside P_{p}"

    def upward_stages() -> list:
        return [(q, p) for q in atoms for p in sorted(der(q, frozenset((q,))))]

    def stage_inclusion() -> Iterator[Finding]:
        for q, p in upward_stages():
            for r in sorted(t.stages[p] - t.stages[q]):
                yield (q, p, r), f"{q} ⊢^{q} {p} but {r} ∈ P_{p} is not in P_{q}"

    def transfer() -> Iterator[Finding]:
        for q, p in upward_stages():
            for x in keys[p]:
                for r in sorted(der(p, x) - der(q, x)):
                    yield (q, p, x, r), f"{q} ⊢^{q} {p} and {show_set(x)} ⊢^{p} {r} but not ⊢^{q}"

    def truth_rule() -> Iterator[Finding]:
        from .tokens import powerset

        for p in atoms:
            candidates = [frozenset((p,))] + [x for x in powerset(t.stages[p]) if x]
            budget.spend(len(candidates))
            for x in sorted_sets(set(candidates)):
                if top not in der(p, x):
                    yield (p, x, top), f"{show_set(x)} ⊬^{p} {top}"

    def weakening() -> Iterator[Finding]:
        for p in atoms:
            for x in keys[p]:
                if not x <= t.stages[p]:
                    continue
                covers = [x | {y} for y in sorted(t.stages[p] - x)]
                if x == frozenset((top,)):
                    covers += [frozenset((y,)) for y in sorted(t.stages[p]) if y != top]
                for bigger in covers:
                    budget.spend()
                    for q in sorted(der(p, x) - der(p, bigger)):
                        yield (p, x, bigger, q), f"{show_set(x)} ⊢^{p} {q} but {show_set(bigger)} ⊬^{p} {q}"

    def cut() -> Iterator[Finding]:
        for p in atoms:
            for x in keys[p]:
                dx = der(p, x)
                for y in keys[p]:
                    if y <= dx:
                        budget.spend()
                        for r in sorted(der(p, y) - dx):
                            yield (p, x, y, r), f"{show_set(x)} ⊢^{p} ⋀{show_set(y)} ⊢^{p} {r} but {show_set(x)} ⊬^{p} {r}"

    def sint() -> Iterator[Finding]:
        for p, x, dx in _sint_failures(t, budget):
            yield (p, x, dx), f"no r ∈ P_{p} with {show_set(x)} ⊢^{p} r and r ⊢^r ⋀{show_set(dx)}"

    rb = ReportBuilder(all_witnesses)
    rb.run("stratification", stratification())
    rb.run("stage-inclusion", stage_inclusion())
    rb.run("transfer", transfer())
    rb.run("(R⊤)", truth_rule())
    rb.run("(W)", weakening())
    rb.run("(Cut)", cut())
    rb.run("(SINT)", sint())
    report = rb.build()
    if report.passed:
        frame_report = check_frame(table_frame(t), True, True, all_witnesses=all_witnesses, bound=bound)
        if not frame_report.passed:
            from .axioms import Violation

            return Report(tuple(Violation(f"frame:{v.axiom}", v.witness, v.message) for v in frame_report.violations))
    return report


def _sint_failures(t: AtomTable, budget: Budget) -> Iterator[tuple]:
    for p in sorted(t.atoms):
        for x in t.keys(p):
            dx = t.derived(p, x)
            if not dx:
                continue
            cands = sorted(dx & t.stages[p])
            budget.spend(len(cands))
            if not any(dx <= t.derived(r, frozenset((r,))) for r in cands):
                yield p, x, dx


def _int_failures(t: AtomTable, budget: Budget) -> Iterator[tuple]:
    for p in sorted(t.atoms):
        for x in t.keys(p):
            dx = t.derived(p, x)
            if not dx:
                continue
            found = False
            for r in sorted(dx & t.stages[p]):
                for z in t.keys(r):
                    budget.spend()
                    if z <= t.stages[r] and z <= dx and dx <= t.derived(r, z):
                        found = True
                        break
                if found:
                    break
            if not found:
                yield p, x, dx


def verify_logic_metatheorems(
    logic: Union[CSL, AtomTable], *, all_witnesses: bool = False, bound: int = DEFAULT_BOUND
) -> Report:
    """b1: bar rules; b2: inverse cut; b3: (INT) and (SINT) agree and hold."""
    budget = Budget(bound)
    t = logic.table if isinstance(logic, CSL) else logic
    csl = logic if isinstance(logic, CSL) else None
    top = t.top

    def b1() -> Iterator[Finding]:
        if csl is None:
            return
        for p in sorted(t.atoms):
            stage = t.stages[p]
            goals = [AtomF(q) for q in sorted(stage)] + ([big_and(stage, top)] if stage else [])
            for x in sorted_sets(csl.frame.con[p]):
                if not x or not (x <= stage or x == frozenset((p,))):
                    continue
                forms = _groupings(x, top)
                for phi in goals:
                    budget.spend(len(forms))
                    answers = {derives(csl, Sequent(p, g, phi)) for g in forms}
                    if len(answers) > 1:
                        yield (p, x, flatten(phi)), f"groupings of {show_set(x)} disagree on {phi} at {p}"

    def b2() -> Iterator[Finding]:
        from .tokens import powerset

        for p in sorted(t.atoms):
            subsets = powerset(t.stages[p])
            for x in t.keys(p):
                dx = t.derived(p, x)
                if not dx:
                    continue
                budget.spend(len(subsets))
                if not any(z <= dx and dx <= t.derived(p, z) for z in subsets):
                    yield (p, x, dx), f"no φ with {show_set(x)} ⊢^{p} φ ⊢^{p} ⋀{show_set(dx)}"

    def b3() -> Iterator[Finding]:
        sint = {(p, x) for p, x, _ in _sint_failures(t, budget)}
        int_ = {(p, x) for p, x, _ in _int_failures(t, budget)}
        for p, x in sorted(sint | int_, key=lambda k: (k[0], set_key(k[1]))):
            which = "both fail" if (p, x) in sint and (p, x) in int_ else ("(SINT) fails" if (p, x) in sint else "(INT) fails")
            yield (p, x, t.derived(p, x)), f"interpolation at {show_set(x)} ⊢^{p} ⋀{show_set(t.derived(p, x))}: {which}"

    rb = ReportBuilder(all_witnesses)
    rb.run("b1", b1())
    rb.run("b2", b2())
    rb.run("b3", b3())
    return rb.build()


def _groupings(x: frozenset, top: Token) -> list:
    """Γ̄ itself, {⋀Γ̄}, and a two-part regrouping of the same atoms."""
    items = sorted(x)
    out = [frozenset(AtomF(a) for a in items), frozenset((big_and(items, top),))]
    if len(items) > 1:
        out.append(frozenset((AtomF(items[0]), big_and(items[1:], top))))
    return out


def format_steps(steps: list) -> str:
    return "".join(f"{n + 1:3}. {s}\n" for n, s in enumerate(steps))


__all__ = [
    "AtomF",
    "And",
    "Formula",
    "CSL",
    "Sequent",
    "Step",
    "AtomTable",
    "flatten",
    "big_and",
    "depth",
    "derives",
    "derivation",
    "replay",
    "parse_formula",
    "parse_antecedent",
    "self_antecedent",
    "table_of",
    "table_frame",
    "apply_C",
    "apply_E",
    "global_derives",
    "compose_global",
    "check_csl_table",
    "verify_logic_metatheorems",
    "format_steps",
    "fmt",
]
