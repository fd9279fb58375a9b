"""Exhaustive axiom checks for systems, frames, mappings and families.

Every check walks the extensional tables in canonical order and reports the
first counterexample per axiom (or all of them with ``all_witnesses``).
Existential conditions over "all finite F entailed by X" are evaluated at the
maximal entailed set, which is exact because their conclusions are monotone.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from typing import Optional

from .errors import DEFAULT_BOUND, ArtifactError, Budget
from .model import Frame, InfoSystem, Morphism, members_within
from .tokens import Atom, Pair, SetTok, Token, set_key, show_set, sorted_sets

Finding = tuple[tuple, str]


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    message: str

    def describe(self) -> str:
        return f"{self.axiom}: {self.message}"


def _witness_key(w) -> tuple:
    """A total sort key for witnesses mixing tokens, sets, stages and indices."""
    if isinstance(w, (Atom, SetTok, Pair)):
        return (1, w)
    if isinstance(w, frozenset):
        return (2, set_key(w))
    if isinstance(w, tuple):
        return (3, tuple(_witness_key(x) for x in w))
    if w is None:
        return (-1,)
    return (0, w)


@dataclass(frozen=True)
class Report:
    violations: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def axioms(self) -> frozenset:
        return frozenset(v.axiom for v in self.violations)

    def first(self, axiom: str) -> Optional[Violation]:
        return next((v for v in self.violations if v.axiom == axiom), None)

    def __bool__(self) -> bool:
        return self.passed


class ReportBuilder:
    def __init__(self, all_witnesses: bool = False) -> None:
        self.all_witnesses = all_witnesses
        self.found: list[Violation] = []

    def run(self, axiom: str, findings: Iterable[Finding]) -> None:
        for witness, message in findings:
            self.found.append(Violation(axiom, witness, message))
            if not self.all_witnesses:
                break

    def build(self) -> Report:
        ordered = sorted(self.found, key=lambda v: (v.axiom, _witness_key(v.witness)))
        return Report(tuple(ordered))


def fmt(x) -> str:
    if isinstance(x, frozenset):
        return show_set(x)
    if x is None:
        return "-"
    if type(x) is tuple:
        return "(" + ", ".join(fmt(e) for e in x) + ")"
    return str(x)


def format_report(report: Report) -> str:
    if report.passed:
        return "pass\n"
    lines = ["fail"]
    for v in report.violations:
        lines.append(f"  {v.axiom} ({', '.join(fmt(x) for x in v.witness)}): {v.message}")
    return "\n".join(lines) + "\n"


def singleton(t: Token) -> frozenset:
    return frozenset((t,))


class Reach:
    """Memoized union of ``image(Y)`` over members Y of a family inside a set.

    Many (stage, set) pairs share the same entailed set, so cut-style checks
    first compare against this union and only enumerate members to extract a
    witness when it overshoots.
    """

    def __init__(self, budget: Budget) -> None:
        self.budget = budget
        self.cache: dict = {}

    def __call__(self, key, family: frozenset, avail: frozenset, image: Callable) -> frozenset:
        k = (key, avail)
        if k not in self.cache:
            out: set = set()
            for y in members_within(family, avail):
                self.budget.spend()
                out |= image(y)
            self.cache[k] = frozenset(out)
        return self.cache[k]


# ---------------------------------------------------------------- systems


def check_system(
    s: InfoSystem, level: str = "scis", *, all_witnesses: bool = False, bound: int = DEFAULT_BOUND
) -> Report:
    """Verify the (simplified) continuous information system conditions."""
    if level not in ("scis", "cis"):
        raise ArtifactError("E_TYPE", f"system level must be scis or cis, not {level!r}")
    budget = Budget(bound)
    con = sorted_sets(s.con)
    ent = s.entailed

    def tokens_consistent() -> Iterator[Finding]:
        for a in sorted(s.tokens):
            if singleton(a) not in s.con:
                yield (a,), f"{{{a}}} is not consistent"

    def closed_under_adjunction() -> Iterator[Finding]:
        for x in con:
            for a in sorted(ent(x)):
                if x | {a} not in s.con:
                    yield (x, a), f"{show_set(x)} entails {a} but {show_set(x | {a})} is not consistent"

    def superset_weakening() -> Iterator[Finding]:
        for x in con:
            for y in con:
                if x < y:
                    budget.spend()
                    for a in sorted(ent(x) - ent(y)):
                        yield (x, y, a), f"{show_set(x)} entails {a} but its superset {show_set(y)} does not"

    reach = Reach(budget)

    def cut() -> Iterator[Finding]:
        for x in con:
            tx = ent(x)
            if reach(None, s.con, tx, ent) <= tx:
                continue
            for y in members_within(s.con, tx):
                for a in sorted(ent(y) - tx):
                    yield (x, y, a), f"{show_set(x)} entails {show_set(y)} which entails {a}, but not {show_set(x)}"

    def interpolation() -> Iterator[Finding]:
        for x in con:
            tx = ent(x)
            for a in sorted(tx - reach(None, s.con, tx, ent)):
                yield (x, a), f"no consistent Z with {show_set(x)} entailing Z and Z entailing {a}"

    def entailed_sets_consistent() -> Iterator[Finding]:
        # At the maximal F = ent(x), a witness Z ⊇ F with X ⊢ Z must equal F.
        for x in con:
            f = ent(x)
            if f and f not in s.con:
                yield (x, f), f"{show_set(x)} entails {show_set(f)}, which has no consistent superset it entails"

    rb = ReportBuilder(all_witnesses)
    rb.run("(1)", tokens_consistent())
    if level == "cis":
        rb.run("(2)", closed_under_adjunction())
    rb.run("(3)", superset_weakening())
    rb.run("(4)", cut())
    rb.run("(5)", interpolation())
    rb.run("(6)", entailed_sets_consistent())
    return rb.build()


# ---------------------------------------------------------------- frames


def derived_R(f: Frame) -> frozenset:
    """The pairs (i, j) with {i} ∈ Con_j."""
    return f.relation_R


def check_frame(
    f: Frame,
    require_strong: bool = False,
    require_truth: bool = False,
    *,
    all_witnesses: bool = False,
    bound: int = DEFAULT_BOUND,
) -> Report:
    """Verify the eight frame conditions, plus (S) and (T) when requested."""
    if require_truth and f.truth is None:
        raise ArtifactError("E_NO_TRUTH", "a truth token is required but none is declared")
    budget = Budget(bound)
    tokens = sorted(f.tokens)
    con = {i: sorted_sets(f.con[i]) for i in tokens}
    ent = f.entailed
    R = sorted(f.relation_R)

    def self_consistency() -> Iterator[Finding]:
        for i in tokens:
            if singleton(i) not in f.con[i]:
                yield (i,), f"{{{i}}} is not in Con_{i}"

    def preservation_failures(i: Token) -> Iterator[Finding]:
        for x in con[i]:
            for t in sorted(x):
                y = x - {t}
                if y not in f.con[i]:
                    yield (i, y, x), f"{show_set(y)} ⊆ {show_set(x)} ∈ Con_{i} but {show_set(y)} ∉ Con_{i}"

    def consistency_preservation() -> Iterator[Finding]:
        for i in tokens:
            yield from preservation_failures(i)

    def soundness() -> Iterator[Finding]:
        for i in tokens:
            for x in con[i]:
                y = ent(i, x)
                if y and y not in f.con[i]:
                    yield (i, x, y), f"{show_set(x)} ⊨_{i} {show_set(y)} but {show_set(y)} ∉ Con_{i}"

    def weakening() -> Iterator[Finding]:
        for i in tokens:
            downward_closed = next(preservation_failures(i), None) is None
            for y in con[i]:
                if downward_closed:
                    smaller = [y - {t} for t in sorted(y)]
                else:
                    smaller = [x for x in con[i] if x < y]
                for x in smaller:
                    budget.spend()
                    for a in sorted(ent(i, x) - ent(i, y)):
                        yield (i, x, y, a), f"{show_set(x)} ⊨_{i} {a} but {show_set(y)} ⊭_{i} {a}"

    reach = Reach(budget)
    interpolant = Interpolants(f, budget)

    def cut() -> Iterator[Finding]:
        for i in tokens:
            for x in con[i]:
                tx = ent(i, x)
                if reach(i, f.con[i], tx, lambda y: ent(i, y)) <= tx:
                    continue
                for y in members_within(f.con[i], tx):
                    for a in sorted(ent(i, y) - tx):
                        yield (i, x, y, a), f"{show_set(x)} ⊨_{i} {show_set(y)} ⊨_{i} {a} but {show_set(x)} ⊭_{i} {a}"

    def consistency_transfer() -> Iterator[Finding]:
        for i, j in R:
            for x in con[i]:
                if x not in f.con[j]:
                    yield (i, j, x), f"{i} R {j} but {show_set(x)} ∈ Con_{i} is not in Con_{j}"

    def entailment_transfer() -> Iterator[Finding]:
        for i, j in R:
            for x in con[i]:
                if x in f.con[j]:
                    for a in sorted(ent(i, x) - ent(j, x)):
                        yield (i, j, x, a), f"{i} R {j} and {show_set(x)} ⊨_{i} {a} but not ⊨_{j}"

    def interpolation() -> Iterator[Finding]:
        for i in tokens:
            for x in con[i]:
                y = ent(i, x)
                if y and interpolant(y, y) is None:
                    yield (i, x, y), f"no e, Z ∈ Con_e with {show_set(x)} ⊨_{i} {{e}} ∪ Z and Z ⊨_e {show_set(y)}"

    def strong() -> Iterator[Finding]:
        for i in tokens:
            own = ent(i, singleton(i)) if singleton(i) in f.con[i] else frozenset()
            for x in con[i]:
                if x != singleton(i) and not x <= own:
                    yield (i, x), f"{show_set(x)} ∈ Con_{i} but {{{i}}} ⊭_{i} {show_set(x)}"

    def truth() -> Iterator[Finding]:
        t = f.truth
        for i in tokens:
            if t not in ent(i, frozenset()):
                yield (i,), f"∅ ⊭_{i} {t}"

    rb = ReportBuilder(all_witnesses)
    rb.run("self-consistency", self_consistency())
    rb.run("consistency-preservation", consistency_preservation())
    rb.run("soundness", soundness())
    rb.run("weakening", weakening())
    rb.run("cut", cut())
    rb.run("consistency-transfer", consistency_transfer())
    rb.run("entailment-transfer", entailment_transfer())
    rb.run("interpolation", interpolation())
    if require_strong:
        rb.run("(S)", strong())
    if require_truth:
        rb.run("(T)", truth())
    return rb.build()


class Interpolants:
    """Memoized search for e, Z ∈ Con_e with {e} ∪ Z ⊆ avail and Z ⊨_e goal."""

    def __init__(self, f: Frame, budget: Budget) -> None:
        self.f = f
        self.budget = budget
        self.cache: dict = {}

    def __call__(self, avail: frozenset, goal: frozenset) -> Optional[tuple]:
        key = (avail, goal)
        if key not in self.cache:
            self.cache[key] = self._search(avail, goal)
        return self.cache[key]

    def _search(self, avail: frozenset, goal: frozenset) -> Optional[tuple]:
        for e in sorted(avail):
            for z in members_within(self.f.con[e], avail):
                self.budget.spend()
                if goal <= self.f.entailed(e, z):
                    return e, z
        return None


def verify_metatheorems(f: Frame, *, all_witnesses: bool = False, bound: int = DEFAULT_BOUND) -> Report:
    """Check the consequences every valid frame must satisfy.

    m1: X ⊨_j i implies {i} ∈ Con_j. m2: the strong cut through another
    witness. m3a/m3b: local interpolation and the consistency witness.
    """
    budget = Budget(bound)
    tokens = sorted(f.tokens)
    ent = f.entailed
    reach = Reach(budget)
    between: dict = {}

    def m1() -> Iterator[Finding]:
        for j in tokens:
            for x in sorted_sets(f.con[j]):
                for i in sorted(ent(j, x)):
                    if singleton(i) not in f.con[j]:
                        yield (j, x, i), f"{show_set(x)} ⊨_{j} {i} but {{{i}}} ∉ Con_{j}"

    def m2() -> Iterator[Finding]:
        for i in tokens:
            for x in sorted_sets(f.con[i]):
                tx = ent(i, x)
                for j in sorted(tx):
                    if reach(j, f.con[j], tx, lambda y, j=j: ent(j, y)) <= tx:
                        continue
                    for y in members_within(f.con[j], tx):
                        for a in sorted(ent(j, y) - tx):
                            yield (i, x, j, y, a), f"{show_set(x)} ⊨_{i} {{{j}}} ∪ {show_set(y)} and {show_set(y)} ⊨_{j} {a}"

    def m3a() -> Iterator[Finding]:
        for i in tokens:
            for x in sorted_sets(f.con[i]):
                y = ent(i, x)
                if not y:
                    continue
                if (i, y) not in between:
                    mids = members_within(f.con[i], y)
                    budget.spend(len(mids))
                    between[i, y] = any(y <= ent(i, z) for z in mids)
                if not between[i, y]:
                    yield (i, x, y), f"no Z ∈ Con_{i} between {show_set(x)} and {show_set(y)}"

    def m3b() -> Iterator[Finding]:
        for i in tokens:
            for x in sorted_sets(f.con[i]):
                y = ent(i, x)
                if y and not any(y in f.con[e] for e in y):
                    yield (i, x, y), f"no e with {show_set(x)} ⊨_{i} e and {show_set(y)} ∈ Con_e"

    rb = ReportBuilder(all_witnesses)
    rb.run("m1", m1())
    rb.run("m2", m2())
    rb.run("m3a", m3a())
    rb.run("m3b", m3b())
    return rb.build()


# ---------------------------------------------------------------- morphisms


def _require_endpoints(h: Morphism, kind: str, source, target) -> None:
    if h.kind != kind:
        raise ArtifactError("E_TYPE", f"expected a {kind} morphism, got {h.kind}")
    if h.source != source or h.target != target:
        raise ArtifactError("E_TYPE", "morphism endpoints do not match the given structures")


def check_mapping(
    h: Morphism,
    s: InfoSystem,
    s2: InfoSystem,
    *,
    all_witnesses: bool = False,
    bound: int = DEFAULT_BOUND,
) -> Report:
    """Verify the approximable-mapping conditions, interpolation in split form."""
    _require_endpoints(h, "mapping", s, s2)
    budget = Budget(bound)
    con = sorted_sets(s.con)

    reach = Reach(budget)

    def img(x: frozenset) -> frozenset:
        return h.image(None, x)

    def right_cut() -> Iterator[Finding]:
        for x in con:
            hx = img(x)
            if reach("target", s2.con, hx, s2.entailed) <= hx:
                continue
            for y in members_within(s2.con, hx):
                for b in sorted(s2.entailed(y) - hx):
                    yield (x, y, b), f"{show_set(x)} H {show_set(y)} ⊢′ {b} but not {show_set(x)} H {b}"

    def weakening() -> Iterator[Finding]:
        for small in con:
            for big in con:
                if small < big:
                    budget.spend()
                    for b in sorted(img(small) - img(big)):
                        yield (small, big, b), f"{show_set(small)} H {b} but not {show_set(big)} H {b}"

    def left_cut() -> Iterator[Finding]:
        for x in con:
            if reach("source", s.con, s.entailed(x), img) <= img(x):
                continue
            for mid in members_within(s.con, s.entailed(x)):
                for b in sorted(img(mid) - img(x)):
                    yield (x, mid, b), f"{show_set(x)} ⊢ {show_set(mid)} H {b} but not {show_set(x)} H {b}"

    def left_interpolation() -> Iterator[Finding]:
        for x in con:
            f = img(x)
            if not f:
                continue
            mids = members_within(s.con, s.entailed(x))
            budget.spend(len(mids))
            if not any(f <= img(z) for z in mids):
                yield (x, f), f"no Z ∈ CON with {show_set(x)} ⊢ Z and Z H {show_set(f)}"

    def right_interpolation() -> Iterator[Finding]:
        for x in con:
            f = img(x)
            if not f:
                continue
            mids = members_within(s2.con, f)
            budget.spend(len(mids))
            if not any(f <= s2.entailed(z) for z in mids):
                yield (x, f), f"no Z′ ∈ CON′ with {show_set(x)} H Z′ and Z′ ⊢′ {show_set(f)}"

    def consistent_image() -> Iterator[Finding]:
        for x in con:
            f = img(x)
            if f and f not in s2.con:
                yield (x, f), f"{show_set(x)} H {show_set(f)}, which has no consistent superset it maps to"

    rb = ReportBuilder(all_witnesses)
    rb.run("(1)", right_cut())
    rb.run("(2)", weakening())
    rb.run("(3)", left_cut())
    rb.run("(4-left)", left_interpolation())
    rb.run("(4-right)", right_interpolation())
    rb.run("(5)", consistent_image())
    return rb.build()


def check_family(
    h: Morphism,
    f: Frame,
    f2: Frame,
    require_truth_respect: bool = False,
    *,
    all_witnesses: bool = False,
    bound: int = DEFAULT_BOUND,
) -> Report:
    """Verify the approximable-family conditions (a)-(e), optionally truth respect."""
    if h.kind not in ("family", "global"):
        raise ArtifactError("E_TYPE", f"expected a family, got {h.kind}")
    _require_endpoints(h, h.kind, f, f2)
    if require_truth_respect and (f.truth is None or f2.truth is None):
        raise ArtifactError("E_NO_TRUTH", "truth respect needs truth tokens on both frames")
    budget = Budget(bound)
    tokens = sorted(f.tokens)
    con = {i: sorted_sets(f.con[i]) for i in tokens}
    img = h.image
    reach = Reach(budget)
    interpolant = Interpolants(f2, budget)
    left_found: dict = {}

    def right_cut() -> Iterator[Finding]:
        for i in tokens:
            for x in con[i]:
                hx = img(i, x)
                for k in sorted(hx):
                    if reach(("target", k), f2.con[k], hx, lambda y, k=k: f2.entailed(k, y)) <= hx:
                        continue
                    for y in members_within(f2.con[k], hx):
                        for b in sorted(f2.entailed(k, y) - hx):
                            yield (i, x, k, y, b), (
                                f"{show_set(x)} H_{i} {{{k}}} ∪ {show_set(y)} and {show_set(y)} ⊨′_{k} {b}, "
                                f"but not {show_set(x)} H_{i} {b}"
                            )

    def weakening() -> Iterator[Finding]:
        for i in tokens:
            downward_closed = all(big - {t} in f.con[i] for big in con[i] for t in big)
            for big in con[i]:
                if downward_closed:
                    smaller = [big - {t} for t in sorted(big)]
                else:
                    smaller = [x for x in con[i] if x < big]
                for small in smaller:
                    for b in sorted(img(i, small) - img(i, big)):
                        yield (i, small, big, b), f"{show_set(small)} H_{i} {b} but not {show_set(big)} H_{i} {b}"

    def left_cut() -> Iterator[Finding]:
        for i in tokens:
            for x in con[i]:
                hx = img(i, x)
                tx = f.entailed(i, x)
                if reach(("source", i), f.con[i], tx, lambda y, i=i: img(i, y)) <= hx:
                    continue
                for mid in members_within(f.con[i], tx):
                    for b in sorted(img(i, mid) - hx):
                        yield (i, x, mid, b), f"{show_set(x)} ⊨_{i} {show_set(mid)} H_{i} {b} but not {show_set(x)} H_{i} {b}"

    def transfer() -> Iterator[Finding]:
        for i, j in sorted(f.relation_R):
            for x in con[i]:
                if x in f.con[j]:
                    for b in sorted(img(i, x) - img(j, x)):
                        yield (i, j, x, b), f"{i} R {j} and {show_set(x)} H_{i} {b} but not H_{j}"

    def left_interpolation() -> Iterator[Finding]:
        for i in tokens:
            for x in con[i]:
                goal = img(i, x)
                if not goal:
                    continue
                avail = f.entailed(i, x)
                if (avail, goal) not in left_found:
                    left_found[avail, goal] = any(
                        goal <= img(c, u)
                        for c in sorted(avail)
                        for u in members_within(f.con[c], avail)
                        if budget.spend() is None
                    )
                if not left_found[avail, goal]:
                    yield (i, x, goal), f"no c, U with {show_set(x)} ⊨_{i} {{c}} ∪ U and U H_c {show_set(goal)}"

    def right_interpolation() -> Iterator[Finding]:
        for i in tokens:
            for x in con[i]:
                goal = img(i, x)
                if goal and interpolant(goal, goal) is None:
                    yield (i, x, goal), f"no e, V with {show_set(x)} H_{i} {{e}} ∪ V and V ⊨′_e {show_set(goal)}"

    def truth_respect() -> Iterator[Finding]:
        if f2.truth not in img(f.truth, frozenset()):
            yield (frozenset(), f2.truth), f"∅ H_{f.truth} {f2.truth} is missing"

    rb = ReportBuilder(all_witnesses)
    rb.run("(a)", right_cut())
    rb.run("(b)", weakening())
    rb.run("(c)", left_cut())
    rb.run("(d)", transfer())
    rb.run("(e-left)", left_interpolation())
    rb.run("(e-right)", right_interpolation())
    if require_truth_respect:
        rb.run("truth-respect", truth_respect())
    return rb.build()
