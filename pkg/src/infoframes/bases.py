"""Abstract bases, approximable relations, finite rounded-ideal completion and DOT export."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement

from .axioms import Finding, Report, ReportBuilder, check_system
from .errors import DEFAULT_BOUND, ArtifactError, Budget
from .model import InfoSystem
from .tokens import SetTok, Token, set_key, show_set

COMPLETION_BOUND = 14


@dataclass(frozen=True)
class AbstractBasis:
    """A carrier with a relation ``prec`` of pairs (x, y) meaning x ≺ y."""

    carrier: frozenset
    prec: frozenset

    def __post_init__(self) -> None:
        carrier = frozenset(self.carrier)
        prec = frozenset((x, y) for x, y in self.prec)
        for x, y in prec:
            for t in (x, y):
                if t not in carrier:
                    raise ArtifactError("E_UNKNOWN_TOKEN", f"{t} in prec is not in the carrier", (t,))
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "prec", prec)

    @cached_property
    def below(self) -> dict:
        """x ↦ {m : m ≺ x}."""
        out: dict = {x: set() for x in self.carrier}
        for m, x in self.prec:
            out[x].add(m)
        return {x: frozenset(v) for x, v in out.items()}

    @cached_property
    def above(self) -> dict:
        """m ↦ {x : m ≺ x}."""
        out: dict = {x: set() for x in self.carrier}
        for m, x in self.prec:
            out[m].add(x)
        return {x: frozenset(v) for x, v in out.items()}

    def upper_bounds(self, m: frozenset) -> frozenset:
        """All v with M ≺ v; every element for M = ∅."""
        out = self.carrier
        for x in m:
            out &= self.above[x]
        return out


# ---------------------------------------------------------------- checks


def _interpolation_failures(b: AbstractBasis, budget: Budget) -> Iterator[Finding]:
    # The conclusion is antitone in M, so the maximal M = ↓x decides every M ≺ x.
    for x in sorted(b.carrier):
        m = b.below[x]
        budget.spend(len(m) + 1)
        if not (b.upper_bounds(m) & m):
            yield (m, x), f"no v with {show_set(m)} ≺ v ≺ {x}"


def check_abstract_basis(
    b: AbstractBasis, *, all_witnesses: bool = False, bound: int = DEFAULT_BOUND
) -> Report:
    budget = Budget(bound)

    def transitivity() -> Iterator[Finding]:
        for x, y in sorted(b.prec):
            for z in sorted(b.above[y]):
                budget.spend()
                if (x, z) not in b.prec:
                    yield (x, y, z), f"{x} ≺ {y} ≺ {z} but not {x} ≺ {z}"

    rb = ReportBuilder(all_witnesses)
    rb.run("transitivity", transitivity())
    rb.run("interpolation", _interpolation_failures(b, budget))
    return rb.build()


def identity_relation(b: AbstractBasis) -> frozenset:
    """The identity approximable relation on ``b``: u R v iff v ≺ u."""
    return frozenset((u, v) for v, u in b.prec)


def check_approx_relation(
    r: frozenset, b: AbstractBasis, c: AbstractBasis, *, all_witnesses: bool = False, bound: int = DEFAULT_BOUND
) -> Report:
    """The four approximable-relation conditions for r ⊆ B × C."""
    budget = Budget(bound)
    for u, v in r:
        if u not in b.carrier or v not in c.carrier:
            raise ArtifactError("E_UNKNOWN_TOKEN", f"pair ({u}, {v}) leaves the carriers", (u, v))
    image: dict = {u: set() for u in b.carrier}
    for u, v in r:
        image[u].add(v)

    def c1() -> Iterator[Finding]:
        for u, v in sorted(r):
            for w in sorted(c.below[v] - image[u]):
                budget.spend()
                yield (u, v, w), f"{u} R {v} and {w} ≺ {v} but not {u} R {w}"

    def c2() -> Iterator[Finding]:
        for u in sorted(b.carrier):
            m = frozenset(image[u])
            budget.spend(len(m) + 1)
            if not (c.upper_bounds(m) & m):
                yield (u, m), f"no w with {u} R w and {show_set(m)} ≺ w"

    def c3() -> Iterator[Finding]:
        for u, v in sorted(r):
            for u2 in sorted(b.above[u]):
                budget.spend()
                if v not in image[u2]:
                    yield (u2, u, v), f"{u} ≺ {u2} and {u} R {v} but not {u2} R {v}"

    def c4() -> Iterator[Finding]:
        for u, v in sorted(r):
            budget.spend(len(b.below[u]))
            if not any(v in image[w] for w in b.below[u]):
                yield (u, v), f"no w ≺ {u} with w R {v}"

    rb = ReportBuilder(all_witnesses)
    rb.run("(1)", c1())
    rb.run("(2)", c2())
    rb.run("(3)", c3())
    rb.run("(4)", c4())
    return rb.build()


# ---------------------------------------------------------------- extraction


def extract_basis(s: InfoSystem, *, validate: bool = True, bound: int = DEFAULT_BOUND) -> AbstractBasis:
    """Consistent sets as elements, X ≺ Y iff Y ⊢ X; interpolation is verified."""
    if not isinstance(s, InfoSystem):
        raise ArtifactError("E_TYPE", f"extract_basis expects a system, got {type(s).__name__}")
    if validate:
        report = check_system(s, "scis", bound=bound)
        if not report.passed:
            v = report.violations[0]
            raise ArtifactError("E_TYPE", f"extract_basis needs a simplified system; it fails {v.axiom}", v.witness)
    carrier = frozenset(SetTok(x) for x in s.con)
    prec = frozenset(
        (SetTok(x), SetTok(y)) for y in s.con for x in s.con if x <= s.entailed(y)
    )
    b = AbstractBasis(carrier, prec)
    for (m, x), _ in _interpolation_failures(b, Budget(bound)):
        raise ArtifactError("E_INTERP_FAIL", f"interpolation fails at {show_set(m)} ≺ {x}", (m, x))
    return b


# ---------------------------------------------------------------- completion


@dataclass(frozen=True)
class FinitePoset:
    """Rounded ideals in canonical order with inclusion and way-below as index pairs."""

    elements: tuple
    leq: frozenset
    way_below: frozenset

    def index(self, ideal: frozenset) -> int:
        return self.elements.index(ideal)


def _ideal_key(ideal: frozenset) -> tuple:
    return (len(ideal), set_key(ideal))


def is_rounded_ideal(b: AbstractBasis, ideal: frozenset) -> bool:
    """Nonempty, downward closed and directed (pairs suffice by transitivity)."""
    if not ideal:
        return False
    if any(not b.below[y] <= ideal for y in ideal):
        return False
    return all(b.upper_bounds(frozenset((x, y))) & ideal for x, y in combinations_with_replacement(sorted(ideal), 2))


def principal_ideal(b: AbstractBasis, x: Token) -> frozenset:
    return b.below[x]


def complete(b: AbstractBasis, *, bound: int = DEFAULT_BOUND) -> FinitePoset:
    """All rounded ideals ordered by inclusion."""
    if len(b.carrier) > COMPLETION_BOUND:
        raise ArtifactError("E_BOUND", f"completion is limited to {COMPLETION_BOUND} basis elements")
    report = check_abstract_basis(b, bound=bound)
    if not report.passed:
        v = report.violations[0]
        raise ArtifactError("E_INTERP_FAIL" if v.axiom == "interpolation" else "E_TYPE", f"not an abstract basis: {v.message}", v.witness)
    budget = Budget(bound)
    items = sorted(b.carrier)
    ideals = []
    for mask in range(1, 1 << len(items)):
        budget.spend()
        cand = frozenset(items[k] for k in range(len(items)) if mask >> k & 1)
        if is_rounded_ideal(b, cand):
            ideals.append(cand)
    ideals.sort(key=_ideal_key)
    n = len(ideals)
    leq = frozenset((i, j) for i in range(n) for j in range(n) if ideals[i] <= ideals[j])
    return FinitePoset(tuple(ideals), leq, way_below_finite(n, leq))


def way_below_finite(n: int, leq: frozenset) -> frozenset:
    """x ≪ y over a finite poset.

    Every directed subset of a finite poset contains its own least upper
    bound, so x ≪ y reduces to x ⊑ y.
    """
    return frozenset(p for p in leq if p[0] < n and p[1] < n)


def check_completion(p: FinitePoset, b: AbstractBasis, *, all_witnesses: bool = False) -> Report:
    """The four approximation properties of ≪, plus finite continuity."""
    n = len(p.elements)
    wb, leq = p.way_below, p.leq
    idx = range(n)
    principal = {}
    for x in sorted(b.carrier):
        ideal = principal_ideal(b, x)
        if ideal in p.elements:
            principal[x] = p.index(ideal)

    def transitive() -> Iterator[Finding]:
        for x, y in sorted(wb):
            for z in idx:
                if (y, z) in wb and (x, z) not in wb:
                    yield (x, y, z), f"ideal {x} ≪ {y} ≪ {z} but not {x} ≪ {z}"

    def approximates() -> Iterator[Finding]:
        for x, y in sorted(wb - leq):
            yield (x, y), f"ideal {x} ≪ {y} but not {x} ⊑ {y}"

    def squeeze() -> Iterator[Finding]:
        for x, y in sorted(wb):
            for u in idx:
                if (u, x) not in leq:
                    continue
                for z in idx:
                    if (y, z) in leq and (u, z) not in wb:
                        yield (u, x, y, z), f"ideal {u} ⊑ {x} ≪ {y} ⊑ {z} but not {u} ≪ {z}"

    def interpolation() -> Iterator[Finding]:
        # Maximal M: everything way below x.
        basis_nodes = sorted(set(principal.values()))
        for x in idx:
            m = [a for a in idx if (a, x) in wb]
            if not any(all((a, v) in wb for a in m) and (v, x) in wb for v in basis_nodes):
                yield (tuple(m), x), f"no principal ideal between the ideals way below {x} and {x}"

    def continuity() -> Iterator[Finding]:
        for x, ideal in enumerate(p.elements):
            parts = [principal.get(t) for t in sorted(ideal)]
            if None in parts:
                yield (x, None), f"ideal {x} has a member whose principal ideal is not rounded"
                continue
            union = frozenset().union(*(p.elements[k] for k in parts))
            if union != ideal:
                yield (x, "union"), f"ideal {x} is not the union of its principal ideals"
            for k in parts:
                if (k, x) not in wb:
                    yield (x, k), f"principal ideal {k} is not way below ideal {x}"

    rb = ReportBuilder(all_witnesses)
    rb.run("transitive", transitive())
    rb.run("approximates", approximates())
    rb.run("squeeze", squeeze())
    rb.run("interpolation", interpolation())
    rb.run("continuity", continuity())
    return rb.build()


# ---------------------------------------------------------------- output


def _node_name(ideal: frozenset) -> str:
    return "{" + " ".join(map(str, sorted(ideal))) + "}"


def hasse_edges(p: FinitePoset) -> list:
    strict = {(i, j) for i, j in p.leq if i != j}
    return sorted(
        (i, j) for i, j in strict if not any((i, k) in strict and (k, j) in strict for k in range(len(p.elements)))
    )


def export_dot(p: FinitePoset, annotate_way_below: bool = False) -> str:
    """DOT digraph of the Hasse diagram; dashed edges mark strict way-below pairs."""
    names = [_node_name(e) for e in p.elements]
    out = ["digraph completion {", "  rankdir=BT;"]
    out += [f'  "{name}";' for name in names]
    out += [f'  "{names[i]}" -> "{names[j]}";' for i, j in hasse_edges(p)]
    if annotate_way_below:
        out += [
            f'  "{names[i]}" -> "{names[j]}" [style=dashed];'
            for i, j in sorted(p.way_below)
            if i != j
        ]
    out.append("}")
    return "\n".join(out) + "\n"


def basis_lines(b: AbstractBasis) -> list:
    out = ["basis {", f"  carrier {show_set(b.carrier)}", "  prec {"]
    for x in sorted(b.carrier):
        if b.above[x]:
            out.append(f"    {x}: {show_set(b.above[x])}")
    out += ["  }", "}"]
    return out


def parse_basis_body(lx) -> AbstractBasis:
    from .document import _keyed_block, _keyword, _token_list

    lx.expect("{")
    _keyword(lx, "carrier")
    carrier = _token_list(lx)
    _keyword(lx, "prec")
    rows = _keyed_block(lx, _token_list, "prec")
    lx.expect("}")
    for x in rows:
        if x not in carrier:
            raise ArtifactError("E_UNKNOWN_TOKEN", f"{x} in prec is not in the carrier", (x,))
    return AbstractBasis(carrier, frozenset((x, y) for x, ys in rows.items() for y in ys))


def basis_of(x, *, bound: int = DEFAULT_BOUND) -> AbstractBasis:
    """A basis from a basis, a system, or a frame (through S)."""
    from .model import Frame

    if isinstance(x, AbstractBasis):
        return x
    if isinstance(x, Frame):
        from .functors import apply_S

        x = apply_S(x)
    return extract_basis(x, bound=bound)


__all__ = [
    "AbstractBasis",
    "FinitePoset",
    "COMPLETION_BOUND",
    "check_abstract_basis",
    "identity_relation",
    "check_approx_relation",
    "extract_basis",
    "is_rounded_ideal",
    "principal_ideal",
    "complete",
    "way_below_finite",
    "check_completion",
    "hasse_edges",
    "export_dot",
    "basis_of",
]
