from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_frame_failures, system_cond6_all_F
from infoframes.axioms import (
    check_family,
    check_frame,
    check_mapping,
    check_system,
    derived_R,
    format_report,
    verify_metatheorems,
)
from infoframes.category import identity_of
from infoframes.corpus import FRAMES, MORPHISMS, STRONG_FRAMES, SYSTEMS, TRUTH_FRAMES, load
from infoframes.errors import ArtifactError
from infoframes.functors import apply_S
from infoframes.model import Frame, InfoSystem, Morphism
from infoframes.tokens import Atom, powerset

E = frozenset
T, a, b, i = Atom("T"), Atom("a"), Atom("b"), Atom("i")


# ---------------------------------------------------------------- systems


def test_S_of_chain_is_a_cis():
    assert check_system(apply_S(load("chain")), "cis").passed


def test_system_with_no_entailment_is_scis():
    s = InfoSystem(E({a}), E({E({a})}), E())
    assert check_system(s, "scis").passed


def test_adjunction_failure_detected_only_at_cis():
    s = InfoSystem(E({a, b}), E({E({a}), E({b})}), E({(E({a}), b), (E({b}), b)}))
    assert check_system(s, "scis").passed
    report = check_system(s, "cis")
    assert report.axioms == {"(2)"}
    assert report.first("(2)").witness == (E({a}), b)


def test_entailment_without_interpolant_fails_scis():
    s = InfoSystem(E({a, b}), E({E({a}), E({b})}), E({(E({a}), b)}))
    report = check_system(s, "scis")
    assert "(5)" in report.axioms
    assert report.first("(5)").witness == (E({a}), b)


def test_missing_singleton_fails_condition_1():
    s = InfoSystem(E({a, b}), E({E({a})}), E())
    assert check_system(s).first("(1)").witness == (b,)


def test_unknown_level_rejected():
    with pytest.raises(ArtifactError) as err:
        check_system(load("sys_flat"), "cif")
    assert err.value.code == "E_TYPE"


@pytest.mark.parametrize("name", SYSTEMS)
def test_corpus_systems_pass(name):
    assert check_system(load(name), "scis").passed


@st.composite
def small_systems(draw):
    toks = [a, b, Atom("c")][: draw(st.integers(1, 3))]
    sets = [x for x in powerset(toks) if x]
    con = E(draw(st.sets(st.sampled_from(sets), min_size=1))) | {E({t}) for t in toks}
    ent = draw(st.sets(st.tuples(st.sampled_from(sorted(con, key=sorted)), st.sampled_from(toks))))
    return InfoSystem(E(toks), con, E(ent))


@settings(max_examples=300, deadline=None)
@given(small_systems())
def test_maximal_set_reduction_of_condition_6(s):
    # Checking only the maximal entailed set agrees with checking every F.
    assert ("(6)" not in check_system(s).axioms) == system_cond6_all_F(s)


# ---------------------------------------------------------------- frames


def test_chain_is_strong_with_truth():
    assert check_frame(load("chain"), True, True).passed


def test_bad_weakening_witness():
    report = check_frame(load("bad_weakening"))
    assert "weakening" in report.axioms
    assert report.first("weakening").witness == (a, E({a}), E({T, a}), a)


def test_wide_is_not_strong():
    wide = load("wide")
    assert check_frame(wide).passed
    report = check_frame(wide, require_strong=True)
    assert report.axioms == {"(S)"}
    assert report.first("(S)").witness == (i, E({b}))


def test_truth_required_but_absent():
    with pytest.raises(ArtifactError) as err:
        check_frame(load("wide"), require_truth=True)
    assert err.value.code == "E_NO_TRUTH"


def test_derived_R_examples():
    assert derived_R(load("unit")) == {(T, T)}
    assert derived_R(load("chain")) == {(T, T), (a, a), (T, a)}
    assert derived_R(load("wide")) == {(i, i), (b, b), (b, i)}


@pytest.mark.parametrize("name", FRAMES)
def test_derived_R_is_reflexive_and_literal(name):
    f = load(name)
    R = derived_R(f)
    assert {(x, x) for x in f.tokens} <= R
    assert R == {(x, y) for x in f.tokens for y in f.tokens if E({x}) in f.con[y]}


@pytest.mark.parametrize("name", FRAMES)
def test_corpus_frames_pass(name):
    f = load(name)
    assert check_frame(f, name in STRONG_FRAMES, name in TRUTH_FRAMES).passed


def _mutations(f: Frame):
    for x in powerset(f.tokens):
        for k in sorted(f.tokens):
            for c in sorted(f.tokens):
                t = (k, x, c)
                if t in f.entails:
                    yield Frame(f.tokens, f.con, f.entails - {t}, f.truth)
                elif x in f.con[k]:
                    yield Frame(f.tokens, f.con, f.entails | {t}, f.truth)


def _replays(f: Frame, axiom: str, w: tuple) -> bool:
    """A reported witness, checked against the raw tables, breaks the cited condition."""
    ent = lambda k, x, ys: x in f.con[k] and all((k, x, y) in f.entails for y in ys)
    if axiom == "self-consistency":
        return E(w) not in f.con[w[0]]
    if axiom == "consistency-preservation":
        k, y, x = w
        return y <= x and x in f.con[k] and y not in f.con[k]
    if axiom == "soundness":
        k, x, y = w
        return ent(k, x, y) and y not in f.con[k]
    if axiom == "weakening":
        k, x, y, c = w
        return x <= y and y in f.con[k] and ent(k, x, [c]) and not ent(k, y, [c])
    if axiom == "cut":
        k, x, y, c = w
        return ent(k, x, y) and ent(k, y, [c]) and not ent(k, x, [c])
    if axiom == "consistency-transfer":
        k, j, x = w
        return E({k}) in f.con[j] and x in f.con[k] and x not in f.con[j]
    if axiom == "entailment-transfer":
        k, j, x, c = w
        return E({k}) in f.con[j] and ent(k, x, [c]) and not ent(j, x, [c])
    if axiom == "interpolation":
        k, x, y = w
        return ent(k, x, y) and not any(
            ent(k, x, z | {e}) and ent(e, z, y) for e in f.tokens for z in f.con[e]
        )
    if axiom == "(S)":
        k, x = w
        return x in f.con[k] and x != E({k}) and not all((k, E({k}), c) in f.entails for c in x)
    if axiom == "(T)":
        return (w[0], E(), f.truth) not in f.entails
    raise AssertionError(axiom)


@pytest.mark.parametrize("name", ["unit", "chain", "wide", "sharp", "point"])
def test_report_witnesses_replay_and_match_oracle(name):
    base = load(name)
    strong, truth = name in STRONG_FRAMES, name in TRUTH_FRAMES
    for m in _mutations(base):
        report = check_frame(m, strong, truth, all_witnesses=True)
        assert set(report.axioms) == naive_frame_failures(m, strong, truth)
        for v in report.violations:
            assert _replays(m, v.axiom, v.witness), v


def test_report_formatting_names_axiom():
    text = format_report(check_frame(load("bad_weakening")))
    assert text.startswith("fail")
    assert "weakening" in text
    assert format_report(check_frame(load("chain"))).startswith("pass")


def test_bound_exceeded():
    with pytest.raises(ArtifactError) as err:
        check_frame(load("chain"), bound=1)
    assert err.value.code == "E_BOUND"


# ---------------------------------------------------------------- metatheorems


@pytest.mark.parametrize("name", FRAMES)
def test_metatheorems_on_corpus(name):
    assert verify_metatheorems(load(name)).passed


def test_metatheorems_on_bad_weakening_name_only_known_ids():
    report = verify_metatheorems(load("bad_weakening"))
    assert report.axioms <= {"m1", "m2", "m3a", "m3b"}


def test_metatheorems_detect_unsound_frame():
    chain = load("chain")
    m = Frame(chain.tokens, chain.con, chain.entails | {(T, E(), a), (T, E({T}), a)}, T)
    report = verify_metatheorems(m)
    assert report.axioms == {"m1"}
    assert report.first("m1").witness == (T, E(), a)


def test_metatheorems_follow_from_frame_conditions():
    # On every mutation that still passes the frame check, the consequences hold too.
    for name in ("unit", "chain", "wide"):
        for m in _mutations(load(name)):
            if check_frame(m).passed:
                assert verify_metatheorems(m).passed


# ---------------------------------------------------------------- mappings


@pytest.mark.parametrize("name", SYSTEMS)
def test_identity_mapping_passes(name):
    s = load(name)
    assert check_mapping(identity_of(s), s, s).passed


@pytest.mark.parametrize("src", SYSTEMS)
@pytest.mark.parametrize("tgt", SYSTEMS)
def test_empty_mapping_passes(src, tgt):
    s, s2 = load(src), load(tgt)
    assert check_mapping(Morphism("mapping", s, s2, E()), s, s2).passed


def test_mapping_missing_superset_fails_weakening():
    s = apply_S(load("chain"))
    h = Morphism("mapping", s, s, E({(None, E({a}), T)}))
    report = check_mapping(h, s, s)
    assert report.first("(2)").witness == (E({a}), E({T, a}), T)


def test_mapping_endpoint_mismatch():
    s = apply_S(load("chain"))
    with pytest.raises(ArtifactError) as err:
        check_mapping(identity_of(s), s, load("sys_flat"))
    assert err.value.code == "E_TYPE"


# ---------------------------------------------------------------- families


def test_identity_family_respects_truth():
    f = load("chain")
    assert check_family(identity_of(f), f, f, True).passed


def test_empty_family_fails_only_truth_respect():
    unit, chain = load("unit"), load("chain")
    h = Morphism("family", unit, chain, E())
    assert check_family(h, unit, chain).passed
    report = check_family(h, unit, chain, True)
    assert report.axioms == {"truth-respect"}
    assert report.first("truth-respect").witness == (E(), T)


def test_unit_to_chain_family():
    h = load("unit_to_chain")
    assert h.rel == {(T, E(), T), (T, E({T}), T)}
    assert check_family(h, h.source, h.target, True).passed


@pytest.mark.parametrize("name", MORPHISMS)
def test_corpus_morphisms_pass(name):
    h = load(name)
    truth = h.source.truth is not None and h.target.truth is not None
    assert check_family(h, h.source, h.target, truth).passed


@pytest.mark.parametrize("name", FRAMES)
def test_identity_family_passes(name):
    f = load(name)
    assert check_family(identity_of(f), f, f, f.truth is not None).passed


def test_family_mutations_are_caught():
    f = load("chain")
    ident = identity_of(f)
    caught = 0
    for t in sorted(ident.rel, key=str):
        broken = ident.with_rel(ident.rel - {t})
        caught += not check_family(broken, f, f, True).passed
    assert caught == len(ident.rel)

