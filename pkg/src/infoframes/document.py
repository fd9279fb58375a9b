"""Brace/bracket document format for frames, systems, morphisms, logic tables and bases.

Parsing canonicalizes every set; serialization is deterministic, so
``parse_document(serialize(s)) == s`` and listing order never matters.
"""

from __future__ import annotations

import os
import re
from collections.abc import Callable, Iterable
from pathlib import Path
from typing import Optional, Union

from .errors import ArtifactError
from .model import Frame, InfoSystem, Morphism
from .tokens import RESERVED, Atom, Pair, SetTok, Token, atoms_in, set_key, show_set, sorted_sets

_LEXEME = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<arrow>->)
  | (?P<string>"[^"\n]*")
  | (?P<ident>[A-Za-z_#][A-Za-z0-9_]*)
  | (?P<punct>[{}\[\]():,])
  | (?P<op>∧|/\\|&|⊤)
    """,
    re.VERBOSE,
)


class _Lexer:
    def __init__(self, text: str) -> None:
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _LEXEME.match(text, pos)
            if not m:
                line = text.count("\n", 0, pos) + 1
                raise ArtifactError("E_SYNTAX", f"unexpected character {text[pos]!r} on line {line}")
            kind = m.lastgroup
            if kind != "ws":
                value = m.group()
                self.items.append((kind if kind != "punct" and kind != "arrow" else value, value, pos))
            pos = m.end()
        self.items.append(("eof", "", len(text)))
        self.i = 0
        self.text = text

    def peek(self, offset: int = 0) -> tuple[str, str, int]:
        return self.items[min(self.i + offset, len(self.items) - 1)]

    def next(self) -> tuple[str, str, int]:
        item = self.peek()
        self.i += 1
        return item

    def expect(self, kind: str, value: Optional[str] = None) -> str:
        k, v, pos = self.next()
        if k != kind or (value is not None and v != value):
            line = self.text.count("\n", 0, pos) + 1
            want = value or kind
            got = v or k
            raise ArtifactError("E_SYNTAX", f"expected {want!r} but found {got!r} on line {line}")
        return v

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        k, v, _ = self.peek()
        return k == kind and (value is None or v == value)


def _token(lx: _Lexer) -> Token:
    if lx.at("ident"):
        return Atom(lx.next()[1])
    if lx.at("{"):
        lx.next()
        elems = []
        while not lx.at("}"):
            elems.append(_token(lx))
        lx.next()
        return SetTok(_no_dup_elems(elems))
    if lx.at("("):
        lx.next()
        first = _token(lx)
        lx.expect(",")
        second = _token_list(lx)
        lx.expect(")")
        return Pair(first, second)
    _, v, pos = lx.peek()
    line = lx.text.count("\n", 0, pos) + 1
    raise ArtifactError("E_SYNTAX", f"expected a token but found {v or 'end of input'!r} on line {line}")


def _no_dup_elems(elems: list) -> list:
    if len(set(elems)) != len(elems):
        raise ArtifactError("E_DUP", f"duplicate token in {show_set(elems)}")
    return elems


def _token_list(lx: _Lexer) -> frozenset:
    lx.expect("[")
    elems = []
    while not lx.at("]"):
        elems.append(_token(lx))
    lx.expect("]")
    return frozenset(_no_dup_elems(elems))


def _family(lx: _Lexer, where: str) -> frozenset:
    lx.expect("[")
    sets = []
    while not lx.at("]"):
        sets.append(_token_list(lx))
    lx.expect("]")
    seen = set()
    for s in sets:
        if s in seen:
            raise ArtifactError("E_DUP", f"duplicate set {show_set(s)} in {where}", (s,))
        seen.add(s)
    return frozenset(sets)


def _entries(lx: _Lexer) -> list[tuple[frozenset, Token]]:
    lx.expect("[")
    out = []
    while not lx.at("]"):
        lx.expect("[")
        x = _token_list(lx)
        lx.expect("->")
        a = _token(lx)
        lx.expect("]")
        out.append((x, a))
    lx.expect("]")
    return out


def _keyed_block(lx: _Lexer, item: Callable[[_Lexer], object], where: str) -> dict:
    lx.expect("{")
    out: dict = {}
    while not lx.at("}"):
        key = _token(lx)
        lx.expect(":")
        if key in out:
            raise ArtifactError("E_DUP", f"token {key} listed twice in {where}", (key,))
        out[key] = item(lx)
    lx.expect("}")
    return out


def _keyword(lx: _Lexer, word: str) -> None:
    lx.expect("ident", word)


def _check_reserved(universe: Iterable[Token], declared: Optional[Token], what: str) -> None:
    allowed = declared is not None and any(a.name == RESERVED for a in atoms_in(declared))
    if allowed:
        return
    for t in universe:
        if any(a.name == RESERVED for a in atoms_in(t)):
            raise ArtifactError("E_RESERVED", f"{RESERVED} is reserved for generated truth tokens ({what})", (t,))


def _frame(lx: _Lexer, strict: bool) -> Frame:
    lx.expect("{")
    _keyword(lx, "tokens")
    tokens = _token_list(lx)
    truth = None
    if lx.at("ident", "truth"):
        lx.next()
        truth = _token(lx)
    _keyword(lx, "con")
    con = _keyed_block(lx, lambda l: _family(l, "con"), "con")
    _keyword(lx, "entails")
    ent = _keyed_block(lx, _entries, "entails")
    lx.expect("}")
    if strict:
        _check_reserved(tokens, truth, "frame")
    triples = set()
    for i, rows in ent.items():
        for x, a in rows:
            if (i, x, a) in triples:
                raise ArtifactError("E_DUP", f"entailment {show_set(x)} -> {a} listed twice at {i}", (i, x, a))
            triples.add((i, x, a))
    return Frame(tokens, con, frozenset(triples), truth)


def _system(lx: _Lexer, strict: bool) -> InfoSystem:
    lx.expect("{")
    _keyword(lx, "tokens")
    tokens = _token_list(lx)
    simplified = False
    if lx.at("ident", "simplified"):
        lx.next()
        simplified = True
    _keyword(lx, "con")
    con = _family(lx, "con")
    _keyword(lx, "entails")
    rows = _entries(lx)
    lx.expect("}")
    if strict:
        _check_reserved(tokens, None, "system")
    if len(set(rows)) != len(rows):
        raise ArtifactError("E_DUP", "entailment listed twice")
    return InfoSystem(tokens, con, frozenset(rows), simplified)


def _endpoint(lx: _Lexer, base_dir: Path, strict: bool) -> tuple[object, Optional[str]]:
    if lx.at("string"):
        raw = lx.next()[1][1:-1]
        path = (base_dir / raw).resolve()
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ArtifactError("E_SYNTAX", f"cannot read endpoint {raw!r}: {exc.strerror}") from None
        return parse_document(text, base_dir=path.parent, strict=strict), str(path)
    return _structure(lx, base_dir, strict), None


def _morphism(lx: _Lexer, base_dir: Path, strict: bool) -> Morphism:
    lx.expect("{")
    _keyword(lx, "kind")
    kind = lx.expect("ident")
    _keyword(lx, "source")
    source, source_ref = _endpoint(lx, base_dir, strict)
    _keyword(lx, "target")
    target, target_ref = _endpoint(lx, base_dir, strict)
    _keyword(lx, "rel")
    lx.expect("{")
    triples: list = []
    if lx.at("["):
        triples.extend((None, x, b) for x, b in _entries(lx))
    else:
        seen = set()
        while not lx.at("}"):
            i = _token(lx)
            lx.expect(":")
            if i in seen:
                raise ArtifactError("E_DUP", f"stage {i} listed twice in rel", (i,))
            seen.add(i)
            triples.extend((i, x, b) for x, b in _entries(lx))
    lx.expect("}")
    lx.expect("}")
    if len(set(triples)) != len(triples):
        raise ArtifactError("E_DUP", "relation entry listed twice")
    return Morphism(kind, source, target, frozenset(triples), source_ref, target_ref)


def _structure(lx: _Lexer, base_dir: Path, strict: bool):
    head = lx.expect("ident")
    if head == "frame":
        return _frame(lx, strict)
    if head == "system":
        return _system(lx, strict)
    if head == "morphism":
        return _morphism(lx, base_dir, strict)
    if head == "logic":
        from .logic import parse_table_body

        return parse_table_body(lx, strict)
    if head == "basis":
        from .bases import parse_basis_body

        return parse_basis_body(lx)
    raise ArtifactError("E_SYNTAX", f"unknown document kind {head!r}")


def parse_document(text: str, base_dir: Union[str, Path, None] = None, strict: bool = True):
    """Parse one structure. Morphism endpoint paths resolve against ``base_dir``."""
    lx = _Lexer(text)
    result = _structure(lx, Path(base_dir or os.getcwd()), strict)
    lx.expect("eof")
    return result


def load_document(path: Union[str, Path], strict: bool = True):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ArtifactError("E_SYNTAX", f"cannot read {str(path)!r}: {exc.strerror}") from None
    return parse_document(text, base_dir=path.resolve().parent, strict=strict)


def serialize(s, relative_to: Union[str, Path, None] = None) -> str:
    """Deterministic document text for any supported structure."""
    return "\n".join(_lines(s, relative_to)) + "\n"


def _entry(x: Iterable[Token], a: Token) -> str:
    return f"[{show_set(x)} -> {a}]"


def _entry_block(rows: Iterable[tuple[frozenset, Token]]) -> str:
    return "[" + " ".join(_entry(x, a) for x, a in sorted(rows, key=lambda r: (set_key(r[0]), r[1]))) + "]"


def _lines(s, relative_to) -> list[str]:
    if isinstance(s, Frame):
        out = ["frame {", f"  tokens {show_set(s.tokens)}"]
        if s.truth is not None:
            out.append(f"  truth {s.truth}")
        out.append("  con {")
        for i in sorted(s.tokens):
            out.append(f"    {i}: [" + " ".join(show_set(x) for x in sorted_sets(s.con[i])) + "]")
        out.append("  }")
        out.append("  entails {")
        by_stage: dict = {}
        for i, x, a in s.entails:
            by_stage.setdefault(i, []).append((x, a))
        for i in sorted(by_stage):
            out.append(f"    {i}: {_entry_block(by_stage[i])}")
        out += ["  }", "}"]
        return out
    if isinstance(s, InfoSystem):
        out = ["system {", f"  tokens {show_set(s.tokens)}"]
        if s.simplified:
            out.append("  simplified")
        out.append("  con [" + " ".join(show_set(x) for x in sorted_sets(s.con)) + "]")
        out.append(f"  entails {_entry_block(s.entails)}")
        out.append("}")
        return out
    if isinstance(s, Morphism):
        out = ["morphism {", f"  kind {s.kind}"]
        for word, end, ref in (("source", s.source, s.source_ref), ("target", s.target, s.target_ref)):
            if ref is not None:
                shown = os.path.relpath(ref, relative_to) if relative_to is not None else ref
                out.append(f'  {word} "{Path(shown).as_posix()}"')
            else:
                inner = _lines(end, relative_to)
                out.append(f"  {word} {inner[0]}")
                out += ["  " + line for line in inner[1:]]
        out.append("  rel {")
        if s.kind == "mapping":
            out.append(f"    {_entry_block((x, b) for _, x, b in s.rel)}")
        else:
            by_stage = {}
            for i, x, b in s.rel:
                by_stage.setdefault(i, []).append((x, b))
            for i in sorted(by_stage):
                out.append(f"    {i}: {_entry_block(by_stage[i])}")
        out += ["  }", "}"]
        return out
    from .bases import AbstractBasis, basis_lines
    from .logic import AtomTable, table_lines

    if isinstance(s, AtomTable):
        return table_lines(s)
    if isinstance(s, AbstractBasis):
        return basis_lines(s)
    raise TypeError(f"cannot serialize {type(s).__name__}")
