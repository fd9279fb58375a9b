"""Tokens and token sets.

Tokens are tuples tagged with a variant rank, so the built-in tuple order is
the required total order: atoms before set tokens before pairs, atoms by name,
set tokens by their sorted elements, pairs by (first, second).
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from itertools import chain, combinations
from typing import Union

IDENT = re.compile(r"[A-Za-z_#][A-Za-z0-9_]*\Z")
RESERVED = "#T"

_ATOM, _SET, _PAIR = 0, 1, 2


class Atom(tuple):
    __slots__ = ()

    def __new__(cls, name: str) -> Atom:
        if not isinstance(name, str) or not IDENT.match(name):
            raise ValueError(f"invalid atom name {name!r}")
        return tuple.__new__(cls, (_ATOM, name))

    def __getnewargs__(self):
        return (self[1],)

    @property
    def name(self) -> str:
        return self[1]

    def __repr__(self) -> str:
        return f"Atom({self[1]!r})"

    def __str__(self) -> str:
        return self[1]


class SetTok(tuple):
    """A token whose identity is a finite set of tokens."""

    __slots__ = ()

    def __new__(cls, elems: Iterable[Token]) -> SetTok:
        return tuple.__new__(cls, (_SET, tuple(sorted(set(elems)))))

    def __getnewargs__(self):
        return (self[1],)

    @property
    def elems(self) -> frozenset[Token]:
        return frozenset(self[1])

    def __repr__(self) -> str:
        return f"SetTok({list(self[1])!r})"

    def __str__(self) -> str:
        return "{" + " ".join(map(str, self[1])) + "}"


class Pair(tuple):
    """A token (first, second) with second a finite set of tokens."""

    __slots__ = ()

    def __new__(cls, first: Token, second: Iterable[Token]) -> Pair:
        return tuple.__new__(cls, (_PAIR, first, tuple(sorted(set(second)))))

    def __getnewargs__(self):
        return (self[1], self[2])

    @property
    def first(self) -> Token:
        return self[1]

    @property
    def second(self) -> frozenset[Token]:
        return frozenset(self[2])

    def __repr__(self) -> str:
        return f"Pair({self[1]!r}, {list(self[2])!r})"

    def __str__(self) -> str:
        return f"({self[1]}, {show_set(self[2])})"


Token = Union[Atom, SetTok, Pair]
TokenSet = frozenset


def token_compare(x: Token, y: Token) -> int:
    """Three-way comparison: -1, 0 or 1."""
    return (x > y) - (x < y)


def set_key(s: Iterable[Token]) -> tuple:
    """Sort key for token sets: lexicographic on sorted elements."""
    return tuple(sorted(s))


def sorted_sets(family: Iterable[frozenset]) -> list[frozenset]:
    return sorted(family, key=set_key)


def show_set(s: Iterable[Token]) -> str:
    return "[" + " ".join(map(str, sorted(s))) + "]"


def atoms_in(t: Token) -> Iterable[Atom]:
    """All atoms occurring anywhere inside a token."""
    if isinstance(t, Atom):
        yield t
    elif isinstance(t, SetTok):
        for e in t[1]:
            yield from atoms_in(e)
    else:
        yield from atoms_in(t[1])
        for e in t[2]:
            yield from atoms_in(e)


def powerset(items: Iterable) -> list[frozenset]:
    items = sorted(items)
    return [
        frozenset(c)
        for c in chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))
    ]


def atoms(*names: str) -> frozenset[Atom]:
    """Convenience: a token set of atoms."""
    return frozenset(Atom(n) for n in names)
