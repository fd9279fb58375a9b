"""Bundled fixture documents.

``unit``, ``chain`` and ``wide`` are the three reference frames; ``bad_weakening``
is ``chain`` with one weakening instance removed. The remaining frames and
systems are small extra examples, each validated by the test suite.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..document import load_document

FRAMES = ("unit", "chain", "wide", "sharp", "dark", "total", "vee", "point")
STRONG_FRAMES = ("unit", "chain", "sharp", "dark", "total", "vee", "point")
TRUTH_FRAMES = ("unit", "chain", "sharp", "dark", "total", "vee")
SYSTEMS = ("sys_flat", "sys_pair", "sys_both")
MORPHISMS = ("unit_to_chain", "chain_to_unit", "wide_to_unit", "sharp_to_chain", "chain_to_sharp")
INVALID = ("bad_weakening",)


def path(name: str):
    return resources.files(__name__) / f"{name}.doc"


@lru_cache(maxsize=None)
def load(name: str):
    """Load a fixture by name (e.g. ``load("chain")``)."""
    with resources.as_file(path(name)) as p:
        return load_document(p)
