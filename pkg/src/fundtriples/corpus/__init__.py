"""Exact counterexample triples shipped with the package, with expected reports.

Each ``<name>.json`` is a triple document; when the printed source data had
to be corrected, ``meta.printed`` keeps the original matrices and
``meta.corrections`` lists the changed entries.  ``<name>.expected.json``
records the vanishing pattern the triple is known to have.
"""
from __future__ import annotations

import json
from importlib import resources

from ..document import TripleDocument, loads

NAMES = ("rank1_factor", "one_septic", "five_epipoles", "quartics_needed", "quintics_needed")


def _text(filename: str) -> str:
    return resources.files(__name__).joinpath(filename).read_text()


def load(name: str, printed: bool = False) -> TripleDocument:
    """The corpus triple ``name``; ``printed=True`` gives the uncorrected matrices."""
    if name not in NAMES:
        raise KeyError(f"unknown corpus entry {name!r}; known: {NAMES}")
    doc = loads(_text(f"{name}.json"))
    if printed and "printed" in doc.meta:
        d = json.loads(_text(f"{name}.json"))
        d.update(d["meta"].pop("printed"))
        d["meta"].pop("corrections", None)
        doc = TripleDocument.from_dict(d)
    return doc


def expected(name: str) -> dict:
    return json.loads(_text(f"{name}.expected.json"))


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.json")


__all__ = ["NAMES", "load", "expected", "path"]
