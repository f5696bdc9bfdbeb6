"""Loading theories from files or the shipped ``builtin:`` names."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .frontend import CompiledTheory, compile_theory

BUILTIN_THEORIES = {"whitecrow": "whitecrow.thy", "pseudo": "pseudo.thy",
                    "pseudo-paper": "pseudo-paper.thy"}


def builtin_text(name: str) -> str:
    try:
        fname = BUILTIN_THEORIES[name]
    except KeyError:
        raise ValueError(f"no builtin theory {name!r}; known: {', '.join(BUILTIN_THEORIES)}") from None
    return resources.files("herbrand").joinpath("data", fname).read_text(encoding="utf-8")


def theory_text(source: str) -> str:
    if source.startswith("builtin:"):
        return builtin_text(source[len("builtin:"):])
    path = Path(source)
    if not path.exists() and path.name.removesuffix(".thy") in BUILTIN_THEORIES:
        # the shipped examples are also found by bare file name
        return builtin_text(path.name.removesuffix(".thy"))
    return path.read_text(encoding="utf-8")


def load_theory(source: str) -> CompiledTheory:
    return compile_theory(theory_text(source))
