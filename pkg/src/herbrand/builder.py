"""Direct construction of Herbrand trees for contradictory ground theories.

At each open path the builder scans indices for one that the path
falsifies (a leaf) or leaves undecided (branch on its least unassigned
atom). For a contradictory theory the fair scan cannot skip forever, since
that would exhibit a model; fuel and depth limits cover consistent inputs.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

from .logic import (Atom, Contrad, Exp, GroundTheory, HerbrandTree, Index, Left,
                    Path, Right, Top, _peval, atoms_of, htree_check)

log = logging.getLogger(__name__)

FAIR = "fair"
RELEVANCE = "relevance"


@dataclass(frozen=True)
class BuildConfig:
    fuel: int = 100_000
    max_depth: int = 256
    strategy: str = RELEVANCE

    def __post_init__(self):
        if self.fuel < 1 or self.max_depth < 1:
            raise ValueError("fuel and max_depth must be at least 1")
        if self.strategy not in (FAIR, RELEVANCE):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class Leaf:
    index: Index


@dataclass(frozen=True)
class Branch:
    atom: Atom


@dataclass(frozen=True)
class Exhausted:
    reason: str  # "fuel" or "satisfied"


NodeDecision = Union[Leaf, Branch, Exhausted]


class BuildError(Exception):
    """The builder gave up; ``path`` is the deepest open path reached."""

    def __init__(self, reason: str, path: Path, steps: int, detail: str = ""):
        self.reason, self.path, self.steps = reason, path, steps
        msg = {"fuel": "fuel exhausted",
               "depth": "maximum depth exceeded",
               "satisfied": "every index holds on an open path (theory is satisfiable there)",
               }.get(reason, reason)
        super().__init__(f"{msg} after {steps} scan steps at path {path}{detail}")


class HerbrandBuilder:
    def __init__(self, th: GroundTheory, cfg: Optional[BuildConfig] = None):
        self.th = th
        self.cfg = cfg or BuildConfig()
        self.steps = 0
        self.frontier = 0  # highest rank reached by a fair scan
        self.deepest: Path = Top
        self._deepest_len = 0

    def _evaluate(self, i: Index, assigned: dict[Atom, bool]):
        self.steps += 1
        return _peval(assigned.get, self.th.th(i))

    def _out_of_fuel(self) -> bool:
        return self.steps >= self.cfg.fuel

    def decide(self, p: Path, assigned: Optional[dict[Atom, bool]] = None) -> NodeDecision:
        if assigned is None:
            assigned = p.assignment()
        skip: set[Index] = set()
        if self.cfg.strategy == RELEVANCE and assigned:
            candidates: dict[Index, None] = {}
            for a in assigned:
                for i in self.th.relevant(a, self.frontier):
                    candidates.setdefault(i)
            undecided: Optional[Index] = None
            for i in sorted(candidates, key=self.th.rank):
                if self._out_of_fuel():
                    return Exhausted("fuel")
                v = self._evaluate(i, assigned)
                if v is False:
                    return Leaf(i)
                if v is None and undecided is None:
                    undecided = i
                skip.add(i)
            if undecided is not None:
                return Branch(self._first_unassigned(undecided, assigned))
        return self._fair_scan(assigned, skip)

    def _fair_scan(self, assigned: dict[Atom, bool], skip: set[Index]) -> NodeDecision:
        r = 0
        while True:
            if self.th.size is not None and r >= self.th.size:
                return Exhausted("satisfied")
            i = self.th.index(r)
            if i not in skip:
                if self._out_of_fuel():
                    return Exhausted("fuel")
                self.frontier = max(self.frontier, r)
                v = self._evaluate(i, assigned)
                if v is False:
                    return Leaf(i)
                if v is None:
                    return Branch(self._first_unassigned(i, assigned))
            r += 1

    def _first_unassigned(self, i: Index, assigned: dict[Atom, bool]) -> Atom:
        for a in atoms_of(self.th.th(i)):
            if a not in assigned:
                return a
        raise AssertionError(f"undecided compound for {i} with every atom assigned")

    def build(self) -> HerbrandTree:
        tree = self._build(Top, {}, 0)
        report = htree_check(self.th, tree)
        if not report:
            raise AssertionError(f"builder produced an invalid tree: {report.message}")
        return tree

    def _build(self, p: Path, assigned: dict[Atom, bool], depth: int) -> HerbrandTree:
        if depth > self._deepest_len:
            self.deepest, self._deepest_len = p, depth
        d = self.decide(p, assigned)
        if isinstance(d, Leaf):
            return Contrad(d.index)
        if isinstance(d, Exhausted):
            raise BuildError(d.reason, self.deepest, self.steps)
        a = d.atom
        assert a not in assigned, "branch atom already on the path"
        if depth + 1 > self.cfg.max_depth:
            raise BuildError("depth", p, self.steps)
        t1 = self._build(Left(a, p), {**assigned, a: True}, depth + 1)
        t2 = self._build(Right(a, p), {**assigned, a: False}, depth + 1)
        return Exp(a, t1, t2)


def decide(th: GroundTheory, p: Path, cfg: Optional[BuildConfig] = None,
           frontier: int = 0) -> NodeDecision:
    b = HerbrandBuilder(th, cfg)
    b.frontier = frontier
    return b.decide(p)


def build_tree(th: GroundTheory, cfg: Optional[BuildConfig] = None) -> HerbrandTree:
    """Build a Herbrand tree for ``th``; raise :class:`BuildError` on exhaustion."""
    return HerbrandBuilder(th, cfg).build()
