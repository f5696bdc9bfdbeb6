"""Walking a Herbrand tree as a decision diagram to find a falsified axiom instance."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .frontend import TheorySyntaxError, parse_atom
from .logic import Atom, Exp, GroundTheory, HerbrandTree, Index, _peval, as_oracle, htree_check


@dataclass(frozen=True)
class CounterExample:
    index: Index
    assignment: tuple[tuple[Atom, bool], ...]

    def __str__(self) -> str:
        lines = [f"counter-example: {self.index}"]
        lines += [f"  {a}={'true' if v else 'false'}" for a, v in self.assignment]
        return "\n".join(lines)


class TreeRejected(ValueError):
    pass


Oracle = Union[Mapping[Atom, bool], Callable[[Atom], bool]]


def walk(th: GroundTheory, t: HerbrandTree, oracle: Oracle,
         default: Optional[bool] = None) -> CounterExample:
    """Descend ``t`` answering each atom with ``oracle``; refuses unchecked trees."""
    report = htree_check(th, t)
    if not report:
        raise TreeRejected(f"tree rejected by the checker: {report.message}")
    ask = as_oracle(oracle, default)
    answers: list[tuple[Atom, bool]] = []
    while isinstance(t, Exp):
        v = bool(ask(t.atom))
        answers.append((t.atom, v))
        t = t.if_true if v else t.if_false
    return CounterExample(t.index, tuple(answers))


def verify(th: GroundTheory, cex: CounterExample) -> bool:
    """Whether the recorded answers alone already falsify the cited instance."""
    th.rank(cex.index)  # unknown index raises
    return _peval(dict(cex.assignment).get, th.th(cex.index)) is False


_LINE = re.compile(r"^\s*(?P<atom>.+?)\s*=\s*(?P<value>\S+)\s*$")
_TRUTH = {"true": True, "t": True, "1": True, "false": False, "f": False, "0": False}


class ValuationError(ValueError):
    pass


def parse_valuation(text: str) -> dict[Atom, bool]:
    """Lines ``Pred(args)=true|false``; ``#`` starts a comment."""
    out: dict[Atom, bool] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m or m.group("value").lower() not in _TRUTH:
            raise ValuationError(f"line {n}: expected Pred(args)=true|false, got {raw.strip()!r}")
        try:
            atom = parse_atom(m.group("atom"))
        except TheorySyntaxError as e:
            raise ValuationError(f"line {n}: {e}") from None
        out[atom] = _TRUTH[m.group("value").lower()]
    return out
