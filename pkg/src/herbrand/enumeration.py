"""Fair enumerations of ground terms, argument tuples and atoms.

Terms are ordered by weight (size, numeric literal ``n`` weighing ``n+1``),
then by head symbol (constants in declaration order, then the literal of
that weight, then function symbols in declaration order), then
lexicographically by the ranks of the arguments.

All walks over terms are iterative: term depth grows linearly with rank
for unary signatures.
"""
from __future__ import annotations

import bisect
from typing import Iterator, Optional, Sequence

from .logic import Term


class EmptyUniverse(ValueError):
    pass


_CACHE_LIMIT = 1 << 18


class TermEnumerator:
    def __init__(self, constants: Sequence[str], functions: Sequence[tuple[str, int]],
                 numerals: bool = False):
        self.constants = list(constants)
        self.functions = list(functions)
        self.numerals = numerals
        if not self.constants and not numerals:
            raise EmptyUniverse("Herbrand universe is empty: declare a constant or enable numerals")
        self.finite = not self.functions and not numerals
        self._const_pos = {c: i for i, c in enumerate(self.constants)}
        self._arity = dict(self.functions)
        # _count[w]: number of terms of weight w; _tuples[m][W]: m-tuples of total weight W
        self._count: list[int] = [0]
        self._prefix: list[int] = [0]   # _prefix[w] = number of terms of weight <= w
        self._tuples: dict[int, list[int]] = {0: [1]}
        # memo tables; chains like f^k(a) reuse the previous rank's work
        self._built: dict[tuple[int, int], Term] = {}
        self._pos: dict[Term, int] = {}
        for _, k in self.functions:
            self._ensure_arity(k)

    # -- counting ------------------------------------------------------------

    def _ensure_arity(self, m: int) -> None:
        for j in range(m + 1):
            if j not in self._tuples:
                self._tuples[j] = [0] * len(self._count) if j else [1]
                self._fill_tuples(j, 0)

    def _fill_tuples(self, m: int, start: int) -> None:
        row = self._tuples[m]
        if m == 0:
            row.extend(0 for _ in range(len(self._count) - len(row)))
            return
        for W in range(start, len(self._count)):
            if m == 1:
                v = self._count[W]
            else:
                prev = self._tuples[m - 1]
                v = sum(self._count[w1] * prev[W - w1] for w1 in range(1, W + 1))
            if W < len(row):
                row[W] = v
            else:
                row.append(v)

    def _grow(self, w: int) -> None:
        while len(self._count) <= w:
            n = len(self._count)
            c = len(self.constants) if n == 1 else 0
            if self.numerals and n >= 1:
                c += 1
            for _, k in self.functions:
                c += self.tuple_count(k, n - 1) if n - 1 >= k else 0
            self._count.append(c)
            self._prefix.append(self._prefix[-1] + c)
            for m in sorted(self._tuples):
                self._fill_tuples(m, n)

    def count(self, w: int) -> int:
        """Number of ground terms of weight ``w``."""
        if w < 0:
            return 0
        self._grow(w)
        return self._count[w]

    def tuple_count(self, m: int, W: int) -> int:
        """Number of ``m``-tuples of terms with total weight ``W``."""
        if W < 0:
            return 0
        if m not in self._tuples:
            self._ensure_arity(m)
        if W >= len(self._count):
            self._grow(W)
        return self._tuples[m][W]

    def total(self) -> Optional[int]:
        return len(self.constants) if self.finite else None

    # -- term <-> rank -------------------------------------------------------

    def _weight_of_rank(self, k: int) -> int:
        if self.finite and k >= len(self.constants):
            raise IndexError(f"term rank {k} out of range (universe has {len(self.constants)} terms)")
        while self._prefix[-1] <= k:
            self._grow(len(self._count))
        return bisect.bisect_right(self._prefix, k)

    def nth(self, k: int) -> Term:
        if k < 0:
            raise IndexError("negative rank")
        w = self._weight_of_rank(k)
        return self.at_weight(w, k - self._prefix[w - 1])

    def rank(self, t: Term) -> int:
        pos = self.positions(t)
        return self._prefix[t.weight - 1] + pos[t]

    def at_weight(self, w: int, pos: int) -> Term:
        """The ``pos``-th term of weight ``w``."""
        # explicit stack of frames [key, head, pending (w, pos) list, built args]
        stack: list[list] = []
        todo: Optional[tuple[int, int]] = (w, pos)
        while True:
            if todo is not None:
                built = self._built.get(todo)
                if built is None:
                    head, kids = self._split(*todo)
                    if kids:
                        stack.append([todo, head, list(reversed(kids)), []])
                        todo = stack[-1][2].pop()
                        continue
                    built = self._remember(todo, Term(head))
            else:
                frame = stack[-1]
                if frame[2]:
                    todo = frame[2].pop()
                    continue
                stack.pop()
                built = self._remember(frame[0], Term(frame[1], frame[3]))
            if not stack:
                return built
            stack[-1][3].append(built)
            todo = None

    def _remember(self, key: tuple[int, int], t: Term) -> Term:
        if len(self._built) >= _CACHE_LIMIT:
            self._built.clear()
        self._built[key] = t
        return t

    def _split(self, w: int, pos: int) -> tuple[object, list[tuple[int, int]]]:
        """Head symbol and argument (weight, pos) list for a term position."""
        if self.count(w) <= pos or pos < 0:
            raise IndexError(f"no term at weight {w}, position {pos}")
        if w == 1:
            if pos < len(self.constants):
                return self.constants[pos], []
            pos -= len(self.constants)
        if self.numerals:
            if pos == 0:
                return w - 1, []
            pos -= 1
        for f, k in self.functions:
            block = self.tuple_count(k, w - 1)
            if pos < block:
                return f, self._split_tuple(k, w - 1, pos)
            pos -= block
        raise AssertionError("unreachable")

    def _split_tuple(self, m: int, W: int, pos: int) -> list[tuple[int, int]]:
        out = []
        while m > 1:
            for w1 in range(1, W - m + 2):
                rest = self.tuple_count(m - 1, W - w1)
                block = self.count(w1) * rest
                if pos < block:
                    out.append((w1, pos // rest))
                    pos %= rest
                    W -= w1
                    m -= 1
                    break
                pos -= block
            else:
                raise IndexError("tuple position out of range")
        if m == 1:
            out.append((W, pos))
        return out

    def positions(self, t: Term) -> dict[Term, int]:
        """Position within its weight class of ``t`` and all its subterms."""
        pos: dict[Term, int] = {}
        cache = self._pos
        stack = [(t, False)]
        while stack:
            u, ready = stack.pop()
            if u in pos:
                continue
            if u in cache:
                pos[u] = cache[u]
                continue
            if not ready:
                stack.append((u, True))
                stack.extend((a, False) for a in u.args if a not in pos)
                continue
            pos[u] = self._position(u, pos)
        if len(cache) + len(pos) > _CACHE_LIMIT:
            cache.clear()
        cache.update(pos)
        return pos

    def _position(self, t: Term, pos: dict[Term, int]) -> int:
        w = t.weight
        self._grow(w)
        offset = len(self.constants) if w == 1 else 0
        if t.is_numeral:
            if not self.numerals:
                raise ValueError(f"numeric literal {t} not in this signature")
            return offset
        if not t.args:
            if t.head not in self._const_pos:
                raise ValueError(f"unknown constant {t.head}")
            return self._const_pos[t.head]
        if self._arity.get(t.head) != len(t.args):
            raise ValueError(f"unknown function symbol {t.head}/{len(t.args)}")
        if self.numerals:
            offset += 1
        for f, k in self.functions:
            if f == t.head:
                break
            offset += self.tuple_count(k, w - 1)
        return offset + self.tuple_position(t.args, pos)

    def tuple_position(self, ts: Sequence[Term], pos: Optional[dict[Term, int]] = None) -> int:
        """Position of ``ts`` among tuples of the same length and total weight."""
        if pos is None:
            pos = {}
            for t in ts:
                pos.update(self.positions(t))
        W = sum(t.weight for t in ts)
        m = len(ts)
        acc = 0
        for t in ts[:-1]:
            for w1 in range(1, t.weight):
                acc += self.count(w1) * self.tuple_count(m - 1, W - w1)
            acc += pos[t] * self.tuple_count(m - 1, W - t.weight)
            W -= t.weight
            m -= 1
        if ts:
            acc += pos[ts[-1]]
        return acc

    def tuple_at(self, m: int, W: int, pos: int) -> tuple[Term, ...]:
        if m == 0:
            if W != 0 or pos != 0:
                raise IndexError("empty tuple has weight 0")
            return ()
        return tuple(self.at_weight(w, p) for w, p in self._split_tuple(m, W, pos))

    def terms_up_to(self, max_weight: int) -> Iterator[Term]:
        for w in range(1, max_weight + 1):
            for p in range(self.count(w)):
                yield self.at_weight(w, p)

    def tuples_of_weight(self, m: int, W: int) -> Iterator[tuple[Term, ...]]:
        for p in range(self.tuple_count(m, W)):
            yield self.tuple_at(m, W, p)


class FamilyEnumerator:
    """Enumerates pairs (member, argument tuple) for a finite family of
    members with fixed arities, by total weight, then member order, then
    argument ranks. Used for both axiom indices and atoms.
    """

    def __init__(self, terms: TermEnumerator, arities: Sequence[int]):
        self.terms = terms
        self.arities = list(arities)
        for k in self.arities:
            terms._ensure_arity(k)
        self._count: list[int] = []
        self._prefix: list[int] = []
        self.finite = terms.finite or all(k == 0 for k in self.arities)
        self.size: Optional[int] = None
        if terms.finite:
            self.size = sum(len(terms.constants) ** k for k in self.arities)
        elif self.finite:
            self.size = len(self.arities)

    def count(self, W: int) -> int:
        while len(self._count) <= W:
            w = len(self._count)
            c = sum(self.terms.tuple_count(k, w) for k in self.arities)
            self._count.append(c)
            self._prefix.append((self._prefix[-1] if self._prefix else 0) + c)
        return self._count[W]

    def weight_of_rank(self, k: int) -> int:
        if self.size is not None and k >= self.size:
            raise IndexError(f"rank {k} out of range ({self.size} elements)")
        while not self._prefix or self._prefix[-1] <= k:
            self.count(len(self._count))
        return bisect.bisect_right(self._prefix, k)

    def first_rank_of_weight(self, W: int) -> int:
        self.count(W)
        return self._prefix[W - 1] if W > 0 else 0

    def nth(self, k: int) -> tuple[int, tuple[Term, ...]]:
        if k < 0:
            raise IndexError("negative rank")
        W = self.weight_of_rank(k)
        pos = k - self.first_rank_of_weight(W)
        for j, m in enumerate(self.arities):
            block = self.terms.tuple_count(m, W)
            if pos < block:
                return j, self.terms.tuple_at(m, W, pos)
            pos -= block
        raise AssertionError("unreachable")

    def rank(self, member: int, args: Sequence[Term]) -> int:
        m = self.arities[member]
        if len(args) != m:
            raise ValueError(f"expected {m} arguments, got {len(args)}")
        for t in args:
            self.terms.positions(t)  # validates symbols
        W = sum(t.weight for t in args)
        r = self.first_rank_of_weight(W)
        for j in range(member):
            r += self.terms.tuple_count(self.arities[j], W)
        return r + self.terms.tuple_position(args)
