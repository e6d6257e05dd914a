"""Vertex shifts of finite type as exactly computable substrates.

Points of the genuine system are one-sided infinite symbol sequences; the
finite artifact works with two views of them:

* a truncated word space of all legal length-k words under the ultrametric
  d(u, v) = 2^-(first disagreement index), which makes cylinder sets honest
  open balls, and
* per-n return-time membership for cylinder pairs, decided exactly by word
  overlap plus path counting in the transition graph.

Membership of each individual n in N([u],[v]) is exact for the infinite
system; only claims about tails beyond a scan horizon stay bounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .families import IndexSet
from .spaces import MetricSpace

DEFAULT_HORIZON = 64


class ShiftSystem:
    """One-sided vertex shift on a finite transition graph.

    ``edges=None`` means the complete graph with loops (the full shift).
    Every vertex must have in- and out-degree at least one, so each legal
    word extends to an infinite legal point.
    """

    __slots__ = ("alphabet", "resolution", "label", "_succ", "_mats",
                 "_wspace", "_memo")

    def __init__(self, alphabet: Sequence[str] = "01",
                 edges: Iterable[tuple[str, str]] | None = None,
                 resolution: int = 3, label: str | None = None):
        syms = tuple(alphabet)
        if len(syms) < 1 or len(set(syms)) != len(syms):
            raise InputError("alphabet must be nonempty and duplicate-free")
        if any(not (isinstance(a, str) and len(a) == 1) for a in syms):
            raise InputError("alphabet symbols must be single characters")
        if resolution < 1:
            raise InputError("resolution must be >= 1")
        self.alphabet = syms
        self.resolution = resolution
        if edges is None:
            pairs = {(a, b) for a in syms for b in syms}
        else:
            pairs = {(a, b) for a, b in edges}
            for a, b in pairs:
                if a not in syms or b not in syms:
                    raise InputError(f"edge ({a},{b}) uses unknown symbols")
        succ = {a: tuple(sorted(b for x, b in pairs if x == a)) for a in syms}
        pred = {b: tuple(sorted(a for a, x in pairs if x == b)) for b in syms}
        for a in syms:
            if not succ[a] or not pred[a]:
                raise InputError(f"stranded vertex {a!r}")
        self._succ = succ
        full = len(pairs) == len(syms) ** 2
        self.label = label or (f"fullshift({len(syms)},k={resolution})" if full
                               else f"sft({len(syms)},k={resolution})")
        self._mats: list[dict[str, frozenset]] = [
            {a: frozenset([a]) for a in syms}]
        self._wspace = None
        self._memo: dict[tuple[str, str, int], bool] = {}

    def __repr__(self) -> str:
        return f"ShiftSystem({self.label!r})"

    @property
    def is_full(self) -> bool:
        return all(len(self._succ[a]) == len(self.alphabet)
                   for a in self.alphabet)

    def follows(self, a: str, b: str) -> bool:
        return b in self._succ[a]

    def is_legal(self, word: str) -> bool:
        if not word or any(c not in self._succ for c in word):
            return False
        return all(self.follows(a, b) for a, b in zip(word, word[1:]))

    def legal_words(self, length: int) -> list[str]:
        """All legal words of the given length, lexicographic by alphabet."""
        if length < 1:
            raise InputError("word length must be >= 1")
        words = [a for a in self.alphabet]
        for _ in range(length - 1):
            words = [w + b for w in words for b in self._succ[w[-1]]]
        return words

    def cylinders(self, max_len: int) -> list[str]:
        out: list[str] = []
        for ln in range(1, max_len + 1):
            out.extend(self.legal_words(ln))
        return out

    def word_space(self) -> MetricSpace:
        """Truncated word space: legal length-k words, d = 2^-(first diff)."""
        if self._wspace is None:
            words = self.legal_words(self.resolution)

            def first_diff(u, v):
                for i, (a, b) in enumerate(zip(u, v)):
                    if a != b:
                        return i
                return None

            rows = []
            for u in words:
                row = []
                for v in words:
                    i = first_diff(u, v)
                    row.append(Fraction(0) if i is None else Fraction(1, 2 ** i))
                rows.append(row)
            self._wspace = MetricSpace(words, matrix=rows,
                                       label=f"words({self.label})")
        return self._wspace

    def reachable_exact(self, a: str, b: str, steps: int) -> bool:
        """Is there a path of exactly ``steps`` edges from a to b."""
        while len(self._mats) <= steps:
            prev = self._mats[-1]
            nxt = {}
            for x, reach in prev.items():
                acc = set()
                for y in reach:
                    acc.update(self._succ[y])
                nxt[x] = frozenset(acc)
            self._mats.append(nxt)
        return b in self._mats[steps][a]

    def return_membership(self, u: str, v: str, n: int) -> bool:
        """Exact decision of n in N([u], [v]) for the one-sided shift."""
        key = (u, v, n)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._return_membership(u, v, n)
            self._memo[key] = hit
        return hit

    def _return_membership(self, u: str, v: str, n: int) -> bool:
        if not self.is_legal(u) or not self.is_legal(v):
            raise InputError("cylinder words must be legal and nonempty")
        if n < 0:
            return False
        if n >= len(u):
            gap = n - len(u)
            return self.reachable_exact(u[-1], v[0], gap + 1)
        # overlap: build the merged constraint word and check it is legal
        length = max(len(u), n + len(v))
        merged = []
        for i in range(length):
            from_u = u[i] if i < len(u) else None
            from_v = v[i - n] if n <= i < n + len(v) else None
            if from_u is not None and from_v is not None and from_u != from_v:
                return False
            merged.append(from_u if from_u is not None else from_v)
        return all(self.follows(a, b) for a, b in zip(merged, merged[1:]))

    def return_times(self, u: str, v: str, horizon: int = DEFAULT_HORIZON) -> IndexSet:
        members = {n for n in range(horizon) if self.return_membership(u, v, n)}
        return IndexSet.of(horizon, members)


def full_shift(symbols: int = 2, resolution: int = 3) -> ShiftSystem:
    alphabet = "".join(str(i) for i in range(symbols))
    if symbols > 10:
        raise InputError("full_shift helper supports at most 10 symbols")
    return ShiftSystem(alphabet, None, resolution)


def golden_mean_shift(resolution: int = 4) -> ShiftSystem:
    """Binary SFT forbidding the word 11."""
    return ShiftSystem("01", [("0", "0"), ("0", "1"), ("1", "0")],
                       resolution, label=f"goldenmean(k={resolution})")
