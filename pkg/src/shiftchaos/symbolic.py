"""Alphabets, finite words, and exactly represented symbol sequences.

Symbols are the integers 1..m everywhere in the public interface.  An
infinite sequence is stored exactly as a preperiod plus a repeating period;
arbitrary sequences are approximated by bounded streams that carry an
explicit horizon.  Every operation here is a pure function on immutable
values.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .errors import HorizonError, ResourceCapError

Word = tuple[int, ...]

DEFAULT_WORD_CAP = 4096


def enumeration_cap() -> int:
    """Word cap for exhaustive searches; DSC_CAP overrides the default."""
    raw = os.environ.get("DSC_CAP")
    if raw is None:
        return DEFAULT_WORD_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"DSC_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"DSC_CAP must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class Alphabet:
    """The symbol set {1..m}."""

    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(
                f"alphabet needs at least 2 symbols to separate anything, got m={self.m}"
            )

    def symbols(self) -> range:
        return range(1, self.m + 1)

    def check_word(self, w: Word) -> None:
        for i, s in enumerate(w):
            if not 1 <= s <= self.m:
                raise ValueError(f"word symbol {s} at index {i} outside 1..{self.m}")


def word(symbols, m: int | None = None) -> Word:
    """Validate and freeze a finite symbol sequence."""
    w = tuple(int(s) for s in symbols)
    for i, s in enumerate(w):
        if s < 1:
            raise ValueError(f"word symbol {s} at index {i}; symbols start at 1")
        if m is not None and s > m:
            raise ValueError(f"word symbol {s} at index {i} outside 1..{m}")
    return w


def word_key(w: Word) -> str:
    """Serialize a word as a comma-joined JSON map key, e.g. ``1,2``."""
    return ",".join(str(s) for s in w)


def parse_word_key(key: str) -> Word:
    if not key:
        return ()
    return tuple(int(part) for part in key.split(","))


def _minimal_period(per: Word) -> Word:
    length = len(per)
    for d in range(1, length):
        if length % d == 0 and per[:d] * (length // d) == per:
            return per[:d]
    return per


def _canonicalize(pre: Word, per: Word) -> tuple[Word, Word]:
    if not per:
        return pre, ()
    per = _minimal_period(per)
    pre = list(pre)
    while pre and pre[-1] == per[-1]:
        per = per[-1:] + per[:-1]
        pre.pop()
    return tuple(pre), per


class SymbolicPoint:
    """A point of the symbolic space, in one of two exact presentations.

    Eventually periodic: ``preperiod + period + period + ...`` with the
    period nonempty; stored in canonical form (minimal period, minimal
    preperiod) so equality is structural.  Bounded stream: a finite symbol
    sequence with horizon equal to its length; asking beyond the horizon
    raises :class:`HorizonError`.
    """

    __slots__ = ("_pre", "_per")

    def __init__(self, preperiod=(), period=()):
        pre = word(preperiod)
        per = word(period)
        pre, per = _canonicalize(pre, per)
        object.__setattr__(self, "_pre", pre)
        object.__setattr__(self, "_per", per)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolicPoint is immutable")

    @property
    def preperiod(self) -> Word:
        return self._pre

    @property
    def period(self) -> Word:
        return self._per

    @property
    def is_bounded(self) -> bool:
        return not self._per

    @property
    def horizon(self) -> int | None:
        """Number of defined symbols for a bounded stream, None if infinite."""
        return len(self._pre) if self.is_bounded else None

    def symbol_at(self, k: int) -> int:
        """Symbol at 1-based position ``k``."""
        if k < 1:
            raise ValueError(f"positions are 1-based, got {k}")
        if k <= len(self._pre):
            return self._pre[k - 1]
        if not self._per:
            raise HorizonError(
                f"position {k} beyond stream horizon {len(self._pre)}"
            )
        return self._per[(k - 1 - len(self._pre)) % len(self._per)]

    def prefix(self, n: int) -> Word:
        """The first ``n`` symbols."""
        if n < 0:
            raise ValueError(f"prefix length must be >= 0, got {n}")
        if self.is_bounded:
            if n > len(self._pre):
                raise HorizonError(
                    f"prefix of length {n} beyond stream horizon {len(self._pre)}"
                )
            return self._pre[:n]
        out = list(self._pre[:n])
        i = len(out)
        per = self._per
        while len(out) < n:
            out.append(per[(i - len(self._pre)) % len(per)])
            i += 1
        return tuple(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicPoint):
            return NotImplemented
        return self._pre == other._pre and self._per == other._per

    def __hash__(self) -> int:
        return hash((self._pre, self._per))

    def __repr__(self) -> str:
        if self.is_bounded:
            return f"SymbolicPoint.stream({list(self._pre)})"
        return f"SymbolicPoint(preperiod={list(self._pre)}, period={list(self._per)})"

    @classmethod
    def stream(cls, symbols) -> "SymbolicPoint":
        """A bounded stream; the horizon is the number of symbols given."""
        return cls(preperiod=symbols, period=())

    def to_dict(self) -> dict:
        if self.is_bounded:
            return {"symbols": list(self._pre), "horizon": len(self._pre)}
        return {"preperiod": list(self._pre), "period": list(self._per)}

    @classmethod
    def from_dict(cls, data: dict) -> "SymbolicPoint":
        if "period" in data:
            return cls(tuple(data.get("preperiod", ())), tuple(data["period"]))
        return cls.stream(tuple(data["symbols"]))


def bounded_stream(symbols) -> SymbolicPoint:
    """A bounded stream point with declared horizon len(symbols)."""
    return SymbolicPoint.stream(symbols)


def periodic_point(w) -> SymbolicPoint:
    """The point made of endless repetitions of the block ``w``."""
    w = word(w)
    if not w:
        raise ValueError("periodic point needs a nonempty period block")
    return SymbolicPoint(period=w)


def shift(x: SymbolicPoint) -> SymbolicPoint:
    """Drop the first symbol: the similarity (Bernoulli shift) map."""
    if x.is_bounded:
        if not x.preperiod:
            raise HorizonError("stream horizon exhausted: cannot shift an empty stream")
        return SymbolicPoint.stream(x.preperiod[1:])
    if x.preperiod:
        return SymbolicPoint(x.preperiod[1:], x.period)
    per = x.period
    return SymbolicPoint(period=per[1:] + per[:1])


def shift_n(x: SymbolicPoint, n: int) -> SymbolicPoint:
    """Apply the shift ``n`` times; n = 0 is the identity."""
    if n < 0:
        raise ValueError(f"shift order must be >= 0, got {n}")
    if x.is_bounded:
        if n > len(x.preperiod):
            raise HorizonError(
                f"shift by {n} beyond stream horizon {len(x.preperiod)}"
            )
        return SymbolicPoint.stream(x.preperiod[n:])
    pre, per = x.preperiod, x.period
    if n <= len(pre):
        return SymbolicPoint(pre[n:], per)
    r = (n - len(pre)) % len(per)
    return SymbolicPoint(period=per[r:] + per[:r])


def cylinder_of(x: SymbolicPoint, n: int) -> Word:
    """The first ``n`` symbols: the word naming the depth-n cylinder of x."""
    return x.prefix(n)


def in_cylinder(x: SymbolicPoint, w) -> bool:
    """Whether x lies in the cylinder named by ``w``."""
    w = word(w)
    return cylinder_of(x, len(w)) == w


def concat_point(w, x: SymbolicPoint) -> SymbolicPoint:
    """Prepend the finite word ``w``; shifting |w| times recovers ``x``."""
    w = word(w)
    if x.is_bounded:
        return SymbolicPoint.stream(w + x.preperiod)
    return SymbolicPoint(w + x.preperiod, x.period)


def enumerate_words(m: int, n: int, cap: int | None = None) -> list[Word]:
    """All m**n words of length ``n`` over {1..m} in lexicographic order."""
    if m < 2:
        raise ValueError(f"alphabet size must be >= 2, got {m}")
    if n < 0:
        raise ValueError(f"word length must be >= 0, got {n}")
    if cap is None:
        cap = enumeration_cap()
    count = m**n
    if count > cap:
        raise ResourceCapError(
            f"enumeration of {m}^{n} = {count} words exceeds cap {cap}"
        )
    return [tuple(w) for w in itertools.product(range(1, m + 1), repeat=n)]


def transitive_prefix(m: int, k: int, cap: int | None = None, backend: str = "concat") -> Word:
    """A finite word containing every word of length <= k as a block.

    The reference construction concatenates all words of lengths 1..k in
    lexicographic order.  ``backend="debruijn"`` produces a shorter prefix
    with the same containment postcondition.
    """
    if k < 1:
        raise ValueError(f"block length bound must be >= 1, got {k}")
    if backend == "concat":
        out: list[int] = []
        for j in range(1, k + 1):
            for w in enumerate_words(m, j, cap):
                out.extend(w)
        return tuple(out)
    if backend == "debruijn":
        return _de_bruijn_prefix(m, k, cap)
    raise ValueError(f"unknown backend {backend!r}")


def _de_bruijn_prefix(m: int, k: int, cap: int | None = None) -> Word:
    """Linearized de Bruijn sequence B(m, k): every length-k word once.

    FKM construction via Lyndon words; the wrap-around is materialized by
    appending the first k-1 symbols, and every shorter word occurs because
    it extends to some length-k word.
    """
    if m < 2:
        raise ValueError(f"alphabet size must be >= 2, got {m}")
    if cap is None:
        cap = enumeration_cap()
    if m**k > cap:
        raise ResourceCapError(f"de Bruijn order {m}^{k} exceeds cap {cap}")
    a = [0] * (m * k)
    seq: list[int] = []

    def db(t: int, p: int) -> None:
        if t > k:
            if k % p == 0:
                seq.extend(a[1 : p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, m):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    seq.extend(seq[: k - 1])
    return tuple(s + 1 for s in seq)
