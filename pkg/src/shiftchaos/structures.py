"""Concrete cylinder geometries: interval structures and finite-state tables.

A structure assigns exact rational distances to points and exact diameters
to cylinders.  Geometric structures map each word to a closed interval and
evaluate points to exact rational coordinates (eventually periodic points
via geometric series, bounded streams via the left endpoint of their
deepest known cylinder).  The finite-state structure is the pseudometric
whose sequence distance depends only on the first symbols.

Distances on presentations are pseudometrics in general: two different
labels of the same underlying point sit at distance zero.  The ``is_metric``
flag records whether the label-to-point map is injective; checkers must not
read distance zero as label equality unless it is set.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import CapabilityError, HorizonError, ValidationError
from .symbolic import (
    Alphabet,
    SymbolicPoint,
    Word,
    enumerate_words,
    word,
)


def _to_fraction(value, field: str) -> Fraction:
    """Exact conversion of a config number (int, float, or 'a/b' string)."""
    try:
        if isinstance(value, bool):
            raise TypeError
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        pass
    raise ValidationError(field, f"expected a rational number, got {value!r}")


def _fraction_jsonable(f: Fraction):
    return int(f) if f.denominator == 1 else str(f)


class ChaoticStructure:
    """Distance/diameter geometry over the cylinder family of an alphabet.

    Subclasses provide exact ``point_distance``, ``cylinder_diameter`` and
    ``cylinder_distance``; ``max_cylinder_diameter`` has a closed form for
    every built-in structure.  All instances are immutable after
    construction and all operations are pure.
    """

    alphabet: Alphabet
    is_metric: bool = False
    has_exact_diameters: bool = True
    is_geometric: bool = False

    def point_distance(self, x: SymbolicPoint, y: SymbolicPoint) -> Fraction:
        raise NotImplementedError

    def cylinder_diameter(self, w) -> Fraction:
        raise NotImplementedError

    def cylinder_distance(self, w1, w2) -> Fraction:
        w1, w2 = word(w1, self.alphabet.m), word(w2, self.alphabet.m)
        if len(w1) != len(w2):
            raise ValueError(
                f"cylinder distance needs equal depths, got {len(w1)} and {len(w2)}"
            )
        return self._cylinder_distance(w1, w2)

    def _cylinder_distance(self, w1: Word, w2: Word) -> Fraction:
        raise NotImplementedError

    def max_cylinder_diameter(self, depth: int, cap: int | None = None) -> Fraction:
        """Largest diameter among depth-``depth`` cylinders.

        The generic fallback enumerates all words at the given depth and is
        therefore capped; built-ins override it with a closed form.
        """
        if depth == 0:
            return self.cylinder_diameter(())
        words = enumerate_words(self.alphabet.m, depth, cap)
        return max(self.cylinder_diameter(w) for w in words)

    def eval_point(self, x: SymbolicPoint, depth: int) -> tuple[Fraction, Fraction]:
        raise CapabilityError(
            f"{type(self).__name__} has no geometric point evaluation"
        )

    def cylinder_starts(self, degree: int, cap: int | None = None):
        """Integer reduction for the separation kernel, or None.

        When available, returns ``(starts, denom)`` where entry i is the
        start of the i-th lexicographic depth-``degree`` cylinder in units
        of the common width 1/denom; the cylinder occupies [s, s+1]/denom,
        so inter-cylinder distance is exactly max(0, |s_i - s_j| - 1)/denom.
        """
        return None

    def config_dict(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__


class _IntervalStructure(ChaoticStructure):
    """Shared machinery for structures whose cylinders are closed intervals.

    A word maps to [units, units + 1] / base**n where ``units`` accumulates
    one digit per symbol in the given base.  Subclasses fix the base and the
    symbol-to-digit map.
    """

    base: int
    is_geometric = True
    has_exact_diameters = True

    def _digit(self, symbol: int) -> int:
        raise NotImplementedError

    def _word_units(self, w: Word) -> int:
        units = 0
        for s in w:
            units = units * self.base + self._digit(s)
        return units

    def word_interval(self, w) -> tuple[Fraction, Fraction]:
        """The closed interval carrying the cylinder named by ``w``."""
        w = word(w, self.alphabet.m)
        denom = self.base ** len(w)
        units = self._word_units(w)
        return Fraction(units, denom), Fraction(units + 1, denom)

    def eval_point(self, x: SymbolicPoint, depth: int) -> tuple[Fraction, Fraction]:
        """The depth-level cylinder interval containing the point."""
        if depth < 0:
            raise ValueError(f"depth must be >= 0, got {depth}")
        return self.word_interval(x.prefix(depth))

    def point_value(self, x: SymbolicPoint) -> Fraction:
        """Exact coordinate of a point.

        Eventually periodic points evaluate to their limit via the
        geometric series; bounded streams evaluate to the left endpoint of
        their deepest known cylinder (exact, and within one cylinder
        diameter of any extension's limit).
        """
        self.alphabet.check_word(x.preperiod)
        self.alphabet.check_word(x.period)
        b = self.base
        pre_units = self._word_units(x.preperiod)
        value = Fraction(pre_units, b ** len(x.preperiod))
        if x.is_bounded:
            return value
        per_units = self._word_units(x.period)
        tail = Fraction(per_units, b ** len(x.period) - 1)
        return value + tail / b ** len(x.preperiod)

    def point_distance(self, x: SymbolicPoint, y: SymbolicPoint) -> Fraction:
        return abs(self.point_value(x) - self.point_value(y))

    def cylinder_diameter(self, w) -> Fraction:
        w = word(w, self.alphabet.m)
        return Fraction(1, self.base ** len(w))

    def _cylinder_distance(self, w1: Word, w2: Word) -> Fraction:
        a, b = self._word_units(w1), self._word_units(w2)
        gap = abs(a - b) - 1
        if gap <= 0:
            return Fraction(0)
        return Fraction(gap, self.base ** len(w1))

    def max_cylinder_diameter(self, depth: int, cap: int | None = None) -> Fraction:
        if depth < 0:
            raise ValueError(f"depth must be >= 0, got {depth}")
        return Fraction(1, self.base**depth)

    def cylinder_starts(self, degree: int, cap: int | None = None):
        words = enumerate_words(self.alphabet.m, degree, cap)
        return [self._word_units(w) for w in words], self.base**degree


class MAdicIntervalStructure(_IntervalStructure):
    """[0, 1] split into m equal closed subintervals at every level.

    The word (i_1 .. i_n) maps to [v, v + m**-n] with
    v = sum_k (i_k - 1) m**-k; diameters are exactly m**-|w| and the m
    children tile their parent.  Distinct labels can share a point (the
    left endpoint of one cylinder is the right endpoint of its neighbour),
    so the presentation distance is a pseudometric: ``is_metric`` is False.
    """

    is_metric = False

    def __init__(self, m: int):
        self.alphabet = Alphabet(m)
        self.base = m

    def _digit(self, symbol: int) -> int:
        return symbol - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, MAdicIntervalStructure):
            return NotImplemented
        return self.alphabet == other.alphabet

    def __hash__(self) -> int:
        return hash(("madic", self.alphabet.m))

    def config_dict(self) -> dict:
        return {"type": "madic", "m": self.alphabet.m}

    def describe(self) -> str:
        return f"madic(m={self.alphabet.m})"


class CantorStructure(_IntervalStructure):
    """Middle-thirds Cantor construction on the binary alphabet.

    Symbol 1 selects the left third and symbol 2 the right third, so the
    word (i_1 .. i_n) occupies an interval of length exactly 3**-n and the
    two depth-1 cylinders sit at distance 1/3.  The labeling is injective,
    hence a true metric on presentations.
    """

    is_metric = True

    def __init__(self):
        self.alphabet = Alphabet(2)
        self.base = 3

    def _digit(self, symbol: int) -> int:
        return 2 * (symbol - 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CantorStructure):
            return NotImplemented
        return True

    def __hash__(self) -> int:
        return hash("cantor")

    def config_dict(self) -> dict:
        return {"type": "cantor"}

    def describe(self) -> str:
        return "cantor"


class FiniteStateStructure(ChaoticStructure):
    """State-distance table geometry: sequences compare by first symbol only.

    d(x, y) = dist[x_1][y_1], so every cylinder of depth >= 1 has diameter
    zero and distinct sequences sharing a first symbol are at distance zero
    (a pseudometric by construction).
    """

    is_metric = False
    is_geometric = False
    has_exact_diameters = True

    def __init__(self, distances):
        table = self._validate(distances)
        self.distances = table
        self.alphabet = Alphabet(len(table))

    @staticmethod
    def _validate(distances) -> tuple[tuple[Fraction, ...], ...]:
        if not isinstance(distances, (list, tuple)) or len(distances) < 2:
            raise ValidationError("distances", "need a square table of size >= 2")
        p = len(distances)
        rows = []
        for i, row in enumerate(distances):
            if not isinstance(row, (list, tuple)) or len(row) != p:
                raise ValidationError(f"distances[{i}]", f"expected a row of length {p}")
            rows.append(
                tuple(_to_fraction(v, f"distances[{i}][{j}]") for j, v in enumerate(row))
            )
        for i in range(p):
            for j in range(p):
                field = f"distances[{i}][{j}]"
                if rows[i][j] < 0:
                    raise ValidationError(field, "distances must be nonnegative")
                if i == j and rows[i][j] != 0:
                    raise ValidationError(field, "diagonal entries must be zero")
                if i != j and rows[i][j] == 0:
                    raise ValidationError(field, "off-diagonal distances must be positive")
                if rows[i][j] != rows[j][i]:
                    raise ValidationError(field, "distance table must be symmetric")
        return tuple(rows)

    @classmethod
    def unit(cls, p: int) -> "FiniteStateStructure":
        """The p-state structure with all off-diagonal distances equal to 1."""
        return cls([[0 if i == j else 1 for j in range(p)] for i in range(p)])

    @property
    def p(self) -> int:
        return self.alphabet.m

    def state_distance(self, i: int, j: int) -> Fraction:
        if not (1 <= i <= self.p and 1 <= j <= self.p):
            raise ValueError(f"states ({i}, {j}) outside 1..{self.p}")
        return self.distances[i - 1][j - 1]

    def point_distance(self, x: SymbolicPoint, y: SymbolicPoint) -> Fraction:
        return self.state_distance(x.symbol_at(1), y.symbol_at(1))

    def cylinder_diameter(self, w) -> Fraction:
        w = word(w, self.p)
        if w:
            return Fraction(0)
        return max(max(row) for row in self.distances)

    def _cylinder_distance(self, w1: Word, w2: Word) -> Fraction:
        if not w1:
            return Fraction(0)
        return self.state_distance(w1[0], w2[0])

    def max_cylinder_diameter(self, depth: int, cap: int | None = None) -> Fraction:
        if depth < 0:
            raise ValueError(f"depth must be >= 0, got {depth}")
        if depth == 0:
            return self.cylinder_diameter(())
        return Fraction(0)

    def config_dict(self) -> dict:
        return {
            "type": "finite_state",
            "distances": [[_fraction_jsonable(v) for v in row] for row in self.distances],
        }

    def describe(self) -> str:
        return f"finite_state(p={self.p})"


def load_structure(config) -> ChaoticStructure:
    """Build and validate a structure from a config dict or JSON string.

    Accepted shapes: {"type":"madic","m":<int>}, {"type":"cantor"},
    {"type":"finite_state","distances":[[...]]}.  The "custom" type is
    reserved.  Validation errors name the offending field.
    """
    if isinstance(config, str):
        try:
            config = json.loads(config)
        except json.JSONDecodeError as exc:
            raise ValidationError("config", f"invalid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise ValidationError("config", f"expected an object, got {type(config).__name__}")
    kind = config.get("type")
    if kind == "madic":
        m = config.get("m")
        if not isinstance(m, int) or isinstance(m, bool) or m < 2:
            raise ValidationError("m", f"expected an integer >= 2, got {m!r}")
        return MAdicIntervalStructure(m)
    if kind == "cantor":
        return CantorStructure()
    if kind == "finite_state":
        if "distances" not in config:
            raise ValidationError("distances", "missing distance table")
        return FiniteStateStructure(config["distances"])
    if kind == "custom":
        raise ValidationError("type", "the custom structure type is reserved")
    raise ValidationError("type", f"unknown structure type {kind!r}")
