"""Seeded finite-state IID process simulators.

A process is a categorical distribution with strictly positive rational
probabilities over states 1..p, a state-distance table, and a named 64-bit
generator with a seed.  Realizations are finite words; reading a
realization as a bounded stream makes each experiment step one iteration
of the shift, which is what the composite check verifies.

Sampling is inverse-CDF against splitmix64 draws with exact rational cut
points, so a (process, seed, n) triple is bit-reproducible and a length-n
realization is a prefix of the length-(n+k) one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from ._backend import kernels
from .errors import ResourceCapError, ValidationError
from .reporting import FAIL, PASS, VerificationReport, combine_verdicts
from .structures import FiniteStateStructure, _to_fraction
from .symbolic import SymbolicPoint, bounded_stream, enumerate_words, shift, word_key
from .verification import check_diameter_condition, check_separation

RNG_ALGORITHM = "splitmix64"
_TWO64 = 1 << 64

BUILTIN_STATE_COUNTS = {
    "coin": 2,
    "die": 6,
    "tetra": 4,
    "traffic": 3,
    "five_city": 5,
}


@dataclass(frozen=True)
class FiniteStateProcess:
    """IID categorical process over states 1..p with a seeded generator."""

    probabilities: tuple[Fraction, ...]
    structure: FiniteStateStructure
    seed: int = 0
    name: str = ""
    rng_algorithm: str = RNG_ALGORITHM

    def __post_init__(self):
        probs = tuple(Fraction(q) for q in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if len(probs) < 2:
            raise ValueError(f"need at least 2 states, got {len(probs)}")
        for i, q in enumerate(probs):
            if q <= 0:
                raise ValueError(f"probabilities[{i}] = {q} must be strictly positive")
            if q < Fraction(1, _TWO64):
                raise ValueError(
                    f"probabilities[{i}] = {q} is below the 2**-64 generator resolution"
                )
        if sum(probs) != 1:
            raise ValueError(f"probabilities sum to {sum(probs)}, expected exactly 1")
        if self.structure.p != len(probs):
            raise ValueError(
                f"distance table is {self.structure.p}x{self.structure.p} "
                f"but there are {len(probs)} probabilities"
            )
        if not 0 <= self.seed < _TWO64:
            raise ValueError(f"seed must be a 64-bit integer, got {self.seed}")
        if self.rng_algorithm != RNG_ALGORITHM:
            raise ValueError(f"unknown rng algorithm {self.rng_algorithm!r}")
        if not self.name:
            object.__setattr__(self, "name", f"finite_state_process(p={len(probs)})")

    @property
    def p(self) -> int:
        return len(self.probabilities)

    def thresholds(self) -> tuple[int, ...]:
        """Exact u64 cut points: symbol i iff draw < ceil(C_i * 2**64)."""
        cuts = []
        cumulative = Fraction(0)
        for q in self.probabilities[:-1]:
            cumulative += q
            scaled = cumulative * _TWO64
            cuts.append(-(-scaled.numerator // scaled.denominator))
        return tuple(cuts)

    def with_seed(self, seed: int) -> "FiniteStateProcess":
        return FiniteStateProcess(
            probabilities=self.probabilities,
            structure=self.structure,
            seed=seed,
            name=self.name,
            rng_algorithm=self.rng_algorithm,
        )

    def config_dict(self) -> dict:
        return {
            "type": "finite_state_process",
            "probabilities": [str(q) for q in self.probabilities],
            "distances": self.structure.config_dict()["distances"],
            "seed": self.seed,
            "rng": self.rng_algorithm,
            "name": self.name,
        }

    @classmethod
    def from_config(cls, config) -> "FiniteStateProcess":
        if isinstance(config, str):
            try:
                config = json.loads(config)
            except json.JSONDecodeError as exc:
                raise ValidationError("config", f"invalid JSON: {exc}") from None
        if not isinstance(config, dict):
            raise ValidationError("config", "expected an object")
        if config.get("type") != "finite_state_process":
            raise ValidationError("type", f"expected finite_state_process, got {config.get('type')!r}")
        raw_probs = config.get("probabilities")
        if not isinstance(raw_probs, (list, tuple)) or not raw_probs:
            raise ValidationError("probabilities", "missing probability list")
        probs = tuple(
            _to_fraction(q, f"probabilities[{i}]") for i, q in enumerate(raw_probs)
        )
        if "distances" in config:
            structure = FiniteStateStructure(config["distances"])
        else:
            structure = FiniteStateStructure.unit(len(probs))
        seed = config.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ValidationError("seed", f"expected an integer, got {seed!r}")
        try:
            return cls(
                probabilities=probs,
                structure=structure,
                seed=seed,
                name=config.get("name", ""),
            )
        except ValueError as exc:
            raise ValidationError("config", str(exc)) from None


def builtin_process(name: str, seed: int = 0) -> FiniteStateProcess:
    """Named example processes: uniform with unit state distances.

    Known names: coin (p=2), die (p=6), tetra (p=4), traffic (p=3),
    five_city (p=5).  The sources name these processes without fixing a
    distribution, so all builtins are uniform; five_city in particular is
    an interpretation.
    """
    if name not in BUILTIN_STATE_COUNTS:
        known = ", ".join(sorted(BUILTIN_STATE_COUNTS))
        raise ValueError(f"unknown builtin process {name!r}; known: {known}")
    p = BUILTIN_STATE_COUNTS[name]
    return FiniteStateProcess(
        probabilities=tuple(Fraction(1, p) for _ in range(p)),
        structure=FiniteStateStructure.unit(p),
        seed=seed,
        name=name,
    )


@dataclass(frozen=True)
class Realization:
    """One sample path; regenerating with the same (process, seed, n) is identical."""

    process: str
    rng: str
    seed: int
    symbols: tuple[int, ...]
    p: int

    @property
    def n(self) -> int:
        return len(self.symbols)

    def to_dict(self) -> dict:
        return {
            "process": self.process,
            "rng": self.rng,
            "seed": self.seed,
            "n": self.n,
            "symbols": list(self.symbols),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict, p: int | None = None) -> "Realization":
        symbols = tuple(data["symbols"])
        return cls(
            process=data.get("process", ""),
            rng=data.get("rng", RNG_ALGORITHM),
            seed=data.get("seed", 0),
            symbols=symbols,
            p=p if p is not None else max(symbols),
        )


def sample_realization(proc: FiniteStateProcess, n: int) -> Realization:
    """Draw ``n`` IID symbols; one generator output is consumed per symbol."""
    if n < 1:
        raise ValueError(f"realization length must be >= 1, got {n}")
    symbols = kernels.sample_categorical(proc.seed, list(proc.thresholds()), n)
    return Realization(
        process=proc.name,
        rng=proc.rng_algorithm,
        seed=proc.seed,
        symbols=tuple(symbols),
        p=proc.p,
    )


def realization_to_point(r: Realization) -> SymbolicPoint:
    """Read a realization as a bounded stream with horizon n."""
    if not r.symbols:
        raise ValueError("cannot read an empty realization as a point")
    return bounded_stream(r.symbols)


def empirical_frequencies(r: Realization) -> tuple[Fraction, ...]:
    """Exact occurrence counts divided by n, one entry per state 1..p."""
    if not r.symbols:
        raise ValueError("empty realization has no frequencies")
    counts = [0] * r.p
    for s in r.symbols:
        counts[s - 1] += 1
    return tuple(Fraction(c, r.n) for c in counts)


def shift_equivalence(r: Realization, tail: Realization) -> VerificationReport:
    """Compare the shifted realization stream against the tail stream.

    Passes iff the two agree at every position; the first mismatch index
    (1-based) is recorded otherwise.
    """
    point = realization_to_point(r)
    tail_point = realization_to_point(tail)
    shifted = shift(point)
    positions = min(shifted.horizon, tail_point.horizon)
    first_mismatch = None
    for k in range(1, positions + 1):
        if shifted.symbol_at(k) != tail_point.symbol_at(k):
            first_mismatch = k
            break
    length_ok = shifted.horizon == tail_point.horizon
    verdict = PASS if (first_mismatch is None and length_ok) else FAIL
    return VerificationReport(
        check="shift_equivalence",
        params={"process": r.process, "seed": r.seed, "n": r.n},
        verdict=verdict,
        horizon=positions,
        evidence={
            "positions_compared": positions,
            "first_mismatch": first_mismatch,
            "lengths_match": length_ok,
        },
    )


def step_shift_equivalence(proc: FiniteStateProcess, n: int) -> VerificationReport:
    """Verify that one process step is one shift on the seeded realization."""
    if n < 2:
        raise ValueError(f"need n >= 2 to compare a shift, got {n}")
    r = sample_realization(proc, n)
    tail = Realization(
        process=r.process, rng=r.rng, seed=r.seed, symbols=r.symbols[1:], p=r.p
    )
    return shift_equivalence(r, tail)


def verify_process_chaos(
    proc: FiniteStateProcess,
    k: int,
    n: int,
    threshold=Fraction(1, 100),
    cap: int | None = None,
    jobs: int = 1,
) -> VerificationReport:
    """Composite check that the process carries the shift-chaos structure.

    (a) diameter condition on the state structure (zero depth-1 diameters),
    (b) degree-1 separation over the distance table, (c) empirical
    transitivity: the seeded realization visits every depth-k cylinder,
    with first-visit times recorded, (d) exact shift equivalence.  The
    transitivity leg is labeled empirical evidence, not proof; a missing
    cylinder at this finite n is a fail naming the cylinder.
    """
    if k < 1:
        raise ValueError(f"cylinder depth must be >= 1, got {k}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    cylinders = proc.p**k
    words = enumerate_words(proc.p, k, cap)
    diameter = check_diameter_condition(proc.structure, 1, threshold)
    cert, separation = check_separation(proc.structure, 1, cap, jobs)

    r = sample_realization(proc, n)
    visits = kernels.first_visit_times(list(r.symbols), proc.p, k)
    first_visits = {}
    missing = []
    for idx, w in enumerate(words):
        if visits[idx] < 0:
            missing.append(w)
        else:
            first_visits[w] = visits[idx]
    min_cylinder_probability = min(
        _word_probability(proc, w) for w in words
    )
    expected_min_count = n * min_cylinder_probability
    undersampled = expected_min_count < 10
    transitivity = VerificationReport(
        check="empirical_transitivity",
        params={"process": proc.config_dict(), "k": k, "n": n},
        verdict=PASS if not missing else FAIL,
        horizon=n,
        evidence={
            "kind": "empirical",
            "cylinders": cylinders,
            "visited": cylinders - len(missing),
            "missing_cylinders": [word_key(w) for w in missing],
            "first_visits": {word_key(w): t for w, t in first_visits.items()},
            "expected_min_count": expected_min_count,
            "undersampled_warning": undersampled,
        },
    )
    shift_rep = step_shift_equivalence(proc, n)

    verdict = combine_verdicts(
        [diameter.verdict, separation.verdict, transitivity.verdict, shift_rep.verdict]
    )
    return VerificationReport(
        check="process_chaos",
        params={
            "process": proc.config_dict(),
            "k": k,
            "n": n,
            "threshold": threshold,
            "jobs": jobs,
        },
        verdict=verdict,
        horizon=n,
        evidence={
            "diameter_condition": diameter,
            "separation": separation,
            "epsilon0": separation.evidence["epsilon0"],
            "empirical_transitivity": transitivity,
            "shift_equivalence": shift_rep,
        },
    )


def _word_probability(proc: FiniteStateProcess, w) -> Fraction:
    prob = Fraction(1)
    for s in w:
        prob *= proc.probabilities[s - 1]
    return prob
