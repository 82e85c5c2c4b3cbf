"""Finite-horizon chaos checkers and constructive witnesses.

Every limit statement is checked at an explicit finite horizon and says so:
``pass`` needs an exact closed form or a replayed inequality, ``inconclusive``
marks properties that were only sampled.  All comparisons are exact rational
arithmetic; no check ever relies on the triangle inequality, and none reads
distance zero as point equality (the built-in distances are pseudometrics on
presentations).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ._backend import kernels
from .errors import ResourceCapError
from .reporting import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    VerificationReport,
    combine_verdicts,
)
from .structures import ChaoticStructure
from .symbolic import (
    SymbolicPoint,
    Word,
    concat_point,
    cylinder_of,
    enumerate_words,
    periodic_point,
    shift_n,
    transitive_prefix,
    word_key,
)

DEFAULT_SEARCH_DEPTH = 256


@dataclass(frozen=True)
class SeparationCertificate:
    """Witnessed uniform gap between same-depth cylinders.

    For every word of length ``degree``, ``witness_map`` names a word of the
    same length whose cylinder sits at distance >= ``epsilon0``; epsilon0 is
    the exact optimum min-max gap.
    """

    degree: int
    epsilon0: Fraction
    witness_map: dict[Word, Word]

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "epsilon0": str(self.epsilon0),
            "witness_map": {word_key(k): word_key(v) for k, v in self.witness_map.items()},
        }


def _structure_params(st: ChaoticStructure) -> dict:
    try:
        return st.config_dict()
    except NotImplementedError:
        return {"type": "custom", "describe": st.describe()}


def _chunk_ranges(n: int, jobs: int):
    jobs = max(1, min(jobs, n))
    step = -(-n // jobs)
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]


def check_diameter_condition(
    st: ChaoticStructure,
    max_depth: int,
    threshold,
    cap: int | None = None,
) -> VerificationReport:
    """Check that max cylinder diameters shrink below ``threshold``.

    Evidence records D_n for n = 1..max_depth.  Verdict: pass when the
    sequence is non-increasing and D_max_depth < threshold; inconclusive
    when non-increasing but still above threshold at the examined depth;
    fail when the nesting monotonicity is violated.
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    threshold = Fraction(threshold)
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    diameters = [st.max_cylinder_diameter(n, cap) for n in range(1, max_depth + 1)]
    non_increasing = all(b <= a for a, b in zip(diameters, diameters[1:]))
    below = diameters[-1] < threshold
    if not non_increasing:
        verdict = FAIL
    elif below:
        verdict = PASS
    else:
        verdict = INCONCLUSIVE
    return VerificationReport(
        check="diameter_condition",
        params={
            "structure": _structure_params(st),
            "max_depth": max_depth,
            "threshold": threshold,
        },
        verdict=verdict,
        horizon=max_depth,
        evidence={
            "max_diameters": diameters,
            "non_increasing": non_increasing,
            "final_diameter": diameters[-1],
            "below_threshold": below,
            "closed_form": st.has_exact_diameters,
        },
    )


def check_separation(
    st: ChaoticStructure,
    degree: int,
    cap: int | None = None,
    jobs: int = 1,
) -> tuple[SeparationCertificate | None, VerificationReport]:
    """Exhaustive min-max cylinder-gap search at the given degree.

    epsilon0 = min over words w of (max over words v of d(F_w, F_v)),
    evaluated over every pair of depth-``degree`` cylinders.  Passes iff
    epsilon0 > 0, in which case the certificate maps each word to the
    lexicographically smallest witness at distance >= epsilon0.  The outer
    loop may be partitioned over ``jobs`` workers; results combine by exact
    min, so the outcome does not depend on the partitioning.
    """
    if degree < 1:
        raise ValueError(f"separation degree must be >= 1, got {degree}")
    words = enumerate_words(st.alphabet.m, degree, cap)
    reduction = st.cylinder_starts(degree, cap)
    if reduction is not None:
        starts, denom = reduction
        eps0, witness_pairs = _separation_integer(starts, denom, words, jobs)
    else:
        eps0, witness_pairs = _separation_generic(st, words, jobs)
    passed = eps0 > 0
    witness_map = dict(witness_pairs) if passed else None
    evidence = {
        "epsilon0": eps0,
        "word_count": len(words),
        "pairs_examined": len(words) * len(words),
        "pseudometric": not st.is_metric,
        "witness_map": (
            {word_key(k): word_key(v) for k, v in witness_map.items()}
            if witness_map is not None
            else None
        ),
    }
    report = VerificationReport(
        check="separation_condition",
        params={
            "structure": _structure_params(st),
            "degree": degree,
            "jobs": jobs,
        },
        verdict=PASS if passed else FAIL,
        horizon=degree,
        evidence=evidence,
    )
    cert = (
        SeparationCertificate(degree=degree, epsilon0=eps0, witness_map=witness_map)
        if passed
        else None
    )
    return cert, report


def _separation_integer(starts, denom, words, jobs):
    n = len(starts)
    ranges = _chunk_ranges(n, jobs)
    if len(ranges) == 1:
        eps_units = kernels.min_max_gap(starts, 0, n)
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            partial = pool.map(lambda r: kernels.min_max_gap(starts, r[0], r[1]), ranges)
            eps_units = min(partial)
    eps0 = Fraction(eps_units, denom)
    if eps_units <= 0:
        return eps0, []
    hits = kernels.gap_witnesses(starts, eps_units)
    return eps0, [(words[i], words[j]) for i, j in enumerate(hits)]


def _separation_generic(st, words, jobs):
    def best_for(i):
        w = words[i]
        return max(st.cylinder_distance(w, v) for v in words)

    def chunk_min(rng):
        lo, hi = rng
        return min(best_for(i) for i in range(lo, hi))

    ranges = _chunk_ranges(len(words), jobs)
    if len(ranges) == 1:
        eps0 = chunk_min(ranges[0])
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            eps0 = min(pool.map(chunk_min, ranges))
    if eps0 <= 0:
        return eps0, []
    pairs = []
    for w in words:
        for v in words:
            if st.cylinder_distance(w, v) >= eps0:
                pairs.append((w, v))
                break
    return eps0, pairs


def _depth_below(st, eps, min_depth, max_depth, cap=None):
    """Smallest depth k in [min_depth, max_depth] with D_k < eps."""
    for k in range(min_depth, max_depth + 1):
        if st.max_cylinder_diameter(k, cap) < eps:
            return k
    raise ResourceCapError(
        f"no depth <= {max_depth} brings the max cylinder diameter below {eps}"
    )


def periodic_approximation(
    st: ChaoticStructure,
    x: SymbolicPoint,
    eps,
    max_depth: int = DEFAULT_SEARCH_DEPTH,
) -> tuple[SymbolicPoint, VerificationReport]:
    """A periodic point within ``eps`` of ``x``: repeat x's depth-k prefix.

    k is the smallest depth >= 1 whose max cylinder diameter drops below
    eps; the approximant is exactly k-periodic and shares x's depth-k
    cylinder, so the distance bound is replayed, not assumed.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    k = _depth_below(st, eps, 1, max_depth)
    diameter_k = st.max_cylinder_diameter(k)
    prefix = cylinder_of(x, k)
    approx = periodic_point(prefix)
    distance = st.point_distance(x, approx)
    periodic_ok = shift_n(approx, k) == approx
    close_ok = distance <= diameter_k
    report = VerificationReport(
        check="periodic_approximation",
        params={
            "structure": _structure_params(st),
            "target": x,
            "eps": eps,
        },
        verdict=PASS if (periodic_ok and close_ok) else FAIL,
        horizon=k,
        evidence={
            "depth": k,
            "max_diameter_at_depth": diameter_k,
            "prefix": list(prefix),
            "point": approx,
            "distance": distance,
            "distance_within_bound": close_ok,
            "exactly_periodic": periodic_ok,
        },
    )
    return approx, report


def transitive_witness(
    st: ChaoticStructure,
    k: int,
    cap: int | None = None,
) -> tuple[SymbolicPoint, dict[Word, int], VerificationReport]:
    """A point visiting every cylinder of depth <= k, with its schedule.

    The point is the lexicographic concatenation prefix followed by the
    constant tail 1,1,1,...; the schedule maps each word to the first shift
    order that lands in its cylinder, and every entry is replayed before
    the verdict is issued.
    """
    m = st.alphabet.m
    prefix = transitive_prefix(m, k, cap)
    x = concat_point(prefix, periodic_point((1,)))
    schedule: dict[Word, int] = {}
    missing = []
    symbols = list(prefix)
    for j in range(1, k + 1):
        visits = kernels.first_visit_times(symbols, m, j)
        for idx, w in enumerate(enumerate_words(m, j, cap)):
            if visits[idx] < 0:
                missing.append(w)
            else:
                schedule[w] = visits[idx]
    replay_ok = all(
        cylinder_of(shift_n(x, t), len(w)) == w for w, t in schedule.items()
    )
    verdict = PASS if (not missing and replay_ok) else FAIL
    report = VerificationReport(
        check="transitive_witness",
        params={"structure": _structure_params(st), "k": k},
        verdict=verdict,
        horizon=len(prefix),
        evidence={
            "point": x,
            "prefix_length": len(prefix),
            "schedule": {word_key(w): t for w, t in schedule.items()},
            "missing_words": [word_key(w) for w in missing],
            "replayed": replay_ok,
        },
    )
    return x, schedule, report


def sensitivity_witness(
    st: ChaoticStructure,
    x: SymbolicPoint,
    eps,
    cert: SeparationCertificate,
    max_depth: int = DEFAULT_SEARCH_DEPTH,
) -> tuple[SymbolicPoint, int, VerificationReport]:
    """An eps-close companion thrown at least epsilon0 away after T steps.

    The companion copies x's first k symbols (k the smallest depth with
    D_k < eps, possibly 0), then the certificate's witness block for x's
    next ``cert.degree`` symbols, then the constant tail.  Both the
    closeness and the separation inequality are replayed exactly.
    """
    if cert is None:
        raise ValueError("sensitivity needs a separation certificate")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    k = _depth_below(st, eps, 0, max_depth)
    diameter_k = st.max_cylinder_diameter(k)
    head = cylinder_of(x, k)
    block = cylinder_of(shift_n(x, k), cert.degree)
    if block not in cert.witness_map:
        raise ValueError(
            f"certificate of degree {cert.degree} does not cover block {block}"
        )
    partner_block = cert.witness_map[block]
    y = concat_point(head + partner_block, periodic_point((1,)))
    time = k
    initial_distance = st.point_distance(x, y)
    separated_distance = st.point_distance(shift_n(x, time), shift_n(y, time))
    cylinder_gap = st.cylinder_distance(block, partner_block)
    close_ok = initial_distance <= diameter_k
    separated_ok = separated_distance >= cylinder_gap >= cert.epsilon0
    report = VerificationReport(
        check="sensitivity_witness",
        params={
            "structure": _structure_params(st),
            "target": x,
            "eps": eps,
            "certificate_degree": cert.degree,
        },
        verdict=PASS if (close_ok and separated_ok) else FAIL,
        horizon=k + cert.degree,
        evidence={
            "closeness_depth": k,
            "max_diameter_at_depth": diameter_k,
            "companion": y,
            "time": time,
            "initial_distance": initial_distance,
            "separated_distance": separated_distance,
            "cylinder_gap": cylinder_gap,
            "epsilon0": cert.epsilon0,
            "block": list(block),
            "witness_block": list(partner_block),
        },
    )
    return y, time, report


def li_yorke_pair(
    st: ChaoticStructure,
    cert: SeparationCertificate,
    horizon: int,
) -> tuple[SymbolicPoint, SymbolicPoint, VerificationReport]:
    """A proximal-but-not-asymptotic pair built from doubling blocks.

    The two streams alternate disagreement blocks (witness-map chunk pairs)
    and agreement blocks (identical symbols), with block length 2**j for
    j = j0, j0+1, ...; j0 is the first j with 2**j >= cert.degree so every
    disagreement block holds at least one full witness chunk.  Replayed
    evidence: the minimum distance over the horizon dips below the diameter
    bound of the longest fully-seen agreement block, while the maximum
    stays at or above epsilon0.
    """
    if cert is None:
        raise ValueError("li_yorke_pair needs a separation certificate")
    degree = cert.degree
    j0 = 1
    while 2**j0 < degree:
        j0 += 1
    first_cycle = 2 * 2**j0
    if horizon < first_cycle:
        raise ValueError(
            f"horizon {horizon} cannot contain one disagreement+agreement cycle "
            f"of length {first_cycle}"
        )
    base = (1,) * degree
    partner = cert.witness_map[base]
    xs: list[int] = []
    ys: list[int] = []
    blocks: list[tuple[str, int, int]] = []
    j = j0
    needed = horizon + degree + 1
    while len(xs) < needed:
        length = 2**j
        chunks, remainder = divmod(length, degree)
        blocks.append(("differ", len(xs), length))
        xs.extend(list(base) * chunks + [1] * remainder)
        ys.extend(list(partner) * chunks + [1] * remainder)
        blocks.append(("agree", len(xs), length))
        xs.extend([1] * length)
        ys.extend([1] * length)
        j += 1
    x = SymbolicPoint.stream(xs)
    y = SymbolicPoint.stream(ys)
    distances = [
        st.point_distance(shift_n(x, n), shift_n(y, n)) for n in range(horizon + 1)
    ]
    min_distance = min(distances)
    max_distance = max(distances)
    min_time = distances.index(min_distance)
    max_time = distances.index(max_distance)
    seen_agree = [
        (start, length)
        for kind, start, length in blocks
        if kind == "agree" and start + length <= horizon
    ]
    longest_agreement = max(length for _, length in seen_agree)
    agreement_bound = st.max_cylinder_diameter(longest_agreement)
    agreement_minima = [
        min(distances[start : start + length]) for start, length in seen_agree
    ]
    proximal_ok = min_distance <= agreement_bound
    separated_ok = max_distance >= cert.epsilon0
    report = VerificationReport(
        check="li_yorke_pair",
        params={
            "structure": _structure_params(st),
            "certificate_degree": degree,
            "horizon": horizon,
        },
        verdict=PASS if (proximal_ok and separated_ok) else FAIL,
        horizon=horizon,
        evidence={
            "x": x,
            "y": y,
            "min_distance": min_distance,
            "min_time": min_time,
            "max_distance": max_distance,
            "max_time": max_time,
            "longest_agreement_block": longest_agreement,
            "agreement_bound": agreement_bound,
            "agreement_block_minima": agreement_minima,
            "epsilon0": cert.epsilon0,
            "pseudometric": not st.is_metric,
            "blocks": [
                {"kind": kind, "start": start, "length": length}
                for kind, start, length in blocks
            ],
        },
    )
    return x, y, report


def poisson_return_check(
    x: SymbolicPoint,
    max_depth: int,
    horizon: int,
) -> VerificationReport:
    """Finite-horizon Poisson-return scan on cylinder prefixes.

    For each depth k <= max_depth, finds the least shift order n >= 1 that
    re-enters x's depth-k cylinder, or records its absence within the
    horizon.  Absence yields ``inconclusive``: a finite scan cannot refute
    recurrence.
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    symbols = x.prefix(horizon + max_depth)
    return_times: dict[int, int | None] = {}
    for k in range(1, max_depth + 1):
        target = symbols[:k]
        found = None
        for n in range(1, horizon + 1):
            if symbols[n : n + k] == target:
                found = n
                break
        return_times[k] = found
    missing = [k for k, n in return_times.items() if n is None]
    report = VerificationReport(
        check="poisson_return",
        params={"point": x, "max_depth": max_depth, "horizon": horizon},
        verdict=PASS if not missing else INCONCLUSIVE,
        horizon=horizon,
        evidence={
            "return_times": {str(k): n for k, n in return_times.items()},
            "no_return_depths": missing,
            "note": (
                "returns found for every depth"
                if not missing
                else "no return within horizon for listed depths; finite scan cannot refute"
            ),
        },
    )
    return report


@dataclass(frozen=True)
class DevaneyParams:
    """Parameter bundle for the composite check; defaults are the CLI defaults."""

    max_depth: int = 10
    threshold: Fraction = Fraction(1, 100)
    max_degree: int = 4
    transitive_depth: int = 3
    sample_period_max: int = 3
    eps_values: tuple = (Fraction(1, 2), Fraction(1, 8), Fraction(1, 64))
    cap: int | None = None
    jobs: int = 1

    def to_dict(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "threshold": str(self.threshold),
            "max_degree": self.max_degree,
            "transitive_depth": self.transitive_depth,
            "sample_period_max": self.sample_period_max,
            "eps_values": [str(e) for e in self.eps_values],
            "cap": self.cap,
            "jobs": self.jobs,
        }


def _sample_targets(st, params, extra=()):
    """Deterministic target grid: periodic points of bounded period, extras."""
    points = set()
    for length in range(1, params.sample_period_max + 1):
        for per in enumerate_words(st.alphabet.m, length, params.cap):
            points.add(periodic_point(per))
    ordered = sorted(points, key=lambda p: (len(p.period), p.period, p.preperiod))
    return ordered + [p for p in extra if p not in points]


def verify_devaney(
    st: ChaoticStructure,
    params: DevaneyParams | None = None,
) -> VerificationReport:
    """Composite check of the three chaos ingredients on a structure.

    Runs the diameter condition, a separation-degree search, and the three
    witness constructors (periodic approximation, transitive schedule,
    sensitivity) over a sampled target grid.  Density over the full space
    is not machine-checkable; the grid plus the constructors' replayed
    postconditions is what this report certifies.
    """
    if params is None:
        params = DevaneyParams()
    diameter = check_diameter_condition(
        st, params.max_depth, params.threshold, params.cap
    )
    separation_attempts = []
    cert = None
    cert_report = None
    for degree in range(1, params.max_degree + 1):
        cert, cert_report = check_separation(st, degree, params.cap, params.jobs)
        separation_attempts.append(
            {"degree": degree, "epsilon0": cert_report.evidence["epsilon0"]}
        )
        if cert is not None:
            break
    separation_verdict = PASS if cert is not None else FAIL

    witness_x, _, transitive_report = transitive_witness(
        st, params.transitive_depth, params.cap
    )
    targets = _sample_targets(st, params, extra=(witness_x,))

    density_runs = []
    density_verdicts = []
    for target in targets:
        for eps in params.eps_values:
            _, rep = periodic_approximation(st, target, eps)
            density_verdicts.append(rep.verdict)
            density_runs.append(
                {
                    "target": target,
                    "eps": eps,
                    "depth": rep.evidence["depth"],
                    "distance": rep.evidence["distance"],
                    "verdict": rep.verdict,
                }
            )
    density_verdict = combine_verdicts(density_verdicts)

    sensitivity_runs = []
    sensitivity_verdicts = []
    if cert is not None:
        for target in targets:
            for eps in params.eps_values:
                _, _, rep = sensitivity_witness(st, target, eps, cert)
                sensitivity_verdicts.append(rep.verdict)
                sensitivity_runs.append(
                    {
                        "target": target,
                        "eps": eps,
                        "time": rep.evidence["time"],
                        "separated_distance": rep.evidence["separated_distance"],
                        "verdict": rep.verdict,
                    }
                )
        sensitivity_verdict = combine_verdicts(sensitivity_verdicts)
    else:
        sensitivity_verdict = FAIL

    verdict = combine_verdicts(
        [
            diameter.verdict,
            separation_verdict,
            transitive_report.verdict,
            density_verdict,
            sensitivity_verdict,
        ]
    )
    return VerificationReport(
        check="devaney",
        params={"structure": _structure_params(st), **params.to_dict()},
        verdict=verdict,
        horizon=params.max_depth,
        evidence={
            "diameter_condition": diameter,
            "separation_attempts": separation_attempts,
            "separation": cert_report,
            "certificate": cert.to_dict() if cert is not None else None,
            "transitivity": transitive_report,
            "periodic_density": {
                "verdict": density_verdict,
                "targets": len(targets),
                "runs": density_runs,
            },
            "sensitivity": {
                "verdict": sensitivity_verdict,
                "targets": len(targets) if cert is not None else 0,
                "runs": sensitivity_runs,
            },
        },
    )
