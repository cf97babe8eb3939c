"""Planted non-stochastic strings and measured-gap experiment reports.

The exact inequalities of the core modules all run one way; their reverse
directions hold in the limit only up to machine-dependent constants, so
this package *measures* them instead of asserting them.  This module
collects those measurements into archivable JSON reports:

* ``make_nonstoch_system`` plants a string whose best-fit curve stays at a
  chosen deficiency level until a chosen budget and then drops to zero --
  the classical staircase certifying that no cheap sufficient explanation
  exists -- and ``verify_nonstoch`` checks the plan exactly against the
  synthesized codebook;
* ``additivity_defect_report`` measures, over every (string, model) pair,
  how far ``K(x)`` sits from ``K(S) + K(x|S)`` in both directions;
* ``reverse_fit_gap_report`` measures ``lambda(alpha+eps) - beta(alpha)
  - K(x)``, the reverse direction of the exact fit inequality;
* ``universal_gap_report`` aggregates the half-block family's signed gaps
  against exact profiles, plus the dominance slacks of every model;
* ``improvement_slack_report`` aggregates the deficiency slacks observed
  across large two-part improvements in anytime searches.

``generate_gap_reports`` runs the whole battery over a family of stock
systems and writes deterministic JSON files (no timestamps, sorted keys),
so reruns are byte-identical and diffs are meaningful.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .codec import BitString
from .descsys import (
    DescriptionSystem,
    FiniteSet,
    build_system,
    enumeration_stream,
)
from .errors import StructLabError
from .rational import log2_display
from .search import anytime_search, improvement_audit
from .structfn import profile
from .unistat import sli_dominance_report, universal_family_report

__all__ = [
    "NonStochPlan",
    "NonStochReport",
    "make_nonstoch_system",
    "verify_nonstoch",
    "AdditivityRecord",
    "AdditivityReport",
    "additivity_defect_report",
    "GapSummary",
    "ReverseFitGapReport",
    "reverse_fit_gap_report",
    "UniversalGapReport",
    "universal_gap_report",
    "ImprovementSlackReport",
    "improvement_slack_report",
    "build_report_family_systems",
    "generate_gap_reports",
]


def _json_number(v):
    """Make a numeric field JSON-safe: infinities become the string 'inf'."""
    if v is None:
        return None
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        if v == int(v):
            return int(v)
    return v


def _sample_strings(
    sys: DescriptionSystem, max_strings: "int | None", seed: int
) -> list[BitString]:
    universe = list(sys.universe_strings())
    if max_strings is None or max_strings >= len(universe):
        return universe
    rng = random.Random(seed)
    picked = rng.sample(universe, max_strings)
    return sorted(picked, key=BitString.sort_key)


def _stratified_sample(
    sys: DescriptionSystem, max_strings: "int | None", seed: int
) -> list[BitString]:
    """A seeded sample spread across weight classes.

    Uniform sampling concentrates on middle weights, where the simplest
    model is often already the best one; taking strings round-robin from
    every popcount class keeps the structured corners of the universe --
    where large improvements actually occur -- in the probe.
    """
    universe = list(sys.universe_strings())
    if max_strings is None or max_strings >= len(universe):
        return universe
    rng = random.Random(seed)
    classes: dict[int, list[BitString]] = {}
    for b in universe:
        classes.setdefault(bin(b.value).count("1"), []).append(b)
    pools = [rng.sample(v, len(v)) for _, v in sorted(classes.items())]
    picked: list[BitString] = []
    while len(picked) < max_strings and any(pools):
        for pool in pools:
            if pool and len(picked) < max_strings:
                picked.append(pool.pop())
    return sorted(picked, key=BitString.sort_key)


# ---------------------------------------------------------------------------
# planted non-stochastic strings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonStochPlan:
    """A synthesized system built around one deliberately atypical string.

    The codebook gives ``x`` a one-bit name, the full cube a one-bit name
    with a conditional shortcut that prices ``x`` at ``n - beta_level``
    bits inside it, and the singleton ``{x}`` a name of length ``alpha0``.
    Below budget ``alpha0`` the only model of ``x`` is the cube, where its
    deficiency is exactly ``beta_level``; at ``alpha0`` the singleton
    drops the deficiency to 0.
    """

    n: int
    alpha0: int
    beta_level: int
    x: BitString
    system: DescriptionSystem

    def expected_beta_keys(self) -> tuple:
        """The planted staircase as exact comparison keys per budget."""
        plateau = (Fraction(1 << self.beta_level),) * (self.alpha0 - 1)
        return (None,) + plateau + (Fraction(1),)


@dataclass(frozen=True)
class NonStochReport:
    """Exact check of a planted staircase against the synthesized codebook."""

    plan: NonStochPlan
    K_x: int
    c_sub: int
    actual_beta_keys: tuple
    ok: bool

    def beta_values(self) -> list[float]:
        return [
            math.inf if key is None else log2_display(key)
            for key in self.actual_beta_keys
        ]

    def to_json_dict(self) -> dict:
        return {
            "n": self.plan.n,
            "alpha0": self.plan.alpha0,
            "beta_level": self.plan.beta_level,
            "x": str(self.plan.x),
            "K_x": self.K_x,
            "c_sub": self.c_sub,
            "beta": [_json_number(v) for v in self.beta_values()],
            "ok": self.ok,
        }


def make_nonstoch_system(
    n: int, alpha0: int, beta_level: int, seed: int = 0
) -> NonStochPlan:
    """Synthesize a system in which one string resists cheap explanation.

    The returned plan's string has best-fit deficiency exactly
    ``beta_level`` at every budget in ``[1, alpha0)`` and exactly 0 at
    ``alpha0``.  The data namespace stays total (a literal name for every
    string) and all Kraft sums stay within budget, so the system is a
    legal codebook, not a bookkeeping trick.
    """
    if not 1 <= n <= 16:
        raise StructLabError(f"universe width must be in [1, 16], got {n}")
    if not 2 <= alpha0 <= 32:
        raise StructLabError(f"the drop budget must be in [2, 32], got {alpha0}")
    if not 1 <= beta_level <= n:
        raise StructLabError(
            f"the planted deficiency must be in [1, {n}], got {beta_level}"
        )
    rng = random.Random(seed)
    x = BitString.from_value(n, rng.randrange(1 << n))

    data = {BitString("0"): x}
    for v in range(1 << n):
        b = BitString.from_value(n, v)
        data[BitString("1") + b] = b

    cube = FiniteSet(n, range(1 << n))
    singleton_program = BitString("1" + "0" * (alpha0 - 1))
    sets = {BitString("0"): cube, singleton_program: FiniteSet(n, [x.value])}

    shortcut = BitString.from_value(n - beta_level, 0)
    shortcuts = {cube: {shortcut: x}}

    system = DescriptionSystem(n, data, sets, shortcuts)
    return NonStochPlan(n=n, alpha0=alpha0, beta_level=beta_level, x=x, system=system)


def verify_nonstoch(plan: NonStochPlan) -> NonStochReport:
    """Compare the planted staircase with the profile, key for key."""
    prof = profile(plan.system, plan.x)
    actual = tuple(prof.beta_key(alpha) for alpha in range(prof.alpha_max + 1))
    ok = actual == plan.expected_beta_keys() and prof.K_x == 1
    return NonStochReport(
        plan=plan,
        K_x=prof.K_x,
        c_sub=plan.system.c_sub,
        actual_beta_keys=actual,
        ok=ok,
    )


# ---------------------------------------------------------------------------
# additivity (chain-rule) defects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdditivityRecord:
    """One (string, model) pair's defect ``K(x) - K(S) - K(x|S)``."""

    x: BitString
    set_program: BitString
    K_x: int
    K_S: int
    K_cond: int
    defect: int

    def to_json_dict(self) -> dict:
        return {
            "x": str(self.x),
            "set_program": str(self.set_program),
            "K_x": self.K_x,
            "K_S": self.K_S,
            "K_cond": self.K_cond,
            "defect": self.defect,
        }


@dataclass(frozen=True)
class AdditivityReport:
    """Two-sided spread of the chain-rule defect across a whole system.

    The positive extreme is the system's subadditivity constant (two-part
    descriptions undershooting the plain name); the negative extreme says
    how far two-part descriptions can overshoot it.
    """

    pair_count: int
    c_sub: int
    max_defect: "int | None"
    min_defect: "int | None"
    max_record: "AdditivityRecord | None"
    min_record: "AdditivityRecord | None"
    histogram: dict

    def to_json_dict(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "c_sub": self.c_sub,
            "max_defect": self.max_defect,
            "min_defect": self.min_defect,
            "max_record": None if self.max_record is None else self.max_record.to_json_dict(),
            "min_record": None if self.min_record is None else self.min_record.to_json_dict(),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def additivity_defect_report(sys: DescriptionSystem) -> AdditivityReport:
    """Measure ``K(x) - K(S) - K(x|S)`` over every representable pair."""
    histogram: dict[int, int] = {}
    count = 0
    max_rec = min_rec = None
    for x in sys.universe_strings():
        k_x = sys.K_data(x)
        for entry in sys.entries_containing(x):
            defect = k_x - entry.K_S - int(entry.K_cond)
            record = AdditivityRecord(
                x=x,
                set_program=entry.witness_program,
                K_x=k_x,
                K_S=entry.K_S,
                K_cond=int(entry.K_cond),
                defect=defect,
            )
            count += 1
            histogram[defect] = histogram.get(defect, 0) + 1
            if max_rec is None or defect > max_rec.defect:
                max_rec = record
            if min_rec is None or defect < min_rec.defect:
                min_rec = record
    return AdditivityReport(
        pair_count=count,
        c_sub=sys.c_sub,
        max_defect=None if max_rec is None else max_rec.defect,
        min_defect=None if min_rec is None else min_rec.defect,
        max_record=max_rec,
        min_record=min_rec,
        histogram=histogram,
    )


# ---------------------------------------------------------------------------
# gap summaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapSummary:
    """Count/min/max/mean of one measured quantity, with extreme witnesses."""

    label: str
    count: int
    minimum: "float | None"
    maximum: "float | None"
    mean: "float | None"
    min_witness: "dict | None"
    max_witness: "dict | None"

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "count": self.count,
            "min": _json_number(self.minimum),
            "max": _json_number(self.maximum),
            "mean": self.mean,
            "min_witness": self.min_witness,
            "max_witness": self.max_witness,
        }


def _summarize(label: str, samples: list) -> GapSummary:
    """Collapse (value, witness) samples into a GapSummary."""
    if not samples:
        return GapSummary(label, 0, None, None, None, None, None)
    lo = min(samples, key=lambda s: s[0])
    hi = max(samples, key=lambda s: s[0])
    total = sum(v for v, _ in samples)
    return GapSummary(
        label=label,
        count=len(samples),
        minimum=lo[0],
        maximum=hi[0],
        mean=total / len(samples),
        min_witness=lo[1],
        max_witness=hi[1],
    )


# ---------------------------------------------------------------------------
# reverse fit gaps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReverseFitGapReport:
    """Measured ``lambda(alpha+eps) - beta(alpha) - K(x)`` distributions.

    The exact inequality runs the other way (beta + K(x) never exceeds
    lambda by more than the subadditivity constant); this report measures
    how tightly the two-part curve, given a small extra budget, tracks the
    best fit plus the plain data cost.
    """

    epsilons: tuple
    strings_used: int
    summaries: tuple

    def to_json_dict(self) -> dict:
        return {
            "epsilons": list(self.epsilons),
            "strings_used": self.strings_used,
            "summaries": [s.to_json_dict() for s in self.summaries],
        }


def reverse_fit_gap_report(
    sys: DescriptionSystem,
    epsilons: tuple = (0, 1, 2),
    max_strings: "int | None" = None,
    seed: int = 0,
) -> ReverseFitGapReport:
    xs = _sample_strings(sys, max_strings, seed)
    samples: dict[int, list] = {eps: [] for eps in epsilons}
    for x in xs:
        prof = profile(sys, x)
        for alpha in range(prof.alpha_max + 1):
            beta_key = prof.beta_key(alpha)
            if beta_key is None:
                continue
            beta = log2_display(beta_key)
            for eps in epsilons:
                bumped = alpha + eps
                if bumped > prof.alpha_max:
                    continue
                lam_key = prof.lambda_key(bumped)
                if lam_key is None:
                    continue
                gap = log2_display(lam_key) - beta - prof.K_x
                samples[eps].append((gap, {"x": str(x), "alpha": alpha}))
    summaries = tuple(
        _summarize(f"epsilon={eps}", samples[eps]) for eps in epsilons
    )
    return ReverseFitGapReport(
        epsilons=tuple(epsilons), strings_used=len(xs), summaries=summaries
    )


# ---------------------------------------------------------------------------
# half-block family gaps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniversalGapReport:
    """Half-block analogs vs exact profiles, plus dominance slacks."""

    strings_used: int
    summaries: tuple

    def to_json_dict(self) -> dict:
        return {
            "strings_used": self.strings_used,
            "summaries": [s.to_json_dict() for s in self.summaries],
        }


def universal_gap_report(
    sys: DescriptionSystem, max_strings: "int | None" = None, seed: int = 0
) -> UniversalGapReport:
    xs = _sample_strings(sys, max_strings, seed)
    lambda_gaps: list = []
    h_gaps: list = []
    beta_gaps: list = []
    slacks: list = []
    for x in xs:
        rep = universal_family_report(sys, x)
        for row in rep.rows:
            witness = {"x": str(x), "alpha": row.alpha}
            if row.lambda_gap is not None and math.isfinite(row.lambda_gap):
                lambda_gaps.append((row.lambda_gap, witness))
            if row.h_gap is not None and math.isfinite(row.h_gap):
                h_gaps.append((row.h_gap, witness))
            if row.beta_gap is not None and math.isfinite(row.beta_gap):
                beta_gaps.append((row.beta_gap, witness))
        dom = sli_dominance_report(sys, x)
        for record in dom.records:
            if record.slack is None:
                continue
            slacks.append(
                (
                    float(record.slack),
                    {
                        "x": str(x),
                        "set_program": str(record.program),
                        "variant": record.variant,
                    },
                )
            )
    return UniversalGapReport(
        strings_used=len(xs),
        summaries=(
            _summarize("lambda_gap", lambda_gaps),
            _summarize("h_gap", h_gaps),
            _summarize("beta_gap", beta_gaps),
            _summarize("dominance_slack", slacks),
        ),
    )


# ---------------------------------------------------------------------------
# improvement slacks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImprovementSlackReport:
    """Deficiency behavior across large two-part improvements.

    ``improved_count`` counts qualifying pairs whose deficiency did not
    increase; ``slack`` summarizes the extra bits each pair needed to meet
    the drop-by-``c*log2(n)`` relation.
    """

    c: float
    searches: int
    traces_with_pairs: int
    qualifying_pairs: int
    improved_count: int
    slack: GapSummary
    deficiency_drop: GapSummary

    def to_json_dict(self) -> dict:
        return {
            "c": self.c,
            "searches": self.searches,
            "traces_with_pairs": self.traces_with_pairs,
            "qualifying_pairs": self.qualifying_pairs,
            "improved_count": self.improved_count,
            "slack": self.slack.to_json_dict(),
            "deficiency_drop": self.deficiency_drop.to_json_dict(),
        }


def improvement_slack_report(
    sys: DescriptionSystem,
    c: float = 1.0,
    seeds: tuple = (0, 1),
    max_strings: "int | None" = 24,
    seed: int = 0,
) -> ImprovementSlackReport:
    xs = _stratified_sample(sys, max_strings, seed)
    alpha = sys.max_set_program_length()
    searches = 0
    traces_with_pairs = 0
    qualifying = 0
    improved = 0
    slack_samples: list = []
    drop_samples: list = []
    for x in xs:
        for s in seeds:
            stream = enumeration_stream(sys, s)
            trace = anytime_search(sys, x, alpha, stream, "mdl")
            audit = improvement_audit(sys, trace, c=c)
            searches += 1
            if audit.qualifying_count:
                traces_with_pairs += 1
            for pair in audit.pairs:
                qualifying += 1
                witness = {
                    "x": str(x),
                    "seed": s,
                    "from": str(pair.program_1),
                    "to": str(pair.program_2),
                }
                slack_samples.append((pair.slack_needed, witness))
                drop_samples.append((pair.delta_2 - pair.delta_1, witness))
                if pair.delta_2 <= pair.delta_1:
                    improved += 1
    return ImprovementSlackReport(
        c=c,
        searches=searches,
        traces_with_pairs=traces_with_pairs,
        qualifying_pairs=qualifying,
        improved_count=improved,
        slack=_summarize("slack_needed", slack_samples),
        deficiency_drop=_summarize("deficiency_drop", drop_samples),
    )


# ---------------------------------------------------------------------------
# stock report systems and the report battery
# ---------------------------------------------------------------------------

_HAMMING_12 = """
data  0    @family:literal(n=12)
set   0    @family:cube(n=12)
set   10   @family:hamming(n=12)
set   111  @family:singletons(n=12)
"""

_PATCHES_8 = """
data  .    @family:bernoulli(n=8)
set   0    @family:cube(n=8)
set   10   @family:patches(n=8,m=4)
set   11   @family:singletons(n=8)
"""

_CYLINDERS_6 = """
data  0    @family:literal(n=6)
set   0    @family:cube(n=6)
set   1    @family:cylinders(n=6)
"""


def build_report_family_systems() -> dict:
    """The stock systems the gap battery runs over (n = 6, 8, 12)."""
    return {
        "hamming-12": build_system(_HAMMING_12),
        "patches-8": build_system(_PATCHES_8),
        "cylinders-6": build_system(_CYLINDERS_6),
    }


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def generate_gap_reports(
    out_dir,
    *,
    systems: "dict | None" = None,
    epsilons: tuple = (0, 1, 2),
    reverse_strings: "int | None" = 192,
    universal_strings: "int | None" = 32,
    improvement_strings: "int | None" = 16,
    improvement_seeds: tuple = (0, 1),
    c: float = 1.0,
) -> dict:
    """Run the measured-gap battery and archive it as deterministic JSON.

    One ``gaps_<system>.json`` per system (reverse fit gaps, half-block
    gaps, additivity defects, improvement slacks), one planted-staircase
    report, and an ``index.json``.  File contents carry no timestamps and
    keys are sorted, so identical inputs give byte-identical archives.
    Returns the written file names and per-section wall-clock seconds.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if systems is None:
        systems = build_report_family_systems()
    files: list[str] = []
    seconds: dict[str, float] = {}

    for name, system in sorted(systems.items()):
        start = time.perf_counter()
        payload = {
            "system": name,
            "universe_n": system.universe_n,
            "set_programs": len(system.set_programs),
            "data_programs": len(system.data_programs),
            "c_sub": system.c_sub,
            "reverse_fit_gap": reverse_fit_gap_report(
                system, epsilons=epsilons, max_strings=reverse_strings
            ).to_json_dict(),
            "universal_family_gap": universal_gap_report(
                system, max_strings=universal_strings
            ).to_json_dict(),
            "additivity_defect": additivity_defect_report(system).to_json_dict(),
            "improvement_slack": improvement_slack_report(
                system, c=c, seeds=improvement_seeds, max_strings=improvement_strings
            ).to_json_dict(),
        }
        filename = f"gaps_{name}.json"
        _write_json(out / filename, payload)
        files.append(filename)
        seconds[name] = time.perf_counter() - start

    start = time.perf_counter()
    plan = make_nonstoch_system(12, 5, 6, seed=0)
    _write_json(out / "nonstoch_12.json", verify_nonstoch(plan).to_json_dict())
    files.append("nonstoch_12.json")
    seconds["nonstoch"] = time.perf_counter() - start

    index = {
        "files": sorted(files),
        "parameters": {
            "epsilons": list(epsilons),
            "reverse_strings": reverse_strings,
            "universal_strings": universal_strings,
            "improvement_strings": improvement_strings,
            "improvement_seeds": list(improvement_seeds),
            "c": c,
        },
    }
    _write_json(out / "index.json", index)
    files.append("index.json")
    return {"out_dir": str(out), "files": files, "seconds": seconds}
