"""Anytime model search over a seeded enumeration of a description system.

The searcher watches an enumeration stream (every data and set program of
the system, in seed-dependent order) and maintains a current best model of
the target string ``x`` under one of three objectives, declaring every
change of hypothesis as it happens:

* ``mdl``    minimizes the two-part total of the *event*: the exact key
  ``2**|p| * |S|`` for a set event with program p printing S.  At stream
  end every program has been seen, so the final objective equals the exact
  two-part optimum ``lambda_x(alpha)``.
* ``ml``     minimizes ``|S|`` alone; the final value is the exact
  smallest-model optimum ``h_x(alpha)``.
* ``direct`` minimizes the current *estimate* of the deficiency
  ``log2|S| - K^t(x|S)``.  Knowledge grows over time: when a set first
  appears only its index code ``ceil(log2|S|)`` is available, so the
  estimate starts at ``log2|S| - ceil(log2|S|) <= 0``; the set's
  conditional shortcuts for x unlock once the stream has also revealed a
  data program printing x, after which ``K^t(x|S)`` drops to the true
  ``K(x|S)`` and the estimate *rises* to the true deficiency.  Estimates
  therefore approach delta(x|S) from below, and the searcher declares
  whenever its current best hypothesis changes — a new set taking over,
  or the reigning set's estimate being corrected in place (the one mode
  where the same set can legitimately be declared twice, and where the
  declared objective sequence need not be monotone).  At stream end all
  knowledge is in, so the final estimate equals the exact deficiency
  optimum ``beta_x(alpha)``.

In mdl and ml the per-candidate objective is static, so those modes
declare exactly on strict improvement and never repeat a program.  Only
set events with ``|p| <= alpha`` and ``x in S`` are candidates in any
mode.  When no candidate ever appears the trace is flagged empty.

Every mdl declaration obeys the exact online guarantee

    delta(x | L_t) + K(x)  <=  |p_t| + ceil(log2 |L_t|) + c_sub

checked by :func:`mdl_guarantee_holds` in exact arithmetic: declaring early
never costs more than the declared two-part length plus the system's
subadditivity constant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .codec import BitString
from .descsys import DescriptionSystem, EnumerationEvent, FiniteSet, ModelRecord
from .errors import StructLabError
from .rational import log2_display, pow2

__all__ = [
    "Declaration",
    "SearchTrace",
    "anytime_search",
    "mdl_guarantee_holds",
    "trace_jsonl_lines",
    "AuditPair",
    "ImprovementAudit",
    "improvement_audit",
]

MODES = ("mdl", "ml", "direct")


@dataclass(frozen=True)
class Declaration:
    """One 'new best hypothesis' moment in a search."""

    time: int
    record: ModelRecord          # K_S is the *event* program length
    objective_key: "int | Fraction"
    objective: float


@dataclass(frozen=True)
class SearchTrace:
    """Full history of an anytime search run."""

    mode: str
    x: BitString
    alpha: int
    declarations: tuple[Declaration, ...]
    final: "ModelRecord | None"
    flagged_empty: bool

    def objective_keys(self) -> list["int | Fraction"]:
        return [d.objective_key for d in self.declarations]


def _validate_stream(sys: DescriptionSystem, stream: Sequence[EnumerationEvent]) -> None:
    expected = len(sys.data_programs) + len(sys.set_programs)
    if len(stream) != expected:
        raise StructLabError(
            f"stream has {len(stream)} events, system has {expected} programs"
        )
    seen: set[tuple[str, BitString]] = set()
    last_time = -1
    for ev in stream:
        if ev.time <= last_time:
            raise StructLabError("stream times must strictly increase")
        last_time = ev.time
        key = (ev.kind, ev.program)
        if key in seen:
            raise StructLabError("stream repeats a program")
        seen.add(key)
        if ev.kind == "data":
            if sys.data_programs.get(ev.program) != ev.output:
                raise StructLabError("stream data event disagrees with the system")
        elif ev.kind == "set":
            if sys.set_programs.get(ev.program) != ev.output:
                raise StructLabError("stream set event disagrees with the system")
        else:
            raise StructLabError(f"unknown stream event kind {ev.kind!r}")


def anytime_search(
    sys: DescriptionSystem,
    x,
    alpha: int,
    stream: Sequence[EnumerationEvent],
    mode: str = "mdl",
) -> SearchTrace:
    """Fold an enumeration stream into a declaration trace for ``x``.

    The stream must be a complete enumeration of the system (e.g. from
    :func:`structlab.descsys.enumeration_stream`); the declared sequence
    depends on the stream order, but the final objective value is
    stream-independent.
    """
    if mode not in MODES:
        raise StructLabError(f"unknown search mode {mode!r}")
    if alpha < 0:
        raise StructLabError("alpha must be nonnegative")
    _validate_stream(sys, stream)
    xv = sys._value(x)
    xb = BitString.from_value(sys.universe_n, xv)

    declarations: list[Declaration] = []
    best_key: "int | Fraction | None" = None
    best_record: "ModelRecord | None" = None

    if mode in ("mdl", "ml"):
        for ev in stream:
            if ev.kind != "set" or len(ev.program) > alpha:
                continue
            s: FiniteSet = ev.output  # type: ignore[assignment]
            if xv not in s:
                continue
            key: "int | Fraction" = (
                (1 << len(ev.program)) * s.cardinality if mode == "mdl" else s.cardinality
            )
            if best_key is None or key < best_key:
                best_key = key
                best_record = ModelRecord(
                    s, len(ev.program), ev.program, int(sys.K_cond(xv, s))
                )
                declarations.append(
                    Declaration(ev.time, best_record, key, log2_display(key))
                )
    else:  # direct
        x_known = False
        # program -> (set, current conditional-complexity estimate)
        seen: dict[BitString, tuple[FiniteSet, int]] = {}
        last_sig: "tuple[BitString, int] | None" = None

        def estimate(s: FiniteSet) -> int:
            return int(sys.K_cond(xv, s)) if x_known else s.ceil_log_card

        def consider(time: int) -> None:
            nonlocal best_key, best_record, last_sig
            winner = None
            for prog, (s, est) in seen.items():
                key = Fraction(s.cardinality) * pow2(-est)
                cand = ((key, len(prog), prog.sort_key()), prog, s, est)
                if winner is None or cand[0] < winner[0]:
                    winner = cand
            if winner is None:
                return
            (key, _, _), prog, s, est = winner
            if (prog, est) != last_sig:
                last_sig = (prog, est)
                best_key = key
                best_record = ModelRecord(s, len(prog), prog, est)
                declarations.append(
                    Declaration(time, best_record, key, log2_display(key))
                )

        for ev in stream:
            if ev.kind == "data":
                if ev.output == xb and not x_known:
                    x_known = True
                    # conditional shortcuts unlock for every set already seen
                    seen = {p: (s, estimate(s)) for p, (s, _) in seen.items()}
                    consider(ev.time)
                continue
            if len(ev.program) > alpha:
                continue
            s = ev.output  # type: ignore[assignment]
            if xv not in s:
                continue
            seen[ev.program] = (s, estimate(s))
            consider(ev.time)

    return SearchTrace(
        mode=mode,
        x=xb,
        alpha=alpha,
        declarations=tuple(declarations),
        final=best_record,
        flagged_empty=best_record is None,
    )


def mdl_guarantee_holds(sys: DescriptionSystem, trace: SearchTrace) -> bool:
    """Exact check of the online guarantee at every mdl declaration.

    For each declared (p_t, L_t):
    ``delta(x|L_t) + K(x) <= |p_t| + ceil(log2|L_t|) + c_sub`` compared as
    ``|L_t| * 2**(K(x) - K(x|L_t)) <= 2**(|p_t| + ceil + c_sub)`` over
    exact rationals.
    """
    if trace.mode != "mdl":
        raise StructLabError("the online guarantee is stated for mdl traces")
    kx = sys.K_data(trace.x)
    c = sys.c_sub
    for d in trace.declarations:
        rec = d.record
        lhs = Fraction(rec.cardinality) * pow2(kx - int(rec.K_cond))
        rhs = pow2(rec.K_S + rec.ceil_log_card + c)
        if lhs > rhs:
            return False
    return True


def trace_jsonl_lines(trace: SearchTrace) -> list[str]:
    """One JSON object per declaration, deterministic key order."""
    lines = []
    for d in trace.declarations:
        lines.append(
            json.dumps(
                {
                    "time": d.time,
                    "program": str(d.record.witness_program),
                    "cardinality": d.record.cardinality,
                    "objective": d.objective,
                    "objective_key": str(d.objective_key),
                },
                sort_keys=True,
            )
        )
    return lines


# ---------------------------------------------------------------------------
# Improvement audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditPair:
    """A consecutive mdl declaration pair with a large two-part drop.

    ``slack_needed`` is the smallest s making
    ``delta(x|S2) <= delta(x|S1) - c*log2(n) + s`` true; nonpositive means
    the deficiency dropped by the full required amount on its own.
    """

    time_1: int
    time_2: int
    program_1: BitString
    program_2: BitString
    lambda_drop: float
    delta_1: float
    delta_2: float
    required_drop: float
    slack_needed: float


@dataclass(frozen=True)
class ImprovementAudit:
    """Report over all qualifying consecutive pairs of an mdl trace."""

    x: BitString
    c: float
    threshold_bits: float  # 2 * c * log2(n)
    pairs: tuple[AuditPair, ...]

    @property
    def qualifying_count(self) -> int:
        return len(self.pairs)

    @property
    def max_slack_needed(self) -> "float | None":
        return max((p.slack_needed for p in self.pairs), default=None)

    def to_json_dict(self) -> dict:
        return {
            "x": str(self.x),
            "c": self.c,
            "threshold_bits": self.threshold_bits,
            "qualifying_count": self.qualifying_count,
            "max_slack_needed": self.max_slack_needed,
            "pairs": [
                {
                    "time_1": p.time_1,
                    "time_2": p.time_2,
                    "program_1": str(p.program_1),
                    "program_2": str(p.program_2),
                    "lambda_drop": p.lambda_drop,
                    "delta_1": p.delta_1,
                    "delta_2": p.delta_2,
                    "required_drop": p.required_drop,
                    "slack_needed": p.slack_needed,
                }
                for p in self.pairs
            ],
        }


def improvement_audit(
    sys: DescriptionSystem, trace: SearchTrace, c: float = 1.0
) -> ImprovementAudit:
    """Measure how deficiency moves across big two-part improvements.

    A consecutive declaration pair qualifies when the two-part key drops by
    at least ``2*c*log2(n)`` bits (n = string length); the comparison is
    exact whenever ``2*c`` is an integer.  For each qualifying pair the
    report records both true deficiencies and the slack needed for the
    drop-by-``c*log2(n)`` relation — measured, never asserted, because the
    constant involved is not computable inside the system.
    """
    if trace.mode != "mdl":
        raise StructLabError("improvement audits are defined for mdl traces")
    n = sys.universe_n
    log_n = math.log2(n) if n > 1 else 0.0
    threshold = 2.0 * c * log_n
    two_c = 2.0 * c
    exact = float(two_c).is_integer()
    n_pow = n ** int(two_c) if exact else None

    pairs: list[AuditPair] = []
    decls = trace.declarations
    for d1, d2 in zip(decls, decls[1:]):
        if exact:
            qualifies = d2.objective_key * n_pow <= d1.objective_key
        else:
            qualifies = log2_display(d2.objective_key) <= (
                log2_display(d1.objective_key) - threshold
            )
        if not qualifies:
            continue
        delta_1 = d1.record.set.log_card - int(d1.record.K_cond)
        delta_2 = d2.record.set.log_card - int(d2.record.K_cond)
        required = c * log_n
        pairs.append(
            AuditPair(
                time_1=d1.time,
                time_2=d2.time,
                program_1=d1.record.witness_program,
                program_2=d2.record.witness_program,
                lambda_drop=d1.objective - d2.objective,
                delta_1=delta_1,
                delta_2=delta_2,
                required_drop=required,
                slack_needed=delta_2 - delta_1 + required,
            )
        )
    return ImprovementAudit(
        x=trace.x, c=c, threshold_bits=threshold, pairs=tuple(pairs)
    )
