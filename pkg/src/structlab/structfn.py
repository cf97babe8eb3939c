"""Structure-function profiles over a description system, computed exactly.

For a string ``x`` and a complexity budget ``alpha`` the three classical
curves are minima over the class ``{S : x in S, K(S) <= alpha}`` of
representable sets:

* ``h(alpha)``      minimizes ``log2 |S|``          (smallest model),
* ``lambda(alpha)`` minimizes ``K(S) + log2 |S|``   (best two-part total),
* ``beta(alpha)``   minimizes ``delta(x | S) = log2 |S| - K(x | S)``
  (most typical model),

with the empty-class minimum taken to be infinity.  All three are decided
by exact order keys — ``|S|`` for h, the integer ``2**K(S) * |S|`` for
lambda, the rational ``|S| / 2**K(x|S)`` for beta — and ties break by
smaller ``K(S)``, then lexicographically least witness program.  Floats
show up only in display accessors.

A :class:`StructureProfile` bundles the per-alpha optima with their
witnesses, the critical budgets (where the two-part optimum strictly
improves), the minimal sufficient statistic (least budget whose two-part
total is within a chosen slack of ``K(x)``), and the Pareto frontier of
``(K(S), delta(x|S), Lambda(S))`` triples over all representable models of
``x``.  A string contained in no representable set gets an all-infinite
profile with ``flagged`` set.

The module also houses the small exact-combinatorics companions: the
conditional-complexity tail bound, the monotone envelope ``m(x)``, dyadic
subdivision of a model, and the windowed curve-closeness test used to
compare staircase curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .codec import BitString
from .descsys import DescriptionSystem, FiniteSet, ModelRecord
from .errors import StructLabError
from .rational import log2_display, pow2

__all__ = [
    "StructureProfile",
    "ParetoPoint",
    "SufficiencyRecord",
    "ClosenessSpec",
    "CurveViolation",
    "profile",
    "deficiency",
    "deficiency_key",
    "deficiency_tail_count",
    "m_of_x",
    "subdivide",
    "curves_close",
]


# ---------------------------------------------------------------------------
# Deficiency
# ---------------------------------------------------------------------------


def deficiency(sys: DescriptionSystem, x, s: FiniteSet) -> float:
    """delta(x|S) = log2|S| - K(x|S) for members of a representable set.

    Infinite when x is not in S; raises for unrepresentable sets (the
    quantity is only meaningful for sets the system can describe).
    """
    if not sys.is_representable(s):
        raise StructLabError("deficiency requires a representable set")
    if sys._value(x) not in s:
        return math.inf
    return s.log_card - sys.K_cond(x, s)


def deficiency_key(sys: DescriptionSystem, x, s: FiniteSet) -> "Fraction | None":
    """Exact 2**delta(x|S) as a Fraction; None encodes an infinite deficiency."""
    if not sys.is_representable(s):
        raise StructLabError("deficiency requires a representable set")
    if sys._value(x) not in s:
        return None
    return Fraction(s.cardinality) * pow2(-int(sys.K_cond(x, s)))


def deficiency_tail_count(sys: DescriptionSystem, s: FiniteSet, d: int) -> int:
    """Number of members whose conditional description beats the index code by > d.

    Counts ``{x in S : K(x|S) < ceil(log2|S|) - d}``.  Because each such x
    owns a conditional program shorter than ``ceil(log2|S|) - d`` in a
    prefix-free namespace, the count can never reach
    ``2**(ceil(log2|S|) - d)`` — an exact Kraft argument, tested as such.
    """
    if d < 0:
        raise StructLabError("tail parameter d must be nonnegative")
    threshold = s.ceil_log_card - d
    return sum(1 for v in s.values if sys.K_cond(v, s) < threshold)


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParetoPoint:
    """A Pareto-minimal (K(S), delta, Lambda) triple with its witness model."""

    K_S: int
    delta_key: Fraction
    lambda_key: int
    record: ModelRecord

    @property
    def delta(self) -> float:
        return log2_display(self.delta_key)

    @property
    def total_length(self) -> float:
        return log2_display(self.lambda_key)


@dataclass(frozen=True)
class SufficiencyRecord:
    """The least budget whose two-part optimum meets K(x) + slack."""

    alpha: int
    slack: int
    record: ModelRecord


@dataclass(frozen=True)
class StructureProfile:
    """Exact h / lambda / beta data for one string, on budgets 0..alpha_max."""

    x: BitString
    K_x: int
    alpha_max: int
    c_sub: int
    h_rows: tuple["ModelRecord | None", ...]
    lambda_rows: tuple["ModelRecord | None", ...]
    beta_rows: tuple["ModelRecord | None", ...]
    critical_alphas: tuple[int, ...]
    sufficiency: "SufficiencyRecord | None"
    pareto: tuple[ParetoPoint, ...]
    flagged: bool

    # -- exact keys ------------------------------------------------------

    def h_key(self, alpha: int) -> "int | None":
        row = self.h_rows[alpha]
        return None if row is None else row.cardinality

    def lambda_key(self, alpha: int) -> "int | None":
        row = self.lambda_rows[alpha]
        return None if row is None else row.lambda_key

    def beta_key(self, alpha: int) -> "Fraction | None":
        row = self.beta_rows[alpha]
        return None if row is None else row.delta_key

    # -- display values ----------------------------------------------------

    def h_values(self) -> list[float]:
        return [log2_display(self.h_key(a)) for a in range(self.alpha_max + 1)]

    def lambda_values(self) -> list[float]:
        return [log2_display(self.lambda_key(a)) for a in range(self.alpha_max + 1)]

    def beta_values(self) -> list[float]:
        return [log2_display(self.beta_key(a)) for a in range(self.alpha_max + 1)]

    # -- comparison --------------------------------------------------------

    def signature(self):
        """Everything observable: exact keys, witnesses, criticals, mss, Pareto."""
        rows = tuple(
            (
                self.h_key(a),
                None if self.h_rows[a] is None else self.h_rows[a].witness_program,
                self.lambda_key(a),
                None if self.lambda_rows[a] is None else self.lambda_rows[a].witness_program,
                self.beta_key(a),
                None if self.beta_rows[a] is None else self.beta_rows[a].witness_program,
            )
            for a in range(self.alpha_max + 1)
        )
        suff = None if self.sufficiency is None else (
            self.sufficiency.alpha,
            self.sufficiency.slack,
            self.sufficiency.record.witness_program,
        )
        pareto = tuple((p.K_S, p.delta_key, p.lambda_key) for p in self.pareto)
        return (self.K_x, rows, self.critical_alphas, suff, pareto, self.flagged)


def _better(
    candidate_key, candidate: ModelRecord, best_key, best: "ModelRecord | None"
) -> bool:
    """Tie-break order: objective key, then K(S), then witness program."""
    if best is None:
        return True
    return (candidate_key, candidate.K_S, candidate.witness_program.sort_key()) < (
        best_key,
        best.K_S,
        best.witness_program.sort_key(),
    )


def profile(
    sys: DescriptionSystem,
    x,
    alpha_max: "int | None" = None,
    mss_slack: "int | None" = None,
) -> StructureProfile:
    """Compute the full exact profile of ``x`` on budgets ``0..alpha_max``.

    ``alpha_max`` defaults to the longest set program (the point where all
    three curves have saturated); ``mss_slack`` defaults to the system's
    ``c_sub``.
    """
    xb = BitString.from_value(sys.universe_n, sys._value(x))
    if alpha_max is None:
        alpha_max = sys.max_set_program_length()
    if alpha_max < 0:
        raise StructLabError("alpha_max must be nonnegative")
    slack = sys.c_sub if mss_slack is None else mss_slack
    k_x = sys.K_data(xb)

    containing = sys.entries_containing(xb)  # sorted by (K, card, program)
    h_rows: list[ModelRecord | None] = []
    lambda_rows: list[ModelRecord | None] = []
    beta_rows: list[ModelRecord | None] = []

    best_h: "ModelRecord | None" = None
    best_l: "ModelRecord | None" = None
    best_b: "ModelRecord | None" = None
    idx = 0
    for alpha in range(alpha_max + 1):
        while idx < len(containing) and containing[idx].K_S <= alpha:
            rec = containing[idx]
            idx += 1
            if _better(rec.cardinality, rec, None if best_h is None else best_h.cardinality, best_h):
                best_h = rec
            if _better(rec.lambda_key, rec, None if best_l is None else best_l.lambda_key, best_l):
                best_l = rec
            if _better(rec.delta_key, rec, None if best_b is None else best_b.delta_key, best_b):
                best_b = rec
        h_rows.append(best_h)
        lambda_rows.append(best_l)
        beta_rows.append(best_b)

    critical: list[int] = []
    prev_key: "int | None" = None
    for alpha in range(alpha_max + 1):
        row = lambda_rows[alpha]
        if row is not None and (prev_key is None or row.lambda_key < prev_key):
            critical.append(alpha)
        if row is not None:
            prev_key = row.lambda_key

    sufficiency: "SufficiencyRecord | None" = None
    bound_exp = k_x + slack
    if bound_exp >= 0:
        for alpha in range(alpha_max + 1):
            row = lambda_rows[alpha]
            if row is not None and row.lambda_key <= (1 << bound_exp):
                sufficiency = SufficiencyRecord(alpha, slack, row)
                break

    pareto = _pareto_frontier(containing)

    flagged = all(r is None for r in lambda_rows)
    return StructureProfile(
        x=xb,
        K_x=k_x,
        alpha_max=alpha_max,
        c_sub=sys.c_sub,
        h_rows=tuple(h_rows),
        lambda_rows=tuple(lambda_rows),
        beta_rows=tuple(beta_rows),
        critical_alphas=tuple(critical),
        sufficiency=sufficiency,
        pareto=pareto,
        flagged=flagged,
    )


def _pareto_frontier(containing: Sequence[ModelRecord]) -> tuple[ParetoPoint, ...]:
    triples: dict[tuple[int, Fraction, int], ModelRecord] = {}
    for rec in containing:
        key = (rec.K_S, rec.delta_key, rec.lambda_key)
        prev = triples.get(key)
        if prev is None or rec.witness_program.sort_key() < prev.witness_program.sort_key():
            triples[key] = rec
    points = []
    keys = list(triples)
    for key in keys:
        dominated = any(
            other != key
            and other[0] <= key[0]
            and other[1] <= key[1]
            and other[2] <= key[2]
            for other in keys
        )
        if not dominated:
            points.append(ParetoPoint(key[0], key[1], key[2], triples[key]))
    points.sort(key=lambda p: (p.K_S, p.delta_key, p.lambda_key))
    return tuple(points)


# ---------------------------------------------------------------------------
# Monotone envelope and subdivision
# ---------------------------------------------------------------------------


def m_of_x(sys: DescriptionSystem, x) -> int:
    """min K(y) over all universe strings y >= x (in numeric/lex order).

    The largest monotone nondecreasing function below K: past x, no string
    is easier to describe than m(x) says.  A description system makes this
    envelope exactly computable.
    """
    v = sys._value(x)
    return min(sys.K_data(w) for w in range(v, sys.universe_size()))


def subdivide(sys: DescriptionSystem, s: FiniteSet, x, m: int) -> FiniteSet:
    """The block of x when S is cut into 2**m equal contiguous chunks.

    The sorted elements of S are grouped into blocks of
    ``ceil(|S| / 2**m)`` consecutive elements (the final block may be
    smaller); the block containing x is returned.  Describing it costs at
    most ``K(S)`` plus m bits plus overhead, while its cardinality drops by
    a factor of almost exactly 2**m — the standard way to walk the
    structure function's downward staircase.
    """
    if s.n != sys.universe_n:
        raise StructLabError("set width does not match the system universe")
    if m < 0:
        raise StructLabError("subdivision depth must be nonnegative")
    v = sys._value(x)
    if v not in s:
        raise StructLabError("subdivide needs x to be a member of S")
    if (1 << m) > s.cardinality:
        raise StructLabError("cannot cut a set into more blocks than elements")
    block_size = -(-s.cardinality // (1 << m))  # ceil division
    position = s.values.index(v)
    start = (position // block_size) * block_size
    return FiniteSet(s.n, s.values[start : start + block_size])


# ---------------------------------------------------------------------------
# Curve closeness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveViolation:
    """First place where one curve escapes the other's tolerance window."""

    i: int
    side: str  # "below" | "above"
    value: float
    bound: float


@dataclass(frozen=True)
class ClosenessSpec:
    """Windowed tolerance for comparing integer staircase curves.

    ``f`` is close to ``g`` when, at every argument i in [start, k],
    f(i) lies between the min and max of g over the window
    ``[max(start, i - eps(i)), min(k, i + eps(i))]``, slackened by
    delta(i) on each side.  Infinities compare as expected (an infinite
    g-window bound absorbs everything above/below it).
    """

    k: int
    epsilon: "Callable[[int], int] | Sequence[int] | int" = 0
    delta: "Callable[[int], float] | Sequence[float] | float" = 0.0
    start: int = 0

    def eps_at(self, i: int) -> int:
        if callable(self.epsilon):
            return int(self.epsilon(i))
        if isinstance(self.epsilon, (list, tuple)):
            return int(self.epsilon[i])
        return int(self.epsilon)

    def delta_at(self, i: int) -> float:
        if callable(self.delta):
            return float(self.delta(i))
        if isinstance(self.delta, (list, tuple)):
            return float(self.delta[i])
        return float(self.delta)


def curves_close(
    f: Sequence[float],
    g: Sequence[float],
    spec: ClosenessSpec,
) -> tuple[bool, "CurveViolation | None"]:
    """Check the windowed closeness of two curves given on [0, k].

    Returns ``(True, None)`` or ``(False, first violation)``.  Curves are
    indexed by integer argument; entries may be ``math.inf``.  The window
    always contains i itself, so identical curves are always close.
    """
    k = spec.k
    if len(f) < k + 1 or len(g) < k + 1:
        raise StructLabError("curves must cover the full range [0, k]")
    for i in range(spec.start, k + 1):
        eps = spec.eps_at(i)
        lo = max(spec.start, i - eps)
        hi = min(k, i + eps)
        window = [g[j] for j in range(lo, hi + 1)]
        slack = spec.delta_at(i)
        lower = min(window) - slack
        upper = max(window) + slack
        # infinities: min(inf-window) - slack stays inf; f(i)=inf needs an
        # infinite upper bound, which max() provides when any entry is inf
        if f[i] < lower:
            return False, CurveViolation(i, "below", f[i], lower)
        if f[i] > upper:
            return False, CurveViolation(i, "above", f[i], upper)
    return True, None
