"""Universal statistics from enumeration indexes.

A description system induces an enumeration of its universe: list every
string together with its minimal program length, shortest programs first.
Surprisingly much of a string's model structure is recoverable from nothing
but *positions* in such a list:

* ``build_index`` locates a string's first appearance and compares that
  index, bit by bit, against the total count of enumerated pairs;
* ``build_Sli`` carves the enumeration into dyadic half-blocks -- the set of
  objects whose index starts with the first ``i`` bits of the count followed
  by a ``0``.  Whenever bit ``i`` of the count is 1, that half-block is full:
  it has exactly ``2**(width-i-1)`` members, where ``width`` is the bit
  length of the count.  These blocks form a universal family of models: for
  every representable set containing ``x`` there is a block that explains
  ``x`` at least as well (``sli_dominance_report`` measures by how much);
* ``reconstruct_from_prefix`` inverts the counting: from the common-prefix
  data alone it recovers the exact set of objects of complexity at most
  ``i``;
* ``muchnik_lambda`` rebuilds the whole two-part-cost curve of a string from
  a truncated enumeration, stopping the moment the string itself shows up.

Enumerations are value objects (:class:`EnumeratedD`), either induced from a
:class:`~structlab.descsys.DescriptionSystem` or read from fixture text with
one ``object<TAB>level`` line per pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codec import BitString
from .descsys import DescriptionSystem, FiniteSet
from .errors import FixtureError, RefusalError, StructLabError
from .rational import log2_display
from .structfn import profile

__all__ = [
    "EnumeratedD",
    "IndexRecord",
    "SliBlock",
    "MuchnikCurve",
    "ReconstructionReport",
    "SliDominanceRecord",
    "SliDominanceReport",
    "UniversalFamilyRow",
    "UniversalFamilyReport",
    "build_index",
    "build_Sli",
    "induced_data_D",
    "induced_Dk",
    "muchnik_lambda",
    "reconstruct_from_prefix",
    "sli_dominance_report",
    "universal_family_report",
    "parse_enumerated",
    "format_enumerated",
]


def _coerce_object(obj) -> "BitString | FiniteSet":
    if isinstance(obj, (BitString, FiniteSet)):
        return obj
    if isinstance(obj, str):
        return BitString(obj)
    raise StructLabError(
        f"enumeration objects must be strings or finite sets, got {type(obj).__name__}"
    )


class EnumeratedD:
    """An ordered enumeration of distinct (object, level) pairs, level <= l.

    Objects are bit strings or finite sets; the level of a pair is an upper
    bound on the object's complexity (induced enumerations use the exact
    minimal program length).  ``N_l`` is the total number of pairs and
    ``width`` the bit length of that count -- indexes are always read as
    ``width``-bit numerals with leading zeros.
    """

    def __init__(self, pairs, l: "int | None" = None):
        order: list[tuple] = []
        seen: set = set()
        for obj, level in pairs:
            o = _coerce_object(obj)
            i = int(level)
            if i < 0:
                raise StructLabError(f"pair level must be nonnegative, got {i}")
            if (o, i) in seen:
                raise StructLabError(f"repeated enumeration pair ({o!r}, {i})")
            seen.add((o, i))
            order.append((o, i))
        self._order = tuple(order)
        top = max((i for _, i in order), default=0)
        if l is None:
            l = top
        l = int(l)
        if l < top:
            raise StructLabError(
                f"enumeration bound {l} is below a pair level {top}"
            )
        self._l = l

    @property
    def l(self) -> int:
        return self._l

    @property
    def order(self) -> tuple:
        return self._order

    @property
    def N_l(self) -> int:
        return len(self._order)

    @property
    def width(self) -> int:
        return self.N_l.bit_length()

    def is_injective(self) -> bool:
        """True when every object appears in exactly one pair."""
        objs = [o for o, _ in self._order]
        return len(objs) == len(set(objs))

    def objects(self) -> tuple:
        """Distinct objects in order of first appearance."""
        out, seen = [], set()
        for o, _ in self._order:
            if o not in seen:
                seen.add(o)
                out.append(o)
        return tuple(out)

    def section(self, l: int) -> "EnumeratedD":
        """The sub-enumeration of pairs with level <= l, reindexed."""
        if l < 0:
            raise StructLabError(f"section level must be nonnegative, got {l}")
        return EnumeratedD(
            ((o, i) for o, i in self._order if i <= l), l=l
        )

    def __len__(self) -> int:
        return len(self._order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnumeratedD):
            return NotImplemented
        return self._l == other._l and self._order == other._order

    def __hash__(self) -> int:
        return hash((self._l, self._order))

    def __repr__(self) -> str:
        return f"EnumeratedD(l={self._l}, pairs={self.N_l})"


def _count_bits(d: EnumeratedD) -> str:
    return format(d.N_l, "b")


def _index_bits(d: EnumeratedD, index: int) -> str:
    return format(index, f"0{d.width}b")


@dataclass(frozen=True)
class IndexRecord:
    """Where an object first appears, compared against the total count.

    ``I`` is the index of the first pair carrying the object (None when the
    object never appears); ``m`` is the maximal common prefix of the
    ``width``-bit numeral of ``I`` and the numeral of ``N_l``.  Since
    ``I < N_l``, the bit after the prefix is 0 in ``I`` and 1 in ``N_l``.
    """

    x: object
    I: "int | None"
    m: "BitString | None"

    @property
    def m_len(self) -> "int | None":
        return None if self.m is None else len(self.m)


def build_index(d: EnumeratedD, x) -> IndexRecord:
    """Locate ``x``'s first pair and its common prefix with the count."""
    xo = _coerce_object(x)
    index = None
    for pos, (o, _) in enumerate(d.order):
        if o == xo:
            index = pos
            break
    if index is None:
        return IndexRecord(xo, None, None)
    count = _count_bits(d)
    numeral = _index_bits(d, index)
    keep = 0
    while keep < len(count) and numeral[keep] == count[keep]:
        keep += 1
    return IndexRecord(xo, index, BitString(count[:keep]))


@dataclass(frozen=True)
class SliBlock:
    """A dyadic half-block of an enumeration.

    The block at level ``i`` collects the objects whose first-appearance
    index reads ``prefix + '0' + anything`` as a ``width``-bit numeral,
    where ``prefix`` is the first ``i`` bits of the pair count.  ``lo`` and
    ``hi`` bound the matching index range.
    """

    i: int
    prefix: BitString
    width: int
    lo: int
    hi: int
    members: tuple

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def __contains__(self, x: object) -> bool:
        return x in set(self.members)


def build_Sli(d: EnumeratedD, i: int) -> SliBlock:
    """Carve the level-``i`` half-block out of an enumeration.

    Requires ``0 <= i < width``.  When bit ``i`` of the pair count is 0 the
    half-block is not full and the construction refuses; when it is 1, every
    index in the block's range is in use, so on an enumeration that lists
    each object once the block has exactly ``2**(width-i-1)`` members.
    """
    width = d.width
    if not 0 <= i < width:
        raise StructLabError(
            f"half-block level must be in [0, {width}), got {i}"
        )
    count = _count_bits(d)
    if count[i] != "1":
        raise RefusalError(
            f"bit {i} of the pair count {d.N_l} is 0; the half-block is not full"
        )
    lo = (d.N_l >> (width - i)) << (width - i)
    hi = lo + (1 << (width - i - 1)) - 1
    members, seen = [], set()
    for pos, (o, _) in enumerate(d.order):
        if o in seen:
            continue
        seen.add(o)
        if lo <= pos <= hi:
            members.append(o)
    return SliBlock(
        i=i,
        prefix=BitString(count[:i]),
        width=width,
        lo=lo,
        hi=hi,
        members=tuple(members),
    )


# ---------------------------------------------------------------------------
# induced enumerations
# ---------------------------------------------------------------------------


def induced_data_D(sys: DescriptionSystem) -> EnumeratedD:
    """Enumerate the universe as (string, K(string)) pairs, shortest first.

    Pairs are sorted by (program length, program); each string appears
    exactly once, so pairs with level <= l form a prefix of the enumeration
    and the full count of a section equals the number of strings of
    complexity at most l.
    """
    n = sys.universe_n
    rows = sorted(
        (sys.K_data(v), sys.data_witness(v).sort_key(), BitString.from_value(n, v))
        for v in sys.universe_values()
    )
    return EnumeratedD(((b, k) for k, _, b in rows))


def induced_Dk(sys: DescriptionSystem, k: int) -> EnumeratedD:
    """Enumerate (object, level) pairs in rounds of increasing level.

    Round ``i`` lists a pair (object, i) for every object of complexity at
    most ``i`` -- model sets first, then data strings, each group in
    (program length, program) order.  Listing sets before strings within a
    round means every model no costlier than a string precedes that string's
    own pair, which is what makes truncated reconstruction exact.
    """
    if k < 0:
        raise StructLabError(f"complexity budget must be nonnegative, got {k}")
    n = sys.universe_n
    set_rows = sorted(
        (e.K_S, e.witness_program.sort_key(), e.set) for e in sys.set_entries()
    )
    data_rows = sorted(
        (sys.K_data(v), sys.data_witness(v).sort_key(), BitString.from_value(n, v))
        for v in sys.universe_values()
    )
    pairs = []
    for i in range(k + 1):
        for cost, _, s in set_rows:
            if cost <= i:
                pairs.append((s, i))
        for cost, _, b in data_rows:
            if cost <= i:
                pairs.append((b, i))
    return EnumeratedD(pairs, l=k)


# ---------------------------------------------------------------------------
# curve reconstruction from a truncated enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MuchnikCurve:
    """A two-part-cost curve rebuilt from a truncated enumeration.

    ``values[alpha]`` is the best ``level + ceil(log2 |S|)`` over listed set
    pairs containing ``x`` with level <= alpha (None for an empty minimum)
    when ``alpha <= alpha0``, and the complexity budget ``k`` above that.
    ``cutoff`` is the index of the stopping pair.
    """

    x: BitString
    k: int
    alpha0: int
    cutoff: int
    values: tuple

    def value(self, alpha: int) -> "int | None":
        return self.values[alpha]

    def to_json_dict(self) -> dict:
        return {
            "x": str(self.x),
            "k": self.k,
            "alpha0": self.alpha0,
            "cutoff": self.cutoff,
            "values": list(self.values),
        }


def muchnik_lambda(d_k: EnumeratedD, x, k: int, alpha0: int) -> MuchnikCurve:
    """Rebuild the two-part-cost curve of ``x`` on budgets [0, k].

    Enumerate ``d_k`` until the first *data* pair carrying ``x`` appears and
    keep the list of everything seen.  For alpha <= alpha0 take the best
    two-part cost over listed set pairs; past alpha0 clamp to ``k``.  The
    result is non-increasing whenever ``k`` does not exceed the true
    two-part cost at ``alpha0``, and it matches the exact curve on budgets
    up to min(alpha0, K(x)) when ``d_k`` is induced from the system.
    """
    if isinstance(x, str):
        x = BitString(x)
    if not isinstance(x, BitString):
        raise StructLabError("the reconstruction target must be a bit string")
    if k < 0:
        raise StructLabError(f"complexity budget must be nonnegative, got {k}")
    if not 0 <= alpha0 <= k:
        raise StructLabError(
            f"the plateau start must be in [0, {k}], got {alpha0}"
        )
    for _, level in d_k.order:
        if level > k:
            raise StructLabError(
                f"enumeration pair level {level} exceeds the budget {k}"
            )
    cutoff = None
    for pos, (o, _) in enumerate(d_k.order):
        if isinstance(o, BitString) and o == x:
            cutoff = pos
            break
    if cutoff is None:
        raise StructLabError(f"the target string {x!r} never appears in the enumeration")
    listed = d_k.order[: cutoff + 1]
    set_pairs = [
        (level, s)
        for s, level in listed
        if isinstance(s, FiniteSet) and x in s
    ]
    values: list = []
    for alpha in range(k + 1):
        if alpha > alpha0:
            values.append(k)
            continue
        best = None
        for level, s in set_pairs:
            if level <= alpha:
                cost = level + s.ceil_log_card
                if best is None or cost < best:
                    best = cost
        values.append(best)
    return MuchnikCurve(x=x, k=k, alpha0=alpha0, cutoff=cutoff, values=tuple(values))


# ---------------------------------------------------------------------------
# counting reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReconstructionReport:
    """Objects of complexity at most ``i``, recovered by counting.

    ``anchor`` is the last-enumerated object at level <= i, ``m`` its common
    prefix with the pair count, and ``cutoff_count`` the number of pairs the
    procedure reads: the numeral ``m + '1' + zeros``.  Every level-<=i pair
    sits strictly before that cutoff, so filtering the read pairs by level
    recovers exactly the objects of complexity at most ``i``.
    """

    i: int
    anchor: object
    m: "BitString | None"
    cutoff_count: int
    objects: tuple

    @property
    def object_set(self) -> frozenset:
        return frozenset(self.objects)


def reconstruct_from_prefix(d: EnumeratedD, i: int) -> ReconstructionReport:
    """Recover {object : complexity <= i} from prefix-and-count data alone."""
    if not d.is_injective():
        raise StructLabError(
            "counting reconstruction requires an enumeration that lists each object once"
        )
    if i < 0:
        raise StructLabError(f"complexity level must be nonnegative, got {i}")
    candidates = [pos for pos, (_, j) in enumerate(d.order) if j <= i]
    if not candidates:
        return ReconstructionReport(i=i, anchor=None, m=None, cutoff_count=0, objects=())
    anchor_pos = max(candidates)
    anchor = d.order[anchor_pos][0]
    count = _count_bits(d)
    numeral = _index_bits(d, anchor_pos)
    keep = 0
    while keep < len(count) and numeral[keep] == count[keep]:
        keep += 1
    m = BitString(count[:keep])
    cutoff = int(str(m) + "1" + "0" * (d.width - len(m) - 1), 2)
    objects = tuple(o for o, j in d.order[:cutoff] if j <= i)
    return ReconstructionReport(
        i=i, anchor=anchor, m=m, cutoff_count=cutoff, objects=objects
    )


# ---------------------------------------------------------------------------
# dominance of the half-block family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SliDominanceRecord:
    """One representable model versus its half-block replacement.

    ``l`` is the enumeration level the block is carved at: the model's
    integer two-part cost, either exactly (``variant='exact'``) or padded by
    the system's subadditivity constant (``variant='padded'``; this level is
    always high enough to reach ``x``).  The block's own two-part analog is
    ``width - 1`` regardless of ``i``, so ``slack = width - 1 - l`` measures
    how much the block overshoots the model it replaces; it is never
    positive, because at most ``2**(l+1) - 2`` programs fit below length
    ``l``.
    """

    program: BitString
    K_S: int
    cardinality: int
    variant: str
    l: int
    in_section: bool
    i: "int | None"
    block_cardinality: "int | None"
    block_lambda: "int | None"
    slack: "int | None"
    contains: "bool | None"

    def to_json_dict(self) -> dict:
        return {
            "program": str(self.program),
            "K_S": self.K_S,
            "cardinality": self.cardinality,
            "variant": self.variant,
            "l": self.l,
            "in_section": self.in_section,
            "i": self.i,
            "block_cardinality": self.block_cardinality,
            "block_lambda": self.block_lambda,
            "slack": self.slack,
            "contains": self.contains,
        }


@dataclass(frozen=True)
class SliDominanceReport:
    x: BitString
    c_sub: int
    records: tuple

    @property
    def max_slack(self) -> "int | None":
        slacks = [r.slack for r in self.records if r.slack is not None]
        return max(slacks) if slacks else None

    def to_json_dict(self) -> dict:
        return {
            "x": str(self.x),
            "c_sub": self.c_sub,
            "max_slack": self.max_slack,
            "records": [r.to_json_dict() for r in self.records],
        }


def sli_dominance_report(sys: DescriptionSystem, x) -> SliDominanceReport:
    """Measure how the half-block family dominates every model of ``x``.

    For each representable set containing ``x`` and each level variant, find
    ``x``'s common-prefix length ``i`` in the level-``l`` section of the
    induced enumeration and carve the half-block there.  Membership of ``x``
    and the block's exact cardinality hold by construction; the measured
    slack says how the block's two-part analog compares to the model's.
    """
    xb = BitString.from_value(sys.universe_n, sys._value(x))
    d = induced_data_D(sys)
    records = []
    for entry in sys.entries_containing(xb):
        cost = entry.K_S + entry.set.ceil_log_card
        for variant, l in (("exact", cost), ("padded", cost + sys.c_sub)):
            sec = d.section(l)
            idx = build_index(sec, xb)
            if idx.I is None:
                records.append(
                    SliDominanceRecord(
                        program=entry.witness_program,
                        K_S=entry.K_S,
                        cardinality=entry.cardinality,
                        variant=variant,
                        l=l,
                        in_section=False,
                        i=None,
                        block_cardinality=None,
                        block_lambda=None,
                        slack=None,
                        contains=None,
                    )
                )
                continue
            block = build_Sli(sec, idx.m_len)
            records.append(
                SliDominanceRecord(
                    program=entry.witness_program,
                    K_S=entry.K_S,
                    cardinality=entry.cardinality,
                    variant=variant,
                    l=l,
                    in_section=True,
                    i=idx.m_len,
                    block_cardinality=block.cardinality,
                    block_lambda=sec.width - 1,
                    slack=sec.width - 1 - l,
                    contains=xb in block,
                )
            )
    return SliDominanceReport(x=xb, c_sub=sys.c_sub, records=tuple(records))


# ---------------------------------------------------------------------------
# the half-block family as a universal profile witness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniversalFamilyRow:
    """Best half-block analogs at one budget, against the exact profile.

    Analog costs are combinatorial stand-ins: a block carved at level ``l``
    with prefix length ``i`` has naming analog ``i``, log-size exactly
    ``width - i - 1`` and two-part analog ``width - 1``.  Gaps are signed
    (analog minus exact) and None when either side is undefined.
    """

    alpha: int
    lambda_analog: "int | None"
    lambda_l: "int | None"
    h_analog: "int | None"
    h_l: "int | None"
    lambda_gap: "float | None"
    h_gap: "float | None"
    beta_gap: "float | None"

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "lambda_analog": self.lambda_analog,
            "lambda_l": self.lambda_l,
            "h_analog": self.h_analog,
            "h_l": self.h_l,
            "lambda_gap": self.lambda_gap,
            "h_gap": self.h_gap,
            "beta_gap": self.beta_gap,
        }


@dataclass(frozen=True)
class UniversalFamilyReport:
    x: BitString
    K_x: int
    alpha_max: int
    rows: tuple

    def to_json_dict(self) -> dict:
        return {
            "x": str(self.x),
            "K_x": self.K_x,
            "alpha_max": self.alpha_max,
            "rows": [r.to_json_dict() for r in self.rows],
        }


def universal_family_report(
    sys: DescriptionSystem, x, alpha_max: "int | None" = None
) -> UniversalFamilyReport:
    """Compare the best half-blocks of ``x`` against its exact profile.

    For every level ``l`` of the induced enumeration there is one half-block
    containing ``x`` (at its common-prefix length); scanning ``l`` yields a
    family of candidate models.  At each budget ``alpha`` the rows report
    the cheapest two-part and log-size analogs over blocks with prefix
    length at most ``alpha``, with signed gaps against the exact curves.
    """
    xb = BitString.from_value(sys.universe_n, sys._value(x))
    if alpha_max is None:
        alpha_max = sys.max_set_program_length()
    d = induced_data_D(sys)
    k_x = sys.K_data(xb)

    candidates = []  # (i, width, l) for each level where x is enumerated
    for l in range(d.l + 1):
        sec = d.section(l)
        idx = build_index(sec, xb)
        if idx.I is not None:
            candidates.append((idx.m_len, sec.width, l))

    prof = profile(sys, xb, alpha_max=alpha_max)
    rows = []
    for alpha in range(alpha_max + 1):
        pool = [(i, width, l) for i, width, l in candidates if i <= alpha]
        lambda_analog = lambda_l = h_analog = h_l = None
        if pool:
            lambda_analog, lambda_l = min((width - 1, l) for _, width, l in pool)
            h_analog, h_l = min((width - i - 1, l) for i, width, l in pool)
        lam_key = prof.lambda_key(alpha)
        h_key = prof.h_key(alpha)
        beta_key = prof.beta_key(alpha)
        lambda_gap = (
            None
            if lambda_analog is None or lam_key is None
            else lambda_analog - log2_display(lam_key)
        )
        h_gap = (
            None
            if h_analog is None or h_key is None
            else h_analog - log2_display(h_key)
        )
        beta_gap = (
            None
            if lambda_analog is None or beta_key is None
            else (lambda_analog - k_x) - log2_display(beta_key)
        )
        rows.append(
            UniversalFamilyRow(
                alpha=alpha,
                lambda_analog=lambda_analog,
                lambda_l=lambda_l,
                h_analog=h_analog,
                h_l=h_l,
                lambda_gap=lambda_gap,
                h_gap=h_gap,
                beta_gap=beta_gap,
            )
        )
    return UniversalFamilyReport(x=xb, K_x=k_x, alpha_max=alpha_max, rows=tuple(rows))


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


def _format_object(obj) -> str:
    if isinstance(obj, BitString):
        return str(obj) if len(obj) else "."
    if isinstance(obj, FiniteSet):
        return "{" + ",".join(str(b) for b in obj.bitstrings()) + "}"
    raise StructLabError(f"cannot format enumeration object {obj!r}")


def _parse_object(token: str) -> "BitString | FiniteSet":
    if token == ".":
        return BitString("")
    if token.startswith("{"):
        if not token.endswith("}"):
            raise FixtureError(f"unterminated set literal {token!r}")
        body = token[1:-1]
        members = [m for m in body.split(",") if m]
        if not members:
            raise FixtureError("set literals must name at least one member")
        widths = {len(m) for m in members}
        if len(widths) != 1:
            raise FixtureError(f"set literal {token!r} mixes member widths")
        n = widths.pop()
        return FiniteSet(n, members)
    if not all(c in "01" for c in token):
        raise FixtureError(f"malformed enumeration object {token!r}")
    return BitString(token)


def parse_enumerated(text: str, l: "int | None" = None) -> EnumeratedD:
    """Parse an enumeration fixture: one ``object<TAB>level`` line per pair.

    Objects are bare bit strings (``.`` for the empty string) or braced set
    literals like ``{00,01}``.  Blank lines and ``#`` comments are skipped.
    """
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FixtureError(
                f"line {lineno}: expected 'object level', got {line!r}"
            )
        obj = _parse_object(parts[0])
        try:
            level = int(parts[1])
        except ValueError:
            raise FixtureError(f"line {lineno}: malformed level {parts[1]!r}") from None
        pairs.append((obj, level))
    return EnumeratedD(pairs, l=l)


def format_enumerated(d: EnumeratedD) -> str:
    """Render an enumeration in the fixture format, one pair per line."""
    lines = [f"{_format_object(o)}\t{i}" for o, i in d.order]
    return "\n".join(lines) + ("\n" if lines else "")
