"""Finite description systems over a universe of fixed-length bit strings.

A :class:`DescriptionSystem` is a fully enumerable stand-in for a universal
machine.  It consists of three kinds of prefix-free program namespaces over
the universe ``{0,1}^n``:

* **data programs** print individual universe strings; every universe
  string must be printed by at least one program, so the shortest-program
  complexity ``K(x)`` is total;
* **set programs** print nonempty subsets of the universe; ``K(S)`` is the
  length of the shortest program printing exactly ``S`` (infinite when no
  program does);
* **conditional shortcut programs**, grouped per set, print strings given
  that set.  ``K(x | S)`` is the minimum of the index-code length
  ``ceil(log2 |S|)`` (available whenever ``x`` is a member) and the
  shortest shortcut for ``(S, x)``.

Each namespace must satisfy the Kraft inequality exactly; the sums are kept
as ``fractions.Fraction`` and exposed for audits.  The system also carries
its *subadditivity constant*::

    c_sub = max over representable S and x in S of  K(x) - K(S) - K(x|S)

an exact integer (possibly negative) that plays the role usually played by
an O(1) term: two-part descriptions recover data complexity up to ``c_sub``
inside this system, by construction.

Note one deliberate coarsening: conditional shortcuts are keyed by the
*printed set*, not by the program that printed it, so ``K(x | S)`` never
distinguishes two programs for the same set.  Systems whose conditional
behaviour should depend on the description rather than the set must encode
that in separate sets.

Systems can be built directly from dictionaries, parsed from a descriptor
file (see :func:`build_system` for the grammar), or expanded from model
family grammars (cubes, singletons, prefix cylinders, Hamming slices, patch
products, literal and two-part weight-ranked data codes).
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .codec import BitString, encode_sd, string_of_integer
from .errors import DescriptorError
from .rational import ceil_log2, log2_display, pow2

__all__ = [
    "FiniteSet",
    "ModelRecord",
    "DescriptionSystem",
    "EnumerationEvent",
    "build_system",
    "build_system_from_entries",
    "load_system",
    "complexity",
    "enumerate_models",
    "enumeration_stream",
    "apply_permutation",
    "check_prefix_free",
    "kraft_sum",
    "MAX_UNIVERSE_BITS",
]

MAX_UNIVERSE_BITS = 16


# ---------------------------------------------------------------------------
# Finite sets
# ---------------------------------------------------------------------------


class FiniteSet:
    """An immutable subset of the universe ``{0,1}^n``, kept sorted.

    Elements are stored as integers in ``[0, 2^n)``; the integer order of
    values coincides with lexicographic order of the corresponding n-bit
    strings.  The empty set is representable as a value (it shows up as a
    flagged terminal state in synthesis) but description systems refuse to
    *print* it.
    """

    __slots__ = ("_n", "_values", "_members")

    def __init__(self, n: int, values: Iterable["int | str | BitString"]):
        if not 1 <= n <= MAX_UNIVERSE_BITS:
            raise DescriptorError(f"universe width must be in [1, {MAX_UNIVERSE_BITS}], got {n}")
        vals = sorted({self._coerce(n, v) for v in values})
        self._n = n
        self._values = tuple(vals)
        self._members = frozenset(vals)

    @staticmethod
    def _coerce(n: int, v: "int | str | BitString") -> int:
        if isinstance(v, BitString):
            if len(v) != n:
                raise DescriptorError(f"element {v!r} is not {n} bits long")
            return v.value
        if isinstance(v, str):
            b = BitString(v)
            if len(b) != n:
                raise DescriptorError(f"element {v!r} is not {n} bits long")
            return b.value
        v = int(v)
        if not 0 <= v < (1 << n):
            raise DescriptorError(f"element value {v} outside universe of width {n}")
        return v

    @property
    def n(self) -> int:
        return self._n

    @property
    def values(self) -> tuple[int, ...]:
        return self._values

    @property
    def cardinality(self) -> int:
        return len(self._values)

    @property
    def ceil_log_card(self) -> int:
        """ceil(log2 |S|); the index-code length for members."""
        if not self._values:
            raise DescriptorError("ceil_log_card of the empty set")
        return ceil_log2(len(self._values))

    @property
    def log_card(self) -> float:
        return log2_display(len(self._values)) if self._values else -math.inf

    def bitstrings(self) -> tuple[BitString, ...]:
        return tuple(BitString.from_value(self._n, v) for v in self._values)

    def value_of(self, x: "int | str | BitString") -> int:
        return self._coerce(self._n, x)

    def __contains__(self, x: object) -> bool:
        if isinstance(x, int):
            return x in self._members
        if isinstance(x, (str, BitString)):
            try:
                return self._coerce(self._n, x) in self._members
            except DescriptorError:
                return False
        return False

    def __iter__(self) -> Iterator[BitString]:
        return iter(self.bitstrings())

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteSet)
            and self._n == other._n
            and self._values == other._values
        )

    def __hash__(self) -> int:
        return hash((self._n, self._values))

    def __repr__(self) -> str:
        shown = ",".join(str(b) for b in self.bitstrings()[:6])
        more = "" if len(self) <= 6 else f",...({len(self)} total)"
        return f"FiniteSet(n={self._n}, {{{shown}{more}}})"

    def subset_of(self, other: "FiniteSet") -> bool:
        return self._n == other._n and self._members <= other._members

    def intersection_values(self, values: frozenset[int]) -> frozenset[int]:
        return self._members & values


# ---------------------------------------------------------------------------
# Model records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelRecord:
    """A set model together with its exact description-length data.

    ``K_cond`` is ``K(x | S)`` for the query string the record was built
    for (``None`` when the record is query-free).  Exact order keys:

    * ``lambda_key  = 2**K_S * |S|``            (two-part total, as 2**Lambda)
    * ``delta_key   = |S| * 2**-K_cond``        (as 2**delta)

    so integer/Fraction comparisons decide every tie that floats would fudge.
    """

    set: FiniteSet
    K_S: int
    witness_program: BitString
    K_cond: "int | None" = None

    @property
    def cardinality(self) -> int:
        return self.set.cardinality

    @property
    def log_card(self) -> float:
        return self.set.log_card

    @property
    def ceil_log_card(self) -> int:
        return self.set.ceil_log_card

    @property
    def lambda_key(self) -> int:
        return (1 << self.K_S) * self.set.cardinality

    @property
    def total_length(self) -> float:
        """Lambda(S) = K(S) + log2 |S| (display value)."""
        return self.K_S + self.set.log_card

    @property
    def delta_key(self) -> "Fraction | None":
        if self.K_cond is None:
            return None
        return Fraction(self.set.cardinality, 1) * pow2(-self.K_cond)

    @property
    def deficiency(self) -> float:
        """delta(x|S) = log2|S| - K(x|S) (display value)."""
        if self.K_cond is None:
            return math.nan
        return self.set.log_card - self.K_cond

    def sort_key(self) -> tuple[int, int, tuple[int, int]]:
        return (self.K_S, self.set.cardinality, self.witness_program.sort_key())


# ---------------------------------------------------------------------------
# Namespace helpers
# ---------------------------------------------------------------------------


def check_prefix_free(programs: Iterable[BitString], namespace: str) -> None:
    """Raise DescriptorError when one program is a proper prefix of another."""
    ordered = sorted(programs, key=lambda p: str(p))
    for a, b in zip(ordered, ordered[1:]):
        if a == b:
            raise DescriptorError(f"duplicate program {str(a)!r} in {namespace} namespace")
        if b.startswith(a):
            raise DescriptorError(
                f"{namespace} namespace not prefix-free: "
                f"{str(a)!r} is a prefix of {str(b)!r}"
            )


def kraft_sum(programs: Iterable[BitString]) -> Fraction:
    """Exact sum of 2**-|p| over the given programs."""
    return sum((pow2(-len(p)) for p in programs), start=Fraction(0))


# ---------------------------------------------------------------------------
# The description system
# ---------------------------------------------------------------------------


class DescriptionSystem:
    """Three exact prefix-free namespaces over a common universe."""

    def __init__(
        self,
        universe_n: int,
        data_programs: Mapping[BitString, BitString],
        set_programs: Mapping[BitString, FiniteSet],
        cond_shortcuts: "Mapping[FiniteSet, Mapping[BitString, BitString]] | None" = None,
    ):
        if not 1 <= universe_n <= MAX_UNIVERSE_BITS:
            raise DescriptorError(
                f"universe width must be in [1, {MAX_UNIVERSE_BITS}], got {universe_n}"
            )
        self.universe_n = universe_n
        self.data_programs: dict[BitString, BitString] = dict(data_programs)
        self.set_programs: dict[BitString, FiniteSet] = dict(set_programs)
        self.cond_shortcuts: dict[FiniteSet, dict[BitString, BitString]] = {
            s: dict(m) for s, m in (cond_shortcuts or {}).items()
        }
        self._validate()
        self._build_caches()

    # -- validation ----------------------------------------------------

    def _validate(self) -> None:
        n = self.universe_n
        size = 1 << n

        if not self.data_programs:
            raise DescriptorError("a system needs at least one data program")
        for p, out in self.data_programs.items():
            if len(out) != n:
                raise DescriptorError(
                    f"data program {str(p)!r} prints {str(out)!r}, not an {n}-bit string"
                )
        check_prefix_free(self.data_programs, "data")
        if kraft_sum(self.data_programs) > 1:
            raise DescriptorError("data namespace violates the Kraft inequality")

        covered = {out.value for out in self.data_programs.values()}
        if len(covered) != size:
            missing = next(v for v in range(size) if v not in covered)
            raise DescriptorError(
                "data namespace leaves universe elements undescribed, e.g. "
                + str(BitString.from_value(n, missing))
            )

        for p, s in self.set_programs.items():
            if s.n != n:
                raise DescriptorError(f"set program {str(p)!r} prints a set of wrong width")
            if s.cardinality == 0:
                raise DescriptorError(f"set program {str(p)!r} prints the empty set")
        check_prefix_free(self.set_programs, "set")
        if kraft_sum(self.set_programs) > 1:
            raise DescriptorError("set namespace violates the Kraft inequality")

        representable = set(self.set_programs.values())
        for s, table in self.cond_shortcuts.items():
            if s not in representable:
                raise DescriptorError(
                    "conditional shortcuts refer to a set no program prints"
                )
            for q, out in table.items():
                if len(out) != n:
                    raise DescriptorError(
                        f"conditional shortcut {str(q)!r} prints a non-universe string"
                    )
            check_prefix_free(table, "conditional")
            if kraft_sum(table) > 1:
                raise DescriptorError(
                    "a conditional namespace violates the Kraft inequality"
                )

    # -- caches ----------------------------------------------------------

    def _build_caches(self) -> None:
        n = self.universe_n
        size = 1 << n

        k_data: list[int] = [0] * size
        witness_data: list[BitString] = [None] * size  # type: ignore[list-item]
        for p in sorted(self.data_programs, key=BitString.sort_key):
            v = self.data_programs[p].value
            if witness_data[v] is None:
                k_data[v] = len(p)
                witness_data[v] = p
        self._k_data = k_data
        self._witness_data = witness_data

        set_index: dict[FiniteSet, tuple[int, BitString]] = {}
        for p in sorted(self.set_programs, key=BitString.sort_key):
            s = self.set_programs[p]
            if s not in set_index:
                set_index[s] = (len(p), p)
        self._set_index = set_index
        self._set_entries: tuple[ModelRecord, ...] = tuple(
            sorted(
                (ModelRecord(s, k, w) for s, (k, w) in set_index.items()),
                key=ModelRecord.sort_key,
            )
        )

        shortcut_min: dict[FiniteSet, dict[int, int]] = {}
        for s, table in self.cond_shortcuts.items():
            best: dict[int, int] = {}
            for q in sorted(table, key=BitString.sort_key):
                v = table[q].value
                if v not in best:
                    best[v] = len(q)
            shortcut_min[s] = best
        self._shortcut_min = shortcut_min

        self._containing_cache: dict[int, tuple[ModelRecord, ...]] = {}
        self._c_sub: "int | None" = None

    # -- complexities ------------------------------------------------------

    def universe_size(self) -> int:
        return 1 << self.universe_n

    def universe_values(self) -> range:
        return range(1 << self.universe_n)

    def universe_strings(self) -> Iterator[BitString]:
        n = self.universe_n
        for v in self.universe_values():
            yield BitString.from_value(n, v)

    def _value(self, x: "int | str | BitString") -> int:
        return FiniteSet._coerce(self.universe_n, x)

    def K_data(self, x: "int | str | BitString") -> int:
        """K(x): length of the shortest data program printing x (total)."""
        return self._k_data[self._value(x)]

    def data_witness(self, x: "int | str | BitString") -> BitString:
        return self._witness_data[self._value(x)]

    def K_set(self, s: FiniteSet) -> "int | float":
        """K(S): shortest program printing exactly S; inf when none does."""
        entry = self._set_index.get(s)
        return entry[0] if entry is not None else math.inf

    def set_witness(self, s: FiniteSet) -> "BitString | None":
        entry = self._set_index.get(s)
        return entry[1] if entry is not None else None

    def is_representable(self, s: FiniteSet) -> bool:
        return s in self._set_index

    def K_cond(self, x: "int | str | BitString", s: FiniteSet) -> "int | float":
        """K(x|S): min of the index code (members only) and any shortcut."""
        v = self._value(x)
        best: "int | float" = math.inf
        if v in s:
            best = s.ceil_log_card
        table = self._shortcut_min.get(s)
        if table is not None:
            q = table.get(v)
            if q is not None and q < best:
                best = q
        return best

    # -- canonical set entries ---------------------------------------------

    def set_entries(self) -> tuple[ModelRecord, ...]:
        """All distinct representable sets with minimal witnesses, sorted."""
        return self._set_entries

    def entries_containing(self, x: "int | str | BitString") -> tuple[ModelRecord, ...]:
        """Distinct representable sets containing x, each with K(x|S) filled in."""
        v = self._value(x)
        cached = self._containing_cache.get(v)
        if cached is None:
            cached = tuple(
                ModelRecord(e.set, e.K_S, e.witness_program, int(self.K_cond(v, e.set)))
                for e in self._set_entries
                if v in e.set
            )
            self._containing_cache[v] = cached
        return cached

    def max_set_program_length(self) -> int:
        if not self._set_entries:
            return 0
        return max(e.K_S for e in self._set_entries)

    # -- audits --------------------------------------------------------

    def kraft_sums(self) -> dict[str, "Fraction | dict[str, Fraction]"]:
        cond = {
            str(self.set_witness(s) or "?"): kraft_sum(table)
            for s, table in sorted(
                self.cond_shortcuts.items(),
                key=lambda kv: (self.K_set(kv[0]), kv[0].values),
            )
        }
        return {
            "data": kraft_sum(self.data_programs),
            "set": kraft_sum(self.set_programs),
            "cond": cond,
        }

    @property
    def c_sub(self) -> int:
        """max over representable S and x in S of K(x) - K(S) - K(x|S).

        The exact constant by which two-part descriptions in this system may
        undershoot plain data complexity; 0 for a system with no sets.
        """
        if self._c_sub is None:
            best: "int | None" = None
            for entry in self._set_entries:
                k_s = entry.K_S
                for v in entry.set.values:
                    gap = self._k_data[v] - k_s - int(self.K_cond(v, entry.set))
                    if best is None or gap > best:
                        best = gap
            self._c_sub = 0 if best is None else best
        return self._c_sub

    # -- serialization ---------------------------------------------------

    def to_descriptor_text(self) -> str:
        """Serialize as an explicit descriptor (families already expanded)."""

        def prog(p: BitString) -> str:
            return str(p) if len(p) else "."

        lines = [f"# universe width {self.universe_n}"]
        for p in sorted(self.data_programs, key=BitString.sort_key):
            lines.append(f"data\t{prog(p)}\t{self.data_programs[p]}")
        for p in sorted(self.set_programs, key=BitString.sort_key):
            members = ",".join(str(b) for b in self.set_programs[p].bitstrings())
            lines.append(f"set\t{prog(p)}\t{members}")
        for s, table in sorted(
            self.cond_shortcuts.items(), key=lambda kv: (self.K_set(kv[0]), kv[0].values)
        ):
            anchor = self.set_witness(s)
            if anchor is None:  # pragma: no cover - ruled out by validation
                raise DescriptorError("cannot serialize shortcuts of an unprintable set")
            for q in sorted(table, key=BitString.sort_key):
                lines.append(f"cond\t{prog(q)}\t{table[q]}@{prog(anchor)}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# The complexity dispatcher
# ---------------------------------------------------------------------------


def complexity(sys: DescriptionSystem, kind: str, *args) -> "int | float":
    """Unified complexity query.

    ``complexity(sys, "data", x)`` -> K(x);
    ``complexity(sys, "set", S)`` -> K(S) (inf when unrepresentable);
    ``complexity(sys, "cond", x, S)`` -> K(x|S) (inf when undefined).
    """
    if kind == "data":
        if len(args) != 1:
            raise DescriptorError("data query takes exactly one string")
        return sys.K_data(args[0])
    if kind == "set":
        if len(args) != 1 or not isinstance(args[0], FiniteSet):
            raise DescriptorError("set query takes exactly one FiniteSet")
        return sys.K_set(args[0])
    if kind == "cond":
        if len(args) != 2 or not isinstance(args[1], FiniteSet):
            raise DescriptorError("cond query takes a string and a FiniteSet")
        return sys.K_cond(args[0], args[1])
    raise DescriptorError(f"unknown complexity query kind {kind!r}")


def enumerate_models(
    sys: DescriptionSystem,
    alpha: int,
    x: "int | str | BitString | None" = None,
) -> tuple[ModelRecord, ...]:
    """All distinct representable sets with K(S) <= alpha, optionally x in S.

    Records come back sorted by (K(S), |S|, witness program); when ``x`` is
    given each record carries K(x|S) for that x.
    """
    if x is None:
        pool: Iterable[ModelRecord] = sys.set_entries()
    else:
        pool = sys.entries_containing(x)
    return tuple(e for e in pool if e.K_S <= alpha)


# ---------------------------------------------------------------------------
# Enumeration streams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationEvent:
    """One program surfacing during an enumeration of the system."""

    time: int
    kind: str  # "data" | "set"
    program: BitString
    output: "BitString | FiniteSet"


def enumeration_stream(sys: DescriptionSystem, seed: int) -> tuple[EnumerationEvent, ...]:
    """A seed-keyed total enumeration of all data and set programs.

    Every (kind, program) pair appears exactly once; times are 0,1,2,....
    The order is a pure function of the system and the seed.
    """
    canonical: list[tuple[str, BitString]] = [
        ("data", p) for p in sorted(sys.data_programs, key=BitString.sort_key)
    ] + [("set", p) for p in sorted(sys.set_programs, key=BitString.sort_key)]
    rng = random.Random(seed)
    rng.shuffle(canonical)
    events = []
    for t, (kind, p) in enumerate(canonical):
        output = sys.data_programs[p] if kind == "data" else sys.set_programs[p]
        events.append(EnumerationEvent(t, kind, p, output))
    return tuple(events)


# ---------------------------------------------------------------------------
# Recoding
# ---------------------------------------------------------------------------


def apply_permutation(
    sys: DescriptionSystem, mapping: "Mapping[int, int] | Callable[[int], int]"
) -> DescriptionSystem:
    """Transport the system along a bijection of the universe.

    Programs are untouched; every printed string/set is replaced by its
    image.  All description lengths are invariant by construction, so
    profiles of ``pi(x)`` in the image system match profiles of ``x``.
    """
    n = sys.universe_n
    size = 1 << n
    if callable(mapping):
        table = [mapping(v) for v in range(size)]
    else:
        table = [mapping[v] for v in range(size)]
    if sorted(table) != list(range(size)):
        raise DescriptorError("recoding map is not a bijection of the universe")

    def map_string(b: BitString) -> BitString:
        return BitString.from_value(n, table[b.value])

    def map_set(s: FiniteSet) -> FiniteSet:
        return FiniteSet(n, (table[v] for v in s.values))

    return DescriptionSystem(
        n,
        {p: map_string(out) for p, out in sys.data_programs.items()},
        {p: map_set(s) for p, s in sys.set_programs.items()},
        {
            map_set(s): {q: map_string(out) for q, out in tbl.items()}
            for s, tbl in sys.cond_shortcuts.items()
        },
    )


# ---------------------------------------------------------------------------
# Descriptor parsing and model families
# ---------------------------------------------------------------------------

_FAMILY_RE = re.compile(r"@family:([a-z_]+)\((.*)\)\Z")


def _parse_program(token: str) -> BitString:
    if token == ".":
        return BitString("")
    try:
        return BitString(token)
    except Exception as exc:
        raise DescriptorError(f"bad program field {token!r}") from exc


def _parse_family_args(text: str) -> dict[str, int]:
    args: dict[str, int] = {}
    if not text.strip():
        return args
    for part in text.split(","):
        if "=" not in part:
            raise DescriptorError(f"bad family argument {part!r}")
        key, _, val = part.partition("=")
        key = key.strip()
        try:
            args[key] = int(val)
        except ValueError as exc:
            raise DescriptorError(f"family argument {key!r} must be an integer") from exc
    return args


def _require_args(name: str, args: dict[str, int], *wanted: str) -> list[int]:
    missing = [w for w in wanted if w not in args]
    extra = [k for k in args if k not in wanted]
    if missing or extra:
        raise DescriptorError(
            f"family {name!r} takes arguments {wanted}, got {sorted(args)}"
        )
    return [args[w] for w in wanted]


def _weight_slice(n: int, k: int) -> list[int]:
    return [v for v in range(1 << n) if bin(v).count("1") == k]


def expand_family(
    kind: str, tag: BitString, name: str, args: dict[str, int]
) -> list[tuple[str, BitString, "BitString | FiniteSet"]]:
    """Expand one ``@family:`` descriptor entry into concrete entries.

    Set families (``kind == "set"``):

    * ``cube(n)``        -- the tag alone prints the full universe;
    * ``singletons(n)``  -- tag + the literal n-bit string prints {x};
    * ``cylinders(n)``   -- tag + encode_sd(p) prints all extensions of p,
      for every prefix p with 0 <= |p| <= n;
    * ``hamming(n)``     -- tag + encode_sd(string_of_integer(k)) prints the
      weight-k slice, k = 0..n;
    * ``patches(n, m)``  -- with m dividing n, tag + the concatenation of
      encode_sd(string_of_integer(k_i)) over the n/m patches prints the
      strings whose i-th m-bit patch has weight k_i.

    Data families (``kind == "data"``):

    * ``literal(n)``     -- tag + x prints x;
    * ``bernoulli(n)``   -- tag + encode_sd(string_of_integer(k)) + a fixed
      ceil(log2 C(n,k))-bit rank prints the rank-th string of weight k; a
      two-part code that makes simple strings cheap.

    Parameter codes that follow a variable-length family parameter are
    self-delimiting; fixed-width fields (singleton literals, bernoulli
    ranks) are self-delimiting in context because their width is determined
    by what was already parsed.
    """
    entries: list[tuple[str, BitString, BitString | FiniteSet]] = []
    if kind == "set":
        if name == "cube":
            (n,) = _require_args(name, args, "n")
            entries.append(("set", tag, FiniteSet(n, range(1 << n))))
        elif name == "singletons":
            (n,) = _require_args(name, args, "n")
            for v in range(1 << n):
                entries.append(
                    ("set", tag + BitString.from_value(n, v), FiniteSet(n, [v]))
                )
        elif name == "cylinders":
            (n,) = _require_args(name, args, "n")
            prefixes = [BitString("")] + [
                BitString.from_value(l, v) for l in range(1, n + 1) for v in range(1 << l)
            ]
            for p in prefixes:
                shift = n - len(p)
                base = p.value << shift
                members = range(base, base + (1 << shift))
                entries.append(("set", tag + encode_sd(p), FiniteSet(n, members)))
        elif name == "hamming":
            (n,) = _require_args(name, args, "n")
            for k in range(n + 1):
                entries.append(
                    (
                        "set",
                        tag + encode_sd(string_of_integer(k)),
                        FiniteSet(n, _weight_slice(n, k)),
                    )
                )
        elif name == "patches":
            n, m = _require_args(name, args, "n", "m")
            if m < 1 or n % m != 0:
                raise DescriptorError("patches family needs m >= 1 dividing n")
            l = n // m
            mask = (1 << m) - 1
            for vector in iter_product(range(m + 1), repeat=l):
                program = tag
                for k in vector:
                    program = program + encode_sd(string_of_integer(k))
                members = [
                    v
                    for v in range(1 << n)
                    if all(
                        bin((v >> (m * (l - 1 - i))) & mask).count("1") == vector[i]
                        for i in range(l)
                    )
                ]
                entries.append(("set", program, FiniteSet(n, members)))
        else:
            raise DescriptorError(f"unknown set family {name!r}")
    elif kind == "data":
        if name == "literal":
            (n,) = _require_args(name, args, "n")
            for v in range(1 << n):
                b = BitString.from_value(n, v)
                entries.append(("data", tag + b, b))
        elif name == "bernoulli":
            (n,) = _require_args(name, args, "n")
            for k in range(n + 1):
                slice_vals = _weight_slice(n, k)
                width = (len(slice_vals) - 1).bit_length()
                head = tag + encode_sd(string_of_integer(k))
                for rank, v in enumerate(slice_vals):
                    entries.append(
                        (
                            "data",
                            head + BitString.from_value(width, rank),
                            BitString.from_value(n, v),
                        )
                    )
        else:
            raise DescriptorError(f"unknown data family {name!r}")
    else:
        raise DescriptorError(f"families are not supported for kind {kind!r}")
    return entries


RawEntry = tuple[str, "str | BitString", str]


def _infer_universe(widths: set[int]) -> int:
    if not widths:
        raise DescriptorError("cannot infer the universe width: no sized payloads")
    if len(widths) > 1:
        raise DescriptorError(f"inconsistent universe widths {sorted(widths)}")
    return widths.pop()


def build_system_from_entries(entries: Iterable[RawEntry]) -> DescriptionSystem:
    """Build a system from raw (kind, program, payload) descriptor entries.

    Payload syntax per kind:

    * ``data``: an n-bit string, or ``@family:...``;
    * ``set``: comma-separated n-bit strings, or ``@family:...``;
    * ``cond``: ``X@P`` where X is the printed n-bit string and P is the
      set program (``.`` for the empty program) whose printed set the
      shortcut is conditioned on.

    The universe width is inferred from the payloads and family arguments
    and must be consistent.
    """
    expanded: list[tuple[str, BitString, object]] = []
    cond_raw: list[tuple[BitString, str, str]] = []
    widths: set[int] = set()

    for lineno, (kind, program_token, payload) in enumerate(entries, start=1):
        kind = kind.strip()
        program = (
            program_token
            if isinstance(program_token, BitString)
            else _parse_program(str(program_token).strip())
        )
        payload = payload.strip()
        if kind not in ("data", "set", "cond"):
            raise DescriptorError(f"entry {lineno}: unknown kind {kind!r}")
        fam = _FAMILY_RE.match(payload)
        if fam:
            name, argtext = fam.group(1), fam.group(2)
            args = _parse_family_args(argtext)
            if "n" in args:
                widths.add(args["n"])
            expanded.extend(expand_family(kind, program, name, args))
            continue
        if kind == "data":
            out = BitString(payload)
            widths.add(len(out))
            expanded.append(("data", program, out))
        elif kind == "set":
            members = [tok for tok in payload.split(",") if tok]
            if not members:
                raise DescriptorError(f"entry {lineno}: set payload has no members")
            for tok in members:
                widths.add(len(tok))
            expanded.append(("set", program, tuple(members)))
        else:  # cond
            if "@" not in payload:
                raise DescriptorError(
                    f"entry {lineno}: cond payload must look like X@SETPROGRAM"
                )
            xtok, _, anchor = payload.partition("@")
            widths.add(len(xtok))
            cond_raw.append((program, xtok, anchor.strip()))

    n = _infer_universe(widths)

    data_programs: dict[BitString, BitString] = {}
    set_programs: dict[BitString, FiniteSet] = {}
    for kind, program, payload in expanded:
        if kind == "data":
            out = payload if isinstance(payload, BitString) else BitString(payload)
            if program in data_programs:
                raise DescriptorError(f"duplicate data program {str(program)!r}")
            data_programs[program] = out
        else:
            s = payload if isinstance(payload, FiniteSet) else FiniteSet(n, payload)
            if program in set_programs:
                raise DescriptorError(f"duplicate set program {str(program)!r}")
            set_programs[program] = s

    cond_shortcuts: dict[FiniteSet, dict[BitString, BitString]] = {}
    for program, xtok, anchor_tok in cond_raw:
        anchor = _parse_program(anchor_tok)
        target = set_programs.get(anchor)
        if target is None:
            raise DescriptorError(
                f"cond entry references unknown set program {anchor_tok!r}"
            )
        table = cond_shortcuts.setdefault(target, {})
        if program in table:
            raise DescriptorError(
                f"duplicate conditional program {str(program)!r} for one set"
            )
        table[program] = BitString(xtok)

    return DescriptionSystem(n, data_programs, set_programs, cond_shortcuts)


def build_system(text: str) -> DescriptionSystem:
    """Parse a descriptor from text.

    Grammar: one entry per line, ``kind  program  payload`` separated by
    whitespace (canonically tabs); ``#`` starts a comment; blank lines are
    ignored; ``.`` denotes the empty program.  See
    :func:`build_system_from_entries` for payload syntax and
    :func:`expand_family` for the family grammars.
    """
    entries: list[RawEntry] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise DescriptorError(f"descriptor line needs 3 fields: {raw!r}")
        entries.append((fields[0], fields[1], fields[2]))
    return build_system_from_entries(entries)


def load_system(path: "str | Path") -> DescriptionSystem:
    """Read and parse a descriptor file."""
    return build_system(Path(path).read_text(encoding="utf-8"))
