"""Batch front door for the library: load inputs, run, write artifacts.

Every subcommand reads systems or fixtures from files, runs the exact
machinery, and writes deterministic artifacts into ``--out``: curves as CSV
(fixed header, LF endings), reports as JSON (sorted keys), and always a
``manifest.json`` echoing the run parameters, so identical invocations
produce byte-identical directories.  There is no interactive mode and no
plotting: the artifacts are plot *data* and machine-checkable reports.

Exit codes: 0 on success, 1 when the library refuses (a domain error,
reported as a JSON record on stderr), 2 on usage errors (bad flags,
unreadable files).
"""

from __future__ import annotations

import argparse
import json
import math
import sys as _sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .codec import BitString
from .descsys import (
    DescriptionSystem,
    FiniteSet,
    enumeration_stream,
    load_system,
)
from .errors import RefusalError, StructLabError
from .experiments import (
    additivity_defect_report,
    make_nonstoch_system,
    verify_nonstoch,
)
from .modelclasses import (
    expand_set,
    format_fn,
    format_pmf,
    parse_fn,
    parse_pmf,
    restrict_to_set,
)
from .predict import codebook_from_sets, snooping_curve
from .search import (
    anytime_search,
    improvement_audit,
    mdl_guarantee_holds,
    trace_jsonl_lines,
)
from .structfn import profile
from .synth import cover_family, parse_synth_stream, synthesize
from .unistat import (
    build_Sli,
    build_index,
    induced_data_D,
    induced_Dk,
    muchnik_lambda,
    reconstruct_from_prefix,
)

__all__ = ["RunManifest", "main"]


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

#: Subcommands that consume a program-enumeration stream and therefore
#: require an explicit seed for reproducibility.
STREAM_COMMANDS = frozenset({"search"})


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce one run, echoed next to its artifacts."""

    command: str
    inputs: dict = field(default_factory=dict)
    x: "str | None" = None
    seed: "int | None" = None
    alpha_max: "int | None" = None
    out: str = "."
    format: "str | None" = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command in STREAM_COMMANDS and self.seed is None:
            raise StructLabError(
                f"the {self.command} command consumes an enumeration stream "
                "and needs an explicit seed"
            )

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": dict(sorted(self.inputs.items())),
            "x": self.x,
            "seed": self.seed,
            "alpha_max": self.alpha_max,
            "out": self.out,
            "format": self.format,
            "options": dict(sorted(self.options.items())),
        }


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    """Curve cell: 'inf' for missing values, plain integers when exact."""
    if v is None:
        return "inf"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        if v == int(v):
            return str(int(v))
        return repr(v)
    return str(v)


def _json_safe(v):
    """Make a payload JSON-serializable without losing exactness.

    Infinities become the string 'inf', integral floats collapse to ints,
    fractions render as 'p/q', bit strings as their digits.
    """
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        if v == int(v):
            return int(v)
        return v
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return v.numerator
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, BitString):
        return str(v)
    if isinstance(v, dict):
        return {k: _json_safe(u) for k, u in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(u) for u in v]
    return v


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _write_json(path: Path, payload) -> None:
    _write_text(path, json.dumps(_json_safe(payload), indent=2, sort_keys=True) + "\n")


def _object_str(obj) -> str:
    if isinstance(obj, FiniteSet):
        return ",".join(str(b) for b in obj.bitstrings())
    return str(obj)


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------


def _parse_members(text: str, n: "int | None" = None) -> FiniteSet:
    """A comma-separated list of equal-width bit strings as a set."""
    parts = [p for p in text.split(",") if p]
    if not parts:
        raise StructLabError("the member list is empty")
    bits = [BitString(p) for p in parts]
    width = n if n is not None else len(bits[0])
    return FiniteSet(width, bits)


def _parse_cover_records(text: str):
    """Parse claimed-model records, one ``record K K_COND MEMBERS`` line each.

    Same lexical conventions as descriptor files: whitespace-separated
    fields, ``#`` comments, blank lines ignored.
    """
    records = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4 or fields[0] != "record":
            raise StructLabError(f"line {lineno}: expected 'record K K_COND MEMBERS'")
        try:
            k = int(fields[1])
            k_cond = int(fields[2])
        except ValueError as exc:
            raise StructLabError(f"line {lineno}: bad integer field") from exc
        members = _parse_members(fields[3], width)
        if width is None:
            width = members.n
        records.append((members, k, k_cond))
    if not records:
        raise StructLabError("a record file names no records")
    return records


def _target_curve(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError as exc:
        raise StructLabError(f"bad target curve {text!r}") from exc


def _full_cube(n: int) -> FiniteSet:
    if not 1 <= n <= 16:
        raise StructLabError(f"universe width must be in [1, 16], got {n}")
    return FiniteSet(n, range(1 << n))


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def _profile_rows(sys: DescriptionSystem, xs, alpha_max):
    for x in xs:
        prof = profile(sys, x, alpha_max=alpha_max)
        yield x, prof


def _cmd_profile(args, out: Path) -> None:
    sys = load_system(args.system)
    xs = [BitString(args.x)] if args.x is not None else list(sys.universe_strings())
    if args.format == "csv":
        lines = ["x,alpha,h,lambda,beta"]
        for x, prof in _profile_rows(sys, xs, args.alpha_max):
            h, lam, beta = prof.h_values(), prof.lambda_values(), prof.beta_values()
            for a in range(prof.alpha_max + 1):
                lines.append(f"{x},{a},{_fmt(h[a])},{_fmt(lam[a])},{_fmt(beta[a])}")
        _write_text(out / "profile.csv", "\n".join(lines) + "\n")
        return
    payload = {"profiles": []}
    for x, prof in _profile_rows(sys, xs, args.alpha_max):
        payload["profiles"].append(
            {
                "x": str(x),
                "K_x": prof.K_x,
                "alpha_max": prof.alpha_max,
                "c_sub": prof.c_sub,
                "h": prof.h_values(),
                "lambda": prof.lambda_values(),
                "beta": prof.beta_values(),
                "critical_alphas": list(prof.critical_alphas),
                "mss_alpha": None if prof.sufficiency is None else prof.sufficiency.alpha,
            }
        )
    _write_json(out / "profile.json", payload)


def _cmd_search(args, out: Path) -> None:
    sys = load_system(args.system)
    alpha = args.alpha_max
    if alpha is None:
        alpha = sys.max_set_program_length()
    stream = enumeration_stream(sys, args.seed)
    trace = anytime_search(sys, args.x, alpha, stream, mode=args.mode)
    _write_text(out / "trace.jsonl", "\n".join(trace_jsonl_lines(trace)) + "\n")
    final = trace.declarations[-1] if trace.declarations else None
    payload = {
        "x": str(trace.x),
        "alpha": trace.alpha,
        "mode": trace.mode,
        "seed": args.seed,
        "declaration_count": len(trace.declarations),
        "flagged_empty": trace.flagged_empty,
        "final_program": None if final is None else str(final.record.witness_program),
        "final_objective": None if final is None else final.objective,
        "final_objective_key": None if final is None else str(final.objective_key),
    }
    if args.mode == "mdl":
        payload["guarantee_ok"] = mdl_guarantee_holds(sys, trace)
        payload["improvement_audit"] = improvement_audit(sys, trace, c=args.c).to_json_dict()
    _write_json(out / "search.json", payload)


def _cmd_synth(args, out: Path) -> None:
    target = _target_curve(args.target)
    n = args.n if args.n is not None else (target[0] if target else 0)
    universe = _full_cube(n)
    events = parse_synth_stream(Path(args.stream).read_text(encoding="utf-8"), width=n)
    run = synthesize(target, universe, events, n=n)
    _write_json(out / "synth.json", run.to_json_dict())


def _cmd_cover(args, out: Path) -> None:
    records = _parse_cover_records(Path(args.records).read_text(encoding="utf-8"))
    report = cover_family(records, args.x, delta=args.delta)
    _write_json(out / "cover.json", report.to_json_dict())


def _cmd_unistat(args, out: Path) -> None:
    sys = load_system(args.system)
    x = BitString(args.x)
    d = induced_data_D(sys)
    idx = build_index(d, x)
    payload = {
        "universe_n": sys.universe_n,
        "x": str(x),
        "K_x": sys.K_data(x),
        "pair_count": d.N_l,
        "width": d.width,
        "index": {
            "I": idx.I,
            "m": None if idx.m is None else str(idx.m),
            "m_len": idx.m_len,
        },
    }
    level = args.i if args.i is not None else idx.m_len
    if level is not None:
        try:
            block = build_Sli(d, level)
            payload["half_block"] = {
                "i": block.i,
                "prefix": str(block.prefix),
                "lo": block.lo,
                "hi": block.hi,
                "cardinality": block.cardinality,
                "members": [_object_str(o) for o in block.members],
                "contains_x": x in block,
            }
        except RefusalError as exc:
            payload["half_block"] = {"i": level, "refused": str(exc)}
    rec_level = args.i if args.i is not None else sys.K_data(x)
    rec = reconstruct_from_prefix(d, rec_level)
    payload["reconstruction"] = {
        "i": rec.i,
        "m": None if rec.m is None else str(rec.m),
        "cutoff_count": rec.cutoff_count,
        "objects": sorted(_object_str(o) for o in rec.objects),
    }
    if args.k is not None:
        alpha0 = args.alpha0 if args.alpha0 is not None else args.k
        d_k = induced_Dk(sys, args.k)
        curve = muchnik_lambda(d_k, x, args.k, alpha0)
        payload["muchnik"] = curve.to_json_dict()
    _write_json(out / "unistat.json", payload)


def _cmd_snoop(args, out: Path) -> None:
    sys = load_system(args.system)
    codebook = codebook_from_sets(sys)
    curve = snooping_curve(codebook, args.x, alpha_max=args.alpha_max)
    if args.format == "csv":
        _write_text(out / "snoop.csv", curve.to_csv())
        return
    payload = {
        "x": str(curve.x),
        "alpha_max": curve.alpha_max,
        "rows": [
            {
                "alpha": row.alpha,
                "loss": row.loss,
                "product": None if row.product is None else row.product,
                "witness": None if row.witness is None else str(row.witness),
            }
            for row in curve.rows
        ],
    }
    _write_json(out / "snoop.json", payload)


def _cmd_convert(args, out: Path) -> None:
    mode = args.mode
    if mode in ("expand-pmf", "expand-fn"):
        if args.members is None:
            raise StructLabError(f"{mode} needs --members")
        s = _parse_members(args.members, args.n)
        if mode == "expand-pmf":
            model = expand_set(s, "pmf")
            _write_text(out / "model.pmf", format_pmf(model))
            payload = {
                "mode": mode,
                "cardinality": s.cardinality,
                "support_length": model.n,
                "file": "model.pmf",
            }
        else:
            model = expand_set(s, "fn")
            _write_text(out / "model.fn", format_fn(model))
            payload = {
                "mode": mode,
                "cardinality": s.cardinality,
                "arg_len": model.arg_len,
                "file": "model.fn",
            }
        _write_json(out / "convert.json", payload)
        return
    if args.x is None:
        raise StructLabError(f"{mode} needs --x")
    if mode == "restrict-pmf":
        if args.pmf is None:
            raise StructLabError("restrict-pmf needs --pmf")
        model = parse_pmf(Path(args.pmf).read_text(encoding="utf-8"), n=args.n)
    elif mode == "restrict-fn":
        if args.fn is None:
            raise StructLabError("restrict-fn needs --fn")
        model = parse_fn(Path(args.fn).read_text(encoding="utf-8"), arg_len=args.n)
    else:  # pragma: no cover - argparse restricts choices
        raise StructLabError(f"unknown conversion {mode!r}")
    restriction = restrict_to_set(model, args.x)
    _write_text(
        out / "set.txt",
        ",".join(str(b) for b in restriction.set.bitstrings()) + "\n",
    )
    payload = dict(restriction.to_json_dict())
    payload["mode"] = mode
    payload["file"] = "set.txt"
    _write_json(out / "convert.json", payload)


def _cmd_audit(args, out: Path) -> None:
    sys = load_system(args.system)
    sums = sys.kraft_sums()
    payload = {
        "universe_n": sys.universe_n,
        "data_programs": len(sys.data_programs),
        "set_programs": len(sys.set_programs),
        "kraft": sums,
        "c_sub": sys.c_sub,
        "additivity": additivity_defect_report(sys).to_json_dict(),
    }
    _write_json(out / "audit.json", payload)


def _cmd_nonstoch(args, out: Path) -> None:
    plan = make_nonstoch_system(args.n, args.alpha0, args.beta_level, seed=args.seed)
    report = verify_nonstoch(plan)
    _write_json(out / "nonstoch.json", report.to_json_dict())
    _write_text(out / "system.tsv", plan.system.to_descriptor_text())


_HANDLERS = {
    "profile": _cmd_profile,
    "search": _cmd_search,
    "synth": _cmd_synth,
    "cover": _cmd_cover,
    "unistat": _cmd_unistat,
    "snoop": _cmd_snoop,
    "convert": _cmd_convert,
    "audit": _cmd_audit,
    "nonstoch": _cmd_nonstoch,
}


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="structlab",
        description="Exact two-part-code analysis over finite description systems.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, system=False, x=None, alpha_max=False, fmt=False):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--out", required=True, help="output directory")
        if system:
            cmd.add_argument("--system", required=True, help="descriptor file")
        if x is not None:
            cmd.add_argument("--x", required=x, help="target bit string")
        if alpha_max:
            cmd.add_argument("--alpha-max", dest="alpha_max", type=int, default=None)
        if fmt:
            cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        return cmd

    add("profile", "h / lambda / beta curves", system=True, x=False, alpha_max=True, fmt=True)

    cmd = add("search", "anytime model search", system=True, x=True, alpha_max=True)
    cmd.add_argument("--seed", type=int, required=True, help="stream shuffle seed")
    cmd.add_argument("--mode", choices=("mdl", "ml", "direct"), default="mdl")
    cmd.add_argument("--c", type=float, default=1.0, help="improvement-audit constant")

    cmd = add("synth", "block-replacement curve synthesis")
    cmd.add_argument("--target", required=True, help="comma-separated target curve")
    cmd.add_argument("--stream", required=True, help="adversary event file")
    cmd.add_argument("--n", type=int, default=None, help="universe width")

    cmd = add("cover", "cover a family of claimed models", x=True)
    cmd.add_argument("--records", required=True, help="record file")
    cmd.add_argument("--delta", type=int, default=None)

    cmd = add("unistat", "enumeration statistics", system=True, x=True)
    cmd.add_argument("--i", type=int, default=None, help="half-block / reconstruction level")
    cmd.add_argument("--k", type=int, default=None, help="complexity budget for the truncated curve")
    cmd.add_argument("--alpha0", type=int, default=None, help="trust horizon for the truncated curve")

    add("snoop", "sequential prediction loss curves", system=True, x=True, alpha_max=True, fmt=True)

    cmd = add("convert", "translate between sets, pmfs and total functions")
    cmd.add_argument(
        "--mode",
        required=True,
        choices=("expand-pmf", "expand-fn", "restrict-pmf", "restrict-fn"),
    )
    cmd.add_argument("--members", default=None, help="comma-separated set members")
    cmd.add_argument("--pmf", default=None, help="probability fixture file")
    cmd.add_argument("--fn", default=None, help="function fixture file")
    cmd.add_argument("--x", default=None, help="target bit string")
    cmd.add_argument("--n", type=int, default=None, help="support / argument length")

    add("audit", "codebook bookkeeping and additivity defects", system=True)

    cmd = add("nonstoch", "synthesize a system with a planted non-typical string")
    cmd.add_argument("--n", type=int, required=True, help="universe width")
    cmd.add_argument("--alpha0", type=int, required=True, help="budget where beta drops")
    cmd.add_argument("--beta-level", dest="beta_level", type=int, required=True)
    cmd.add_argument("--seed", type=int, default=0)

    return p


def _manifest_from_args(args) -> RunManifest:
    inputs = {}
    for key in ("system", "stream", "records", "pmf", "fn"):
        value = getattr(args, key, None)
        if value is not None:
            inputs[key] = str(value)
    options = {}
    for key in ("mode", "c", "target", "n", "delta", "i", "k", "alpha0", "beta_level", "members"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return RunManifest(
        command=args.command,
        inputs=inputs,
        x=getattr(args, "x", None),
        seed=getattr(args, "seed", None),
        alpha_max=getattr(args, "alpha_max", None),
        out=str(args.out),
        format=getattr(args, "format", None),
        options=options,
    )


def _error_record(command: str, exc: Exception) -> str:
    return json.dumps(
        {
            "command": command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        },
        sort_keys=True,
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    command = args.command
    try:
        manifest = _manifest_from_args(args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "manifest.json", manifest.to_json_dict())
        _HANDLERS[command](args, out)
    except StructLabError as exc:
        print(_error_record(command, exc), file=_sys.stderr)
        return 1
    except OSError as exc:
        print(_error_record(command, exc), file=_sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
