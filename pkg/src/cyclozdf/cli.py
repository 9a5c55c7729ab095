"""Command-line interface.

Exit codes: 0 success / PASS, 1 verification FAIL, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .coset import (
    build_coset_index_function,
    build_partition,
    build_subgroup,
    cyclic_subgroups,
)
from .families import (
    DEFAULT_BRUTE_BOUND,
    FamilyDescriptor,
    Verdict,
    VerificationReport,
    family_mp_crt,
    family_p1p2_crt,
    family_p_power_minus,
    family_p_power_plus_s,
    family_p_squared,
    family_two_power,
    family_z4,
    match_family,
    table_two_rows,
    verify_family,
    with_expectations,
)
from .modular import ResidueRing
from .spectrum import ZdfSpectrum, spectrum_direct, spectrum_via_unions

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

FAMILY_PARAMS = {
    "z4": (),
    "two-power": ("k",),
    "p-squared": ("p",),
    "p-power-minus": ("p", "k"),
    "p-power-plus-s": ("p", "k", "s"),
    "mp-crt": ("m", "p", "s", "t"),
    "p1p2-crt": ("p1", "p2", "s1", "t1", "s2", "t2"),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class ScanRecord:
    n: int
    e: int
    k: int
    m: int
    S: Tuple[int, ...]
    classification: str
    family: Optional[str]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n, "e": self.e, "k": self.k, "m": self.m, "S": list(self.S),
            "classification": self.classification, "family": self.family,
        }


# --------------------------------------------------------------------------
# family selection


def descriptors_from_args(args: argparse.Namespace) -> List[FamilyDescriptor]:
    name = args.family
    missing = [p for p in FAMILY_PARAMS[name] if getattr(args, p) is None]
    if missing:
        raise UsageError(f"family {name} needs --{' --'.join(missing)}")
    a = args
    if name == "z4":
        return family_z4()
    if name == "two-power":
        return [family_two_power(a.k)]
    if name == "p-squared":
        return [family_p_squared(a.p)]
    if name == "p-power-minus":
        return [family_p_power_minus(a.p, a.k)]
    if name == "p-power-plus-s":
        return [family_p_power_plus_s(a.p, a.k, a.s)]
    if name == "mp-crt":
        return [family_mp_crt(a.m, a.p, a.s, a.t, g=a.seed_generator)]
    return [
        family_p1p2_crt(
            a.p1, a.p2, a.s1, a.t1, a.s2, a.t2,
            g1=a.seed_generator, g2=a.seed_generator2,
        )
    ]


def _parse_set(text: str) -> Tuple[int, ...]:
    try:
        return tuple(sorted({int(v) for v in text.replace("|", ",").split(",") if v.strip()}))
    except ValueError:
        raise UsageError(f"cannot parse integer set {text!r}") from None


# --------------------------------------------------------------------------
# serialization


def descriptor_to_dict(desc: FamilyDescriptor) -> Dict[str, Any]:
    return {
        "family": desc.family_id.value,
        "parameters": dict(desc.parameters),
        "e": desc.generator,
        "predicted": {
            "n": desc.predicted_n,
            "m": desc.predicted_m,
            "S": list(desc.predicted_S),
            "order": desc.predicted_order,
            "per_class": [
                {"class": c.description, "N": c.count} for c in desc.predicted_per_class
            ],
        },
        "notes": list(desc.notes),
    }


def report_to_dict(report: VerificationReport) -> Dict[str, Any]:
    return {
        "descriptor": descriptor_to_dict(report.descriptor),
        "subgroup": list(report.subgroup_elements),
        "measured": {
            "n": report.descriptor.predicted_n,
            "m": report.measured_m,
            "S": list(report.measured_S),
            "order": report.measured_order,
        },
        "per_class_match": report.per_class_match,
        "paths_agree": report.paths_agree,
        "verdict": report.verdict.value,
        "mismatches": list(report.mismatches),
        "notes": list(report.notes),
    }


def spectrum_to_dict(sp: ZdfSpectrum) -> Dict[str, Any]:
    return {
        "n": sp.n,
        "m": sp.m,
        "S": list(sp.S),
        "classification": sp.classification,
        "per_shift": [{"a": a, "N": c} for a, c in enumerate(sp.per_shift, start=1)],
    }


def dump_json(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _fmt_set(values: Sequence[int]) -> str:
    return "{" + ", ".join(map(str, values)) + "}"


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _bar(values: Sequence[int]) -> str:
    return "|".join(map(str, values))


REPORT_HEADER = (
    "family", "parameters", "n", "e", "predicted_m", "predicted_S",
    "measured_m", "measured_S", "verdict",
)


def _report_row(r: VerificationReport) -> List[Any]:
    d = r.descriptor
    params = ";".join(f"{k}={v}" for k, v in sorted(d.parameters.items()))
    return [
        d.family_id.value, params, d.predicted_n, d.generator, d.predicted_m,
        _bar(d.predicted_S), r.measured_m, _bar(r.measured_S), r.verdict.value,
    ]


def _report_text(r: VerificationReport) -> str:
    d = r.descriptor
    params = ", ".join(f"{k}={v}" for k, v in sorted(d.parameters.items()))
    lines = [
        f"{d.family_id.value} ({params}) e={d.generator}",
        f"  predicted ({d.predicted_n}, {d.predicted_m}, {_fmt_set(d.predicted_S)})",
        f"  measured  ({d.predicted_n}, {r.measured_m}, {_fmt_set(r.measured_S)})"
        f"  |G|={r.measured_order}",
        f"  {r.verdict.value}",
    ]
    lines += [f"  mismatch: {m}" for m in r.mismatches]
    lines += [f"  note: {m}" for m in r.notes]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# commands; each returns (exit code, json results, csv text, plain text)


def cmd_construct(args: argparse.Namespace):
    results = []
    rows = []
    text = []
    for desc in descriptors_from_args(args):
        G = build_subgroup(desc.generator, ResidueRing(desc.predicted_n))
        part = build_partition(G)
        f = build_coset_index_function(part)
        entry = descriptor_to_dict(desc)
        entry.update(
            subgroup=list(G.elements),
            order=G.order,
            cosets=[list(c) for c in part.cosets],
            m=f.image_size,
            table=list(f.table),
        )
        results.append(entry)
        rows += [[desc.predicted_n, desc.generator, x, fx] for x, fx in enumerate(f.table)]
        text.append(
            f"{desc.family_id.value} e={desc.generator} n={desc.predicted_n} |G|={G.order}\n"
            f"  predicted ({desc.predicted_n}, {desc.predicted_m}, {_fmt_set(desc.predicted_S)})\n"
            f"  G = {_fmt_set(G.elements)}\n"
            f"  cosets = {', '.join(_fmt_set(c) for c in part.cosets)}\n"
            f"  f = {list(f.table)}\n"
        )
    return EXIT_OK, {"constructions": results}, _csv(("n", "e", "x", "f"), rows), "".join(text)


def _reports_output(reports: List[VerificationReport]):
    failed = any(r.verdict is Verdict.FAIL for r in reports)
    overall = "FAIL" if failed else "PASS"
    if all(r.verdict is Verdict.UNVERIFIABLE for r in reports):
        overall = Verdict.UNVERIFIABLE.value
    results = {"reports": [report_to_dict(r) for r in reports], "verdict": overall}
    csv_text = _csv(REPORT_HEADER, [_report_row(r) for r in reports])
    text = "".join(_report_text(r) for r in reports) + f"overall: {overall}\n"
    return (EXIT_FAIL if failed else EXIT_OK), results, csv_text, text


def cmd_verify(args: argparse.Namespace):
    expect_S = _parse_set(args.expect_S) if args.expect_S is not None else None
    if args.family is not None:
        if args.n is not None or args.e is not None:
            raise UsageError("use either --family or --n/--e, not both")
        descs = [
            with_expectations(d, m=args.expect_m, S=expect_S)
            for d in descriptors_from_args(args)
        ]
        return _reports_output([verify_family(d, args.brute_bound) for d in descs])

    if args.n is None or args.e is None:
        raise UsageError("verify needs --family or both --n and --e")
    ring = ResidueRing(args.n)
    G = build_subgroup(args.e % args.n, ring)
    unions = spectrum_via_unions(G)
    paths_agree = None
    measured = unions
    if args.n <= args.brute_bound:
        measured = spectrum_direct(build_coset_index_function(build_partition(G)))
        paths_agree = measured == unions
    match = match_family(args.n, G.elements, measured.m, measured.S)
    mismatches = [] if paths_agree is not False else ["direct and union-of-solutions spectra disagree"]
    if args.expect_m is not None and args.expect_m != measured.m:
        mismatches.append(f"m: expected {args.expect_m}, measured {measured.m}")
    if expect_S is not None and expect_S != measured.S:
        mismatches.append(f"S: expected {list(expect_S)}, measured {list(measured.S)}")
    verdict = "FAIL" if mismatches else "PASS"
    results = {
        "n": args.n,
        "e": G.generator,
        "subgroup": list(G.elements),
        "k": G.order,
        "measured": {"n": args.n, "m": measured.m, "S": list(measured.S)},
        "classification": measured.classification,
        "paths_agree": paths_agree,
        "matched_family": None if match is None else descriptor_to_dict(match),
        "mismatches": mismatches,
        "verdict": verdict,
    }
    fam = "" if match is None else match.family_id.value
    csv_text = _csv(
        ("n", "e", "k", "m", "S", "classification", "family", "verdict"),
        [[args.n, G.generator, G.order, measured.m, _bar(measured.S),
          measured.classification, fam, verdict]],
    )
    text = (
        f"n={args.n} e={G.generator} |G|={G.order}\n"
        f"  measured ({args.n}, {measured.m}, {_fmt_set(measured.S)}) {measured.classification}\n"
        f"  matched family: {fam or 'none'}\n"
        + "".join(f"  mismatch: {m}\n" for m in mismatches)
        + f"  {verdict}\n"
    )
    return (EXIT_FAIL if mismatches else EXIT_OK), results, csv_text, text


def cmd_spectrum(args: argparse.Namespace):
    G = build_subgroup(args.e % args.n, ResidueRing(args.n))
    sp = spectrum_via_unions(G)
    paths_agree = None
    if args.n <= args.brute_bound:
        direct = spectrum_direct(build_coset_index_function(build_partition(G)))
        paths_agree = direct == sp
    results = spectrum_to_dict(sp)
    results.update(e=G.generator, k=G.order, paths_agree=paths_agree)
    csv_text = _csv(("a", "N"), list(enumerate(sp.per_shift, start=1)))
    text = "".join(f"a={a}: {c}\n" for a, c in enumerate(sp.per_shift, start=1))
    text += f"S={_fmt_set(sp.S)} m={sp.m} {sp.classification}\n"
    code = EXIT_FAIL if paths_agree is False else EXIT_OK
    return code, results, csv_text, text


def scan_modulus(n: int) -> List[ScanRecord]:
    out = []
    for G in cyclic_subgroups(ResidueRing(n)):
        sp = spectrum_via_unions(G)
        match = match_family(n, G.elements, sp.m, sp.S)
        out.append(ScanRecord(
            n=n, e=G.generator, k=G.order, m=sp.m, S=sp.S,
            classification=sp.classification,
            family=None if match is None else match.family_id.value,
        ))
    return out


def scan(n_min: int, n_max: int, jobs: int = 1) -> List[ScanRecord]:
    ns = range(n_min, n_max + 1)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(scan_modulus, ns))
    else:
        chunks = [scan_modulus(n) for n in ns]
    return [r for chunk in chunks for r in chunk]


def cmd_scan(args: argparse.Namespace):
    if not 2 <= args.n_min <= args.n_max <= args.brute_bound:
        raise UsageError(
            f"need 2 <= n-min <= n-max <= brute-bound, got "
            f"{args.n_min}, {args.n_max}, {args.brute_bound}"
        )
    records = scan(args.n_min, args.n_max, args.jobs)
    results = {"records": [r.to_dict() for r in records]}
    csv_text = _csv(
        ("n", "e", "k", "m", "S", "classification", "family"),
        [[r.n, r.e, r.k, r.m, _bar(r.S), r.classification, r.family or ""] for r in records],
    )
    text = "".join(
        f"n={r.n} e={r.e} k={r.k} m={r.m} S={_fmt_set(r.S)} {r.classification}"
        + (f" [{r.family}]" if r.family else "") + "\n"
        for r in records
    )
    return EXIT_OK, results, csv_text, text


def cmd_table(args: argparse.Namespace):
    reports = [verify_family(d, args.brute_bound) for d in table_two_rows()]
    return _reports_output(reports)


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "scan": cmd_scan,
    "table": cmd_table,
}


# --------------------------------------------------------------------------
# argument parsing


def _brute_bound(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("brute bound must be >= 2")
    return v


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--emit", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--brute-bound", type=_brute_bound, default=DEFAULT_BRUTE_BOUND,
                   help="largest n for the direct O(n^2) cross-check")


def _add_family_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--family", choices=sorted(FAMILY_PARAMS), required=required)
    for name in ("k", "p", "s", "t", "m", "p1", "p2", "s1", "t1", "s2", "t2"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--seed-generator", type=int,
                   help="generator of Z_p^x (mp-crt) or Z_p1^x (p1p2-crt)")
    p.add_argument("--seed-generator2", type=int, help="generator of Z_p2^x (p1p2-crt)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclozdf",
        description="Zero-difference functions over Z_n from cyclic unit subgroups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a family instance and its coset table")
    _add_family_args(p, required=True)
    _add_common(p)

    p = sub.add_parser("verify", help="check predictions against the brute-force oracle")
    _add_family_args(p, required=False)
    p.add_argument("--n", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--expect-m", type=int, help="override the predicted image size")
    p.add_argument("--expect-S", help="override the predicted S, e.g. 0,2")
    _add_common(p)

    p = sub.add_parser("spectrum", help="per-shift collision counts for <e> in Z_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("scan", help="all distinct cyclic unit subgroups over a range of n")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("table", help="verify one instance of every family")
    _add_common(p)
    return parser


def _inputs(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "emit", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "n", None) is not None and args.n < 2:
            raise UsageError(f"n must be >= 2, got {args.n}")
        code, results, csv_text, text = COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.emit == "json":
        out = dump_json({
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "inputs": _inputs(args),
            "results": results,
        })
    elif args.emit == "csv":
        out = csv_text
    else:
        out = text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
