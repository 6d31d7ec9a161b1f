"""Command-line entry point: ``cictools {spectrum,verify,fuzz}``.

Exit codes: 0 success, 1 a property was violated, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from cictools.bezout import BezoutSpectrum, build_spectrum
from cictools.criteria import CRITERIA, CriteriaReport, audit, cross_validate
from cictools.errors import InputError
from cictools.lgroup import LGroupDescriptor, Lex, Product, random_descriptor
from cictools.poset import check_qf_invariance, relabel, to_dot

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
MAX_COORDINATES = 64


def descriptor_from_document(doc: Any, path: str = "$") -> LGroupDescriptor:
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected an object")
    kind = doc.get("type")
    if kind == "lex":
        rank = doc.get("rank")
        if isinstance(rank, bool) or not isinstance(rank, int) or rank < 1:
            raise InputError(f"{path}.rank: expected an integer >= 1, got {rank!r}")
        extra = set(doc) - {"type", "rank"}
        if extra:
            raise InputError(f"{path}: unexpected keys {sorted(extra)}")
        return Lex(rank)
    if kind == "product":
        comps = doc.get("components")
        if not isinstance(comps, list) or not comps:
            raise InputError(f"{path}.components: expected a non-empty array")
        extra = set(doc) - {"type", "components"}
        if extra:
            raise InputError(f"{path}: unexpected keys {sorted(extra)}")
        return Product(tuple(
            descriptor_from_document(c, f"{path}.components[{i}]") for i, c in enumerate(comps)
        ))
    raise InputError(f"{path}.type: expected 'lex' or 'product', got {kind!r}")


def descriptor_to_document(desc: LGroupDescriptor) -> dict:
    if isinstance(desc, Lex):
        return {"type": "lex", "rank": desc.rank}
    return {"type": "product", "components": [descriptor_to_document(c) for c in desc.components]}


def load_model(text: str, max_coordinates: int = MAX_COORDINATES) -> LGroupDescriptor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"model is not valid JSON: {exc}") from None
    desc = descriptor_from_document(doc)
    if desc.size > max_coordinates:
        raise InputError(f"model has {desc.size} coordinates; the limit is {max_coordinates}")
    return desc


def _read_source(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def spectrum_document(spec: BezoutSpectrum) -> dict:
    poset = spec.poset
    return {
        "model": descriptor_to_document(spec.desc),
        "points": [
            {
                "name": p,
                "height": poset.height(p),
                "filter": None if p == spec.root else str(spec.filters[p]),
            }
            for p in poset.points
        ],
        "edges": [list(pair) for pair in poset.cover_pairs()],
    }


def report_document(report: CriteriaReport, spec: BezoutSpectrum) -> dict:
    doc = spectrum_document(spec)
    del doc["edges"]
    sort = spec.poset.sort
    doc["spec_ast"] = {c: sort(report.verdicts[c]) for c in CRITERIA}
    doc["spec_ast"]["agreed"] = sort(report.agreed)
    doc["agreement"] = report.agreement
    doc["cic"] = report.cic
    doc["max_height"] = report.max_height
    doc["violations"] = audit(report, spec)
    doc["counterexamples"] = report.counterexamples()
    return doc


def render_spectrum(spec: BezoutSpectrum) -> str:
    poset = spec.poset
    lines = [f"model: {spec.desc}", "points:"]
    for p in poset.points:
        tag = "(0)" if p == spec.root else str(spec.filters[p])
        lines.append(f"  {p:<12} height={poset.height(p)}  filter={tag}")
    lines.append("edges:")
    for p, q in poset.cover_pairs():
        lines.append(f"  {p} -> {q}")
    return "\n".join(lines) + "\n"


def render_report(report: CriteriaReport, spec: BezoutSpectrum) -> str:
    sort = spec.poset.sort
    lines = [f"model: {spec.desc}"]
    width = max(len(p) for p in report.points)
    lines.append(f"  {'point':<{width}}  height  " + "  ".join(f"{c:<13}" for c in CRITERIA))
    for p in report.points:
        cells = "  ".join(f"{report.verdict(c, p):<13}" for c in CRITERIA)
        lines.append(f"  {p:<{width}}  {report.heights[p]:<6}  {cells}")
    lines.append("spec*: {" + ", ".join(sort(report.agreed)) + "}")
    lines.append(f"agreement: {str(report.agreement).lower()}")
    lines.append(f"cic: {str(report.cic).lower()}")
    lines.append(f"max height: {report.max_height}")
    problems = audit(report, spec)
    if problems:
        lines.append("violations:")
        lines.extend(f"  {msg}" for msg in problems)
        for entry in report.counterexamples():
            lines.append("  counterexample: " + json.dumps(entry, sort_keys=True))
    else:
        lines.append("violations: none")
    return "\n".join(lines) + "\n"


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_spectrum(args) -> int:
    desc = load_model(_read_source(args.model))
    spec = build_spectrum(desc)
    if args.export_dot:
        labels = {p: str(f) for p, f in spec.filters.items()}
        with open(args.export_dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(spec.poset, labels=labels))
    out = _dump(spectrum_document(spec)) if args.format == "json" else render_spectrum(spec)
    sys.stdout.write(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    desc = load_model(_read_source(args.model))
    spec = build_spectrum(desc)
    report = cross_validate(spec, inject_fault=args.inject_fault)
    if args.export_dot:
        with open(args.export_dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(spec.poset))
    if args.format == "json":
        sys.stdout.write(_dump(report_document(report, spec)))
    else:
        sys.stdout.write(render_report(report, spec))
    return EXIT_VIOLATION if audit(report, spec) else EXIT_OK


def fuzz_case(seed: int, index: int, max_rank: int, max_components: int, probes: int = 5) -> dict:
    """One fuzz iteration; depends only on its arguments."""
    rng = random.Random(f"{seed}/{index}")
    desc = random_descriptor(rng, max_rank=max_rank, max_components=max_components)
    spec = build_spectrum(desc)
    report = cross_validate(spec)
    problems = audit(report, spec)

    poset = spec.poset
    names = list(poset.points)
    targets = [f"q{i}" for i in range(len(names))]
    rng.shuffle(targets)
    iso = dict(zip(names, targets))
    image = relabel(poset, iso)
    for _ in range(probes):
        x = {p for p in names if rng.random() < 0.4}
        if not check_qf_invariance(poset, image, iso, x):
            problems.append(f"rim closure not preserved for {poset.sort(x)}")

    doc = report_document(report, spec)
    doc["violations"] = problems
    digest = hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()
    return {"index": index, "model": str(desc), "ok": not problems, "hash": digest, "violations": problems}


def _fuzz_case_star(args):
    return fuzz_case(*args)


def cmd_fuzz(args) -> int:
    if args.count < 1:
        raise InputError("--count must be at least 1")
    if args.max_rank < 1 or args.max_components < 1:
        raise InputError("--max-rank and --max-components must be at least 1")
    jobs = [(args.seed, i, args.max_rank, args.max_components) for i in range(args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_fuzz_case_star, jobs, chunksize=8))
    else:
        results = [fuzz_case(*job) for job in jobs]

    passed = sum(r["ok"] for r in results)
    failed = len(results) - passed
    if args.format == "json":
        sys.stdout.write(_dump({
            "seed": args.seed,
            "count": args.count,
            "max_rank": args.max_rank,
            "max_components": args.max_components,
            "passed": passed,
            "failed": failed,
            "runs": results,
        }))
    else:
        for r in results:
            if not r["ok"]:
                sys.stdout.write(f"FAIL #{r['index']} {r['model']}: {'; '.join(r['violations'])}\n")
        sys.stdout.write(f"fuzz seed={args.seed} count={args.count}: {passed} passed, {failed} failed\n")
    return EXIT_OK if failed == 0 else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cictools",
        description="Prime spectra of Bezout models and the primes surviving in the complete integral closure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p):
        p.add_argument("model", nargs="?", help="model document path; '-' or omitted reads stdin")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--export-dot", metavar="PATH", help="write the Hasse diagram in DOT format")

    p = sub.add_parser("spectrum", help="print the prime spectrum of a model")
    model_args(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="cross-validate the three criteria on a model")
    model_args(p)
    p.add_argument("--inject-fault", metavar="POINT", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", help="cross-validate random models")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rank", type=int, default=3)
    p.add_argument("--max-components", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; keep --help at 0.
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
