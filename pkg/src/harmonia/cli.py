"""Command-line entry point.

Wires the searches, the classifier, the bound checks, the lemma grids, and
the induction traces to reproducible file outputs.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 checkpoint
mismatch.  Result data goes to --out when given (stdout otherwise); the
fixed one-line summary is always the last line on stdout; progress goes to
stderr only.  Alongside every --out file a <out>.manifest.json records the
command line, config digest, version, wall time, counts, and the output's
sha256, so reruns can be audited without rereading the data.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass

from . import __version__
from .arith import DEFAULT_SEGMENT_LENGTH
from .bounds import render_big, verify_bounds
from .classify import CLASS_FLAG_NAMES, classify, format_factorization, record_from_members
from .induction import run_induction, theorem_trace
from .lemmas import (
    scan_cook_grid,
    scan_divisibility_grid,
    scan_hb_grid,
    scan_pre_cook_grid,
)
from .search import (
    DEFAULT_IN_MEMORY_LIMIT,
    CheckpointMismatch,
    SearchConfig,
    count_table,
    search_anarchy_pairs,
    search_pairs,
    search_triples,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_CHECKPOINT = 3

CSV_HEADER = "M,N,factor_M,factor_N,gcd_M_sigmaN,gcd_sigmaM_N"

_KIND_BY_COMMAND = {
    "harmonious": "harmonious",
    "unitary": "unitary_harmonious",
    "amicable": "amicable",
}


@dataclass(frozen=True)
class RunManifest:
    """Audit record written beside every --out file."""

    argv: list
    config_digest: str
    version: str
    wall_time_s: float
    counts: dict
    outputs: dict

    def to_json_dict(self) -> dict:
        return {
            "argv": self.argv,
            "config_digest": self.config_digest,
            "version": self.version,
            "wall_time_s": self.wall_time_s,
            "counts": self.counts,
            "outputs": self.outputs,
        }


def _progress(line: str) -> None:
    print(line, file=sys.stderr)


def _sha256_bytes(blob: bytes) -> str:
    return hashlib.sha256(blob).hexdigest()


def _deliver(
    lines: list[str],
    out: str | None,
    argv: list,
    config_digest: str,
    counts: dict,
    started: float,
) -> None:
    """Write result lines to --out (platform-independent bytes) or stdout,
    and drop the manifest next to the file."""
    blob = ("\n".join(lines) + "\n").encode() if lines else b""
    if out is None:
        sys.stdout.write(blob.decode())
        return
    with open(out, "wb") as fh:
        fh.write(blob)
    manifest = RunManifest(
        argv=argv,
        config_digest=config_digest,
        version=__version__,
        wall_time_s=round(time.perf_counter() - started, 3),
        counts=counts,
        outputs={out: _sha256_bytes(blob)},
    )
    with open(out + ".manifest.json", "w") as fh:
        json.dump(manifest.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _csv_lines(records) -> list[str]:
    lines = [CSV_HEADER]
    for r in records:
        m, n = r.members
        lines.append(
            f"{m},{n}"
            f",{format_factorization(r.profiles[0].factorization)}"
            f",{format_factorization(r.profiles[1].factorization)}"
            f",{r.g1},{r.g2}"
        )
    return lines


def _jsonl_lines(records) -> list[str]:
    return [r.to_json() for r in records]


def _digest_of(payload: dict) -> str:
    return _sha256_bytes(json.dumps(payload, sort_keys=True).encode())


# --- search -------------------------------------------------------------------


def cmd_search(args, parser: argparse.ArgumentParser, argv: list) -> int:
    started = time.perf_counter()
    progress = _progress if args.progress else None

    if args.kind == "anarchy":
        if args.m_bound is None or args.n_bound is None:
            parser.error("search anarchy needs --m-bound and --n-bound")
        if args.bound is not None:
            parser.error("search anarchy takes --m-bound/--n-bound, not --bound")
        records = search_anarchy_pairs(
            args.m_bound,
            args.n_bound,
            segment_length=args.segment_length,
            threads=args.threads,
            progress=progress,
        )
        digest = _digest_of(
            {"op": "anarchy", "m_bound": args.m_bound, "n_bound": args.n_bound}
        )
        bound = args.n_bound
        kind_label = "anarchy"
    else:
        if args.bound is None:
            parser.error(f"search {args.kind} needs --bound")
        if args.m_bound is not None or args.n_bound is not None:
            parser.error("--m-bound/--n-bound only apply to search anarchy")
        filters = set()
        if args.coprime:
            filters.add("coprime")
        if args.anarchy:
            filters.add("anarchy")
        config = SearchConfig(
            bound=args.bound,
            kind=_KIND_BY_COMMAND[args.kind],
            k=args.k,
            filters=frozenset(filters),
            allow_equal_members=(
                None if args.allow_equal is None else args.allow_equal == "true"
            ),
            segment_length=args.segment_length,
            in_memory_limit=args.in_memory_limit,
            checkpoint_path=args.checkpoint,
            threads=args.threads,
        )
        if args.k == 2:
            records = search_pairs(config, progress=progress)
        else:
            records = search_triples(config, progress=progress)
        digest = config.digest()
        bound = args.bound
        kind_label = config.kind

    if args.fmt == "csv":
        if args.kind == "anarchy" or args.k == 2:
            lines = _csv_lines(records)
        else:
            parser.error("--format csv is defined for pairs only; use jsonl for k=3")
    else:
        lines = _jsonl_lines(records)

    _deliver(lines, args.out, argv, digest, {"found": len(records)}, started)
    print(f"kind={kind_label} bound={bound} found={len(records)}")
    return EXIT_OK


# --- classify -------------------------------------------------------------------


def cmd_classify(args, parser: argparse.ArgumentParser, argv: list) -> int:
    record = classify(args.members)
    print(record.to_json())
    if any(record.flags[name] for name in CLASS_FLAG_NAMES):
        return EXIT_OK
    return EXIT_VERIFICATION


# --- report table2 ----------------------------------------------------------------


def cmd_table2(args, parser: argparse.ArgumentParser, argv: list) -> int:
    started = time.perf_counter()
    try:
        bounds = tuple(int(b) for b in args.bounds.split(","))
    except ValueError:
        parser.error(f"--bounds must be comma-separated integers, got {args.bounds!r}")
    if any(b >= c for b, c in zip(bounds, bounds[1:])):
        parser.error(f"--bounds must be strictly ascending, got {args.bounds}")
    rows = count_table(
        bounds,
        segment_length=args.segment_length,
        in_memory_limit=args.in_memory_limit,
        threads=args.threads,
        progress=_progress if args.progress else None,
    )
    lines = ["bound,harmonious_count,coprime_count"]
    lines += [f"{r.bound},{r.harmonious},{r.coprime_harmonious}" for r in rows]
    digest = _digest_of({"op": "table2", "bounds": list(bounds)})
    counts = {str(r.bound): r.harmonious for r in rows}
    _deliver(lines, args.out, argv, digest, counts, started)
    print(f"kind=table2 bound={bounds[-1]} found={rows[-1].harmonious}")
    return EXIT_OK


# --- bounds verify -----------------------------------------------------------------


def _bound_summary(report) -> str:
    def word(applies, holds):
        if not applies or holds is None:
            return "skip"
        return "pass" if holds else "FAIL"

    cap = " cap" if report.unverifiable_cap else ""
    return (
        f"members={list(report.members)} K={report.K} "
        f"main={word(report.main_applies, report.main_holds)} "
        f"borho={word(True, report.borho_holds)} "
        f"borho_star={word(True, report.borho_star_holds)}{cap}"
    )


def cmd_bounds_verify(args, parser: argparse.ArgumentParser, argv: list) -> int:
    try:
        with open(args.input) as fh:
            payloads = [json.loads(line) for line in fh if line.strip()]
    except OSError as exc:
        parser.error(f"cannot read --input: {exc}")
    except json.JSONDecodeError as exc:
        parser.error(f"--input is not JSONL: {exc}")
    violations = 0
    for payload in payloads:
        record = record_from_members(payload["members"])
        report = verify_bounds(record)
        print(_bound_summary(report))
        if not report.all_applicable_hold:
            violations += 1
    print(f"kind=bounds checked={len(payloads)} violations={violations}")
    return EXIT_OK if violations == 0 else EXIT_VERIFICATION


# --- induction trace ---------------------------------------------------------------


def _render_holds(value: bool | None) -> str:
    if value is None:
        return "skip"
    return "pass" if value else "FAIL"


def _render_int(value: int | None) -> str:
    if value is None:
        return "-"
    rendered = render_big(value)
    if isinstance(rendered, dict):
        return f"[{rendered['bits']}-bit]"
    return rendered


def cmd_induction_trace(args, parser: argparse.ArgumentParser, argv: list) -> int:
    trace = run_induction(args.members)
    theorem = theorem_trace(args.members)
    if args.json:
        payload = {
            "trace": trace.to_json_dict(),
            "theorem": theorem.to_json_dict(),
        }
        print(json.dumps(payload, separators=(",", ":")))
    else:
        for cert in trace.steps:
            absorbed = ",".join(f"{p}^{e}" for p, e in cert.absorbed)
            print(
                f"step={cert.step} v={cert.v} w={cert.w}"
                f" damping={','.join(map(str, cert.damping)) or '-'}"
                f" absorbed={absorbed or '-'}"
                f" carry_after={','.join(map(str, cert.carry_after)) or '-'}"
                f" lhs={_render_int(cert.lhs)}"
                f" bound={_render_int(cert.bound)}"
                f" structure={_render_holds(cert.structure_ok)}"
                f" bound_holds={_render_holds(cert.bound_holds)}"
                f" improved={_render_holds(cert.improved_holds)}"
            )
        print(
            f"aggregate sum_v={trace.sum_v} sum_w={trace.sum_w}"
            f" chain={_render_holds(trace.chain_holds)}"
            f" final_lhs={_render_int(trace.final_lhs)}"
            f" final_rhs_bits={trace.final_rhs_bits}"
            f" final={_render_holds(trace.final_holds)}"
        )
        print(
            f"theorem branch={theorem.branch}"
            f" branch_inequality={_render_holds(theorem.branch_inequality_holds)}"
            f" combined={_render_holds(theorem.combined_holds)}"
            f" identity={_render_holds(theorem.identity_holds)}"
            f" product={_render_int(theorem.product)}"
            f" below_main_bound={_render_holds(theorem.product_below_main_bound)}"
        )
    ok = trace.all_hold and theorem.all_hold
    print(f"kind=induction steps={len(trace.steps)} verified={str(ok).lower()}")
    return EXIT_OK if ok else EXIT_VERIFICATION


# --- lemmas check -----------------------------------------------------------------


def cmd_lemmas_check(args, parser: argparse.ArgumentParser, argv: list) -> int:
    sink = None
    if args.dump_witnesses:
        sink = lambda witness: print(json.dumps(witness, sort_keys=True))  # noqa: E731
    if args.lemma in ("hb1", "hb2"):
        report = scan_hb_grid(
            args.lemma,
            args.k_max,
            args.r_max,
            args.m_max,
            args.coef_max,
            witness_sink=sink,
        )
    elif args.lemma == "cook":
        # the shared flag box maps onto the rational grid: --m-max caps the
        # entry value, --coef-max caps the denominator
        report = scan_cook_grid(args.k_max, value_max=args.m_max, den_max=args.coef_max)
    elif args.lemma == "precook":
        report = scan_pre_cook_grid()
    else:
        try:
            members = tuple(int(m) for m in args.members.split(","))
        except ValueError:
            parser.error(f"--members must be comma-separated integers, got {args.members!r}")
        report = scan_divisibility_grid(members)
    print(
        f"lemma={report.lemma} instances={report.instances}"
        f" hypotheses_held={report.hypotheses_held}"
        f" counterexamples={len(report.counterexamples)}"
        f" equalities={report.conclusion_equalities}"
        f" remark_violations={report.remark_violations}"
    )
    return EXIT_OK if report.clean else EXIT_VERIFICATION


# --- parser -------------------------------------------------------------------------


def _add_search_parser(sub) -> None:
    p = sub.add_parser(
        "search",
        help="enumerate pairs or triples of a class up to a bound",
        description=(
            "Results go to --out (with a manifest) or stdout; the final stdout "
            "line is always 'kind=<> bound=<> found=<>'."
        ),
    )
    p.add_argument(
        "kind",
        choices=["harmonious", "unitary", "amicable", "anarchy"],
        help="class to search; 'anarchy' sweeps M <= --m-bound, N <= --n-bound",
    )
    p.add_argument("--bound", type=int, help="largest member (kinds other than anarchy)")
    p.add_argument("--k", type=int, choices=[2, 3], default=2, help="tuple size")
    p.add_argument("--coprime", action="store_true", help="keep pairwise coprime tuples only")
    p.add_argument("--anarchy", action="store_true", help="keep anarchy tuples only")
    p.add_argument(
        "--allow-equal",
        choices=["true", "false"],
        default=None,
        help="override the kind's equal-members convention",
    )
    p.add_argument("--format", dest="fmt", choices=["csv", "jsonl"], default="jsonl")
    p.add_argument("--out", help="output file; stdout when omitted")
    p.add_argument("--checkpoint", help="checkpoint file (forces the file-backed regime)")
    p.add_argument("--threads", type=int, default=0, help="worker threads (0 = auto)")
    p.add_argument("--segment-length", type=int, default=DEFAULT_SEGMENT_LENGTH)
    p.add_argument("--in-memory-limit", type=int, default=DEFAULT_IN_MEMORY_LIMIT)
    p.add_argument("--m-bound", type=int, help="anarchy only: bound for the smaller member")
    p.add_argument("--n-bound", type=int, help="anarchy only: bound for the larger member")
    p.add_argument("--progress", action="store_true", help="report progress on stderr")
    p.set_defaults(handler=cmd_search)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmonia",
        description="Search, classify, and verify harmonious-type integer tuples.",
    )
    parser.add_argument("--version", action="version", version=f"harmonia {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_search_parser(sub)

    p = sub.add_parser("classify", help="classify one tuple and print its record")
    p.add_argument("members", nargs="+", type=int, metavar="M")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("report", help="reproduce the count table")
    rsub = p.add_subparsers(dest="report_kind", required=True)
    t2 = rsub.add_parser("table2", help="pair counts per bound as CSV")
    t2.add_argument("--bounds", required=True, help="comma-separated ascending bounds")
    t2.add_argument("--out", help="output file; stdout when omitted")
    t2.add_argument("--threads", type=int, default=0)
    t2.add_argument("--segment-length", type=int, default=DEFAULT_SEGMENT_LENGTH)
    t2.add_argument("--in-memory-limit", type=int, default=DEFAULT_IN_MEMORY_LIMIT)
    t2.add_argument("--progress", action="store_true")
    t2.set_defaults(handler=cmd_table2)

    p = sub.add_parser("bounds", help="verify explicit bounds over a result file")
    bsub = p.add_subparsers(dest="bounds_kind", required=True)
    bv = bsub.add_parser("verify", help="check every record in a JSONL result file")
    bv.add_argument("--input", required=True, help="JSONL file of tuple records")
    bv.set_defaults(handler=cmd_bounds_verify)

    p = sub.add_parser("induction", help="run and verify certificate traces")
    isub = p.add_subparsers(dest="induction_kind", required=True)
    tr = isub.add_parser("trace", help="execute the induction on one tuple")
    tr.add_argument("members", nargs="+", type=int, metavar="M")
    tr.add_argument("--json", action="store_true", help="emit the full trace as JSON")
    tr.set_defaults(handler=cmd_induction_trace)

    p = sub.add_parser("lemmas", help="exhaustive lemma grids")
    lsub = p.add_subparsers(dest="lemmas_kind", required=True)
    lc = lsub.add_parser(
        "check",
        help="scan one lemma over a parameter box",
        description=(
            "hb1/hb2 use all four box flags; cook reads --k-max as the sequence "
            "length cap, --m-max as the value cap, --coef-max as the denominator "
            "cap; precook uses its fixed default grid; div scans every unitary "
            "split of --members."
        ),
    )
    lc.add_argument(
        "--lemma", required=True, choices=["hb1", "hb2", "cook", "precook", "div"]
    )
    lc.add_argument("--k-max", type=int, default=2)
    lc.add_argument("--r-max", type=int, default=3)
    lc.add_argument("--m-max", type=int, default=12)
    lc.add_argument("--coef-max", type=int, default=6)
    lc.add_argument("--members", default="64,173369889", help="div only: the tuple to split")
    lc.add_argument(
        "--dump-witnesses",
        action="store_true",
        help="hb1/hb2 only: print every hypothesis-holding instance as JSON lines",
    )
    lc.set_defaults(handler=cmd_lemmas_check)

    return parser


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser, argv)
    except CheckpointMismatch as exc:
        print(f"checkpoint mismatch: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
