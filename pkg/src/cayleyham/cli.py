"""Command-line surface: construct, verify, search, enumerate, export-dot.

Exit codes: 0 success, 1 malformed input, 2 unsupported/not-generating,
3 search timeout, 4 theorem violation, 5 failed verification, 6 search
exhausted without a cycle.  Certificates and reports are JSON on stdout;
human-readable case traces go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .errors import (
    CayleyHamError,
    NotConnectedError,
    NotGeneratingError,
    OracleTimeoutError,
    PreconditionError,
    RoleSwapLoopError,
    SizeGuardError,
    StructureError,
    TheoremViolationError,
    UnsupportedOrderError,
)
from .cayley import GenWord, check_hamiltonian_cycle, export_dot
from .construct import construct_hamiltonian
from .groups import GroupElement, GroupSpec
from .search import (
    DELEGATED_TIMEOUT,
    SearchConfig,
    brute_force_ham,
    enumerate_groups,
    sample_generating_sets,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNSUPPORTED = 2
EXIT_TIMEOUT = 3
EXIT_THEOREM = 4
EXIT_VERIFY = 5
EXIT_NOT_FOUND = 6


class _UsageError(Exception):
    pass


def _load_group(args) -> GroupSpec:
    inline = args.p is not None or args.n is not None or args.alpha is not None
    if args.group_file and inline:
        raise _UsageError("give either --group-file or inline --p/--n/--alpha, not both")
    if args.group_file:
        with open(args.group_file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return GroupSpec.from_dict(data)
    if args.p is None or args.n is None or args.alpha is None:
        raise _UsageError("group requires --p, --n and --alpha (or --group-file)")
    return GroupSpec(args.p, args.n, args.alpha)


def _parse_gen_text(text: str) -> GroupElement:
    parts = text.split(",")
    if len(parts) != 2:
        raise _UsageError(f"--gen expects 'i,x', got {text!r}")
    try:
        return GroupElement(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise _UsageError(f"--gen expects integers: {exc}") from exc


def _load_gens(args) -> list[GroupElement]:
    gens: list[GroupElement] = []
    if args.gens:
        try:
            data = json.loads(args.gens)
        except json.JSONDecodeError as exc:
            raise _UsageError(f"--gens is not valid JSON: {exc}") from exc
        if not isinstance(data, list):
            raise _UsageError("--gens must be a JSON array")
        for entry in data:
            if isinstance(entry, dict):
                gens.append(GroupElement(int(entry["i"]), int(entry["x"])))
            else:
                gens.append(GroupElement(int(entry[0]), int(entry[1])))
    for text in args.gen or []:
        gens.append(_parse_gen_text(text))
    if not gens:
        raise _UsageError("at least one generator is required (--gen or --gens)")
    return gens


def _emit(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _search_config(args) -> SearchConfig:
    kwargs = {}
    if getattr(args, "timeout", None) is not None:
        kwargs["timeout"] = args.timeout
    if getattr(args, "max_vertices", None) is not None:
        kwargs["max_vertices"] = args.max_vertices
    if getattr(args, "heuristic", None) is not None:
        kwargs["heuristic"] = args.heuristic
    return SearchConfig(**kwargs)


def cmd_construct(args) -> int:
    G = _load_group(args)
    gens = _load_gens(args)
    cfg = SearchConfig(
        timeout=args.timeout if args.timeout is not None else DELEGATED_TIMEOUT,
        heuristic=args.heuristic or "degree-order",
    )
    cert = construct_hamiltonian(G, gens, cfg)
    trace = f"case={cert.case_label} length={len(cert.word)}"
    if cert.voltage_record is not None:
        rec = cert.voltage_record
        proj = ", ".join(f"{l}:{r}" for l, r in sorted(rec.projections.items()))
        trace += f" candidate={rec.candidate_index} voltage_x={rec.element.x} projections[{proj}]"
    print(trace, file=sys.stderr)
    _emit(cert.to_dict(), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.cert_file:
        with open(args.cert_file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        G = GroupSpec.from_dict(data["group"])
        gens = [GroupElement.from_dict(g) for g in data["gens"]]
        steps = data["word"]
    else:
        G = _load_group(args)
        gens = _load_gens(args)
        if not args.word_file:
            raise _UsageError("verify needs --word-file or --cert-file")
        with open(args.word_file, "r", encoding="utf-8") as fh:
            steps = json.load(fh)
        if not isinstance(steps, list):
            raise _UsageError("word file must hold a JSON array of signed integers")
    word = GenWord(gens, steps)
    ok, reason = check_hamiltonian_cycle(G, word)
    if ok:
        print("ok")
        return EXIT_OK
    print(f"not a hamiltonian cycle: {reason}")
    return EXIT_VERIFY


def cmd_search(args) -> int:
    G = _load_group(args)
    gens = _load_gens(args)
    cfg = _search_config(args)
    start = time.monotonic()
    word = brute_force_ham(G, gens, cfg)
    millis = int((time.monotonic() - start) * 1000)
    if word is None:
        print("search exhausted: no hamiltonian cycle under the fixed first step", file=sys.stderr)
        return EXIT_NOT_FOUND
    print(f"found in {millis} ms", file=sys.stderr)
    _emit({"word": list(word.steps)}, args.output)
    return EXIT_OK


def _construct_report(payload: tuple[dict, list[list[int]], float, str]) -> dict:
    spec_data, gens_data, timeout, heuristic = payload
    G = GroupSpec.from_dict(spec_data)
    gens = [GroupElement(i, x) for i, x in gens_data]
    cfg = SearchConfig(timeout=timeout, heuristic=heuristic)
    start = time.monotonic()
    try:
        cert = construct_hamiltonian(G, gens, cfg)
        case = cert.case_label
        found = True
    except OracleTimeoutError:
        case = "timeout"
        found = False
    except TheoremViolationError:
        case = "theorem-violation"
        found = False
    millis = int((time.monotonic() - start) * 1000)
    return {
        "group": spec_data,
        "gens": [[i, x] for i, x in gens_data],
        "case": case,
        "found": found,
        "millis": millis,
    }


def run_construct_batch(
    specs: list[GroupSpec],
    timeout: float = DELEGATED_TIMEOUT,
    heuristic: str = "degree-order",
    workers: int = 1,
) -> list[dict]:
    """Run construct_hamiltonian over the deterministic sample of each instance.

    Reports are returned in deterministic (submission) order regardless of
    worker scheduling.
    """
    jobs = []
    for spec in specs:
        for gens in sample_generating_sets(spec):
            jobs.append((spec.to_dict(), [[g.i, g.x] for g in gens], timeout, heuristic))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_construct_report, jobs))
    return [_construct_report(job) for job in jobs]


def cmd_enumerate(args) -> int:
    try:
        specs = enumerate_groups(*args.primes)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if not args.construct_all:
        for spec in specs:
            _emit({"group": spec.to_dict()}, None)
        return EXIT_OK
    reports = run_construct_batch(
        specs,
        timeout=args.timeout if args.timeout is not None else DELEGATED_TIMEOUT,
        heuristic=args.heuristic or "degree-order",
        workers=args.workers,
    )
    histogram: dict[str, int] = {}
    for report in reports:
        _emit(report, None)
        histogram[report["case"]] = histogram.get(report["case"], 0) + 1
        trace = "ok" if report["found"] else "FAILED"
        print(
            f"group p={report['group']['p']} alpha={report['group']['alpha']} "
            f"gens={report['gens']} case={report['case']} {trace} ({report['millis']} ms)",
            file=sys.stderr,
        )
    _emit({"histogram": dict(sorted(histogram.items()))}, None)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    G = _load_group(args)
    gens = _load_gens(args)
    text = export_dot(G, gens)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _add_group_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, default=None, help="prime order of the cyclic quotient")
    parser.add_argument("--n", type=int, default=None, help="order of the cyclic normal part")
    parser.add_argument("--alpha", type=int, default=None, help="twist exponent")
    parser.add_argument("--group-file", default=None, help="JSON file with {p, n, alpha}")


def _add_gen_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gen", action="append", default=None, metavar="I,X", help="generator as 'i,x' (repeatable)")
    parser.add_argument("--gens", default=None, help="generators as a JSON array")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayleyham", description="Hamiltonian cycles in Cayley graphs of order pqrs")
    sub = parser.add_subparsers(dest="command", required=True)

    p_construct = sub.add_parser("construct", help="build and verify a hamiltonian cycle certificate")
    _add_group_options(p_construct)
    _add_gen_options(p_construct)
    p_construct.add_argument("--output", default=None, help="write the certificate JSON here instead of stdout")
    p_construct.add_argument("--timeout", type=float, default=None, help="search budget for delegated paths (seconds)")
    p_construct.add_argument("--heuristic", choices=["degree-order", "input-order"], default=None)
    p_construct.set_defaults(func=cmd_construct)

    p_verify = sub.add_parser("verify", help="check a word or certificate")
    _add_group_options(p_verify)
    _add_gen_options(p_verify)
    p_verify.add_argument("--word-file", default=None, help="JSON array of signed steps")
    p_verify.add_argument("--cert-file", default=None, help="certificate JSON produced by construct")
    p_verify.set_defaults(func=cmd_verify)

    p_search = sub.add_parser("search", help="run the backtracking search directly")
    _add_group_options(p_search)
    _add_gen_options(p_search)
    p_search.add_argument("--output", default=None)
    p_search.add_argument("--timeout", type=float, default=None)
    p_search.add_argument("--max-vertices", type=int, default=None)
    p_search.add_argument("--heuristic", choices=["degree-order", "input-order"], default=None)
    p_search.set_defaults(func=cmd_search)

    p_enum = sub.add_parser("enumerate", help="enumerate group instances for four primes")
    p_enum.add_argument("primes", type=int, nargs=4, metavar="PRIME")
    p_enum.add_argument("--construct-all", action="store_true", help="run the constructor over sampled generating sets")
    p_enum.add_argument("--timeout", type=float, default=None)
    p_enum.add_argument("--heuristic", choices=["degree-order", "input-order"], default=None)
    p_enum.add_argument("--workers", type=int, default=1)
    p_enum.set_defaults(func=cmd_enumerate)

    p_dot = sub.add_parser("export-dot", help="write the Cayley graph in DOT format")
    _add_group_options(p_dot)
    _add_gen_options(p_dot)
    p_dot.add_argument("--output", default=None)
    p_dot.set_defaults(func=cmd_export_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; the CLI contract says 1
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (json.JSONDecodeError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OracleTimeoutError,) as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (TheoremViolationError, RoleSwapLoopError) as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    except (
        UnsupportedOrderError,
        NotGeneratingError,
        NotConnectedError,
        PreconditionError,
        StructureError,
        SizeGuardError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CayleyHamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    raise SystemExit(main())
