"""
Command-line interface for the qudit amplitude-damping code toolkit
"""
from pathlib import Path
from typing import Dict, List, Optional
import argparse
import json
import logging
import re
import sys

from pydantic import ValidationError

from config import settings
from core.ad_channels import ChannelKind, ChannelSpec, cascade_coefficients_from_rates
from core.code_files import (RunConfig, classical_from_file, load_code_file, load_quantum_code, save_code,
                             write_report)
from core.code_search import max_code_search, partition_search
from core.constructions import gc_construct, lift, multi_error_construct, v_lambda_construct
from core.exceptions import QadcError, UsageError
from core.five_qudit_code import five_qudit_code, quantum_outer
from core.kl_verifier import verify_code
from core.outer_codes import outer_from_file
from core.qudit_core import QuantumCode, QuditString
from core.tables import render_table, table_report

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_RESOURCE = 3


def _setup_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.WARNING
    else:
        level = logging.DEBUG if verbose > 1 else logging.INFO if verbose == 1 else settings.log_level
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _run_config(args: argparse.Namespace, **extra) -> RunConfig:
    try:
        return RunConfig(
            command=" ".join(a for a in (args.cmd, getattr(args, "kind", None)) if a),
            seed=args.seed,
            threads=args.threads,
            verbosity=args.verbose,
            output=getattr(args, "out", None),
            **extra,
        )
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise UsageError(f"--{field.replace('_', '-')}: {first['msg']}")


def _emit(args: argparse.Namespace, payload: Dict, text: str) -> None:
    print(json.dumps(payload, indent=2, default=str) if args.json else text)


def _default_path(code: QuantumCode) -> Path:
    slug = re.sub(r"[^A-Za-z0-9_.-]+", "_", code.name or code.provenance).strip("_")
    return settings.results_dir / f"{slug}.json"


def _outer_quantum(key: str) -> QuantumCode:
    if key.endswith(".json"):
        return load_quantum_code(key)
    return quantum_outer(key)


def _symbol_map(text: Optional[str]) -> Optional[List[str]]:
    return [s.strip() for s in text.split(",")] if text else None


def _parse_words(text: str, q: int) -> List[QuditString]:
    try:
        return [QuditString.parse(w, q) for w in text.split(",")]
    except ValueError as e:
        raise UsageError(f"--words: {e}")


def _parse_grid(text: Optional[str]) -> Optional[List[float]]:
    if not text:
        return None
    try:
        return [float(g) for g in text.split(",")]
    except ValueError:
        raise UsageError(f"--grid: '{text}' is not a comma-separated list of numbers")


def cmd_construct(args: argparse.Namespace) -> int:
    if args.kind == "gc":
        outer = None
        if args.outer_file:
            model = load_code_file(args.outer_file)
            if isinstance(model, QuantumCode):
                raise QadcError(f"{args.outer_file} holds a quantum code; gc needs a classical outer code")
            outer = outer_from_file(classical_from_file(model), model.property)
        code = gc_construct(args.q, args.n, outer=outer, flavor=args.flavor)
    elif args.kind == "multi":
        code = multi_error_construct(_outer_quantum(args.outer), args.q, args.m, _symbol_map(args.map))
    elif args.kind == "vlambda":
        code = v_lambda_construct(_outer_quantum(args.outer), args.pattern, args.m, _symbol_map(args.map))
    elif args.kind == "lift":
        reps = _parse_words(args.words, args.q)
        code = lift(reps, q=args.q, name=args.name or f"lift_{len(reps)}_{args.q}")
    else:
        code = five_qudit_code()

    code.check_orthonormal()
    path = save_code(code, args.out or _default_path(code))
    payload = {
        "q": code.q, "n": code.n, "K": code.dimension, "claimed_t": code.claimed_t,
        "channel_scope": sorted(code.channel_scope), "provenance": code.provenance,
        "name": code.name, "file": str(path), "run": _run_config(args).model_dump(),
    }
    _emit(args, payload, f"{code.describe()}\nwritten to {path}")
    return EXIT_PASS


def _channel_spec(args: argparse.Namespace, q: int) -> ChannelSpec:
    kind = ChannelKind.parse(args.channel)
    coefficients = None
    if kind is ChannelKind.CASCADE and args.k1 is not None and args.k2 is not None:
        coefficients = cascade_coefficients_from_rates(args.k1, args.k2)
    parameters = {}
    if kind in (ChannelKind.V, ChannelKind.LAMBDA):
        parameters = {"k1": args.k1 or 1.0, "k2": args.k2 or 2.0}
    return ChannelSpec(kind, q, parameters, coefficients)


def cmd_verify(args: argparse.Namespace) -> int:
    code = load_quantum_code(args.code)
    spec = _channel_spec(args, code.q)
    grid = _parse_grid(args.grid)
    run = _run_config(args, channel=spec.to_dict(), code_source=args.code, t=args.t or code.claimed_t or 1,
                      grid=grid, pair_filter=args.pair_filter or settings.pair_filter)
    outcome = verify_code(code, spec, t=run.t, grid=run.grid, pair_filter=run.pair_filter,
                          max_damping=args.max_damping, threads=run.threads)
    report = outcome.report
    payload = {**outcome.model_dump(), "passed": outcome.passed, "run": run.model_dump()}
    if args.out:
        write_report(payload, args.out)

    lines = [f"{code.describe()}", f"channel {spec.kind.value}, t={report.t}, filter {report.pair_filter}"]
    for point, value in zip(report.grid, report.deviations):
        lines.append(f"  {report.parameter}={point:.1e}  deviation={value:.3e}")
    lines.append(f"slope {report.slope_label}")
    if report.guard is not None:
        lines.append(f"guard run (equal rates): slope {report.guard.slope_label}, pass={report.guard.passed}")
    for name, ok in outcome.combinatorial.items():
        lines.append(f"{name}: {'ok' if ok else 'FAILED'}")
    lines.append("PASS" if outcome.passed else "FAIL")
    _emit(args, payload, "\n".join(lines))
    return EXIT_PASS if outcome.passed else EXIT_FAIL


def cmd_search(args: argparse.Namespace) -> int:
    if args.kind == "partition":
        cert = partition_search(args.q, args.n, args.parts, args.size, cap=args.node_cap)
    else:
        cert = max_code_search(args.q, args.n, args.parts, mode=args.mode, cap=args.node_cap,
                               seed=args.seed, restarts=args.restarts)
    payload = {**cert.model_dump(), "run": _run_config(args).model_dump()}
    if args.out:
        write_report(payload, args.out)
    text = [f"{cert.outcome}: best size {cert.best_size}, {cert.nodes} nodes, {cert.elapsed_seconds}s"]
    text += [f"  {note}" for note in cert.notes]
    text += [f"  part {i}: {' '.join(reps)}" for i, reps in enumerate(cert.codes)]
    _emit(args, payload, "\n".join(text))
    return EXIT_RESOURCE if cert.outcome == "bound_reached" else EXIT_PASS


def cmd_tables(args: argparse.Namespace) -> int:
    df = table_report(args.which)
    payload = {"table": args.which, "rows": df.to_dict(orient="records"), "run": _run_config(args).model_dump()}
    if args.out:
        write_report(payload, args.out)
    _emit(args, payload, render_table(df))
    return EXIT_PASS


def cmd_inspect(args: argparse.Namespace) -> int:
    loaded = load_code_file(args.code)
    if isinstance(loaded, QuantumCode):
        payload = {
            "kind": "quantum", "q": loaded.q, "n": loaded.n, "K": loaded.dimension,
            "claimed_t": loaded.claimed_t, "channel_scope": sorted(loaded.channel_scope),
            "provenance": loaded.provenance, "support_sizes": [len(s) for s in loaded.basis],
            "gram_deviation": loaded.gram_deviation(),
        }
        text = f"{loaded.describe()}\nmax support {max(payload['support_sizes'])}, " \
               f"gram deviation {payload['gram_deviation']:.2e}"
    else:
        code = classical_from_file(loaded)
        payload = {"kind": "classical", "q": code.q, "n": code.n, "size": len(code), "property": loaded.property}
        text = f"classical code over Z_{code.q}, length {code.n}, {len(code)} words"
    _emit(args, payload, text)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qadc", description=f"{settings.app_name} {settings.app_version}")
    p.add_argument("--json", action="store_true", help="Emit JSON instead of text")
    p.add_argument("--threads", type=int, default=settings.threads, help="Worker threads for verification")
    p.add_argument("--seed", type=int, default=settings.default_seed, help="Seed for randomized steps")
    p.add_argument("--verbose", "-v", action="count", default=0)
    p.add_argument("--quiet", "-q", action="store_true", help="Only warnings and errors")
    sub = p.add_subparsers(dest="cmd", required=True)

    # Constructions
    s = sub.add_parser("construct", help="Build a code and write its file")
    kinds = s.add_subparsers(dest="kind", required=True)
    k = kinds.add_parser("gc", help="Generalized concatenation single-error code")
    k.add_argument("--q", type=int, required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--flavor", choices=["linear", "nonlinear", "nonlinear_short"], default="linear")
    k.add_argument("--outer-file", help="Classical outer code file instead of the registry")
    k = kinds.add_parser("multi", help="Parity multi-error code")
    k.add_argument("--q", type=int, required=True)
    k.add_argument("--m", type=int, required=True)
    k.add_argument("--outer", default="5_1_3_5", help="Registry key or quantum code file")
    k.add_argument("--map", help="Comma-separated inner strings for outer symbols 0, 1, ...")
    k = kinds.add_parser("vlambda", help="V (L1) or Lambda (L2) channel code")
    k.add_argument("--pattern", choices=["L1", "L2"], required=True)
    k.add_argument("--m", type=int, required=True)
    k.add_argument("--outer", default="5_1_3_5")
    k.add_argument("--map")
    k = kinds.add_parser("lift", help="Lift orbit representatives")
    k.add_argument("--q", type=int, required=True)
    k.add_argument("--words", required=True, help="Comma-separated representatives")
    k.add_argument("--name")
    kinds.add_parser("encoder", help="Quinary five-qudit distance-3 code")
    for k in kinds.choices.values():
        k.add_argument("--out", help="Code file path")
    s.set_defaults(func=cmd_construct)

    # Verification
    s = sub.add_parser("verify", help="Approximate Knill-Laflamme check of a code file")
    s.add_argument("--code", required=True)
    s.add_argument("--channel", default="A", help="A, Xi, V or Lambda")
    s.add_argument("--t", type=int)
    s.add_argument("--grid", help="Comma-separated decreasing parameter values")
    s.add_argument("--pair-filter", choices=["correctable", "total_order"])
    s.add_argument("--max-damping", type=int)
    s.add_argument("--k1", type=float)
    s.add_argument("--k2", type=float)
    s.add_argument("--out", help="JSON report path")
    s.set_defaults(func=cmd_verify)

    # Searches
    s = sub.add_parser("search", help="Search for disjoint self-complementary 1-codes")
    kinds = s.add_subparsers(dest="kind", required=True)
    k = kinds.add_parser("partition")
    k.add_argument("--size", type=int, required=True, help="Words per part")
    k = kinds.add_parser("max")
    k.add_argument("--mode", choices=["exhaustive", "greedy"], default="exhaustive")
    k.add_argument("--restarts", type=int)
    for k in kinds.choices.values():
        k.add_argument("--q", type=int, required=True)
        k.add_argument("--n", type=int, required=True)
        k.add_argument("--parts", type=int, default=1)
        k.add_argument("--node-cap", type=int, default=settings.node_cap)
        k.add_argument("--out")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("tables", help="Dimension tables")
    s.add_argument("--which", choices=["II", "III"], required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("inspect", help="Summarize a code file")
    s.add_argument("--code", required=True)
    s.set_defaults(func=cmd_inspect)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose, args.quiet)
    try:
        return args.func(args)
    except QadcError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
