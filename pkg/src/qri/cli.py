"""Command-line front end.

Exit codes: 0 success, 1 a property check failed, 2 usage or validation
error, 3 dimension mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

from . import __version__
from .errors import DimensionMismatch, QRIError, ValidationError
from .experiments import (
    AXIOMS,
    fig1_sweep,
    fig2_sweep,
    fig3_sweep,
    fig4_sweep,
    normalize_axiom,
    round_sig,
    run_axiom_suite,
)
from .incompat import base_tag, report
from .optimize import max_q_over_b, max_q_over_b_general
from .states import named_basis, observable_from_json, state_from_json

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_DIM = 0, 1, 2, 3


class UsageError(QRIError):
    pass


def _load_json(text: str, what: str):
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {what} file: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed {what} JSON: {exc}") from exc


def _observable(text: str | None, what: str, dim: int):
    if text is None:
        raise UsageError(f"{what} is required")
    stripped = text.strip()
    if stripped and stripped[0] not in "{[\"@":
        return named_basis(stripped, dim)
    return observable_from_json(_load_json(stripped, what), dim)


def _clean(obj):
    """Round floats to 12 significant digits for stable JSON output."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return round_sig(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _dumps(doc) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2) + "\n"


def write_output(text: str, out: str | None) -> None:
    """Write to stdout, or atomically replace ``out``."""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qri-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QRI_SEED")
    if env is None or env == "":
        return 0
    try:
        seed = int(env)
    except ValueError as exc:
        raise UsageError(f"QRI_SEED must be an integer, got {env!r}") from exc
    if not 0 <= seed < 2**64:
        raise UsageError("QRI_SEED must fit in an unsigned 64-bit integer")
    return seed


def _u64(text: str) -> int:
    val = int(text)
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return val


def _base(text: str):
    if text in ("2", "e"):
        return 2 if text == "2" else "e"
    raise argparse.ArgumentTypeError("base must be 2 or e")


def cmd_compute(args) -> int:
    rho = state_from_json(_load_json(args.state, "state"))
    a = _observable(args.obs_a, "--obs-a", rho.dim)
    b = _observable(args.obs_b, "--obs-b", rho.dim)
    rep = report(rho, a, b, args.base)
    doc = rep.as_dict()
    doc["dim"] = rho.dim
    write_output(_dumps(doc), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    seed = _seed(args)
    if args.figure == "fig1":
        grid = fig1_sweep(args.steps or 181, args.base)
    elif args.figure == "fig2":
        grid = fig2_sweep(args.steps or 41, args.base)
    elif args.figure == "fig3":
        grid = fig3_sweep(args.theta_steps, args.phi_steps, args.grid, args.refine, seed, args.threads, args.base)
    else:
        grid = fig4_sweep(args.theta_steps, args.p_steps, args.grid, args.refine, seed, args.threads, args.base)
    text = grid.to_json() if args.format == "json" else grid.to_csv()
    write_output(text, args.out)
    return EXIT_OK


def cmd_maxq(args) -> int:
    seed = _seed(args)
    rho = state_from_json(_load_json(args.state, "state"))
    a = _observable(args.obs_a or "computational", "--obs-a", rho.dim)
    if rho.dim == 2 and not args.general:
        res = max_q_over_b(rho, a, args.grid, args.refine, args.base, seed)
        doc = {"beta": res.argmax.beta, "gamma": res.argmax.gamma, "grid_n": res.grid_resolution}
    else:
        res = max_q_over_b_general(rho, a, args.samples, args.refine, args.base, seed)
        doc = {"samples": res.grid_resolution}
    doc.update({
        "q_max": res.q_max,
        "method": res.method,
        "refine_iters": res.refine_iterations,
        "seed": seed,
        "base": base_tag(args.base),
        "basis": [[[z.real, z.imag] for z in v] for v in res.basis.vecs],
    })
    write_output(_dumps(doc), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    seed = _seed(args)
    ids = AXIOMS if args.axiom.lower() == "all" else (normalize_axiom(args.axiom),)
    reports = [run_axiom_suite(ax, args.trials, seed, args.tol) for ax in ids]
    doc = {"passed": all(r.passed for r in reports), "reports": [r.as_dict() for r in reports]}
    write_output(_dumps(doc), args.out)
    return EXIT_OK if doc["passed"] else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qri", description="Quantumness of relative incompatibility.")
    parser.add_argument("--version", action="version", version=f"qri {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout); written atomically")
    common.add_argument("--seed", type=_u64, default=None, help="RNG seed (default $QRI_SEED or 0)")
    common.add_argument("--base", type=_base, default=2, help="log base: 2 or e")
    common.add_argument("--threads", type=int, default=None, help="worker processes for sweeps")

    p = sub.add_parser("compute", parents=[common], help="Q, C, D and marginals for one state")
    p.add_argument("--state", required=True, help="state JSON or @file")
    p.add_argument("--obs-a", required=True, help="observable A (JSON, @file, or basis name)")
    p.add_argument("--obs-b", required=True, help="observable B (JSON, @file, or basis name)")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", parents=[common], help="figure datasets as CSV or JSON")
    p.add_argument("figure", choices=["fig1", "fig2", "fig3", "fig4"])
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--steps", type=int, default=None, help="points per axis (fig1, fig2)")
    p.add_argument("--theta-steps", type=int, default=61)
    p.add_argument("--phi-steps", type=int, default=61)
    p.add_argument("--p-steps", type=int, default=51)
    p.add_argument("--grid", type=int, default=32, help="B-search grid size per angle")
    p.add_argument("--refine", type=int, default=200, help="simplex iterations per start")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("maxq", parents=[common], help="maximize Q over observable B")
    p.add_argument("--state", required=True)
    p.add_argument("--obs-a", default=None, help="observable A (default computational)")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--refine", type=int, default=200)
    p.add_argument("--samples", type=int, default=256, help="Haar samples for the general path")
    p.add_argument("--general", action="store_true", help="use the random-search path even for qubits")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_maxq)

    p = sub.add_parser("check", parents=[common], help="randomized property suites")
    p.add_argument("--axiom", default="all", help="all, " + ", ".join(a.lower() for a in AXIOMS))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tol", type=float, default=None, help="override the per-suite tolerance")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DimensionMismatch as exc:
        print(f"qri: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIM
    except (ValidationError, UsageError) as exc:
        print(f"qri: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
