"""Command line front end.

    padic-zeros verify <task> [--prime P | --range A..B] [--workers N] [--out DIR] [--resume]
    padic-zeros bounds v4 --prime P --method {med1,improved,hybrid}
    padic-zeros bounds table
    padic-zeros solve diag2 --coeffs c1,c2,...
    padic-zeros oracle --degree d --prime p --coeffs c1,c2,...

Results go to standard output; progress goes to standard error. Exit status
is 0 on success, 2 when a check is refuted or finds unexpected exceptions,
and 1 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__, bounds, verify
from .diagonal import NotDecided, is_solvable_oracle, normalise_integers, solve_2adic_diagonal_quartic
from .fpsearch import default_workers
from .gfp import is_prime

log = logging.getLogger("padic_zeros")

EXIT_OK, EXIT_USAGE, EXIT_REFUTED = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Config:
    workers: int = 1
    out_dir: Path | None = None
    resume: bool = False

    def __post_init__(self):
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")


# ---------------------------------------------------------------------------
# Reports


def _params_tag(params: dict) -> str:
    return "_".join(f"{k}{'-'.join(map(str, v)) if isinstance(v, list) else v}" for k, v in sorted(params.items()))


def report_name(report: verify.TaskReport) -> str:
    return f"{report.task}-{_params_tag(report.params)}-{report.checksum}.json"


def write_report(report: verify.TaskReport, config: Config) -> Path:
    if config.out_dir is None:
        raise UsageError("no output directory configured")
    config.out_dir.mkdir(parents=True, exist_ok=True)
    path = config.out_dir / report_name(report)
    path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return path


def read_report(path: Path) -> verify.TaskReport:
    return verify.TaskReport.from_json(json.loads(Path(path).read_text()))


def find_existing(out_dir: Path, task: str, params: dict) -> verify.TaskReport | None:
    """A stored report for this task and parameters whose checksum still matches its content."""
    if out_dir is None or not out_dir.is_dir():
        return None
    prefix = f"{task}-{_params_tag(params)}-"
    for path in sorted(out_dir.glob(prefix + "*.json")):
        try:
            rep = read_report(path)
        except (ValueError, KeyError, TypeError):
            continue
        if rep.checksum == rep.compute_checksum() and path.name == report_name(rep):
            return rep
    return None


# ---------------------------------------------------------------------------
# Argument parsing


def parse_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m:
        raise UsageError(f"range must look like A..B, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise UsageError("empty range")
    return [p for p in range(a, b + 1) if is_prime(p)]


def parse_coeffs(text: str) -> list[int]:
    try:
        vals = [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]
    except ValueError:
        raise UsageError(f"coefficients must be integers separated by commas, got {text!r}") from None
    if not vals:
        raise UsageError("no coefficients given")
    if any(v == 0 for v in vals):
        raise UsageError("zero coefficient: such a form is trivially isotropic")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padic-zeros", description="Finite-field sweeps, p-adic lifting and bound chains.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a named verification task")
    v.add_argument("task", choices=sorted(verify.TASKS))
    g = v.add_mutually_exclusive_group()
    g.add_argument("--prime", type=int)
    g.add_argument("--range", dest="prime_range", help="A..B: every prime in the range")
    v.add_argument("--n", type=int, help="number of variables (bad_family, beta_search)")
    v.add_argument("--r", type=int, help="number of quadratic forms (beta_search)")
    v.add_argument("--budget", type=int, default=1000, help="random systems to try (beta_search)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=None, help="worker processes (default: $PADIC_ZEROS_WORKERS or CPU count)")
    v.add_argument("--out", type=Path, default=None, help="directory for JSON reports")
    v.add_argument("--resume", action="store_true", help="reuse a stored report with a matching checksum")
    v.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS, help="progress messages on stderr")

    b = sub.add_parser("bounds", help="bound chains for v_4(p)")
    bsub = b.add_subparsers(dest="what", required=True)
    b4 = bsub.add_parser("v4")
    b4.add_argument("--prime", type=int, required=True)
    b4.add_argument("--method", choices=bounds.V4_METHODS, default="med1")
    bsub.add_parser("table")

    s = sub.add_parser("solve", help="constructive solvers")
    ssub = s.add_subparsers(dest="solver", required=True)
    d2 = ssub.add_parser("diag2", help="2-adic diagonal quartic sum c_i x_i^4")
    d2.add_argument("--coeffs", required=True)
    d2.add_argument("--precision", type=int, default=None,
                    help="2-adic precision of the zero (default and maximum: 11, where units are stored)")

    o = sub.add_parser("oracle", help="solvability of a diagonal form over Q_p")
    o.add_argument("--degree", type=int, required=True)
    o.add_argument("--prime", type=int, required=True)
    o.add_argument("--coeffs", required=True)
    return ap


# ---------------------------------------------------------------------------
# Commands

PRIME_TASKS = {"cl", "mykey_case1", "quintic", "badform", "bad_family", "beta_search"}


def _task_calls(args) -> list[tuple[dict, callable]]:
    task = args.task
    fn = verify.TASKS[task]
    if task in PRIME_TASKS:
        if args.prime_range:
            primes = parse_range(args.prime_range)
        elif args.prime is not None:
            primes = [args.prime]
        else:
            raise UsageError(f"task {task} needs --prime or --range")
    elif args.prime is not None or args.prime_range:
        raise UsageError(f"task {task} has a fixed prime")
    else:
        primes = [None]
    calls = []
    for p in primes:
        if task == "bad_family":
            if args.n is None:
                raise UsageError("bad_family needs --n")
            calls.append(({"prime": p, "n": args.n}, lambda p=p: fn(p, args.n)))
        elif task == "beta_search":
            if args.n is None or args.r is None:
                raise UsageError("beta_search needs --r and --n")
            params = {"r": args.r, "prime": p, "n": args.n, "budget": args.budget, "seed": args.seed}
            calls.append((params, lambda p=p: fn(args.r, p, args.n, args.budget, seed=args.seed)))
        elif task == "identities":
            calls.append(({"primes": sorted(verify.IDENTITIES)}, fn))
        elif p is None:
            calls.append(({"prime": 5}, lambda: fn(workers=args.workers, progress=_progress)))
        else:
            calls.append(({"prime": p}, lambda p=p: fn(p, workers=args.workers, progress=_progress)))
    return calls


_last_pct = [-1]


def _progress(done: int, total: int) -> None:
    pct = 100 * done // max(total, 1)
    if pct != _last_pct[0]:
        _last_pct[0] = pct
        log.info("progress %d/%d (%d%%)", done, total, pct)


def cmd_verify(args) -> int:
    if args.workers is None:
        args.workers = default_workers()
    config = Config(workers=args.workers, out_dir=args.out, resume=args.resume)
    status = EXIT_OK
    for params, call in _task_calls(args):
        rep = find_existing(config.out_dir, args.task, params) if config.resume else None
        if rep is not None:
            log.info("reusing stored report %s", report_name(rep))
            reused = True
        else:
            try:
                rep = call()
            except verify.TaskError as e:
                if args.prime_range:
                    print(f"skipping {params}: {e}", file=sys.stderr)
                    continue
                raise UsageError(str(e)) from None
            reused = False
        path = write_report(rep, config) if config.out_dir is not None and not reused else None
        line = {
            "task": rep.task,
            "params": rep.params,
            "forms_examined": rep.forms_examined,
            "exceptions": len(rep.exceptions),
            "verdict": rep.verdict,
            "checksum": rep.checksum,
            "wall_ms": rep.wall_ms,
            "reused": reused,
        }
        if path is not None:
            line["report"] = str(path)
        print(json.dumps(line, sort_keys=True))
        if not rep.ok:
            status = EXIT_REFUTED
    return status


def cmd_bounds(args) -> int:
    if args.what == "table":
        print(bounds.format_table(bounds.bound_table()))
        return EXIT_OK
    if not is_prime(args.prime):
        raise UsageError(f"{args.prime} is not prime")
    try:
        value, trace = bounds.v4_bound(args.prime, args.method)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(f"v4({args.prime}) <= {value}  [{args.method}]")
    print(trace.format())
    return EXIT_OK


def cmd_solve(args) -> int:
    coeffs = parse_coeffs(args.coeffs)
    f, shifts = normalise_integers(2, 4, coeffs)
    precision = f.modulus_exponent if args.precision is None else args.precision
    if not 1 <= precision <= f.modulus_exponent:
        raise UsageError(f"--precision must lie in 1..{f.modulus_exponent}")
    print(f"form: {f.literal()}")
    if any(shifts):
        print(f"variable shifts (x_i = y_i * 2^-shift): {shifts}")
    try:
        res = solve_2adic_diagonal_quartic(f, precision=precision)
    except NotDecided:
        oracle = is_solvable_oracle(f)
        print("solver: no zero found")
        print(f"oracle: {'solvable' if oracle.solvable else 'anisotropic over Q_2'}")
        return EXIT_OK if not oracle.solvable else EXIT_REFUTED
    print(f"zero mod 2^{precision}: {list(res.vector)}  [{res.method}]")
    return EXIT_OK


def cmd_oracle(args) -> int:
    if not is_prime(args.prime):
        raise UsageError(f"{args.prime} is not prime")
    coeffs = parse_coeffs(args.coeffs)
    try:
        f, _ = normalise_integers(args.prime, args.degree, coeffs)
        res = is_solvable_oracle(f)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(f"form: {f.literal()}")
    if res.solvable:
        print(f"solvable: zero {list(res.witness)} mod {args.prime}^{f.modulus_exponent}  [{res.method}]")
    else:
        print(f"anisotropic over Q_{args.prime}  [{res.method}]")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "bounds": cmd_bounds, "solve": cmd_solve, "oracle": cmd_oracle}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
