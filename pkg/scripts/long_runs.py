"""Opt-in long sweeps that are not part of the test suite.

    python3 scripts/long_runs.py quintic --range 19..43 --out reports/
    python3 scripts/long_runs.py case1 --range 11..31 --out reports/

Each prime is run through the CLI's verify command, so finished primes are
skipped on a rerun with --resume and every result lands as a JSON report.
"""

import argparse
import sys
from pathlib import Path

from padic_zeros import cli
from padic_zeros.fpsearch import default_workers

JOBS = {
    "quintic": ("quintic", "19..43"),
    "case1": ("mykey_case1", "11..31"),
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("job", choices=sorted(JOBS))
    ap.add_argument("--range", dest="prime_range", help="override the default prime range")
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--workers", type=int, default=default_workers())
    ap.add_argument("--no-resume", action="store_true")
    args = ap.parse_args(argv)
    task, default_range = JOBS[args.job]
    cmd = ["-v", "verify", task, "--range", args.prime_range or default_range,
           "--workers", str(args.workers), "--out", str(args.out)]
    if not args.no_resume:
        cmd.append("--resume")
    return cli.run(cmd)


if __name__ == "__main__":
    sys.exit(main())
