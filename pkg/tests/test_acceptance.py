"""Acceptance criteria 1-12, each printing one PASS/FAIL line with its timing.

Time limits are the stated ones. Where a limit is stated for 8 workers the
sweep is run with 8 workers, whatever the machine's core count.
"""

import contextlib
import gc
import random
import time

import pytest

from _instances import random_lift_instances
from conftest import ACCEPTANCE_LINES
from padic_zeros import bounds
from padic_zeros import verify as V
from padic_zeros.diagonal import (
    PHI_WITNESSES,
    QUARTIC_2ADIC_TYPES,
    DiagonalForm,
    NotDecided,
    canonical_2adic_quartic,
    is_solvable_oracle,
    phi_witness,
    quartic_2adic_orbit_representatives,
    solve_2adic_diagonal_quartic,
)
from padic_zeros.forms import Form
from padic_zeros.padic import PadicInt, fourth_root_2adic, hensel_lift_root

_reports: dict = {}


def report(task, *args, workers=1):
    """Run a verify task once per (task, args, workers) for the whole module."""
    key = (task, args, workers)
    if key not in _reports:
        fn = V.TASKS[task]
        _reports[key] = fn(*args, workers=workers)
    return _reports[key]


def record(capsys, n, ok, seconds, limit, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  ({seconds:.2f} s, limit {limit})  {detail}"
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


@contextlib.contextmanager
def frozen_heap():
    """Keep objects left by earlier tests out of full collections during a long loop."""
    gc.collect()
    gc.freeze()
    try:
        yield
    finally:
        gc.unfreeze()


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_bound_table(capsys):
    def build():
        rows = bounds.bound_table()
        extra = [bounds.beta_upper(7, 3), bounds.beta_upper(8, 3), bounds.beta_upper(8, 11)]
        return [r.value for r in rows], extra

    (values, extra), dt = timed(build)
    want = [4294967296, 623426, 611930, 477724, 612320, 9126, 128, 312, 120,
            480, 544, 546, 16940, 20464, 28294, 460784, 591856, 595132]
    missing = [w for w in want if w not in values]
    named = {
        "v4(13) improved": 611930, "v4(2) improved": 9126, "v4(3) hybrid": 128, "v4(7) hybrid": 128,
        "v4(5) hybrid": 312, "v4(11) hybrid": 120, "v4(2) basic step": 477724, "v4(5) basic step": 612320,
        "v4(13) basic step": 623426, "v4 basic-step maximum over p": 623426, "v4 general d^(2^d)": 4294967296,
    }
    rows = {r.name: r.value for r in bounds.bound_table()}
    wrong = {k: rows.get(k) for k, v in named.items() if rows.get(k) != v}
    ok = not missing and not wrong and extra == [84, 112, 104] and dt < 1
    record(capsys, 1, ok, dt, "1 s", f"missing={missing} wrong={wrong} beta(7),beta(8)={extra}")


def test_criterion_02_mykey52(capsys):
    rep, dt = timed(lambda: report("mykey52"))
    ok = rep.forms_examined == 62500 and rep.exceptions == [] and rep.verdict == V.CONFIRMED and dt < 5
    record(capsys, 2, ok, dt, "5 s", f"forms={rep.forms_examined} exceptions={len(rep.exceptions)}")


def test_criterion_03_mykey51(capsys):
    rep, dt = timed(lambda: report("mykey51"))
    monos = [(4, 0, 0), (1, 3, 0), (0, 4, 0), (1, 0, 3), (0, 1, 3), (0, 0, 4)]
    got = {tuple(Form.parse(e).coeff(m) for m in monos) for e in rep.exceptions}
    expected = V.mykey51_expected(V.mykey51_family())
    ok = got == expected and rep.verdict == V.AS_EXPECTED and dt < 5
    record(capsys, 3, ok, dt, "5 s", f"exceptions={len(got)} expected={len(expected)}")


def test_criterion_04_cl(capsys):
    times, counts = {}, {}
    for p in (2, 5, 7, 11, 13):
        rep, times[p] = timed(lambda: report("cl", p, workers=8))
        counts[p] = len(rep.exceptions)
    ok = all(c == 0 for c in counts.values()) and times[13] < 600
    record(capsys, 4, ok, sum(times.values()), "p=13 under 600 s",
           f"exceptions={counts} p13={times[13]:.2f}s (8 workers)")


def test_criterion_05_quintic(capsys):
    r13, t13 = timed(lambda: report("quintic", 13, workers=8))
    r17, t17 = timed(lambda: report("quintic", 17, workers=8))
    target = r13.details["known_form_normalised"]
    ok = (target in r13.exceptions and r13.verdict == V.AS_EXPECTED
          and r17.exceptions == [] and r17.verdict == V.CONFIRMED and t17 < 1800)
    record(capsys, 5, ok, t13 + t17, "p=17 under 1800 s",
           f"p13 exceptions={len(r13.exceptions)} in {len(r13.details['classes'])} classes, known form present="
           f"{target in r13.exceptions}; p17 exceptions={len(r17.exceptions)} ({t17:.1f}s, 8 workers)")


def test_criterion_06_mykey_case1(capsys):
    out, dt = timed(lambda: [report("mykey_case1", p, workers=8) for p in (3, 7)])
    ok = all(r.verdict == V.CONFIRMED and len(r.details["chosen_q"]) == r.details["binary_forms"] for r in out)
    ok &= dt < 120
    record(capsys, 6, ok, dt, "120 s",
           "; ".join(f"p={r.params['prime']}: {len(r.details['chosen_q'])}/{r.details['binary_forms']} f with q"
                     for r in out))


def test_criterion_07_identities(capsys):
    out, dt = timed(lambda: (V.task_identities(), report("badform", 13), report("badform", 29)))
    ident, b13, b29 = out
    ok = ident.verdict == V.CONFIRMED and b13.verdict == V.AS_EXPECTED and b29.verdict == V.AS_EXPECTED and dt < 1
    record(capsys, 7, ok, dt, "1 s", f"checks={ident.details['checks']} badform13={b13.verdict} "
                                     f"badform29={b29.verdict}")


def _primitive_zero(f: DiagonalForm, x, k=11) -> bool:
    """Re-check a returned vector directly from the (exponent, unit) pairs."""
    return any(v & 1 for v in x) and sum((u << e) * v**4 for (e, u), v in zip(f.coeffs, x)) % (1 << k) == 0


def test_criterion_08_oracle_vs_solver(capsys):
    with frozen_heap():
        _criterion_08(capsys)


def _criterion_08(capsys):
    t0 = time.perf_counter()
    reps = quartic_2adic_orbit_representatives(5)
    verdict = {}
    disagree, bad_vectors, solved = [], [], 0
    for rep in reps:
        f = DiagonalForm(2, 4, rep)
        o = is_solvable_oracle(f).solvable
        verdict[rep] = o
        try:
            x = solve_2adic_diagonal_quartic(f, precision=11).vector
        except NotDecided:
            if o:
                disagree.append(rep)
            continue
        solved += 1
        if not o:
            disagree.append(rep)
        if not _primitive_zero(f, x):
            bad_vectors.append(rep)
    # The family is closed under scaling the form and permuting variables, and both
    # solvability and the solver's moves are invariant; spot-check on raw members.
    rng = random.Random(8)
    raw_bad = 0
    for _ in range(20000):
        n = rng.randint(1, 5)
        c = tuple(rng.choice(QUARTIC_2ADIC_TYPES) for _ in range(n))
        f = DiagonalForm(2, 4, c)
        o = verdict[canonical_2adic_quartic(c)]
        try:
            x = solve_2adic_diagonal_quartic(f, precision=11).vector
            raw_bad += (not o) or not _primitive_zero(f, x)
        except NotDecided:
            raw_bad += o
    dt = time.perf_counter() - t0
    ok = not disagree and not bad_vectors and raw_bad == 0 and dt < 600
    record(capsys, 8, ok, dt, "600 s",
           f"orbit representatives={len(reps)} solvable={solved} disagreements={len(disagree)} "
           f"bad vectors={len(bad_vectors)} raw-member mismatches={raw_bad}/20000")


def test_criterion_09_level_pattern(capsys):
    with frozen_heap():
        _criterion_09(capsys)


def _criterion_09(capsys):
    t0 = time.perf_counter()
    failures = 0
    units = range(1, 32, 2)
    count = 0
    for u in ((a, b, c, d, e) for a in units for b in units for c in units for d in units for e in units):
        f = DiagonalForm(2, 4, tuple(zip((0, 0, 1, 2, 3), u)))
        count += 1
        try:
            x = solve_2adic_diagonal_quartic(f, precision=11).vector
        except NotDecided:
            failures += 1
            continue
        failures += not _primitive_zero(f, x)
    dt = time.perf_counter() - t0
    ok = failures == 0 and count == 16**5 and dt < 60
    record(capsys, 9, ok, dt, "60 s", f"forms={count} failures={failures}")


def test_criterion_10_hensel(capsys):
    t0 = time.perf_counter()
    bad = 0
    for p in (2, 3, 5, 7, 13):
        for f, x0 in random_lift_instances(p, 1000, seed=p):
            cert = hensel_lift_root(f, x0)
            bad += f(cert.root.residue) % p**f.precision != 0
    roots_bad = 0
    for a in range(1, 1024, 16):
        x = fourth_root_2adic(PadicInt(2, 10, a)).residue
        roots_bad += pow(x, 4, 1024) != a
    dt = time.perf_counter() - t0
    ok = bad == 0 and roots_bad == 0 and dt < 10
    record(capsys, 10, ok, dt, "10 s", f"lift failures={bad}/5000 fourth-root failures={roots_bad}/64")


def test_criterion_11_phi_witnesses(capsys):
    t0 = time.perf_counter()
    want = {(3, 2): 3, (3, 7): 6, (4, 3): 8, (4, 13): 12, (4, 2): 15, (4, 5): 16}
    results = {}
    for (d, p), n in want.items():
        f = PHI_WITNESSES[(d, p)]
        results[(d, p)] = f.n_vars == n == bounds.phi(d, p) and phi_witness(p, d, f)
    dt = time.perf_counter() - t0
    ok = all(results.values()) and dt < 120
    record(capsys, 11, ok, dt, "120 s",
           " ".join(f"phi_{d}({p})={want[(d, p)]}:{'ok' if v else 'FAIL'}" for (d, p), v in results.items()))


GATED = [("cl", (p,)) for p in (2, 5, 7, 11, 13)] + [
    ("mykey51", ()), ("mykey52", ()), ("quintic", (13,)), ("quintic", (17,)),
    ("mykey_case1", (3,)), ("mykey_case1", (7,)), ("badform", (13,)), ("badform", (29,)),
]


def test_criterion_12_determinism(capsys):
    t0 = time.perf_counter()
    diff = []
    for task, args in GATED:
        a, b = report(task, *args, workers=1), report(task, *args, workers=8)
        if a.checksum != b.checksum:
            diff.append(f"{task}{args}")
    dt = time.perf_counter() - t0
    record(capsys, 12, not diff, dt, "none", f"sweeps compared={len(GATED)} checksum mismatches={diff}")
