"""Projective point enumeration, non-singular zero detection and the sweep engine.

A sweep runs over a *family*: any object with ``size``, ``params(index)`` and
``form(index)``. ``LinearFamily`` (a form written as sum of scalar * basis form,
each scalar drawn from a finite choice list) additionally has a compiled fast
path that evaluates whole index blocks from precomputed per-point tables.
"""

from __future__ import annotations

import itertools
import logging
import multiprocessing as mp
import os
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numba
import numpy as np

from .forms import Form, evaluate, gradient

log = logging.getLogger(__name__)

DEFAULT_BLOCK = 1 << 16


@dataclass(frozen=True)
class ZeroReport:
    total_points: int
    singular_points: int
    nonsingular_witness: tuple[int, ...] | None


def projective_points(p: int, n: int) -> Iterator[tuple[int, ...]]:
    """Canonical representatives (first nonzero coordinate 1) in lexicographic order."""
    if n < 1:
        raise ValueError("need at least one coordinate")
    for pt in itertools.product(range(p), repeat=n):
        for c in pt:
            if c:
                if c == 1:
                    yield pt
                break


@lru_cache(maxsize=64)
def projective_point_array(p: int, n: int) -> np.ndarray:
    arr = np.array(list(projective_points(p, n)), dtype=np.int64).reshape(-1, n)
    arr.setflags(write=False)
    return arr


def count_and_witness(f: Form) -> ZeroReport:
    n_zero = n_sing = 0
    witness = None
    for pt in projective_points(f.prime, f.n_vars):
        if evaluate(f, pt):
            continue
        n_zero += 1
        if any(gradient(f, pt)):
            if witness is None:
                witness = pt
        else:
            n_sing += 1
    return ZeroReport(n_zero, n_sing, witness)


def first_nonsingular_zero(f: Form) -> tuple[int, ...] | None:
    for pt in projective_points(f.prime, f.n_vars):
        if evaluate(f, pt) == 0 and any(gradient(f, pt)):
            return pt
    return None


def has_nonsingular_zero(f: Form) -> bool:
    return first_nonsingular_zero(f) is not None


# ---------------------------------------------------------------------------
# Families


@dataclass(frozen=True)
class LinearFamily:
    """Forms sum_s c_s * basis[s], with c_s ranging over choices[s].

    Indices enumerate the product of the choice lists in lexicographic order,
    slot 0 most significant.
    """

    basis: tuple[Form, ...]
    choices: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()
    label: str = ""

    def __post_init__(self):
        if len(self.basis) != len(self.choices):
            raise ValueError("one choice list per basis form")
        f0 = self.basis[0]
        for b in self.basis:
            if (b.prime, b.n_vars, b.degree) != (f0.prime, f0.n_vars, f0.degree):
                raise ValueError("basis forms must share prime, degree and variable count")
        if any(not c for c in self.choices):
            raise ValueError("empty choice list")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"c{i}" for i in range(len(self.basis))))

    @property
    def prime(self) -> int:
        return self.basis[0].prime

    @property
    def n_vars(self) -> int:
        return self.basis[0].n_vars

    @property
    def degree(self) -> int:
        return self.basis[0].degree

    @property
    def radices(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.choices)

    @property
    def size(self) -> int:
        n = 1
        for r in self.radices:
            n *= r
        return n

    def params(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise IndexError(index)
        out = []
        for choice in reversed(self.choices):
            index, d = divmod(index, len(choice))
            out.append(choice[d])
        return tuple(reversed(out))

    def index(self, params: Sequence[int]) -> int:
        idx = 0
        for choice, v in zip(self.choices, params):
            idx = idx * len(choice) + choice.index(v % self.prime)
        return idx

    def form_from_params(self, params: Sequence[int]) -> Form:
        acc: dict = {}
        for b, c in zip(self.basis, params):
            for e, v in b.terms:
                acc[e] = acc.get(e, 0) + c * v
        return Form.from_dict(self.prime, self.n_vars, self.degree, acc)

    def form(self, index: int) -> Form:
        return self.form_from_params(self.params(index))


@dataclass
class SweepResult:
    examined: int
    exception_indices: list[int]
    exceptions: list[tuple[int, ...]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Compiled fast path


def evaluation_tables(family: LinearFamily) -> tuple[np.ndarray, np.ndarray]:
    """Per-point values and gradients of every basis form, reduced mod p."""
    p, n = family.prime, family.n_vars
    pts = projective_point_array(p, n)
    vals = np.zeros((pts.shape[0], len(family.basis)), dtype=np.int64)
    grads = np.zeros((n, pts.shape[0], len(family.basis)), dtype=np.int64)
    powers = [np.ones((pts.shape[0], n), dtype=np.int64)]
    for _ in range(family.degree):
        powers.append(powers[-1] * pts % p)
    for s, b in enumerate(family.basis):
        for exps, c in b.terms:
            mono = np.full(pts.shape[0], c, dtype=np.int64)
            for j, e in enumerate(exps):
                mono = mono * powers[e][:, j] % p
            vals[:, s] += mono
            for k, ek in enumerate(exps):
                if not ek:
                    continue
                d = np.full(pts.shape[0], c * ek % p, dtype=np.int64)
                for j, e in enumerate(exps):
                    d = d * powers[e - (j == k)][:, j] % p
                grads[k, :, s] += d
    return vals % p, grads % p


def choice_table(family: LinearFamily) -> np.ndarray:
    width = max(family.radices)
    tab = np.zeros((len(family.choices), width), dtype=np.int64)
    for s, ch in enumerate(family.choices):
        tab[s, : len(ch)] = ch
    return tab


@numba.njit(cache=True)
def _scan_block(start, stop, radices, choices, vals, grads, p, fails):
    nslots = radices.shape[0]
    npts = vals.shape[0]
    nvars = grads.shape[0]
    coeff = np.empty(nslots, np.int64)
    nfail = 0
    for idx in range(start, stop):
        r = idx
        for s in range(nslots - 1, -1, -1):
            coeff[s] = choices[s, r % radices[s]]
            r //= radices[s]
        found = False
        for pt in range(npts):
            v = 0
            for s in range(nslots):
                v += coeff[s] * vals[pt, s]
            if v % p != 0:
                continue
            for k in range(nvars):
                g = 0
                for s in range(nslots):
                    g += coeff[s] * grads[k, pt, s]
                if g % p != 0:
                    found = True
                    break
            if found:
                break
        if not found:
            fails[nfail] = idx
            nfail += 1
    return nfail


class _FastScanner:
    def __init__(self, family: LinearFamily):
        self.p = family.prime
        self.radices = np.array(family.radices, dtype=np.int64)
        self.choices = choice_table(family)
        self.vals, self.grads = evaluation_tables(family)

    def __call__(self, start: int, stop: int) -> list[int]:
        fails = np.empty(stop - start, dtype=np.int64)
        n = _scan_block(start, stop, self.radices, self.choices, self.vals, self.grads, self.p, fails)
        return fails[:n].tolist()


class _GenericScanner:
    def __init__(self, family, predicate):
        self.family = family
        self.predicate = predicate

    def __call__(self, start: int, stop: int) -> list[int]:
        return [i for i in range(start, stop) if not self.predicate(self.family.form(i))]


# Set in the coordinator before forking so workers inherit it without pickling.
_ACTIVE_SCANNER: Callable[[int, int], list[int]] | None = None


def _run_block(block: tuple[int, int]) -> list[int]:
    assert _ACTIVE_SCANNER is not None
    return _ACTIVE_SCANNER(*block)


def warm_up() -> None:
    """Compile the block kernel once so forked workers inherit it."""
    tiny = LinearFamily((Form.from_dict(2, 2, 1, {(1, 0): 1}),), ((1,),))
    _FastScanner(tiny)(0, 1)


def default_workers() -> int:
    env = os.environ.get("PADIC_ZEROS_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep(
    family,
    predicate: Callable[[Form], bool] = has_nonsingular_zero,
    *,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK,
    fast: bool | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> SweepResult:
    """Return every index whose form fails ``predicate``, in increasing order.

    The result does not depend on ``workers`` or ``block_size``.
    """
    global _ACTIVE_SCANNER
    if workers < 1 or block_size < 1:
        raise ValueError("workers and block_size must be positive")
    total = family.size
    if fast is None:
        fast = isinstance(family, LinearFamily) and predicate is has_nonsingular_zero
    if fast:
        if not (isinstance(family, LinearFamily) and predicate is has_nonsingular_zero):
            raise ValueError("the fast path only checks has_nonsingular_zero on a LinearFamily")
        scanner = _FastScanner(family)
        scanner(0, min(1, total))  # compile before any fork
    else:
        scanner = _GenericScanner(family, predicate)
    blocks = [(a, min(a + block_size, total)) for a in range(0, total, block_size)]
    results: list[list[int]] = []
    done = 0
    if workers == 1 or len(blocks) <= 1:
        for b in blocks:
            results.append(scanner(*b))
            done += b[1] - b[0]
            if progress:
                progress(done, total)
    else:
        _ACTIVE_SCANNER = scanner
        try:
            ctx = mp.get_context("fork")
            with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
                for b, res in zip(blocks, pool.map(_run_block, blocks)):
                    results.append(res)
                    done += b[1] - b[0]
                    if progress:
                        progress(done, total)
        finally:
            _ACTIVE_SCANNER = None
    indices = sorted(itertools.chain.from_iterable(results))
    params = [family.params(i) for i in indices]
    return SweepResult(total, indices, params)
