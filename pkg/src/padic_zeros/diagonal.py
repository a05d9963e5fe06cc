"""Diagonal forms over Q_p: a bounded-modulus solvability oracle, the constructive
2-adic quartic solver built from level merging, and quartics composed from
quadratic systems.

A diagonal form sum c_i x_i^d is stored as pairs (e_i, u_i) with c_i = p^e_i u_i,
0 <= e_i < d (rescaling x_i by p moves e_i by d) and u_i a unit mod p^M.

Oracle. A primitive zero has a unit coordinate x_i, and the i-th partial then
has valuation delta_i = v(d) + e_i. So a zero exists iff for some i there is a
vector mod p^(2 delta_i + 1) with x_i a unit and f(x) = 0 to that modulus;
Hensel's lemma in x_i does the rest. M = 2(v(d) + d - 1) + 1 covers every i.
The achievable values of c_j x_j^d mod p^m are {0} together with cosets of
p^(e_j + d a + k0), k0 being the depth at which unit d-th powers become a union
of cosets, so the existence question is a subset-sum over small cyclic groups.
When p does not divide d a cheaper exact criterion is available: the form is
isotropic iff the reduction of some single level is isotropic over F_p.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

from .forms import Form
from .gfp import check_prime, is_prime, power_classes
from .padic import (
    UnivariatePadicPoly,
    ZpForm,
    fourth_root_2adic,
    hensel_lift_root,
    int_valuation,
    PadicInt,
)

log = logging.getLogger(__name__)

MAX_ORACLE_VARS = 24
MAX_DP_BITS = 1 << 20


def vp(n: int, p: int) -> int:
    return int_valuation(n, p)


@lru_cache(maxsize=None)
def oracle_exponent(p: int, d: int) -> int:
    """M with unit residues mod p^M determining solvability (11 for 2-adic quartics)."""
    return 2 * (vp(d, p) + d - 1) + 1


@dataclass(frozen=True)
class DiagonalForm:
    prime: int
    degree: int
    coeffs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        check_prime(self.prime)
        if self.degree < 1:
            raise ValueError("degree must be positive")
        mod = self.prime ** oracle_exponent(self.prime, self.degree)
        norm = []
        for e, u in self.coeffs:
            if e < 0 or e >= self.degree:
                raise ValueError(f"exponent {e} is not normalised into [0, {self.degree})")
            if u % self.prime == 0:
                raise ValueError(f"{u} is not a unit mod {self.prime}")
            norm.append((int(e), int(u) % mod))
        object.__setattr__(self, "coeffs", tuple(norm))

    @classmethod
    def from_integers(cls, p: int, d: int, coeffs: Sequence[int]) -> DiagonalForm:
        """Normalise nonzero integer coefficients (see ``normalise_integers`` for the shifts)."""
        return normalise_integers(p, d, coeffs)[0]

    @property
    def n_vars(self) -> int:
        return len(self.coeffs)

    @property
    def modulus_exponent(self) -> int:
        return oracle_exponent(self.prime, self.degree)

    def integer_coeffs(self) -> list[int]:
        return list(self._integer_coeffs)

    @cached_property
    def _integer_coeffs(self) -> tuple[int, ...]:
        return tuple(self.prime**e * u for e, u in self.coeffs)

    def value(self, x: Sequence[int]) -> int:
        d = self.degree
        return sum(c * xi**d for c, xi in zip(self._integer_coeffs, x))

    def residual_valuation(self, x: Sequence[int], cap: int) -> int:
        return int_valuation(self.value(x) % self.prime**cap, self.prime, cap)

    def level_profile(self) -> dict[int, int]:
        counts = {r: 0 for r in range(self.degree)}
        for e, _ in self.coeffs:
            counts[e] += 1
        return counts

    def to_zp(self, precision: int) -> ZpForm:
        n, d = self.n_vars, self.degree
        terms = {}
        for i, c in enumerate(self.integer_coeffs()):
            e = [0] * n
            e[i] = d
            terms[tuple(e)] = c
        return ZpForm.from_dict(self.prime, n, d, terms, precision)

    def literal(self) -> str:
        parts = []
        for i, c in enumerate(self.integer_coeffs()):
            parts.append(f"{c}*x{i + 1}^{self.degree}")
        return " + ".join(parts) + f" over Q_{self.prime}"


def normalise_integers(p: int, d: int, coeffs: Sequence[int]) -> tuple[DiagonalForm, list[int]]:
    """(form, shifts): c_i = p^(e_i + d*shift_i) u_i; a zero y maps back as x_i = y_i p^-shift_i."""
    out, shifts = [], []
    for c in coeffs:
        if c == 0:
            raise ValueError("zero coefficient: the form is trivially isotropic")
        v = vp(c, p)
        q, e = divmod(v, d)
        out.append((e, c // p**v))
        shifts.append(q)
    return DiagonalForm(p, d, tuple(out)), shifts


def check_oracle_contract(f: DiagonalForm) -> None:
    if f.degree not in (2, 3, 4):
        raise ValueError("oracle supports degrees 2, 3 and 4")
    if f.n_vars > MAX_ORACLE_VARS:
        raise ValueError(f"oracle supports at most {MAX_ORACLE_VARS} variables")
    if f.prime >= 50:
        raise ValueError("oracle supports primes below 50")


# ---------------------------------------------------------------------------
# Unit d-th powers


@lru_cache(maxsize=None)
def power_depth(p: int, d: int) -> int:
    """Least k0 such that the unit d-th powers mod p^M are a union of cosets of p^k0."""
    M = oracle_exponent(p, d)
    N = p**M
    powers = {pow(u, d, N) for u in range(1, N) if u % p}
    for k in range(1, M + 1):
        step = p**k
        if all((x + step) % N in powers for x in powers):
            return k
    return M


@lru_cache(maxsize=None)
def power_residues(p: int, d: int) -> tuple[int, ...]:
    """Unit d-th powers modulo p^k0."""
    k = power_depth(p, d)
    return tuple(sorted({pow(u, d, p**k) for u in range(1, p**k) if u % p}))


def unit_root(t: int, d: int, p: int, k: int) -> int:
    """A unit w with w^d = t mod p^k (t a unit d-th power residue)."""
    mod = p**k
    t %= mod
    base = min(k, 2 * vp(d, p) + 1)
    bm = p**base
    for w in range(1, bm):
        if w % p and pow(w, d, bm) == t % bm:
            break
    else:
        raise ValueError(f"{t} is not a {d}-th power mod {p}^{k}")
    if base == k:
        return w
    poly = UnivariatePadicPoly(p, k, (-t,) + (0,) * (d - 1) + (1,))
    if poly(w) % mod == 0:
        return w
    return hensel_lift_root(poly, w).root.residue


# ---------------------------------------------------------------------------
# Cyclic bitsets


def _mask(q: int) -> int:
    return (1 << q) - 1


def _fold(S: int, n: int, q: int) -> int:
    """Image of a subset of Z/n in Z/q (q | n)."""
    out = 0
    m = _mask(q)
    for i in range(0, n, q):
        out |= (S >> i) & m
    return out


def _tile(T: int, q: int, n: int) -> int:
    out = 0
    for i in range(0, n, q):
        out |= T << i
    return out


def _rotate(T: int, o: int, q: int) -> int:
    o %= q
    if not o:
        return T
    return ((T << o) | (T >> (q - o))) & _mask(q)


def _options(p, d, e, u, m, unit_only):
    """Value set of p^e u x^d mod p^m, as (a, step exponent, coset offsets)."""
    k0 = power_depth(p, d)
    res = power_residues(p, d)
    out = []
    a = 0
    while e + d * a < m:
        base = e + d * a
        s = min(base + k0, m)
        step = p**s
        offsets = sorted({(p**base * u * r) % step for r in res})
        out.append((a, s, offsets))
        if unit_only:
            break
        a += 1
    return out


@dataclass(frozen=True)
class OracleResult:
    solvable: bool
    witness: tuple[int, ...] | None = None
    pivot: int | None = None
    method: str = ""
    modulus_exponent: int = 0

    def __bool__(self) -> bool:
        return self.solvable


def _dp_pivot(f: DiagonalForm, i: int) -> tuple[int, ...] | None:
    p, d = f.prime, f.degree
    delta = vp(d, p) + f.coeffs[i][0]
    m = 2 * delta + 1
    N = p**m
    order = [i] + [j for j in range(f.n_vars) if j != i]
    stages = [1]  # bitset of reachable sums, starting from {0}
    opts = []
    for j in order:
        e, u = f.coeffs[j]
        o = _options(p, d, e, u, m, unit_only=(j == i))
        opts.append(o)
        S = stages[-1]
        new = 0 if j == i else S
        for _, s, offsets in o:
            q = p**s
            F = _fold(S, N, q)
            acc = 0
            for off in offsets:
                acc |= _rotate(F, off, q)
            new |= _tile(acc, q, N)
        stages.append(new)
    if not stages[-1] & 1:
        return None
    # backtrack from target 0
    x = [0] * f.n_vars
    y = 0
    for pos in range(len(order) - 1, -1, -1):
        j = order[pos]
        prev = stages[pos]
        e, u = f.coeffs[j]
        if j != i and (prev >> y) & 1:
            continue  # x_j = 0
        for a, s, offsets in opts[pos]:
            q = p**s
            hit = None
            for off in offsets:
                r = (y - off) % q
                for yp in range(r, N, q):
                    if (prev >> yp) & 1:
                        hit = yp
                        break
                if hit is not None:
                    break
            if hit is None:
                continue
            v = (y - hit) % N
            base = e + d * a
            k = m - base
            t = (v // p**base) * pow(u, -1, p**k) % p**k
            w = unit_root(t, d, p, k)
            x[j] = p**a * w
            y = hit
            break
        else:  # pragma: no cover - the forward pass guarantees a predecessor
            raise AssertionError("backtracking lost the path")
    assert y == 0
    return tuple(x)


def _lift_pivot(f: DiagonalForm, x: Sequence[int], i: int, precision: int) -> tuple[int, ...]:
    """Hensel-lift coordinate i of an approximate zero to precision."""
    p, d = f.prime, f.degree
    c = f.integer_coeffs()
    rest = sum(cj * xj**d for j, (cj, xj) in enumerate(zip(c, x)) if j != i)
    delta = vp(d, p) + f.coeffs[i][0]
    k = precision + delta
    poly = UnivariatePadicPoly(p, k, (rest,) + (0,) * (d - 1) + (c[i],))
    x = list(x)
    if poly(x[i]) % p**k:
        x[i] = hensel_lift_root(poly, x[i]).root.residue
    return tuple(x)


def _lift_level_zero(f: DiagonalForm, x: Sequence[int], i: int, precision: int) -> tuple[int, ...]:
    """Lift a zero mod p of one level's unit form; f is p^level times that form there."""
    p, d = f.prime, f.degree
    level = f.coeffs[i][0]
    units = [u for e, u in f.coeffs]
    rest = sum(units[j] * x[j] ** d for j in range(f.n_vars) if j != i and x[j] and f.coeffs[j][0] == level)
    poly = UnivariatePadicPoly(p, precision, (rest,) + (0,) * (d - 1) + (units[i],))
    x = list(x)
    if poly(x[i]) % p**precision:
        x[i] = hensel_lift_root(poly, x[i]).root.residue
    return tuple(x)


def _levels_solve(f: DiagonalForm) -> tuple[tuple[int, ...], int] | None:
    """Exact criterion for p not dividing d; returns (zero mod p, pivot) or None."""
    p, d = f.prime, f.degree
    for level in range(d):
        idx = [j for j, (e, _) in enumerate(f.coeffs) if e == level]
        if not idx:
            continue
        pt = _fp_diagonal_zero([f.coeffs[j][1] % p for j in idx], d, p)
        if pt is None:
            continue
        x = [0] * f.n_vars
        for j, v in zip(idx, pt):
            x[j] = v
        pivot = next(j for j in idx if x[j])
        return tuple(x), pivot
    return None


def _fp_diagonal_zero(units: Sequence[int], d: int, p: int) -> tuple[int, ...] | None:
    """Nontrivial zero of sum u_j x_j^d over F_p via a subset-sum over residues."""
    values = {}
    for x in range(1, p):
        values.setdefault(pow(x, d, p), x)
    n = len(units)
    # reach[k] maps residue -> (prev residue, x_k) for a path with some nonzero entry,
    # plus the trivial path kept separately.
    paths: dict[tuple[int, bool], tuple] = {(0, False): None}
    layers = []
    for u in units:
        nxt: dict[tuple[int, bool], tuple] = {}
        for (r, nz) in paths:
            nxt.setdefault((r, nz), ((r, nz), 0))
            for pw, x in values.items():
                key = ((r + u * pw) % p, True)
                nxt.setdefault(key, ((r, nz), x))
        layers.append(nxt)
        paths = nxt
    if (0, True) not in paths:
        return None
    out = [0] * n
    key = (0, True)
    for k in range(n - 1, -1, -1):
        prev, x = layers[k][key]
        out[k] = x
        key = prev
    return tuple(out)


def is_solvable_oracle(f: DiagonalForm, method: str = "auto", precision: int | None = None) -> OracleResult:
    """Decide whether f has a nontrivial zero over Q_p.

    On success the witness is an integer vector with a unit coordinate and
    f(witness) = 0 mod p^precision (default: the oracle modulus p^M).
    """
    check_oracle_contract(f)
    p, d = f.prime, f.degree
    M = f.modulus_exponent
    precision = M if precision is None else precision
    if method == "auto":
        method = "dp" if d % p == 0 else "levels"
    if method == "levels":
        if d % p == 0:
            raise ValueError("the level criterion needs p not dividing d")
        found = _levels_solve(f)
        if found is None:
            return OracleResult(False, method=method, modulus_exponent=1)
        x, i = found
        return OracleResult(True, _lift_level_zero(f, x, i, precision), i, method, 1)
    if method != "dp":
        raise ValueError(f"unknown oracle method {method!r}")
    if p**M > MAX_DP_BITS:
        raise ValueError(f"p^M = {p}^{M} is too large for the subset-sum oracle")
    # try pivots of small delta first: cheaper rings
    for i in sorted(range(f.n_vars), key=lambda j: f.coeffs[j][0]):
        x = _dp_pivot(f, i)
        if x is not None:
            return OracleResult(True, _lift_pivot(f, x, i, precision), i, method, M)
    return OracleResult(False, method=method, modulus_exponent=M)


def verify_zero(f: DiagonalForm, x: Sequence[int], precision: int) -> bool:
    """f(x) = 0 mod p^precision and some coordinate of x is a unit."""
    return any(xi % f.prime for xi in x) and f.value(x) % f.prime**precision == 0


# ---------------------------------------------------------------------------
# Constructive 2-adic solver


class NotDecided(RuntimeError):
    pass


class Item(NamedTuple):
    """A working coefficient 2^level * unit attached to a combination of variables.

    In item coordinates the form is sum 2^level_k unit_k y_k^4; a member (j, s)
    means the original variable x_j takes the value 2^s y.
    """

    level: int
    unit: int
    members: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SolverResult:
    vector: tuple[int, ...]
    method: str
    merges: tuple[tuple[int, int], ...] = ()


MAX_ROOT_BITS = 60


@lru_cache(maxsize=1 << 16)
def _fourth_root(a: int, bits: int) -> int:
    return fourth_root_2adic(PadicInt(2, bits, a)).residue


def _score(items: Sequence[Item]) -> tuple[int, int]:
    levels = [0, 0, 0, 0]
    for it in items:
        levels[it.level] += 1
    best = 0
    for r in range(4):
        b, c = levels[(r + 1) % 4], levels[(r + 2) % 4]
        best = max(best, b + 3 * c)
    return sum(1 for v in levels if v), best


def _assemble(n_vars: int, items: Sequence[Item], ys: Sequence[int]) -> tuple[int, ...]:
    """Map item values back to a primitive integer vector in the original variables."""
    coords: dict[int, tuple[int, int]] = {}
    for it, y in zip(items, ys):
        if not y:
            continue
        for j, s in it.members:
            coords[j] = (y, s)
    if not coords:
        raise ValueError("trivial vector")
    lo = min(s for _, s in coords.values())
    x = [0] * n_vars
    for j, (y, s) in coords.items():
        x[j] = y << (s - lo)
    v = min((c & -c).bit_length() - 1 for c in x if c)  # 2-adic valuation
    return tuple(c >> v for c in x)


def _pivot_root(items, ys, pivot, effective, bits) -> int | None:
    """Solve 2^L u_P y_P^4 = -S in Z_2 / 2^bits given the other y's; None if impossible."""
    mod = 1 << bits
    S = 0
    for k, (it, y) in enumerate(zip(items, ys)):
        if k != pivot and y:
            S += effective[k] * y**4
    cP = effective[pivot]
    L = int_valuation(cP, 2)
    u = cP >> L
    if S == 0 or int_valuation(S, 2) != L:
        return None
    A = (-(S >> L) * pow(u, -1, mod)) % mod
    if A % 16 != 1:
        return None
    return _fourth_root(A, bits)


def _effective(items: Sequence[Item], rotation: int) -> list[int]:
    """Coefficients after dividing the form by 2^rotation (lower levels get digit 2)."""
    out = []
    for it in items:
        e = it.level - rotation
        out.append((1 << e) * it.unit if e >= 0 else (1 << (e + 4)) * it.unit)
    return out


def _greedy_move(items: Sequence[Item], bits: int) -> list[int] | None:
    """Greedy digits when two items share a level and the other three levels occur."""
    for r in range(4):
        rot = [(it.level - r) % 4 for it in items]
        zeros = [k for k, l in enumerate(rot) if l == 0]
        if len(zeros) < 2 or not all(l in rot for l in (1, 2, 3)):
            continue
        picks = {l: rot.index(l) for l in (1, 2, 3)}
        i1, i2 = zeros[0], zeros[1]
        eff = _effective(items, r)
        digit = [1 if it.level >= r else 2 for it in items]  # lower levels pay a factor 2
        mod = 1 << bits
        inv = pow(eff[i1], -1, mod)
        c = [(v * inv) % mod for v in eff]
        ys = [0] * len(items)
        ys[i1], ys[i2] = 1, digit[i2]
        partial = 1 + c[i2]
        for l, bound in ((1, 4), (2, 8), (3, 16)):
            k = picks[l]
            if partial % bound:
                partial += c[k]
                ys[k] = digit[k]
            assert partial % bound == 0
        A = (-(partial - 1)) % mod
        assert A % 16 == 1
        ys[i1] = _fourth_root(A, bits)
        # y_i1 multiplies the pivot's true coefficient, which is eff[i1] / digit^4
        if digit[i1] != 1:
            ys[i1] *= digit[i1]
        return ys
    return None


def _pair_move(items: Sequence[Item], bits: int) -> list[int] | None:
    mod = 1 << bits
    stored = 1 << oracle_exponent(2, 4)  # units are only known to this modulus
    for i, j in itertools.combinations(range(len(items)), 2):
        a, b = items[i], items[j]
        if a.level != b.level:
            continue
        A = (-a.unit * pow(b.unit, -1, mod)) % mod
        if A % 16 == 1:
            ys = [0] * len(items)
            ys[i] = 1
            ys[j] = 1 if A % stored == 1 else _fourth_root(A, bits)
            return ys
    return None


def _digit_move(items: Sequence[Item], bits: int) -> list[int] | None:
    """Pivot search: other items take y in {0, 1} (or 2 below the pivot level).

    If a zero has a unit coordinate minimising e_i + 4 v(x_i), only these digits
    matter modulo 2^(e_i + 4), so this move is complete on an unmerged form.
    """
    n = len(items)
    for pivot in sorted(range(n), key=lambda k: items[k].level):
        L = items[pivot].level
        eff = [(1 << it.level) * it.unit for it in items]
        choices = [(0,) if k == pivot else ((0, 1, 2) if items[k].level < L else (0, 1)) for k in range(n)]
        for ys in itertools.product(*choices):
            ys = list(ys)
            ys[pivot] = 0
            root = _pivot_root(items, ys, pivot, eff, bits)
            if root is not None:
                ys[pivot] = root
                return ys
    return None


def _merge(items: Sequence[Item], i: int, j: int) -> list[Item]:
    a, b = items[i], items[j]
    total = a.unit + b.unit
    unit = total >> 1
    members = a.members + b.members
    level = a.level + 1
    if level == 4:
        level = 0
        members = tuple((v, s - 1) for v, s in members)
    merged = Item(level, unit, members)
    return [it for k, it in enumerate(items) if k not in (i, j)] + [merged]


def solve_2adic_diagonal_quartic(
    f: DiagonalForm, precision: int | None = None, budget: int = 64, fallback: bool = False
) -> SolverResult:
    """Constructive search for a zero of a 2-adic diagonal quartic.

    Moves, in order, at each node of a score-ordered search over shift merges:
    the greedy digit construction (two items on one level plus the three other
    levels), a same-level pair whose unit ratio is -1 mod 16, and a pivot digit
    search on the unmerged form. Raises NotDecided when no move succeeds within
    ``budget`` merge steps, unless ``fallback`` asks for the oracle's witness.
    """
    if f.prime != 2 or f.degree != 4:
        raise ValueError("the level solver handles 2-adic quartics")
    precision = f.modulus_exponent if precision is None else precision
    if not 1 <= precision <= f.modulus_exponent:
        raise ValueError(f"precision must lie in 1..{f.modulus_exponent}: units are stored to that modulus")
    base = [Item(e, u, ((j, 0),)) for j, (e, u) in enumerate(f.coeffs)]
    n = f.n_vars
    mod = 1 << precision

    def attempt(move, items, method, merges, depth):
        for bits in (min(precision + 4 * depth + 8, MAX_ROOT_BITS), MAX_ROOT_BITS):
            ys = move(items, bits)
            if ys is None:
                return None  # applicability never depends on the root precision
            x = tuple(c % mod for c in _assemble(n, items, ys))
            if verify_zero(f, x, precision):
                return SolverResult(x, method, tuple(merges))
        raise AssertionError(f"{method} move produced a vector that is not a zero")

    expanded = 0
    stack = [(base, [])]
    seen = set()
    while stack:
        items, merges = stack.pop()
        key = tuple(sorted((it.level, it.unit % 32) for it in items))
        if key in seen:
            continue
        seen.add(key)
        depth = -min(s for it in items for _, s in it.members)
        for move, name in ((_greedy_move, "greedy"), (_pair_move, "pair")):
            found = attempt(move, items, name, merges, depth)
            if found is not None:
                return found
        if expanded >= budget:
            continue
        children = []
        for i, j in itertools.combinations(range(len(items)), 2):
            a, b = items[i], items[j]
            if a.level == b.level and (a.unit - b.unit) % 4 == 0:
                child = _merge(items, i, j)
                children.append((_score(child), child, merges + [(i, j)]))
        expanded += len(children) > 0
        children.sort(key=lambda t: t[0])  # best last, popped first
        stack.extend((c, m) for _, c, m in children)
    if n <= 10:
        found = attempt(_digit_move, base, "digits", [], 0)
        if found is not None:
            return found
    if fallback:
        res = is_solvable_oracle(f, precision=precision)
        if res.solvable:
            return SolverResult(res.witness, "oracle")
    raise NotDecided("no solution found by level algorithm")


# ---------------------------------------------------------------------------
# Witnesses for phi_d(p)


def _levels(unit_lists):
    return tuple((e, u) for e, units in enumerate(unit_lists) for u in units)


PHI_WITNESSES: dict[tuple[int, int], DiagonalForm] = {
    (3, 2): DiagonalForm(2, 3, ((0, 1), (1, 1), (2, 1))),
    (3, 7): DiagonalForm(7, 3, _levels([(1, 2)] * 3)),
    (4, 3): DiagonalForm(3, 4, _levels([(1, 1)] * 4)),
    (4, 13): DiagonalForm(13, 4, _levels([(1, 1, 2)] * 4)),
    (4, 2): DiagonalForm(2, 4, ((0, 1),) * 15),
    (4, 5): DiagonalForm(5, 4, _levels([(1, 1, 1, 1)] * 4)),
}


def phi_witness(p: int, d: int, f: DiagonalForm) -> bool:
    """True iff f is anisotropic, so it shows phi_d(p) >= f.n_vars."""
    if (f.prime, f.degree) != (p, d):
        raise ValueError("witness form has the wrong prime or degree")
    return not is_solvable_oracle(f).solvable


def unit_class_reps(p: int, d: int) -> tuple[int, ...]:
    """Representatives of Z_p^* modulo d-th powers."""
    k0 = power_depth(p, d)
    mod = p**k0
    res = set(power_residues(p, d))
    reps, covered = [], set()
    for u in range(1, mod):
        if u % p == 0 or u in covered:
            continue
        reps.append(u)
        covered |= {u * r % mod for r in res}
    return tuple(reps)


def phi_upper_sweep(p: int, d: int, n_vars: int) -> list[DiagonalForm]:
    """Anisotropic diagonal forms in n_vars variables, one per multiset of coefficient types
    (level, unit modulo d-th powers); an empty list means phi_d(p) < n_vars."""
    reps = unit_class_reps(p, d)
    types = [(e, u) for e in range(d) for u in reps]
    bad = []
    for combo in itertools.combinations_with_replacement(types, n_vars):
        f = DiagonalForm(p, d, combo)
        if not is_solvable_oracle(f).solvable:
            bad.append(f)
    return bad


# ---------------------------------------------------------------------------
# Quartics composed from quadratic systems


class IsotropicError(ValueError):
    pass


def compose_lb_quartic(qs: Sequence[Form], Q: Sequence[int], precision: int | None = None) -> ZpForm:
    """F(x) = Q(q_1(x), .., q_4(x)) for Q = sum Q_k y_k^2 anisotropic over Q_p.

    The q_k are read as integer-coefficient quadratics (their stored residues).
    """
    if len(qs) != len(Q):
        raise ValueError("one quadratic per diagonal coefficient")
    p = qs[0].prime
    if not is_prime(p):
        raise ValueError("bad prime")
    if any(q.degree != 2 or q.prime != p or q.n_vars != qs[0].n_vars for q in qs):
        raise ValueError("need quadratic forms in a common set of variables")
    diag, _ = normalise_integers(p, 2, Q)
    if is_solvable_oracle(diag).solvable:
        raise IsotropicError("Q has a nontrivial zero over Q_p")
    m = qs[0].n_vars
    acc: dict[tuple[int, ...], int] = {}
    for coeff, q in zip(Q, qs):
        qd = q.as_dict()
        for (e1, c1), (e2, c2) in itertools.product(qd.items(), repeat=2):
            e = tuple(a + b for a, b in zip(e1, e2))
            acc[e] = acc.get(e, 0) + coeff * c1 * c2
    return ZpForm.from_dict(p, m, 4, acc, precision)


def primitive_zeros_mod(F: ZpForm, k: int) -> list[tuple[int, ...]]:
    """Primitive vectors x mod p^k with F(x) = 0 mod p^k (bounded search)."""
    p = F.prime
    mod = p**k
    out = []
    for x in itertools.product(range(mod), repeat=F.n_vars):
        if all(c % p == 0 for c in x):
            continue
        if F.value(x) % mod == 0:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# The finite family of 2-adic diagonal quartics with unit residues mod 32

QUARTIC_2ADIC_TYPES = tuple((e, u) for e in range(4) for u in range(1, 32, 2))


def canonical_2adic_quartic(coeffs: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Canonical orbit key of sum 2^e_i u_i x_i^4 under 2-power and unit scaling of the form.

    Dividing the form by 2^e_k u_k moves coefficient k to (0, 1); exponents wrap
    mod 4 because 2^4 x^4 = (2x)^4. Units only matter modulo fourth powers,
    which are the units = 1 mod 16, so residues mod 32 are carried exactly.
    The key is the least sorted coefficient list over all choices of k.
    """
    best = None
    for ek, uk in coeffs:
        inv = pow(uk, -1, 32)
        key = tuple(sorted(((e - ek) % 4, u * inv % 32) for e, u in coeffs))
        if best is None or key < best:
            best = key
    return best


def quartic_2adic_orbit_representatives(max_vars: int) -> list[tuple[tuple[int, int], ...]]:
    """Canonical representatives of every form in the family with 1..max_vars variables."""
    reps = set()
    for n in range(1, max_vars + 1):
        for rest in itertools.combinations_with_replacement(QUARTIC_2ADIC_TYPES, n - 1):
            reps.add(canonical_2adic_quartic(((0, 1),) + rest))
    return sorted(reps, key=lambda r: (len(r), r))
