"""Exact bound chains for v_4(p) via quasi-diagonalisation.

The engine works with system profiles (r_d, ..., r_1): the number of forms of
each degree in a system over Q_p. One Wooley step removes a top-degree form at
the cost of phi_d(p) variables and adds lower-degree forms with binomial
multiplicities; iterating down to quadratics leaves a beta(r; Q_p) term, for
which the tabulated upper bounds on quadratic systems are used. Every chain
records a replayable trace.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .gfp import check_prime

INT64_MAX = 2**63 - 1
WOOLEY_GENERAL = 4 ** (2**4)  # d^(2^d) at d = 4
SCHUUR_PRIME = 11  # beta(3; Q_p) = 12 from this prime on
# Known prime threshold p(d) past which d^2 + 1 variables always suffice.
# Far too large to evaluate; kept for reference only.
GENERAL_TOWER = "2^(2^(2^(2^(2^(d^(11^(4d)))))))"


def checked(x: int | Fraction) -> int:
    """Exact integer inside the signed 64-bit range, else an error."""
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ArithmeticError(f"{x} is not an integer")
        x = x.numerator
    if abs(x) > INT64_MAX:
        raise OverflowError(f"{x} leaves the 64-bit range")
    return int(x)


# ---------------------------------------------------------------------------
# phi and beta tables


def phi(d: int, p: int) -> int:
    """Largest number of variables of an anisotropic diagonal form of degree d over Q_p."""
    check_prime(p)
    if d == 3:
        if p == 3:
            return 4
        return 6 if p % 3 == 1 else 3
    if d == 4:
        return {2: 15, 5: 16, 13: 12, 29: 12}.get(p, 8)
    raise ValueError("phi is tabulated for degrees 3 and 4")


_BETA_SMALL = {1: 4, 2: 8, 3: 16, 4: 24, 5: 40, 6: 56}
_BETA_LARGE = {1: 4, 2: 8, 3: 12, 4: 24, 5: 32, 6: 56}


def beta_table_value(r: int, p: int) -> int:
    """Tabulated upper bound for beta(r; Q_p) (exact for r <= 2, and r = 3 when p >= 11)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return 0
    if p < SCHUUR_PRIME:
        if r in _BETA_SMALL:
            return _BETA_SMALL[r]
        return 2 * r * r - 14 if r % 2 else 2 * r * r - 16
    if r in _BETA_LARGE:
        return _BETA_LARGE[r]
    if r % 3 == 1:
        return 2 * r * r - 2 * r - 12
    return 2 * r * r - 2 * r - 8


def beta_upper(r: int, p: int, m: int = 0) -> int:
    """Upper bound for beta(r, m; Q_p): no common linear zero space of projective dimension m."""
    check_prime(p)
    if m < 0:
        raise ValueError("m must be non-negative")
    return checked(beta_table_value(r, p) + (r + 1) * m)


# Rewrite rules for regenerating the beta table from its anchors.

def rule_df(beta: Callable[[int], int], r: int) -> int:
    """beta(r) <= 8 + 2 beta(r-2), from the u-invariant 8 of Q_p(X)."""
    return 8 + 2 * beta(r - 2)


def rule_df1(beta: Callable[[int], int], r: int) -> int:
    """beta(r) <= beta(r-2, 8) <= beta(r-2) + 8(r-1)."""
    return beta(r - 2) + 8 * (r - 1)


def rule_leep_martin(beta: Callable[[int], int], r: int, k: int) -> int:
    """beta(r) <= beta(r-k, beta(k)) <= beta(r-k) + (r-k+1) beta(k)."""
    return beta(r - k) + (r - k + 1) * beta(k)


def regenerate_beta(p: int, r_max: int, max_k: int | None = None) -> dict[int, int]:
    """Rebuild beta bounds up to r_max from the exact anchors by taking the best rule at each r."""
    anchors = {1: 4, 2: 8}
    if p >= SCHUUR_PRIME:
        anchors[3] = 12
    table: dict[int, int] = dict(anchors)
    get = table.__getitem__
    for r in range(3, r_max + 1):
        if r in anchors:
            continue
        cands = [rule_df(get, r), rule_df1(get, r)]
        top = r - 1 if max_k is None else min(r - 1, max_k)
        cands += [rule_leep_martin(get, r, k) for k in range(1, top + 1)]
        table[r] = min(cands)
    return {r: table[r] for r in range(1, r_max + 1)}


# ---------------------------------------------------------------------------
# Profiles and traces


@dataclass(frozen=True)
class SystemProfile:
    """Counts (r_d, ..., r_1) of forms of each degree, top degree first."""

    prime: int
    counts: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.prime)
        if not self.counts:
            raise ValueError("need at least one degree")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def degree(self) -> int:
        return len(self.counts)

    def count(self, j: int) -> int:
        """Number of forms of degree j."""
        return self.counts[self.degree - j]


@dataclass(frozen=True)
class TraceStep:
    rule: str
    args: tuple
    value: object
    note: str = ""


@dataclass
class BoundTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def add(self, rule: str, args: tuple, value, note: str = ""):
        self.steps.append(TraceStep(rule, tuple(args), value, note))
        return value

    @property
    def final(self) -> int:
        return self.steps[-1].value

    def replay(self) -> int:
        """Recompute every step from its recorded arguments; raises on any mismatch."""
        for st in self.steps:
            got = RULES[st.rule](*st.args)
            if got != st.value:
                raise AssertionError(f"step {st.rule}{st.args} gave {got}, trace says {st.value}")
        return self.final

    def as_records(self) -> list[dict]:
        return [
            {"rule": s.rule, "args": [_jsonable(a) for a in s.args], "value": _jsonable(s.value), "note": s.note}
            for s in self.steps
        ]

    def format(self) -> str:
        lines = []
        for s in self.steps:
            args = ", ".join(str(_jsonable(a)) for a in s.args)
            lines.append(f"  {s.rule}({args}) = {_jsonable(s.value)}" + (f"    [{s.note}]" if s.note else ""))
        return "\n".join(lines)


def _jsonable(v):
    if isinstance(v, SystemProfile):
        return {"prime": v.prime, "counts": list(v.counts)}
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


# ---------------------------------------------------------------------------
# Recursion steps


def _step_counts(s: SystemProfile, ph: int) -> tuple[int, ...]:
    d = s.degree
    if s.count(d) < 1:
        raise ValueError("need at least one form of top degree")
    out = []
    for j in range(d, 0, -1):
        if j == d:
            out.append(s.count(d) - 1)
        else:
            out.append(checked(sum(s.count(i) * comb(ph + i - j - 1, i - j) for i in range(j, d + 1))))
    return tuple(out)


def wooley_step(s: SystemProfile) -> tuple[SystemProfile, int]:
    """V_d(r) <= phi_d(p) + V_d(r'); returns (r', phi_d(p))."""
    ph = phi(s.degree, s.prime)
    return SystemProfile(s.prime, _step_counts(s, ph)), ph


def wooley_step_improved(s: SystemProfile) -> SystemProfile:
    """V_d(r) <= V_d(r'): the same profile map without the additive phi."""
    return SystemProfile(s.prime, _step_counts(s, phi(s.degree, s.prime)))


def strip_linear(s: SystemProfile) -> tuple[SystemProfile, int]:
    """V_d(.., r_2, r_1) = V_d(.., r_2, 0) + r_1."""
    return SystemProfile(s.prime, s.counts[:-1] + (0,)), s.count(1)


def _fr(*xs):
    return [Fraction(x) for x in xs]


def quadratic_count(a: int, b: int, psi: int, variant: str) -> int:
    a, b, psi = _fr(a, b, psi)
    if variant in ("med3", "med4"):
        return checked(a * (a + 1) / 2 * psi + b)
    if variant == "med5":
        return checked((a - 1) * (a + 2) / 2 * psi + b)
    raise ValueError(f"unknown cubic chain {variant!r}")


def cubic_constant(a: int, b: int, c: int, psi: int, variant: str) -> int:
    """The part of the cubic-chain bound that does not involve beta."""
    a, b, c, psi = _fr(a, b, c, psi)
    if variant in ("med3", "med4"):
        t = a * (a + 1) / 2 * psi * (psi + 1) / 2 + a * (a * a - 1) / 3 * psi**2 + a * b * psi + c
        if variant == "med3":
            t += a * psi
        return checked(t)
    if variant == "med5":
        bp = (a - 1) * (a + 2) / 2 * psi + b
        t = (
            9 * (bp + 1)
            + (a - 1) * (a + 2) / 2 * psi * (psi + 1) / 2
            + (a - 1) * (a - 2) * (2 * a + 3) / 6 * psi**2
            + (a - 1) * b * psi
            + c
        )
        return checked(t)
    raise ValueError(f"unknown cubic chain {variant!r}")


def _beta(r, p):
    return beta_upper(r, p)


def _add(*xs):
    return checked(sum(xs))


def _wooley(counts, p):
    nxt, ph = wooley_step(SystemProfile(p, counts))
    return nxt.counts, ph


def _wooley_improved(counts, p):
    return wooley_step_improved(SystemProfile(p, counts)).counts


RULES: dict[str, Callable] = {
    "phi": phi,
    "beta": _beta,
    "wooley-step": _wooley,
    "wooley-step-improved": _wooley_improved,
    "quadratic-count": quadratic_count,
    "cubic-constant": cubic_constant,
    "sum": _add,
    "power": pow,
}


def v3_bound(a: int, b: int, c: int, p: int, variant: str = "med5", trace: BoundTrace | None = None):
    """Bound V_3(a, b, c; p) by a closed-form cubic chain.

    med3: Wooley steps all the way; med4: steps without the additive psi;
    med5: as med4 but starting from V_3(1, b, 0) <= beta(b) + 9(b + 1).
    """
    if a < 1:
        raise ValueError("need at least one cubic form")
    trace = BoundTrace() if trace is None else trace
    psi = trace.add("phi", (3, p), phi(3, p), "psi = phi_3(p)")
    q = trace.add("quadratic-count", (a, b, psi, variant), quadratic_count(a, b, psi, variant))
    bq = trace.add("beta", (q, p), beta_upper(q, p), "quadratic systems")
    k = trace.add("cubic-constant", (a, b, c, psi, variant), cubic_constant(a, b, c, psi, variant))
    total = trace.add("sum", (bq, k), checked(bq + k), f"V_3 chain {variant}")
    return total, trace


V4_METHODS = ("med1", "improved", "hybrid")


def v4_bound(p: int, method: str = "med1"):
    """Upper bound for v_4(p) with its trace.

    med1: basic Wooley step then the cubic chain with psi terms;
    improved: for p = 2, V_3(5, 21, 56; 2) followed by the beta-start chain;
    otherwise the improved step followed by the same chain;
    hybrid: 16 + beta(8) for p != 2, 5 and 40 + beta(12) for p = 5.
    """
    check_prime(p)
    trace = BoundTrace()
    if method == "med1":
        counts, ph = trace.add("wooley-step", ((1, 0, 0, 0), p), _wooley((1, 0, 0, 0), p), "quartic step")
        _, a, b, c = counts
        v3, _ = v3_bound(a, b, c, p, "med3", trace)
        trace.add("sum", (ph, v3), checked(ph + v3), "v_4 via basic step")
    elif method == "improved":
        if p == 2:
            # Orthogonal vectors to six vectors plus one near-orthogonal vector:
            # 5 cubic, 21 quadratic and 56 linear constraints.
            a, b, c = 5, 21, 56
        else:
            counts = trace.add("wooley-step-improved", ((1, 0, 0, 0), p), _wooley_improved((1, 0, 0, 0), p))
            _, a, b, c = counts
        v3_bound(a, b, c, p, "med5", trace)
    elif method == "hybrid":
        if p == 2:
            raise ValueError("the hybrid bound needs p != 2")
        if p == 5:
            bq = trace.add("beta", (12, p), beta_upper(12, p))
            trace.add("sum", (40, bq), checked(40 + bq), "v_4(5) <= 40 + beta(12)")
        else:
            bq = trace.add("beta", (8, p), beta_upper(8, p))
            trace.add("sum", (16, bq), checked(16 + bq), "v_4(p) <= 16 + beta(8)")
    else:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(V4_METHODS)}")
    return trace.final, trace


def med1_closed_form(p: int) -> tuple[int, int, int]:
    """(quadratic count, constant, total) of the one-line basic-step formula."""
    ph, ps = Fraction(phi(4, p)), Fraction(phi(3, p))
    q = checked(ph * (ph + 1) * (ps + 1) / 2)
    const = checked(
        ph * (ph**2 + 3 * ph + 8) / 6
        + ps * ph * (2 * ph**2 + 3 * ph + 5) / 4
        + ps**2 * ph * (4 * ph**2 + 3 * ph - 1) / 12
    )
    return q, const, checked(beta_upper(q, p) + const)


def improved_closed_form(p: int) -> int:
    """The one-line formula for the improved step followed by the med4 chain."""
    ph, ps = Fraction(phi(4, p)), Fraction(phi(3, p))
    q = checked(ph * (ph + 1) * (ps + 1) / 2)
    const = checked(
        ph * (ph**2 + 3 * ph + 2) / 6
        + ps * ph * (2 * ph**2 + 3 * ph + 1) / 4
        + ps**2 * ph * (4 * ph**2 + 3 * ph - 1) / 12
    )
    return checked(beta_upper(q, p) + const)


def orthogonality_constraints(k: int) -> tuple[int, int, int]:
    """(cubic, quadratic, linear) constraint counts for a vector orthogonal to k vectors."""
    return k, k * (k + 1) // 2, k * (k + 1) * (k + 2) // 6


def representative_primes() -> list[int]:
    """Primes below 50: every (phi_4, phi_3, beta-class) combination occurs among them."""
    return [p for p in range(2, 50) if all(p % q for q in range(2, p))]


@dataclass(frozen=True)
class TableRow:
    name: str
    value: int
    detail: str


def bound_table() -> list[TableRow]:
    rows: list[TableRow] = [TableRow("v4 general d^(2^d)", WOOLEY_GENERAL, "4^16")]
    med = max(v4_bound(p, "med1")[0] for p in representative_primes())
    rows.append(TableRow("v4 basic-step maximum over p", med, "worst prime is 13"))
    for p in (2, 5, 13):
        q, const, total = med1_closed_form(p)
        rows.append(TableRow(f"quadratic count p={p}", q, "phi(phi+1)(psi+1)/2"))
        rows.append(TableRow(f"constant p={p}", const, "basic step"))
        rows.append(TableRow(f"beta({q}) p={p}", beta_upper(q, p), "tabulated bound"))
        rows.append(TableRow(f"v4({p}) basic step", total, "basic step"))
    rows.append(TableRow("v4(13) improved", v4_bound(13, "improved")[0], "improved step + beta start"))
    rows.append(TableRow("v4(2) improved", v4_bound(2, "improved")[0], "V_3(5,21,56;2) + beta start"))
    for p in (3, 7, 5, 11):
        rows.append(TableRow(f"v4({p}) hybrid", v4_bound(p, "hybrid")[0], "hybrid"))
    rows.append(TableRow("beta(7) p<11", beta_upper(7, 3), "tabulated bound"))
    rows.append(TableRow("beta(8) p<11", beta_upper(8, 3), "tabulated bound"))
    rows.append(TableRow("beta(8) p>=11", beta_upper(8, 11), "tabulated bound"))
    return rows


def format_table(rows: Sequence[TableRow]) -> str:
    width = max(len(r.name) for r in rows)
    return "\n".join(f"{r.name:<{width}}  {r.value:>10}  {r.detail}" for r in rows)
