"""Truncated p-adic integers, valuations, reduction and Hensel lifting.

Values are plain Python integers known modulo p^precision. Lifting works on
exact integer representatives and only reduces at the end, so the Newton
division by a non-unit derivative never loses information.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .forms import Form, gradient
from .gfp import check_prime

# Keep every residue inside a signed 64-bit word.
PRECISION_CAP_BITS = 63
DEFAULT_PRECISION = {2: 12}
DEFAULT_ODD_PRECISION = 8


def default_precision(p: int) -> int:
    return DEFAULT_PRECISION.get(p, DEFAULT_ODD_PRECISION)


@lru_cache(maxsize=None)
def max_precision(p: int) -> int:
    k = 1
    while p ** (k + 1) < 2**PRECISION_CAP_BITS:
        k += 1
    return k


class AtLeast(int):
    """A valuation that is only known to be at least this value (the element is 0)."""

    def __repr__(self) -> str:
        return f">={int(self)}"

    __str__ = __repr__


def int_valuation(a: int, p: int, cap: int | None = None) -> int:
    """v_p(a) for an exact integer; 0 gives AtLeast(cap) (cap required then)."""
    if a == 0:
        if cap is None:
            raise ValueError("valuation of 0 needs a precision cap")
        return AtLeast(cap)
    v = 0
    while a % p == 0:
        a //= p
        v += 1
        if cap is not None and v >= cap:
            return AtLeast(cap)
    return v


@dataclass(frozen=True)
class PadicInt:
    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        if self.precision > max_precision(self.prime):
            raise ValueError(f"precision {self.precision} exceeds the 64-bit cap for p={self.prime}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @classmethod
    def of(cls, value: int, p: int, precision: int | None = None) -> PadicInt:
        return cls(p, default_precision(p) if precision is None else precision, value)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if other.prime != self.prime:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, int):
            return PadicInt(self.prime, self.precision, other)
        return NotImplemented

    def _combine(self, other, op) -> PadicInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        k = min(self.precision, o.precision)
        return PadicInt(self.prime, k, op(self.residue, o.residue))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(self.prime, self.precision, -self.residue)

    def __pow__(self, e: int):
        return PadicInt(self.prime, self.precision, pow(self.residue, e, self.modulus))

    def is_unit(self) -> bool:
        return self.residue % self.prime != 0

    def inverse(self) -> PadicInt:
        if not self.is_unit():
            raise ZeroDivisionError("not a p-adic unit")
        return PadicInt(self.prime, self.precision, pow(self.residue, -1, self.modulus))

    def with_precision(self, k: int) -> PadicInt:
        if k > self.precision:
            raise ValueError("cannot raise the precision of a truncated value")
        return PadicInt(self.prime, k, self.residue)


def valuation(a: PadicInt) -> int:
    """Largest e < precision with p^e | a, or AtLeast(precision) when a is 0."""
    return int_valuation(a.residue, a.prime, a.precision)


def theta(a: PadicInt) -> int:
    return a.residue % a.prime


# ---------------------------------------------------------------------------
# Univariate lifting


class HenselConditionError(ValueError):
    def __init__(self, value_valuation: int, derivative_valuation: int):
        self.value_valuation = value_valuation
        self.derivative_valuation = derivative_valuation
        super().__init__(
            f"Hensel condition fails: v(f(x0)) = {value_valuation} is not greater than "
            f"2*v(f'(x0)) = {2 * derivative_valuation}"
        )


@dataclass(frozen=True)
class UnivariatePadicPoly:
    """sum_i coeffs[i] * x^i over Z_p, coefficients known mod p^precision."""

    prime: int
    precision: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.prime)
        m = self.prime**self.precision
        object.__setattr__(self, "coeffs", tuple(int(c) % m for c in self.coeffs))

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __call__(self, x: int) -> int:
        """Exact integer value at an integer point (no reduction)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> UnivariatePadicPoly:
        return UnivariatePadicPoly(
            self.prime, self.precision, tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0,)
        )


@dataclass(frozen=True)
class LiftCertificate:
    root: PadicInt
    residual_valuation: int
    derivative_valuation: int
    start_valuation: int
    iterations: int


def hensel_lift_root(f: UnivariatePadicPoly, x0: PadicInt | int) -> LiftCertificate:
    """Newton iteration from x0 under the strict condition v(f(x0)) > 2 v(f'(x0))."""
    p, k = f.prime, f.precision
    x = x0.residue if isinstance(x0, PadicInt) else int(x0)
    df = f.derivative()
    e = int_valuation(f(x) % p**k, p, k)
    delta = int_valuation(df(x) % p**k, p, k)
    if isinstance(delta, AtLeast) or e <= 2 * delta:
        raise HenselConditionError(int(e), int(delta))
    # Every Newton iterate keeps v(f'(x)) = delta, so p^(k + delta) is enough room.
    work = p ** (k + delta)
    limit = math.ceil(math.log2(k)) + 2 if k > 1 else 2
    iterations = 0
    while True:
        fx = f(x)
        if fx % p**k == 0:
            break
        if iterations >= limit:
            raise RuntimeError("Newton iteration did not converge within the expected bound")
        dfx = df(x)
        unit = (dfx // p**delta) % work
        step = (fx // p**delta) * pow(unit, -1, work)
        x = (x - step) % work
        iterations += 1
    root = PadicInt(p, k, x)
    return LiftCertificate(root, int_valuation(f(x) % p**k, p, k), int(delta), int(e), iterations)


FOURTH_ROOT_ERROR = "not a fourth power"


def fourth_root_2adic(a: PadicInt) -> PadicInt:
    """x with x^4 = a mod 2^precision, for a unit a = 1 mod 16."""
    if a.prime != 2:
        raise ValueError("fourth_root_2adic works over Z_2")
    k = a.precision
    if k < 4:
        raise ValueError("need precision at least 4 to test a = 1 mod 16")
    if a.residue % 16 != 1:
        raise ValueError(f"{FOURTH_ROOT_ERROR}: {a.residue} is not 1 mod 16")
    # With x = 1 the Hensel inequality is the boundary case 4 > 4; one manual step
    # x = 1 + (a-1)/4 raises v(x^4 - a) to at least 5.
    x = 1 + (a.residue - 1) // 4
    f = UnivariatePadicPoly(2, k, (-a.residue, 0, 0, 0, 1))
    if f(x) % 2**k == 0:
        return PadicInt(2, k, x)
    return hensel_lift_root(f, x).root


# ---------------------------------------------------------------------------
# Forms over Z_p


@dataclass(frozen=True)
class ZpForm:
    """A homogeneous form with integer coefficients, read in Z_p / p^precision."""

    prime: int
    n_vars: int
    degree: int
    terms: tuple[tuple[tuple[int, ...], int], ...]
    precision: int

    @classmethod
    def from_dict(cls, p: int, n_vars: int, degree: int, coeffs: Mapping, precision: int | None = None):
        k = default_precision(p) if precision is None else precision
        m = p**k
        terms = []
        for e, c in coeffs.items():
            e = tuple(e)
            if len(e) != n_vars or sum(e) != degree:
                raise ValueError(f"monomial {e} does not fit degree {degree} in {n_vars} variables")
            if c % m:
                terms.append((e, c % m))
        return cls(p, n_vars, degree, tuple(sorted(terms)), k)

    @classmethod
    def lift(cls, f: Form, precision: int | None = None) -> ZpForm:
        return cls.from_dict(f.prime, f.n_vars, f.degree, f.as_dict(), precision)

    def reduce(self) -> Form:
        return Form.from_dict(self.prime, self.n_vars, self.degree, dict(self.terms))

    def value(self, x: Sequence[int]) -> int:
        total = 0
        for e, c in self.terms:
            t = c
            for xi, ei in zip(x, e):
                t *= xi**ei
            total += t
        return total

    def restrict(self, x: Sequence[int], j: int) -> UnivariatePadicPoly:
        """The univariate polynomial t -> F(x with coordinate j replaced by t)."""
        coeffs = [0] * (self.degree + 1)
        for e, c in self.terms:
            t = c
            for i, (xi, ei) in enumerate(zip(x, e)):
                if i != j:
                    t *= xi**ei
            coeffs[e[j]] += t
        return UnivariatePadicPoly(self.prime, self.precision, tuple(coeffs))


class SingularPointError(ValueError):
    pass


def lift_nonsingular_point(F: ZpForm, point: Sequence[int]) -> tuple[PadicInt, ...]:
    """Lift a non-singular zero of theta(F) to x with F(x) = 0 mod p^precision."""
    p = F.prime
    xbar = [c % p for c in point]
    reduced = F.reduce()
    if F.value(xbar) % p:
        raise ValueError("point is not a zero modulo p")
    grad = gradient(reduced, xbar)
    j = next((i for i, g in enumerate(grad) if g), None)
    if j is None:
        raise SingularPointError(f"{tuple(xbar)} is a singular zero modulo {p}")
    x = list(xbar)
    if F.value(x) % p**F.precision:
        x[j] = hensel_lift_root(F.restrict(x, j), x[j]).root.residue
    return tuple(PadicInt(p, F.precision, c) for c in x)


def padic_zero_from_residue(F: ZpForm) -> tuple[PadicInt, ...] | None:
    """Hensel pipeline: first non-singular zero of theta(F), lifted; None if there is none."""
    from .fpsearch import first_nonsingular_zero

    pt = first_nonsingular_zero(F.reduce())
    if pt is None:
        return None
    return lift_nonsingular_point(F, pt)


def mcoe_zero(a: int, b_unit: int, s: int, c: int, d: int, p: int, precision: int | None = None):
    """Zero of a x^d + p^s b' x y^(d-1) + c y^d with s < 0 and unit b'.

    After scaling by p^-s the reduction is b' x y^(d-1), non-singular at (0, 1);
    the returned pair (alpha, 1) satisfies the scaled equation mod p^precision.
    """
    if s >= 0:
        raise ValueError("the middle coefficient must have negative valuation")
    if b_unit % p == 0:
        raise ValueError("b' must be a unit")
    k = default_precision(p) if precision is None else precision
    scale = p ** (-s)
    g = UnivariatePadicPoly(p, k, (c * scale, b_unit) + (0,) * (d - 2) + (a * scale,))
    return hensel_lift_root(g, 0).root, PadicInt(p, k, 1)
