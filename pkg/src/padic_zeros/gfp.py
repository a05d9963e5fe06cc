"""Prime-field scalars: powers, Legendre symbols and k-th power residue classes."""

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

# Every computation in the package stays below this bound.
SWEEP_PRIME_LIMIT = 50


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def check_sweep_prime(p: int) -> int:
    check_prime(p)
    if p >= SWEEP_PRIME_LIMIT:
        raise ValueError(f"prime {p} is outside the supported range p < {SWEEP_PRIME_LIMIT}")
    return p


def mod_pow(base: int, exp: int, p: int) -> int:
    """Return base**exp mod p; exp == 0 gives 1, also for base 0."""
    if exp < 0:
        raise ValueError("negative exponent")
    return pow(base, exp, p)


def legendre_symbol(a: int, p: int) -> int:
    if p == 2:
        raise ValueError("Legendre symbol needs an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


@lru_cache(maxsize=None)
def discrete_log_table(p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(log, exp) tables for the multiplicative group; log[0] is unused (-1)."""
    g = primitive_root(p)
    exp = [1] * (p - 1)
    for i in range(1, p - 1):
        exp[i] = exp[i - 1] * g % p
    log = [-1] * p
    for i, v in enumerate(exp):
        log[v] = i
    return tuple(log), tuple(exp)


@dataclass(frozen=True)
class ResidueClassTable:
    """Cosets of the k-th powers inside the unit group of F_p."""

    prime: int
    power: int
    classes: tuple[int, ...]
    membership: dict[int, int] = field(compare=False, repr=False)

    def class_of(self, a: int) -> int:
        return self.membership[a % self.prime]

    @property
    def powers(self) -> frozenset[int]:
        return frozenset(u for u, c in self.membership.items() if c == 0)


@lru_cache(maxsize=None)
def power_classes(p: int, k: int) -> ResidueClassTable:
    check_prime(p)
    if k < 1:
        raise ValueError("k must be positive")
    subgroup = sorted({pow(u, k, p) for u in range(1, p)})
    membership: dict[int, int] = {}
    classes = []
    for rep in range(1, p):
        if rep in membership:
            continue
        idx = len(classes)
        classes.append(rep)
        for h in subgroup:
            membership[rep * h % p] = idx
    assert len(classes) == gcd(k, p - 1)
    return ResidueClassTable(p, k, tuple(classes), membership)


def least_nonresidue(p: int) -> int:
    for a in range(2, p):
        if legendre_symbol(a, p) == -1:
            return a
    raise ValueError(f"no quadratic non-residue mod {p}")
