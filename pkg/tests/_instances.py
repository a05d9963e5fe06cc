"""Random Hensel-lifting instances shared by the padic and acceptance tests."""

import random

from padic_zeros.padic import AtLeast, UnivariatePadicPoly, int_valuation


def random_lift_instances(p, n, seed):
    """(f, x0): f has a root mod p^k near x0, and x0 satisfies v(f(x0)) > 2 v(f'(x0))."""
    rng = random.Random(seed)
    k = 12 if p == 2 else 8
    out = []
    while len(out) < n:
        deg = rng.randint(1, 6)
        coeffs = [rng.randrange(p**k) for _ in range(deg + 1)]
        x0 = rng.randrange(p**k)
        f = UnivariatePadicPoly(p, k, coeffs)
        # shift the constant so that x0 is a root mod p^k
        c0 = (coeffs[0] - f(x0)) % p**k
        f = UnivariatePadicPoly(p, k, [c0] + coeffs[1:])
        # move the start point by a multiple of p^(delta+1) to make the search non-trivial
        df = f.derivative()
        dv = int_valuation(df(x0) % p**k, p, k)
        if isinstance(dv, AtLeast) or 2 * dv + 1 >= k:
            continue
        start = (x0 + p ** (dv + 1) * rng.randrange(1, p**2)) % p**k
        e = int_valuation(f(start) % p**k, p, k)
        if e <= 2 * dv:
            continue
        out.append((f, start))
    return out
