"""Homogeneous forms over F_p with sparse exponent-vector terms.

Terms are kept sorted by descending exponent tuple (graded lex, since every
monomial has the same total degree), so two forms are equal exactly when
their term tuples are equal.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .gfp import check_prime, discrete_log_table

Exponents = tuple[int, ...]

SHORT_NAMES = ("x", "y", "z", "w")


@dataclass(frozen=True)
class Form:
    prime: int
    n_vars: int
    degree: int
    terms: tuple[tuple[Exponents, int], ...]

    def __post_init__(self):
        for exps, c in self.terms:
            if len(exps) != self.n_vars or sum(exps) != self.degree:
                raise ValueError(f"monomial {exps} does not fit a degree-{self.degree} form in {self.n_vars} variables")
            if not 0 < c < self.prime:
                raise ValueError(f"coefficient {c} is not a nonzero residue mod {self.prime}")

    @classmethod
    def from_dict(cls, p: int, n_vars: int, degree: int, coeffs: Mapping[Exponents, int]) -> Form:
        check_prime(p)
        acc: dict[Exponents, int] = {}
        for exps, c in coeffs.items():
            exps = tuple(int(e) for e in exps)
            acc[exps] = (acc.get(exps, 0) + c) % p
        terms = tuple(sorted(((e, c) for e, c in acc.items() if c), reverse=True))
        return cls(p, n_vars, degree, terms)

    @classmethod
    def parse(cls, text: str, n_vars: int | None = None) -> Form:
        return parse_form(text, n_vars)

    def as_dict(self) -> dict[Exponents, int]:
        return dict(self.terms)

    def coeff(self, exps: Exponents) -> int:
        return self.as_dict().get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_diagonal(self) -> bool:
        return all(max(e) == self.degree for e, _ in self.terms)

    def scale(self, a: int) -> Form:
        return Form.from_dict(self.prime, self.n_vars, self.degree, {e: a * c for e, c in self.terms})

    def __add__(self, other: Form) -> Form:
        if (self.prime, self.n_vars, self.degree) != (other.prime, other.n_vars, other.degree):
            raise ValueError("forms are not compatible")
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return Form.from_dict(self.prime, self.n_vars, self.degree, acc)

    def permute(self, perm: Sequence[int]) -> Form:
        """Variable i of the result is variable perm[i] of self."""
        inv = [0] * self.n_vars
        for i, j in enumerate(perm):
            inv[j] = i
        out = {}
        for exps, c in self.terms:
            new = [0] * self.n_vars
            for j, e in enumerate(exps):
                new[inv[j]] = e
            out[tuple(new)] = c
        return Form.from_dict(self.prime, self.n_vars, self.degree, out)

    def literal(self) -> str:
        return format_form(self)

    def __str__(self) -> str:
        return format_form(self)


def monomial(n_vars: int, *powers: tuple[int, int]) -> Exponents:
    exps = [0] * n_vars
    for var, e in powers:
        exps[var] += e
    return tuple(exps)


def variable_names(n_vars: int) -> list[str]:
    if n_vars <= len(SHORT_NAMES):
        return list(SHORT_NAMES[:n_vars])
    return [f"x{i + 1}" for i in range(n_vars)]


def format_form(f: Form) -> str:
    names = variable_names(f.n_vars)
    parts = []
    for exps, c in f.terms:
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    body = " + ".join(parts) if parts else "0"
    return f"{body} mod {f.prime}"


# ---------------------------------------------------------------------------
# Literal parser: + - * ^, parentheses, integers, variables x y z w / x1..xn.

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+|[xyzw])|(\*\*|[-+*^()]))")


class FormSyntaxError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, var, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif var is not None:
            tokens.append(("var", var))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    # Polynomials are dicts from variable-power tuples (over named variables) to ints.

    def __init__(self, tokens, p):
        self.tokens = tokens
        self.i = 0
        self.p = p
        self.vars: dict[str, int] = {}

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def var_index(self, name):
        return self.vars.setdefault(name, len(self.vars))

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = _pscale(self.term(), sign, self.p)
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            t = self.term()
            acc = _padd(acc, _pscale(t, 1 if op == "+" else -1, self.p), self.p)
        return acc

    def term(self):
        acc = self.power()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                acc = _pmul(acc, self.power(), self.p)
            elif tok[0] in ("num", "var") or tok == ("op", "("):
                acc = _pmul(acc, self.power(), self.p)  # implicit product, e.g. 3x or xyz(...)
            else:
                return acc

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise FormSyntaxError("exponent must be a non-negative integer")
            out = {(): 1}
            for _ in range(int(val)):
                out = _pmul(out, base, self.p)
            return out
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return {(): int(val) % self.p}
        if kind == "var":
            return {((self.var_index(val), 1),): 1}
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise FormSyntaxError("missing closing parenthesis")
            return inner
        if (kind, val) == ("op", "-"):
            return _pscale(self.atom(), -1, self.p)
        raise FormSyntaxError(f"unexpected token {val!r}")


def _norm_mono(m):
    acc: dict[int, int] = {}
    for v, e in m:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in acc.items() if e))


def _padd(a, b, p):
    out = dict(a)
    for m, c in b.items():
        out[m] = (out.get(m, 0) + c) % p
    return {m: c for m, c in out.items() if c}


def _pscale(a, s, p):
    return {m: c * s % p for m, c in a.items() if c * s % p}


def _pmul(a, b, p):
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _norm_mono(ma + mb)
            out[m] = (out.get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def _name_order(name: str) -> int:
    if name in SHORT_NAMES:
        return SHORT_NAMES.index(name)
    return int(name[1:]) - 1


def parse_form(text: str, n_vars: int | None = None) -> Form:
    """Parse a literal such as ``x^3*y^2 + 3*y^3*z^2 mod 13``."""
    m = re.search(r"\bmod\s+(\d+)\s*$", text)
    if not m:
        raise FormSyntaxError("form literal needs a 'mod p' suffix")
    p = check_prime(int(m.group(1)))
    # Named variables fix positions: x,y,z,w -> 0..3, xk -> k-1.
    tokens = _tokenize(text[: m.start()])
    names = {val for kind, val in tokens if kind == "var"}
    if any(n in SHORT_NAMES for n in names) and any(n not in SHORT_NAMES for n in names):
        raise FormSyntaxError("do not mix x,y,z,w with x1..xn")
    parser = _Parser(tokens, p)
    poly = parser.expr()
    if parser.i != len(tokens):
        raise FormSyntaxError(f"trailing input at token {parser.i}")
    used = max((_name_order(n) for n in names), default=-1) + 1
    if n_vars is None:
        n_vars = max(used, 1)
    if used > n_vars:
        raise FormSyntaxError(f"literal uses {used} variables, more than n_vars={n_vars}")
    position = {idx: _name_order(name) for name, idx in parser.vars.items()}
    coeffs: dict[Exponents, int] = {}
    for mono, c in poly.items():
        exps = [0] * n_vars
        for v, e in mono:
            exps[position[v]] += e
        coeffs[tuple(exps)] = c
    degrees = {sum(e) for e in coeffs}
    if len(degrees) > 1:
        raise FormSyntaxError(f"literal is not homogeneous (degrees {sorted(degrees)})")
    if not degrees:
        raise FormSyntaxError("the zero form has no degree; give a nonzero literal")
    return Form.from_dict(p, n_vars, degrees.pop(), coeffs)


# ---------------------------------------------------------------------------
# Evaluation and differentiation


def evaluate(f: Form, point: Sequence[int]) -> int:
    if len(point) != f.n_vars:
        raise ValueError(f"point has {len(point)} coordinates, form has {f.n_vars} variables")
    p = f.prime
    total = 0
    for exps, c in f.terms:
        t = c
        for x, e in zip(point, exps):
            if e:
                t = t * pow(x, e, p) % p
        total += t
    return total % p


def partial(f: Form, var: int) -> dict[Exponents, int]:
    """Formal partial derivative as a coefficient dict (degree drops by one)."""
    out: dict[Exponents, int] = {}
    for exps, c in f.terms:
        e = exps[var]
        if e and (c * e) % f.prime:
            new = list(exps)
            new[var] -= 1
            out[tuple(new)] = c * e % f.prime
    return out


def gradient(f: Form, point: Sequence[int]) -> tuple[int, ...]:
    if len(point) != f.n_vars:
        raise ValueError(f"point has {len(point)} coordinates, form has {f.n_vars} variables")
    p = f.prime
    grad = []
    for k in range(f.n_vars):
        total = 0
        for exps, c in f.terms:
            e = exps[k]
            if not e:
                continue
            t = c * e
            for j, (x, ej) in enumerate(zip(point, exps)):
                ej = ej - 1 if j == k else ej
                if ej:
                    t = t * pow(x, ej, p) % p
            total += t
        grad.append(total % p)
    return tuple(grad)


# ---------------------------------------------------------------------------
# Linear substitutions


@dataclass(frozen=True)
class LinearSubstitution:
    """old variable i = sum_j matrix[i][j] * new variable j."""

    prime: int
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, prime: int, matrix: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) % prime for v in row) for row in matrix)
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("substitution matrix must be rectangular and nonempty")
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "matrix", rows)

    @property
    def n_old(self) -> int:
        return len(self.matrix)

    @property
    def n_new(self) -> int:
        return len(self.matrix[0])

    @classmethod
    def identity(cls, prime: int, n: int) -> LinearSubstitution:
        return cls(prime, [[int(i == j) for j in range(n)] for i in range(n)])

    def apply(self, y: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, y)) % self.prime for row in self.matrix)

    def compose(self, other: LinearSubstitution) -> LinearSubstitution:
        """The map y -> self.apply(other.apply(y))."""
        if self.n_new != other.n_old:
            raise ValueError("dimension mismatch in composition")
        p = self.prime
        return LinearSubstitution(
            p,
            [[sum(self.matrix[i][k] * other.matrix[k][j] for k in range(self.n_new)) % p for j in range(other.n_new)]
             for i in range(self.n_old)],
        )


def _linear_power(row: Sequence[int], e: int, p: int, n_new: int) -> dict[Exponents, int]:
    out = {(0,) * n_new: 1}
    lin = {monomial(n_new, (j, 1)): a for j, a in enumerate(row) if a}
    for _ in range(e):
        nxt: dict[Exponents, int] = {}
        for m1, c1 in out.items():
            for m2, c2 in lin.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                nxt[m] = (nxt.get(m, 0) + c1 * c2) % p
        out = nxt
    return out


def substitute(f: Form, s: LinearSubstitution) -> Form:
    if s.n_old != f.n_vars:
        raise ValueError(f"substitution maps into {s.n_old} variables, form has {f.n_vars}")
    if s.prime != f.prime:
        raise ValueError("substitution is over a different prime")
    p, n_new = f.prime, s.n_new
    powers: dict[tuple[int, int], dict[Exponents, int]] = {}
    acc: dict[Exponents, int] = {}
    for exps, c in f.terms:
        prod = {(0,) * n_new: c}
        for i, e in enumerate(exps):
            if not e:
                continue
            key = (i, e)
            if key not in powers:
                powers[key] = _linear_power(s.matrix[i], e, p, n_new)
            nxt: dict[Exponents, int] = {}
            for m1, c1 in prod.items():
                for m2, c2 in powers[key].items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    nxt[m] = (nxt.get(m, 0) + c1 * c2) % p
            prod = nxt
        for m, v in prod.items():
            acc[m] = (acc.get(m, 0) + v) % p
    return Form.from_dict(p, n_new, f.degree, acc)


# ---------------------------------------------------------------------------
# Similarity: f(x) = a * g(a_1 x_1, ..., a_m x_m)

MAX_SIMILARITY_VARS = 3


def find_similarity(f: Form, g: Form) -> tuple[int, tuple[int, ...]] | None:
    """Exhaustive search over all variable scalings; returns (a, (a_1..a_m)) or None.

    Works in discrete-log coordinates: for each scaling vector the overall
    factor a is forced by one monomial and checked against the rest.
    """
    if (f.prime, f.n_vars, f.degree) != (g.prime, g.n_vars, g.degree):
        raise ValueError("similarity needs forms with the same prime, degree and variable count")
    if f.n_vars > MAX_SIMILARITY_VARS:
        raise ValueError(f"similarity search is limited to {MAX_SIMILARITY_VARS} variables")
    fd, gd = f.as_dict(), g.as_dict()
    if fd.keys() != gd.keys():
        return None
    p, m = f.prime, f.n_vars
    if not fd:
        return 1, (1,) * m
    log, exp = discrete_log_table(p)
    order = p - 1
    monos = sorted(fd)
    E = np.array(monos, dtype=np.int64)                     # T x m
    target = np.array([(log[fd[e]] - log[gd[e]]) % order for e in monos], dtype=np.int64)
    grids = np.array(list(itertools.product(range(order), repeat=m)), dtype=np.int64).reshape(-1, m)
    D = (target[None, :] - grids @ E.T) % order              # log a forced by each monomial
    ok = np.nonzero((D == D[:, :1]).all(axis=1))[0]
    if ok.size == 0:
        return None
    row = ok[0]
    return exp[int(D[row, 0])], tuple(exp[int(v)] for v in grids[row])


def are_similar(f: Form, g: Form) -> bool:
    return find_similarity(f, g) is not None


def similar_up_to_permutation(f: Form, g: Form) -> bool:
    for perm in itertools.permutations(range(g.n_vars)):
        if are_similar(f, g.permute(perm)):
            return True
    return False
