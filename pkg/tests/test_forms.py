import itertools

import pytest
from hypothesis import given, settings, strategies as st

from padic_zeros.forms import (
    Form,
    FormSyntaxError,
    LinearSubstitution,
    are_similar,
    evaluate,
    find_similarity,
    gradient,
    parse_form,
    similar_up_to_permutation,
    substitute,
)
from padic_zeros.fpsearch import count_and_witness

QUINTIC_13 = "x^3*y^2 + 3*y^3*z^2 + 6*x^3*z^2 + x*y*z*(11*x^2 + x*y + x*z + 6*y^2 + y*z + 4*z^2) mod 13"


def test_evaluate_examples():
    assert evaluate(parse_form("x^4 + y^4 mod 5"), (1, 1)) == 2
    # 1 + 3 + 6 + (11+1+1+6+1+4) = 34 = 8 mod 13
    assert evaluate(parse_form(QUINTIC_13), (1, 1, 1)) == 8
    assert evaluate(parse_form(QUINTIC_13), (0, 0, 0)) == 0
    with pytest.raises(ValueError):
        evaluate(parse_form("x^4 + y^4 mod 5"), (1, 1, 1))


def test_gradient_examples():
    assert gradient(parse_form("x^4 + y^4 mod 2"), (1, 1)) == (0, 0)
    assert gradient(parse_form("x^2 + y^2 mod 3"), (1, 1)) == (2, 2)
    assert gradient(parse_form("x^3 mod 5"), (0,)) == (0,)


def test_parse_round_trip_and_errors():
    f = parse_form(QUINTIC_13)
    assert parse_form(f.literal()) == f
    assert parse_form("x1^2 + 3*x3^2 mod 7").n_vars == 3
    assert parse_form("2 x y mod 5") == parse_form("2*x*y mod 5")
    assert parse_form("x^2 - x^2 + y^2 mod 3") == parse_form("y^2 mod 3", n_vars=2)
    for bad in ["x^2 + y", "x^2 + y^3 mod 5", "x^2 mod 4", "x^2 + x1^2 mod 5", "x^2 + mod 5"]:
        with pytest.raises((FormSyntaxError, ValueError)):
            parse_form(bad)


def test_canonical_equality():
    a = Form.from_dict(7, 2, 2, {(2, 0): 8, (0, 2): 3})
    b = Form.from_dict(7, 2, 2, {(0, 2): 10, (2, 0): 1})
    assert a == b and a.terms == b.terms


def test_substitution_identities():
    # (x+y)^4 + (2x+y)^4 + 2(x+2y)^4 over F_13
    diag13 = parse_form("x^4 + y^4 + 2*z^4 mod 13")
    s13 = LinearSubstitution(13, [[1, 1], [2, 1], [1, 2]])
    assert substitute(diag13, s13) == parse_form("6*x^4 + 11*x*y^3 + 8*y^4 mod 13")
    diag29 = parse_form("x^4 + y^4 + z^4 mod 29")
    s29 = LinearSubstitution(29, [[1, 1], [6, 26], [1, 9]])
    assert substitute(diag29, s29) == parse_form("22*x^4 + 10*x*y^3 + 2*y^4 mod 29")
    f = parse_form(QUINTIC_13)
    assert substitute(f, LinearSubstitution.identity(13, 3)) == f


def test_similarity_examples():
    ref13 = parse_form("x^4 - 4*x*y^3 + 3*y^4 mod 13")
    assert not are_similar(parse_form("6*x^4 + 11*x*y^3 + 8*y^4 mod 13"), ref13)
    ref29 = parse_form("x^4 - 4*x*y^3 + 3*y^4 mod 29")
    assert not are_similar(parse_form("22*x^4 + 10*x*y^3 + 2*y^4 mod 29"), ref29)
    f = parse_form("x^4 + y^4 + 2*z^4 mod 13")
    assert find_similarity(f, f) is not None
    assert similar_up_to_permutation(f, parse_form("2*x^4 + y^4 + z^4 mod 13"))
    assert not similar_up_to_permutation(f, parse_form("x^4 + y^4 + z^4 mod 13"))
    with pytest.raises(ValueError):
        are_similar(parse_form("x*y*z*w mod 5"), parse_form("x*y*z*w mod 5"))


def test_similarity_witness_is_correct():
    g = parse_form("x^4 + 3*x*y^3 + 5*y^4 + 2*x^2*z^2 mod 11")
    a, (a1, a2, a3) = 7, (2, 5, 3)
    f = substitute(g, LinearSubstitution(11, [[a1, 0, 0], [0, a2, 0], [0, 0, a3]])).scale(a)
    found = find_similarity(f, g)
    assert found is not None
    b, scal = found
    assert substitute(g, LinearSubstitution(11, [[scal[0], 0, 0], [0, scal[1], 0], [0, 0, scal[2]]])).scale(b) == f


# -- random forms -------------------------------------------------------------

def monomials(n, d):
    return [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) == d]


@st.composite
def small_forms(draw, p=None, n=None, d=None):
    p = draw(st.sampled_from([2, 3, 5, 7])) if p is None else p
    n = draw(st.integers(1, 3)) if n is None else n
    d = draw(st.integers(1, 4)) if d is None else d
    monos = monomials(n, d)
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=5))
    coeffs = {m: draw(st.integers(1, p - 1)) for m in chosen}
    return Form.from_dict(p, n, d, coeffs)


def matrices(p, rows, cols):
    return st.lists(st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_substitution_composition(data):
    p = data.draw(st.sampled_from([3, 5, 7]))
    f = data.draw(small_forms(p=p, n=3))
    s1 = LinearSubstitution(p, data.draw(matrices(p, 3, 2)))
    s2 = LinearSubstitution(p, data.draw(matrices(p, 2, 2)))
    assert substitute(substitute(f, s1), s2) == substitute(f, s1.compose(s2))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_substitution_matches_evaluation(data):
    p = data.draw(st.sampled_from([2, 3, 5]))
    f = data.draw(small_forms(p=p, n=2))
    s = LinearSubstitution(p, data.draw(matrices(p, 2, 2)))
    g = substitute(f, s)
    for y in itertools.product(range(p), repeat=2):
        assert evaluate(g, y) == evaluate(f, s.apply(y))


@settings(max_examples=40, deadline=None)
@given(small_forms())
def test_gradient_matches_formal_difference(f):
    # f(x + t e_k) = f(x) + t df/dx_k(x) + O(t^2): read the linear coefficient off the polynomial in t
    p, n = f.prime, f.n_vars
    for x in itertools.product(range(p), repeat=n):
        g = gradient(f, x)
        for k in range(n):
            coeff = 0
            for e, c in f.terms:
                if e[k] == 0:
                    continue
                t = c * e[k]
                for j, (xj, ej) in enumerate(zip(x, e)):
                    t *= xj ** (ej - (j == k))
                coeff += t
            assert g[k] == coeff % p


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_similarity_reflexive_symmetric_and_preserves_counts(data):
    p = data.draw(st.sampled_from([3, 5, 7]))
    f = data.draw(small_forms(p=p, n=3, d=3))
    scal = [data.draw(st.integers(1, p - 1)) for _ in range(4)]
    g = substitute(f, LinearSubstitution(p, [[scal[1], 0, 0], [0, scal[2], 0], [0, 0, scal[3]]])).scale(scal[0])
    assert are_similar(f, f)
    assert are_similar(f, g) and are_similar(g, f)
    assert count_and_witness(f).total_points == count_and_witness(g).total_points
