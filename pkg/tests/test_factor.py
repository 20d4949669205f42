import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cashift.factor import Factorization, factor_dense, univariate_factor, verify_factor_hint
from cashift.laurent import LaurentPoly, parse_poly


def P(text, p=2, d=2):
    return parse_poly(text, p, d)


def is_irreducible_bruteforce(g: LaurentPoly, var: int = 1) -> bool:
    """Trial division by every monic non-monomial polynomial of degree 1..deg/2.

    Divisors need a nonzero constant term: monomials are units here.
    """
    from cashift.laurent import divide_exact

    p, d = g.p, g.d
    lo, hi = g.exponent_range(var)
    deg = hi - lo
    for k in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            if tail[0] == 0:
                continue
            terms = {}
            for i, c in enumerate(tail):
                e = [0] * d
                e[var - 1] = i
                terms[tuple(e)] = c
            e = [0] * d
            e[var - 1] = k
            terms[tuple(e)] = 1
            if divide_exact(g, LaurentPoly(p, d, terms)) is not None:
                return False
    return True


def test_square():
    fac = univariate_factor(P("1+x1^2"))
    assert fac.factors == ((P("1+x1"), 2),)


def test_irreducible_quadratic():
    fac = univariate_factor(P("1+x1+x1^2"))
    assert fac.factors == ((P("1+x1+x1^2"), 1),)


def test_cubic():
    fac = univariate_factor(P("1+x1^3"))
    assert set(fac.factors) == {(P("1+x1"), 1), (P("1+x1+x1^2"), 1)}


def test_laurent_monomial_pulled_out():
    fac = univariate_factor(P("x1+x1^-1"))
    assert fac.monomial == (-1, 0)
    assert fac.factors == ((P("1+x1"), 2),)
    assert fac.product(2, 2) == P("x1+x1^-1")


def test_errors():
    with pytest.raises(ValueError):
        univariate_factor(LaurentPoly.zero(2, 2))
    with pytest.raises(ValueError):
        univariate_factor(P("x1+x2"))


def test_dense_x12_minus_1_mod5():
    unit, facs = factor_dense([4] + [0] * 11 + [1], 5)
    assert unit == 1
    degrees = sorted(len(g) - 1 for g, _ in facs)
    assert degrees == [1, 1, 1, 1, 2, 2, 2, 2]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@given(data=st.data())
def test_factors_are_irreducible_and_multiply_back(p, data):
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=2, max_size=7))
    A = LaurentPoly(p, 2, {(i, 0): c for i, c in enumerate(coeffs)})
    if A.is_zero():
        return
    fac = univariate_factor(A)
    assert fac.product(p, 2) == A
    for g, e in fac.factors:
        assert e >= 1
        assert g.leading()[1] == 1
        assert is_irreducible_bruteforce(g)
    assert len({g for g, _ in fac.factors}) == len(fac.factors)


def test_deterministic():
    A = P("1+x1^5+x1^9", p=3)
    assert univariate_factor(A) == univariate_factor(A)


def test_hint_verified_and_marked():
    A = P("1+x1+x2+x1x2", d=3)  # (1+x1)(1+x2) in three variables
    hint = Factorization(1, ((P("1+x1", d=3), 1), (P("1+x2", d=3), 1)), (0, 0, 0))
    got = verify_factor_hint(A, hint)
    assert got.asserted
    with pytest.raises(ValueError):
        verify_factor_hint(A, Factorization(1, ((P("1+x1", d=3), 1),), (0, 0, 0)))
