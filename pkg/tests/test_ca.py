import pytest
from hypothesis import given
from hypothesis import strategies as st

from cashift.ca import (
    CAShift,
    ca_normalize,
    canonical_residue,
    constant_points,
    ideal_member,
    substitute_time,
)
from cashift.errors import NotCAFormError
from cashift.laurent import LaurentPoly, parse_poly
from strategies import phis, polys


def P(text, p=2, d=2):
    return parse_poly(text, p, d)


class TestCAShift:
    def test_rejects_time_in_phi(self):
        with pytest.raises(ValueError):
            CAShift(2, 2, P("1+x2"))

    def test_rejects_single_term(self):
        with pytest.raises(ValueError):
            CAShift(2, 2, P("x1"))

    def test_rejects_d1(self):
        with pytest.raises(ValueError):
            CAShift(2, 1, parse_poly("1+x1", 2, 1))

    @given(phis(p=3), st.integers(0, 40))
    def test_phi_power_matches_repeated_product(self, phi, k):
        ca = CAShift(3, 2, phi)
        expect = LaurentPoly.one(3, 2)
        for _ in range(k):
            expect = expect * phi
        assert ca.phi_power(k) == expect


class TestNormalize:
    def test_ledrappier(self):
        ca, tr = ca_normalize(P("1+x1^-1+x2^-1"))
        assert ca.phi == P("1+x1^-1")
        assert tr.describe() == "invert axis 2"
        assert tr.undo(ca.P) == P("1+x1^-1+x2^-1")

    def test_identity(self):
        ca, tr = ca_normalize(P("x2-1-x1"))
        assert ca.phi == P("1+x1")
        assert tr.describe() == "identity"

    def test_no_time_term(self):
        with pytest.raises(NotCAFormError):
            ca_normalize(P("1+x1+x1^2"))

    def test_short_phi(self):
        with pytest.raises(NotCAFormError):
            ca_normalize(P("x2+x1"))

    def test_time_gap(self):
        with pytest.raises(NotCAFormError):
            ca_normalize(P("x2^2+1+x1"))

    @given(phis(p=5), st.integers(1, 4), st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
           st.booleans(), st.booleans())
    def test_recovers_any_disguise(self, phi, unit, shift, flip1, flip2):
        ca = CAShift(5, 2, phi)
        A = ca.P
        if flip1:
            A = A.map_exponents(lambda n: (-n[0], n[1]))
        if flip2:
            A = A.map_exponents(lambda n: (n[0], -n[1]))
        A = A.shift(shift).scale(unit)
        got, tr = ca_normalize(A)
        assert tr.undo(got.P) == A
        assert tr.apply(A) == got.P


class TestIdeal:
    def test_generator(self, rule90):
        assert ideal_member(rule90.P, rule90)

    def test_one(self, rule90):
        assert not ideal_member(P("1"), rule90)

    def test_product(self, rule90):
        assert ideal_member(P("1+x1") * P("x2-1-x1"), rule90)

    def test_ring_mismatch(self, rule90):
        with pytest.raises(ValueError):
            ideal_member(parse_poly("1", 3, 2), rule90)

    @given(phis(p=3), polys(p=3, max_terms=4))
    def test_multiples_are_members(self, phi, R):
        ca = CAShift(3, 2, phi)
        assert ideal_member(R * ca.P, ca)

    @given(phis(p=2), polys(p=2, max_terms=3), polys(p=2, max_terms=3))
    def test_canonical_residue_detects_congruence(self, phi, A, B):
        ca = CAShift(2, 2, phi)
        same = canonical_residue(A, ca) == canonical_residue(B, ca)
        assert same == ideal_member(A - B, ca)

    @given(phis(p=3), polys(p=3, max_terms=4))
    def test_canonical_residue_is_congruent_and_idempotent(self, phi, R):
        ca = CAShift(3, 2, phi)
        c = canonical_residue(R, ca)
        assert ideal_member(R - c, ca)
        assert canonical_residue(c, ca) == c
        assert all(n[1] <= 0 for n in c.support())

    def test_substitute_time_fixed_power(self, rule90):
        U, k = substitute_time(P("x2^-1"), rule90, 2)
        assert k == 2 and U == P("1+x1")
        with pytest.raises(ValueError):
            substitute_time(P("x2^-2"), rule90, 1)


class TestConstants:
    def test_rule90(self, rule90):
        assert constant_points(rule90) == [0]

    def test_three_terms(self):
        assert constant_points(CAShift.from_text("1+x1+x1^2", 2)) == [0, 1]

    def test_ledrappier(self, ledrappier):
        assert constant_points(ledrappier) == [0]

    @pytest.mark.parametrize("phi,p", [("1+x1", 3), ("2+x1", 3), ("1+x1+x1^2", 2), ("x1+4x1^-1", 5)])
    def test_direct_membership(self, phi, p):
        ca = CAShift.from_text(phi, p)
        for c in range(p):
            # constant series c is annihilated iff c * P(1,...,1) = 0
            member = c * ca.P.evaluate_ones() % p == 0
            assert (c in constant_points(ca)) == member
