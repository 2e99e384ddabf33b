"""Exterior algebra container: wedge, contraction, exponential, linear maps."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from purespin.multivector import Multivector, merge_blades


def mv(dim, terms):
    return Multivector(dim, terms)


# small rational multivectors for law checking
def _mv_strategy(dim=3):
    blades = [()] + [(i,) for i in range(dim)] + [(0, 1), (0, 2), (1, 2), (0, 1, 2)]
    coeff = st.integers(-4, 4).map(lambda k: Fraction(k, 3))
    return st.dictionaries(st.sampled_from(blades), coeff, max_size=4).map(
        lambda d: Multivector(dim, d))


class TestWedge:
    def test_basis_merge_signs(self):
        assert merge_blades((0,), (1,)) == (1, (0, 1))
        assert merge_blades((1,), (0,)) == (-1, (0, 1))
        assert merge_blades((0, 2), (1,)) == (-1, (0, 1, 2))
        assert merge_blades((0,), (0,)) is None

    @settings(max_examples=60, deadline=None)
    @given(_mv_strategy(), _mv_strategy(), _mv_strategy())
    def test_associative_and_distributive(self, a, b, c):
        assert ((a.wedge(b)).wedge(c) - a.wedge(b.wedge(c))).terms == {}
        assert (a.wedge(b + c) - (a.wedge(b) + a.wedge(c))).terms == {}

    @settings(max_examples=40, deadline=None)
    @given(_mv_strategy(), _mv_strategy())
    def test_graded_commutativity(self, a, b):
        for p in (0, 1, 2, 3):
            for q in (0, 1, 2, 3):
                ap, bq = a.grade(p), b.grade(q)
                sign = (-1) ** (p * q)
                assert (ap.wedge(bq) - bq.wedge(ap).scale(sign)).terms == {}

    def test_contraction_is_an_antiderivation(self, rng):
        a = Multivector(4, {(0, 1): 2.0, (2,): -1.5})
        b = Multivector(4, {(1, 2): 1.0, (3,): 0.5})
        v = list(rng.standard_normal(4))
        lhs = a.wedge(b).contract(v)
        for p in (0, 1, 2):
            ap = a.grade(p)
            rhs = ap.contract(v).wedge(b) + ap.wedge(b.contract(v)).scale((-1) ** p)
            assert (ap.wedge(b).contract(v) - rhs).norm() < 1e-12
        assert lhs  # nonzero for this data


class TestExpAndEval:
    def test_two_form_exponential(self):
        omega = Multivector(4, {(0, 1): Fraction(2), (2, 3): Fraction(3)})
        e = omega.exp_wedge()
        assert e.coeff(()) == 1
        assert e.coeff((0, 1)) == 2
        assert e.coeff((0, 1, 2, 3)) == 6  # 2*3 from omega^2/2
        with pytest.raises(ValueError):
            Multivector.scalar(2).exp_wedge()

    def test_evaluate_matches_minors(self, rng):
        form = Multivector(4, {(0, 2): 1.3, (1, 3): -0.4})
        u, v = rng.standard_normal(4), rng.standard_normal(4)
        expect = 1.3 * (u[0] * v[2] - u[2] * v[0]) - 0.4 * (u[1] * v[3] - u[3] * v[1])
        assert abs(form.evaluate([u, v]) - expect) < 1e-12

    def test_from_antisymmetric_matrix_convention(self):
        m = np.array([[0.0, 2.0], [-2.0, 0.0]])
        form = Multivector.from_antisymmetric_matrix(m)
        assert abs(form.evaluate([np.array([1.0, 0.0]), np.array([0.0, 1.0])]) - 2.0) < 1e-14


class TestLinearMaps:
    def test_pullback_functorial(self, rng):
        a = rng.standard_normal((3, 4))
        b = rng.standard_normal((4, 2))
        form = Multivector(3, {(0, 1): 1.0, (1, 2): -2.0, (0,): 0.7})
        once = form.pullback(a).pullback(b)
        composed = form.pullback(a @ b)
        assert (once - composed).norm() < 1e-12

    def test_pushforward_functorial(self, rng):
        a = rng.standard_normal((3, 4))
        b = rng.standard_normal((4, 2))
        chi = Multivector(2, {(0, 1): 2.0, (1,): 1.0})
        assert (chi.pushforward(a @ b) - chi.pushforward(b).pushforward(a)).norm() < 1e-12

    def test_identity_and_zero(self):
        chi = Multivector(3, {(0, 2): 1.0, (): 2.0})
        assert (chi.pushforward(np.eye(3)) - chi).norm() == 0
        squashed = chi.pushforward(np.zeros((3, 3)))
        assert squashed.terms == {(): 2.0}


class TestSerialization:
    def test_json_round_trip(self):
        x = Multivector(3, {(): Fraction(1, 3), (0, 2): -2, (1,): 0.5})
        back = Multivector.from_json(3, x.to_json())
        assert back.terms == x.terms

    def test_one_based_indices(self):
        x = Multivector(3, {(0, 2): 1})
        assert x.to_json() == [{"idx": [1, 3], "c": "1"}]
