import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronrod.errors import DegreeCapExceeded
from kronrod.permgroups import (
    compose,
    enumerate_elements,
    inverse,
    is_isomorphic,
    perm_order,
    perm_rep,
)
from kronrod.terms import Prod, Triv, Wr, Wr2, order

from test_terms import terms_strategy


class TestPermBasics:
    def test_compose(self):
        p = (1, 2, 0)
        q = (0, 2, 1)
        assert compose(p, q) == (2, 1, 0)

    def test_inverse(self):
        p = (2, 0, 1)
        assert compose(p, inverse(p)) == (0, 1, 2)

    def test_perm_order(self):
        assert perm_order((1, 2, 0, 4, 3)) == 6


class TestPermRep:
    def test_trivial(self):
        g = perm_rep(Triv())
        assert g.degree == 1 and g.generators == []

    def test_regular_cyclic(self):
        g = perm_rep(Wr(Triv(), 4))
        assert g.degree == 4
        assert len(g.generators) == 1
        assert perm_order(g.generators[0]) == 4

    def test_wr2_blocks(self):
        g = perm_rep(Wr2(Triv(), 2, 1))
        assert g.degree == 4
        assert len(g.generators) == 2
        assert all(perm_order(p) == 2 for p in g.generators)
        a, b = g.generators
        assert compose(a, b) == compose(b, a)
        assert enumerate_elements(g, 100) == 4

    def test_degree_cap(self):
        with pytest.raises(DegreeCapExceeded):
            perm_rep(Wr(Triv(), 10), degree_cap=5)


class TestEnumerate:
    def test_small(self):
        assert enumerate_elements(perm_rep(Wr(Triv(), 3)), 100) == 3

    def test_wreath_closure(self):
        g = perm_rep(Wr(Wr(Triv(), 2), 3))
        assert enumerate_elements(g, 100) == 24 == order(Wr(Wr(Triv(), 2), 3))

    def test_overflow(self):
        g = perm_rep(Wr(Wr(Triv(), 2), 5))  # order 160
        assert enumerate_elements(g, 100) is None

    @given(terms_strategy(max_leaves=4))
    @settings(max_examples=40, deadline=None)
    def test_matches_order_formula(self, t):
        n = order(t, bound=1 << 200)
        if n > 2000:
            return
        g = perm_rep(t)
        assert enumerate_elements(g, 2000) == n


class TestIsomorphism:
    def test_same_term(self):
        a = perm_rep(Wr(Triv(), 6))
        b = perm_rep(Wr(Triv(), 6))
        assert is_isomorphic(a, b, 100) is True

    def test_klein_vs_cyclic(self):
        assert is_isomorphic(perm_rep(Wr2(Triv(), 2, 1)), perm_rep(Wr(Triv(), 4)), 100) is False

    def test_chinese_remainder(self):
        a = perm_rep(Prod(Wr(Triv(), 2), Wr(Triv(), 3)))
        b = perm_rep(Wr(Triv(), 6))
        assert is_isomorphic(a, b, 100) is True

    def test_nonabelian_vs_abelian(self):
        d4 = perm_rep(Wr(Wr(Triv(), 2), 2))  # dihedral of order 8
        z8 = perm_rep(Wr(Triv(), 8))
        assert is_isomorphic(d4, z8, 100) is False

    def test_undecided_on_overflow(self):
        big = perm_rep(Wr(Wr(Triv(), 2), 5))
        assert is_isomorphic(big, big, 100) is None

    def test_normalized_term_same_group(self):
        t = Prod(Wr(Wr(Triv(), 2), 1), Triv())
        from kronrod.terms import normalize

        a = perm_rep(t)
        b = perm_rep(normalize(t))
        assert is_isomorphic(a, b, 500) is True
