import numpy as np

from kronrod.fields import ScalarField, euler_check, fix_ties, load_field, morse_counts, save_field
from kronrod.reeb import build_reeb, classify_shape


def tube_field(w=16, h=15):
    """Cylinder with constant boundary rows and one interior max/saddle pair."""
    g = np.array([y * (h - 1 - y) for y in range(h)], dtype=float)
    e = np.array([min(x, w - x) for x in range(w)], dtype=float)
    vals = np.outer(g, 2.0**e)
    vals /= vals.max()
    vals = fix_ties(vals, "cylinder")
    return ScalarField("cylinder", vals)


class TestCylinder:
    def test_counts_and_euler(self):
        f = tube_field()
        mc = morse_counts(f)
        # one ridge maximum and one pass over the low side of the tube
        assert mc.as_tuple() == (0, 1, 1)
        assert euler_check(f)

    def test_reeb_has_two_boundary_leaves(self):
        f = tube_field()
        g = build_reeb(f)
        leaves = [v for v in g.vertices if v.boundary]
        assert len(leaves) == 2
        assert all(len(v.crits) == 0 for v in leaves)
        assert classify_shape(g).shape == "tree"

    def test_round_trip(self):
        f = tube_field()
        assert load_field(save_field(f)) == f


class TestGenericImpliesSimple:
    def test_on_random_fields(self):
        from kronrod.corpus import random_torus_field
        from kronrod.fields import is_generic, is_simple
        from kronrod.reeb import build_reeb

        seen_generic = 0
        for i in range(6):
            f = random_torus_field(5000 + i * 311)
            g = build_reeb(f)
            if is_generic(f):
                seen_generic += 1
                assert is_simple(f, g)
        assert seen_generic > 0
