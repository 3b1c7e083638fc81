import pytest

from kronrod.construct import realize_disk, realize_torus_circuit
from kronrod.errors import CapNotDisk, WindowOutOfRange
from kronrod.fields import CritKind, classify_vertices, euler_check, morse_counts
from kronrod.implant import implant
from kronrod.terms import Triv, Wr


@pytest.fixture(scope="module")
def wide_host():
    f, _ = realize_torus_circuit(Triv(), 1, min_band_width=96, height=96)
    return f


def _crit(f, kind):
    return next(c for c in classify_vertices(f) if c.kind is kind)


class TestImplant:
    def test_trivial_sub_keeps_counts(self, wide_host):
        mx = _crit(wide_host, CritKind.MAXIMUM)
        sub, _ = realize_disk(Triv())
        out = implant(wide_host, (mx.x, mx.y), 0.75, sub, (0.8, 0.95))
        assert morse_counts(out).as_tuple() == morse_counts(wide_host).as_tuple()
        assert euler_check(out)

    def test_wreath_sub_recount(self, wide_host):
        mx = _crit(wide_host, CritKind.MAXIMUM)
        sub, _ = realize_disk(Wr(Triv(), 2))
        out = implant(wide_host, (mx.x, mx.y), 0.75, sub, (0.8, 0.95))
        # the cap maximum is replaced by the sub's two petals plus closer
        assert morse_counts(out).as_tuple() == (1, 4, 3)
        assert euler_check(out)

    def test_saddle_rejected(self, wide_host):
        sad = _crit(wide_host, CritKind.SADDLE)
        sub, _ = realize_disk(Triv())
        with pytest.raises(CapNotDisk):
            implant(wide_host, (sad.x, sad.y), 0.3, sub, (0.35, 0.45))

    def test_minimum_cap(self, wide_host):
        mn = _crit(wide_host, CritKind.MINIMUM)
        sub, _ = realize_disk(Wr(Triv(), 2))
        out = implant(wide_host, (mn.x, mn.y), -0.75, sub, (-0.8, -0.95))
        assert morse_counts(out).as_tuple() == (3, 4, 1)
        assert euler_check(out)

    def test_window_validation(self, wide_host):
        mx = _crit(wide_host, CritKind.MAXIMUM)
        sub, _ = realize_disk(Triv())
        with pytest.raises(WindowOutOfRange):
            implant(wide_host, (mx.x, mx.y), 0.75, sub, (0.5, 0.95))

    def test_outside_crits_preserved(self, wide_host):
        mx = _crit(wide_host, CritKind.MAXIMUM)
        sub, _ = realize_disk(Wr(Triv(), 2))
        out = implant(wide_host, (mx.x, mx.y), 0.75, sub, (0.8, 0.95))
        before = {
            (c.x, c.y, c.kind) for c in classify_vertices(wide_host) if c.kind is not CritKind.MAXIMUM
        }
        after = {(c.x, c.y, c.kind) for c in classify_vertices(out)}
        assert before <= after
