from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from chanup import (
    column, epsilon_perturb, explode, is_proportional, merge_proportional,
    odd_fast_path, proportional_split,
)
from chanup.errors import MassTooSmall, NonnegativityViolated, NotProportional, SingularSystem


def fcol(*vals):
    return column(F(v) for v in vals)


def _recon(r, mid, v1, v3):
    return tuple(r.s1 * a + r.s3 * b + c for a, b, c in zip(v1.entries, v3.entries, r.leftover.entries))


class TestProportionalSplit:
    def test_ternary_exact(self):
        v1, v3, mid = fcol("0.4", "0.2", "0.1"), fcol("0.1", "0.2", "0.4"), fcol("0.30", "0.20", "0.25")
        r = proportional_split(mid, v1, v3, (1, 2))
        assert (r.s1, r.s3) == (F(1, 2), F(1, 2))
        assert r.leftover.entries == (F(1, 20), 0, 0)
        assert _recon(r, mid, v1, v3) == mid.entries

    def test_ternary_float(self):
        r = proportional_split(column((0.3, 0.2, 0.25)), column((0.4, 0.2, 0.1)),
                               column((0.1, 0.2, 0.4)), (1, 2))
        assert (r.s1, r.s3) == pytest.approx((0.5, 0.5), abs=1e-15)
        assert r.leftover.entries == pytest.approx((0.05, 0, 0), abs=1e-15)

    def test_negative_leftover(self):
        with pytest.raises(NonnegativityViolated) as ei:
            proportional_split(fcol("0.25", "0.25", "0.25"), fcol("0.4", "0.2", "0.1"),
                               fcol("0.1", "0.2", "0.4"), (1, 2))
        assert ei.value.which == ("leftover", 0)
        assert ei.value.value == F(-1, 8)

    def test_negative_leftover_float_reports_coordinate(self):
        with pytest.raises(NonnegativityViolated) as ei:
            proportional_split(column((0.25,) * 3), column((0.4, 0.2, 0.1)), column((0.1, 0.2, 0.4)), (1, 2))
        assert ei.value.which == ("leftover", 0)
        assert ei.value.value == pytest.approx(-1 / 8)

    def test_negative_scale(self):
        with pytest.raises(NonnegativityViolated) as ei:
            proportional_split(fcol("0.1", "0.1", "0.4"), fcol("0.4", "0.2", "0.1"),
                               fcol("0.1", "0.2", "0.4"), (1, 2))
        assert ei.value.which in ("s1", "s3")

    def test_odd_endpoint(self):
        v1, v3, mid = fcol("0.4", "0.2", "0.1"), fcol("0.2", "0", "0.2"), fcol("0.35", "0.10", "0.15")
        r = proportional_split(mid, v1, v3, (1, 2))
        assert (r.s1, r.s3) == (F(1, 2), F(1, 2))
        assert r.leftover.entries == (F(1, 20), 0, 0)

    def test_binary_empty_leftover(self):
        r = proportional_split(fcol("0.35", "0.35"), fcol("0.6", "0.2"), fcol("0.1", "0.5"), (0, 1))
        assert (r.s1, r.s3) == (F(1, 2), F(1, 2))
        assert r.leftover.entries == (0, 0)

    @pytest.mark.parametrize("exact", [True, False])
    def test_singular(self, exact):
        mk = fcol if exact else (lambda *v: column(float(F(x)) for x in v))
        with pytest.raises(SingularSystem):
            proportional_split(mk("0.3", "0.3", "0.3"), mk("0.2", "0.1", "0.1"), mk("0.4", "0.2", "0.2"), (1, 2))

    def test_same_coordinate_rejected(self):
        with pytest.raises(ValueError):
            proportional_split(fcol(1, 1), fcol(1, 2), fcol(2, 1), (0, 0))

    def test_witness_rows(self):
        r = proportional_split(fcol("0.30", "0.20", "0.25"), fcol("0.4", "0.2", "0.1"),
                               fcol("0.1", "0.2", "0.4"), (1, 2))
        assert r.witness_rows == ((F(2, 3), F(1, 3), 0), (0, 1, 0), (0, F(1, 3), F(2, 3)))


pos = st.fractions(min_value=F(1, 100), max_value=1, max_denominator=100)


@st.composite
def split_triples(draw, p=None):
    """(mid, v1, v3, pair) with mid built as s1*v1 + s3*v3 + leftover >= 0."""
    p = draw(st.integers(2, 5)) if p is None else p
    v1 = column(draw(st.lists(pos, min_size=p, max_size=p)))
    v3 = column(draw(st.lists(pos, min_size=p, max_size=p)))
    pair = tuple(draw(st.permutations(range(p)))[:2])
    s1, s3 = draw(pos), draw(pos)
    left = [0 if x in pair else draw(st.fractions(0, 1, max_denominator=50)) for x in range(p)]
    mid = column(s1 * a + s3 * b + c for a, b, c in zip(v1.entries, v3.entries, left))
    assume(v1[pair[0]] * v3[pair[1]] != v1[pair[1]] * v3[pair[0]])
    return mid, v1, v3, pair


@given(split_triples())
def test_reconstruction_exact(t):
    mid, v1, v3, pair = t
    r = proportional_split(mid, v1, v3, pair)
    assert _recon(r, mid, v1, v3) == mid.entries
    assert all(r.leftover[x] == 0 for x in pair)
    for row in r.witness_rows:
        assert sum(row) == 1 and min(row) >= 0


@given(split_triples())
def test_reconstruction_float(t):
    mid, v1, v3 = (column(float(v) for v in c.entries) for c in t[:3])
    pair = t[3]
    try:
        r = proportional_split(mid, v1, v3, pair)
    except NonnegativityViolated:
        return  # rounding may tip a zero leftover negative beyond tol; exact mode covers it
    assert _recon(r, mid, v1, v3) == pytest.approx(mid.entries, abs=1e-12)
    for row in r.witness_rows:
        assert sum(row) == pytest.approx(1, abs=1e-15) and min(row) >= 0


@given(split_triples())
def test_matched_parts_keep_lr(t):
    mid, v1, v3, pair = t
    r = proportional_split(mid, v1, v3, pair)
    for s, v in ((r.s1, v1), (r.s3, v3)):
        if s > 0:
            assert is_proportional(v.scaled(s), v)
            assert v.scaled(s).support == v.support


class TestMerge:
    def test_scaled_pair(self):
        s, w = merge_proportional(fcol("0.2", "0.1", "0.1"), fcol("0.4", "0.2", "0.2"))
        assert s.entries == (F(3, 5), F(3, 10), F(3, 10)) and w.weights == (F(1, 3), F(2, 3))

    def test_singletons(self):
        s, w = merge_proportional(column((0.3, 0, 0)), column((0.1, 0, 0)))
        assert s.entries == pytest.approx((0.4, 0, 0)) and w.weights == pytest.approx((0.75, 0.25))

    def test_not_proportional(self):
        with pytest.raises(NotProportional):
            merge_proportional(column((0.2, 0.1, 0.1)), column((0.1, 0.2, 0.1)))

    def test_different_support_not_proportional(self):
        assert not is_proportional(column((0.2, 0.1, 0)), column((0.2, 0.1, 1e-300)))

    def test_tolerance(self):
        a = column((0.2, 0.1, 0.1))
        assert is_proportional(a, column((0.4, 0.2, 0.2 + 1e-13)))
        assert not is_proportional(a, column((0.4, 0.2, 0.2 + 1e-6)))

    @given(st.lists(pos, min_size=2, max_size=5), pos)
    def test_merge_scaled_is_exact(self, e, s):
        a = column(e)
        m, w = merge_proportional(a, a.scaled(s))
        assert m == a.scaled(1 + s)
        assert w.weights == (1 / (1 + s), s / (1 + s))


class TestExplode:
    @pytest.mark.parametrize("col, n", [((0.3, 0.2, 0.5), 3), ((0.4, 0, 0), 1), ((0.3, 0, 0.7), 2)])
    def test_fragments(self, col, n):
        frags, rows = explode(column(col))
        assert len(frags) == n and rows == (1,) * n
        assert all(len(f.support) == 1 for f in frags)
        assert tuple(map(sum, zip(*(f.entries for f in frags)))) == col

    def test_identity_for_singleton(self):
        assert explode(column((0.4, 0, 0)))[0] == [column((0.4, 0, 0))]


class TestFastPath:
    def test_one_zero_success(self):
        # norm(v1)^2 = 1.3125 <= norm(mid)^2 = 3.5; r = mid - 0.5*v1 = 0.5*odd
        v1, odd = fcol("0.1", "0.2", "0.4"), fcol("0.2", "0", "0.2")
        fp = odd_fast_path(v1, fcol("0.15", "0.1", "0.3"), odd)
        assert fp is not None and fp.leftover is None
        assert fp.s1 == F(1, 2) and fp.c == F(1, 2)
        assert fp.z1.entries == (F(3, 20), F(3, 10), F(3, 5))
        assert fp.z3.entries == (F(3, 10), 0, F(3, 10))

    def test_one_zero_not_proportional(self):
        assert odd_fast_path(fcol("0.1", "0.2", "0.4"), fcol("0.25", "0.1", "0.3"),
                             fcol("0.2", "0", "0.2")) is None

    def test_two_zero_odd_rejected(self):
        assert odd_fast_path(fcol("0.4", "0.2", "0.1"), fcol("0.3", "0.1", "0.15"),
                             fcol("0.4", "0", "0")) is None

    def test_norm_order_required(self):
        # v1 with the larger LR norm is refused
        assert odd_fast_path(fcol("0.3", "0.1", "0.15"), fcol("0.4", "0.2", "0.1"),
                             fcol("0.2", "0", "0.2")) is None

    def test_two_zeros_carves_leftover(self):
        v1 = fcol("0.2", "0.1", "0.1", "0.1", "0.1")
        odd = fcol("0.1", "0", "0", "0.1", "0.2")
        mid = column(a + b + c for a, b, c in zip(v1.entries, odd.entries, (0, 0, F(1, 20), 0, 0)))
        fp = odd_fast_path(v1, mid, odd)
        assert fp is not None
        assert fp.leftover.entries == (0, 0, F(1, 20), 0, 0)
        assert tuple(a + b + c for a, b, c in zip(fp.z1.entries, fp.z3.entries, fp.leftover.entries)) == tuple(
            a + b + c for a, b, c in zip(v1.entries, mid.entries, odd.entries))

    @given(st.lists(pos, min_size=3, max_size=5), st.data())
    def test_agrees_with_kernel(self, e, data):
        p = len(e)
        v1 = column(e)
        j = data.draw(st.integers(0, p - 1))
        odd = column(0 if x == j else data.draw(pos) for x in range(p))
        s1, c = data.draw(pos), data.draw(pos)
        mid = column(s1 * a + c * b for a, b in zip(v1.entries, odd.entries))
        from chanup.channel import lr_norm_sq
        assume(lr_norm_sq(v1) <= lr_norm_sq(mid))
        fp = odd_fast_path(v1, mid, odd)
        assert fp is not None and fp.leftover is None
        k = next(x for x in range(p) if x != j)
        r = proportional_split(mid, v1, odd, (j, k))
        assert all(v == 0 for v in r.leftover.entries)
        assert fp.z1 == v1.scaled(1 + r.s1)
        assert fp.z3 == odd.scaled(1 + r.s3)


class TestEpsilonPerturb:
    def test_three_zeros(self):
        out = epsilon_perturb(fcol("0.3", "0", "0", "0", "0.7"), 300)
        assert out.entries == (F(3, 10), F(1, 900), F(1, 900), F(1, 900), F(7, 10) - F(1, 300))
        assert out.mass == 1

    def test_single_zero_float(self):
        out = epsilon_perturb(column((0.4, 0, 0.6)), 1000)
        assert out.entries == pytest.approx((0.4, 0.001, 0.599))

    def test_no_zero(self):
        with pytest.raises(ValueError):
            epsilon_perturb(column((0.5, 0.5)), 10)

    def test_mass_too_small(self):
        with pytest.raises(MassTooSmall):
            epsilon_perturb(column((0.001, 0.0)), 10)
