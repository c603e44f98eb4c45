import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import random_dyadic_set, random_point_set
from radmax import dyadic
from radmax.dyadic import DilationSet, pow2
from radmax.parsing import parse_set

F = Fraction


def pts(*xs) -> DilationSet:
    return DilationSet(points=tuple(F(x) for x in xs))


# -- brute-force oracles --------------------------------------------------------

def brute_cover(E: DilationSet, a: Fraction) -> int:
    """Smallest number of length-``a`` intervals, with left ends on the endpoint lattice, covering ``E``."""
    comps = list(E.components)
    if not comps:
        return 0
    starts = sorted({x for c in comps for x in c} | {c[1] - a for c in comps})
    for n in range(1, len(comps) + 2):
        for choice in itertools.combinations(starts, n):
            if all(any(s <= lo and hi <= s + a for s in choice) for lo, hi in _pieces(comps, choice, a)):
                return n
    raise AssertionError("no cover found")


def _pieces(comps, starts, a):
    # split each component at the cover breakpoints so containment is checked piecewise
    cuts = sorted({s for s in starts} | {s + a for s in starts})
    for lo, hi in comps:
        inner = [c for c in cuts if lo < c < hi]
        edges = [lo, *inner, hi]
        for x, y in zip(edges, edges[1:]):
            yield x, y
        if lo == hi:
            yield lo, hi


def brute_binary(E: DilationSet, j: int) -> int:
    """Greedy over the grid ``2^j Z``: smallest set of grid cells whose union covers ``E``."""
    h = pow2(j)
    cells = set()
    for lo, hi in E.components:
        m0 = math.floor(lo / h)
        m1 = math.ceil(hi / h) - 1 if hi > lo else m0
        cells.update(range(m0, max(m0, m1) + 1))
    # drop cells whose only contact with E is a shared endpoint already covered
    need = []
    for m in sorted(cells):
        a, b = m * h, (m + 1) * h
        if any(lo < b and hi > a for lo, hi in E.components) or any(a <= lo == hi <= b and not
                                                                   any(c * h <= lo <= (c + 1) * h for c in need)
                                                                   for lo, hi in E.components):
            need.append(m)
    return len(need)


def brute_neighborhood(E: DilationSet, k: int, radius: Fraction, samples: int = 4096) -> Fraction:
    """Exact by breakpoints: the covered set is a union of intervals with ends at ``x ± radius`` or block ends."""
    lo, hi = pow2(k), pow2(k + 1)
    comps = E.block_components(k)
    if not comps:
        return F(0)
    cuts = {lo, hi}
    for a, b in comps:
        cuts.update(x for x in (a - radius, b + radius, a, b) if lo <= x <= hi)
    cuts = sorted(cuts)
    total = F(0)
    for x, y in zip(cuts, cuts[1:]):
        mid = (x + y) / 2
        if any(a - radius <= mid <= b + radius for a, b in comps):
            total += y - x
    return total


# -- generators -----------------------------------------------------------------

def test_lacunary_example():
    E = dyadic.lacunary(F(1, 2), (-3, 0))
    assert E.points == (F(1, 8), F(1, 4), F(1, 2), F(1))
    assert not E.intervals


def test_cantor_depth_one():
    assert dyadic.cantor(1, block=(1, 2)).components == ((F(1), F(4, 3)), (F(5, 3), F(2)))


def test_dilated_example():
    E = dyadic.dilated(pts(1, F(3, 2)), (0, 1))
    assert E.points == (1, F(3, 2), 2, 3)


def test_dilated_contains_exactly_the_dilates():
    base = parse_set("explicit:1,5/4,[3/2;7/4]")
    E = dyadic.dilated(base, (-2, 2))
    want = DilationSet()
    for k in range(-2, 3):
        want = want.union(base.scaled(k))
    assert E.components == want.components


def test_rejects_nonpositive_coordinates():
    with pytest.raises(ValueError):
        pts(0)
    with pytest.raises(ValueError):
        DilationSet(intervals=((F(-1), F(1)),))


def test_cantor_depth_over_budget_rejected():
    with pytest.raises(ValueError):
        dyadic.cantor(40)


def test_normalization_merges_and_sorts():
    E = DilationSet(intervals=((F(2), F(3)), (F(1), F(2)), (F(5), F(5))), points=(F(3, 2), F(7)))
    assert E.intervals == ((F(1), F(3)),)
    assert E.points == (F(5), F(7))


def test_json_round_trip():
    E = parse_set("dilated:base={cantor:depth=3},k=-1..1")
    assert DilationSet.from_json(E.to_json()) == E


# -- blocks ---------------------------------------------------------------------

def test_block_examples():
    E = pts(1, 3)
    assert dyadic.block(E, 0).points == (F(1),)
    assert dyadic.block(E, 1).points == (F(3),)
    assert dyadic.block(DilationSet(intervals=((F(1), F(2)),)), 5).is_empty


def test_block_is_inside_block_interval():
    rng = random.Random(1)
    for _ in range(50):
        E = random_dyadic_set(rng)
        for k in E.nonempty_blocks():
            for a, b in dyadic.block(E, k).components:
                assert pow2(k) <= a <= b <= pow2(k + 1)


# -- covering numbers -----------------------------------------------------------

def test_entropy_number_examples():
    assert dyadic.entropy_number(pts(1, F(3, 2), 2), F(3, 5)).value == 2
    assert brute_cover(pts(1, F(3, 2), 2), F(3, 5)) == 2
    assert dyadic.entropy_number(DilationSet(), F(1, 8)).value == 0


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_entropy_number_cantor(m):
    E = dyadic.cantor(m, block=(1, 2))
    assert len(E.intervals) == 2 ** m
    assert dyadic.entropy_number(E, 2 * F(1, 3) ** m).value == 2 ** m


def test_greedy_matches_brute_force():
    rng = random.Random(2)
    for _ in range(60):
        E = random_dyadic_set(rng, blocks=(0, 0), M=4, max_comps=3)
        a = pow2(rng.randint(-4, 0)) * rng.choice([1, F(3, 2)])
        assert dyadic.entropy_number(E, a).value == brute_cover(E, a)


def test_binary_entropy_examples():
    assert dyadic.binary_entropy(pts(F(9, 10), F(11, 10)), 0).value == 2
    for j in range(-5, 3):
        assert dyadic.binary_entropy(pts(F(3, 2)), j).value == 1
    # minimal binary cover of [1, 2] at j=-1: [1, 3/2] and [3/2, 2]
    assert dyadic.binary_entropy(DilationSet(intervals=((F(1), F(2)),)), -1).value == 2


def test_binary_entropy_matches_grid_count():
    rng = random.Random(3)
    for _ in range(100):
        E = random_dyadic_set(rng, blocks=(-1, 1), M=4)
        j = rng.randint(-5, 0)
        assert dyadic.binary_entropy(E, j).value == brute_binary(E, j)


def test_cover_count_zero_iff_empty():
    assert dyadic.entropy_number(DilationSet(), 1).value == 0
    assert dyadic.binary_entropy(DilationSet(), 0).value == 0
    assert dyadic.entropy_number(pts(5), F(1, 1024)).value == 1


def test_entropy_number_rejects_nonpositive_scale():
    with pytest.raises(ValueError):
        dyadic.entropy_number(pts(1), 0)


# -- neighborhoods and shells ---------------------------------------------------

def test_neighborhood_examples():
    assert dyadic.neighborhood_measure(pts(1), 0, 3) == F(1, 4)
    assert dyadic.neighborhood_measure(pts(1), 5, 3) == 0
    full = DilationSet(intervals=((F(1), F(2)),))
    for n in range(8):
        assert dyadic.neighborhood_measure(full, 0, n) == 1


def test_shell_examples():
    assert dyadic.shell_measure(pts(1), 0, 3) == F(1, 8)
    assert dyadic.shell_measure(pts(1), 4, 3) == 0
    # telescoping towards |W_1^0| = 1 with a geometric tail
    for M in (4, 8, 12):
        s = sum(dyadic.shell_measure(pts(1), 0, m) for m in range(1, M + 1))
        assert abs(s - 1) <= pow2(-M)


def test_neighborhood_matches_breakpoint_oracle():
    rng = random.Random(4)
    for _ in range(100):
        E = random_dyadic_set(rng)
        for k in E.nonempty_blocks():
            n = rng.randint(0, 8)
            assert dyadic.neighborhood_measure(E, k, n) == brute_neighborhood(E, k, pow2(k - n + 1))


def test_shell_components_agree_with_measure():
    rng = random.Random(5)
    for _ in range(60):
        E = random_dyadic_set(rng)
        for k in E.nonempty_blocks():
            for n in range(0, 8):
                assert dyadic.union_length(dyadic.shell_components(E, k, n)) == dyadic.shell_measure(E, k, n)


def test_shell_telescoping_exact_for_points():
    rng = random.Random(6)
    for _ in range(50):
        k, M = rng.randint(-2, 2), rng.randint(3, 8)
        E = random_point_set(rng, k, M)
        n, top = rng.randint(0, M), M + 6
        total = sum(dyadic.shell_measure(E, k, m) for m in range(n, top + 1))
        inner = brute_neighborhood(E, k, pow2(k - top))
        assert total == dyadic.neighborhood_measure(E, k, n) - inner


def test_shell_index_locates_radius():
    E = pts(1)
    for n in range(1, 10):
        r = 1 + F(3, 2) * pow2(-n)  # strictly between 2^{-n} and 2^{-n+1}
        assert dyadic.shell_index(E, 0, r) == n
    assert dyadic.shell_index(E, 0, F(1)) is None


def test_local_width_examples():
    assert dyadic.local_width(pts(F(3, 2)), 2) == F(1, 2)
    assert dyadic.local_width(DilationSet(), 3) == 0
    E0 = dyadic.cantor(3, block=(1, 2))
    r = pow2(-5)
    want = dyadic.union_length(dyadic._merge([(a - r, b + r) for a, b in E0.intervals]))
    assert dyadic.local_width(E0, 5) == want


def test_local_width_rejects_sets_outside_base_block():
    with pytest.raises(ValueError):
        dyadic.local_width(pts(3), 2)


def test_neighborhood_in_rejects_nothing_and_clips():
    E = pts(1)
    assert dyadic.neighborhood_in(E, (F(1), F(2)), F(1, 4)) == F(1, 4)
    assert dyadic.neighborhood_in(E, (F(2), F(3)), F(1, 4)) == 0


# -- entropy exponent -----------------------------------------------------------

def test_kappa_lacunary_tends_to_zero():
    E = dyadic.lacunary(F(1, 2), (-4, 4))
    est = dyadic.kappa_estimate(E, [pow2(-j) for j in range(2, 24)])
    assert all(a >= b for a, b in zip(est.values, est.values[1:]))
    assert est.kappa_hat == pytest.approx(math.log(2) / math.log(1 + 2 ** 23))


def test_kappa_full_intervals():
    E = parse_set("dilated:base={explicit:[1;2]},k=-2..2")
    est = dyadic.kappa_estimate(E, [pow2(-j) for j in (4, 8, 12)])
    for dl, v in zip(est.deltas, est.values):
        n = math.ceil(1 / dl)
        assert v == pytest.approx(math.log(1 + n) / math.log(1 + 1 / float(dl)))


def test_kappa_flags_sub_resolution_deltas():
    E = parse_set("dilated:base={cantor:depth=4},k=0..1")
    est = dyadic.kappa_estimate(E, [pow2(-j) for j in range(2, 10)])
    assert est.below_resolution == [j > E.resolution for j in range(2, 10)]
    assert est.kappa_hat == est.values[[not f for f in est.below_resolution].index(False) - 1]


def test_kappa_grid_validation():
    with pytest.raises(ValueError):
        dyadic.kappa_estimate(pts(1), [F(1, 4), F(1, 2)])
    with pytest.raises(ValueError):
        dyadic.kappa_estimate(pts(1), [F(1, 8), F(1, 4)])


def test_critical_exponent():
    assert dyadic.critical_exponent(0, 3) == 1
    assert dyadic.critical_exponent(1, 2) == 2
    assert dyadic.critical_exponent(math.log(2) / math.log(3), 3) == pytest.approx(1.3155, abs=1e-4)
    with pytest.raises(ValueError):
        dyadic.critical_exponent(1.5, 3)


# -- properties -----------------------------------------------------------------

def test_entropy_monotone_in_scale_and_set():
    rng = random.Random(7)
    for _ in range(100):
        E = random_dyadic_set(rng)
        sub = dyadic.from_components([c for c in E.components if rng.random() < 0.6], resolution=E.resolution)
        scales = sorted(pow2(rng.randint(-8, 1)) for _ in range(4))
        counts = [dyadic.entropy_number(E, a).value for a in scales]
        assert all(x >= y for x, y in zip(counts, counts[1:]))
        for a in scales:
            assert dyadic.entropy_number(sub, a).value <= dyadic.entropy_number(E, a).value
        for k in sub.nonempty_blocks():
            for n in (0, 3, 6):
                assert dyadic.neighborhood_measure(sub, k, n) <= dyadic.neighborhood_measure(E, k, n)


def test_entropy_subadditive():
    rng = random.Random(8)
    for _ in range(100):
        E, G = random_dyadic_set(rng), random_dyadic_set(rng)
        a = pow2(rng.randint(-8, 1))
        assert (dyadic.entropy_number(E.union(G), a).value
                <= dyadic.entropy_number(E, a).value + dyadic.entropy_number(G, a).value)


@given(st.integers(-6, 6), st.integers(0, 10 ** 6), st.integers(-8, 2))
def test_dilation_covariance(k, seed, j):
    E = random_dyadic_set(random.Random(seed))
    a = pow2(j)
    assert dyadic.entropy_number(E.scaled(k), pow2(k) * a).value == dyadic.entropy_number(E, a).value
    assert dyadic.binary_entropy(E.scaled(k), j + k).value == dyadic.binary_entropy(E, j).value
    for kk in E.nonempty_blocks():
        assert dyadic.neighborhood_measure(E.scaled(k), kk + k, 3) == pow2(k) * dyadic.neighborhood_measure(E, kk, 3)


@given(st.integers(0, 10 ** 6), st.integers(-7, 1))
def test_binary_sandwich_property(seed, j):
    E = random_dyadic_set(random.Random(seed))
    N = dyadic.entropy_number(E, pow2(j)).value
    assert N <= dyadic.binary_entropy(E, j).value <= 3 * N


def test_union_resolution_is_the_coarser():
    a = parse_set("cantor:depth=4")
    b = parse_set("cantor:depth=8")
    assert a.union(b).resolution == min(a.resolution, b.resolution)
