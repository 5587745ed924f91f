import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curveclust.errors import ElementMismatchError, UndefinedIndexError
from curveclust.indices import (
    DistanceMatrix,
    adjusted_rand,
    dunn,
    index_function,
    silhouette,
)


def pinned(distances):
    return DistanceMatrix(dict(distances))


class TestSilhouette:
    def test_two_singletons_score_zero(self):
        dist = pinned({("a", "b"): 0.7})
        assert silhouette([{"a"}, {"b"}], dist) == 0.0

    def test_hand_computed_value(self):
        dist = pinned({("a", "b"): 0.1, ("a", "c"): 1.0, ("b", "c"): 1.0})
        # s(a) = s(b) = 0.9, s(c) = 0 -> mean 0.6
        assert silhouette([{"a", "b"}, {"c"}], dist) == pytest.approx(0.6)

    def test_perfect_separation(self):
        dist = pinned(
            {("a", "b"): 0.0, ("c", "d"): 0.0, ("a", "c"): 1.0, ("a", "d"): 1.0,
             ("b", "c"): 1.0, ("b", "d"): 1.0}
        )
        assert silhouette([{"a", "b"}, {"c", "d"}], dist) == 1.0

    def test_single_group_rejected(self):
        with pytest.raises(UndefinedIndexError):
            silhouette([{"a", "b"}], pinned({("a", "b"): 0.1}))

    def test_range(self):
        rng = np.random.default_rng(0)
        ids = list(range(6))
        dist = pinned({(i, j): rng.uniform(0, 1) for i in ids for j in ids if i < j})
        value = silhouette([{0, 1, 2}, {3, 4}, {5}], dist)
        assert -1.0 <= value <= 1.0


class TestDunn:
    def test_hand_computed_min_max(self):
        dist = pinned({("a", "b"): 0.1, ("a", "c"): 1.0, ("b", "c"): 1.0})
        assert dunn([{"a", "b"}, {"c"}], dist, "I1", "J1") == pytest.approx(10.0)

    def test_hand_computed_means(self):
        dist = pinned({("a", "b"): 0.1, ("a", "c"): 1.0, ("b", "c"): 1.0})
        assert dunn([{"a", "b"}, {"c"}], dist, "I3", "J2") == pytest.approx(10.0)

    def test_scale_invariance(self):
        rng = np.random.default_rng(1)
        ids = list(range(6))
        base = {(i, j): rng.uniform(0.1, 1) for i in ids for j in ids if i < j}
        groups = [{0, 1}, {2, 3}, {4, 5}]
        for inter in ("I1", "I2", "I3"):
            for intra in ("J1", "J2"):
                one = dunn(groups, pinned(base), inter, intra)
                two = dunn(groups, pinned({k: 2 * v for k, v in base.items()}), inter, intra)
                assert one == pytest.approx(two)

    def test_zero_denominator_sentinel(self):
        dist = pinned({("a", "b"): 1.0})
        assert dunn([{"a"}, {"b"}], dist) == float("inf")

    def test_single_group_rejected(self):
        with pytest.raises(UndefinedIndexError):
            dunn([{"a", "b"}], pinned({("a", "b"): 0.5}))


def partition_of_sizes(sizes, offset=0):
    groups = []
    n = offset
    for s in sizes:
        groups.append(frozenset(range(n, n + s)))
        n += s
    return groups


class TestAdjustedRand:
    def test_identical_partitions(self):
        p = partition_of_sizes((3, 4, 5))
        assert adjusted_rand(p, p) == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "sizes,expected",
        [
            ((10, 10, 10), 0.5538),
            ((10, 10, 20), 0.5185),
            ((10, 20, 10), 0.7417),
            ((20, 20, 10), 0.6755),
            ((20, 10, 20), 0.4096),
        ],
    )
    def test_merged_versus_split_constants(self, sizes, expected):
        three = partition_of_sizes(sizes)
        two = [three[0] | three[2], three[1]]
        assert adjusted_rand(two, three) == pytest.approx(expected, abs=1e-4)

    def test_hand_contingency(self):
        # pair counts computed by hand for a tiny 2x2 overlap
        p = [frozenset({0, 1}), frozenset({2, 3})]
        q = [frozenset({0, 2}), frozenset({1, 3})]
        # all pair counts C(1,2)=0 -> index 0, expectation (2*2)/6 -> ARI < 0
        assert adjusted_rand(p, q) == pytest.approx((0 - 4 / 6) / (2 - 4 / 6))

    @given(st.integers(0, 500))
    def test_symmetry_and_relabeling(self, seed):
        rng = np.random.default_rng(seed)
        labels_p = rng.integers(0, 3, 12)
        labels_q = rng.integers(0, 4, 12)
        p = [frozenset(np.flatnonzero(labels_p == g)) for g in range(3) if np.any(labels_p == g)]
        q = [frozenset(np.flatnonzero(labels_q == g)) for g in range(4) if np.any(labels_q == g)]
        assert adjusted_rand(p, q) == pytest.approx(adjusted_rand(q, p))
        assert adjusted_rand(p, list(reversed(q))) == pytest.approx(adjusted_rand(p, q))

    def test_universe_mismatch_rejected(self):
        with pytest.raises(ElementMismatchError):
            adjusted_rand([frozenset({0, 1})], [frozenset({0, 2})])


class TestIndexFunction:
    def test_dispatch(self):
        dist = pinned({("a", "b"): 0.1, ("a", "c"): 1.0, ("b", "c"): 1.0})
        groups = [{"a", "b"}, {"c"}]
        assert index_function("silhouette")(groups, dist) == pytest.approx(0.6)
        assert index_function("dunn", "I1", "J1")(groups, dist) == pytest.approx(10.0)
