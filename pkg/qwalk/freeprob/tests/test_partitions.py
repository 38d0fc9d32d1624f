"""Tests for set partitions, NC(p) and Kreweras complements."""

from math import comb

import pytest

from qwalk.errors import PartitionError
from qwalk.freeprob import (
    SetPartition,
    all_set_partitions,
    delta_pair,
    enumerate_nc,
    free_poisson_moment,
    kreweras,
    narayana_count,
)


def catalan(p: int) -> int:
    return comb(2 * p, p) // (p + 1)


class TestSetPartition:
    """Construction and the crossing predicate."""

    def test_blocks_are_normalised(self):
        """Test that blocks are sorted and ordered by minimum."""
        pi = SetPartition(4, ((4, 2), (3, 1)))
        assert pi.blocks == ((1, 3), (2, 4))
        assert pi.size == 2

    def test_invalid_cover(self):
        """Test that blocks must cover {1..p} exactly once."""
        with pytest.raises(PartitionError):
            SetPartition(3, ((1, 2),))
        with pytest.raises(PartitionError):
            SetPartition(3, ((1, 2), (2, 3)))

    def test_from_labels(self):
        """Test restricted-growth labels."""
        assert SetPartition.from_labels([0, 1, 0, 2]).blocks == ((1, 3), (2,), (4,))

    def test_crossing(self):
        """Test {{1,3},{2,4}} crosses and {{1,4},{2,3}} does not."""
        assert not SetPartition(4, ((1, 3), (2, 4))).is_noncrossing
        assert SetPartition(4, ((1, 4), (2, 3))).is_noncrossing

    def test_bell_numbers(self):
        """Test the number of all set partitions for p <= 6."""
        assert [sum(1 for _ in all_set_partitions(p)) for p in range(1, 7)] == [1, 2, 5, 15, 52, 203]


class TestEnumerateNC:
    """Noncrossing enumeration."""

    @pytest.mark.parametrize("p", range(1, 11))
    def test_catalan(self, p):
        """Test |NC(p)| = Catalan(p)."""
        assert len(enumerate_nc(p)) == catalan(p)

    def test_small_cases(self):
        """Test |NC(1)| = 1, |NC(3)| = 5 and the excluded crossing at p = 4."""
        assert len(enumerate_nc(1)) == 1
        assert len(enumerate_nc(3)) == 5
        assert SetPartition(4, ((1, 3), (2, 4))) not in enumerate_nc(4)

    @pytest.mark.parametrize("p", range(1, 7))
    def test_matches_filtered_partitions(self, p):
        """Test enumeration against filtering all partitions by the predicate."""
        expected = {pi for pi in all_set_partitions(p) if pi.is_noncrossing}
        assert set(enumerate_nc(p)) == expected

    def test_out_of_range(self):
        """Test that p outside [1, cap] raises."""
        with pytest.raises(PartitionError):
            enumerate_nc(0)
        with pytest.raises(PartitionError):
            enumerate_nc(13)


class TestNarayana:
    """Block-count refinement of Catalan numbers."""

    def test_small_rows(self):
        """Test rows p = 2 and p = 3."""
        assert [narayana_count(2, r) for r in (1, 2)] == [1, 1]
        assert [narayana_count(3, r) for r in (1, 2, 3)] == [1, 3, 1]

    @pytest.mark.parametrize("p", range(1, 9))
    def test_closed_form(self, p):
        """Test Nar(p, r) = C(p, r) C(p, r - 1) / p and the row sum."""
        row = [narayana_count(p, r) for r in range(1, p + 1)]
        assert row == [comb(p, r) * comb(p, r - 1) // p for r in range(1, p + 1)]
        assert sum(row) == catalan(p)


class TestFreePoissonMoment:
    """NC sums sum_pi t^{|pi|}."""

    def test_catalan_at_one(self):
        """Test t = 1, p = 3 gives 5."""
        assert free_poisson_moment(1.0, 3) == 5

    @pytest.mark.parametrize("t", [0.5, 2.0, 3.7])
    def test_second_moment(self, t):
        """Test p = 2 gives t + t^2."""
        assert free_poisson_moment(t, 2) == pytest.approx(t + t * t)

    def test_zero_rate(self):
        """Test t = 0 gives 0."""
        assert free_poisson_moment(0.0, 4) == 0

    @pytest.mark.parametrize("t", [0.5, 2.0, 3.0])
    @pytest.mark.parametrize("p", range(1, 9))
    def test_inversion_identity(self, t, p):
        """Test sum t^{|pi|} = t^{p+1} sum t^{-|pi|}."""
        lhs = free_poisson_moment(t, p)
        rhs = t ** (p + 1) * free_poisson_moment(1 / t, p)
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestKreweras:
    """Kreweras complement."""

    def test_extremes(self):
        """Test one block <-> singletons."""
        assert kreweras(SetPartition.one_block(5)) == SetPartition.singletons(5)
        assert kreweras(SetPartition.singletons(2)) == SetPartition.one_block(2)

    def test_two_pairs(self):
        """Test Kr({{1,2},{3,4}}) = {{1},{2,4},{3}}."""
        result = kreweras(SetPartition(4, ((1, 2), (3, 4))))
        assert result == SetPartition(4, ((1,), (2, 4), (3,)))
        assert result.size == 3

    @pytest.mark.parametrize("p", range(1, 9))
    def test_block_count_identity(self, p):
        """Test |pi| + |Kr(pi)| = p + 1 and Kr(pi) noncrossing for all of NC(p)."""
        for pi in enumerate_nc(p):
            complement = kreweras(pi)
            assert complement.is_noncrossing
            assert pi.size + complement.size == p + 1

    def test_crossing_input(self):
        """Test that a crossing partition raises."""
        with pytest.raises(PartitionError):
            kreweras(SetPartition(4, ((1, 3), (2, 4))))


class TestDeltaPair:
    """The indicator |b & c| = |(b - 1) & c|."""

    def test_one_block_pair(self):
        """Test pi = sigma = one block."""
        assert delta_pair(SetPartition.one_block(4), SetPartition.one_block(4)) == 1

    @pytest.mark.parametrize("p", range(2, 6))
    def test_singletons_need_one_block(self, p):
        """Test that sigma = singletons gives 1 exactly for the one-block pi."""
        sigma = SetPartition.singletons(p)
        for pi in all_set_partitions(p):
            assert delta_pair(pi, sigma) == int(pi.size == 1)

    @pytest.mark.parametrize("p", range(1, 7))
    def test_kreweras_pairs(self, p):
        """Test delta(pi, Kr(pi)) = 1 on NC(p)."""
        for pi in enumerate_nc(p):
            assert delta_pair(pi, kreweras(pi)) == 1

    @pytest.mark.parametrize("p", range(1, 6))
    def test_block_bound(self, p):
        """Test delta = 1 implies |pi| + |sigma| <= p + 1 over all pairs."""
        partitions = list(all_set_partitions(p))
        for pi in partitions:
            for sigma in partitions:
                if delta_pair(pi, sigma):
                    assert pi.size + sigma.size <= p + 1

    def test_size_mismatch(self):
        """Test that different ground sizes raise."""
        with pytest.raises(PartitionError):
            delta_pair(SetPartition.one_block(3), SetPartition.one_block(4))
