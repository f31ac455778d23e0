"""Exact count formulas, series coefficients, and their oracles."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcmatch.compat import neighbors
from dcmatch.counting import (
    SeriesTable,
    big_component_order,
    big_order_inequalities,
    binomial,
    catalan,
    count_DB,
    count_DBD,
    count_EDB_components,
    count_I,
    count_L_even,
    count_L_odd,
    count_pairs,
    edge_series,
    fuss_a,
    fuss_series,
    growth_estimate,
    medium_even_order,
    medium_odd_order,
    riordan,
)
from dcmatch.errors import DomainError
from dcmatch.families import generate_family, rings
from dcmatch.matching import enumerate_matchings

CATALAN_ROW = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012]
FUSS_ROW = [1, 1, 4, 22, 140, 969]
RIORDAN_ROW = {2: 1, 3: 1, 4: 3, 5: 6, 6: 15, 7: 36, 8: 91, 12: 4213}
EDGE_ROW = (1, 0, 1, 1, 9, 21, 125, 421, 2161, 8677, 42245)


def quadruple_partitions(points: tuple[int, ...]) -> int:
    """Count partitions of the given cyclic points into non-crossing
    4-sets by picking the first point's block and recursing into the
    gaps it leaves."""
    if not points:
        return 1
    if len(points) % 4:
        return 0
    first, rest = points[0], points[1:]
    total = 0
    for a, b, c in combinations(range(len(rest)), 3):
        gaps = (rest[:a], rest[a + 1 : b], rest[b + 1 : c], rest[c + 1 :])
        product = 1
        for gap in gaps:
            product *= quadruple_partitions(gap)
            if product == 0:
                break
        total += product
    return total


class TestCatalan:
    def test_row(self):
        assert [catalan(k) for k in range(13)] == CATALAN_ROW

    def test_matches_enumeration(self):
        assert catalan(0) == 1
        for k in range(1, 7):
            assert catalan(k) == len(enumerate_matchings(k))

    @given(st.integers(min_value=0, max_value=60))
    def test_ballot_identity(self, k):
        assert catalan(k) == comb(2 * k, k) - comb(2 * k, k + 1)

    def test_negative(self):
        with pytest.raises(DomainError):
            catalan(-1)
        with pytest.raises(DomainError):
            binomial(-1, 0)


class TestFuss:
    def test_row(self):
        assert [fuss_a(l) for l in range(6)] == FUSS_ROW

    def test_brute_force_oracle(self):
        for l in range(4):
            got = quadruple_partitions(tuple(range(1, 4 * l + 1)))
            assert fuss_a(l) == got

    def test_series_satisfies_its_recursion(self):
        # Termwise: coefficient m >= 1 is the sum of f_i f_j f_l f_t over
        # all splits i+j+l+t = m-1.
        f = fuss_series(12).coefficients
        assert f[0] == 1
        for m in range(1, 13):
            expected = sum(
                f[i] * f[j] * f[l] * f[m - 1 - i - j - l]
                for i in range(m)
                for j in range(m - i)
                for l in range(m - i - j)
            )
            assert f[m] == expected

    def test_negative(self):
        with pytest.raises(DomainError):
            fuss_a(-1)


class TestRiordan:
    def test_frozen_values(self):
        for k, r in RIORDAN_ROW.items():
            assert riordan(k) == r

    def test_matches_ring_degree(self):
        for k in range(2, 7):
            assert riordan(k) == len(neighbors(rings(k)[0]))

    def test_ratio_recurrence(self):
        # r_k = (k-1)(2 r_{k-1} + 3 r_{k-2}) / (k+1), seeded r_1=0, r_2=1.
        prev2, prev = 0, 1
        for k in range(3, 30):
            val = Fraction((k - 1) * (2 * prev + 3 * prev2), k + 1)
            assert val.denominator == 1
            assert riordan(k) == val
            prev2, prev = prev, int(val)

    def test_domain(self):
        with pytest.raises(DomainError):
            riordan(1)


class TestFamilyCounts:
    def test_isolated_vs_generated(self):
        for l in range(1, 6):
            assert count_I(l) == len(generate_family("I", 2 * l - 1))

    def test_leaves_vs_generated(self):
        assert count_L_odd(1) == 0
        for l in (2, 3, 4):
            assert count_L_odd(l) == len(generate_family("L", 2 * l - 1))
        for l in (1, 2, 3, 4):
            assert count_L_even(l) == len(generate_family("L", 2 * l))

    def test_paired_vs_generated(self):
        for l in (1, 2, 3, 4):
            assert count_DB(l) == len(generate_family("DB", 2 * l))
            assert count_DB(l) == 2 * count_pairs(l)

    def test_star_components_vs_generated(self):
        for l in (3, 4, 5):
            k = 2 * l - 1
            assert count_DBD(l) == len(generate_family("DBD", k))
            star_total = len(generate_family("DBD", k)) + len(
                generate_family("DBDL", k)
            )
            assert count_DBD(l) * medium_odd_order(l) == star_total

    def test_path_components_vs_generated(self):
        for l in (3, 4):
            k = 2 * l
            leaves = generate_family("EDBL1", k) | generate_family("EDBL2", k)
            path_total = len(generate_family("EDB", k)) + len(leaves)
            assert count_EDB_components(l) * medium_even_order(l) == path_total

    def test_table_rows(self):
        assert [count_I(l) for l in range(1, 7)] == [1, 3, 15, 91, 612, 4389]
        assert [count_pairs(l) for l in range(1, 7)] == [1, 4, 12, 32, 80, 192]
        assert [count_DBD(l) for l in range(3, 7)] == [5, 14, 36, 88]
        assert [count_EDB_components(l) for l in range(3, 7)] == [6, 16, 40, 96]
        assert [medium_odd_order(l) for l in range(2, 7)] == [2, 3, 4, 5, 6]
        assert [medium_even_order(l) for l in range(2, 7)] == [6, 12, 18, 24, 30]

    def test_validity_thresholds(self):
        with pytest.raises(DomainError):
            count_DBD(2)
        with pytest.raises(DomainError):
            count_EDB_components(2)
        with pytest.raises(DomainError):
            medium_odd_order(1)
        with pytest.raises(DomainError):
            medium_even_order(1)
        with pytest.raises(DomainError):
            count_I(0)


class TestEdgeSeries:
    def test_frozen_row(self):
        assert edge_series(10).coefficients == EDGE_ROW

    def test_matches_neighbor_sums(self):
        d = edge_series(6)
        for k in range(1, 7):
            degree_sum = sum(len(neighbors(m)) for m in enumerate_matchings(k))
            assert degree_sum == 2 * d[k]

    def test_prefix_stability(self):
        long = edge_series(16).coefficients
        assert long[:11] == EDGE_ROW
        assert edge_series(3).coefficients == (1, 0, 1, 1)

    def test_table_protocol(self):
        table = edge_series(4)
        assert isinstance(table, SeriesTable)
        assert len(table) == 5
        assert table[4] == 9
        assert table.name == "edge counts"
        assert all(isinstance(c, int) for c in table.coefficients)

    def test_negative(self):
        with pytest.raises(DomainError):
            edge_series(-1)


class TestGrowth:
    def test_early_ratios(self):
        assert growth_estimate(3) == 1
        assert growth_estimate(4) == 9
        assert isinstance(growth_estimate(5), Fraction)

    def test_probe_window(self):
        assert Fraction(497, 100) <= growth_estimate(30) <= Fraction(557, 100)

    def test_trend_settles(self):
        ratios = {n: growth_estimate(n) for n in range(10, 31)}
        early = [ratios[n] for n in range(10, 21)]
        late = [ratios[n] for n in range(20, 31)]
        assert max(late) - min(late) < max(early) - min(early)
        assert late == sorted(late)

    def test_domain(self):
        with pytest.raises(DomainError):
            growth_estimate(2)


class TestBigComponent:
    def test_frozen_orders(self):
        assert big_component_order(9) == 4070
        assert big_component_order(10) == 15676

    def test_subtraction_shape(self):
        assert big_component_order(9) == 4862 - 612 - 180
        assert big_component_order(10) == 16796 - 160 - 960

    def test_wider_sizes_positive(self):
        for k in range(9, 40):
            order = big_component_order(k)
            assert 0 < order < catalan(k)

    def test_inequalities(self):
        assert big_order_inequalities(40)

    def test_domains(self):
        with pytest.raises(DomainError):
            big_component_order(8)
        with pytest.raises(DomainError):
            big_order_inequalities(4)
