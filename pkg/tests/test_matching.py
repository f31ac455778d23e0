"""Matching core: canonical form, validation, enumeration, label maps."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from dcmatch.errors import CrossingError, LabelError, ParseError
from dcmatch.matching import (
    Matching,
    edge_kind,
    enumerate_matchings,
    insert,
    is_crossing,
    is_ring,
    parse_matching,
    reflect,
    remove,
    rotate,
    skips,
    validate,
)

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]

# All five matchings on 6 points, in canonical enumeration order.
EXPECTED_K3 = [
    "1-2,3-4,5-6",
    "1-2,3-6,4-5",
    "1-4,2-3,5-6",
    "1-6,2-3,4-5",
    "1-6,2-5,3-4",
]


def all_perfect_matchings(points):
    """Every perfect matching of the labels, crossing or not."""
    if not points:
        yield ()
        return
    first = points[0]
    for j in range(1, len(points)):
        rest = points[1:j] + points[j + 1 :]
        for tail in all_perfect_matchings(rest):
            yield ((first, points[j]),) + tail


def matchings_strategy(max_k=6):
    return st.integers(1, max_k).flatmap(
        lambda k: st.sampled_from(enumerate_matchings(k))
    )


class TestCrossing:
    def test_interleaved_pairs_cross(self):
        assert is_crossing((1, 3), (2, 4))
        assert is_crossing((2, 4), (1, 3))
        assert is_crossing((1, 5), (3, 8))

    def test_nested_and_separated_do_not_cross(self):
        assert not is_crossing((1, 4), (2, 3))
        assert not is_crossing((1, 2), (3, 4))
        assert not is_crossing((2, 3), (1, 4))

    def test_shared_endpoint_is_not_a_crossing(self):
        assert not is_crossing((1, 3), (3, 5))
        assert not is_crossing((1, 3), (1, 5))

    def test_unordered_pairs_accepted(self):
        assert is_crossing((3, 1), (4, 2))


class TestValidate:
    def test_canonical_ordering(self):
        m = validate([(6, 1), (5, 2), (4, 3)])
        assert m.edges == ((1, 6), (2, 5), (3, 4))
        assert str(m) == "1-6,2-5,3-4"

    def test_k_mismatch(self):
        with pytest.raises(LabelError):
            validate([(1, 2)], k=2)

    def test_label_out_of_range(self):
        with pytest.raises(LabelError):
            validate([(1, 2), (3, 5)])
        with pytest.raises(LabelError):
            validate([(0, 1), (2, 3)])

    def test_duplicate_label(self):
        with pytest.raises(LabelError):
            validate([(1, 2), (2, 3)], k=2)

    def test_self_loop(self):
        with pytest.raises(LabelError):
            validate([(1, 1), (2, 3)], k=2)

    def test_crossing_rejected_with_witness(self):
        with pytest.raises(CrossingError) as info:
            validate([(1, 3), (2, 4)])
        seen = {info.value.first, info.value.second}
        assert seen == {(1, 3), (2, 4)}

    def test_crossing_in_larger_matching(self):
        with pytest.raises(CrossingError):
            validate([(1, 5), (2, 3), (4, 7), (6, 8)])


class TestParse:
    def test_round_trip(self):
        for text in EXPECTED_K3:
            assert str(parse_matching(text)) == text

    def test_unsorted_input_is_canonicalized(self):
        assert str(parse_matching("5-6,2-1,4-3")) == "1-2,3-4,5-6"

    @pytest.mark.parametrize("bad", ["", "1", "1-2-3", "a-b", "1-2,,3-4", "1,2"])
    def test_malformed(self, bad):
        with pytest.raises(ParseError):
            parse_matching(bad)

    def test_parse_validates(self):
        with pytest.raises(CrossingError):
            parse_matching("1-3,2-4")

    def test_json_round_trip(self):
        m = parse_matching("1-6,2-5,3-4")
        d = m.to_json_dict()
        assert d == {"k": 3, "edges": [[1, 6], [2, 5], [3, 4]]}
        from dcmatch.matching import matching_from_json

        assert matching_from_json(d) == m


class TestEnumerate:
    def test_k3_exact(self):
        assert [str(m) for m in enumerate_matchings(3)] == EXPECTED_K3

    @pytest.mark.parametrize("k", range(1, 9))
    def test_counts_are_catalan(self, k):
        assert len(enumerate_matchings(k)) == CATALAN[k]

    @pytest.mark.parametrize("k", range(1, 6))
    def test_matches_brute_force_filter(self, k):
        brute = set()
        for pairing in all_perfect_matchings(tuple(range(1, 2 * k + 1))):
            if all(
                not is_crossing(e, f)
                for e, f in itertools.combinations(pairing, 2)
            ):
                brute.add(validate(pairing))
        assert brute == set(enumerate_matchings(k))

    def test_all_outputs_valid_and_sorted(self):
        ms = enumerate_matchings(5)
        assert ms == sorted(ms, key=lambda m: m.edges)
        assert len(set(ms)) == len(ms)
        for m in ms:
            validate(m.edges)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            enumerate_matchings(0)
        with pytest.raises(ValueError):
            enumerate_matchings(13)
        # An explicit cap overrides the default limit.
        with pytest.raises(ValueError):
            enumerate_matchings(5, max_k=4)
        assert len(enumerate_matchings(3, max_k=3)) == 5


class TestRelabelings:
    def test_rotate_example(self):
        m = parse_matching("1-2,3-4,5-6")
        assert str(rotate(m, 1)) == "1-6,2-3,4-5"

    def test_rotate_full_turn_is_identity(self):
        m = parse_matching("1-8,2-3,4-7,5-6")
        assert rotate(m, 8) == m
        assert rotate(m, -8) == m

    @given(matchings_strategy(), st.integers(-20, 20), st.integers(-20, 20))
    def test_rotate_composes(self, m, s, t):
        assert rotate(rotate(m, s), t) == rotate(m, s + t)

    @given(matchings_strategy())
    def test_reflect_is_an_involution(self, m):
        assert reflect(reflect(m)) == m

    def test_reflect_example(self):
        assert str(reflect(parse_matching("1-2,3-6,4-5"))) == "1-4,2-3,5-6"

    @given(matchings_strategy())
    def test_relabelings_preserve_validity(self, m):
        validate(rotate(m, 3).edges)
        validate(reflect(m).edges)


class TestEdgeKinds:
    def test_boundary_and_diagonal(self):
        m = parse_matching("1-8,2-3,4-7,5-6")
        assert edge_kind(m, (2, 3)) == "boundary"
        assert edge_kind(m, (5, 6)) == "boundary"
        assert edge_kind(m, (1, 8)) == "boundary"
        assert edge_kind(m, (4, 7)) == "diagonal"

    def test_wrap_edge_is_boundary(self):
        m = parse_matching("1-6,2-3,4-5")
        assert edge_kind(m, (1, 6)) == "boundary"

    def test_missing_edge_rejected(self):
        m = parse_matching("1-2,3-4")
        with pytest.raises(LabelError):
            edge_kind(m, (1, 4))

    def test_skips_of_ring(self):
        m = parse_matching("1-2,3-4,5-6,7-8")
        assert skips(m) == [(2, 3), (4, 5), (6, 7), (8, 1)]

    def test_skips_count(self):
        # Every boundary edge removes exactly one consecutive pair, so
        # #skips = 2k - #boundary edges, minimized exactly by the rings.
        for m in enumerate_matchings(4):
            boundary = sum(1 for e in m.edges if edge_kind(m, e) == "boundary")
            assert len(skips(m)) == 8 - boundary
            assert (len(skips(m)) == 4) == is_ring(m)

    def test_rings(self):
        assert is_ring(parse_matching("1-2,3-4,5-6"))
        assert is_ring(parse_matching("1-6,2-3,4-5"))
        assert not is_ring(parse_matching("1-6,2-5,3-4"))
        rings = [m for m in enumerate_matchings(4) if is_ring(m)]
        assert [str(m) for m in rings] == ["1-2,3-4,5-6,7-8", "1-8,2-3,4-5,6-7"]


class TestInsertRemove:
    def test_insert_examples(self):
        host = parse_matching("1-2")
        assert str(insert(host, parse_matching("1-4,2-3"), 1)) == "1-6,2-5,3-4"
        assert str(insert(host, parse_matching("1-2,3-4"), 2)) == "1-2,3-4,5-6"

    def test_insert_at_zero_shifts_host(self):
        host = parse_matching("1-2")
        assert str(insert(host, parse_matching("1-2"), 0)) == "1-2,3-4"
        assert str(insert(host, parse_matching("1-2"), 1)) == "1-4,2-3"

    def test_gap_range_checked(self):
        host = parse_matching("1-2,3-4")
        inner = parse_matching("1-2")
        with pytest.raises(ValueError):
            insert(host, inner, 5)
        with pytest.raises(ValueError):
            insert(host, inner, -1)

    def test_remove_inverts_insert(self):
        for host in enumerate_matchings(3):
            for inner in enumerate_matchings(2):
                for gap in range(0, 7):
                    whole = insert(host, inner, gap)
                    back_host, back_inner = remove(whole, gap, 2)
                    assert back_host == host
                    assert back_inner == inner

    def test_remove_rejects_cut_edges(self):
        m = parse_matching("1-6,2-5,3-4")
        with pytest.raises(LabelError):
            remove(m, 1, 1)
        host, inner = remove(m, 2, 1)
        assert str(host) == "1-4,2-3"
        assert str(inner) == "1-2"

    @given(matchings_strategy(4), matchings_strategy(3), st.integers(0, 8))
    def test_insert_always_valid(self, host, inner, gap):
        if gap <= host.n_points:
            validate(insert(host, inner, gap).edges)
