from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _samples import built_samples
from edgeiso.catalog import catalog_build
from edgeiso.delta import (
    TABLES,
    DeltaSequence,
    HspiParams,
    delta_of_named_table_row,
    enumerate_appropriate_symmetric,
    family_delta,
    hspi_delta,
    is_appropriate,
    is_symmetric,
    monotonic_segments,
    parse_delta,
    table_sequences,
)
from edgeiso.errors import CapacityError, InputError
from edgeiso.exact import delta_from_graph
from edgeiso.expr import build

Q3 = (0, 1, 1, 2, 1, 2, 2, 3)


@st.composite
def hspi_params(draw):
    p = draw(st.integers(2, 8))
    i = draw(st.integers(1, p // 2))
    s = draw(st.integers(1, 5))
    return HspiParams(s, p, i)


class TestSequence:
    def test_validation(self):
        with pytest.raises(InputError):
            DeltaSequence([])
        with pytest.raises(InputError):
            DeltaSequence([1, 2])
        with pytest.raises(InputError):
            DeltaSequence([0, -1])

    def test_parse(self):
        assert parse_delta("0,1,2") == (0, 1, 2)
        assert parse_delta(" [0, 1, 1, 2] ") == (0, 1, 1, 2)
        with pytest.raises(InputError):
            parse_delta("0,x")

    def test_serialisation(self):
        d = DeltaSequence(Q3)
        assert parse_delta(d.to_csv()) == d
        assert parse_delta(d.to_json()) == d
        assert d.prefix_sums() == [0, 0, 1, 2, 4, 5, 7, 9, 12]


class TestPredicates:
    def test_symmetric_examples(self):
        assert is_symmetric(Q3)
        assert not is_symmetric((0, 1, 1, 1))
        assert is_symmetric((0,))

    def test_appropriate_examples(self):
        assert is_appropriate(Q3)
        assert not is_appropriate((0, 2, 3))
        assert not is_appropriate((0, 1, 0, 1))

    def test_segments_examples(self):
        assert monotonic_segments((0, 1, 1, 2, 2, 3)).segments == ((0, 1), (2, 3), (4, 5))
        assert monotonic_segments(hspi_delta((3, 4, 2))).lengths() == [4, 4, 4]
        assert len(monotonic_segments(range(9))) == 1

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(0, 6), min_size=1, max_size=20))
    def test_segments_partition_and_maximal(self, vals):
        segs = monotonic_segments(vals).segments
        assert segs[0][0] == 0 and segs[-1][1] == len(vals) - 1
        for (a, b), (c, _) in zip(segs, segs[1:]):
            assert c == b + 1
            # maximality: the next value does not continue the run
            assert vals[c] <= vals[b]
        for a, b in segs:
            assert all(vals[j] < vals[j + 1] for j in range(a, b))


class TestHspi:
    def test_examples(self):
        assert hspi_delta((3, 4, 2)) == (0, 1, 2, 3, 2, 3, 4, 5, 4, 5, 6, 7)
        assert hspi_delta((1, 6, 2)) == tuple(range(6))
        assert hspi_delta((2, 4, 1)) == (0, 1, 2, 3, 3, 4, 5, 6)

    def test_params(self):
        with pytest.raises(InputError):
            HspiParams(0, 3, 1)
        with pytest.raises(InputError):
            HspiParams(2, 3, 4)
        assert not HspiParams(2, 4, 3).in_theorem_range
        assert HspiParams(2, 4, 2).in_theorem_range
        assert HspiParams(3, 4, 2).size == 12

    @settings(max_examples=150, deadline=None)
    @given(hspi_params())
    def test_appropriate_symmetric_segments(self, params):
        d = hspi_delta(params)
        assert is_appropriate(d) and is_symmetric(d)
        assert monotonic_segments(d).lengths() == [params.p] * params.s

    @pytest.mark.parametrize("p,i", [(p, i) for p in range(2, 9) for i in range(1, p // 2 + 1)])
    def test_two_blocks_are_clique_minus_matchings(self, p, i):
        assert hspi_delta((2, p, i)) == family_delta("KmM", 2 * p, i)


class TestFamilyDelta:
    def test_examples(self):
        assert family_delta("KmC", 5) == (0, 1, 1, 1, 2)
        assert family_delta("Kpp", 5) == (0, 1, 1, 2, 2, 3, 3, 4, 4, 5)
        assert family_delta("KmM", 10, 2) == (0, 1, 2, 3, 4, 3, 4, 5, 6, 7)

    def test_constraints(self):
        with pytest.raises(InputError):
            family_delta("KmM", 9, 1)
        with pytest.raises(InputError):
            family_delta("KmC", 8)
        with pytest.raises(InputError):
            family_delta("petersen")

    def test_closed_forms_match_brute_force(self):
        checked = 0
        mismatched = []
        for fam, params, g in built_samples(16):
            try:
                want = family_delta(fam, *params)
            except (InputError, ValueError):
                continue
            if delta_from_graph(g) != want:
                mismatched.append((fam, params))
            checked += 1
        assert checked > 60
        # round-robin picks three or more matchings that do not all cross one bisection
        assert mismatched == [("KmM", (12, 3)), ("KmM", (14, 3)), ("KmM", (16, 3)), ("KmM", (16, 4))]

    @pytest.mark.parametrize("p,s", [(p, s) for p in range(4, 17, 2) for s in range(1, p // 4 + 1)])
    def test_matchings_across_a_bisection(self, p, s):
        # K_{h,h} minus h-s matchings is s-regular bipartite: s perfect matchings across the halves
        g = build(f"minus(K({p}),KppmM({p // 2},{p // 2 - s}))")
        assert delta_from_graph(g) == family_delta("KmM", p, s)

    def test_round_robin_beyond_quarter_misses_the_table(self):
        # the two-run form stops at s = p/4; round-robin matchings then differ from Table 2
        assert delta_from_graph(catalog_build("KmM", 10, 3)) != delta_of_named_table_row(2, "K_10-3M")
        assert delta_from_graph(catalog_build("KmM", 10, 4)) != delta_of_named_table_row(2, "K_10-4M")


class TestEnumeration:
    def test_counts(self):
        assert [len(enumerate_appropriate_symmetric(n)) for n in (9, 10, 11)] == [10, 36, 28]

    @pytest.mark.parametrize("n", range(1, 9))
    def test_against_plain_filter(self, n):
        brute = [
            DeltaSequence((0,) + tail)
            for tail in product(range(1, n), repeat=n - 1)
            if is_appropriate((0,) + tail) and is_symmetric((0,) + tail)
        ]
        assert enumerate_appropriate_symmetric(n) == sorted(brute)

    def test_sorted_and_contains_tables(self):
        for n in (9, 10, 11):
            seqs = enumerate_appropriate_symmetric(n)
            assert seqs == sorted(seqs)
            assert set(table_sequences(n)) <= set(seqs)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            enumerate_appropriate_symmetric(17)


class TestTables:
    def test_named_rows(self):
        assert delta_of_named_table_row(1, "K_3×K_3") == (0, 1, 2, 1, 2, 3, 2, 3, 4)
        assert delta_of_named_table_row(2, "Petersen") == (0, 1, 1, 1, 2, 1, 2, 2, 2, 3)
        assert delta_of_named_table_row(3, "K_{11}") == tuple(range(11))
        assert delta_of_named_table_row(2, 4) == (0, 1, 2, 2, 2, 3, 3, 3, 4, 5)

    def test_unknown(self):
        with pytest.raises(InputError):
            delta_of_named_table_row(4, 0)
        with pytest.raises(InputError):
            delta_of_named_table_row(1, 9)
        with pytest.raises(InputError):
            delta_of_named_table_row(1, "Heawood")

    def test_rows_are_appropriate_symmetric(self):
        for rows in TABLES.values():
            for seq, _ in rows:
                assert is_appropriate(seq) and is_symmetric(seq)
