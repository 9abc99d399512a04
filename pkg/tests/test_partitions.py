import itertools

import pytest
from conftest import bell_numbers, brute_crossing, brute_set_partitions, catalan_numbers
from hypothesis import given
from hypothesis import strategies as st

from nccumulants.errors import DomainError, SizeLimitError
from nccumulants.partitions import (
    Partition,
    block_size_profile,
    canonical_index,
    enumerate_partitions,
    induced_grouping,
    interweave,
    is_noncrossing,
    join,
    kernel,
    kreweras,
    kreweras_by_interweave,
    lattice_meet_join,
    leq,
    lower_interval,
    meet,
    merge_neighbours,
    shape_predicates,
    upper_interval,
)

P = Partition.parse


@st.composite
def partitions(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    return kernel(draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))


@st.composite
def partition_pairs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    h = st.lists(st.integers(0, n - 1), min_size=n, max_size=n)
    return kernel(draw(h)), kernel(draw(h))


# representation ----------------------------------------------------------------


def test_text_and_json_round_trip():
    pi = P("1,3|2|4")
    assert str(pi) == "1,3|2|4"
    assert pi.blocks == ((1, 3), (2,), (4,))
    assert pi.to_json() == [[1, 3], [2], [4]]
    assert Partition.from_json([[2], [3, 1], [4]]) == pi
    assert Partition.from_blocks([[4], [1, 3], [2]]) == pi


@pytest.mark.parametrize("bad", ["1,2|2", "1|3", "", "a|b"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(DomainError):
        P(bad)


def test_invalid_rgs_rejected():
    with pytest.raises(DomainError):
        Partition((0, 2, 1))
    with pytest.raises(DomainError):
        Partition(())


@given(partitions())
def test_canonical_text_is_unique(pi):
    assert P(str(pi)) == pi
    assert 1 <= pi.size <= pi.n
    assert sorted(e for b in pi.blocks for e in b) == list(range(1, pi.n + 1))


# enumeration ---------------------------------------------------------------------


def test_small_counts():
    assert sum(1 for _ in enumerate_partitions(4)) == 15
    assert sum(1 for _ in enumerate_partitions(4, "nc")) == 14
    assert list(enumerate_partitions(1)) == [Partition.top(1)]
    assert list(enumerate_partitions(1, "noncrossing")) == [Partition.top(1)]


def test_counts_match_bell_and_catalan():
    bell, cat = bell_numbers(10), catalan_numbers(10)
    for n in range(1, 11):
        assert sum(1 for _ in enumerate_partitions(n)) == bell[n]
        assert sum(1 for _ in enumerate_partitions(n, "nc")) == cat[n]


@pytest.mark.parametrize("n", range(1, 7))
def test_enumeration_matches_brute_force(n):
    ours = list(enumerate_partitions(n))
    assert len(set(ours)) == len(ours)
    as_sets = {frozenset(frozenset(b) for b in p.blocks) for p in ours}
    assert as_sets == brute_set_partitions(n)
    nc = {frozenset(frozenset(b) for b in p.blocks) for p in enumerate_partitions(n, "nc")}
    assert nc == {s for s in as_sets if not brute_crossing([sorted(b) for b in s])}


def test_enumeration_order_is_lexicographic():
    for family in ("all", "nc"):
        rgs = [p.rgs for p in enumerate_partitions(6, family)]
        assert rgs == sorted(rgs)


def test_size_ceiling():
    with pytest.raises(SizeLimitError):
        list(enumerate_partitions(15))
    with pytest.raises(SizeLimitError):
        list(enumerate_partitions(0))
    assert sum(1 for _ in enumerate_partitions(3, limit=3)) == 5
    with pytest.raises(SizeLimitError):
        list(enumerate_partitions(4, limit=3))


# noncrossing test ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "text,expected", [("1,3|2,4", False), ("1,4|2,3", True), ("1,3|2|4", True), ("1,3,5|2,4", False)]
)
def test_is_noncrossing_examples(text, expected):
    assert is_noncrossing(P(text)) is expected


@given(partitions(max_n=9))
def test_is_noncrossing_matches_quadruple_scan(pi):
    assert is_noncrossing(pi) == (not brute_crossing(pi.blocks))


# lattice operations -------------------------------------------------------------------


def _relation(pi):
    return {(i, j) for b in pi.blocks for i in b for j in b}


def test_meet_join_examples():
    mj = lattice_meet_join(P("1,2|3"), P("1|2,3"))
    assert mj.meet == Partition.bottom(3) and mj.join == Partition.top(3) and mj.leq is False
    pi = P("1,3|2|4")
    assert lattice_meet_join(pi, pi) == (pi, pi, True)
    sigma = P("1,2|3,4")
    assert lattice_meet_join(Partition.bottom(4), sigma) == (Partition.bottom(4), sigma, True)


def test_meet_join_size_mismatch():
    with pytest.raises(DomainError):
        meet(P("1|2"), P("1,2,3"))


@given(partition_pairs())
def test_meet_join_against_relations(pair):
    a, b = pair
    assert _relation(meet(a, b)) == _relation(a) & _relation(b)
    # join: transitive closure of the union of the two relations
    rel = _relation(a) | _relation(b)
    changed = True
    while changed:
        extra = {(i, l) for (i, j) in rel for (k, l) in rel if j == k} - rel
        changed = bool(extra)
        rel |= extra
    assert _relation(join(a, b)) == rel
    assert leq(a, b) == (_relation(a) <= _relation(b))
    assert leq(meet(a, b), a) and leq(a, join(a, b))


def test_kernel_examples():
    assert kernel((5, 7, 5)) == P("1,3|2")
    assert kernel((1, 1, 1)) == Partition.top(3)
    assert kernel((2, 9, 4, 9)) == P("1|2,4|3")


def test_kernel_of_canonical_index_is_identity():
    for n in range(1, 9):
        for pi in enumerate_partitions(n):
            assert kernel(canonical_index(pi)) == pi


@pytest.mark.parametrize("text", ["1,2,4|3", "1,3|2,4", "1|2|3", "1,2,3"])
def test_intervals_against_brute_force(text):
    pi = P(text)
    everything = list(enumerate_partitions(pi.n))
    for family in ("all", "nc"):
        keep = (lambda s: True) if family == "all" else is_noncrossing
        below = {s for s in everything if leq(s, pi) and keep(s)}
        above = {s for s in everything if leq(pi, s) and keep(s)}
        assert set(lower_interval(pi, family)) == below
        assert set(upper_interval(pi, family)) == above


# Kreweras complement ---------------------------------------------------------------


def test_kreweras_examples():
    for n in range(1, 7):
        assert kreweras(Partition.bottom(n)) == Partition.top(n)
        assert kreweras(Partition.top(n)) == Partition.bottom(n)
    assert kreweras(P("1,2|3")) == P("1|2,3")
    with pytest.raises(DomainError):
        kreweras(P("1,3|2,4"))


@pytest.mark.parametrize("n", range(1, 9))
def test_kreweras_matches_interweave_oracle(n):
    for pi in enumerate_partitions(n, "nc"):
        k = kreweras(pi)
        assert k == kreweras_by_interweave(pi)
        assert is_noncrossing(interweave(pi, k))
        assert pi.size + k.size == n + 1


def test_interweave_oracle_only_keeps_noncrossing_weaves():
    # a noncrossing sigma weaves without crossing exactly when it lies below K(pi)
    for n in range(1, 6):
        for pi in enumerate_partitions(n, "nc"):
            k = kreweras(pi)
            for sigma in enumerate_partitions(n):
                ok = is_noncrossing(interweave(pi, sigma))
                assert ok == (is_noncrossing(sigma) and leq(sigma, k))


@pytest.mark.parametrize("n", range(1, 8))
def test_kreweras_reverses_order(n):
    nc = list(enumerate_partitions(n, "nc"))
    comp = {p: kreweras(p) for p in nc}
    for s, p in itertools.product(nc, nc):
        if leq(s, p):
            assert leq(comp[p], comp[s])


def test_kreweras_squared_is_rotation():
    # K(K(pi)) is pi with every element shifted down by one, cyclically
    for n in range(1, 8):
        for pi in enumerate_partitions(n, "nc"):
            kk = kreweras(kreweras(pi))
            rotated = kernel([pi.rgs[(i + 1) % n] for i in range(n)])
            assert kk == rotated


@pytest.mark.parametrize("n", range(1, 8))
def test_interval_cardinalities_match_under_kreweras(n):
    for pi in enumerate_partitions(n, "nc"):
        up = sum(1 for _ in upper_interval(pi, "nc"))
        down = sum(1 for _ in lower_interval(kreweras(pi), "nc"))
        assert up == down


# constructions -------------------------------------------------------------------


def test_interweave_examples():
    assert interweave(P("1,2"), P("1|2")) == P("1,3|2|4")
    assert interweave(Partition.top(1), Partition.top(1)) == P("1|2")
    woven = interweave(P("1,2"), P("1,2"))
    assert woven == P("1,3|2,4") and not is_noncrossing(woven)
    with pytest.raises(DomainError):
        interweave(P("1|2"), P("1,2,3"))


def test_merge_neighbours_examples():
    assert merge_neighbours(P("1,3|2|4"), 3) == P("1,3|2")
    assert merge_neighbours(Partition.top(5), 2) == Partition.top(4)
    assert merge_neighbours(P("1,2|3"), 1) == P("1|2")
    with pytest.raises(DomainError):
        merge_neighbours(P("1,2|3"), 3)
    with pytest.raises(DomainError):
        merge_neighbours(P("1,2|3"), 0)


def test_induced_grouping_examples():
    assert induced_grouping(P("1,2"), (2, 1)) == P("1,2,3")
    assert induced_grouping(Partition.bottom(2), (2, 2)) == P("1,2|3,4")
    assert induced_grouping(P("1,3|2"), (1, 1, 1)) == P("1,3|2")
    with pytest.raises(DomainError):
        induced_grouping(P("1,2"), (1,))


def test_shape_predicates_examples():
    s = shape_predicates(Partition.top(3))
    assert (s.cn, s.alternating, s.singletons, s.has_singleton) == (2, False, [], False)
    s = shape_predicates(P("1,3|2,4"))
    assert s.cn == 0 and s.alternating
    s = shape_predicates(Partition.bottom(3))
    assert s.cn == 0 and s.singletons == [1, 2, 3] and s.has_singleton


def test_block_size_profile_examples():
    assert block_size_profile(P("1,2|3,4|5")) == {1: 1, 2: 2}
    assert block_size_profile(Partition.top(4)) == {4: 1}
    assert block_size_profile(Partition.bottom(4)) == {1: 4}


@given(partitions(max_n=10))
def test_profile_sums_to_n(pi):
    assert sum(p * k for p, k in block_size_profile(pi).items()) == pi.n


@pytest.mark.parametrize("n", range(1, 10))
def test_noncrossing_below_alternating_has_singleton(n):
    for pi in enumerate_partitions(n):
        if shape_predicates(pi).alternating:
            for sigma in lower_interval(pi, "nc"):
                assert shape_predicates(sigma).has_singleton
