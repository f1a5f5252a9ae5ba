import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgekit.errors import InputError
from hodgekit.matroid import Matroid

K4 = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def subsets(n):
    for k in range(n + 1):
        yield from (frozenset(s) for s in itertools.combinations(range(1, n + 1), k))


def check_rank_axioms(m):
    subs = list(subsets(m.n))
    r = {s: m.rank(s) for s in subs}
    assert r[frozenset()] == 0
    for s in subs:
        assert 0 <= r[s] <= len(s)
        for e in range(1, m.n + 1):
            assert r[s] <= r[s | {e}] <= r[s] + 1
    for a, b in itertools.combinations(subs, 2):
        assert r[a & b] + r[a | b] <= r[a] + r[b]
    for i in range(1, m.n + 1):
        assert r[frozenset({i})] == 1


def whitney_chi(m):
    coeffs = [0] * (m.r + 1)
    for s in subsets(m.n):
        coeffs[m.rank(s)] += (-1) ** len(s)
    return coeffs


def test_rank_examples():
    assert Matroid.uniform(2, 3).rank({1, 2}) == 2
    assert Matroid.uniform(2, 3).rank(set()) == 0
    assert Matroid.uniform(4, 5).rank({1, 2, 3, 4, 5}) == 4


def test_rank_out_of_range():
    with pytest.raises(InputError):
        Matroid.uniform(2, 3).rank({4})


@pytest.mark.parametrize("m", [Matroid.uniform(2, 3), Matroid.uniform(3, 5), Matroid.uniform(4, 8),
                               Matroid.uniform(8, 8), Matroid.graphic(K4),
                               Matroid.graphic(K4 + [(1, 5), (5, 2)])],
                         ids=["U23", "U35", "U48", "U88", "K4", "K4+path"])
def test_rank_axioms_exhaustive(m):
    check_rank_axioms(m)


def test_proper_flats_examples():
    assert Matroid.uniform(2, 3).proper_flats() == [frozenset({1}), frozenset({2}), frozenset({3})]
    flats = Matroid.uniform(4, 5).proper_flats()
    assert len(flats) == 25 and {len(f) for f in flats} == {1, 2, 3}
    assert [len(f) for f in flats] == sorted(len(f) for f in flats)
    assert Matroid.uniform(2, 2).proper_flats() == [frozenset({1}), frozenset({2})]


def test_flags_examples():
    assert len(Matroid.uniform(2, 3).flags_of_proper_flats(1)) == 3
    assert len(Matroid.uniform(4, 5).flags_of_proper_flats(3)) == 60
    with pytest.raises(InputError):
        Matroid.uniform(2, 3).flags_of_proper_flats(2)


@pytest.mark.parametrize("m", [Matroid.uniform(3, 5), Matroid.graphic(K4)], ids=["U35", "K4"])
def test_flats_closed_under_intersection(m):
    flats = set(m.flats())
    for a, b in itertools.combinations(flats, 2):
        assert a & b in flats
    for s in subsets(m.n):
        assert m.is_flat(s) == all(m.rank(s | {e}) > m.rank(s) for e in set(range(1, m.n + 1)) - s)
    maximal = m.flags_of_proper_flats(m.r - 1)
    for f in m.proper_flats():
        assert any(f in chain for chain in maximal)


def test_characteristic_polynomial_examples():
    assert Matroid.uniform(2, 3).characteristic_polynomial() == [1, -3, 2]
    assert Matroid.uniform(1, 1).characteristic_polynomial() == [1, -1]
    assert Matroid.uniform(2, 2).characteristic_polynomial() == [1, -2, 1]
    assert Matroid.uniform(3, 4).mu_sequence() == [1, 3, 3]


@pytest.mark.parametrize("m", [Matroid.uniform(3, 6), Matroid.uniform(4, 5), Matroid.graphic(K4)],
                         ids=["U36", "U45", "K4"])
def test_deletion_contraction_matches_whitney(m):
    assert m.characteristic_polynomial() == whitney_chi(m)


def test_graphic_chromatic():
    # chromatic polynomial of K4 is lambda (lambda-1)(lambda-2)(lambda-3)
    assert Matroid.graphic(K4).characteristic_polynomial() == [1, -6, 11, -6]


def test_bad_inputs():
    with pytest.raises(InputError):
        Matroid(3, [{1, 2}, {3}])
    with pytest.raises(InputError):
        Matroid(3, [{1, 2}])            # 3 is a loop
    with pytest.raises(InputError):
        Matroid(4, [{1, 2}, {3, 4}])    # exchange fails
    with pytest.raises(InputError):
        Matroid.from_json({"bases": [[1, 2]]})


def test_json_forms():
    assert Matroid.from_json({"uniform": [2, 3]}).bases == Matroid.uniform(2, 3).bases
    assert Matroid.from_json({"ground_set": 2, "bases": [[1, 2]]}).r == 2
    assert Matroid.from_json({"graphic_edges": [[1, 2], [2, 3], [1, 3]]}).bases == Matroid.uniform(2, 3).bases


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.integers(1, n), st.just(n))))
def test_uniform_mu_is_binomial_alternating_sum(rn):
    from math import comb
    r, n = rn
    mu = Matroid.uniform(r, n).mu_sequence()
    # reduced chi of U(r, n): coefficient k is sum_{i<=k} (-1)^i C(n, i) up to sign
    assert mu == [abs(sum((-1) ** i * comb(n, i) for i in range(k + 1))) for k in range(r)]
