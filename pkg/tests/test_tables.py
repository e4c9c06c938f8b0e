"""Core table predicates, compact notation, and JSON round-trips."""

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_ga.errors import ParseError, ValidationError
from groupoid_ga.tables import (
    Groupoid,
    NGroupoid,
    is_associative,
    is_genetic,
    is_idempotent,
    is_nowhere_commutative,
    is_rectangular_band,
    ngroupoid_from_json,
    ngroupoid_to_json,
    parse_compact3,
    serialize_compact3,
)

LEFT_ZERO_2 = Groupoid(((0, 0), (1, 1)))
RIGHT_ZERO_2 = Groupoid(((0, 1), (0, 1)))


def tables_strategy(max_order=4):
    def build(order):
        return st.lists(
            st.lists(st.integers(0, order - 1), min_size=order, max_size=order),
            min_size=order,
            max_size=order,
        ).map(lambda rows: Groupoid(tuple(tuple(r) for r in rows)))

    return st.integers(1, max_order).flatmap(build)


def test_mul_and_bounds():
    assert LEFT_ZERO_2.mul(0, 1) == 0
    assert LEFT_ZERO_2.mul(1, 0) == 1
    with pytest.raises(ValidationError):
        LEFT_ZERO_2.mul(0, 2)
    with pytest.raises(ValidationError):
        LEFT_ZERO_2.mul(-1, 0)


def test_table_validation():
    with pytest.raises(ValidationError):
        Groupoid(((0, 1), (0,)))
    with pytest.raises(ValidationError):
        Groupoid(((0, 2), (0, 1)))
    with pytest.raises(ValidationError):
        Groupoid(())
    with pytest.raises(ValidationError):
        NGroupoid(2, (((0, 0), (1, 1)), ((0,),)))


def test_is_idempotent():
    assert is_idempotent(LEFT_ZERO_2)
    assert not is_idempotent(Groupoid(((1, 0), (1, 0))))
    assert is_idempotent(parse_compact3("000/111"))


def test_is_nowhere_commutative():
    assert is_nowhere_commutative(LEFT_ZERO_2)
    assert not is_nowhere_commutative(Groupoid(((0, 1), (1, 1))))
    # 000/111: all three off-diagonal pairs split, checked by hand
    g = parse_compact3("000/111")
    assert g.table == ((0, 0, 0), (1, 1, 0), (1, 1, 2))
    assert is_nowhere_commutative(g)


def test_is_genetic():
    assert is_genetic(parse_compact3("000/111"))
    assert is_genetic(Groupoid(((0,),)))
    assert not is_genetic(Groupoid(((1, 0), (1, 0))))


def test_is_associative():
    assert is_associative(parse_compact3("001/122"))  # left-zero semigroup
    g = parse_compact3("000/111")
    assert not is_associative(g)
    # frozen violating triple: (2*0)*2 = 0 but 2*(0*2) = 1
    t = g.table
    assert t[t[2][0]][2] == 0
    assert t[2][t[0][2]] == 1


def test_is_rectangular_band():
    from groupoid_ga.constructions import rectangular_band

    assert is_rectangular_band(rectangular_band(2, 3))
    assert is_rectangular_band(parse_compact3("001/122"))
    assert not is_rectangular_band(parse_compact3("000/111"))


def test_band_implies_genetic_exhaustive_small_orders():
    for k in (2, 3):
        cells = k * k
        for flat in product(range(k), repeat=cells):
            g = Groupoid(tuple(tuple(flat[r * k : (r + 1) * k]) for r in range(k)))
            if is_rectangular_band(g):
                assert is_genetic(g), g.table


def test_every_order2_genetic_is_associative():
    found = []
    for flat in product(range(2), repeat=4):
        g = Groupoid(((flat[0], flat[1]), (flat[2], flat[3])))
        if is_genetic(g):
            found.append(g)
            assert is_associative(g)
    assert len(found) == 2
    assert {g.table for g in found} == {LEFT_ZERO_2.table, RIGHT_ZERO_2.table}


def test_parse_compact3_examples():
    assert parse_compact3("000/111").table == ((0, 0, 0), (1, 1, 0), (1, 1, 2))
    assert parse_compact3("001/122").table == ((0, 0, 0), (1, 1, 1), (2, 2, 2))
    with pytest.raises(ValidationError):
        parse_compact3("000/000")


@pytest.mark.parametrize("bad", ["00/111", "000111", "003/111", "", "0000/111", "abc/def"])
def test_parse_compact3_malformed(bad):
    with pytest.raises(ParseError):
        parse_compact3(bad)


def test_compact3_roundtrip_over_full_domain():
    digits = range(3)
    count = 0
    for i, j, k, x, y, z in product(digits, repeat=6):
        if i == x or j == y or k == z:
            continue
        s = f"{i}{j}{k}/{x}{y}{z}"
        g = parse_compact3(s)
        assert is_genetic(g)
        assert serialize_compact3(g) == s
        count += 1
    assert count == 216


def test_serialize_compact3_errors():
    with pytest.raises(ValidationError):
        serialize_compact3(LEFT_ZERO_2)
    with pytest.raises(ValidationError):
        serialize_compact3(Groupoid(((0, 0, 0), (1, 1, 1), (2, 2, 1))))  # diagonal broken


@settings(max_examples=150)
@given(tables_strategy())
def test_genetic_iff_idempotent_and_nowhere_commutative(g):
    assert is_genetic(g) == (is_idempotent(g) and is_nowhere_commutative(g))


@settings(max_examples=100)
@given(tables_strategy())
def test_is_associative_matches_literal_triple_loop(g):
    k = g.order
    t = g.table
    literal = all(
        t[t[a][b]][c] == t[a][t[b][c]]
        for a in range(k)
        for b in range(k)
        for c in range(k)
    )
    assert is_associative(g) == literal


def test_relabel_and_transpose():
    g = parse_compact3("000/111")
    assert g.relabel((0, 1, 2)) == g
    assert g.transpose().transpose() == g
    back = g.relabel((1, 2, 0)).relabel((2, 0, 1))  # inverse permutation
    assert back == g


def test_json_roundtrip():
    ng = NGroupoid(2, (LEFT_ZERO_2.table, RIGHT_ZERO_2.table))
    assert ngroupoid_from_json(ngroupoid_to_json(ng)) == ng
    bare = NGroupoid.bare(3)
    assert ngroupoid_from_json(ngroupoid_to_json(bare)) == bare


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {},
        {"order": 2},
        {"order": 2, "ops": "nope"},
        {"order": 2, "ops": [[[0, 5], [1, 1]]]},
        {"order": "x", "ops": []},
    ],
)
def test_json_malformed(obj):
    with pytest.raises(ParseError):
        ngroupoid_from_json(obj)


def test_random_relabel_preserves_predicates():
    rng = random.Random(7)
    for _ in range(50):
        flat = [rng.randrange(3) for _ in range(9)]
        g = Groupoid(tuple(tuple(flat[r * 3 : r * 3 + 3]) for r in range(3)))
        perm = [0, 1, 2]
        rng.shuffle(perm)
        h = g.relabel(tuple(perm))
        assert is_genetic(g) == is_genetic(h)
        assert is_associative(g) == is_associative(h)
        assert is_rectangular_band(g) == is_rectangular_band(h)
