import random

import pytest

from knotfloer.builders import staircase
from knotfloer.errors import ParseError
from knotfloer.expressions import (
    FileRef,
    Mirror,
    Named,
    Sum,
    TorusKnot,
    expr_to_string,
    is_torus_sum,
    parse_knot_expr,
    realize_expr,
)


def test_parse_triple_sum():
    e = parse_knot_expr("T(2,3)#T(4,7)#-T(5,6)")
    assert e == Sum((TorusKnot(2, 3), TorusKnot(4, 7), Mirror(TorusKnot(5, 6))))


def test_parse_family_knot():
    e = parse_knot_expr("T(2,11)#-T(4,5)")
    assert e == Sum((TorusKnot(2, 11), Mirror(TorusKnot(4, 5))))


def test_parse_rejects_non_coprime():
    with pytest.raises(ParseError) as err:
        parse_knot_expr("T(2,2)")
    assert "coprime" in str(err.value)
    assert err.value.position > 0


def test_parse_whitespace_and_files():
    e = parse_knot_expr("  T( 2 , 3 ) # @some/path.cfk # HW ")
    assert e == Sum((TorusKnot(2, 3), FileRef("some/path.cfk"), Named("HW")))


def test_parse_errors_have_positions():
    for text in ["", "T(2,3)#", "-", "T(2,", "T(2,3)x", "#T(2,3)"]:
        with pytest.raises(ParseError):
            parse_knot_expr(text)


def random_expr(rng, depth=0):
    roll = rng.random()
    if roll < 0.45 or depth >= 2:
        pairs = [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (4, 5), (4, 7), (5, 6)]
        atom = TorusKnot(*rng.choice(pairs))
    elif roll < 0.6:
        atom = Named(rng.choice(["HW", "alpha", "beta_2"]))
    else:
        atom = FileRef(rng.choice(["a.cfk", "dir/b.cfk"]))
    if rng.random() < 0.4:
        atom = Mirror(atom)
    if depth == 0 and rng.random() < 0.6:
        terms = [atom]
        for _ in range(rng.randint(1, 3)):
            t = random_expr(rng, depth + 1)
            terms.extend(t.children if isinstance(t, Sum) else [t])
        return Sum(tuple(terms))
    return atom


def test_round_trip_1000():
    rng = random.Random(424242)
    for _ in range(1000):
        e = random_expr(rng)
        assert parse_knot_expr(expr_to_string(e)) == e


def test_realize_trefoil():
    c = realize_expr(parse_knot_expr("T(2,3)"))
    s = staircase(1)
    assert [(g.grw, g.grz) for g in c.gens] == [(g.grw, g.grz) for g in s.gens]


def test_realize_mirror_is_dual():
    c = realize_expr(parse_knot_expr("-T(2,3)"))
    assert sorted((g.grw, g.grz) for g in c.gens) == [(0, 2), (1, 1), (2, 0)]


def test_realize_sum_generates_product():
    c = realize_expr(parse_knot_expr("T(2,3)#T(2,3)"))
    assert len(c.gens) == 9


def test_is_torus_sum():
    assert is_torus_sum(parse_knot_expr("T(2,3)#-T(4,5)"))
    assert not is_torus_sum(parse_knot_expr("T(2,3)#HW"))
    assert not is_torus_sum(parse_knot_expr("@file.cfk"))
