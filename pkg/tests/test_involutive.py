import random

import pytest

from knotfloer.builders import named_complex, staircase, torus_knot_complex
from knotfloer.complexes import (
    BigradedComplex,
    Generator,
    basepoint_maps,
    verify_chain_map,
)
from knotfloer.errors import ValidationError
from knotfloer.expressions import parse_knot_expr
from knotfloer.fu import tower_reduce
from knotfloer.invariants import v_invariant
from knotfloer.involutive import (
    ai0_cone,
    connected_sum_iota,
    involutive_d_pair,
    mirror_iota,
    realize_with_iota,
    staircase_iota,
    v0_bar_under,
)
from knotfloer.rings import UV_ZERO, uv_add, uv_mono, uv_mul, uv_swap


def test_reflection_verifies_on_staircases():
    for c in [staircase(0), staircase(1), staircase(3), torus_knot_complex(4, 7),
              torus_knot_complex(5, 6).dual()]:
        iota = staircase_iota(c)
        assert verify_chain_map(iota) is None


def test_reflection_swaps_ends():
    s1 = staircase(1)
    iota = staircase_iota(s1)
    assert iota.row("y-1") == {"y1": uv_mono(0, 0)}
    assert iota.row("y0") == {"y0": uv_mono(0, 0)}


def test_reflection_rejects_asymmetric():
    gens = [Generator("a", 0, -2), Generator("b", -1, -1)]
    c = BigradedComplex(gens, {})
    with pytest.raises(ValidationError):
        staircase_iota(c)


def test_skew_rule_on_random_elements():
    rng = random.Random(2718)
    c, iota = realize_with_iota(parse_knot_expr("T(2,3)#T(2,5)"))
    names = [g.name for g in c.gens]
    for _ in range(200):
        element = {}
        for _ in range(rng.randint(1, 3)):
            name = rng.choice(names)
            poly = frozenset(
                (rng.randint(0, 2), rng.randint(0, 2)) for _ in range(rng.randint(1, 2))
            )
            element[name] = uv_add(element.get(name, UV_ZERO), poly)
        # iota(U x) = V iota(x) and iota(V x) = U iota(x)
        u_scaled = {k: uv_mul(uv_mono(1, 0), p) for k, p in element.items()}
        v_scaled = {k: uv_mul(uv_mono(0, 1), p) for k, p in element.items()}
        im = iota.apply(element)
        assert iota.apply(u_scaled) == {k: uv_mul(uv_mono(0, 1), p) for k, p in im.items()}
        assert iota.apply(v_scaled) == {k: uv_mul(uv_mono(1, 0), p) for k, p in im.items()}


def test_mirror_iota_verifies():
    t = torus_knot_complex(3, 4)
    iota = staircase_iota(t)
    d = t.dual()
    assert verify_chain_map(mirror_iota(iota, d)) is None
    c, io = realize_with_iota(parse_knot_expr("-T(2,3)#-T(2,3)"))
    assert io is not None and verify_chain_map(io) is None


def test_connected_sum_with_unknot_is_plain_product():
    s1 = staircase(1)
    unknot = staircase(0)
    tensor = s1.tensor(unknot)
    iota = connected_sum_iota(
        tensor,
        staircase_iota(s1),
        staircase_iota(unknot),
        basepoint_maps(s1)[0],
        basepoint_maps(unknot)[1],
    )
    # the basepoint correction vanishes on the unknot side
    expected = {
        "y-1|y0": {"y1|y0": uv_mono(0, 0)},
        "y0|y0": {"y0|y0": uv_mono(0, 0)},
        "y1|y0": {"y-1|y0": uv_mono(0, 0)},
    }
    assert iota.entries == expected


def test_both_sum_orders_verify():
    e = parse_knot_expr("T(2,3)#T(2,3)")
    for order in ("twist-first", "twist-last"):
        c, io = realize_with_iota(e, order=order)
        assert verify_chain_map(io) is None


def test_triple_sum_iota_verifies():
    c, io = realize_with_iota(parse_knot_expr("T(2,3)#T(4,7)#-T(5,6)"))
    assert io is not None
    assert verify_chain_map(io) is None


def test_cone_structure_unknot():
    c = staircase(0)
    cone = ai0_cone(c, staircase_iota(c))
    assert not cone.fu.validate()
    assert cone.fu.gradings == (0, -1)
    assert involutive_d_pair(cone) == (0, 0)


def test_cone_rejects_rank_one():
    # a wrong involution may fail verification before the cone is built
    s1 = staircase(1)
    bad = staircase_iota(s1)
    bad_entries = dict(bad.entries)
    bad_entries["y0"] = {"y0": uv_mono(1, 1)}
    from knotfloer.complexes import SkewMap

    with pytest.raises(ValidationError):
        ai0_cone(s1, SkewMap(s1, bad_entries))


def test_cone_has_two_towers():
    for expr in ["T(2,3)", "T(2,3)#T(2,3)", "T(2,3)#-T(2,3)"]:
        c, io = realize_with_iota(parse_knot_expr(expr))
        cone = ai0_cone(c, io)
        assert tower_reduce(cone.fu).rank == 2


def test_acceptance_pin_doubled_trefoil():
    c, io = realize_with_iota(parse_knot_expr("T(2,3)#T(2,3)"))
    v_bar, v_under = v0_bar_under(c, io)
    assert v_under == 2


def test_involutive_pair_example_knot():
    c, io = realize_with_iota(parse_knot_expr("T(2,3)#T(4,7)#-T(5,6)"))
    assert v0_bar_under(c, io) == (1, 2)


def test_involutive_brackets_v0_on_corpus():
    for expr in ["T(2,3)", "T(2,5)", "T(3,4)", "-T(3,4)", "T(2,3)#-T(2,3)",
                 "T(2,3)#T(2,5)"]:
        c, io = realize_with_iota(parse_knot_expr(expr))
        v_bar, v_under = v0_bar_under(c, io)
        v0 = v_invariant(c, 0)
        assert v_bar <= v0 <= v_under, expr


def test_genus_consistency_for_torus_sums():
    # positive torus sums have slice genus = sum of the factor genera
    cases = [("T(2,3)", 1), ("T(2,5)", 2), ("T(3,4)", 3), ("T(2,3)#T(2,3)", 2)]
    for expr, genus in cases:
        c, io = realize_with_iota(parse_knot_expr(expr))
        v_bar, v_under = v0_bar_under(c, io)
        assert v_under <= (genus + 2) // 2, expr
        assert -((genus + 2) // 2) <= v_bar, expr
