"""Constructors for staircase-type complexes.

Staircases are the zigzag complexes modelling torus knots: generators
g0..g2m with Alexander gradings given by a strictly decreasing symmetric
exponent sequence, arrows from the odd generators to their even
neighbours, top generator pinned at grw = 0 and every other grading
forced by homogeneity.

The exponent sequence of a torus knot comes from the exact expansion of
(t^(pq) - 1)(t - 1) / ((t^p - 1)(t^q - 1)); its nonzero terms alternate
between +1 and -1 and are symmetric about the genus.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, Tuple

from .complexes import (
    BigradedComplex,
    ChainMap,
    Generator,
    require_chain_map,
)
from .errors import ConsistencyError, ValidationError
from .linalg import LinearSystem
from .rings import UVPoly, ipoly_divexact, uv_mono


@dataclass(frozen=True)
class StepSequence:
    """Strictly decreasing symmetric Alexander exponents s0 > ... > s2m."""

    exponents: Tuple[int, ...]

    def __post_init__(self):
        s = self.exponents
        if len(s) % 2 == 0:
            raise ValidationError("exponent sequence must have odd length")
        if any(s[i] <= s[i + 1] for i in range(len(s) - 1)):
            raise ValidationError("exponents must be strictly decreasing")
        if any(s[i] != -s[len(s) - 1 - i] for i in range(len(s))):
            raise ValidationError("exponent sequence must be symmetric")

    @property
    def genus(self) -> int:
        return self.exponents[0]


def alexander_exponents(p: int, q: int) -> StepSequence:
    """Symmetrized exponents of the torus-knot Alexander polynomial.

    Expands (t^(pq)-1)(t-1)/((t^p-1)(t^q-1)) exactly, checks the nonzero
    coefficients alternate in {+1,-1}, and recenters by the genus
    g = (p-1)(q-1)/2.
    """
    if p < 2 or q < 2:
        raise ValidationError(f"torus parameters must be >= 2, got ({p},{q})")
    if gcd(p, q) != 1:
        raise ValidationError(f"torus parameters ({p},{q}) are not coprime")
    num = {p * q + 1: 1, p * q: -1, 1: -1, 0: 1}
    quot = ipoly_divexact(ipoly_divexact(num, {p: 1, 0: -1}), {q: 1, 0: -1})
    exps = sorted(quot, reverse=True)
    g = (p - 1) * (q - 1) // 2
    if exps[0] != 2 * g:
        raise ConsistencyError(f"Alexander polynomial of T({p},{q}) has wrong degree")
    for n, e in enumerate(exps):
        if quot[e] != (1 if n % 2 == 0 else -1):
            raise ConsistencyError(
                f"Alexander polynomial of T({p},{q}) does not alternate at t^{e}"
            )
    return StepSequence(tuple(e - g for e in exps))


def staircase_from_steps(steps: StepSequence, prefix: str = "g") -> BigradedComplex:
    """Zigzag complex of an exponent sequence; top generator at grw = 0."""
    s = steps.exponents
    count = len(s)
    grw = [0] * count
    for i in range(1, count, 2):
        a = s[i - 1] - s[i]
        grw[i] = grw[i - 1] + 1 - 2 * a
        grw[i + 1] = grw[i] - 1
    gens = [
        Generator(f"{prefix}{i}", grw[i], grw[i] - 2 * s[i]) for i in range(count)
    ]
    diff: Dict[str, Dict[str, UVPoly]] = {}
    for i in range(1, count, 2):
        a = s[i - 1] - s[i]
        b = s[i] - s[i + 1]
        diff[f"{prefix}{i}"] = {
            f"{prefix}{i - 1}": uv_mono(a, 0),
            f"{prefix}{i + 1}": uv_mono(0, b),
        }
    return BigradedComplex(gens, diff).require_valid()


def staircase(n: int) -> BigradedComplex:
    """Unit-step staircase with 2n+1 generators y(-n)..y(n).

    y(i) sits in bigrading (-n-i, -n+i); the odd positions map by
    d(y(j)) = U y(j-1) + V y(j+1).
    """
    if n < 0:
        raise ValidationError("staircase index must be nonnegative")
    if n == 0:
        return BigradedComplex([Generator("y0", 0, 0)], {}).require_valid()
    seq = StepSequence(tuple(range(n, -n - 1, -1)))
    c = staircase_from_steps(seq, prefix="tmp")
    renaming = {f"tmp{k}": f"y{k - n}" for k in range(2 * n + 1)}
    return c.relabel(renaming).require_valid()


def staircase_dual(n: int) -> BigradedComplex:
    """Dual staircase with generators x(-n)..x(n), x(i) at (n+i, n-i)."""
    if n < 0:
        raise ValidationError("staircase index must be nonnegative")
    gens = [Generator(f"x{i}", n + i, n - i) for i in range(-n, n + 1)]
    diff: Dict[str, Dict[str, UVPoly]] = {}
    for i in range(-n, n + 1):
        if (i - n) % 2 != 0:
            continue
        row: Dict[str, UVPoly] = {}
        if i + 1 <= n:
            row[f"x{i + 1}"] = uv_mono(1, 0)
        if i - 1 >= -n:
            row[f"x{i - 1}"] = uv_mono(0, 1)
        if row:
            diff[f"x{i}"] = row
    return BigradedComplex(gens, diff).require_valid()


def torus_knot_complex(p: int, q: int) -> BigradedComplex:
    """Staircase model of the torus knot T(p, q)."""
    return staircase_from_steps(alexander_exponents(p, q))


# --- named model complexes --------------------------------------------------


def _hedden_watson() -> BigradedComplex:
    gens = [Generator("a", 0, -4), Generator("b", -3, -3), Generator("c", -4, 0)]
    diff = {"b": {"a": uv_mono(2, 0), "c": uv_mono(0, 2)}}
    return BigradedComplex(gens, diff).require_valid()


NAMED_COMPLEXES = {
    "HW": _hedden_watson,
}


def named_complex(name: str) -> BigradedComplex:
    try:
        builder = NAMED_COMPLEXES[name]
    except KeyError:
        raise ValidationError(
            f"unknown named complex {name!r}; available: {sorted(NAMED_COMPLEXES)}"
        ) from None
    return builder()


# --- transition maps between dual staircases --------------------------------


def _solve_local_map(
    source: BigradedComplex, target: BigradedComplex, bidegree: Tuple[int, int]
) -> ChainMap:
    """Any chain map of the given bidegree that is nonzero on the towers.

    The matrix is not transcribed from a picture: the chain-map equations
    plus one affine locality condition (the image of a tower cycle must
    again be non-torsion) go to the affine solver, and any solution works.
    Existence is a property of the staircase family, so an unsolvable
    system is an internal error.
    """
    from .invariants import a_level_complex, slice_obstruction, tower_cycle

    dw, dz = bidegree
    system = LinearSystem()
    # One unknown per admissible matrix slot; homogeneity fixes the monomial.
    slots: Dict[Tuple[str, str], Tuple[int, int, int]] = {}
    by_source: Dict[str, list] = {}
    for gs in source.gens:
        for gt in target.gens:
            ua = gt.grw - gs.grw - dw
            vb = gt.grz - gs.grz - dz
            if ua < 0 or vb < 0 or ua % 2 or vb % 2:
                continue
            var = system.new_vars(1)[0]
            slots[(gs.name, gt.name)] = (var, ua // 2, vb // 2)
            by_source.setdefault(gs.name, []).append((gt.name, var))

    # d f + f d = 0, one equation per (source gen, final gen) pair.
    for gs in source.gens:
        masks: Dict[str, int] = {}
        for mid, var in by_source.get(gs.name, ()):
            for tgt in target.diff_row(mid):
                masks[tgt] = masks.get(tgt, 0) ^ (1 << var)
        for mid in source.diff_row(gs.name):
            for tgt, var in by_source.get(mid, ()):
                masks[tgt] = masks.get(tgt, 0) ^ (1 << var)
        for tgt in sorted(masks):
            if masks[tgt]:
                system.add_equation(masks[tgt], 0)

    # Locality: push the source tower cycle through the unknown map and
    # pin its class to the non-torsion coset on the target side.
    src_level = a_level_complex(source, 0)
    tgt_level = a_level_complex(target, 0)
    cycle = tower_cycle(src_level)
    want = slice_obstruction(tgt_level, cycle.grading + dw)
    pos = {pair: m for m, pair in enumerate(want.slice)}
    src_index = {lbl: i for i, lbl in enumerate(src_level.fu.labels)}
    tgt_index = {lbl: i for i, lbl in enumerate(tgt_level.fu.labels)}
    coeff_masks = [0] * len(want.slice)
    for label, power in cycle.terms:
        iu, jv = src_level.min_monomials[src_index[label]]
        for tgt_name, var in by_source.get(label, ()):
            _var, ua, vb = slots[(label, tgt_name)]
            ti = tgt_index[tgt_name]
            tu, tv = tgt_level.min_monomials[ti]
            k = iu + ua - tu
            if k != jv + vb - tv or k < 0:
                raise ConsistencyError("transition-map image leaves the level complex")
            coeff_masks[pos[(ti, k + power)]] ^= 1 << var
    for row_mask, rhs in want.rows:
        mask = 0
        rest = row_mask
        while rest:
            low = rest & -rest
            mask ^= coeff_masks[low.bit_length() - 1]
            rest ^= low
        system.add_equation(mask, rhs)

    solution = system.solve()
    if solution is None:
        raise ConsistencyError(
            f"no local chain map of bidegree {bidegree} between the staircase duals"
        )
    entries: Dict[str, Dict[str, UVPoly]] = {}
    for (s, t), (var, ua, vb) in sorted(slots.items()):
        if (solution >> var) & 1:
            entries.setdefault(s, {})[t] = uv_mono(ua, vb)
    return require_chain_map(ChainMap(source, target, entries, bidegree=bidegree))


def staircase_transition_maps(n: int) -> Tuple[ChainMap, ChainMap]:
    """Local chain maps between consecutive dual staircases.

    Returns (down, up): down has bidegree (-2,-2) from the (n+1)-dual to
    the n-dual, up has bidegree (0,0) the other way. Both preserve the
    Alexander grading (forced by their bidegrees) and are nonzero on the
    localized towers.
    """
    big = staircase_dual(n + 1)
    small = staircase_dual(n)
    down = _solve_local_map(big, small, (-2, -2))
    up = _solve_local_map(small, big, (0, 0))
    return down, up
