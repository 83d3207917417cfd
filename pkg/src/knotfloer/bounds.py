"""Slice-genus and clasp-number lower bounds, all in exact arithmetic.

Two analytic inputs are computed here for torus-knot sums:

* the piecewise-linear concordance function on [0, 2]: for a staircase it
  is the upper envelope over the cycle generators of
  (1 - t/2) grw + (t/2) grz, which starts at 0 with slope -tau; mirrors
  negate and connected sums add;
* the Levine-Tristram signature step function on (0, 1): for T(p, q) the
  lattice set {a/p + b/q} contributes a -2 jump at s - 1 when s > 1 and a
  +2 jump at s when s < 1; mirrors negate, sums add.

Everything downstream (ratio bound, signature extrema, report assembly)
is bookkeeping over `fractions.Fraction`; no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .builders import alexander_exponents, staircase_from_steps
from .errors import UnsupportedInputError
from .expressions import KnotExpr, Mirror, Sum, TorusKnot
from .complexes import BigradedComplex


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on [0, 2] with value 0 at 0."""

    breakpoints: Tuple[Fraction, ...]  # includes both endpoints 0 and 2
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        assert self.breakpoints[0] == 0 and self.breakpoints[-1] == 2
        assert all(
            self.breakpoints[i] < self.breakpoints[i + 1]
            for i in range(len(self.breakpoints) - 1)
        )

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        xs, ys = self.breakpoints, self.values
        if not 0 <= t <= 2:
            raise ValueError("argument outside [0, 2]")
        for i in range(len(xs) - 1):
            if xs[i] <= t <= xs[i + 1]:
                span = xs[i + 1] - xs[i]
                return ys[i] + (ys[i + 1] - ys[i]) * (t - xs[i]) / span
        raise AssertionError

    def initial_slope(self) -> Fraction:
        return (self.values[1] - self.values[0]) / (self.breakpoints[1] - self.breakpoints[0])

    def negate(self) -> "PLFunction":
        return PLFunction(self.breakpoints, tuple(-v for v in self.values))

    def add(self, other: "PLFunction") -> "PLFunction":
        xs = sorted(set(self.breakpoints) | set(other.breakpoints))
        ys = tuple(self(x) + other(x) for x in xs)
        return PLFunction(tuple(xs), ys)

    def simplify(self) -> "PLFunction":
        """Drop breakpoints where the slope does not change."""
        xs, ys = list(self.breakpoints), list(self.values)
        out_x, out_y = [xs[0]], [ys[0]]
        for i in range(1, len(xs) - 1):
            s_in = (ys[i] - out_y[-1]) / (xs[i] - out_x[-1])
            s_out = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
            if s_in != s_out:
                out_x.append(xs[i])
                out_y.append(ys[i])
        out_x.append(xs[-1])
        out_y.append(ys[-1])
        return PLFunction(tuple(out_x), tuple(out_y))


def _upper_envelope(lines: Sequence[Tuple[Fraction, Fraction]]) -> PLFunction:
    """Upper envelope of lines (slope, intercept) over [0, 2]."""
    xs = {Fraction(0), Fraction(2)}
    for i in range(len(lines)):
        s1, c1 = lines[i]
        for j in range(i + 1, len(lines)):
            s2, c2 = lines[j]
            if s1 == s2:
                continue
            t = Fraction(c2 - c1, s1 - s2)
            if 0 < t < 2:
                xs.add(t)
    grid = sorted(xs)
    vals = [max(s * t + c for s, c in lines) for t in grid]
    return PLFunction(tuple(grid), tuple(vals)).simplify()


def _is_staircase_shape(c: BigradedComplex) -> bool:
    """Zigzag test: even positions are cycles, odd ones hit both neighbours."""
    count = len(c.gens)
    if count % 2 == 0:
        return False
    names = [g.name for g in c.gens]
    for idx, g in enumerate(c.gens):
        row = c.diff_row(g.name)
        if idx % 2 == 0:
            if row:
                return False
        elif set(row) != {names[idx - 1], names[idx + 1]}:
            return False
    return True


def upsilon_staircase(c: BigradedComplex) -> PLFunction:
    """Concordance function of a staircase complex.

    Maximum over the cycle generators of the t-interpolated grading;
    boundaries and monomial multiples only lower it, so generators
    realize the envelope. Only genuine zigzags are accepted: on anything
    else (dual staircases included) the envelope formula is wrong, so
    such input is refused rather than approximated.
    """
    if not _is_staircase_shape(c):
        raise UnsupportedInputError("not a staircase-shaped complex")
    cycles = [g for g in c.gens if not c.diff_row(g.name)]
    lines = [(Fraction(g.grz - g.grw, 2), Fraction(g.grw)) for g in cycles]
    return _upper_envelope(lines)


def upsilon_of_expr(e: KnotExpr) -> PLFunction:
    """Concordance function of a torus-knot sum expression.

    Mirrors negate, connected sums add; anything beyond torus knots,
    mirrors, and sums is refused rather than approximated.
    """
    if isinstance(e, TorusKnot):
        return upsilon_staircase(staircase_from_steps(alexander_exponents(e.p, e.q)))
    if isinstance(e, Mirror):
        return upsilon_of_expr(e.child).negate()
    if isinstance(e, Sum):
        acc = upsilon_of_expr(e.children[0])
        for child in e.children[1:]:
            acc = acc.add(upsilon_of_expr(child))
        return acc.simplify()
    raise UnsupportedInputError(
        "the concordance function is only computed for torus-knot sums"
    )


def upsilon_ratio_bound(f: PLFunction) -> Fraction:
    """Clasp bound: spread of f(t)/t over (0, 1].

    The ratio is monotone between breakpoints, so its extrema sit at
    breakpoints, at t = 1, or at the initial slope.
    """
    if f.values[0] != 0:
        raise ValueError("ratio bound needs f(0) = 0")
    candidates = [f.initial_slope(), f(1)]
    for t in f.breakpoints:
        if 0 < t < 1:
            candidates.append(f(t) / t)
    return max(candidates) - min(candidates)


# --- Levine-Tristram signatures --------------------------------------------


@dataclass(frozen=True)
class StepFunction:
    """Step function on (0, 1): value 0 near 0, jumps at interior points."""

    jumps: Tuple[Tuple[Fraction, int], ...]  # (location, size), increasing

    def value(self, t) -> int:
        t = Fraction(t)
        if not 0 < t < 1:
            raise ValueError("evaluation point must lie in (0, 1)")
        if any(x == t for x, _ in self.jumps):
            raise ValueError(f"{t} is a jump point")
        return sum(size for x, size in self.jumps if x < t)

    def negate(self) -> "StepFunction":
        return StepFunction(tuple((x, -s) for x, s in self.jumps))

    def add(self, other: "StepFunction") -> "StepFunction":
        acc: Dict[Fraction, int] = {}
        for x, s in self.jumps + other.jumps:
            acc[x] = acc.get(x, 0) + s
        merged = tuple((x, acc[x]) for x in sorted(acc) if acc[x])
        return StepFunction(merged)

    def extrema(self) -> Tuple[int, int]:
        """(max, min) over the open intervals between jumps."""
        level = 0
        lo = hi = 0
        for _x, size in self.jumps:
            level += size
            lo = min(lo, level)
            hi = max(hi, level)
        return hi, lo


def lt_signature_torus(p: int, q: int) -> StepFunction:
    levels = sorted(
        Fraction(a, p) + Fraction(b, q)
        for a in range(1, p)
        for b in range(1, q)
    )
    jumps: Dict[Fraction, int] = {}
    for s in levels:
        if s < 1:
            jumps[s] = jumps.get(s, 0) + 2
        elif s > 1:
            jumps[s - 1] = jumps.get(s - 1, 0) - 2
        else:
            raise AssertionError("coprime parameters cannot give s = 1")
    return StepFunction(tuple((x, jumps[x]) for x in sorted(jumps)))


def lt_signature_of_expr(e: KnotExpr) -> StepFunction:
    if isinstance(e, TorusKnot):
        return lt_signature_torus(e.p, e.q)
    if isinstance(e, Mirror):
        return lt_signature_of_expr(e.child).negate()
    if isinstance(e, Sum):
        acc = lt_signature_of_expr(e.children[0])
        for child in e.children[1:]:
            acc = acc.add(lt_signature_of_expr(child))
        return acc
    raise UnsupportedInputError(
        "the signature function is only computed for torus-knot sums"
    )


def signature_clasp_bound(sig: StepFunction) -> Tuple[int, int, int]:
    """(max, min, clasp bound) with the bound (max - min) / 2."""
    hi, lo = sig.extrema()
    return hi, lo, (hi - lo) // 2


# --- report assembly --------------------------------------------------------


def genus_bounds(
    v: Dict[int, int],
    y: Dict[int, int],
    nu_plus: int,
    omega_plus: int,
    involutive: Optional[Tuple[int, int]],
) -> Dict:
    """Per-source slice-genus lower bounds with their certificates."""
    sources: Dict[str, Dict] = {}
    sources["nu_plus"] = {"bound": nu_plus, "certificate": {"nu_plus": nu_plus}}
    sources["omega_plus"] = {"bound": omega_plus, "certificate": {"omega_plus": omega_plus}}
    v_best, v_at = 0, []
    for s, val in sorted(v.items()):
        if s >= 0 and val >= 1:
            cand = s + 2 * val - 1
            if cand > v_best:
                v_best, v_at = cand, [s]
            elif cand == v_best:
                v_at.append(s)
    sources["v_parity"] = {"bound": v_best, "certificate": {"achieved_at": v_at}}
    y_best, y_at = 0, []
    for n, val in sorted(y.items()):
        if val >= 1:
            cand = n + 2 * val - 1
            if cand > y_best:
                y_best, y_at = cand, [n]
            elif cand == y_best:
                y_at.append(n)
    sources["y_parity"] = {"bound": y_best, "certificate": {"achieved_at": y_at}}
    if involutive is not None:
        # ceil((g+1)/2) >= v_under and >= -v_bar force g >= 2*v - 2.
        v_bar, v_under = involutive
        bound = max(2 * v_under - 2, -2 * v_bar - 2, 0)
        sources["involutive"] = {
            "bound": bound,
            "certificate": {"v0_bar": v_bar, "v0_under": v_under},
        }
    overall = max(src["bound"] for src in sources.values())
    return {"sources": sources, "max": overall}


def clasp_bounds(
    table_k: Dict,
    table_mirror: Dict,
    upsilon_bound: Optional[Fraction],
    signature: Optional[Tuple[int, int, int]],
    involutive: Optional[Tuple[int, int]],
) -> Dict:
    """Per-source clasp-number lower bounds (total, positive, negative)."""
    sources: Dict[str, Dict] = {}
    bcg = table_k["nu_plus"] + table_mirror["nu_plus"]
    sources["nu_plus_sum"] = {
        "bound": bcg,
        "certificate": {
            "nu_plus": table_k["nu_plus"],
            "nu_plus_mirror": table_mirror["nu_plus"],
        },
    }
    osum = table_k["omega_plus"] + table_mirror["omega_plus"]
    sources["omega_plus_sum"] = {
        "bound": osum,
        "certificate": {
            "omega_plus": table_k["omega_plus"],
            "omega_plus_mirror": table_mirror["omega_plus"],
        },
    }
    if upsilon_bound is not None:
        sources["upsilon_ratio"] = {
            "bound_exact": str(upsilon_bound),
            "bound": -(-upsilon_bound.numerator // upsilon_bound.denominator),
            "certificate": {},
        }
    if signature is not None:
        hi, lo, bound = signature
        sources["signature"] = {
            "bound": bound,
            "certificate": {"max": hi, "min": lo},
        }

    plus_sources: Dict[str, Dict] = {}
    minus_sources: Dict[str, Dict] = {}
    plus_sources["omega_plus"] = {"bound": table_k["omega_plus"], "certificate": {}}
    minus_sources["omega_plus_mirror"] = {
        "bound": table_mirror["omega_plus"],
        "certificate": {},
    }
    y_best, y_at = 0, []
    for n, val in sorted(table_k["y"].items()):
        if val >= 1:
            cand = n + 2 * val - 1
            if cand > y_best:
                y_best, y_at = cand, [n]
            elif cand == y_best:
                y_at.append(n)
    plus_sources["y_parity"] = {"bound": y_best, "certificate": {"achieved_at": y_at}}
    if involutive is not None:
        # ceil((c+1)/2) >= v_under and >= -v_bar force c >= 2*v - 2.
        v_bar, v_under = involutive
        plus_sources["involutive"] = {
            "bound": max(2 * v_under - 2, 0),
            "certificate": {"v0_under": v_under},
        }
        minus_sources["involutive"] = {
            "bound": max(-2 * v_bar - 2, 0),
            "certificate": {"v0_bar": v_bar},
        }
    plus_max = max(src["bound"] for src in plus_sources.values())
    minus_max = max(src["bound"] for src in minus_sources.values())
    sources["signed_sum"] = {
        "bound": plus_max + minus_max,
        "certificate": {"positive": plus_max, "negative": minus_max},
    }
    overall = max(src["bound"] for src in sources.values())
    return {
        "sources": sources,
        "max": overall,
        "positive": {"sources": plus_sources, "max": plus_max},
        "negative": {"sources": minus_sources, "max": minus_max},
    }


def format_exact(x: Fraction) -> str:
    """Exact decimal when the denominator is 2^a 5^b, else 'p/q'."""
    den = x.denominator
    d = den
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    # Scale to a power of ten exactly.
    k = 0
    num = x.numerator
    while den % 2 == 0:
        den //= 2
        num *= 5
        k += 1
    while den % 5 == 0:
        den //= 5
        num *= 2
        k += 1
    if k == 0:
        return str(num)
    sign = "-" if num < 0 else ""
    num = abs(num)
    whole, frac = divmod(num, 10**k)
    return f"{sign}{whole}.{str(frac).zfill(k)}"


def plot_rows(f: PLFunction, upto: Fraction = Fraction(1)) -> List[Tuple[Fraction, Fraction]]:
    """Breakpoint table of (t, f(t)) on [0, upto], endpoints included."""
    xs = sorted({Fraction(0), upto} | {x for x in f.breakpoints if 0 < x < upto})
    return [(x, f(x)) for x in xs]
