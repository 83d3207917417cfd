"""The invariant engine.

Everything here reduces to exact linear algebra in a grading slice:

* the level-s subcomplex over GF(2)[T]: one basis element per generator,
  the minimal monomial U^i V^j x of Alexander level s with i, j >= 0 and
  min(i, j) = 0, graded by the grw of that monomial;
* correction terms: V_s is minus half the top tower grading of the
  level-s subcomplex, and the staircase-twisted variant Y_n applies V_0
  to the tensor with a dual staircase;
* tau / nu / omega live in quotients of the coefficient ring (U = 0 for
  tau, UV = 0 for nu and omega) and are decided by affine feasibility
  with exact stabilization caps: once a grading slice is saturated,
  multiplication by the tower variable is an isomorphism of slices, so
  "for all powers" is decidable at a finite, provable cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import BigradedComplex, HatComplex, reduce_complex
from .errors import ConsistencyError, ValidationError
from .fu import FUComplex, tower_reduce
from .linalg import ColumnSolver, Echelon, LinearSystem


# --- level subcomplexes over GF(2)[T] --------------------------------------


@dataclass
class ALevel:
    """Level-s subcomplex: free GF(2)[T]-complex on the minimal monomials."""

    fu: FUComplex
    min_monomials: Tuple[Tuple[int, int], ...]
    level: int


def a_level_complex(c: BigradedComplex, s: int, *, check: bool = True) -> ALevel:
    """Subcomplex of Alexander level s with nonnegative exponents.

    Basis element for generator x: U^(A-s) x when A(x) >= s, else
    V^(s-A) x; grading is the grw of that monomial; the induced
    differential rewrites mixed monomials as T-powers times basis
    elements. Rejects complexes without rank-one localized towers.
    """
    if check and not is_knotlike(c):
        raise ValidationError("complex is not knot-like (localized tower rank != 1)")
    labels = tuple(g.name for g in c.gens)
    mins: List[Tuple[int, int]] = []
    gradings: List[int] = []
    for g in c.gens:
        a = g.alexander
        iu, jv = (a - s, 0) if a >= s else (0, s - a)
        mins.append((iu, jv))
        gradings.append(g.grw - 2 * iu)
    cols: List[int] = []
    for g in c.gens:
        iu, jv = mins[c.index[g.name]]
        mask = 0
        for tgt, poly in c.diff_row(g.name).items():
            ti = c.index[tgt]
            tu, tv = mins[ti]
            for a, b in poly:
                k = iu + a - tu
                if k != jv + b - tv or k < 0:
                    raise ConsistencyError(
                        f"level-{s} rewrite failed on {g.name} -> {tgt}"
                    )
                mask ^= 1 << ti
        cols.append(mask)
    fu = FUComplex(labels, tuple(gradings), tuple(cols))
    return ALevel(fu, tuple(mins), s)


def d_invariant(level) -> int:
    """Top grading of a T-non-torsion homogeneous homology class."""
    fu = level.fu if isinstance(level, ALevel) else level
    red = tower_reduce(fu)
    if red.rank != 1:
        raise ValidationError(
            f"d-invariant undefined: localized homology has rank {red.rank}"
        )
    return red.top_grading()


@dataclass
class TowerCycle:
    grading: int
    terms: List[Tuple[str, int]]  # (label, T-power)


def tower_cycle(level: ALevel) -> TowerCycle:
    """A homogeneous non-torsion cycle generating the tower."""
    red = tower_reduce(level.fu, with_reps=True)
    if red.rank != 1:
        raise ValidationError(f"tower rank is {red.rank}, not 1")
    return TowerCycle(red.unpaired[0][1], red.reps[0])


@dataclass
class SliceObstruction:
    """Affine condition "this cycle is T-non-torsion" at a fixed grading.

    `slice` is the grading-slice basis as (basis index, T-power) pairs;
    a cycle v (bitmask over slice positions) is non-torsion exactly when
    popcount(v & mask) == rhs for every (mask, rhs) row. Rows pin v to
    the coset of a chosen non-torsion representative modulo the
    torsion-or-boundary subspace, which is affine because the non-torsion
    quotient at one grading of a rank-one complex is one-dimensional.
    """

    slice: List[Tuple[int, int]]
    rows: List[Tuple[int, int]]


def slice_obstruction(level: ALevel, grading: int) -> SliceObstruction:
    fu = level.fu
    cap = max(1, (grading - min(fu.gradings)) // 2 + 1)
    deep = grading - 2 * cap
    deep_slice = fu.slice_basis(deep)
    deep_pos = {pair: m for m, pair in enumerate(deep_slice)}
    im = Echelon(fu.boundary_columns(fu.slice_basis(deep + 1), deep_slice))
    slice_ = fu.slice_basis(grading)
    phi = [im.reduce(1 << deep_pos[(i, k + cap)]) for i, k in slice_]
    # A non-torsion cycle representative at this grading.
    below = fu.slice_basis(grading - 1)
    cycles = ColumnSolver(fu.boundary_columns(slice_, below)).kernel
    rep = None
    for z in cycles:
        acc = 0
        rest = z
        while rest:
            low = rest & -rest
            acc ^= phi[low.bit_length() - 1]
            rest ^= low
        if acc:
            rep = acc
            break
    if rep is None:
        raise ValidationError(f"no non-torsion cycle at grading {grading}")
    bits = 0
    for p in phi:
        bits |= p
    bits |= rep
    rows: List[Tuple[int, int]] = []
    b = bits
    while b:
        low = b & -b
        bit = low.bit_length() - 1
        b ^= low
        mask = 0
        for m, p in enumerate(phi):
            if (p >> bit) & 1:
                mask |= 1 << m
        rows.append((mask, (rep >> bit) & 1))
    return SliceObstruction(slice_, rows)


# --- knot-likeness ----------------------------------------------------------


def is_knotlike(c: BigradedComplex) -> bool:
    """True when both one-variable reductions have rank-one towers."""
    cached = c.__dict__.get("_knotlike")
    if cached is None:
        rank_v = tower_reduce(reduce_complex(c, "U0")).rank
        rank_u = tower_reduce(reduce_complex(c, "V0")).rank
        cached = rank_v == 1 and rank_u == 1
        c.__dict__["_knotlike"] = cached
    return cached


# --- correction terms -------------------------------------------------------


def v_invariant(c: BigradedComplex, s: int) -> int:
    """Correction term of the level-s subcomplex: -d/2."""
    d = d_invariant(a_level_complex(c, s))
    if d % 2:
        raise ConsistencyError(f"tower grading {d} at level {s} is odd")
    return -d // 2


def y_invariant(c: BigradedComplex, n: int) -> int:
    """V_0 of the tensor with the n-step dual staircase."""
    from .builders import staircase_dual

    if n < 0:
        raise ValidationError("index must be nonnegative")
    if n == 0:
        return v_invariant(c, 0)
    return v_invariant(c.tensor(staircase_dual(n)), 0)


def _default_cap(c: BigradedComplex) -> int:
    return 4 * max(c.max_alexander(), 0) + 4


def nu_plus(c: BigradedComplex, cap: Optional[int] = None) -> int:
    """Minimal s >= 0 with V_s = 0."""
    limit = _default_cap(c) if cap is None else cap
    for s in range(limit + 1):
        if v_invariant(c, s) == 0:
            return s
    raise ConsistencyError(f"V_s did not vanish by the iteration cap {limit}")


def omega_plus(c: BigradedComplex, cap: Optional[int] = None) -> int:
    """Minimal n >= 0 with Y_n = 0."""
    limit = _default_cap(c) if cap is None else cap
    for n in range(limit + 1):
        if y_invariant(c, n) == 0:
            return n
    raise ConsistencyError(f"Y_n did not vanish by the iteration cap {limit}")


# --- invariants of the UV = 0 reduction -------------------------------------


def _pure_v_columns(c: BigradedComplex) -> List[int]:
    cols = []
    for g in c.gens:
        mask = 0
        for tgt, poly in c.diff_row(g.name).items():
            if any(a == 0 for a, _b in poly):
                mask |= 1 << c.index[tgt]
        cols.append(mask)
    return cols


def tau_invariant(c: BigradedComplex) -> int:
    """Alexander grading of the tower generator of the U = 0 reduction.

    Computed as the least level s at which the subcomplex of generators
    with A <= s contains a cycle outside the full column space of the
    pure-V differential: below the tower the restricted kernels consist
    of boundaries, at the tower level a non-torsion cycle appears.
    """
    if not is_knotlike(c):
        raise ValidationError("tau undefined: complex is not knot-like")
    cols = _pure_v_columns(c)
    full = Echelon(cols)
    levels = sorted(set(g.alexander for g in c.gens))
    by_level: Dict[int, List[int]] = {}
    for i, g in enumerate(c.gens):
        by_level.setdefault(g.alexander, []).append(i)
    chosen: List[int] = []
    for s in range(min(levels), max(levels) + 1):
        chosen.extend(by_level.get(s, ()))
        solver = ColumnSolver(cols[i] for i in chosen)
        for combo in solver.kernel:
            vec = 0
            rest = combo
            while rest:
                low = rest & -rest
                vec |= 1 << chosen[low.bit_length() - 1]
                rest ^= low
            if not full.contains(vec):
                return s
    raise ConsistencyError("no non-torsion class found in the U = 0 reduction")


class HatSlices:
    """Bigrading slices of the UV = 0 reduction.

    Elements are pure monomials U^du x or V^dv x, keyed (gen index, du, dv)
    with du * dv = 0. The hat ring kills every mixed product, which makes
    the U- and V-actions partial shift maps.
    """

    def __init__(self, c: BigradedComplex):
        self.hat: HatComplex = reduce_complex(c, "UV0")
        self.gens = c.gens
        self.index = c.index
        self._cache: Dict[Tuple[int, int], List[Tuple[int, int, int]]] = {}

    def slice(self, w: int, z: int) -> List[Tuple[int, int, int]]:
        key = (w, z)
        if key not in self._cache:
            out = []
            for i, g in enumerate(self.gens):
                if g.grz == z and g.grw >= w and (g.grw - w) % 2 == 0:
                    out.append((i, (g.grw - w) // 2, 0))
                if g.grw == w and g.grz > z and (g.grz - z) % 2 == 0:
                    out.append((i, 0, (g.grz - z) // 2))
            self._cache[key] = sorted(out)
        return self._cache[key]

    def boundary_cols(self, keys, target_keys) -> List[int]:
        pos = {k: m for m, k in enumerate(target_keys)}
        cols = []
        for i, du, dv in keys:
            mask = 0
            name = self.gens[i].name
            for tgt, poly in self.hat.diff_row(name).items():
                ti = self.index[tgt]
                for a, b in poly:
                    nu, nv = du + a, dv + b
                    if nu > 0 and nv > 0:
                        continue
                    mask ^= 1 << pos[(ti, nu, nv)]
            cols.append(mask)
        return cols

    def shift_cols(self, keys, target_keys, du: int, dv: int) -> List[int]:
        """Multiplication by U^du V^dv; mixed results die."""
        pos = {k: m for m, k in enumerate(target_keys)}
        cols = []
        for i, u0, v0 in keys:
            nu, nv = u0 + du, v0 + dv
            if nu > 0 and nv > 0:
                cols.append(0)
            else:
                cols.append(1 << pos[(i, nu, nv)])
        return cols

    def saturation_cap(self, w: int, z: int, variable: str) -> int:
        """Power beyond which the shifted slices are all saturated."""
        if variable == "v":
            floor = min(g.grz for g in self.gens)
            return max(1, (z - floor) // 2 + 2)
        floor = min(g.grw for g in self.gens)
        return max(1, (w - floor) // 2 + 2)

    def nontorsion_rows(self, w: int, z: int, variable: str):
        """Affine rows pinning a cycle at (w, z) to the non-torsion coset.

        `variable` is "v" or "u": which tower must survive. None when no
        non-torsion cycle lives at this bigrading.
        """
        cap = self.saturation_cap(w, z, variable)
        if variable == "v":
            dw_, dz_ = w, z - 2 * cap
            shift = (0, cap)
        else:
            dw_, dz_ = w - 2 * cap, z
            shift = (cap, 0)
        deep = self.slice(dw_, dz_)
        im = Echelon(self.boundary_cols(self.slice(dw_ + 1, dz_ + 1), deep))
        keys = self.slice(w, z)
        shifted = self.shift_cols(keys, deep, *shift)
        phi = [im.reduce(v) for v in shifted]
        below = self.slice(w - 1, z - 1)
        cycles = ColumnSolver(self.boundary_cols(keys, below)).kernel
        rep = None
        for zvec in cycles:
            acc = 0
            rest = zvec
            while rest:
                low = rest & -rest
                acc ^= phi[low.bit_length() - 1]
                rest ^= low
            if acc:
                rep = acc
                break
        if rep is None:
            return None
        bits = rep
        for p in phi:
            bits |= p
        rows = []
        b = bits
        while b:
            low = b & -b
            bit = low.bit_length() - 1
            b ^= low
            mask = 0
            for m, p in enumerate(phi):
                if (p >> bit) & 1:
                    mask |= 1 << m
            rows.append((mask, (rep >> bit) & 1))
        return keys, rows


def nu_hat(c: BigradedComplex) -> int:
    """Least level whose hat cycles hit the generator of the V = 1 quotient."""
    if not is_knotlike(c):
        raise ValidationError("nu undefined: complex is not knot-like")
    return _nu_hat_scan(c)


def _nu_hat_scan(c: BigradedComplex) -> int:
    n = len(c.gens)
    hat: HatComplex = reduce_complex(c, "UV0")
    d1 = reduce_complex(c, "U0V1")
    im1 = Echelon(d1.columns)
    gen_class = None
    for combo in ColumnSolver(d1.columns).kernel:
        reduced = im1.reduce(combo)
        if reduced:
            gen_class = reduced
            break
    if gen_class is None:
        raise ValidationError("V = 1 reduction has trivial homology")
    alex = [g.alexander for g in c.gens]
    lo, hi = min(alex), max(alex)
    for s in range(lo, hi + 2):
        mins = [((a - s, 0) if a >= s else (0, s - a)) for a in alex]
        cols = []
        for j, g in enumerate(c.gens):
            iu, jv = mins[j]
            mask = 0
            for tgt, poly in hat.diff_row(g.name).items():
                ti = c.index[tgt]
                for a, b in poly:
                    nu_, nv_ = iu + a, jv + b
                    if nu_ > 0 and nv_ > 0:
                        continue
                    if (nu_, nv_) != mins[ti]:
                        raise ConsistencyError("hat level differential mismatch")
                    mask ^= 1 << ti
            cols.append(mask)
        system = LinearSystem()
        z = list(system.new_vars(n))
        for i in range(n):
            mask = 0
            for j in range(n):
                if (cols[j] >> i) & 1:
                    mask |= 1 << z[j]
            if mask:
                system.add_equation(mask, 0)
        # image in the V = 1 quotient must represent the generator class
        proj_reduced = [
            im1.reduce(1 << j) if mins[j][0] == 0 else 0 for j in range(n)
        ]
        bits = gen_class
        for p in proj_reduced:
            bits |= p
        b = bits
        while b:
            low = b & -b
            bit = low.bit_length() - 1
            b ^= low
            mask = 0
            for j in range(n):
                if (proj_reduced[j] >> bit) & 1:
                    mask |= 1 << z[j]
            system.add_equation(mask, (gen_class >> bit) & 1)
        if system.solve() is not None:
            return s
    raise ConsistencyError("nu scan exhausted the Alexander range")


def omega_hat(c: BigradedComplex) -> int:
    """Staircase-mapping invariant of the UV = 0 reduction.

    tau when the joint cycle system is solvable at n = tau, else tau + 1;
    below tau = 0 the single-cycle system at n = 0 must be solvable. The
    fallback feasibility is verified rather than assumed.
    """
    tau = tau_invariant(c)
    slices = HatSlices(c)
    candidates = [n for n in (tau, tau + 1) if n >= 0] or [0]
    for n in candidates:
        if _omega_feasible(slices, n):
            return n
    raise ConsistencyError(
        f"omega dichotomy failed: no staircase map at n in {candidates}"
    )


def _omega_feasible(slices: HatSlices, n: int) -> bool:
    system = LinearSystem()
    zvars: Dict[int, List[int]] = {}
    zkeys: Dict[int, List[Tuple[int, int, int]]] = {}
    for i in range(-n, n + 1, 2):
        keys = slices.slice(-n + i, -n - i)
        zkeys[i] = keys
        zvars[i] = list(system.new_vars(len(keys)))
    # end conditions: the extreme cycles must be non-torsion
    v_rows = slices.nontorsion_rows(0, -2 * n, "v")
    u_rows = slices.nontorsion_rows(-2 * n, 0, "u")
    if v_rows is None or u_rows is None:
        return False
    for mask_pos, rhs in v_rows[1]:
        mask = 0
        rest = mask_pos
        while rest:
            low = rest & -rest
            mask |= 1 << zvars[n][low.bit_length() - 1]
            rest ^= low
        system.add_equation(mask, rhs)
    for mask_pos, rhs in u_rows[1]:
        mask = 0
        rest = mask_pos
        while rest:
            low = rest & -rest
            mask |= 1 << zvars[-n][low.bit_length() - 1]
            rest ^= low
        system.add_equation(mask, rhs)
    # cycle conditions
    for i in range(-n, n + 1, 2):
        keys = zkeys[i]
        below = slices.slice(-n + i - 1, -n - i - 1)
        cols = slices.boundary_cols(keys, below)
        for bit in range(len(below)):
            mask = 0
            for m, colv in enumerate(cols):
                if (colv >> bit) & 1:
                    mask |= 1 << zvars[i][m]
            if mask:
                system.add_equation(mask, 0)
    # staircase relations: U z_i + V z_(i-2) must bound
    for i in range(-n + 2, n + 1, 2):
        tgt = slices.slice(-n + i - 2, -n - i)
        wkeys = slices.slice(-n + i - 1, -n - i + 1)
        wvars = list(system.new_vars(len(wkeys)))
        bcols = slices.boundary_cols(wkeys, tgt)
        ucols = slices.shift_cols(zkeys[i], tgt, 1, 0)
        vcols = slices.shift_cols(zkeys[i - 2], tgt, 0, 1)
        for bit in range(len(tgt)):
            mask = 0
            for m, colv in enumerate(bcols):
                if (colv >> bit) & 1:
                    mask |= 1 << wvars[m]
            for m, colv in enumerate(ucols):
                if (colv >> bit) & 1:
                    mask |= 1 << zvars[i][m]
            for m, colv in enumerate(vcols):
                if (colv >> bit) & 1:
                    mask |= 1 << zvars[i - 2][m]
            if mask:
                system.add_equation(mask, 0)
    return system.solve() is not None


# --- assembled table --------------------------------------------------------


@dataclass
class InvariantTable:
    v: Dict[int, int]
    y: Dict[int, int]
    nu_plus: int
    omega_plus: int
    tau: int
    nu_hat: int
    omega_hat: int

    def consistency_violations(self) -> List[str]:
        out = []
        for s, val in self.v.items():
            if s >= 0 and val < 0:
                out.append(f"V_{s} = {val} < 0")
            nxt = self.v.get(s + 1)
            if nxt is not None and not (nxt <= val <= nxt + 1):
                out.append(f"V_{s}={val}, V_{s+1}={nxt} breaks monotonicity")
        for n, val in self.y.items():
            nxt = self.y.get(n + 1)
            if nxt is not None and not (nxt <= val <= nxt + 1):
                out.append(f"Y_{n}={val}, Y_{n+1}={nxt} breaks monotonicity")
            vval = self.v.get(n)
            if vval is not None and vval > val:
                out.append(f"V_{n}={vval} > Y_{n}={val}")
        if 0 in self.v and 0 in self.y and self.v[0] != self.y[0]:
            out.append(f"Y_0={self.y[0]} != V_0={self.v[0]}")
        if self.nu_hat not in (self.tau, self.tau + 1):
            out.append(f"nu={self.nu_hat} outside {{tau, tau+1}}, tau={self.tau}")
        if self.tau >= 0 and self.omega_hat not in (self.tau, self.tau + 1):
            out.append(f"omega={self.omega_hat} outside {{tau, tau+1}}, tau={self.tau}")
        if self.tau < 0 and self.omega_hat != 0:
            out.append(f"omega={self.omega_hat} nonzero with tau={self.tau} < 0")
        if self.nu_hat > self.omega_hat:
            out.append(f"nu={self.nu_hat} > omega={self.omega_hat}")
        if self.nu_plus > self.omega_plus:
            out.append(f"nu+={self.nu_plus} > omega+={self.omega_plus}")
        return out


def compute_invariant_table(
    c: BigradedComplex,
    v_indices: Sequence[int] = (),
    y_indices: Sequence[int] = (),
    cap: Optional[int] = None,
) -> InvariantTable:
    """All integer invariants of one complex; raises on self-inconsistency."""
    nu_p = nu_plus(c, cap)
    omega_p = omega_plus(c, cap)
    v: Dict[int, int] = {}
    for s in sorted(set(range(nu_p + 1)) | set(v_indices)):
        v[s] = v_invariant(c, s)
    y: Dict[int, int] = {}
    for n in sorted(set(range(omega_p + 1)) | set(y_indices)):
        y[n] = y_invariant(c, n)
    table = InvariantTable(
        v=v,
        y=y,
        nu_plus=nu_p,
        omega_plus=omega_p,
        tau=tau_invariant(c),
        nu_hat=nu_hat(c),
        omega_hat=omega_hat(c),
    )
    problems = table.consistency_violations()
    if problems:
        raise ConsistencyError("; ".join(problems))
    return table
