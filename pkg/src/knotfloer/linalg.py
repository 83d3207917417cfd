"""Bit-packed exact linear algebra over GF(2).

A vector is a Python int (bit i = coordinate i); a matrix is a list of
column ints. The pivot is always the highest set bit and input order is
preserved, so every routine is deterministic.

The sparse (row, col) entry-set representation only appears at the
interface, in :class:`SparseMatGF2`; elimination always runs on dense
bitmask columns.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple


class Echelon:
    """Fully reduced (Gauss-Jordan) basis of a subspace of GF(2)^n.

    Every stored row contains exactly one pivot bit, its own, so
    :meth:`reduce` is the canonical linear projection onto a complement
    of the subspace: reduce(a ^ b) == reduce(a) ^ reduce(b). Several
    callers build quotient functionals from per-basis-vector reductions,
    which is only sound with this linearity.
    """

    __slots__ = ("pivots", "pivot_mask")

    def __init__(self, vectors: Iterable[int] = ()):
        self.pivots: dict = {}
        self.pivot_mask = 0
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        pivots = self.pivots
        while True:
            hit = v & self.pivot_mask
            if not hit:
                return v
            v ^= pivots[hit.bit_length() - 1]

    def add(self, v: int) -> bool:
        """Insert v; returns True when the dimension grew."""
        v = self.reduce(v)
        if v == 0:
            return False
        p = v.bit_length() - 1
        bit = 1 << p
        for q, row in self.pivots.items():
            if row & bit:
                self.pivots[q] = row ^ v
        self.pivots[p] = v
        self.pivot_mask |= bit
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self.pivots)


class ColumnSolver:
    """Echelon of a column family that remembers combinations.

    Solves ``sum_j x_j col_j = b`` and collects a kernel basis (the
    combinations reducing to zero). Combinations are bitmasks over the
    column indices in insertion order.
    """

    __slots__ = ("pivots", "kernel", "ncols")

    def __init__(self, cols: Iterable[int] = ()):
        self.pivots: dict = {}
        self.kernel: List[int] = []
        self.ncols = 0
        for c in cols:
            self.append(c)

    def append(self, col: int) -> None:
        combo = 1 << self.ncols
        self.ncols += 1
        vec = col
        while vec:
            p = vec.bit_length() - 1
            hit = self.pivots.get(p)
            if hit is None:
                self.pivots[p] = (vec, combo)
                return
            vec ^= hit[0]
            combo ^= hit[1]
        self.kernel.append(combo)

    def solve(self, b: int) -> Optional[int]:
        """Combination hitting b, or None; free choices are left at zero."""
        combo = 0
        while b:
            p = b.bit_length() - 1
            hit = self.pivots.get(p)
            if hit is None:
                return None
            b ^= hit[0]
            combo ^= hit[1]
        return combo

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(cols: Sequence[int]) -> int:
    ech = Echelon()
    for c in cols:
        ech.add(c)
    return ech.dim


def kernel_vectors(cols: Sequence[int]) -> List[int]:
    """Basis of {x : sum_j x_j col_j = 0} as bitmasks over column indices."""
    return ColumnSolver(cols).kernel


def mask_to_bits(mask: int, n: int) -> Tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def bits_to_mask(bits: Sequence[int]) -> int:
    out = 0
    for i, b in enumerate(bits):
        if b & 1:
            out |= 1 << i
    return out


class SparseMatGF2:
    """GF(2) matrix with a sparse entry-set interface.

    ``entries`` is a set of (row, col) positions holding 1; internally the
    matrix is kept as dense bitmask columns.
    """

    __slots__ = ("rows", "cols", "entries", "_columns")

    def __init__(self, rows: int, cols: int, entries: Iterable[Tuple[int, int]]):
        self.rows = rows
        self.cols = cols
        ent = set()
        for r, c in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) out of bounds for {rows}x{cols}")
            if (r, c) in ent:
                raise ValueError(f"duplicate entry ({r},{c})")
            ent.add((r, c))
        self.entries = frozenset(ent)
        columns = [0] * cols
        for r, c in ent:
            columns[c] |= 1 << r
        self._columns = columns

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseMatGF2":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ent = [(r, c) for r in range(nr) for c in range(nc) if rows[r][c] & 1]
        return cls(nr, nc, ent)

    def column(self, j: int) -> int:
        return self._columns[j]

    def mul_vec(self, x: Sequence[int]) -> Tuple[int, ...]:
        acc = 0
        for j, xj in enumerate(x):
            if xj & 1:
                acc ^= self._columns[j]
        return mask_to_bits(acc, self.rows)

    def rank(self) -> int:
        return rank(self._columns)

    def solve(self, b: Sequence[int]):
        """Solve A x = b.

        Returns ``(x, kernel)`` where x is a 0/1 tuple or None when there is
        no solution, and kernel is a basis of ker A as 0/1 tuples. A missing
        solution is a normal outcome, not an error.
        """
        solver = ColumnSolver(self._columns)
        combo = solver.solve(bits_to_mask(b))
        x = None if combo is None else mask_to_bits(combo, self.cols)
        ker = [mask_to_bits(k, self.cols) for k in solver.kernel]
        return x, ker


class LinearSystem:
    """Affine system over GF(2), assembled equation by equation.

    Variables are allocated through :meth:`new_vars`; an equation is a
    (coefficient bitmask, rhs bit) pair. :meth:`solve` returns one solution
    as a bitmask (free variables zero) or None.
    """

    __slots__ = ("nvars", "rows")

    def __init__(self):
        self.nvars = 0
        self.rows: List[Tuple[int, int]] = []

    def new_vars(self, n: int) -> range:
        out = range(self.nvars, self.nvars + n)
        self.nvars += n
        return out

    def add_equation(self, mask: int, rhs: int) -> None:
        self.rows.append((mask, rhs & 1))

    def solve(self) -> Optional[int]:
        pivots: dict = {}
        for mask, rhs in self.rows:
            while mask:
                p = mask.bit_length() - 1
                hit = pivots.get(p)
                if hit is None:
                    break
                mask ^= hit[0]
                rhs ^= hit[1]
            if mask == 0:
                if rhs:
                    return None
                continue
            pivots[mask.bit_length() - 1] = (mask, rhs)
        # Back-substitute in ascending pivot order; free variables stay 0.
        solution = 0
        for p in sorted(pivots):
            mask, rhs = pivots[p]
            val = rhs
            rest = mask & ~(1 << p)
            while rest:
                q = rest & -rest
                if solution & q:
                    val ^= 1
                rest ^= q
            if val:
                solution |= 1 << p
        return solution
