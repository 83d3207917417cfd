"""Smith normal form over GF(2)[T].

GF(2)[T] is a principal ideal domain with unit group {1}, so the Smith
form needs no sign or leading-coefficient bookkeeping: pivoting on an
entry of minimal degree with exact division always terminates. The
transforms U, V are products of elementary operations, hence have
determinant 1; `verify_snf` re-multiplies the certificates.

This module is the independent oracle for the tower computations in
`fu`; it is deliberately simple and only meant for small matrices.
"""

from __future__ import annotations

from typing import List, Tuple

from .rings import t_deg, t_divmod, t_mul

TMatrix = List[List[int]]


def t_mat_identity(n: int) -> TMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def t_mat_mul(a: TMatrix, b: TMatrix) -> TMatrix:
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if not x:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j]:
                    oi[j] ^= t_mul(x, bt[j])
    return out


def t_mat_det(a: TMatrix) -> int:
    """Determinant by Laplace expansion; fine for the small certificates."""
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    det = 0
    for j in range(n):
        if not a[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        det ^= t_mul(a[0][j], t_mat_det(minor))
    return det


def smith_normal_form(mat: TMatrix) -> Tuple[List[int], TMatrix, TMatrix]:
    """Return (factors, U, V) with U*mat*V diagonal.

    `factors` lists the diagonal d_0 | d_1 | ... (zeros trimmed from the
    end). U and V are invertible, built from row/column swaps and
    polynomial-multiple additions only.
    """
    a = [row[:] for row in mat]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    u = t_mat_identity(nrows)
    v = t_mat_identity(ncols)

    def row_add(dst: int, src: int, q: int) -> None:
        for j in range(ncols):
            if a[src][j]:
                a[dst][j] ^= t_mul(q, a[src][j])
        for j in range(nrows):
            if u[src][j]:
                u[dst][j] ^= t_mul(q, u[src][j])

    def col_add(dst: int, src: int, q: int) -> None:
        for i in range(nrows):
            if a[i][src]:
                a[i][dst] ^= t_mul(q, a[i][src])
        for i in range(ncols):
            if v[i][src]:
                v[i][dst] ^= t_mul(q, v[i][src])

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    k = 0
    while k < min(nrows, ncols):
        # Degree-minimal pivot in the trailing block.
        pivot = None
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                if a[i][j]:
                    d = t_deg(a[i][j])
                    if best is None or d < best:
                        best = d
                        pivot = (i, j)
        if pivot is None:
            break
        row_swap(k, pivot[0])
        col_swap(k, pivot[1])

        dirty = False
        for i in range(k + 1, nrows):
            if a[i][k]:
                q, r = t_divmod(a[i][k], a[k][k])
                row_add(i, k, q)
                if r:
                    dirty = True
        for j in range(k + 1, ncols):
            if a[k][j]:
                q, r = t_divmod(a[k][j], a[k][k])
                col_add(j, k, q)
                if r:
                    dirty = True
        if dirty:
            continue

        # Divisibility of the remaining block; pull in an offender and redo.
        offender = None
        for i in range(k + 1, nrows):
            for j in range(k + 1, ncols):
                if a[i][j] and t_divmod(a[i][j], a[k][k])[1]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(k, offender, 1)
            continue
        k += 1

    factors = [a[i][i] for i in range(min(nrows, ncols)) if a[i][i]]
    return factors, u, v


def verify_snf(mat: TMatrix, factors: List[int], u: TMatrix, v: TMatrix) -> bool:
    """Re-multiply the certificates: U*mat*V must equal diag(factors)."""
    prod = t_mat_mul(t_mat_mul(u, mat), v)
    for i, row in enumerate(prod):
        for j, entry in enumerate(row):
            want = factors[i] if (i == j and i < len(factors)) else 0
            if entry != want:
                return False
    for i in range(1, len(factors)):
        if t_divmod(factors[i], factors[i - 1])[1]:
            return False
    return True


def t_mat_rank(mat: TMatrix) -> int:
    """Rank over the fraction field GF(2)(T)."""
    if not mat or not mat[0]:
        return 0
    return len(smith_normal_form(mat)[0])


def solve_in_column_span(mat: TMatrix, target: List[int]):
    """Solve mat * w = target exactly over GF(2)[T]; None when unsolvable."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    factors, u, v = smith_normal_form(mat)
    # U*mat*V = S, so w = V * y with S y = U*target.
    rhs = [0] * nrows
    for i in range(nrows):
        acc = 0
        for j in range(nrows):
            if u[i][j] and target[j]:
                acc ^= t_mul(u[i][j], target[j])
        rhs[i] = acc
    y = [0] * ncols
    for i in range(nrows):
        if i < len(factors):
            q, r = t_divmod(rhs[i], factors[i]) if rhs[i] else (0, 0)
            if r:
                return None
            y[i] = q
        elif rhs[i]:
            return None
    w = [0] * ncols
    for i in range(ncols):
        acc = 0
        for j in range(ncols):
            if v[i][j] and y[j]:
                acc ^= t_mul(v[i][j], y[j])
        w[i] = acc
    return w
