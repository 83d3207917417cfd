import random

from knotfloer.linalg import (
    ColumnSolver,
    Echelon,
    LinearSystem,
    SparseMatGF2,
    bits_to_mask,
    mask_to_bits,
)


def test_affine_solve_invertible():
    a = SparseMatGF2.from_dense([[1, 1], [0, 1]])
    x, kernel = a.solve((1, 0))
    assert x == (1, 0)
    assert kernel == []


def test_affine_solve_underdetermined():
    a = SparseMatGF2.from_dense([[1, 1]])
    x, kernel = a.solve((1,))
    assert x == (1, 0)
    assert kernel == [(1, 1)]


def test_affine_solve_no_solution():
    a = SparseMatGF2.from_dense([[0, 0], [0, 0]])
    x, kernel = a.solve((1, 0))
    assert x is None
    assert len(kernel) == 2


def test_solutions_verify_and_dimension(rng):
    for _ in range(200):
        rows = rng.randint(1, 7)
        cols = rng.randint(1, 7)
        dense = [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)]
        a = SparseMatGF2(rows, cols, [(r, c) for r in range(rows) for c in range(cols) if dense[r][c]])
        x0 = tuple(rng.randint(0, 1) for _ in range(cols))
        b = a.mul_vec(x0)
        x, kernel = a.solve(b)
        assert x is not None
        assert a.mul_vec(x) == b
        for v in kernel:
            assert a.mul_vec(v) == (0,) * rows
        assert len(kernel) == cols - a.rank()


def test_solve_deterministic(rng):
    dense = [[1, 0, 1, 1], [0, 1, 1, 0]]
    a = SparseMatGF2.from_dense(dense)
    first = a.solve((1, 1))
    for _ in range(5):
        assert SparseMatGF2.from_dense(dense).solve((1, 1)) == first


def test_duplicate_entry_rejected():
    try:
        SparseMatGF2(2, 2, [(0, 0), (0, 0)])
    except ValueError as exc:
        assert "duplicate" in str(exc)
    else:
        raise AssertionError("duplicate entry accepted")


def test_echelon_projection_is_linear(rng):
    for _ in range(200):
        dim = rng.randint(1, 10)
        ech = Echelon(rng.getrandbits(dim) for _ in range(rng.randint(0, 6)))
        a = rng.getrandbits(dim)
        b = rng.getrandbits(dim)
        assert ech.reduce(a) ^ ech.reduce(b) == ech.reduce(a ^ b)
        assert ech.contains(ech.reduce(a) ^ a)


def test_column_solver_kernel_and_solve(rng):
    for _ in range(100):
        ncols = rng.randint(1, 8)
        cols = [rng.getrandbits(6) for _ in range(ncols)]
        solver = ColumnSolver(cols)
        for combo in solver.kernel:
            acc = 0
            for j in range(ncols):
                if (combo >> j) & 1:
                    acc ^= cols[j]
            assert acc == 0
        target = 0
        picks = rng.getrandbits(ncols)
        for j in range(ncols):
            if (picks >> j) & 1:
                target ^= cols[j]
        combo = solver.solve(target)
        assert combo is not None
        acc = 0
        for j in range(ncols):
            if (combo >> j) & 1:
                acc ^= cols[j]
        assert acc == target


def test_linear_system_solves(rng):
    for _ in range(100):
        nvars = rng.randint(1, 8)
        system = LinearSystem()
        system.new_vars(nvars)
        secret = rng.getrandbits(nvars)
        rows = []
        for _ in range(rng.randint(1, 10)):
            mask = rng.getrandbits(nvars)
            rhs = bin(mask & secret).count("1") % 2
            system.add_equation(mask, rhs)
            rows.append((mask, rhs))
        got = system.solve()
        assert got is not None
        for mask, rhs in rows:
            assert bin(mask & got).count("1") % 2 == rhs


def test_linear_system_inconsistent():
    system = LinearSystem()
    system.new_vars(2)
    system.add_equation(0b11, 0)
    system.add_equation(0b11, 1)
    assert system.solve() is None


def test_mask_round_trip():
    assert bits_to_mask(mask_to_bits(0b1011, 5)) == 0b1011
