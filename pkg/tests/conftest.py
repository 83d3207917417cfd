import random

import pytest

from knotfloer.fu import FUComplex
from knotfloer.linalg import ColumnSolver


def random_fu_complex(rng: random.Random, max_size: int = 8) -> FUComplex:
    """Random valid graded free GF(2)[T]-complex.

    Differentials are built incrementally: each new basis element maps to
    a random cycle of the partial complex one grading down, which keeps
    d^2 = 0 by construction.
    """
    n = rng.randint(1, max_size)
    gradings = [rng.randint(-4, 4) for _ in range(n)]
    cols = [0] * n
    order = list(range(n))
    rng.shuffle(order)
    assigned = []
    for j in order:
        rho = gradings[j] - 1
        slice_ = [
            (i, (gradings[i] - rho) // 2)
            for i in assigned
            if gradings[i] >= rho and (gradings[i] - rho) % 2 == 0
        ]
        if slice_ and rng.random() < 0.7:
            below = [
                (i, (gradings[i] - rho + 2) // 2)
                for i in assigned
                if gradings[i] >= rho - 1 and (gradings[i] - rho + 1) % 2 == 0
            ]
            pos = {p: m for m, p in enumerate(below)}
            bcols = []
            for i, k in slice_:
                mask = 0
                rest = cols[i]
                while rest:
                    low = rest & -rest
                    m = low.bit_length() - 1
                    rest ^= low
                    mask |= 1 << pos[(m, k + (gradings[m] - gradings[i] + 1) // 2)]
                bcols.append(mask)
            kernel = ColumnSolver(bcols).kernel
            if kernel:
                combo = 0
                for kv in kernel:
                    if rng.random() < 0.5:
                        combo ^= kv
                mask = 0
                rest = combo
                while rest:
                    low = rest & -rest
                    mask |= 1 << slice_[low.bit_length() - 1][0]
                    rest ^= low
                cols[j] = mask
        assigned.append(j)
    labels = tuple(f"e{i}" for i in range(n))
    fu = FUComplex(labels, tuple(gradings), tuple(cols))
    assert not fu.validate()
    return fu


@pytest.fixture
def rng():
    return random.Random(20240817)
