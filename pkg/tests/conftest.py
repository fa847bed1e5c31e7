from fractions import Fraction as Q

import pytest

from pbwgate.lie import LieAlgebra, make_pair


def sl2() -> LieAlgebra:
    # basis (e, h, f): [e,f] = h, [h,e] = 2e, [h,f] = -2f
    return LieAlgebra.from_pairs(
        3,
        [
            (0, 2, {1: 1}),
            (1, 0, {0: 2}),
            (1, 2, {2: -2}),
        ],
        labels=("e", "h", "f"),
    )


def heisenberg() -> LieAlgebra:
    # basis (p, q, z): [p,q] = z
    return LieAlgebra.from_pairs(3, [(0, 1, {2: 1})], labels=("p", "q", "z"))


def affine_line() -> LieAlgebra:
    # basis (x, y): [x,y] = y
    return LieAlgebra.from_pairs(2, [(0, 1, {1: 1})], labels=("x", "y"))


def diagonal_embedding(alg: LieAlgebra):
    cols = []
    for i in range(alg.dim):
        col = [Q(0)] * (2 * alg.dim)
        col[i] = Q(1)
        col[alg.dim + i] = Q(1)
        cols.append(col)
    return cols


@pytest.fixture
def sl2_borel():
    return make_pair(sl2(), [0, 1])


@pytest.fixture
def diag_sl2():
    g = sl2().direct_sum(sl2())
    return make_pair(g, diagonal_embedding(sl2()))


@pytest.fixture
def diag_heis():
    g = heisenberg().direct_sum(heisenberg())
    return make_pair(g, diagonal_embedding(heisenberg()))


@pytest.fixture
def abelian_pair():
    g = LieAlgebra(3, labels=("a", "b", "c"))
    return make_pair(g, [0])


@pytest.fixture
def semidirect_pair():
    # h = span{t} acting on the abelian ideal span{x, y} by rotation
    g = LieAlgebra.from_pairs(
        3,
        [
            (0, 1, {2: 1}),
            (0, 2, {1: -1}),
        ],
        labels=("t", "x", "y"),
    )
    return make_pair(g, [0])
