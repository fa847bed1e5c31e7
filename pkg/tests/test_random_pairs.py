"""Property tests on randomized valid pairs.

Random structure constants rarely satisfy the Jacobi identity, so random
*valid* pairs are produced by conjugating catalog pairs with random
invertible rational basis changes: the result is an isomorphic inclusion in
scrambled coordinates, which exercises the adapted-basis machinery, and all
basis-independent verdicts must be unchanged.
"""

import random
from fractions import Fraction as Q

import pytest

from pbwgate.catalog import catalog_get
from pbwgate.cohomology import alpha_cocycle, ce_differential, connecting_cocycle, is_trivial
from pbwgate.engine import build_filtration, gr_check
from pbwgate.koszul import bg_conditions
from pbwgate.lie import LieAlgebra, make_pair, quotient_module, validate_lie
from pbwgate.linalg import Matrix, solve


def _random_invertible(rng, n):
    while True:
        m = Matrix.from_rows([[Q(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)])
        if m.rank() == n:
            return m


def _invert(m):
    cols = []
    for j in range(m.rows):
        e = [Q(0)] * m.rows
        e[j] = Q(1)
        x = solve(m, e)
        cols.append(x)
    return Matrix.from_cols(cols, rows=m.cols)


def _conjugate(pf, p_mat):
    """The same inclusion written in the basis P e_i."""
    alg = pf.algebra()
    p_inv = _invert(p_mat)
    dg = alg.dim
    table = [[{} for _ in range(dg)] for _ in range(dg)]
    for i in range(dg):
        xi = {k: v for k, v in enumerate(p_mat.col_list(i)) if v}
        for j in range(dg):
            xj = {k: v for k, v in enumerate(p_mat.col_list(j)) if v}
            br = alg.bracket(xi, xj)
            moved = p_inv.apply([br.get(k, Q(0)) for k in range(dg)])
            table[i][j] = {k: v for k, v in enumerate(moved) if v}
    conj = LieAlgebra(dg, alg.labels, table)
    pair0 = pf.pair()
    emb_cols = [
        p_inv.apply(pair0.h_embedding.col_list(a)) for a in range(pair0.dim_h)
    ]
    return conj, emb_cols


CASES = [("sl2-borel", 3), ("semidirect-split", 5), ("diagonal-heisenberg", 11)]


@pytest.mark.parametrize("name,seed", CASES)
def test_conjugated_pair_properties(name, seed):
    rng = random.Random(seed)
    pf = catalog_get(name)
    base_pair = pf.pair()
    base_verdict = is_trivial(base_pair, quotient_module(base_pair)) is not None
    for _ in range(3):
        p_mat = _random_invertible(rng, pf.dim)
        conj, emb_cols = _conjugate(pf, p_mat)
        assert validate_lie(conj).ok
        pair = make_pair(conj, emb_cols)
        assert pair.dim_n == base_pair.dim_n
        n_mod = quotient_module(pair)
        assert n_mod.is_compatible()
        # the cocycle identities, checked explicitly rather than by the
        # constructors' internal assertions
        c = connecting_cocycle(pair)
        a = alpha_cocycle(pair, n_mod)
        for cochain in (c, a):
            d1 = ce_differential(pair.h, cochain.module, 1)
            assert not any(x for x in d1.apply(cochain.vec()))
        # basis-independent verdicts
        assert (is_trivial(pair, n_mod, a) is not None) == base_verdict
        assert bg_conditions(pair) == (True, True)
        dn = pair.dim_n
        filt = build_filtration(pair, "F", 2)
        assert [filt.dim(k) for k in range(3)] == [1, 1 + dn, 1 + dn + dn * dn]
        for k in range(3):
            assert gr_check(filt, k).ok


def test_conjugated_pair_harness_small():
    # one deeper run on a scrambled three-dimensional pair
    from pbwgate.engine import equivalence_harness

    rng = random.Random(23)
    pf = catalog_get("semidirect-split")
    p_mat = _random_invertible(rng, 3)
    conj, emb_cols = _conjugate(pf, p_mat)
    pair = make_pair(conj, emb_cols)
    rep = equivalence_harness(pair, K=3)
    assert rep.alpha_trivial
    assert rep.ok
