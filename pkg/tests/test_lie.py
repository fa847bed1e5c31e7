from fractions import Fraction as Q

import pytest

from pbwgate.lie import (
    LieAlgebra,
    LieModule,
    ModuleMap,
    NotInjectiveError,
    NotSubalgebraError,
    adjoint_module,
    dual_module,
    ext_power_module,
    hom_module,
    make_pair,
    quotient_module,
    sym_power_module,
    tensor_module,
    tensor_power_module,
    trivial_module,
    validate_lie,
)
from pbwgate.linalg import Matrix, solve

from conftest import diagonal_embedding, heisenberg, sl2


def test_validate_abelian():
    assert validate_lie(LieAlgebra(4)).ok


def test_validate_sl2():
    assert validate_lie(sl2()).ok


def test_validate_heisenberg():
    assert validate_lie(heisenberg()).ok


def test_validate_flipped_antisymmetry():
    alg = sl2()
    table = [[dict(alg.table[i][j]) for j in range(3)] for i in range(3)]
    table[2][0] = {1: Q(1)}  # should be -[e,f] = -h
    bad = LieAlgebra(3, alg.labels, table)
    rep = validate_lie(bad)
    assert not rep.ok
    kinds = {issue.kind for issue in rep.issues}
    assert "antisymmetry" in kinds
    assert any(issue.indices == (0, 2) for issue in rep.issues if issue.kind == "antisymmetry")


def test_validate_broken_jacobi():
    # [a0,a1]=0, [a0,a2]=a2, [a1,a2]=a0 breaks Jacobi but not antisymmetry
    alg = LieAlgebra.from_pairs(3, [(0, 2, {2: 1}), (1, 2, {0: 1})])
    rep = validate_lie(alg)
    assert [issue.kind for issue in rep.issues] == ["jacobi"]


def test_make_pair_sl2_borel(sl2_borel):
    assert sl2_borel.complement == (2,)
    assert sl2_borel.sigma.col_list(0) == [Q(0), Q(0), Q(1)]
    assert sl2_borel.dim_n == 1


def test_make_pair_diagonal(diag_sl2):
    assert diag_sl2.dim_h == 3
    assert diag_sl2.dim_n == 3
    assert diag_sl2.complement == (3, 4, 5)


def test_make_pair_not_subalgebra():
    with pytest.raises(NotSubalgebraError) as err:
        make_pair(sl2(), [0, 2])  # span{e, f}: [e,f] = h escapes
    assert err.value.witness in {(0, 1), (1, 0)}


def test_make_pair_not_injective():
    cols = [[1, 0, 0], [2, 0, 0]]
    with pytest.raises(NotInjectiveError):
        make_pair(sl2(), cols)


def test_induced_subalgebra_structure(sl2_borel):
    h = sl2_borel.h
    # h basis (e, h): [h, e] = 2e, i.e. table[1][0] = {0: 2}
    assert h.table[1][0] == {0: Q(2)}
    assert h.table[0][1] == {0: Q(-2)}
    assert validate_lie(h).ok


def test_quotient_module_sl2_borel(sl2_borel):
    n = quotient_module(sl2_borel)
    assert n.dim == 1
    assert n.action[0] == Matrix.zeros(1, 1)  # e acts by 0
    assert n.action[1] == Matrix.from_rows([[-2]])  # h acts by -2
    assert n.is_compatible()


def test_quotient_module_abelian(abelian_pair):
    n = quotient_module(abelian_pair)
    assert n.dim == 2
    assert all(m.is_zero() for m in n.action)


def test_quotient_of_diagonal_is_adjoint(diag_sl2):
    n = quotient_module(diag_sl2)
    ad = adjoint_module(sl2())
    # intertwiner theta(x) = n-part of (x, 0); here it is the identity on coordinates
    for a in range(3):
        assert n.action[a] == ad.action[a]
    assert n.is_compatible()


def test_quotient_independent_of_complement():
    g = sl2().direct_sum(sl2())
    p1 = make_pair(g, diagonal_embedding(sl2()))
    p2 = make_pair(g, diagonal_embedding(sl2()), complement=(0, 1, 2))
    n1, n2 = quotient_module(p1), quotient_module(p2)
    # transport: theta = n2-coordinates of sigma1
    theta_cols = [p2.n_part(p1.sigma.col_list(r)) for r in range(p1.dim_n)]
    theta = Matrix.from_cols(theta_cols, rows=p2.dim_n)
    f = ModuleMap(n1, n2, theta)
    assert f.is_equivariant()
    assert theta.rank() == p1.dim_n


def test_tensor_with_trivial_is_identity(sl2_borel):
    n = quotient_module(sl2_borel)
    t = tensor_module(trivial_module(sl2_borel.h), n)
    for a in range(sl2_borel.dim_h):
        assert t.action[a] == n.action[a]


def test_tensor_square_of_borel_quotient(sl2_borel):
    n = quotient_module(sl2_borel)
    t = tensor_module(n, n)
    assert t.dim == 1
    assert t.action[0] == Matrix.zeros(1, 1)  # e
    assert t.action[1] == Matrix.from_rows([[-4]])  # h: Leibniz -2 + -2
    assert t.is_compatible()


def test_tensor_bracket_compatibility(diag_sl2):
    n = quotient_module(diag_sl2)
    assert tensor_module(n, n).is_compatible()


def test_tensor_associativity_reindexing(diag_heis):
    n = quotient_module(diag_heis)
    m = trivial_module(diag_heis.h, 2)
    left = tensor_module(tensor_module(n, m), n)
    right = tensor_module(n, tensor_module(m, n))
    # same flat index order (i, j, k) -> (i*dimM + j)*dimN + k in both
    for a in range(diag_heis.dim_h):
        assert left.action[a] == right.action[a]


def test_hom_from_trivial(sl2_borel):
    n = quotient_module(sl2_borel)
    h = hom_module(trivial_module(sl2_borel.h), n)
    for a in range(sl2_borel.dim_h):
        assert h.action[a] == n.action[a]


def test_hom_e_acts_trivially_on_borel_hom(sl2_borel):
    n = quotient_module(sl2_borel)
    hom = hom_module(tensor_module(n, n), n)
    assert hom.action[0].is_zero()  # e acts trivially since it kills n
    assert hom.is_compatible()


def test_double_dual(diag_sl2):
    n = quotient_module(diag_sl2)
    dd = dual_module(dual_module(n))
    # double dual action equals the original in the canonical bases
    for a in range(diag_sl2.dim_h):
        assert dd.action[a] == n.action[a]


def test_sym_ext_power_dims():
    ad = adjoint_module(sl2())
    assert sym_power_module(ad, 0).dim == 1
    assert ext_power_module(ad, 0).dim == 1
    assert sym_power_module(ad, 2).dim == 6
    assert ext_power_module(ad, 2).dim == 3
    assert ext_power_module(ad, 3).dim == 1
    assert ext_power_module(ad, 4).dim == 0


def test_sym_ext_power_compatibility():
    ad = adjoint_module(sl2())
    assert sym_power_module(ad, 2).is_compatible()
    assert ext_power_module(ad, 2).is_compatible()
    assert tensor_power_module(ad, 2).is_compatible()


def test_tensor_power_of_line(sl2_borel):
    n = quotient_module(sl2_borel)
    t3 = tensor_power_module(n, 3)
    assert t3.dim == 1
    assert t3.action[1] == Matrix.from_rows([[-6]])


def test_letter_coords_roundtrip(diag_sl2):
    for u in range(diag_sl2.g.dim):
        vec = diag_sl2.letter_vector(u)
        assert diag_sl2.letter_coords(vec) == {u: Q(1)}


def test_tensor_hom_algebra_mismatch(sl2_borel, semidirect_pair):
    n1 = quotient_module(sl2_borel)
    n2 = quotient_module(semidirect_pair)
    with pytest.raises(ValueError):
        tensor_module(n1, n2)
    with pytest.raises(ValueError):
        hom_module(n1, n2)
