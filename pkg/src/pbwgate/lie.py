"""Lie algebras, subalgebra inclusions and the h-module constructors.

A Lie algebra is a table of structure constants over the rationals; an
inclusion pair carries an injective embedding matrix for h, the canonical
echelon complement realizing n = g/h, and the linear splitting sigma: n -> g.
All module constructors fix lexicographic bases so that downstream matrices
(cochains, filtration levels) are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import Echelon, LinearSolver, Matrix, Q, qf

Vec = dict  # sparse vector: basis index -> Fraction


class NotInjectiveError(ValueError):
    """The candidate embedding matrix has a kernel."""


class NotSubalgebraError(ValueError):
    """The candidate subspace is not closed under the bracket."""

    def __init__(self, i: int, j: int):
        self.witness = (i, j)
        super().__init__(f"bracket of basis elements {i} and {j} leaves the subspace")


def _vec(entries) -> Vec:
    return {k: qf(v) for k, v in entries.items() if qf(v)}


class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants.

    ``table[i][j]`` is the sparse vector of [x_i, x_j]; the constructor stores
    the table exactly as given so that validation can report antisymmetry and
    Jacobi violations as data rather than refusing to build.
    """

    def __init__(self, dim: int, labels: Optional[Sequence[str]] = None, table=None):
        self.dim = dim
        self.labels = tuple(labels) if labels else tuple(f"x{i}" for i in range(dim))
        if len(self.labels) != dim:
            raise ValueError("label count mismatch")
        if table is None:
            table = [[{} for _ in range(dim)] for _ in range(dim)]
        self.table = tuple(tuple(_vec(table[i][j]) for j in range(dim)) for i in range(dim))

    @classmethod
    def from_pairs(cls, dim: int, pairs, labels: Optional[Sequence[str]] = None) -> "LieAlgebra":
        """Build from (i, j, {k: c}) entries for i < j, filling antisymmetry."""
        table = [[{} for _ in range(dim)] for _ in range(dim)]
        for i, j, coeffs in pairs:
            cv = _vec(coeffs)
            table[i][j] = cv
            table[j][i] = {k: -v for k, v in cv.items()}
        return cls(dim, labels, table)

    def bracket_basis(self, i: int, j: int) -> Vec:
        return dict(self.table[i][j])

    def bracket(self, x: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for i, xi in x.items():
            for j, yj in y.items():
                for k, c in self.table[i][j].items():
                    w = out.get(k, 0) + xi * yj * c
                    if w:
                        out[k] = w
                    else:
                        out.pop(k, None)
        return out

    def direct_sum(self, other: "LieAlgebra") -> "LieAlgebra":
        dim = self.dim + other.dim
        labels = tuple(f"{l}1" for l in self.labels) + tuple(f"{l}2" for l in other.labels)
        table = [[{} for _ in range(dim)] for _ in range(dim)]
        for i in range(self.dim):
            for j in range(self.dim):
                table[i][j] = dict(self.table[i][j])
        off = self.dim
        for i in range(other.dim):
            for j in range(other.dim):
                table[off + i][off + j] = {off + k: v for k, v in other.table[i][j].items()}
        return LieAlgebra(dim, labels, table)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, labels={self.labels})"


@dataclass
class ValidationIssue:
    kind: str  # "antisymmetry" | "jacobi"
    indices: tuple
    defect: Vec


@dataclass
class LieValidation:
    issues: list

    @property
    def ok(self) -> bool:
        return not self.issues


def validate_lie(alg: LieAlgebra) -> LieValidation:
    """Report every violated antisymmetry pair and Jacobi triple."""
    issues = []
    for i in range(alg.dim):
        for j in range(i, alg.dim):
            defect: Vec = dict(alg.table[i][j])
            for k, v in alg.table[j][i].items():
                w = defect.get(k, 0) + v
                if w:
                    defect[k] = w
                else:
                    defect.pop(k, None)
            if i == j:
                defect = dict(alg.table[i][i])
            if defect:
                issues.append(ValidationIssue("antisymmetry", (i, j), defect))
    for i, j, k in itertools.combinations(range(alg.dim), 3):
        ei, ej, ek = ({i: Q(1)}, {j: Q(1)}, {k: Q(1)})
        defect = {}
        for term in (
            alg.bracket(alg.bracket(ei, ej), ek),
            alg.bracket(alg.bracket(ej, ek), ei),
            alg.bracket(alg.bracket(ek, ei), ej),
        ):
            for c, v in term.items():
                w = defect.get(c, 0) + v
                if w:
                    defect[c] = w
                else:
                    defect.pop(c, None)
        if defect:
            issues.append(ValidationIssue("jacobi", (i, j, k), defect))
    return LieValidation(issues)


class LieModule:
    """Finite-dimensional module: one action matrix per basis element of the
    acting Lie algebra."""

    def __init__(self, algebra: LieAlgebra, dim: int, action: Sequence[Matrix], labels=None):
        if len(action) != algebra.dim:
            raise ValueError("need one action matrix per acting basis element")
        for m in action:
            if m.rows != dim or m.cols != dim:
                raise ValueError("action matrix shape mismatch")
        self.algebra = algebra
        self.dim = dim
        self.action = tuple(action)
        self.labels = tuple(labels) if labels else tuple(f"v{i}" for i in range(dim))

    def act(self, i: int) -> Matrix:
        return self.action[i]

    def act_vec(self, x: Vec) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for i, c in x.items():
            out = out + self.action[i].scale(c)
        return out

    def compatibility_defects(self) -> list:
        """Pairs (i, j) where action([x_i,x_j]) != [action(x_i), action(x_j)]."""
        bad = []
        alg = self.algebra
        for i in range(alg.dim):
            for j in range(i + 1, alg.dim):
                lhs = self.act_vec(alg.table[i][j])
                rhs = self.action[i].mul(self.action[j]) - self.action[j].mul(self.action[i])
                if lhs != rhs:
                    bad.append((i, j))
        return bad

    def is_compatible(self) -> bool:
        return not self.compatibility_defects()

    def __repr__(self) -> str:
        return f"LieModule(dim={self.dim} over dim-{self.algebra.dim} algebra)"


@dataclass
class ModuleMap:
    """Linear map between modules over the same acting algebra."""

    source: LieModule
    target: LieModule
    matrix: Matrix

    def is_equivariant(self) -> bool:
        for i in range(self.source.algebra.dim):
            if self.matrix.mul(self.source.action[i]) != self.target.action[i].mul(self.matrix):
                return False
        return True

    def equivariance_defect(self) -> Optional[int]:
        for i in range(self.source.algebra.dim):
            if self.matrix.mul(self.source.action[i]) != self.target.action[i].mul(self.matrix):
                return i
        return None


class InclusionPair:
    """Subalgebra inclusion h -> g with adapted basis and splitting sigma.

    The adapted basis lists the embedded h-basis first and then the standard
    basis vectors at the echelon complement coordinates; sigma embeds the
    complement coordinates back into g.  Letters (used by the word rewriting
    in the engine) index the adapted basis with the n-letters first:
    letter r < dim_n is sigma(n_r), letter dim_n + a is the a-th h generator.
    """

    def __init__(self, g: LieAlgebra, h_embedding: Matrix, complement: Sequence[int]):
        self.g = g
        self.h_embedding = h_embedding
        self.dim_h = h_embedding.cols
        self.dim_n = g.dim - self.dim_h
        self.complement = tuple(complement)
        cols = [h_embedding.col_list(a) for a in range(self.dim_h)]
        for r in self.complement:
            e = [Q(0)] * g.dim
            e[r] = Q(1)
            cols.append(e)
        self.adapted = Matrix.from_cols(cols, rows=g.dim)
        self._coords = LinearSolver(self.adapted)
        if self._coords.rank != g.dim:
            raise ValueError("complement does not complete the subalgebra to a basis of g")
        self.sigma = Matrix.from_cols(cols[self.dim_h:], rows=g.dim)
        self.h = self._induced_subalgebra()
        self.n_labels = tuple(g.labels[r] for r in self.complement)
        self._bracket_table = None
        self._caches: dict = {}

    # -- coordinates -------------------------------------------------------

    def coords(self, x) -> list:
        """Adapted coordinates (h-part then n-part) of a vector of g."""
        sol = self._coords.solve(x)
        assert sol is not None
        return sol

    def h_part(self, x) -> list:
        return self.coords(x)[: self.dim_h]

    def n_part(self, x) -> list:
        return self.coords(x)[self.dim_h:]

    def embed_h(self, a: Vec) -> list:
        return self.h_embedding.apply(a)

    def letter_vector(self, u: int) -> list:
        """Letter u as a vector of g: n-letters first, then h-letters."""
        if u < self.dim_n:
            return self.sigma.col_list(u)
        return self.h_embedding.col_list(u - self.dim_n)

    def letter_coords(self, x) -> Vec:
        """Expand a g vector over the letters (n-letters then h-letters)."""
        c = self.coords(x)
        out: Vec = {}
        for r in range(self.dim_n):
            if c[self.dim_h + r]:
                out[r] = c[self.dim_h + r]
        for a in range(self.dim_h):
            if c[a]:
                out[self.dim_n + a] = c[a]
        return out

    def bracket_letters(self, u: int, v: int) -> Vec:
        """[letter u, letter v] expanded over letters (cached)."""
        if self._bracket_table is None:
            dg = self.g.dim
            table = [[None] * dg for _ in range(dg)]
            for a in range(dg):
                xa = {i: x for i, x in enumerate(self.letter_vector(a)) if x}
                for b in range(dg):
                    xb = {i: x for i, x in enumerate(self.letter_vector(b)) if x}
                    table[a][b] = self.letter_coords(self.g.bracket(xa, xb))
            self._bracket_table = table
        return self._bracket_table[u][v]

    def _induced_subalgebra(self) -> LieAlgebra:
        dh = self.dim_h
        table = [[{} for _ in range(dh)] for _ in range(dh)]
        solver = LinearSolver(self.h_embedding)
        for a in range(dh):
            xa = {i: v for i, v in enumerate(self.h_embedding.col_list(a)) if v}
            for b in range(dh):
                xb = {i: v for i, v in enumerate(self.h_embedding.col_list(b)) if v}
                val = self.g.bracket(xa, xb)
                sol = solver.solve([val.get(i, Q(0)) for i in range(self.g.dim)])
                if sol is None:
                    raise NotSubalgebraError(a, b)
                table[a][b] = {k: v for k, v in enumerate(sol) if v}
        labels = tuple(f"h{a}" for a in range(dh))
        if all(len(self.h_embedding.data[i]) <= 1 for i in range(self.g.dim)):
            # coordinate subalgebra: reuse the g labels
            picked = []
            for a in range(dh):
                col = self.h_embedding.col_list(a)
                nz = [i for i, v in enumerate(col) if v]
                if len(nz) == 1 and col[nz[0]] == 1:
                    picked.append(self.g.labels[nz[0]])
            if len(picked) == dh:
                labels = tuple(picked)
        return LieAlgebra(dh, labels, table)

    def __repr__(self) -> str:
        return f"InclusionPair(dim_g={self.g.dim}, dim_h={self.dim_h}, complement={self.complement})"


def make_pair(g: LieAlgebra, h_embedding, complement: Optional[Sequence[int]] = None) -> InclusionPair:
    """Validated inclusion pair with canonical echelon complement.

    ``h_embedding`` may be a Matrix, a list of columns, or a list of basis
    indices of g.  Raises NotInjectiveError / NotSubalgebraError.  A custom
    coordinate ``complement`` may be supplied to exercise independence of the
    splitting; the default is the echelon complement (standard basis vectors
    at the non-pivot coordinates of the embedded subspace).
    """
    if isinstance(h_embedding, Matrix):
        emb = h_embedding
    elif h_embedding and all(isinstance(x, int) for x in h_embedding):
        cols = []
        for r in h_embedding:
            e = [Q(0)] * g.dim
            e[r] = Q(1)
            cols.append(e)
        emb = Matrix.from_cols(cols, rows=g.dim)
    else:
        emb = Matrix.from_cols([[qf(v) for v in col] for col in h_embedding], rows=g.dim)
    if emb.rows != g.dim:
        raise ValueError("embedding has wrong ambient dimension")
    ech = Echelon(g.dim)
    for a in range(emb.cols):
        ech.insert({i: v for i, v in enumerate(emb.col_list(a)) if v})
    if ech.rank != emb.cols:
        raise NotInjectiveError("embedding matrix has dependent columns")
    if complement is None:
        complement = ech.free_columns()
    return InclusionPair(g, emb, complement)


# -- module constructors ----------------------------------------------------


def quotient_module(pair: InclusionPair) -> LieModule:
    """The h-module n on the complement coordinates: a . x = proj [i(a), sigma(x)]."""
    dn = pair.dim_n
    action = []
    for a in range(pair.dim_h):
        cols = []
        for r in range(dn):
            br = pair.bracket_letters(pair.dim_n + a, r)
            cols.append([br.get(s, Q(0)) for s in range(dn)])
        action.append(Matrix.from_cols(cols, rows=dn))
    return LieModule(pair.h, dn, action, labels=pair.n_labels)


def g_restriction_module(pair: InclusionPair) -> LieModule:
    """g as an h-module in letter coordinates (a . x = [i(a), x])."""
    dg = pair.g.dim
    action = []
    for a in range(pair.dim_h):
        cols = []
        for u in range(dg):
            br = pair.bracket_letters(pair.dim_n + a, u)
            cols.append([br.get(w, Q(0)) for w in range(dg)])
        action.append(Matrix.from_cols(cols, rows=dg))
    labels = tuple(pair.n_labels) + tuple(pair.h.labels)
    return LieModule(pair.h, dg, action, labels=labels)


def adjoint_module(alg: LieAlgebra) -> LieModule:
    action = []
    for i in range(alg.dim):
        cols = []
        for j in range(alg.dim):
            br = alg.table[i][j]
            cols.append([br.get(k, Q(0)) for k in range(alg.dim)])
        action.append(Matrix.from_cols(cols, rows=alg.dim))
    return LieModule(alg, alg.dim, action, labels=alg.labels)


def trivial_module(alg: LieAlgebra, dim: int = 1) -> LieModule:
    return LieModule(alg, dim, [Matrix.zeros(dim, dim) for _ in range(alg.dim)])


def tensor_module(m: LieModule, n: LieModule) -> LieModule:
    """Leibniz action on M (x) N; basis index = i_M * dim_N + i_N."""
    if m.algebra is not n.algebra and m.algebra.table != n.algebra.table:
        raise ValueError("modules over different algebras")
    from .linalg import tensor_map

    idm = Matrix.identity(m.dim)
    idn = Matrix.identity(n.dim)
    action = [tensor_map(m.action[i], idn) + tensor_map(idm, n.action[i]) for i in range(m.algebra.dim)]
    labels = tuple(f"{a}*{b}" for a in m.labels for b in n.labels)
    return LieModule(m.algebra, m.dim * n.dim, action, labels=labels)


def tensor_power_module(m: LieModule, k: int) -> LieModule:
    if k == 0:
        zero = [Matrix.zeros(1, 1) for _ in range(m.algebra.dim)]
        return LieModule(m.algebra, 1, zero, labels=("1",))
    out = m
    for _ in range(k - 1):
        out = tensor_module(out, m)
    return out


def hom_module(m: LieModule, n: LieModule) -> LieModule:
    """Hom(M, N) with (x . f) = act_N(x) f - f act_M(x); basis E_{ij} at i*dimM + j."""
    if m.algebra is not n.algebra and m.algebra.table != n.algebra.table:
        raise ValueError("modules over different algebras")
    from .linalg import tensor_map

    idm = Matrix.identity(m.dim)
    idn = Matrix.identity(n.dim)
    action = [
        tensor_map(n.action[i], idm) - tensor_map(idn, m.action[i].transpose())
        for i in range(m.algebra.dim)
    ]
    labels = tuple(f"E[{a},{b}]" for a in n.labels for b in m.labels)
    return LieModule(m.algebra, m.dim * n.dim, action, labels=labels)


def dual_module(m: LieModule) -> LieModule:
    return hom_module(m, trivial_module(m.algebra, 1))


def sym_monomials(dim: int, k: int) -> list:
    return list(itertools.combinations_with_replacement(range(dim), k))


def ext_monomials(dim: int, k: int) -> list:
    return list(itertools.combinations(range(dim), k))


def sort_with_sign(tup) -> Optional[tuple]:
    """Sort an index tuple, tracking the permutation sign; None on duplicates."""
    lst = list(tup)
    sign = 1
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(lst)):
        if lst[i - 1] == lst[i]:
            return None
    return tuple(lst), sign


def sym_power_module(m: LieModule, k: int) -> LieModule:
    """Symmetric power with derivation action on sorted monomial basis."""
    monos = sym_monomials(m.dim, k)
    index = {mono: i for i, mono in enumerate(monos)}
    dim = len(monos)
    action = []
    for a in range(m.algebra.dim):
        act = m.action[a]
        data = [dict() for _ in range(dim)]
        for cidx, mono in enumerate(monos):
            for pos in range(k):
                for i in range(m.dim):
                    c = act.entry(i, mono[pos])
                    if not c:
                        continue
                    new = tuple(sorted(mono[:pos] + (i,) + mono[pos + 1:]))
                    ridx = index[new]
                    w = data[ridx].get(cidx, 0) + c
                    if w:
                        data[ridx][cidx] = w
                    else:
                        data[ridx].pop(cidx, None)
        action.append(Matrix(dim, dim, data))
    labels = tuple(".".join(m.labels[i] for i in mono) if mono else "1" for mono in monos)
    return LieModule(m.algebra, dim, action, labels=labels)


def ext_power_module(m: LieModule, k: int) -> LieModule:
    """Exterior power with derivation action on strictly increasing tuples."""
    monos = ext_monomials(m.dim, k)
    index = {mono: i for i, mono in enumerate(monos)}
    dim = len(monos)
    action = []
    for a in range(m.algebra.dim):
        act = m.action[a]
        data = [dict() for _ in range(dim)]
        for cidx, mono in enumerate(monos):
            for pos in range(k):
                for i in range(m.dim):
                    c = act.entry(i, mono[pos])
                    if not c:
                        continue
                    sorted_sign = sort_with_sign(mono[:pos] + (i,) + mono[pos + 1:])
                    if sorted_sign is None:
                        continue
                    new, sign = sorted_sign
                    ridx = index[new]
                    w = data[ridx].get(cidx, 0) + sign * c
                    if w:
                        data[ridx][cidx] = w
                    else:
                        data[ridx].pop(cidx, None)
        action.append(Matrix(dim, dim, data))
    labels = tuple("^".join(m.labels[i] for i in mono) if mono else "1" for mono in monos)
    return LieModule(m.algebra, dim, action, labels=labels)
