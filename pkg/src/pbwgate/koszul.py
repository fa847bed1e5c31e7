"""Desk-scale verification that the quadratic companion algebra behaves.

qA is the tensor algebra on g modulo the quadratic relations
qR = span{  a (x) x  -  x (x) a  :  a in h, x in g }, the quadratic part of
the rewriting relations.  This module checks, by exact rank computations:

* the two linear conditions on (qR, phi) that make the filtered algebra's
  associated graded agree with qA (phi sends a (x) x - x (x) a to [a, x]);
* the graded dimension identity  dim qA_k = sum dim_n^i * C(dim_h + j - 1, j);
* bounded-degree exactness of the Koszul complex built from the subspaces
  K^i = (wedge^{i-1} h) wedge g inside g^{(x) i}.

Everything is phrased over the adapted letters (n-letters first, h-letters
last), which makes all the relation vectors two-sparse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .lie import InclusionPair
from .linalg import Echelon, LinearSolver, Matrix, Q

Vec = dict


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


@dataclass
class QuadraticData:
    """The relation space qR with its contraction phi, over the letters."""

    pair: InclusionPair
    basis: list  # sparse vectors in g (x) g (letter-pair coordinates)
    basis_pairs: list  # the (h-letter, letter) pairs giving the basis
    phi: Matrix  # dim_g x dim(qR)
    phi_consistent: bool  # phi well defined on every spanning dependency

    @property
    def dim(self) -> int:
        return len(self.basis)


def _qr_spanning(pair: InclusionPair):
    dg = pair.g.dim
    dn = pair.dim_n
    for a in range(dn, dg):
        for x in range(dg):
            vec = {a * dg + x: Q(1)}
            key = x * dg + a
            vec[key] = vec.get(key, Q(0)) - 1
            yield (a, x), {k: v for k, v in vec.items() if v}


def quadratic_data(pair: InclusionPair) -> QuadraticData:
    dg = pair.g.dim
    span = Echelon(dg * dg)
    basis = []
    basis_pairs = []
    for (a, x), vec in _qr_spanning(pair):
        if span.insert(vec) is not None:
            basis.append(vec)
            basis_pairs.append((a, x))
    qr_matrix = Matrix.zeros(dg * dg, len(basis))
    for j, vec in enumerate(basis):
        for c, v in vec.items():
            qr_matrix.data[c][j] = v
    coords = LinearSolver(qr_matrix)
    phi = Matrix.zeros(dg, len(basis))
    for j, (a, x) in enumerate(basis_pairs):
        for u, v in pair.bracket_letters(a, x).items():
            phi.data[u][j] = v
    consistent = True
    for (a, x), vec in _qr_spanning(pair):
        y = coords.solve([vec.get(i, Q(0)) for i in range(dg * dg)])
        if y is None:
            consistent = False
            break
        target = phi.apply(y)
        br = pair.bracket_letters(a, x)
        if any(target[u] != br.get(u, Q(0)) for u in range(dg)):
            consistent = False
            break
    return QuadraticData(pair, basis, basis_pairs, phi, consistent)


def bg_conditions(pair: InclusionPair):
    """The two conditions making gr of the filtered algebra equal qA:
    (1) the image of (phi (x) id - id (x) phi) on qR(x)g intersect g(x)qR
        lies back inside qR, and (2) composing with phi kills it."""
    qd = quadratic_data(pair)
    if not qd.phi_consistent:
        return (False, False)
    dg = pair.g.dim
    dim3 = dg ** 3
    left_vectors = []  # qR (x) g
    for vec in qd.basis:
        for w in range(dg):
            lv = [Q(0)] * dim3
            for c, v in vec.items():
                lv[c * dg + w] = v
            left_vectors.append(lv)
    right_vectors = []  # g (x) qR
    for u in range(dg):
        for vec in qd.basis:
            rv = [Q(0)] * dim3
            for c, v in vec.items():
                rv[u * dg * dg + c] = v
            right_vectors.append(rv)
    from .linalg import subspace_intersection

    overlap = subspace_intersection(left_vectors, right_vectors)
    left_mat = Matrix.from_cols(left_vectors, rows=dim3)
    right_mat = Matrix.from_cols(right_vectors, rows=dim3)
    left_solver = LinearSolver(left_mat)
    right_solver = LinearSolver(right_mat)
    qr_span = Echelon(dg * dg)
    for vec in qd.basis:
        qr_span.insert(vec)
    qr_mat = Matrix.zeros(dg * dg, qd.dim)
    for j, vec in enumerate(qd.basis):
        for c, v in vec.items():
            qr_mat.data[c][j] = v
    qr_solver = LinearSolver(qr_mat)
    cond1 = True
    cond2 = True
    for d in overlap:
        y = left_solver.solve(d)
        z = right_solver.solve(d)
        assert y is not None and z is not None
        diff: Vec = {}
        for idx, coeff in enumerate(y):
            if not coeff:
                continue
            b, w = divmod(idx, dg)
            for u in range(dg):
                v = qd.phi.entry(u, b)
                if v:
                    key = u * dg + w
                    diff[key] = diff.get(key, Q(0)) + coeff * v
        for idx, coeff in enumerate(z):
            if not coeff:
                continue
            u, b = divmod(idx, qd.dim)
            for w in range(dg):
                v = qd.phi.entry(w, b)
                if v:
                    key = u * dg + w
                    diff[key] = diff.get(key, Q(0)) - coeff * v
        diff = {k: v for k, v in diff.items() if v}
        if not qr_span.contains(diff):
            cond1 = False
            cond2 = False
            continue
        coords = qr_solver.solve([diff.get(i, Q(0)) for i in range(dg * dg)])
        if coords is None or any(x for x in qd.phi.apply(coords)):
            cond2 = False
    return (cond1, cond2)


def qa_closed_form(pair: InclusionPair, k: int) -> int:
    """sum over i + j = k of dim_n^i * C(dim_h + j - 1, j)."""
    dn, dh = pair.dim_n, pair.dim_h
    return sum(dn ** i * _binom(dh + (k - i) - 1, k - i) for i in range(k + 1))


def qa_graded_dimension(pair: InclusionPair, k: int) -> int:
    """dim of degree k of qA, by rank of the embedded relation span."""
    if k < 0:
        raise ValueError("negative degree")
    dg = pair.g.dim
    if k == 0:
        return 1
    if k == 1:
        return dg
    qd = quadratic_data(pair)
    span = Echelon(dg ** k)
    for pos in range(k - 1):
        lo = dg ** (k - 2 - pos)
        hi = dg ** pos
        for vec in qd.basis:
            for w1 in range(hi):
                for w2 in range(lo):
                    ins = {}
                    for c, v in vec.items():
                        ins[(w1 * dg * dg + c) * lo + w2] = v
                    span.insert(ins)
    return dg ** k - span.rank


# ---------------------------------------------------------------------------
# Koszul complex slices
# ---------------------------------------------------------------------------


class _QaDegrees:
    """Quotient coordinates of qA per degree: canonical word representatives."""

    def __init__(self, pair: InclusionPair, max_degree: int):
        dg = pair.g.dim
        self.pair = pair
        self.dg = dg
        qd = quadratic_data(pair)
        self.spans = []
        self.basis_words = []
        self.pos = []
        for d in range(max_degree + 1):
            span = Echelon(dg ** d)
            if d >= 2:
                for p in range(d - 1):
                    lo = dg ** (d - 2 - p)
                    hi = dg ** p
                    for vec in qd.basis:
                        for w1 in range(hi):
                            for w2 in range(lo):
                                ins = {}
                                for c, v in vec.items():
                                    ins[(w1 * dg * dg + c) * lo + w2] = v
                                span.insert(ins)
            free = span.free_columns()
            self.spans.append(span)
            self.basis_words.append(free)
            self.pos.append({w: i for i, w in enumerate(free)})

    def dim(self, d: int) -> int:
        return len(self.basis_words[d])

    def reduce(self, d: int, word_index: int) -> dict:
        red = self.spans[d].reduce({word_index: Q(1)})
        return {self.pos[d][c]: v for c, v in red.items()}

    def mult_letter(self, d: int, coord: int, letter: int) -> dict:
        """Right multiplication qA_d x g -> qA_{d+1} on basis coordinates."""
        word = self.basis_words[d][coord]
        return self.reduce(d + 1, word * self.dg + letter)


def _wedge_vector(letters, dg: int) -> dict:
    """Total antisymmetrization of a letter list inside g^{(x) i}."""
    out: dict = {}
    for perm, sign in _signed_permutations(tuple(letters)):
        idx = 0
        for p in perm:
            idx = idx * dg + p
        out[idx] = out.get(idx, Q(0)) + sign
    return {k: v for k, v in out.items() if v}


def _signed_permutations(items):
    n = len(items)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            j = i
            length = 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        yield tuple(items[p] for p in perm), Q(sign)


@dataclass
class KTilde:
    """Basis of (wedge^{i-1} h) wedge g inside g^{(x) i}."""

    degree: int
    lists: list  # generating letter lists (h-subset..., g-letter)
    vectors: list  # their wedge vectors
    matrix: Matrix
    solver: Optional[LinearSolver]
    expected_dim: int

    @property
    def dim(self) -> int:
        return len(self.lists)

    def coords(self, vec: dict) -> Optional[list]:
        if self.solver is None:
            return None
        dense = [Q(0)] * self.matrix.rows
        for c, v in vec.items():
            dense[c] = v
        return self.solver.solve(dense)


def ktilde_basis(pair: InclusionPair, i: int) -> KTilde:
    dg, dn, dh = pair.g.dim, pair.dim_n, pair.dim_h
    if i == 0:
        m = Matrix.from_rows([[1]])
        return KTilde(0, [()], [{0: Q(1)}], m, LinearSolver(m), 1)
    span = Echelon(dg ** i)
    lists = []
    vectors = []
    for subset in itertools.combinations(range(dn, dg), i - 1):
        for x in range(dg):
            letters = subset + (x,)
            vec = _wedge_vector(letters, dg)
            if not vec:
                continue
            if span.insert(vec) is not None:
                lists.append(letters)
                vectors.append(vec)
    matrix = Matrix.zeros(dg ** i, len(lists))
    for j, vec in enumerate(vectors):
        for c, v in vec.items():
            matrix.data[c][j] = v
    solver = LinearSolver(matrix) if lists else None
    expected = _binom(dh, i - 1) * dn + _binom(dh, i)
    return KTilde(i, lists, vectors, matrix, solver, expected)


@dataclass
class KoszulComplexSlice:
    internal_degree: int
    dims: list  # dim of qA_{d-i} (x) K^i per position i
    ranks: list  # rank of the differential out of position i (i >= 1)
    dd_zero: bool
    exact: dict  # position -> bool, for 1 <= i <= top
    rightmost_homology: int  # dim H at position 0, reported not required

    @property
    def ok(self) -> bool:
        return self.dd_zero and all(self.exact.values())


@dataclass
class KoszulReport:
    max_internal_degree: int
    ktilde_dims_ok: bool
    containment_ok: bool
    slices: list

    @property
    def ok(self) -> bool:
        return self.ktilde_dims_ok and self.containment_ok and all(s.ok for s in self.slices)


def koszul_acyclicity(pair: InclusionPair, max_internal_degree: int) -> KoszulReport:
    """Build the slices ... -> qA_{d-2} (x) K^2 -> qA_{d-1} (x) K^1 -> qA_d -> 0
    for d <= the cap, check the differentials square to zero and the slice is
    exact at every position left of the rightmost; the homology at the
    rightmost position is reported."""
    if max_internal_degree < 1:
        raise ValueError("need at least internal degree 1")
    dg, dn = pair.g.dim, pair.dim_n
    qa = _QaDegrees(pair, max_internal_degree)
    qd = quadratic_data(pair)
    max_i = min(max_internal_degree, pair.dim_h + 1)
    kt = [ktilde_basis(pair, i) for i in range(max_i + 1)]
    ktilde_dims_ok = all(kt[i].dim == kt[i].expected_dim for i in range(max_i + 1))

    containment_ok = True
    for i in range(2, max_i + 1):
        for k in range(i - 1):
            span = Echelon(dg ** i)
            lo = dg ** (i - 2 - k)
            hi = dg ** k
            for vec in qd.basis:
                for w1 in range(hi):
                    for w2 in range(lo):
                        ins = {}
                        for c, v in vec.items():
                            ins[(w1 * dg * dg + c) * lo + w2] = v
                        span.insert(ins)
            for vec in kt[i].vectors:
                if not span.contains(vec):
                    containment_ok = False

    # cache of the wedge coordinates appearing in the differentials
    slices = []
    for d in range(1, max_internal_degree + 1):
        top = min(d, max_i)
        dims = [qa.dim(d - i) * kt[i].dim for i in range(top + 1)]
        mats = [None]
        for i in range(1, top + 1):
            src_dim = dims[i]
            tgt_dim = dims[i - 1]
            mat = Matrix.zeros(tgt_dim, src_dim)
            ktl = kt[i]
            ktp = kt[i - 1]
            # coordinates of each omitted wedge in the lower K-tilde basis
            omitted = []
            for letters in ktl.lists:
                per_j = []
                for j in range(len(letters)):
                    rest = letters[:j] + letters[j + 1:]
                    vec = _wedge_vector(rest, dg) if rest else {0: Q(1)}
                    coords = ktp.coords(vec)
                    if coords is None:
                        raise AssertionError("omitted wedge escaped the lower subspace")
                    per_j.append(coords)
                omitted.append(per_j)
            for p in range(qa.dim(d - i)):
                for t, letters in enumerate(ktl.lists):
                    col = p * ktl.dim + t
                    for j, letter in enumerate(letters):
                        sign = Q((-1) ** j)
                        prod = qa.mult_letter(d - i, p, letter)
                        for q, cq in prod.items():
                            for tp, ct in enumerate(omitted[t][j]):
                                if ct:
                                    row = q * ktp.dim + tp
                                    w = mat.data[row].get(col, 0) + sign * cq * ct
                                    if w:
                                        mat.data[row][col] = w
                                    else:
                                        mat.data[row].pop(col, None)
            mats.append(mat)
        dd_zero = all(
            mats[i - 1].mul(mats[i]).is_zero() for i in range(2, top + 1)
        )
        ranks = [mats[i].rank() for i in range(1, top + 1)]
        exact = {}
        for i in range(1, top + 1):
            rank_out = ranks[i - 1]
            rank_in = ranks[i] if i < top else 0
            exact[i] = dims[i] - rank_out == rank_in
        rightmost = dims[0] - ranks[0] if ranks else dims[0]
        slices.append(KoszulComplexSlice(d, dims, ranks, dd_zero, exact, rightmost))
    return KoszulReport(max_internal_degree, ktilde_dims_ok, containment_ok, slices)
