"""Sparse exact-rational linear algebra.

Every decision made by this package (cocycle triviality, section existence,
graded dimensions) reduces to solving linear systems over the rationals, so
all arithmetic here is exact ``fractions.Fraction`` arithmetic.  Matrices are
stored as lists of sparse rows (``dict`` column -> coefficient); elimination
always pivots on the leftmost nonzero column so that echelon forms, solution
vectors and complements are reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Union

Q = Fraction
Scalar = Fraction  # arbitrary-precision rational; lowest terms by construction

Entry = Union[int, str, Fraction]


def qf(x: Entry) -> Fraction:
    """Coerce an int, "p/q" string or Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


Row = dict  # sparse row: column index -> nonzero Fraction


def _clean(row: Row) -> Row:
    return {c: v for c, v in row.items() if v}


def _axpy(dst: Row, coeff: Fraction, src: Row) -> None:
    """dst += coeff * src, dropping zeros."""
    for c, v in src.items():
        w = dst.get(c, 0) + coeff * v
        if w:
            dst[c] = w
        else:
            dst.pop(c, None)


class Matrix:
    """Immutable-by-convention sparse matrix over the rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[list] = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [dict() for _ in range(rows)]
        if len(data) != rows:
            raise ValueError("row count mismatch")
        self.data = data

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[Entry]], cols: Optional[int] = None) -> "Matrix":
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        data = []
        for r in entries:
            if len(r) != cols:
                raise ValueError("ragged rows")
            data.append({j: qf(v) for j, v in enumerate(r) if qf(v)})
        return cls(rows, cols, data)

    @classmethod
    def from_cols(cls, columns: Sequence[Sequence[Entry]], rows: Optional[int] = None) -> "Matrix":
        ncols = len(columns)
        if rows is None:
            rows = len(columns[0]) if ncols else 0
        data = [dict() for _ in range(rows)]
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("ragged columns")
            for i, v in enumerate(col):
                v = qf(v)
                if v:
                    data[i][j] = v
        return cls(rows, ncols, data)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [{i: Q(1)} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    # -- inspection --------------------------------------------------------

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i].get(j, Q(0))

    def row_list(self, i: int) -> list:
        out = [Q(0)] * self.cols
        for c, v in self.data[i].items():
            out[c] = v
        return out

    def col_list(self, j: int) -> list:
        return [self.data[i].get(j, Q(0)) for i in range(self.rows)]

    def to_lists(self) -> list:
        return [self.row_list(i) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return all(not r for r in self.data)

    def nnz(self) -> int:
        return sum(len(r) for r in self.data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(_clean(a) == _clean(b) for a, b in zip(self.data, other.data))
        )

    def __repr__(self) -> str:
        if self.rows * self.cols > 64:
            return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz()})"
        body = "; ".join(
            " ".join(str(self.entry(i, j)) for j in range(self.cols)) for i in range(self.rows)
        )
        return f"Matrix[{body}]"

    # -- arithmetic ---------------------------------------------------------

    def copy(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [dict(r) for r in self.data])

    def transpose(self) -> "Matrix":
        data = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self.data):
            for c, v in r.items():
                data[c][i] = v
        return Matrix(self.cols, self.rows, data)

    def scale(self, coeff: Entry) -> "Matrix":
        coeff = qf(coeff)
        if not coeff:
            return Matrix.zeros(self.rows, self.cols)
        return Matrix(self.rows, self.cols, [{c: coeff * v for c, v in r.items()} for r in self.data])

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        data = [dict(r) for r in self.data]
        for i, r in enumerate(other.data):
            _axpy(data[i], Q(1), r)
        return Matrix(self.rows, self.cols, data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        data = [dict(r) for r in self.data]
        for i, r in enumerate(other.data):
            _axpy(data[i], Q(-1), r)
        return Matrix(self.rows, self.cols, data)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        data = [dict() for _ in range(self.rows)]
        for i, r in enumerate(self.data):
            acc = data[i]
            for k, v in r.items():
                _axpy(acc, v, other.data[k])
        return Matrix(self.rows, other.cols, data)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def apply(self, vec) -> list:
        """Matrix times column vector (list or sparse dict)."""
        if isinstance(vec, dict):
            v = vec
        else:
            if len(vec) != self.cols:
                raise ValueError("vector length mismatch")
            v = {j: qf(x) for j, x in enumerate(vec) if qf(x)}
        out = [Q(0)] * self.rows
        for i, r in enumerate(self.data):
            s = Q(0)
            if len(r) <= len(v):
                for c, coeff in r.items():
                    if c in v:
                        s += coeff * v[c]
            else:
                for c, coeff in v.items():
                    if c in r:
                        s += r[c] * coeff
            out[i] = s
        return out

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        data = []
        for i in range(self.rows):
            r = dict(self.data[i])
            for c, v in other.data[i].items():
                r[c + self.cols] = v
            data.append(r)
        return Matrix(self.rows, self.cols + other.cols, data)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return Matrix(self.rows + other.rows, self.cols, [dict(r) for r in self.data] + [dict(r) for r in other.data])

    def take(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        colmap = {c: k for k, c in enumerate(col_idx)}
        data = []
        for i in row_idx:
            data.append({colmap[c]: v for c, v in self.data[i].items() if c in colmap})
        return Matrix(len(row_idx), len(col_idx), data)

    def rank(self) -> int:
        ech = Echelon(self.cols)
        for r in self.data:
            ech.insert(r)
        return ech.rank


def _int_row(vec: Row):
    """Clear denominators: return (integer row, positive scale) with
    true value = row / scale."""
    import math

    scale = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
    row = {}
    for c, v in vec.items():
        w = int(v * scale)
        if w:
            row[c] = w
    return row, scale


def _strip_content(row: dict) -> dict:
    import math

    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class Echelon:
    """Incrementally built row space in echelon form.

    Pivots are the leftmost nonzero columns of the inserted (reduced) rows.
    While building, rows are kept as content-stripped integer vectors and
    elimination uses exact cross-multiplication; ``back_reduce`` converts to
    the canonical rational RREF (pivot entries one).  ``reduce`` returns the
    canonical representative of a vector modulo the row space, supported on
    the non-pivot columns only.
    """

    __slots__ = ("ncols", "pivots", "_reduced")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict = {}  # pivot column -> row (int while building)
        self._reduced = False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce_frac(self, vec: Row) -> Row:
        v = _clean(dict(vec))
        while True:
            hit = None
            for c in v:
                if c in self.pivots and (hit is None or c < hit):
                    hit = c
            if hit is None:
                return v
            _axpy(v, -v[hit], self.pivots[hit])

    def _reduce_int(self, row: dict, scale: int, strip: bool):
        import math

        pivots = self.pivots
        while True:
            hit = -1
            for c in row:
                if c in pivots and (hit < 0 or c < hit):
                    hit = c
            if hit < 0:
                return row, scale
            p = pivots[hit]
            a = p[hit]
            b = row[hit]
            new = {}
            for c, v in row.items():
                if c != hit:
                    new[c] = a * v
            for c, v in p.items():
                if c == hit:
                    continue
                w = new.get(c, 0) - b * v
                if w:
                    new[c] = w
                elif c in new:
                    del new[c]
            row = new
            if strip:
                row = _strip_content(row)
            else:
                scale *= a
                g = 0
                for v in row.values():
                    g = math.gcd(g, v)
                    if g == 1:
                        break
                g = math.gcd(g, scale)
                if g > 1:
                    scale //= g
                    row = {c: v // g for c, v in row.items()}
        # unreachable

    def reduce(self, vec: Row) -> Row:
        if self._reduced:
            return self._reduce_frac(vec)
        row, scale = _int_row(_clean(dict(vec)))
        row, scale = self._reduce_int(row, scale, strip=False)
        if scale == 1:
            return {c: Fraction(v) for c, v in row.items()}
        return {c: Fraction(v, scale) for c, v in row.items()}

    def insert(self, vec: Row) -> Optional[int]:
        """Add a vector to the row space; return its pivot column if rank grew."""
        if self._reduced:
            v = self._reduce_frac(vec)
            if not v:
                return None
            c = min(v)
            lead = v[c]
            self.pivots[c] = {k: val / lead for k, val in v.items()}
            return c
        row, _ = _int_row(_clean(dict(vec)))
        row = _strip_content(row)
        row, _ = self._reduce_int(row, 1, strip=True)
        if not row:
            return None
        c = min(row)
        if row[c] < 0:
            row = {k: -v for k, v in row.items()}
        self.pivots[c] = row
        return c

    def contains(self, vec: Row) -> bool:
        return not self.reduce(vec)

    def free_columns(self) -> list:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def back_reduce(self) -> None:
        """Inter-reduce pivot rows so they form the canonical RREF."""
        if self._reduced:
            return
        for c, row in list(self.pivots.items()):
            lead = Fraction(row[c])
            self.pivots[c] = {k: Fraction(v) / lead for k, v in row.items()}
        for c in sorted(self.pivots, reverse=True):
            row_c = self.pivots[c]
            for c2, row in self.pivots.items():
                if c2 < c and c in row:
                    _axpy(row, -row[c], row_c)
        self._reduced = True


def rref(m: Matrix):
    """Reduced row echelon form and pivot columns (row space preserved)."""
    ech = Echelon(m.cols)
    for r in m.data:
        ech.insert(r)
    ech.back_reduce()
    pivots = sorted(ech.pivots)
    data = [dict(ech.pivots[c]) for c in pivots]
    while len(data) < m.rows:
        data.append({})
    return Matrix(m.rows, m.cols, data), pivots


def solve(a: Matrix, b) -> Optional[list]:
    """Some exact solution of ``a x = b``, or None when inconsistent.

    Deterministic choice: the free variables of the RREF are set to zero.
    """
    if isinstance(b, dict):
        bvec = b
        blen = a.rows
    else:
        if len(b) != a.rows:
            raise ValueError("dimension mismatch between matrix and right-hand side")
        bvec = {i: qf(x) for i, x in enumerate(b) if qf(x)}
        blen = len(b)
    del blen
    bcol = a.cols
    ech = Echelon(a.cols + 1)
    for i, r in enumerate(a.data):
        row = dict(r)
        if i in bvec:
            row[bcol] = bvec[i]
        ech.insert(row)
    if bcol in ech.pivots:
        return None
    ech.back_reduce()
    x = [Q(0)] * a.cols
    for c, row in ech.pivots.items():
        x[c] = row.get(bcol, Q(0))
    return x


def kernel_basis(a: Matrix) -> list:
    """Exact basis of the null space of ``a`` (empty for injective maps)."""
    ech = Echelon(a.cols)
    for r in a.data:
        ech.insert(r)
    ech.back_reduce()
    basis = []
    for f in ech.free_columns():
        v = [Q(0)] * a.cols
        v[f] = Q(1)
        for c, row in ech.pivots.items():
            if f in row:
                v[c] = -row[f]
        basis.append(v)
    return basis


def subspace_intersection(us: Sequence[Sequence[Entry]], vs: Sequence[Sequence[Entry]]) -> list:
    """Basis of span(us) intersected with span(vs), via the stacked kernel."""
    if not us or not vs:
        return []
    dim = len(us[0])
    for w in list(us) + list(vs):
        if len(w) != dim:
            raise ValueError("ambient dimension mismatch")
    u_mat = Matrix.from_cols([[qf(x) for x in u] for u in us], rows=dim)
    v_mat = Matrix.from_cols([[qf(x) for x in v] for v in vs], rows=dim)
    stacked = u_mat.hstack(v_mat.scale(-1))
    ech = Echelon(dim)
    basis = []
    for k in kernel_basis(stacked):
        vec = u_mat.apply(k[: len(us)])
        sv = {i: x for i, x in enumerate(vec) if x}
        if ech.insert(sv) is not None:
            basis.append(vec)
    return basis


def tensor_map(f: Matrix, g: Matrix) -> Matrix:
    """Kronecker product: (f (x) g)(u (x) v) = f(u) (x) g(v) in lex tensor bases."""
    data = [dict() for _ in range(f.rows * g.rows)]
    for i, fr in enumerate(f.data):
        for k, gr in enumerate(g.data):
            target = data[i * g.rows + k]
            for j, fv in fr.items():
                base = j * g.cols
                for l, gv in gr.items():
                    target[base + l] = fv * gv
    return Matrix(f.rows * g.rows, f.cols * g.cols, data)


class LinearSolver:
    """Prefactored ``a x = b`` solver for many right-hand sides.

    Tracks the row operations of the elimination so each solve is a single
    sparse transform; solutions agree with :func:`solve` (free variables zero).
    """

    def __init__(self, a: Matrix):
        self.ncols = a.cols
        self.nrows = a.rows
        ech = Echelon(a.cols + a.rows)
        for i, r in enumerate(a.data):
            row = dict(r)
            row[a.cols + i] = Q(1)
            ech.insert(row)
        ech.back_reduce()
        self.pivots = {}  # pivot col -> combo over original rows
        self.null_combos = []  # left kernel rows: consistency conditions
        for c, row in ech.pivots.items():
            main = {k: v for k, v in row.items() if k < a.cols}
            combo = {k - a.cols: v for k, v in row.items() if k >= a.cols}
            if c < a.cols:
                self.pivots[c] = combo
            else:
                self.null_combos.append(combo)
        # back_reduce only normalizes against pivot columns of the full span;
        # rows pivoting in the tag block are exactly the left-kernel rows.

    def solve(self, b) -> Optional[list]:
        if isinstance(b, dict):
            bvec = b
        else:
            bvec = {i: qf(x) for i, x in enumerate(b) if qf(x)}
        for combo in self.null_combos:
            s = Q(0)
            for i, v in combo.items():
                if i in bvec:
                    s += v * bvec[i]
            if s:
                return None
        x = [Q(0)] * self.ncols
        for c, combo in self.pivots.items():
            s = Q(0)
            for i, v in combo.items():
                if i in bvec:
                    s += v * bvec[i]
            x[c] = s
        return x

    @property
    def rank(self) -> int:
        return len(self.pivots)
