"""Exact integer linear algebra: matrices, Smith normal form, lattices.

Everything runs on Python ints, so intermediate coefficient growth is safe
and no value is ever rounded.  The Smith normal form is fully deterministic:
pivots are chosen by smallest absolute value, ties broken by lowest row then
column index, and the diagonal is normalized to be nonnegative with each
entry dividing the next.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MembershipError

__all__ = [
    "IntMatrix",
    "SmithForm",
    "smith_normal_form",
    "kernel_basis",
    "solve_vector",
    "solve_matrix",
    "lattice_basis",
    "hstack",
    "vstack",
    "block_diagonal",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix with row-major entries."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("column count does not match entries")

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        return IntMatrix(nrows, ncols, data)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def column_vector(vec) -> "IntMatrix":
        vec = tuple(int(x) for x in vec)
        return IntMatrix(len(vec), 1, tuple((x,) for x in vec))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        ot = other.transpose().entries
        data = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
            for row in self.entries
        )
        if not data:
            data = ()
        return IntMatrix(self.rows, other.cols, data)

    def mul_vec(self, vec) -> tuple[int, ...]:
        vec = tuple(vec)
        if len(vec) != self.cols:
            raise ValueError("vector length does not match columns")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> "IntMatrix":
        return self.scaled(-1)

    def scaled(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(c * x for x in row) for row in self.entries))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def _same_shape(self, other: "IntMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shapes do not match")

    def det(self) -> int:
        """Exact determinant via fraction-free Bareiss elimination."""
        if not self.is_square():
            raise ValueError("determinant requires a square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def hstack(mats, rows: int | None = None) -> IntMatrix:
    mats = list(mats)
    if not mats:
        if rows is None:
            raise ValueError("hstack of nothing needs an explicit row count")
        return IntMatrix.zeros(rows, 0)
    nrows = mats[0].rows
    if any(m.rows != nrows for m in mats):
        raise ValueError("row counts differ")
    data = tuple(tuple(x for m in mats for x in m.entries[i]) for i in range(nrows))
    return IntMatrix(nrows, sum(m.cols for m in mats), data)


def vstack(mats, cols: int | None = None) -> IntMatrix:
    mats = list(mats)
    if not mats:
        if cols is None:
            raise ValueError("vstack of nothing needs an explicit column count")
        return IntMatrix.zeros(0, cols)
    ncols = mats[0].cols
    if any(m.cols != ncols for m in mats):
        raise ValueError("column counts differ")
    data = tuple(row for m in mats for row in m.entries)
    return IntMatrix(sum(m.rows for m in mats), ncols, data)


def block_diagonal(mats) -> IntMatrix:
    mats = list(mats)
    total_r = sum(m.rows for m in mats)
    total_c = sum(m.cols for m in mats)
    data = [[0] * total_c for _ in range(total_r)]
    r0 = c0 = 0
    for m in mats:
        for i, row in enumerate(m.entries):
            data[r0 + i][c0 : c0 + m.cols] = row
        r0 += m.rows
        c0 += m.cols
    return IntMatrix.from_rows(data) if data else IntMatrix.zeros(0, total_c)


@dataclass(frozen=True)
class SmithForm:
    """Decomposition u @ a @ v == s with u, v unimodular.

    The inverses of the transforms are tracked during elimination so that
    lattice computations (saturation, lifts) never need a separate matrix
    inversion step.
    """

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.s.rows, self.s.cols)
        return tuple(self.s.entries[i][i] for i in range(n))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Smith normal form over the integers.

    Returns u, s, v, u_inv, v_inv with u @ a @ v == s, s diagonal with
    nonnegative entries d1 | d2 | ... and trailing zeros.  Total on every
    input shape including empty matrices.
    """
    m, n = a.rows, a.cols
    s = [list(row) for row in a.entries]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    uinv = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    vinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i == j:
            return
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(i, j, q):
        # row_i += q * row_j
        si, sj = s[i], s[j]
        for t in range(n):
            si[t] += q * sj[t]
        ui, uj = u[i], u[j]
        for t in range(m):
            ui[t] += q * uj[t]
        for row in uinv:
            row[j] -= q * row[i]

    def add_col(j, i, q):
        # col_j += q * col_i
        for row in s:
            row[j] += q * row[i]
        for row in v:
            row[j] += q * row[i]
        vj, vi = vinv[j], vinv[i]
        for t in range(n):
            vi[t] -= q * vj[t]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    def find_pivot(t):
        best = None
        for i in range(t, m):
            row = s[i]
            for j in range(t, n):
                x = row[j]
                if x != 0:
                    key = (abs(x), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            return None
        return best[1], best[2]

    t = 0
    bound = min(m, n)
    while t < bound:
        piv = find_pivot(t)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            dirty = False
            for i in range(m):
                if i != t and s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    if q:
                        add_row(i, t, -q)
                    if s[i][t] != 0:
                        dirty = True
            if dirty:
                piv = find_pivot(t)
                swap_rows(t, piv[0])
                swap_cols(t, piv[1])
                continue
            for j in range(n):
                if j != t and s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    if q:
                        add_col(j, t, -q)
                    if s[t][j] != 0:
                        dirty = True
            if dirty:
                piv = find_pivot(t)
                swap_rows(t, piv[0])
                swap_cols(t, piv[1])
                continue
            break
        # force the divisibility chain: any entry not divisible by the pivot
        # is pulled into row t and reduced on the next pass
        d = s[t][t]
        offender = None
        for i in range(t + 1, m):
            row = s[i]
            for j in range(t + 1, n):
                if row[j] % d != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        t += 1

    for i in range(bound):
        if s[i][i] < 0:
            negate_row(i)

    return SmithForm(
        IntMatrix.from_rows(u) if m else IntMatrix.zeros(0, 0),
        IntMatrix(m, n, tuple(tuple(row) for row in s)),
        IntMatrix.from_rows(v) if n else IntMatrix.zeros(0, 0),
        IntMatrix.from_rows(uinv) if m else IntMatrix.zeros(0, 0),
        IntMatrix.from_rows(vinv) if n else IntMatrix.zeros(0, 0),
    )


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel { x : a @ x == 0 }."""
    sf = smith_normal_form(a)
    k = sf.rank
    cols = [sf.v.column(j) for j in range(k, a.cols)]
    if not cols:
        return IntMatrix.zeros(a.cols, 0)
    return IntMatrix(a.cols, len(cols), tuple(tuple(c[i] for c in cols) for i in range(a.cols)))


def solve_vector(a: IntMatrix, y, sf: SmithForm | None = None):
    """One integral solution x of a @ x == y, or None when insolvable."""
    y = tuple(int(t) for t in y)
    if len(y) != a.rows:
        raise ValueError("right-hand side has the wrong length")
    if sf is None:
        sf = smith_normal_form(a)
    w = sf.u.mul_vec(y)
    k = sf.rank
    z = [0] * a.cols
    for i in range(k):
        d = sf.s.entries[i][i]
        if w[i] % d != 0:
            return None
        z[i] = w[i] // d
    for i in range(k, a.rows):
        if w[i] != 0:
            return None
    return sf.v.mul_vec(z)


def solve_matrix(a: IntMatrix, y: IntMatrix, sf: SmithForm | None = None):
    """Integral X with a @ X == y, or None when some column is insolvable."""
    if sf is None:
        sf = smith_normal_form(a)
    cols = []
    for j in range(y.cols):
        x = solve_vector(a, y.column(j), sf)
        if x is None:
            return None
        cols.append(x)
    if not cols:
        return IntMatrix.zeros(a.cols, 0)
    return IntMatrix(a.cols, len(cols), tuple(tuple(c[i] for c in cols) for i in range(a.cols)))


def solve_matrix_strict(a: IntMatrix, y: IntMatrix, sf: SmithForm | None = None) -> IntMatrix:
    x = solve_matrix(a, y, sf)
    if x is None:
        raise MembershipError("columns are not in the integer column span")
    return x


def lattice_basis(generators: IntMatrix) -> IntMatrix:
    """Independent basis (as columns) of the lattice the columns generate."""
    sf = smith_normal_form(generators)
    k = sf.rank
    r = generators.rows
    cols = []
    for i in range(k):
        d = sf.s.entries[i][i]
        cols.append(tuple(d * sf.u_inv.entries[t][i] for t in range(r)))
    if not cols:
        return IntMatrix.zeros(r, 0)
    return IntMatrix(r, k, tuple(tuple(c[t] for c in cols) for t in range(r)))
