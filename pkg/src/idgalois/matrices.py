"""Square matrices with entries in K(t) or in a cyclic extension K(s)."""
from __future__ import annotations

from .field_arith.ratfunc import RatFunc


class SingularMatrix(ArithmeticError):
    pass


class Matrix:
    """Immutable n x n matrix of RatFunc entries sharing one field and variable."""

    __slots__ = ("rows", "n", "field", "var")

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        first = rows[0][0]
        self.field = first.field
        self.var = first.var
        for r in rows:
            for x in r:
                if x.field is not self.field or x.var != self.var:
                    raise ValueError("matrix entries live in different fields")
        self.rows = rows
        self.n = n

    # -- constructors
    @classmethod
    def identity(cls, field, n: int, var: str = "t") -> "Matrix":
        one, zero = RatFunc.const(field, 1, var), RatFunc.const(field, 0, var)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field, n: int, var: str = "t") -> "Matrix":
        zero = RatFunc.const(field, 0, var)
        return cls([[zero] * n for _ in range(n)])

    @classmethod
    def diag(cls, entries) -> "Matrix":
        entries = list(entries)
        zero = entries[0] - entries[0]
        return cls([[entries[i] if i == j else zero for j in range(len(entries))] for i in range(len(entries))])

    @classmethod
    def scalar_matrix(cls, field, n: int, rows, var: str = "t") -> "Matrix":
        """Matrix of constants given as integers (field element encodings)."""
        return cls([[RatFunc.const(field, c, var) for c in r] for r in rows])

    # -- access
    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                yield i, j, x

    def map(self, fn) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.rows])

    # -- arithmetic
    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.n != self.n:
            raise ValueError(f"shape mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, (RatFunc, int)):
            return self.map(lambda x: x * other)
        self._check(other)
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for a, b in zip(r, c):
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = a * b if acc is None else acc + a * b
                row.append(acc if acc is not None else r[0] - r[0])
            out.append(row)
        return Matrix(out)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Matrix.identity(self.field, self.n, self.var)
        for _ in range(e):
            result = result * self
        return result

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def _eliminate(self, want_inverse: bool):
        n = self.n
        a = [list(r) for r in self.rows]
        one = RatFunc.const(self.field, 1, self.var)
        zero = RatFunc.const(self.field, 0, self.var)
        inv = [[one if i == j else zero for j in range(n)] for i in range(n)] if want_inverse else None
        det = one
        for col in range(n):
            piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
            if piv is None:
                return zero, None
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                if inv:
                    inv[col], inv[piv] = inv[piv], inv[col]
                det = -det
            pv = a[col][col]
            det = det * pv
            pinv = pv.inverse()
            a[col] = [x * pinv for x in a[col]]
            if inv:
                inv[col] = [x * pinv for x in inv[col]]
            for r in range(n):
                if r != col and not a[r][col].is_zero():
                    fct = a[r][col]
                    a[r] = [x - fct * y for x, y in zip(a[r], a[col])]
                    if inv:
                        inv[r] = [x - fct * y for x, y in zip(inv[r], inv[col])]
        return det, inv

    def det(self) -> RatFunc:
        return self._eliminate(False)[0]

    def is_invertible(self) -> bool:
        return not self.det().is_zero()

    def inverse(self) -> "Matrix":
        det, inv = self._eliminate(True)
        if inv is None:
            raise SingularMatrix("matrix is singular")
        return Matrix(inv)

    # -- structure
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_identity(self) -> bool:
        return all((x.is_one() if i == j else x.is_zero()) for i, j, x in self.entries())

    def to_strings(self):
        return [[str(x) for x in r] for r in self.rows]

    def __repr__(self):
        return "Matrix(" + repr(self.to_strings()) + ")"


def parse_matrix(rows, ambient) -> Matrix:
    """Rows of expression strings (or ints) parsed in ``ambient``."""
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ValueError("matrix must be a nonempty list of rows")
    out = []
    for r in rows:
        if not isinstance(r, (list, tuple)):
            raise ValueError("matrix rows must be lists")
        out.append([ambient.parse(str(x)) for x in r])
    return Matrix(out)


def embed_matrix(M: Matrix, ambient) -> Matrix:
    if M.var == ambient.var:
        return M
    return M.map(ambient.embed)
