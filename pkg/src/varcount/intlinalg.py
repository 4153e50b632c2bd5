"""Exact integer matrices and Smith normal form with unimodular transforms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InputError, ZeroMatrix


@dataclass(frozen=True)
class IntMatrix:
    """Row-major matrix of Python ints (arbitrary precision)."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionMismatch(f"matrix must be at least 1x1, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntMatrix:
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionMismatch("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), width, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, k: int) -> IntMatrix:
        return cls(k, k, tuple(int(i == j) for i in range(k) for j in range(k)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows(list(zip(*self.to_rows())))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.entries[j :: other.cols] for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)]
        )

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vec)} for {self.shape} matrix")
        return [sum(a * b for a, b in zip(self.row(i), vec)) for i in range(self.rows)]

    def submatrix(self, rows: int, cols: int) -> IntMatrix:
        """Top-left ``rows x cols`` block."""
        return IntMatrix.from_rows([r[:cols] for r in self.to_rows()[:rows]])

    def det(self) -> int:
        """Exact determinant (fraction-free Bareiss elimination)."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        a = self.to_rows()
        k = self.rows
        sign, prev = 1, 1
        for c in range(k - 1):
            if a[c][c] == 0:
                for r in range(c + 1, k):
                    if a[r][c] != 0:
                        a[c], a[r] = a[r], a[c]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(c + 1, k):
                for j in range(c + 1, k):
                    a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) // prev
            prev = a[c][c]
        return sign * a[k - 1][k - 1]

    def __str__(self) -> str:
        rows = self.to_rows()
        width = max(len(str(x)) for x in self.entries)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in rows)


def stack_rows(blocks: Iterable[IntMatrix]) -> IntMatrix:
    """Stack matrices with a common column count on top of each other."""
    blocks = list(blocks)
    if not blocks:
        raise DimensionMismatch("nothing to stack")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise DimensionMismatch("blocks differ in column count")
    return IntMatrix(sum(b.rows for b in blocks), cols, sum((b.entries for b in blocks), ()))


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ A @ V == diag(d_1, ..., d_r)`` padded with zeros."""

    U: IntMatrix
    V: IntMatrix
    d: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.d)

    def diagonal_form(self) -> IntMatrix:
        return diagonal_padded(self.d, self.U.rows, self.V.cols)


def diagonal_padded(d: Sequence[int], rows: int, cols: int) -> IntMatrix:
    out = [[0] * cols for _ in range(rows)]
    for i, x in enumerate(d):
        out[i][i] = x
    return IntMatrix.from_rows(out)


def smith_normal_form(A: IntMatrix) -> SnfDecomposition:
    """Smith normal form by pivoting on minimal entries, tracking U and V.

    Pivot: nonzero entry of least absolute value in the active submatrix, ties
    broken by lowest row then lowest column.
    """
    if A.is_zero():
        raise ZeroMatrix("Smith normal form of the zero matrix is undefined here")
    m, n = A.shape
    a = A.to_rows()
    U = IntMatrix.identity(m).to_rows()
    # V is stored transposed so that column operations become row operations
    Vt = IntMatrix.identity(n).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        Vt[i], Vt[j] = Vt[j], Vt[i]

    def add_row(dst, src, c):
        # row[dst] += c * row[src]
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        Vt[dst] = [x + c * y for x, y in zip(Vt[dst], Vt[src])]

    d = []
    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    v = a[i][j]
                    if v and (pivot is None or abs(v) < pivot[0]):
                        pivot = (abs(v), i, j)
            if pivot is None:
                break
            _, pi, pj = pivot
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, m)) or any(a[t][j] for j in range(t + 1, n)):
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if pivot is None:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        d.append(a[t][t])

    return SnfDecomposition(
        IntMatrix.from_rows(U),
        IntMatrix.from_rows(Vt).transpose(),
        tuple(d),
    )


def verify_snf(A: IntMatrix, s: SnfDecomposition) -> bool:
    """Exact check of unimodularity, the diagonal identity and the divisor chain."""
    if s.U.rows != s.U.cols or s.V.rows != s.V.cols:
        raise DimensionMismatch("transforms must be square")
    if s.U.cols != A.rows or s.V.rows != A.cols:
        raise DimensionMismatch(f"transforms {s.U.shape}, {s.V.shape} do not fit {A.shape}")
    if s.r > min(A.shape) or any(x <= 0 for x in s.d):
        return False
    if any(s.d[i + 1] % s.d[i] for i in range(s.r - 1)):
        return False
    if abs(s.U.det()) != 1 or abs(s.V.det()) != 1:
        return False
    return s.U @ A @ s.V == s.diagonal_form()


def parse_matrix(text: str) -> IntMatrix:
    """Whitespace-separated integers, one row per line; '#' starts a comment."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError:
            raise InputError(f"line {lineno}: expected integers, got {line!r}") from None
    if not rows:
        raise DimensionMismatch("empty matrix")
    return IntMatrix.from_rows(rows)
