"""Linear congruence systems ``H Y = B (mod m)`` solved through the SNF of H."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CapExceeded, DimensionMismatch, InputError, ZeroMatrix
from .intlinalg import IntMatrix, SnfDecomposition, smith_normal_form

DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class CongruenceSystem:
    H: IntMatrix
    B: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise InputError(f"modulus must be >= 2, got {self.m}")
        if len(self.B) != self.H.rows:
            raise DimensionMismatch(f"{self.H.rows} equations but {len(self.B)} right-hand sides")

    @classmethod
    def of(cls, H: Sequence[Sequence[int]] | IntMatrix, B: Sequence[int], m: int) -> CongruenceSystem:
        if not isinstance(H, IntMatrix):
            H = IntMatrix.from_rows(H)
        return cls(H, tuple(int(b) for b in B), int(m))


def _snf(sys: CongruenceSystem, snf: SnfDecomposition | None) -> SnfDecomposition:
    if sys.H.is_zero():
        raise ZeroMatrix("coefficient matrix is zero")
    return smith_normal_form(sys.H) if snf is None else snf


def transformed_rhs(sys: CongruenceSystem, snf: SnfDecomposition | None = None) -> list[int]:
    """``U @ B`` without reduction."""
    snf = _snf(sys, snf)
    return snf.U.apply(sys.B)


def is_solvable(sys: CongruenceSystem, snf: SnfDecomposition | None = None) -> bool:
    snf = _snf(sys, snf)
    m = sys.m
    b = [x % m for x in transformed_rhs(sys, snf)]
    for i, x in enumerate(b):
        g = math.gcd(m, snf.d[i]) if i < snf.r else m
        if x % g:
            return False
    return True


def count_solutions(sys: CongruenceSystem, snf: SnfDecomposition | None = None) -> int:
    """Number of solutions with every coordinate in [0, m)."""
    snf = _snf(sys, snf)
    if not is_solvable(sys, snf):
        return 0
    return sys.m ** (sys.H.cols - snf.r) * math.prod(math.gcd(sys.m, x) for x in snf.d)


def enumerate_solutions(sys: CongruenceSystem, cap: int = DEFAULT_ENUM_CAP) -> list[tuple[int, ...]]:
    """Exhaustive scan over [0, m)^n; independent of the SNF route."""
    m, n = sys.m, sys.H.cols
    if m**n > cap:
        raise CapExceeded(f"{m}^{n} candidate vectors exceed the cap {cap}")
    rows = [sys.H.row(i) for i in range(sys.H.rows)]
    out = []
    for y in itertools.product(range(m), repeat=n):
        if all((sum(h * v for h, v in zip(row, y)) - b) % m == 0 for row, b in zip(rows, sys.B)):
            out.append(y)
    return out
