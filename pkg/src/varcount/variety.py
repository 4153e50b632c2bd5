"""Data model for staircase systems of diagonal-monomial equations.

A system has m equations ``sum_i a[k][i] * x^E[k][i] = b[k]`` that all share
the same block structure: monomials ``r[j-1]+1 .. r[j]`` (1-based) use exactly
the variables ``x1 .. x_{nvars[j]}``, every one with a positive exponent.

Indices ``k`` (equation), ``i`` (monomial) and ``l`` (level) are 1-based in the
public functions of this module, matching the usual mathematical notation.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BlockShapeViolation,
    IndexOutOfRange,
    InputError,
    LevelOutOfRange,
    NonIncreasingBlocks,
    NonPositiveExponent,
    ZeroCoefficient,
)
from .field import FieldElement, FieldSpec
from .intlinalg import IntMatrix, stack_rows


@dataclass(frozen=True)
class RawSystem:
    """Unvalidated input.  ``r``/``nvars`` are inferred when left as None."""

    field: FieldSpec
    a: Sequence[Sequence[object]]
    b: Sequence[object]
    e: Sequence[Sequence[Sequence[int]]]
    r: Sequence[int] | None = None
    nvars: Sequence[int] | None = None


@dataclass(frozen=True)
class VarietySpec:
    field: FieldSpec
    r: tuple[int, ...]
    nvars: tuple[int, ...]
    a: tuple[tuple[FieldElement, ...], ...]
    b: tuple[FieldElement, ...]
    e: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def t(self) -> int:
        return len(self.r)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n_total(self) -> int:
        return self.nvars[-1]

    @property
    def monomial_count(self) -> int:
        return self.r[-1]

    def block_of(self, i: int) -> int:
        """1-based block index containing 1-based monomial ``i``."""
        if not 1 <= i <= self.r[-1]:
            raise IndexOutOfRange(f"monomial {i} outside 1..{self.r[-1]}")
        return bisect_left(self.r, i) + 1

    def width(self, i: int) -> int:
        return self.nvars[self.block_of(i) - 1]

    @property
    def all_b_zero(self) -> bool:
        return not any(self.b)

    def zero_b_count(self) -> int:
        return sum(1 for x in self.b if not x)


def _exponent_width(row: Sequence[int]) -> int:
    row = [int(x) for x in row]
    if any(x < 0 for x in row):
        raise NonPositiveExponent(f"negative exponent in {row}")
    w = len(row)
    while w and row[w - 1] == 0:
        w -= 1
    if w == 0:
        raise BlockShapeViolation("constant monomial (no variables)")
    if any(x == 0 for x in row[:w]):
        raise BlockShapeViolation(f"monomial with exponents {row} skips a variable")
    return w


def infer_structure(widths: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Block ends ``r`` and block widths ``nvars`` from per-monomial widths."""
    if not widths:
        raise BlockShapeViolation("equation without monomials")
    r, n = [], []
    for i, w in enumerate(widths, 1):
        if n and w < n[-1]:
            raise BlockShapeViolation(f"monomial {i} uses fewer variables than monomial {i - 1}")
        if n and w == n[-1]:
            r[-1] = i
        else:
            r.append(i)
            n.append(w)
    return tuple(r), tuple(n)


def validate(raw: RawSystem | VarietySpec) -> VarietySpec:
    """Check every structural invariant and coerce coefficients into the field."""
    F = raw.field
    m = len(raw.b)
    if m < 1:
        raise InputError("at least one equation is required")
    if len(raw.a) != m or len(raw.e) != m:
        raise InputError("coefficient, exponent and constant lists differ in length")

    if raw.r is None or raw.nvars is None:
        structures = []
        for k in range(m):
            structures.append(infer_structure([_exponent_width(row) for row in raw.e[k]]))
        if any(s != structures[0] for s in structures):
            raise BlockShapeViolation("equations induce different block structures")
        r, nvars = structures[0]
    else:
        r, nvars = tuple(int(x) for x in raw.r), tuple(int(x) for x in raw.nvars)
        if len(r) != len(nvars) or not r:
            raise NonIncreasingBlocks("r and nvars must be non-empty and of equal length")
        if r[0] < 1 or any(x >= y for x, y in zip(r, r[1:])):
            raise NonIncreasingBlocks(f"r = {r} is not strictly increasing from 1")
        if nvars[0] < 1 or any(x >= y for x, y in zip(nvars, nvars[1:])):
            raise NonIncreasingBlocks(f"nvars = {nvars} is not strictly increasing from 1")

    rt = r[-1]
    bounds = [0, *r]
    a_out, e_out = [], []
    for k in range(m):
        if len(raw.a[k]) != rt or len(raw.e[k]) != rt:
            raise BlockShapeViolation(f"equation {k + 1} must have {rt} monomials")
        coeffs = tuple(F(c) for c in raw.a[k])
        for i, c in enumerate(coeffs, 1):
            if not c:
                raise ZeroCoefficient(f"coefficient a[{k + 1}][{i}] is zero")
        rows = []
        for j, w in enumerate(nvars):
            for i in range(bounds[j], bounds[j + 1]):
                row = [int(x) for x in raw.e[k][i]]
                if len(row) < w or any(row[w:]):
                    raise BlockShapeViolation(
                        f"monomial {i + 1} of equation {k + 1} must use exactly x1..x{w}"
                    )
                if any(x < 1 for x in row[:w]):
                    raise NonPositiveExponent(
                        f"monomial {i + 1} of equation {k + 1} has a non-positive exponent"
                    )
                rows.append(tuple(row[:w]))
        a_out.append(coeffs)
        e_out.append(tuple(rows))
    b_out = tuple(F(x) for x in raw.b)
    return VarietySpec(F, r, nvars, tuple(a_out), b_out, tuple(e_out))


def _check_level(spec: VarietySpec, l: int) -> None:
    if not 1 <= l <= spec.t:
        raise LevelOutOfRange(f"level {l} outside 1..{spec.t}")


def equation_matrix(spec: VarietySpec, k: int) -> IntMatrix:
    """The full exponent matrix of equation ``k`` (r_t x n_t, zero padded)."""
    if not 1 <= k <= spec.m:
        raise IndexOutOfRange(f"equation {k} outside 1..{spec.m}")
    nt = spec.n_total
    return IntMatrix.from_rows([list(row) + [0] * (nt - len(row)) for row in spec.e[k - 1]])


def level_matrix(spec: VarietySpec, l: int) -> IntMatrix:
    """First r_l rows and n_l columns of each equation's exponent matrix, stacked."""
    _check_level(spec, l)
    rl, nl = spec.r[l - 1], spec.nvars[l - 1]
    return stack_rows(equation_matrix(spec, k).submatrix(rl, nl) for k in range(1, spec.m + 1))


def evaluate_monomial(
    spec: VarietySpec, k: int, i: int, x: Sequence[FieldElement | int]
) -> FieldElement:
    """Value of monomial ``i`` of equation ``k`` at the point ``x``."""
    if not 1 <= k <= spec.m:
        raise IndexOutOfRange(f"equation {k} outside 1..{spec.m}")
    if not 1 <= i <= spec.monomial_count:
        raise IndexOutOfRange(f"monomial {i} outside 1..{spec.monomial_count}")
    F = spec.field
    row = spec.e[k - 1][i - 1]
    if len(x) < len(row):
        raise IndexOutOfRange(f"point has {len(x)} coordinates, monomial needs {len(row)}")
    code = 1
    for xj, ej in zip(x, row):
        code = F.mul_codes(code, F.pow_code(F(xj).code, ej))
    return F.from_code(code)


def evaluate_equation(spec: VarietySpec, k: int, x: Sequence[FieldElement | int]) -> FieldElement:
    """``f_k(x) = sum_i a_ki x^E_i - b_k``."""
    total = -spec.b[k - 1]
    for i, a in enumerate(spec.a[k - 1], 1):
        total = total + a * evaluate_monomial(spec, k, i, x)
    return total
