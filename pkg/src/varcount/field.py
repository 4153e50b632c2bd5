"""Exact arithmetic in F_q, q = p^n, primitive elements and index tables.

Elements of F_{p^n} are stored as coefficient tuples ``(c0, c1, ..., c_{n-1})``
in the polynomial basis ``1, x, ..., x^{n-1}`` modulo a user supplied monic
irreducible polynomial.  Internally an element is also identified with the
integer code ``c0 + c1*p + ... + c_{n-1}*p^{n-1}``; enumerating codes
``0..q-1`` is the lexicographic order with the constant coordinate fastest.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    FieldTooLarge,
    InputError,
    NotPrime,
    NotPrimitive,
    ReducibleModulus,
)

DEFAULT_MAX_Q = 2**16


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    f = 3
    while f * f <= k:
        if k % f == 0:
            return False
        f += 2
    return True


def prime_factors(k: int) -> list[int]:
    """Distinct prime factors of ``k`` by trial division."""
    out = []
    f = 2
    while f * f <= k:
        if k % f == 0:
            out.append(f)
            while k % f == 0:
                k //= f
        f += 1
    if k > 1:
        out.append(k)
    return out


# -- polynomials over F_p, coefficient lists low degree first -----------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead % p
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return a


def _monic_polys(degree: int, p: int) -> Iterator[list[int]]:
    for code in range(p**degree):
        coeffs = []
        for _ in range(degree):
            code, c = divmod(code, p)
            coeffs.append(c)
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(d, p):
            if not _poly_rem(poly, g, p):
                return False
    return True


# -- the field ----------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_q with q = p**n.

    ``modulus`` lists the n+1 coefficients of the defining polynomial, constant
    term first.  For prime fields it is ``(0, 1)`` and plays no role.
    """

    p: int
    n: int = 1
    modulus: tuple[int, ...] = (0, 1)

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    def __repr__(self) -> str:
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n}, modulus={list(self.modulus)})"

    # integer-code arithmetic; these are the primitives everything else uses

    def add_codes(self, a: int, b: int) -> int:
        p = self.p
        if self.n == 1:
            return (a + b) % p
        out, place = 0, 1
        for _ in range(self.n):
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * place
            place *= p
        return out

    def neg_code(self, a: int) -> int:
        p = self.p
        if self.n == 1:
            return -a % p
        out, place = 0, 1
        for _ in range(self.n):
            a, x = divmod(a, p)
            out += (-x % p) * place
            place *= p
        return out

    def sub_codes(self, a: int, b: int) -> int:
        return self.add_codes(a, self.neg_code(b))

    def mul_codes(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        return self._mul_table[a * self.q + b] if self.q <= 256 else self._poly_mul(a, b)

    def _poly_mul(self, a: int, b: int) -> int:
        p, n = self.p, self.n
        x = self.code_to_coeffs(a)
        y = self.code_to_coeffs(b)
        prod = [0] * (2 * n - 1)
        for i, c in enumerate(x):
            if c:
                for j, d in enumerate(y):
                    prod[i + j] += c * d
        return self.coeffs_to_code(_poly_rem(prod, self.modulus, p))

    @cached_property
    def _mul_table(self) -> tuple[int, ...]:
        q = self.q
        return tuple(self._poly_mul(a, b) for a in range(q) for b in range(q))

    def pow_code(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv_code(a), -e
        if self.n == 1:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul_codes(result, a)
            a = self.mul_codes(a, a)
            e >>= 1
        return result

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("division by zero in " + repr(self))
        if self.n == 1:
            return pow(a, -1, self.p)
        return self.pow_code(a, self.q - 2)

    def code_to_coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def coeffs_to_code(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + c
        return code

    # element construction

    def __call__(self, value: int | Sequence[int] | FieldElement) -> FieldElement:
        """Coerce an integer (into the prime subfield) or coefficient list."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not an element of {self!r}")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.n - 1)
        else:
            coeffs = [int(c) for c in value]
            if len(coeffs) > self.n:
                raise InputError(f"{len(coeffs)} coordinates given for degree-{self.n} field")
            coeffs = [c % self.p for c in coeffs] + [0] * (self.n - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def from_code(self, code: int) -> FieldElement:
        return FieldElement(self, self.code_to_coeffs(code))

    @property
    def zero(self) -> FieldElement:
        return self.from_code(0)

    @property
    def one(self) -> FieldElement:
        return self.from_code(1)

    def elements(self) -> Iterator[FieldElement]:
        """All elements in enumeration order (constant coordinate fastest)."""
        for code in range(self.q):
            yield self.from_code(code)

    def nonzero_elements(self) -> Iterator[FieldElement]:
        for code in range(1, self.q):
            yield self.from_code(code)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec = dc_field(repr=False)
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        return self.field.coeffs_to_code(self.coeffs)

    def __int__(self) -> int:
        return self.code

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        if self.field.n == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(map(str, self.coeffs)) + "]"

    def _other(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine elements of {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def _wrap(self, code: int) -> FieldElement:
        return self.field.from_code(code)

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.field.add_codes(self.code, other.code))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.field.sub_codes(self.code, other.code))

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return self._wrap(self.field.neg_code(self.code))

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.field.mul_codes(self.code, other.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e: int):
        return self._wrap(self.field.pow_code(self.code, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv_code(self.code))

    def order(self) -> int:
        """Multiplicative order, by direct powering."""
        if not self:
            raise DivisionByZero("zero has no multiplicative order")
        one = self.field.one
        k, acc = 1, self
        while acc != one:
            acc = acc * self
            k += 1
        return k


def make_field(
    p: int,
    n: int = 1,
    modulus: Sequence[int] | None = None,
    *,
    force_even: bool = False,
    max_q: int = DEFAULT_MAX_Q,
) -> FieldSpec:
    """Validate parameters and build F_{p^n}.

    ``modulus`` is required for n > 1: the n+1 coefficients (constant term
    first) of a monic irreducible polynomial of degree n over F_p.
    """
    if p < 2 or (p % 2 == 0 and p != 2):
        raise NotPrime(f"characteristic {p} is not prime")
    if p == 2 and not force_even:
        raise EvenCharacteristic("characteristic 2 requires force_even=True")
    if n < 1:
        raise DegreeMismatch(f"extension degree must be >= 1, got {n}")
    if n > max_q.bit_length() or p**n > max_q:
        raise FieldTooLarge(f"q = {p}^{n} exceeds the cap {max_q}")
    if not is_prime(p):
        raise NotPrime(f"characteristic {p} is not prime")
    if n == 1:
        return FieldSpec(p, 1, (0, 1))
    if modulus is None:
        raise DegreeMismatch(f"a modulus of degree {n} is required for an extension field")
    mod = [int(c) for c in modulus]
    if len(mod) != n + 1:
        raise DegreeMismatch(f"modulus has degree {len(mod) - 1}, expected {n}")
    if any(not 0 <= c < p for c in mod):
        raise InputError(f"modulus coefficients must lie in [0, {p})")
    if mod[-1] != 1:
        raise DegreeMismatch("modulus must be monic")
    if not is_irreducible(mod, p):
        raise ReducibleModulus(f"modulus {mod} is reducible over F_{p}")
    return FieldSpec(p, n, tuple(mod))


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} != {b.field!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def is_primitive(x: FieldElement) -> bool:
    if not x:
        return False
    q = x.field.q
    return all(x ** ((q - 1) // f) != x.field.one for f in prime_factors(q - 1))


def primitive_elements(field: FieldSpec) -> list[FieldElement]:
    return [x for x in field.nonzero_elements() if is_primitive(x)]


def primitive_element(field: FieldSpec) -> FieldElement:
    """Least primitive element in enumeration order."""
    for x in field.nonzero_elements():
        if is_primitive(x):
            return x
    raise AssertionError("F_q* is cyclic; unreachable")


@dataclass(frozen=True)
class LogTable:
    """Index (discrete logarithm) table to base ``alpha``; indices in [0, q-2]."""

    alpha: FieldElement
    index_of: Mapping[int, int] = dc_field(repr=False)
    powers: tuple[int, ...] = dc_field(repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.alpha.field

    def ind(self, x: FieldElement | int) -> int:
        code = x.code if isinstance(x, FieldElement) else x
        try:
            return self.index_of[code]
        except KeyError:
            raise DivisionByZero("zero has no index") from None

    def power(self, k: int) -> FieldElement:
        return self.field.from_code(self.powers[k % (self.field.q - 1)])


def build_log_table(field: FieldSpec, alpha: FieldElement) -> LogTable:
    alpha = field(alpha)
    q = field.q
    index_of: dict[int, int] = {}
    powers = []
    code = 1
    a = alpha.code
    for k in range(q - 1):
        if code in index_of:
            raise NotPrimitive(f"{alpha!r} has order {k} < {q - 1}")
        index_of[code] = k
        powers.append(code)
        code = field.mul_codes(code, a)
    if code != 1 or len(index_of) != q - 1:
        raise NotPrimitive(f"{alpha!r} is not a primitive element of {field!r}")
    return LogTable(alpha, index_of, tuple(powers))

