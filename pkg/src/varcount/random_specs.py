"""Random valid systems for property tests and experiments."""

from __future__ import annotations

import math
import random

from .field import FieldSpec, make_field
from .intlinalg import IntMatrix
from .variety import RawSystem, VarietySpec, validate

# x^2 + 1 is irreducible over F_3
FIELDS = {
    3: (3, 1, None),
    5: (5, 1, None),
    7: (7, 1, None),
    9: (3, 2, (1, 0, 1)),
    11: (11, 1, None),
    13: (13, 1, None),
}


def field_of_order(q: int) -> FieldSpec:
    p, n, modulus = FIELDS[q]
    return make_field(p, n, modulus)


def random_spec(
    rng: random.Random,
    *,
    qs=(3, 5, 7, 9, 11, 13),
    max_m: int = 3,
    max_t: int = 3,
    max_rt: int = 4,
    max_nt: int = 6,
    max_points: int = 2 * 10**5,
    zero_b_prob: float = 0.3,
    max_exponent: int | None = None,
) -> VarietySpec:
    """Draw a staircase system with q^{n_t} <= max_points.

    Exponents are uniform in [1, 2(q-1)] unless ``max_exponent`` is given.
    """
    q = rng.choice(qs)
    F = field_of_order(q)
    nt_cap = min(max_nt, int(math.log(max_points) / math.log(q) + 1e-9))
    t = rng.randint(1, min(max_t, max_rt, nt_cap))
    r = sorted(rng.sample(range(1, max_rt + 1), t))
    nvars = sorted(rng.sample(range(1, nt_cap + 1), t))
    m = rng.randint(1, max_m)
    emax = max_exponent or 2 * (q - 1)
    widths = [nvars[next(j for j, rj in enumerate(r) if i < rj)] for i in range(r[-1])]

    def nonzero():
        return F.from_code(rng.randrange(1, q))

    a = [[nonzero() for _ in range(r[-1])] for _ in range(m)]
    if rng.random() < zero_b_prob:
        b = [F.zero] * m
    else:
        b = [F.from_code(rng.randrange(q)) for _ in range(m)]
    e = [[[rng.randint(1, emax) for _ in range(w)] for w in widths] for _ in range(m)]
    return validate(RawSystem(F, a, b, e, r, nvars))


def random_sun_spec(rng: random.Random, q: int, n: int, *, b_zero: bool, max_exponent: int = 12):
    """Single equation, n monomials in n variables, det of exponents prime to q-1."""
    F = field_of_order(q)
    while True:
        rows = [[rng.randint(1, max_exponent) for _ in range(n)] for _ in range(n)]
        det = IntMatrix.from_rows(rows).det()
        if math.gcd(det, q - 1) == 1:
            break
    a = [[F.from_code(rng.randrange(1, q)) for _ in range(n)]]
    b = [F.zero if b_zero else F.from_code(rng.randrange(1, q))]
    return validate(RawSystem(F, a, b, [rows], (n,), (n,)))
