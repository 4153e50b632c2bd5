"""Brute-force ground truth: evaluate the system at every point of F_q^{n_t}.

Nothing here touches Smith normal forms, index tables or the counting module;
only field arithmetic and the system model are shared.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import CapExceeded, InputError, StructureViolation
from .variety import VarietySpec, evaluate_monomial

DEFAULT_CAP = 10**8
CHUNK = 1 << 18
# extension-field products go through a q x q lookup table up to this q
MUL_TABLE_MAX_Q = 2048


def default_cap() -> int:
    env = os.environ.get("VARCOUNT_CAP")
    if env is None:
        return DEFAULT_CAP
    try:
        return int(float(env))
    except ValueError:
        raise InputError(f"VARCOUNT_CAP={env!r} is not a number") from None


def _check_cap(spec: VarietySpec, cap: int | None) -> int:
    cap = default_cap() if cap is None else cap
    size = spec.q**spec.n_total
    if size > cap:
        raise CapExceeded(f"{spec.q}^{spec.n_total} = {size} points exceed the oracle cap {cap}")
    return size


class _ArrayField:
    """Vectorized add/mul on arrays of element codes."""

    def __init__(self, F):
        self.F = F
        self.p, self.n, self.q = F.p, F.n, F.q
        if self.n > 1:
            q = self.q
            self.table = np.array(
                [F.mul_codes(a, b) for a in range(q) for b in range(q)], dtype=np.int64
            ).reshape(q, q)

    def add(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        out = np.zeros_like(a)
        place = 1
        for _ in range(self.n):
            out += ((a // place % self.p + b // place % self.p) % self.p) * place
            place *= self.p
        return out

    def mul(self, a, b):
        if self.n == 1:
            return a * b % self.p
        return self.table[a, b]


def _scan_vectorized(spec: VarietySpec, start: int, stop: int) -> np.ndarray:
    """Histogram over solution points in [start, stop) of the nonzero-monomial count."""
    F = spec.field
    q, nt, rt = F.q, spec.n_total, spec.monomial_count
    af = _ArrayField(F)
    exps = {e for rows in spec.e for row in rows for e in row}
    powtab = {e: np.array([F.pow_code(x, e) for x in range(q)], dtype=np.int64) for e in exps}
    hist = np.zeros(rt + 1, dtype=np.int64)
    for lo in range(start, stop, CHUNK):
        idx = np.arange(lo, min(lo + CHUNK, stop), dtype=np.int64)
        xs = []
        for _ in range(nt):
            idx, digit = np.divmod(idx, q)
            xs.append(digit)
        ok = None
        nnz = []
        for k in range(spec.m):
            total = np.zeros_like(xs[0])
            count = np.zeros_like(xs[0])
            for a, row in zip(spec.a[k], spec.e[k]):
                mono = np.ones_like(xs[0])
                for xj, e in zip(xs, row):
                    mono = af.mul(mono, powtab[e][xj])
                count += mono != 0
                total = af.add(total, af.mul(np.full_like(mono, a.code), mono))
            eq_ok = total == spec.b[k].code
            ok = eq_ok if ok is None else ok & eq_ok
            nnz.append(count)
        for other in nnz[1:]:
            if np.any(ok & (other != nnz[0])):
                raise StructureViolation("equations disagree on the number of nonzero monomials")
        hist += np.bincount(nnz[0][ok], minlength=rt + 1)
    return hist


def _scan_scalar(spec: VarietySpec, start: int, stop: int) -> np.ndarray:
    """Same as the vectorized scan, one point at a time."""
    F = spec.field
    q, nt, rt = F.q, spec.n_total, spec.monomial_count
    hist = np.zeros(rt + 1, dtype=np.int64)
    for idx in range(start, stop):
        x = []
        for _ in range(nt):
            idx, digit = divmod(idx, q)
            x.append(F.from_code(digit))
        counts = set()
        solved = True
        for k in range(1, spec.m + 1):
            total = F.zero
            nonzero = 0
            for i, a in enumerate(spec.a[k - 1], 1):
                u = evaluate_monomial(spec, k, i, x)
                nonzero += bool(u)
                total = total + a * u
            solved = solved and total == spec.b[k - 1]
            counts.add(nonzero)
        if solved:
            if len(counts) != 1:
                raise StructureViolation("equations disagree on the number of nonzero monomials")
            hist[counts.pop()] += 1
    return hist


def _scan(args) -> np.ndarray:
    spec, start, stop, vectorized = args
    if vectorized and (spec.field.n == 1 or spec.field.q <= MUL_TABLE_MAX_Q):
        return _scan_vectorized(spec, start, stop)
    return _scan_scalar(spec, start, stop)


def _histogram(spec, cap, workers, vectorized) -> np.ndarray:
    size = _check_cap(spec, cap)
    if workers <= 1:
        return _scan((spec, 0, size, vectorized))
    step = -(-size // workers)
    jobs = [(spec, lo, min(lo + step, size), vectorized) for lo in range(0, size, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_scan, jobs))


def brute_count(
    spec: VarietySpec, cap: int | None = None, *, workers: int = 1, vectorized: bool = True
) -> int:
    """Exact number of points of F_q^{n_t} satisfying every equation."""
    return int(_histogram(spec, cap, workers, vectorized).sum())


def partition_profile(
    spec: VarietySpec, cap: int | None = None, *, workers: int = 1, vectorized: bool = True
) -> dict[int, int]:
    """Solutions grouped by how many monomials of each equation are nonzero.

    Returns ``{n: M_n}`` for every n in 0..r_t.
    """
    hist = _histogram(spec, cap, workers, vectorized)
    return {n: int(c) for n, c in enumerate(hist)}


def points(spec: VarietySpec, cap: int | None = None):
    """Iterate over all solution points (small instances, for debugging and tests)."""
    _check_cap(spec, cap)
    F = spec.field
    for coords in itertools.product(range(F.q), repeat=spec.n_total):
        x = [F.from_code(c) for c in coords]
        if all(
            sum((a * evaluate_monomial(spec, k, i, x) for i, a in enumerate(spec.a[k - 1], 1)), F.zero)
            == spec.b[k - 1]
            for k in range(1, spec.m + 1)
        ):
            yield tuple(x)
