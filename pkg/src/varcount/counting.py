"""Point counting through Smith normal forms of the stacked exponent matrices.

For each level l the count splits into the number N_l of nonzero solutions of
the linear system ``sum_i a_ki u_ki = b_k`` (i <= r_l) whose index vector h
satisfies ``gcd(q-1, d_i) | (U h)_i`` for i <= s_l and ``(q-1) | (U h)_i``
beyond, times the number of points x mapping onto each such solution.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import CapExceeded, InputError, StructureViolation
from .field import FieldElement, LogTable, build_log_table, primitive_element
from .intlinalg import IntMatrix, SnfDecomposition, smith_normal_form
from .variety import VarietySpec, _check_level, level_matrix

DEFAULT_PRODUCT_CAP = 10**8
METHODS = ("residue", "stream")


# -- closed forms --------------------------------------------------------------


def lemma23_count(k: int, c_is_zero: bool, q: int) -> int:
    """Solutions in (F_q*)^k of ``c1 x1 + ... + ck xk = c`` with all ci != 0."""
    if k < 1:
        raise InputError("k must be >= 1")
    if c_is_zero:
        num = (q - 1) ** k + (-1) ** k * (q - 1)
    else:
        num = (q - 1) ** k - (-1) ** k
    return num // q


def lemma24_count(m: int, k: int, zero_count: int, q: int) -> int:
    """Nonzero solutions of m independent length-k equations, ``zero_count`` of them homogeneous."""
    if not 0 <= zero_count <= m:
        raise InputError("zero_count must lie in [0, m]")
    r = zero_count
    num = (q - 1) ** r * ((q - 1) ** (k - 1) + (-1) ** k) ** r * ((q - 1) ** k - (-1) ** k) ** (m - r)
    out, rem = divmod(num, q**m)
    assert rem == 0
    return out


def zero_term(spec: VarietySpec) -> int:
    """Points with some of x1..x_{n_1} zero; they solve the system iff all b_k = 0."""
    q, n = spec.q, spec.nvars
    return q ** (n[-1] - n[0]) * (q ** n[0] - (q - 1) ** n[0])


def invariant_gcds(snf: SnfDecomposition, q: int) -> tuple[int, ...]:
    return tuple(math.gcd(q - 1, d) for d in snf.d)


def level_term(spec: VarietySpec, l: int, N_l: int, snf: SnfDecomposition) -> int:
    """Number of points whose first r_l monomials are nonzero and the rest vanish."""
    _check_level(spec, l)
    q, n, t = spec.q, spec.nvars, spec.t
    nl, s = n[l - 1], snf.r
    term = N_l * (q - 1) ** (nl - s) * math.prod(invariant_gcds(snf, q))
    if l < t:
        step = n[l] - nl
        term *= q ** (n[-1] - n[l]) * (q**step - (q - 1) ** step)
    return term


def level_is_unobstructed(spec: VarietySpec, l: int, snf: SnfDecomposition) -> bool:
    """Full row rank and every invariant factor prime to q-1: no index condition bites."""
    return snf.r == spec.m * spec.r[l - 1] and math.gcd(math.prod(snf.d), spec.q - 1) == 1


def corollary31_applicable(spec: VarietySpec) -> bool:
    return all(
        level_is_unobstructed(spec, l, smith_normal_form(level_matrix(spec, l)))
        for l in range(1, spec.t + 1)
    )


# -- the general count ---------------------------------------------------------


def solution_sets(
    spec: VarietySpec, l: int, logs: LogTable, cap: int = DEFAULT_PRODUCT_CAP
) -> list[list[tuple[int, ...]]]:
    """Per equation, the index vectors of all nonzero solutions of its level-l linear form."""
    _check_level(spec, l)
    F = spec.field
    q, rl = F.q, spec.r[l - 1]
    if (q - 1) ** (rl - 1) > cap:
        raise CapExceeded(f"(q-1)^{rl - 1} candidate prefixes exceed the cap {cap}")
    ind = logs.index_of
    out = []
    for k in range(spec.m):
        a = [c.code for c in spec.a[k][:rl]]
        inv_last = F.inv_code(a[-1])
        b = spec.b[k].code
        # precomputed a_i * u for every nonzero u, keyed by u
        scaled = [[F.mul_codes(ai, u) for u in range(q)] for ai in a[:-1]]
        sk = []
        for prefix in itertools.product(range(1, q), repeat=rl - 1):
            acc = b
            for row, u in zip(scaled, prefix):
                acc = F.sub_codes(acc, row[u])
            last = F.mul_codes(acc, inv_last)
            if last:
                sk.append(tuple(ind[u] for u in prefix) + (ind[last],))
        out.append(sk)
    return out


def _condition_rows(snf: SnfDecomposition, q: int):
    """Reduced rows of U and their moduli, dropping rows whose modulus is 1."""
    qm1 = q - 1
    rows = []
    for i in range(snf.U.rows):
        g = math.gcd(qm1, snf.d[i]) if i < snf.r else qm1
        if g > 1:
            rows.append(([x % g for x in snf.U.row(i)], g))
    return rows


def _count_residue_py(sets, rows, rl):
    """Pure-Python residue convolution, used when keys or counts outgrow int64."""
    moduli = [g for _, g in rows]
    hists = []
    for k, sk in enumerate(sets):
        cols = slice(k * rl, (k + 1) * rl)
        blocks = [(w[cols], g) for w, g in rows]
        hist = Counter(
            tuple(sum(c * x for c, x in zip(w, h)) % g for w, g in blocks) for h in sk
        )
        hists.append(hist)
    acc = Counter({(0,) * len(rows): 1})
    for hist in hists[:-1]:
        nxt = Counter()
        for v, cv in acc.items():
            for w, cw in hist.items():
                nxt[tuple((x + y) % g for x, y, g in zip(v, w, moduli))] += cv * cw
        acc = nxt
    last = hists[-1]
    return sum(
        cv * last.get(tuple(-x % g for x, g in zip(v, moduli)), 0) for v, cv in acc.items()
    )


def _residue_hist(sk, W, moduli):
    res = (np.array(sk, dtype=np.int64) @ W.T) % moduli
    return np.unique(res, axis=0, return_counts=True)


def _convolve(a, b, moduli, radix):
    (va, ca), (vb, cb) = a, b
    keys, counts = [], []
    for v, c in zip(va, ca):
        keys.append(((v + vb) % moduli) @ radix)
        counts.append(c * cb)
    keys, inv = np.unique(np.concatenate(keys), return_inverse=True)
    total = np.zeros(len(keys), dtype=np.int64)
    np.add.at(total, inv, np.concatenate(counts))
    # decode keys back into residue vectors
    vecs = (keys[:, None] // radix) % moduli
    return vecs, total


def _count_residue(sets, rows, rl):
    """Convolve per-equation residue histograms; the index condition is linear in h."""
    if not rows:
        return math.prod(len(s) for s in sets)
    if any(not s for s in sets):
        return 0
    moduli = np.array([g for _, g in rows], dtype=np.int64)
    if math.prod(int(g) for g in moduli) >= 2**62 or math.prod(len(s) for s in sets) >= 2**62:
        return _count_residue_py(sets, rows, rl)
    radix = np.cumprod(np.concatenate(([1], moduli[:-1])))
    hists = []
    for k, sk in enumerate(sets):
        W = np.array([w[k * rl : (k + 1) * rl] for w, _ in rows], dtype=np.int64)
        hists.append(_residue_hist(sk, W, moduli))
    zero = (np.zeros((1, len(rows)), dtype=np.int64), np.ones(1, dtype=np.int64))
    # sum over acc x mid, looking up the complement in the last histogram
    acc, mid = zero, zero
    if len(hists) >= 2:
        mid = hists[-2]
    if len(hists) >= 3:
        acc = hists[0]
        for h in hists[1:-2]:
            acc = _convolve(acc, h, moduli, radix)
    last_v, last_c = hists[-1]
    order = np.argsort(last_v @ radix)
    last_keys, last_c = (last_v @ radix)[order], last_c[order]
    (va, ca), (vb, cb) = acc, mid
    total = 0
    for v, c in zip(va, ca):
        need = ((-(v + vb)) % moduli) @ radix
        pos = np.minimum(np.searchsorted(last_keys, need), len(last_keys) - 1)
        hit = last_keys[pos] == need
        total += int(c) * int((cb[hit] * last_c[pos[hit]]).sum())
    return total


def _stream_chunk(args):
    first, rest, rows = args
    count = 0
    for h0 in first:
        for tail in itertools.product(*rest):
            h = h0 + sum(tail, ())
            if all(sum(c * x for c, x in zip(w, h)) % g == 0 for w, g in rows):
                count += 1
    return count


def _count_stream(sets, rows, workers=1):
    """Direct scan of the product of the solution sets."""
    first, rest = sets[0], sets[1:]
    if workers <= 1 or len(first) < 2:
        return _stream_chunk((first, rest, rows))
    step = -(-len(first) // workers)
    chunks = [(first[i : i + step], rest, rows) for i in range(0, len(first), step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_stream_chunk, chunks))


@dataclass
class NlResult:
    value: int
    set_sizes: tuple[int, ...]


def count_Nl_detailed(
    spec: VarietySpec,
    l: int,
    logs: LogTable,
    *,
    snf: SnfDecomposition | None = None,
    method: str = "residue",
    cap: int = DEFAULT_PRODUCT_CAP,
    workers: int = 1,
) -> NlResult:
    if method not in METHODS:
        raise InputError(f"unknown method {method!r}; choose from {METHODS}")
    if logs.field != spec.field:
        raise InputError("log table belongs to a different field")
    _check_level(spec, l)
    if snf is None:
        snf = smith_normal_form(level_matrix(spec, l))
    q, rl = spec.q, spec.r[l - 1]
    sets = solution_sets(spec, l, logs, cap)
    sizes = tuple(len(s) for s in sets)
    for k, size in enumerate(sizes):
        if size != lemma23_count(rl, not spec.b[k], q):
            raise StructureViolation(f"|S_{k + 1}| = {size} disagrees with the closed form")
    product = math.prod(sizes)
    if product != lemma24_count(spec.m, rl, spec.zero_b_count(), q):
        raise StructureViolation("product of solution sets disagrees with the closed form")
    rows = _condition_rows(snf, q)
    if method == "stream":
        if product > cap:
            raise CapExceeded(f"{product} candidate tuples exceed the cap {cap}")
        value = _count_stream(sets, rows, workers)
    else:
        value = _count_residue(sets, rows, rl)
    if not 0 <= value <= product:
        raise StructureViolation(f"N_{l} = {value} outside [0, {product}]")
    return NlResult(value, sizes)


def count_Nl(spec: VarietySpec, l: int, logs: LogTable, **kwargs) -> int:
    """Nonzero solutions of the level-l linear system meeting the index conditions."""
    return count_Nl_detailed(spec, l, logs, **kwargs).value


# -- the total -----------------------------------------------------------------


@dataclass
class LevelData:
    l: int
    E: IntMatrix
    snf: SnfDecomposition
    N_l: int
    term: int
    path: str  # 'general' or 'corollary31'
    gcds: tuple[int, ...]
    set_sizes: tuple[int, ...]

    @property
    def d(self) -> tuple[int, ...]:
        return self.snf.d

    @property
    def s(self) -> int:
        return self.snf.r


@dataclass
class CountReport:
    spec: VarietySpec
    total: int
    includes_zero_level: bool
    zero_term: int | None
    levels: list[LevelData]
    alpha: FieldElement | None
    timings: dict[str, int] = dc_field(default_factory=dict)

    @property
    def paths(self) -> list[str]:
        return [lv.path for lv in self.levels]

    def to_json(self) -> dict:
        F = self.spec.field
        alpha = None
        if self.alpha is not None:
            alpha = self.alpha.coeffs[0] if F.n == 1 else list(self.alpha.coeffs)
        return {
            "field": {"p": F.p, "n": F.n, "modulus": list(F.modulus) if F.n > 1 else None},
            "structure": {
                "m": self.spec.m,
                "t": self.spec.t,
                "r": list(self.spec.r),
                "n": list(self.spec.nvars),
            },
            "alpha": alpha,
            "levels": [
                {
                    "l": lv.l,
                    "d": [str(x) for x in lv.d],
                    "s": lv.s,
                    "gcds": list(lv.gcds),
                    "N_l": str(lv.N_l),
                    "term": str(lv.term),
                    "path": lv.path,
                    "set_sizes": [str(x) for x in lv.set_sizes],
                }
                for lv in self.levels
            ],
            "zero_term": None if self.zero_term is None else str(self.zero_term),
            "total": str(self.total),
            "timings": dict(self.timings),
        }


def count_points(
    spec: VarietySpec,
    *,
    alpha: FieldElement | None = None,
    fast_path: bool = True,
    method: str = "residue",
    cap: int = DEFAULT_PRODUCT_CAP,
    workers: int = 1,
) -> CountReport:
    """Total number of F_q-points of the system, with a per-level breakdown.

    Levels whose stacked exponent matrix has full row rank and invariant
    factors prime to q-1 use the closed form for N_l; the rest enumerate.
    """
    t0 = time.perf_counter_ns()
    timings = {"snf_ns": 0, "log_table_ns": 0, "enumeration_ns": 0}
    q = spec.q
    logs = None
    if alpha is not None:
        tic = time.perf_counter_ns()
        logs = build_log_table(spec.field, alpha)
        timings["log_table_ns"] += time.perf_counter_ns() - tic

    levels = []
    for l in range(1, spec.t + 1):
        tic = time.perf_counter_ns()
        E = level_matrix(spec, l)
        snf = smith_normal_form(E)
        timings["snf_ns"] += time.perf_counter_ns() - tic
        rl = spec.r[l - 1]
        if fast_path and level_is_unobstructed(spec, l, snf):
            N_l = lemma24_count(spec.m, rl, spec.zero_b_count(), q)
            sizes = tuple(lemma23_count(rl, not b, q) for b in spec.b)
            path = "corollary31"
        else:
            if logs is None:
                tic = time.perf_counter_ns()
                logs = build_log_table(spec.field, primitive_element(spec.field))
                timings["log_table_ns"] += time.perf_counter_ns() - tic
            tic = time.perf_counter_ns()
            res = count_Nl_detailed(spec, l, logs, snf=snf, method=method, cap=cap, workers=workers)
            timings["enumeration_ns"] += time.perf_counter_ns() - tic
            N_l, sizes, path = res.value, res.set_sizes, "general"
        levels.append(
            LevelData(l, E, snf, N_l, level_term(spec, l, N_l, snf), path, invariant_gcds(snf, q), sizes)
        )

    includes_zero = spec.all_b_zero
    zt = zero_term(spec) if includes_zero else None
    total = (zt or 0) + sum(lv.term for lv in levels)
    if not 0 <= total <= q**spec.n_total:
        raise StructureViolation(f"total {total} outside [0, q^n]")
    timings["total_ns"] = time.perf_counter_ns() - t0
    return CountReport(
        spec, total, includes_zero, zt, levels, None if logs is None else logs.alpha, timings
    )

