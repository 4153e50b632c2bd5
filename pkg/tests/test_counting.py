import itertools
import math
import random

import pytest

from varcount.counting import (
    corollary31_applicable,
    count_Nl,
    count_points,
    lemma23_count,
    lemma24_count,
    level_term,
    solution_sets,
    zero_term,
)
from varcount.errors import CapExceeded, LevelOutOfRange
from varcount.field import build_log_table, make_field, primitive_element, primitive_elements
from varcount.intlinalg import IntMatrix, SnfDecomposition, smith_normal_form
from varcount.random_specs import field_of_order, random_spec, random_sun_spec
from varcount.variety import RawSystem, level_matrix, validate

from conftest import EX42_D, EX42_U, EX42_V


def brute_linear(coeffs, c):
    """Nonzero solutions of sum c_i x_i = c, by enumeration."""
    F = c.field
    return sum(
        1
        for xs in itertools.product(list(F.nonzero_elements()), repeat=len(coeffs))
        if sum((a * x for a, x in zip(coeffs, xs)), F.zero) == c
    )


def brute_Nl(spec, l, logs, snf):
    """N_l straight from its definition: scan (F_q*)^{m r_l}."""
    F, q, rl = spec.field, spec.q, spec.r[l - 1]
    nz = list(F.nonzero_elements())
    per_eq = []
    for k in range(spec.m):
        per_eq.append(
            [u for u in itertools.product(nz, repeat=rl)
             if sum((a * x for a, x in zip(spec.a[k], u)), F.zero) == spec.b[k]]
        )
    count = 0
    for combo in itertools.product(*per_eq):
        h = [logs.ind(u) for us in combo for u in us]
        hp = snf.U.apply(h)
        ok = all(
            hp[i] % (math.gcd(q - 1, snf.d[i]) if i < snf.r else q - 1) == 0 for i in range(len(hp))
        )
        count += ok
    return count


def test_hyperplane_count_examples():
    assert lemma23_count(1, True, 7) == 0
    assert lemma23_count(1, False, 7) == 1
    assert lemma23_count(3, False, 7) == 31


def test_hyperplane_count_against_enumeration():
    rng = random.Random(1)
    for q in (3, 5, 7, 9):
        F = field_of_order(q)
        for k in (1, 2, 3):
            coeffs = [F.from_code(rng.randrange(1, q)) for _ in range(k)]
            assert brute_linear(coeffs, F.zero) == lemma23_count(k, True, q)
            c = F.from_code(rng.randrange(1, q))
            assert brute_linear(coeffs, c) == lemma23_count(k, False, q)


def test_product_count():
    assert lemma24_count(3, 2, 0, 7) == 125
    assert lemma24_count(3, 3, 0, 7) == 29791 == 31**3
    assert lemma24_count(1, 1, 1, 5) == 0
    for m, k, r, q in itertools.product((1, 2, 3), (1, 2, 3), (0, 1, 2), (3, 5, 7)):
        if r <= m:
            expected = lemma23_count(k, True, q) ** r * lemma23_count(k, False, q) ** (m - r)
            assert lemma24_count(m, k, r, q) == expected


def test_ex42_levels(ex42):
    logs = build_log_table(ex42.field, ex42.field(3))
    assert [count_Nl(ex42, l, logs) for l in (1, 2, 3)] == [1, 21, 823]
    assert [count_Nl(ex42, l, logs, method="stream") for l in (1, 2, 3)] == [1, 21, 823]
    for l, N in zip((1, 2, 3), (1, 21, 823)):
        snf = SnfDecomposition(IntMatrix.from_rows(EX42_U[l]), IntMatrix.from_rows(EX42_V[l]), EX42_D[l])
        assert count_Nl(ex42, l, logs, snf=snf) == N
    terms = [level_term(ex42, l, N, smith_normal_form(level_matrix(ex42, l))) for l, N in ((1, 1), (2, 21), (3, 823))]
    assert terms == [1911, 273, 823]


def test_ex42_level_one_brute(ex42):
    logs = build_log_table(ex42.field, ex42.field(3))
    snf = smith_normal_form(level_matrix(ex42, 1))
    assert brute_Nl(ex42, 1, logs, snf) == 1


def test_solution_set_sizes(ex42):
    logs = build_log_table(ex42.field, ex42.field(3))
    assert [len(s) for s in solution_sets(ex42, 2, logs)] == [5, 5, 5]
    assert [len(s) for s in solution_sets(ex42, 3, logs)] == [31, 31, 31]
    assert solution_sets(ex42, 1, logs) == [[(0,)], [(1,)], [(5,)]]


def test_count_Nl_errors(ex42):
    logs = build_log_table(ex42.field, ex42.field(3))
    with pytest.raises(LevelOutOfRange):
        count_Nl(ex42, 4, logs)
    with pytest.raises(CapExceeded):
        count_Nl(ex42, 3, logs, method="stream", cap=1000)


def test_corollary_applicability(ex41, ex42):
    assert corollary31_applicable(ex41)
    assert not corollary31_applicable(ex42)
    F = make_field(7)
    wide = validate(RawSystem(F, [[1], [1]], [1, 1], [[[1]], [[2]]]))  # m*r_1 = 2 > n_1 = 1
    assert not corollary31_applicable(wide)


def test_count_points_examples(ex41, ex42):
    r41 = count_points(ex41)
    assert r41.total == 8190
    assert r41.paths == ["corollary31", "corollary31"]
    assert r41.alpha is None
    r42 = count_points(ex42)
    assert r42.total == 3007
    assert [lv.N_l for lv in r42.levels] == [1, 21, 823]
    assert r42.alpha == ex42.field(3)
    assert r42.zero_term is None and not r42.includes_zero_level


def test_count_points_trivial():
    for q in (3, 5, 7, 9):
        F = field_of_order(q)
        spec = validate(RawSystem(F, [[1]], [0], [[[1]]]))
        report = count_points(spec)
        assert report.zero_term == 1 and report.levels[0].term == 0
        assert report.total == 1


def test_general_path_on_ex41(ex41):
    assert count_points(ex41, fast_path=False).total == 8190


def test_report_invariants():
    rng = random.Random(8)
    for _ in range(40):
        spec = random_spec(rng)
        rep = count_points(spec)
        assert rep.total == (rep.zero_term or 0) + sum(lv.term for lv in rep.levels)
        assert 0 <= rep.total <= spec.q**spec.n_total
        assert rep.includes_zero_level == spec.all_b_zero
        for lv in rep.levels:
            assert lv.N_l <= lemma24_count(spec.m, spec.r[lv.l - 1], spec.zero_b_count(), spec.q)
            assert lv.s <= min(spec.m * spec.r[lv.l - 1], spec.nvars[lv.l - 1])


def test_methods_agree_and_match_definition():
    rng = random.Random(21)
    checked = 0
    while checked < 25:
        spec = random_spec(rng, qs=(3, 5, 7), max_rt=3, max_m=2)
        alpha = primitive_element(spec.field)
        logs = build_log_table(spec.field, alpha)
        for l in range(1, spec.t + 1):
            snf = smith_normal_form(level_matrix(spec, l))
            if (spec.q - 1) ** (spec.m * spec.r[l - 1]) > 20000:
                continue
            a = count_Nl(spec, l, logs, snf=snf)
            assert a == count_Nl(spec, l, logs, snf=snf, method="stream")
            assert a == brute_Nl(spec, l, logs, snf)
            checked += 1


def test_stream_workers_match():
    spec = random_spec(random.Random(4), qs=(7,), max_rt=4)
    logs = build_log_table(spec.field, primitive_element(spec.field))
    for l in range(1, spec.t + 1):
        assert count_Nl(spec, l, logs, method="stream", workers=2) == count_Nl(spec, l, logs)


def test_primitive_element_independence():
    rng = random.Random(31)
    for _ in range(30):
        spec = random_spec(rng, qs=(5, 7, 9, 11, 13))
        for l in range(1, spec.t + 1):
            values = {
                count_Nl(spec, l, build_log_table(spec.field, alpha))
                for alpha in primitive_elements(spec.field)
            }
            assert len(values) == 1


def test_fast_path_consistency():
    rng = random.Random(41)
    seen = 0
    for _ in range(300):
        spec = random_spec(rng)
        if corollary31_applicable(spec):
            seen += 1
            fast, slow = count_points(spec), count_points(spec, fast_path=False)
            assert fast.total == slow.total
            assert [lv.N_l for lv in fast.levels] == [lv.N_l for lv in slow.levels]
    assert seen > 5


def sun_formula(q, n, b_zero):
    if b_zero:
        return q**n - (q - 1) ** n + ((q - 1) ** n + (-1) ** n * (q - 1)) // q
    return ((q - 1) ** n - (-1) ** n) // q


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_sun_special_case(q):
    rng = random.Random(q)
    for n in (1, 2, 3):
        for b_zero in (True, False):
            spec = random_sun_spec(rng, q, n, b_zero=b_zero)
            assert count_points(spec).total == sun_formula(q, n, b_zero)


def test_zero_term_formula(ex42):
    assert zero_term(ex42) == 7**4 * (7**3 - 6**3)


def test_vectorized_residue_matches_python():
    from varcount.counting import _condition_rows, _count_residue, _count_residue_py

    rng = random.Random(3)
    for _ in range(60):
        spec = random_spec(rng, qs=(3, 5, 7, 9), max_rt=3, max_m=4)
        logs = build_log_table(spec.field, primitive_element(spec.field))
        for l in range(1, spec.t + 1):
            rows = _condition_rows(smith_normal_form(level_matrix(spec, l)), spec.q)
            if rows:
                sets, rl = solution_sets(spec, l, logs), spec.r[l - 1]
                assert _count_residue(sets, rows, rl) == _count_residue_py(sets, rows, rl)
