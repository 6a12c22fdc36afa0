from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from relext.zmat import (
    Cokernel, IntMat, check_snf, image_divisors, integer_kernel, smith_normal_form, solve_mixed_congruences,
    solve_mod,
)


def matrices(max_rows=5, max_cols=5, lo=-6, hi=6):
    return st.integers(0, max_rows).flatmap(
        lambda m: st.integers(0, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m).map(
                lambda rows: IntMat.from_dense(rows, n)
            )
        )
    )


def test_snf_examples():
    assert smith_normal_form(IntMat.from_dense([[2, 4], [6, 8]])).diagonal == [2, 4]
    assert smith_normal_form(IntMat(3, 2)).diagonal == [0, 0]
    assert smith_normal_form(IntMat.identity(3)).diagonal == [1, 1, 1]


def test_kernel_and_divisors_examples():
    K = integer_kernel(IntMat.from_dense([[1, 1]]))
    assert K.cols == 1
    v = [K[0, 0], K[1, 0]]
    assert v in ([1, -1], [-1, 1])
    assert integer_kernel(IntMat(2, 3)).cols == 3
    assert integer_kernel(IntMat.from_dense([[2]])).cols == 0
    assert image_divisors(IntMat.from_dense([[2]])) == [2]


def test_mixed_congruence_examples():
    M = IntMat.from_dense([[1], [1]])
    assert solve_mixed_congruences(M, [2, 3], [1, 0]) == [3]
    assert solve_mixed_congruences(IntMat.from_dense([[0]]), [2], [1]) is None
    assert solve_mixed_congruences(IntMat(0, 3), [], []) == [0, 0, 0]


def test_no_stored_zeros():
    M = IntMat.from_dense([[0, 1], [0, 0]])
    assert M.nnz() == 1
    assert all(v for col in M.columns() for v in col.values())


@given(matrices())
def test_snf_reconstruction(M):
    res = smith_normal_form(M, check=True, inverses=True)
    check_snf(M, res)
    d = [x for x in res.diagonal if x]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert all(x >= 0 for x in res.diagonal)


@given(matrices(), st.randoms(use_true_random=False))
def test_snf_permutation_invariant(M, rnd):
    rows, cols = list(range(M.rows)), list(range(M.cols))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    dense = M.to_dense()
    P = IntMat.from_dense([[dense[i][j] for j in cols] for i in rows], M.cols)
    assert smith_normal_form(P).diagonal == smith_normal_form(M).diagonal


@given(matrices())
def test_cokernel_matches_dense_snf(M):
    cok = Cokernel(M)
    d = [x for x in smith_normal_form(M).diagonal if x]
    assert cok.divisors == d
    # coordinates of a lift of each torsion generator are that generator
    for t in range(len(cok.torsion)):
        z = cok.lift_torsion(t)
        tors, free = cok.coordinates(z)
        assert tors == tuple(1 if k == t else 0 for k in range(len(cok.torsion)))


@given(matrices())
def test_cokernel_kills_image(M):
    cok = Cokernel(M)
    for col in M.columns():
        tors, free = cok.coordinates(col)
        assert not any(tors) and not any(free)


@given(matrices(4, 4, -3, 3), st.integers(2, 12), st.lists(st.integers(-20, 20), min_size=4, max_size=4))
def test_solve_mod_satisfies(M, modulus, b):
    rows = [dict() for _ in range(M.rows)]
    for j, col in enumerate(M.columns()):
        for i, v in col.items():
            rows[i][j] = v
    b = b[: M.rows]
    x = solve_mod(rows, modulus, b, M.cols)
    if x is not None:
        for r, bi in zip(rows, b):
            assert (sum(v * x[j] for j, v in r.items()) - bi) % modulus == 0


@given(matrices(4, 3, -4, 4), st.data())
def test_mixed_congruences_satisfy(M, data):
    moduli = data.draw(st.lists(st.integers(0, 6), min_size=M.rows, max_size=M.rows))
    # build a consistent right-hand side from a known solution
    x0 = data.draw(st.lists(st.integers(-5, 5), min_size=M.cols, max_size=M.cols))
    dense = M.to_dense()
    b = [sum(r[j] * x0[j] for j in range(M.cols)) for r in dense]
    x = solve_mixed_congruences(M, moduli, b)
    assert x is not None
    for r, m, bi in zip(dense, moduli, b):
        lhs = sum(r[j] * x[j] for j in range(M.cols))
        assert (lhs - bi) % m == 0 if m else lhs == bi


def test_solve_mod_2_large_sparse():
    rnd = random.Random(1)
    n = 300
    x0 = [rnd.randrange(2) for _ in range(n)]
    rows = [{j: 1 for j in rnd.sample(range(n), 4)} for _ in range(2000)]
    b = [sum(x0[j] for j in r) % 2 for r in rows]
    x = solve_mod(rows, 2, b, n)
    assert all(sum(x[j] for j in r) % 2 == bi for r, bi in zip(rows, b))


@pytest.mark.parametrize("modulus", [4, 9, 12])
def test_solve_mod_inconsistent(modulus):
    rows = [{0: 2}, {0: 2}]
    assert solve_mod(rows, modulus, [0, 1], 1) is None or modulus % 2
