from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relext.errors import GenerationError, MalformedTableError, NormalityError, NotAHomomorphismError
from relext.fixtures import group, small_maps, surjections
from relext.grp import (
    abelianization, center, commutator_subgroup, derived_subgroup, frattini_subgroup, group_from_permutations,
    group_from_table, hom_from_generator_images, identity_hom, image, is_ab_surjective, is_nilpotent, is_normal,
    is_perfect, join, kernel, lower_central_series, normal_closure, normal_subgroups, quotient, subgroup_generated,
    subgroups, trivial_group, trivial_hom, whole,
)

NAMES = ["trivial", "cyclic:2", "cyclic:6", "klein", "sym:3", "dihedral:4", "quaternion:8", "alt:4", "sym:4"]


def test_permutation_closure_examples():
    assert group_from_permutations(3, [(1, 2, 0), (1, 0, 2)])[0].order == 6
    G, perms = group_from_permutations(5, [(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)])
    assert G.order == 60 and perms[0] == (0, 1, 2, 3, 4)
    assert group_from_permutations(1, [])[0].order == 1


def test_permutation_closure_matches_naive_bfs():
    gens = [(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)]
    seen = [(0, 1, 2, 3, 4)]
    k = 0
    while k < len(seen):
        p = seen[k]
        for g in gens:
            q = tuple(g[p[i]] for i in range(5))
            if q not in seen:
                seen.append(q)
        k += 1
    assert len(seen) == 60
    assert sorted(group_from_permutations(5, gens)[1]) == sorted(seen)


def test_table_examples():
    assert group_from_table([[0]]).order == 1
    Z4 = group_from_table([[(i + j) % 4 for j in range(4)] for i in range(4)])
    assert Z4.inverses[1] == 3
    # a Latin square on 5 symbols with identity 0 that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(MalformedTableError):
        group_from_table(bad)
    with pytest.raises(MalformedTableError):
        group_from_table([[0, 1], [1, 1]])


@pytest.mark.parametrize("name", NAMES)
def test_table_invariants(name):
    G = group(name)
    mul = np.asarray(G.rows)
    idx = np.arange(G.order)
    assert (mul[0] == idx).all() and (mul[:, 0] == idx).all()
    assert all(sorted(r) == list(idx) for r in mul) and all(sorted(c) == list(idx) for c in mul.T)
    assert all(G.m(x, G.inverses[x]) == 0 for x in idx)
    a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
    assert (mul[mul[a, b], c] == mul[a, mul[b, c]]).all()


def test_hom_examples():
    Z4, Z2 = group("cyclic:4"), group("cyclic:2")
    red = hom_from_generator_images(Z4, Z2, [1], [1])
    assert list(red.image) == [0, 1, 0, 1]
    Q = group("quaternion:8")
    i, j = Q.generators[:2]
    h = hom_from_generator_images(Q, Z2, [i, j], [1, 1])
    assert kernel(h).order == 4
    with pytest.raises(NotAHomomorphismError):
        hom_from_generator_images(Z2, group("cyclic:3"), [1], [1])
    with pytest.raises(GenerationError):
        hom_from_generator_images(Z4, Z2, [2], [0])


def test_kernel_image_examples():
    Q = group("quaternion:8")
    Zq = center(Q)
    assert Zq.order == 2
    assert kernel(quotient(Q, Zq)[1]) == Zq
    assert kernel(identity_hom(Q)).is_trivial()
    S3 = group("sym:3")
    A3 = derived_subgroup(S3)
    assert image(quotient(S3, A3)[1]).order == 2


def test_commutator_examples():
    Q, S3 = group("quaternion:8"), group("sym:3")
    assert commutator_subgroup(Q, center(Q), whole(Q)).is_trivial()
    A3 = derived_subgroup(S3)
    assert commutator_subgroup(S3, A3, whole(S3)) == A3
    Z6 = group("cyclic:6")
    assert commutator_subgroup(Z6, whole(Z6), whole(Z6)).is_trivial()


def test_quotient_examples():
    Q = group("quaternion:8")
    V, _ = quotient(Q, center(Q))
    assert V.order == 4 and V.is_abelian and all(V.element_order(x) <= 2 for x in range(4))
    G = group("sym:3")
    C, p = quotient(G, subgroup_generated(G, []))
    assert C.order == 6 and p.is_injective()
    assert quotient(G, derived_subgroup(G))[0].order == 2
    refl = next(x for x in range(6) if G.element_order(x) == 2)
    with pytest.raises(NormalityError):
        quotient(G, subgroup_generated(G, [refl]))


def test_abelianization_examples():
    assert abelianization(group("sym:3"))[0].factors == (2,)
    assert abelianization(group("quaternion:8"))[0].factors == (2, 2)
    assert abelianization(group("cyclic:6"))[0].factors == (6,)


def test_ab_surjective_examples():
    Z4, Z2 = group("cyclic:4"), group("cyclic:2")
    assert is_ab_surjective(hom_from_generator_images(Z4, Z2, [1], [1]))
    assert is_ab_surjective(trivial_hom(trivial_group(), group("alt:5")))
    assert not is_ab_surjective(hom_from_generator_images(Z2, Z4, [1], [2]))


def test_series_examples():
    D = group("dihedral:4")
    lcs = lower_central_series(D)
    assert [H.order for H in lcs] == [8, 2, 1]
    assert lcs[1] == center(D)
    assert list(frattini_subgroup(group("cyclic:4"))) == [0, 2]
    assert is_perfect(group("alt:5")) and not is_perfect(group("alt:4"))
    assert is_nilpotent(group("quaternion:8")) and not is_nilpotent(group("sym:3"))


@pytest.mark.parametrize("name, f", list(small_maps()) + list(surjections(12)))
def test_kernel_normal_and_lagrange(name, f):
    K = kernel(f)
    assert is_normal(f.source, K)
    assert f.source.order == K.order * image(f).order


@pytest.mark.parametrize("name", NAMES)
def test_quotient_kernel_is_n(name):
    G = group(name)
    for N in normal_subgroups(G):
        Q, p = quotient(G, N)
        assert kernel(p) == N and Q.order * N.order == G.order


@pytest.mark.parametrize("name", NAMES)
def test_abelianization_order(name):
    G = group(name)
    A, proj = abelianization(G)
    assert A.order * derived_subgroup(G).order == G.order


@pytest.mark.parametrize("name", ["dihedral:4", "quaternion:8", "cyclic:2*cyclic:4", "cyclic:2*dihedral:4",
                                  "cyclic:2*quaternion:8", "dihedral:8", "cyclic:4*cyclic:4"])
def test_frattini_generation_for_nilpotent(name):
    # for nilpotent N, a subgroup that surjects onto N_ab is all of N
    N = group(name)
    assert is_nilpotent(N)
    D = derived_subgroup(N)
    assert D.issubset(frattini_subgroup(N))
    for H in subgroups(N):
        if join(N, H, D).order == N.order:
            assert H.order == N.order


@given(st.sampled_from(NAMES), st.lists(st.integers(0, 10 ** 6), max_size=3))
def test_normal_closure_is_smallest_normal(name, raw):
    G = group(name)
    S = [x % G.order for x in raw]
    N = normal_closure(G, S)
    assert is_normal(G, N) and all(s in N for s in S)
    for M in normal_subgroups(G):
        if all(s in M for s in S):
            assert N.issubset(M)


def test_hom_then_is_composition():
    Q = group("quaternion:8")
    V, p = quotient(Q, center(Q))
    q = quotient(V, subgroup_generated(V, [1]))[1]
    pq = p.then(q)
    assert all(pq(x) == q(p(x)) for x in range(8))
