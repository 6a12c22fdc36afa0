from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relext.abelian import AbGroup, AbMap, hom_group_order
from relext.bar import cohomology_order, homology, relative_complex
from relext.config import Budget
from relext.errors import BudgetError, HypothesisError, NotAHomomorphismError
from relext.ext import (
    FExtension, RelCocycle2, baer_sum, baer_sum_oracle, classify, enumerate_class_cocycles, enumerate_classes,
    extension_from_cocycle, f_extension_from_section, f_extension_maps, is_equivalent, is_relative_coboundary,
    negate, pullback_along, pushout_along, relative_coboundary, split_extension,
)
from relext.fixtures import group, small_maps
from relext.grp import (
    Group, Hom, abelianization, hom_from_generator_images, identity_hom, is_ab_surjective, trivial_group, trivial_hom,
)

Z2, Z3, Z4, V = AbGroup((2,)), AbGroup((3,)), AbGroup((4,)), AbGroup((2, 2))
COEFFS = [Z2, Z3, Z4, V]


def red4() -> Hom:
    return hom_from_generator_images(group("cyclic:4"), group("cyclic:2"), [1], [1])


def fixture_maps(max_order=8):
    return [(n, f) for n, f in small_maps() if f.source.order <= max_order and f.target.order <= max_order]


def relabel(X: FExtension, rnd: random.Random) -> FExtension:
    """Same extension with the elements of E renumbered (identity kept at 0)."""
    n = X.E.order
    p = [0] + rnd.sample(range(1, n), n - 1)
    inv = [0] * n
    for x, y in enumerate(p):
        inv[y] = x
    mul = np.array([[p[X.E.m(inv[i], inv[j])] for j in range(n)] for i in range(n)], dtype=np.int32)
    E = Group(mul)
    pi = Hom(E, X.G, [X.pi(inv[i]) for i in range(n)], check=False)
    psi = Hom(X.Gamma, E, [p[X.psi(x)] for x in range(X.Gamma.order)], check=False)
    Y = FExtension(X.A, E, tuple(p[i] for i in X.iota), pi, f=X.f, psi=psi)
    Y.validate()
    return Y


def ab_maps(A: AbGroup, B: AbGroup) -> list[AbMap]:
    out = []
    for imgs in itertools.product(B.elements(), repeat=A.rank):
        try:
            out.append(AbMap.from_images(A, B, list(imgs)))
        except ValueError:
            pass
    return out


def group_homs_to(G: Group, A: AbGroup) -> list[list[int]]:
    """All homomorphisms G -> A as lists of A-indices (A realized as a table)."""
    T = A.to_group()
    gens = list(G.generators)
    out = []
    for imgs in itertools.product(range(T.order), repeat=len(gens)):
        try:
            out.append(list(hom_from_generator_images(G, T, gens, list(imgs)).image))
        except NotAHomomorphismError:
            pass
    return out


# --- twisted products


def test_zero_cocycle_gives_split():
    f = red4()
    X = extension_from_cocycle(RelCocycle2.zero(f, Z2))
    X.validate()
    assert all(X.psi(x) == f(x) * 2 for x in range(4))
    assert X.E.is_abelian and max(X.E.element_order(x) for x in range(4)) == 2


def test_z4_over_z2():
    f = red4()
    G = f.target
    c = [[(0,), (0,)], [(0,), (1,)]]
    ws = []
    for bits in itertools.product(range(2), repeat=3):
        w = [(0,)] + [(b,) for b in bits]
        try:
            RelCocycle2.make(f, Z2, c, w)
            ws.append(w)
        except HypothesisError:
            pass
    assert ws
    X = extension_from_cocycle(RelCocycle2.make(f, Z2, c, ws[0]), check=True)
    X.validate()
    assert max(X.E.element_order(x) for x in range(4)) == 4
    assert X.psi.is_injective() and X.psi.is_surjective()
    assert G.order == 2


def test_trivial_gamma():
    f = trivial_hom(trivial_group(), group("cyclic:2"))
    c = [[(0,), (0,)], [(0,), (1,)]]
    X = extension_from_cocycle(RelCocycle2.make(f, Z2, c, [(0,)]))
    X.validate()
    assert list(X.psi.image) == [0]
    assert max(X.E.element_order(x) for x in range(4)) == 4


def test_invalid_cocycle_rejected():
    f = red4()
    c = [[(0,), (0,)], [(0,), (1,)]]
    with pytest.raises(HypothesisError):
        RelCocycle2.make(f, Z2, c, [(0,)] * 4)


# --- classify / equivalence


def test_classify_examples():
    f = red4()
    assert is_relative_coboundary(classify(split_extension(f, Z2)))
    # Z/4 over Z/2 as an ordinary extension (Gamma = 1): c(1,1) = 1 and not a coboundary
    g = trivial_hom(trivial_group(), group("cyclic:2"))
    X = extension_from_cocycle(RelCocycle2.make(g, Z2, [[(0,), (0,)], [(0,), (1,)]], [(0,)]))
    Y = relabel(X, random.Random(3))
    z = classify(Y)
    assert not is_relative_coboundary(z)
    assert z.c[1][1] == (1,)


def test_equivalence_examples():
    g = trivial_hom(trivial_group(), group("cyclic:2"))
    Z4ext = extension_from_cocycle(RelCocycle2.make(g, Z2, [[(0,), (0,)], [(0,), (1,)]], [(0,)]))
    assert is_equivalent(Z4ext, Z4ext)
    assert not is_equivalent(Z4ext, split_extension(g, Z2))
    # G = 1, Gamma = Z/2: split A x 1 with psi = 0 versus psi = the nonzero map
    h = trivial_hom(group("cyclic:2"), trivial_group())
    X0 = extension_from_cocycle(RelCocycle2.make(h, Z2, [[(0,)]], [(0,), (0,)]))
    X1 = extension_from_cocycle(RelCocycle2.make(h, Z2, [[(0,)]], [(0,), (1,)]))
    assert X0.E.same_table(X1.E)
    assert not is_equivalent(X0, X1)


def test_equivalence_needs_same_data():
    with pytest.raises(HypothesisError):
        is_equivalent(split_extension(red4(), Z2), split_extension(red4(), Z4))


@settings(max_examples=100)
@given(st.data())
def test_round_trip(data):
    name, f = data.draw(st.sampled_from(fixture_maps()))
    A = data.draw(st.sampled_from(COEFFS))
    classes = enumerate_class_cocycles(f, A)
    z = data.draw(st.sampled_from(classes))
    u = [A.zero()] + [A.element(data.draw(st.integers(0, A.order - 1))) for _ in range(f.target.order - 1)]
    z = z + relative_coboundary(f, A, u)
    z.validate()
    X = extension_from_cocycle(z)
    X.validate()
    assert is_relative_coboundary(classify(X) - z)
    Y = relabel(X, random.Random(data.draw(st.integers(0, 10 ** 6))))
    assert is_equivalent(X, Y)
    assert is_equivalent(extension_from_cocycle(classify(Y)), X)


# --- Baer sum, negation, pushout


def test_baer_examples():
    f = identity_hom(group("cyclic:2"))
    g = trivial_hom(trivial_group(), group("cyclic:2"))
    for h in (f, g):
        for X in enumerate_classes(h, Z2):
            N = split_extension(h, Z2)
            assert is_equivalent(baer_sum(X, N), X)
            assert is_equivalent(baer_sum(X, negate(X)), N)
    X = extension_from_cocycle(RelCocycle2.make(g, Z2, [[(0,), (0,)], [(0,), (1,)]], [(0,)]))
    assert is_equivalent(baer_sum(X, X), split_extension(g, Z2))
    assert is_equivalent(baer_sum_oracle(X, X), split_extension(g, Z2))


@pytest.mark.parametrize("name, f", fixture_maps(4))
def test_baer_oracle_small(name, f):
    for A in (Z2, Z3):
        cls = enumerate_classes(f, A)
        for X, Y in itertools.product(cls, repeat=2):
            if X.E.order * Y.E.order <= 256:
                assert is_equivalent(baer_sum(X, Y), baer_sum_oracle(X, Y))


def test_baer_oracle_budget():
    f = identity_hom(group("quaternion:8"))
    X = split_extension(f, V)
    with pytest.raises(BudgetError):
        baer_sum_oracle(X, X, Budget(baer_oracle_cap=16))


def test_pushout_examples():
    f = red4()
    for X in enumerate_classes(f, Z4):
        assert is_equivalent(pushout_along(X, AbMap.identity(Z4)), X)
        P = pushout_along(X, AbMap.zero(Z4, Z2))
        assert is_equivalent(P, split_extension(f, Z2))
        assert all(v == (0,) for v in classify(P).w)


@pytest.mark.parametrize("name, f", [(n, f) for n, f in fixture_maps() if is_ab_surjective(f)])
def test_pushouts_of_universal_enumerate_classes(name, f):
    from relext.universal import universal_extension

    U = universal_extension(f)
    for A in (Z2, Z4, V):
        pushed = [pushout_along(U, e) for e in ab_maps(U.A, A)]
        for X, Y in itertools.combinations(pushed, 2):
            assert not is_equivalent(X, Y)
        classes = enumerate_classes(f, A)
        assert len(pushed) == len(classes)
        for X in classes:
            assert sum(is_equivalent(X, P) for P in pushed) == 1


# --- pullback (splitting criterion)


@pytest.mark.parametrize("name, f", fixture_maps())
def test_pullback_sections(name, f):
    for A in (Z2, Z3):
        for X in enumerate_classes(f, A):
            pb = pullback_along(X, f)
            # gamma -> (psi gamma, gamma) is among the sections
            assert any(all(s.then(pb.to_E)(x) == X.psi(x) for x in range(f.source.order)) for s in pb.sections)
            assert len(pb.sections) == hom_group_order(abelianization(f.source)[0], A)
            for k in range(len(pb.sections)):
                Y = f_extension_from_section(X, f, pb, k)
                Y.validate()
                # the same underlying extension: c agrees, only w moves
                assert classify(Y).c == classify(X).c


def test_pullback_examples():
    g = trivial_hom(trivial_group(), group("cyclic:2"))
    Z4ext = extension_from_cocycle(RelCocycle2.make(g, Z2, [[(0,), (0,)], [(0,), (1,)]], [(0,)]))
    assert pullback_along(Z4ext, identity_hom(group("cyclic:2"))).sections == []
    assert len(pullback_along(Z4ext, g).sections) == 1


# --- maps of f-extensions


@pytest.mark.parametrize("name, f", fixture_maps())
def test_split_self_maps_count(name, f):
    for A in (Z2, Z3):
        X = split_extension(f, A)
        maps = f_extension_maps(X, X)
        assert any(list(t.image) == list(range(X.E.order)) for t in maps)
        twists = [u for u in group_homs_to(f.target, A) if all(u[f(x)] == 0 for x in range(f.source.order))]
        # tau(a, g) = (phi(a) + u(g), g): phi any endomorphism of A, u a twist with u o f = 0
        assert len(maps) == hom_group_order(A, A) * len(twists)


def test_no_maps_between_incompatible():
    g = trivial_hom(trivial_group(), group("cyclic:2"))
    Z4ext = extension_from_cocycle(RelCocycle2.make(g, Z2, [[(0,), (0,)], [(0,), (1,)]], [(0,)]))
    assert f_extension_maps(split_extension(g, Z2), Z4ext) == []
    assert len(f_extension_maps(Z4ext, split_extension(g, Z2))) == 2


# --- enumeration


def test_enumeration_examples():
    for name in ("cyclic:2", "sym:3", "klein"):
        for A in (Z2, Z4, V):
            assert len(enumerate_classes(identity_hom(group(name)), A)) == 1
    h = trivial_hom(group("cyclic:2"), trivial_group())
    assert len(enumerate_classes(h, Z4)) == 2
    assert len(enumerate_classes(red4(), Z2)) == 2


@pytest.mark.parametrize("name, f", fixture_maps())
def test_enumeration_matches_cohomology(name, f):
    C = relative_complex(f)
    for A in COEFFS:
        cls = enumerate_classes(f, A)
        assert len(cls) == cohomology_order(C, A)
        if is_ab_surjective(f):
            assert len(cls) == hom_group_order(homology(C, 2).group, A)


def test_enumeration_budget():
    f = identity_hom(group("cyclic:6"))
    with pytest.raises(BudgetError):
        enumerate_classes(f, AbGroup((5,)))
