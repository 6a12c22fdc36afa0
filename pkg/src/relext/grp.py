"""Finite groups as multiplication tables.

Elements are the integers 0..order-1 and 0 is always the identity.  All
enumeration orders are fixed by element index so every construction is
reproducible bit for bit.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import (
    BudgetError,
    GenerationError,
    MalformedTableError,
    NormalityError,
    NotAHomomorphismError,
)


class Group:
    """A finite group given by its multiplication table.

    Build through :func:`group_from_table` or :func:`group_from_permutations`;
    the constructor itself trusts its input.
    """

    def __init__(self, mul: np.ndarray, labels: Sequence[str] | None = None):
        mul = np.ascontiguousarray(mul, dtype=np.int32)
        mul.setflags(write=False)
        self.mul = mul
        self.order = int(mul.shape[0])
        inv = np.empty(self.order, dtype=np.int32)
        rows, cols = np.nonzero(mul == 0)
        inv[rows] = cols
        inv.setflags(write=False)
        self.inv = inv
        self.labels = tuple(labels) if labels is not None else None

    @cached_property
    def rows(self) -> list[list[int]]:
        return self.mul.tolist()

    @cached_property
    def inverses(self) -> list[int]:
        return self.inv.tolist()

    def m(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def prod(self, *xs: int) -> int:
        out = 0
        rows = self.rows
        for x in xs:
            out = rows[out][x]
        return out

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inverses[a], -n
        out, base, rows = 0, a, self.rows
        while n:
            if n & 1:
                out = rows[out][base]
            base = rows[base][base]
            n >>= 1
        return out

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        iv = self.inverses
        return self.prod(iv[a], iv[b], a, b)

    def conj(self, a: int, g: int) -> int:
        """g^-1 a g."""
        return self.prod(self.inverses[g], a, g)

    def element_order(self, a: int) -> int:
        n, x, row = 1, a, self.rows
        while x != 0:
            x = row[x][a]
            n += 1
        return n

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set: greedy in index order."""
        gens: list[int] = []
        members = {0}
        for x in range(1, self.order):
            if x not in members:
                gens.append(x)
                members = _closure(self, gens)
                if len(members) == self.order:
                    break
        return tuple(gens)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def same_table(self, other: "Group") -> bool:
        return self.order == other.order and bool(np.array_equal(self.mul, other.mul))

    def __repr__(self) -> str:
        return f"Group(order={self.order})"


class Subgroup:
    __slots__ = ("parent", "members", "_set")

    def __init__(self, parent: Group, members: Iterable[int]):
        self.parent = parent
        self.members = tuple(sorted(set(members)))
        self._set = frozenset(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    @property
    def as_set(self) -> frozenset[int]:
        return self._set

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent.order})"


class Hom:
    """A homomorphism source -> target stored as an image table."""

    __slots__ = ("source", "target", "image")

    def __init__(self, source: Group, target: Group, image: Sequence[int], *, check: bool = True,
                 budget: config.Budget | None = None):
        self.source = source
        self.target = target
        self.image = tuple(int(x) for x in image)
        if check:
            _check_hom(self, config.get(budget))

    def __call__(self, x: int) -> int:
        return self.image[x]

    def then(self, other: "Hom") -> "Hom":
        """other after self."""
        if other.source is not self.target and not other.source.same_table(self.target):
            raise ValueError("composition of non-matching homomorphisms")
        img = other.image
        return Hom(self.source, other.target, [img[x] for x in self.image], check=False)

    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.target.order

    def is_injective(self) -> bool:
        return len(set(self.image)) == self.source.order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hom):
            return NotImplemented
        return self.image == other.image and self.source.same_table(other.source) and self.target.same_table(other.target)

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Hom({self.source.order} -> {self.target.order})"


def _check_hom(h: Hom, budget: config.Budget) -> None:
    S, T, img = h.source, h.target, h.image
    if len(img) != S.order or any(not 0 <= y < T.order for y in img):
        raise NotAHomomorphismError("image table has the wrong length or range")
    if img[0] != 0:
        raise NotAHomomorphismError("identity not sent to identity")
    im = np.asarray(img, dtype=np.int64)
    n = S.order
    if n * n <= budget.assoc_exhaustive_cap ** 2:
        lhs = im[S.mul]
        rhs = T.mul[im[:, None], im[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            x, y = map(int, bad[0])
            raise NotAHomomorphismError(f"f({x}*{y}) != f({x})*f({y})")
    else:
        rng = np.random.default_rng(budget.seed)
        xs = rng.integers(0, n, budget.assoc_samples)
        ys = rng.integers(0, n, budget.assoc_samples)
        bad = np.nonzero(im[S.mul[xs, ys]] != T.mul[im[xs], im[ys]])[0]
        if len(bad):
            raise NotAHomomorphismError(f"f({xs[bad[0]]}*{ys[bad[0]]}) != f(.)f(.)")


# ---------------------------------------------------------------------------
# construction


def group_from_table(table, labels: Sequence[str] | None = None, budget: config.Budget | None = None) -> Group:
    """Validate a multiplication table and wrap it as a Group."""
    budget = config.get(budget)
    try:
        mul = np.asarray(table, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise MalformedTableError(f"not a rectangular integer table: {exc}") from None
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise MalformedTableError("table must be a non-empty square")
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise MalformedTableError("entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
        raise MalformedTableError("element 0 is not a two-sided identity")
    srt = np.sort(mul, axis=1)
    if not (srt == ar).all():
        i = int(np.nonzero((srt != ar).any(axis=1))[0][0])
        raise MalformedTableError(f"row {i} is not a permutation")
    srt = np.sort(mul, axis=0)
    if not (srt == ar[:, None]).all():
        j = int(np.nonzero((srt != ar[:, None]).any(axis=0))[0][0])
        raise MalformedTableError(f"column {j} is not a permutation")
    if n <= budget.assoc_exhaustive_cap:
        for a in range(n):
            lhs = mul[mul[a]]          # (a*b)*c over (b, c)
            rhs = mul[a][mul]          # a*(b*c)
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                b, c = map(int, bad[0])
                raise MalformedTableError(f"not associative at ({a}, {b}, {c})")
    else:
        rng = np.random.default_rng(budget.seed)
        a, b, c = (rng.integers(0, n, budget.assoc_samples) for _ in range(3))
        bad = np.nonzero(mul[mul[a, b], c] != mul[a, mul[b, c]])[0]
        if len(bad):
            k = bad[0]
            raise MalformedTableError(f"not associative at ({a[k]}, {b[k]}, {c[k]})")
    if labels is not None and len(labels) != n:
        raise MalformedTableError("label count does not match the order")
    return Group(mul, labels)


def compose_perms(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Left-to-right product: apply p, then q."""
    return tuple(q[i] for i in p)


def group_from_permutations(degree: int, generators: Sequence[Sequence[int]],
                            budget: config.Budget | None = None) -> tuple[Group, list[tuple[int, ...]]]:
    """Closure of permutations of 0..degree-1 under the left-to-right product.

    Elements are numbered breadth first from the identity, generators in
    input order.  Returns the Group and the permutation of each element.
    """
    budget = config.get(budget)
    if degree < 1:
        raise MalformedTableError("degree must be positive")
    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if sorted(g) != list(range(degree)):
            raise MalformedTableError(f"{list(g)} is not a permutation of 0..{degree - 1}")
        gens.append(g)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    parent: list[tuple[int, int]] = [(-1, -1)]
    q = deque([0])
    while q:
        x = q.popleft()
        for s, g in enumerate(gens):
            y = compose_perms(elems[x], g)
            if y not in index:
                if len(elems) >= budget.order_cap:
                    raise BudgetError(f"permutation closure exceeds order cap {budget.order_cap}")
                index[y] = len(elems)
                elems.append(y)
                parent.append((x, s))
                q.append(index[y])
    n = len(elems)
    right = [np.fromiter((index[compose_perms(e, g)] for e in elems), dtype=np.int32, count=n) for g in gens]
    mul = np.empty((n, n), dtype=np.int32)
    mul[:, 0] = np.arange(n)
    for j in range(1, n):
        p, s = parent[j]
        mul[:, j] = right[s][mul[:, p]]
    return Group(mul), elems


def hom_from_generator_images(src: Group, tgt: Group, gens: Sequence[int], images: Sequence[int]) -> Hom:
    """The unique homomorphism with gens[i] -> images[i], if one exists."""
    if len(gens) != len(images):
        raise ValueError("gens and images differ in length")
    img = [-1] * src.order
    img[0] = 0
    srows, trows = src.rows, tgt.rows
    q = deque([0])
    while q:
        x = q.popleft()
        for g, h in zip(gens, images):
            y = srows[x][g]
            v = trows[img[x]][h]
            if img[y] == -1:
                img[y] = v
                q.append(y)
            elif img[y] != v:
                raise NotAHomomorphismError(f"images inconsistent at element {y}")
    if -1 in img:
        raise GenerationError("given elements do not generate the source")
    return Hom(src, tgt, img, check=False)


def identity_hom(G: Group) -> Hom:
    return Hom(G, G, range(G.order), check=False)


def trivial_group() -> Group:
    return Group(np.zeros((1, 1), dtype=np.int32))


def trivial_hom(src: Group, tgt: Group) -> Hom:
    return Hom(src, tgt, [0] * src.order, check=False)


def direct_product(G: Group, H: Group) -> tuple[Group, Hom, Hom]:
    """G x H with (g, h) at index g*|H| + h, plus both projections."""
    n, m = G.order, H.order
    gi = np.repeat(np.arange(n), m)
    hi = np.tile(np.arange(m), n)
    mul = G.mul[gi[:, None], gi[None, :]].astype(np.int64) * m + H.mul[hi[:, None], hi[None, :]]
    P = Group(mul)
    return P, Hom(P, G, gi, check=False), Hom(P, H, hi, check=False)


# ---------------------------------------------------------------------------
# subgroups


def _closure(G: Group, gens: Iterable[int], start: Iterable[int] = (0,)) -> set[int]:
    gens = [g for g in gens if g != 0]
    members = set(start)
    members.add(0)
    rows = G.rows
    q = deque(members)
    while q:
        x = q.popleft()
        for g in gens:
            y = rows[x][g]
            if y not in members:
                members.add(y)
                q.append(y)
    return members


def subgroup_generated(G: Group, gens: Iterable[int]) -> Subgroup:
    return Subgroup(G, _closure(G, gens))


def whole(G: Group) -> Subgroup:
    return Subgroup(G, range(G.order))


def trivial_subgroup(G: Group) -> Subgroup:
    return Subgroup(G, [0])


def _small_gens(G: Group, members: Iterable[int]) -> list[int]:
    gens: list[int] = []
    have = {0}
    for x in sorted(members):
        if x not in have:
            gens.append(x)
            have = _closure(G, gens)
    return gens


def normal_closure(G: Group, S: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup of G containing S."""
    gens = [x for x in set(S) if x != 0]
    members = _closure(G, gens)
    Ggens = G.generators
    while True:
        new = []
        for h in _small_gens(G, members):
            for g in Ggens:
                c = G.conj(h, g)
                if c not in members:
                    new.append(c)
        if not new:
            return Subgroup(G, members)
        gens = _small_gens(G, members) + new
        members = _closure(G, gens)


def join(G: Group, *subs: Subgroup) -> Subgroup:
    gens: list[int] = []
    for H in subs:
        gens.extend(_small_gens(G, H.members))
    return subgroup_generated(G, gens)


def is_normal(G: Group, H: Subgroup) -> bool:
    hs = _small_gens(G, H.members)
    return all(G.conj(h, g) in H for h in hs for g in G.generators)


def commutator_subgroup(G: Group, H1: Subgroup, H2: Subgroup) -> Subgroup:
    """Normal closure in G of all [a, b] with a in H1, b in H2."""
    # [aa', b] = [a, b]^a' [a', b], so generators of each side suffice
    # once we close under conjugation in G.
    comms = {G.commutator(a, b) for a in _small_gens(G, H1.members) for b in _small_gens(G, H2.members)}
    return normal_closure(G, comms)


def derived_subgroup(G: Group) -> Subgroup:
    return commutator_subgroup(G, whole(G), whole(G))


def kernel(h: Hom) -> Subgroup:
    return Subgroup(h.source, [x for x, y in enumerate(h.image) if y == 0])


def image(h: Hom) -> Subgroup:
    return Subgroup(h.target, set(h.image))


def center(G: Group) -> Subgroup:
    mul = G.mul
    gens = list(G.generators)
    ok = np.ones(G.order, dtype=bool)
    for g in gens:
        ok &= mul[:, g] == mul[g, :]
    return Subgroup(G, np.nonzero(ok)[0].tolist())


def quotient(G: Group, N: Subgroup) -> tuple[Group, Hom]:
    """G/N on least-index coset representatives, with the projection."""
    if not is_normal(G, N):
        raise NormalityError("quotient by a non-normal subgroup")
    coset = [-1] * G.order
    reps: list[int] = []
    rows = G.rows
    for x in range(G.order):
        if coset[x] == -1:
            k = len(reps)
            reps.append(x)
            for n in N.members:
                coset[rows[x][n]] = k
    m = len(reps)
    mul = np.empty((m, m), dtype=np.int32)
    for i, a in enumerate(reps):
        ra = rows[a]
        mul[i] = [coset[ra[b]] for b in reps]
    Q = Group(mul)
    return Q, Hom(G, Q, coset, check=False)


def subgroup_as_group(H: Subgroup) -> tuple[Group, Hom]:
    """H as a standalone Group (members in index order) and its inclusion."""
    G = H.parent
    pos = {x: i for i, x in enumerate(H.members)}
    mem = np.asarray(H.members, dtype=np.int64)
    sub = G.mul[mem[:, None], mem[None, :]]
    mul = np.vectorize(pos.__getitem__, otypes=[np.int32])(sub) if len(mem) else sub
    K = Group(mul)
    return K, Hom(K, G, H.members, check=False)


def corestrict(h: Hom, B: Subgroup) -> tuple[Hom, Group, Hom]:
    """h viewed as a map into B (which must contain its image)."""
    K, inc = subgroup_as_group(B)
    pos = {x: i for i, x in enumerate(B.members)}
    try:
        img = [pos[y] for y in h.image]
    except KeyError:
        raise ValueError("image not contained in B") from None
    return Hom(h.source, K, img, check=False), K, inc


# ---------------------------------------------------------------------------
# abelian quotients, series, enumeration


def abelianization(G: Group):
    """(AbGroup, Hom-like projection) for G / [G, G]; see relext.abelian."""
    from .abelian import structure_of_abelian_group

    Q, proj = quotient(G, derived_subgroup(G))
    A, coords, _ = structure_of_abelian_group(Q)
    return A, [coords[proj.image[x]] for x in range(G.order)]


def is_ab_surjective(f: Hom) -> bool:
    """True iff image(f) and [G, G] together generate G."""
    G = f.target
    D = derived_subgroup(G)
    return join(G, D, image(f)).order == G.order


def lower_central_series(G: Group) -> list[Subgroup]:
    series = [whole(G)]
    while True:
        nxt = commutator_subgroup(G, series[-1], whole(G))
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.is_trivial():
            return series


def is_perfect(G: Group) -> bool:
    return derived_subgroup(G).order == G.order


def is_nilpotent(G: Group) -> bool:
    return lower_central_series(G)[-1].is_trivial()


def _check_enum(G: Group, budget: config.Budget) -> None:
    if G.order > budget.subgroup_enum_cap:
        raise BudgetError(f"subgroup enumeration capped at order {budget.subgroup_enum_cap}")


def cyclic_subgroups(G: Group) -> list[Subgroup]:
    seen: dict[frozenset, Subgroup] = {}
    for x in range(G.order):
        H = subgroup_generated(G, [x])
        seen.setdefault(H.as_set, H)
    return sorted(seen.values(), key=lambda H: (H.order, H.members))


def subgroups(G: Group, budget: config.Budget | None = None) -> list[Subgroup]:
    """All subgroups (joins of cyclic subgroups), ordered by (order, members)."""
    _check_enum(G, config.get(budget))
    cyc = cyclic_subgroups(G)
    found: dict[frozenset, Subgroup] = {H.as_set: H for H in cyc}
    frontier = list(found.values())
    while frontier:
        new = []
        for H in frontier:
            for C in cyc:
                if C.as_set <= H.as_set:
                    continue
                J = Subgroup(G, _closure(G, _small_gens(G, H.members) + _small_gens(G, C.members)))
                if J.as_set not in found:
                    found[J.as_set] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=lambda H: (H.order, H.members))


def maximal_subgroups(G: Group, budget: config.Budget | None = None) -> list[Subgroup]:
    subs = [H for H in subgroups(G, budget) if H.order < G.order]
    return [H for H in subs if not any(H.as_set < K.as_set for K in subs)]


def frattini_subgroup(G: Group, budget: config.Budget | None = None) -> Subgroup:
    mem = set(range(G.order))
    for M in maximal_subgroups(G, budget):
        mem &= M.as_set
    return Subgroup(G, mem)


def normal_subgroups(G: Group, budget: config.Budget | None = None) -> list[Subgroup]:
    """All normal subgroups, as products of normal closures of single elements."""
    _check_enum(G, config.get(budget))
    atoms: dict[frozenset, Subgroup] = {}
    for x in range(G.order):
        N = normal_closure(G, [x])
        atoms.setdefault(N.as_set, N)
    found = dict(atoms)
    frontier = list(found.values())
    while frontier:
        new = []
        for N in frontier:
            for C in atoms.values():
                if C.as_set <= N.as_set:
                    continue
                J = Subgroup(G, _closure(G, _small_gens(G, N.members) + _small_gens(G, C.members)))
                if J.as_set not in found:
                    found[J.as_set] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=lambda H: (H.order, H.members))


def sylow_subgroup(G: Group, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown one p-element at a time inside normalizers."""
    n = G.order
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    P = trivial_subgroup(G)
    while P.order < target:
        norm = [g for g in range(G.order) if all(G.conj(h, g) in P for h in _small_gens(G, P.members))]
        grown = None
        for y in norm:
            if y in P:
                continue
            if G.power(y, p) in P:
                grown = Subgroup(G, _closure(G, _small_gens(G, P.members) + [y]))
                break
        if grown is None:
            raise AssertionError("Sylow growth failed")  # impossible for finite groups
        P = grown
    return P


def exponent(G: Group) -> int:
    from math import lcm

    e = 1
    for x in range(G.order):
        e = lcm(e, G.element_order(x))
    return e
