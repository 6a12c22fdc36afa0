"""Finite abelian groups in invariant-factor form, their elements and maps."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np

from .zmat import Cokernel, IntMat, smith_normal_form

AbElt = tuple  # residues, one per invariant factor


@dataclass(frozen=True)
class AbGroup:
    """Z/d1 + Z/d2 + ... with d1 | d2 | ... and every di >= 2."""

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", fs)
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2: {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"not a divisibility chain: {fs}")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> tuple["AbGroup", list[list[int]]]:
        """Normalize Z/o1 + Z/o2 + ...; also return T with new = T @ old."""
        A, T, _ = cls.from_orders_with_lifts(orders)
        return A, T

    @classmethod
    def from_orders_with_lifts(cls, orders: Iterable[int]):
        """As from_orders, plus L whose column i is the old-coordinate vector of new generator i."""
        orders = [int(o) for o in orders]
        if any(o < 1 for o in orders):
            raise ValueError("cyclic orders must be positive")
        k = len(orders)
        if k == 0:
            return cls(()), [], []
        diag = IntMat.from_dense([[orders[i] if i == j else 0 for j in range(k)] for i in range(k)])
        res = smith_normal_form(diag, inverses=True)
        U, Ui = res.U.to_dense(), res.Uinv.to_dense()
        keep = [i for i, d in enumerate(res.diagonal) if d > 1]
        A = cls(tuple(res.diagonal[i] for i in keep))
        T = [[U[i][j] % res.diagonal[i] for j in range(k)] for i in keep]
        L = [[Ui[r][i] % orders[r] for i in keep] for r in range(k)]
        return A, T, L

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def is_trivial(self) -> bool:
        return not self.factors

    def zero(self) -> AbElt:
        return (0,) * len(self.factors)

    def gen(self, i: int) -> AbElt:
        return tuple(1 if j == i else 0 for j in range(len(self.factors)))

    def reduce(self, v: Sequence[int]) -> AbElt:
        return tuple(int(x) % d for x, d in zip(v, self.factors))

    def add(self, a: AbElt, b: AbElt) -> AbElt:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors))

    def sub(self, a: AbElt, b: AbElt) -> AbElt:
        return tuple((x - y) % d for x, y, d in zip(a, b, self.factors))

    def neg(self, a: AbElt) -> AbElt:
        return tuple((-x) % d for x, d in zip(a, self.factors))

    def scale(self, n: int, a: AbElt) -> AbElt:
        return tuple((n * x) % d for x, d in zip(a, self.factors))

    def elements(self) -> list[AbElt]:
        return list(itertools.product(*(range(d) for d in self.factors)))

    def index(self, a: AbElt) -> int:
        i = 0
        for x, d in zip(a, self.factors):
            i = i * d + x
        return i

    def element(self, i: int) -> AbElt:
        out = []
        for d in reversed(self.factors):
            out.append(i % d)
            i //= d
        return tuple(reversed(out))

    def to_group(self):
        """This group as a multiplication table; element i is self.element(i)."""
        from .grp import Group

        els = self.elements()
        n = len(els)
        mul = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(els):
            mul[i] = [self.index(self.add(a, b)) for b in els]
        return Group(mul)

    def __str__(self) -> str:
        return " x ".join(f"Z/{d}" for d in self.factors) or "0"


@dataclass(frozen=True)
class AbMap:
    """Homomorphism source -> target; matrix[i][j] = coordinate i of the image of generator j."""

    source: AbGroup
    target: AbGroup
    matrix: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        s, t = self.source, self.target
        mat = tuple(tuple(int(self.matrix[i][j]) % t.factors[i] for j in range(s.rank)) for i in range(t.rank)) \
            if t.rank else ()
        object.__setattr__(self, "matrix", mat)
        for j, dj in enumerate(s.factors):
            for i, di in enumerate(t.factors):
                if (dj * mat[i][j]) % di:
                    raise ValueError(f"map not well defined: generator {j} of order {dj} -> coordinate {i} mod {di}")

    @classmethod
    def from_images(cls, source: AbGroup, target: AbGroup, images: Sequence[AbElt]) -> "AbMap":
        mat = [[images[j][i] for j in range(source.rank)] for i in range(target.rank)]
        return cls(source, target, tuple(tuple(r) for r in mat))

    @classmethod
    def zero(cls, source: AbGroup, target: AbGroup) -> "AbMap":
        return cls(source, target, tuple((0,) * source.rank for _ in range(target.rank)))

    @classmethod
    def identity(cls, A: AbGroup) -> "AbMap":
        return cls(A, A, tuple(A.gen(i) for i in range(A.rank)))

    def __call__(self, a: AbElt) -> AbElt:
        return tuple(sum(r[j] * a[j] for j in range(len(a))) % d for r, d in zip(self.matrix, self.target.factors))

    def compose(self, other: "AbMap") -> "AbMap":
        """other after self."""
        imgs = [other(self(self.source.gen(j))) for j in range(self.source.rank)]
        return AbMap.from_images(self.source, other.target, imgs)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix for x in r)

    def image_order(self) -> int:
        t = self.target.rank
        if t == 0:
            return 1
        cols = [[self.matrix[i][j] for i in range(t)] for j in range(self.source.rank)]
        cols += [[d if i == k else 0 for i in range(t)] for k, d in enumerate(self.target.factors)]
        M = IntMat(t, len(cols), {j: {i: v for i, v in enumerate(c) if v} for j, c in enumerate(cols)})
        coker = prod(d for d in Cokernel(M).divisors)
        return self.target.order // coker

    def kernel_order(self) -> int:
        return self.source.order // self.image_order()

    def is_injective(self) -> bool:
        return self.kernel_order() == 1

    def is_surjective(self) -> bool:
        return self.image_order() == self.target.order

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def negate(self) -> "AbMap":
        return AbMap(self.source, self.target, tuple(tuple(-x for x in r) for r in self.matrix))


def hom_group_order(A: AbGroup, B: AbGroup) -> int:
    """|Hom(A, B)| = prod gcd(ai, bj); the same number is |Ext(A, B)| for finite A."""
    return prod(gcd(a, b) for a in A.factors for b in B.factors)


def hom_group(A: AbGroup, B: AbGroup) -> AbGroup:
    return AbGroup.from_orders([gcd(a, b) for a in A.factors for b in B.factors])[0]


def quotient_by_multiple(A: AbGroup, n: int) -> tuple[AbGroup, AbMap]:
    """A / nA together with the projection."""
    B, T = AbGroup.from_orders([gcd(n, d) for d in A.factors])
    imgs = [B.reduce([T[i][j] for i in range(B.rank)]) for j in range(A.rank)]
    return B, AbMap.from_images(A, B, imgs)


class AbelianStructure:
    """Invariant-factor coordinates on an abelian subgroup of a table group."""

    def __init__(self, A: AbGroup, group, coords: dict[int, AbElt], basis: list[int]):
        self.A = A
        self.group = group
        self.coords = coords
        self.basis = basis

    def element(self, a: AbElt) -> int:
        G = self.group
        out = 0
        for b, k in zip(self.basis, a):
            out = G.m(out, G.power(b, k))
        return out

    def table(self) -> list[int]:
        """Group element for each element of A, in A.elements() order."""
        return [self.element(a) for a in self.A.elements()]


def structure_of_abelian_group(G, members: Iterable[int] | None = None):
    """Invariant factors of an abelian subgroup (default: all of G).

    Returns (AbGroup, coords, basis): coords maps each member to its AbElt and
    basis[i] is the member realizing the i-th standard generator.
    """
    from .grp import _small_gens

    members = set(range(G.order)) if members is None else set(members)
    gens = _small_gens(G, members)
    k = len(gens)
    vec: dict[int, list[int]] = {0: [0] * k}
    q = deque([0])
    rels: list[list[int]] = []
    while q:
        x = q.popleft()
        for i, g in enumerate(gens):
            y = G.m(x, g)
            v = list(vec[x])
            v[i] += 1
            if y not in vec:
                vec[y] = v
                q.append(y)
            else:
                r = [a - b for a, b in zip(v, vec[y])]
                if any(r):
                    rels.append(r)
    if set(vec) != members:
        raise ValueError("members are not a subgroup")
    M = IntMat(k, len(rels), {j: {i: a for i, a in enumerate(r) if a} for j, r in enumerate(rels)})
    cok = Cokernel(M)
    if cok.free_rank:
        raise ValueError("relations do not give a finite group")
    A = AbGroup(tuple(cok.torsion_orders))
    coords = {}
    for x, v in vec.items():
        coords[x] = cok.coordinates({i: a for i, a in enumerate(v) if a})[0]
    basis = []
    for t in range(A.rank):
        lift = cok.lift_torsion(t)
        e = 0
        for i, a in lift.items():
            e = G.m(e, G.power(gens[i], a))
        basis.append(e)
    st = AbelianStructure(A, G, coords, basis)
    for t, b in enumerate(basis):
        if coords[b] != A.gen(t):
            raise AssertionError("abelian structure basis mismatch")
    return A, coords, st
