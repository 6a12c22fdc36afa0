"""Central f-extensions: cocycle dictionary, equivalence, Baer sum, pullback, pushout.

Sign conventions are those of :mod:`relext.bar`: a relative cocycle (c, w)
satisfies delta c = 0 and w(h) - w(gh) + w(g) = c(fg, fh); the twisted product
realizing it has psi(gamma) = (-w(gamma), f(gamma)).
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import config
from .abelian import AbElt, AbGroup, AbMap
from .errors import BudgetError, HypothesisError, InternalInvariantError
from .grp import Group, Hom, identity_hom
from .zmat import solve_mod


# ---------------------------------------------------------------------------
# abelian group arithmetic on element indices


class _Arith:
    """Addition on A via element indices (A.elements() order)."""

    def __init__(self, A: AbGroup):
        self.A = A
        els = A.elements()
        n = len(els)
        self.add = np.empty((n, n), dtype=np.int64)
        for i, a in enumerate(els):
            self.add[i] = [A.index(A.add(a, b)) for b in els]
        self.neg = np.array([A.index(A.neg(a)) for a in els], dtype=np.int64)
        self.els = els


@dataclass(frozen=True, eq=False)
class RelCocycle2:
    """Normalized relative 2-cocycle (c, w) for f: Gamma -> G with values in A."""

    f: Hom
    A: AbGroup
    c: tuple  # c[g][h] : AbElt
    w: tuple  # w[gamma] : AbElt

    @classmethod
    def make(cls, f: Hom, A: AbGroup, c, w, *, check: bool = True) -> "RelCocycle2":
        z = cls(f, A, tuple(tuple(tuple(v) for v in row) for row in c), tuple(tuple(v) for v in w))
        if check:
            z.validate()
        return z

    @classmethod
    def zero(cls, f: Hom, A: AbGroup) -> "RelCocycle2":
        N, M = f.target.order, f.source.order
        return cls.make(f, A, [[A.zero()] * N for _ in range(N)], [A.zero()] * M, check=False)

    @property
    def G(self) -> Group:
        return self.f.target

    @property
    def Gamma(self) -> Group:
        return self.f.source

    def index_tables(self) -> tuple[np.ndarray, np.ndarray]:
        A = self.A
        c = np.array([[A.index(v) for v in row] for row in self.c], dtype=np.int64)
        w = np.array([A.index(v) for v in self.w], dtype=np.int64)
        return c, w

    def validate(self) -> None:
        G, Gam, A = self.G, self.Gamma, self.A
        N, M = G.order, Gam.order
        if len(self.c) != N or any(len(r) != N for r in self.c) or len(self.w) != M:
            raise HypothesisError("cocycle tables have the wrong shape")
        ar = _Arith(A)
        c, w = self.index_tables()
        if c[0].any() or c[:, 0].any() or w[0]:
            raise HypothesisError("cochain is not normalized")
        mul = G.mul.astype(np.int64)
        g, h, k = np.meshgrid(np.arange(N), np.arange(N), np.arange(N), indexing="ij")
        lhs = ar.add[c[g, h], c[mul[g, h], k]]
        rhs = ar.add[c[h, k], c[g, mul[h, k]]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            g0, h0, k0 = bad[0]
            raise HypothesisError(f"2-cocycle law fails at ({g0}, {h0}, {k0})")
        fm = np.asarray(self.f.image, dtype=np.int64)
        gm = Gam.mul.astype(np.int64)
        a, b = np.meshgrid(np.arange(M), np.arange(M), indexing="ij")
        dw = ar.add[ar.add[w[b], ar.neg[w[gm[a, b]]]], w[a]]
        bad = np.argwhere(dw != c[fm[a], fm[b]])
        if len(bad):
            raise HypothesisError(f"relative condition fails at {tuple(bad[0])}")

    def __add__(self, other: "RelCocycle2") -> "RelCocycle2":
        _same(self, other)
        A = self.A
        c = [[A.add(x, y) for x, y in zip(r, s)] for r, s in zip(self.c, other.c)]
        w = [A.add(x, y) for x, y in zip(self.w, other.w)]
        return RelCocycle2.make(self.f, A, c, w, check=False)

    def __neg__(self) -> "RelCocycle2":
        return self.push(AbMap.identity(self.A).negate())

    def __sub__(self, other: "RelCocycle2") -> "RelCocycle2":
        return self + (-other)

    def push(self, e: AbMap) -> "RelCocycle2":
        """Apply a coefficient map A -> A'."""
        c = [[e(v) for v in row] for row in self.c]
        w = [e(v) for v in self.w]
        return RelCocycle2.make(self.f, e.target, c, w, check=False)

    def cone_cochain(self) -> list[AbElt]:
        """As a 2-cochain on relative_complex(f): the pair (c, -w)."""
        from .bar import relative_cochain_from_tables

        return relative_cochain_from_tables(self.f, self.A, self.c, self.w)


def _same(x: RelCocycle2, y: RelCocycle2) -> None:
    if x.A != y.A or x.f != y.f:
        raise HypothesisError("cocycles over different f or A")


def relative_coboundary(f: Hom, A: AbGroup, u: Sequence[AbElt]) -> RelCocycle2:
    """(delta u, u o f) for a normalized u: G -> A."""
    G = f.target
    N = G.order
    c = [[A.add(A.sub(u[h], u[G.m(g, h)]), u[g]) for h in range(N)] for g in range(N)]
    w = [u[f(x)] for x in range(f.source.order)]
    return RelCocycle2.make(f, A, c, w, check=False)


def solve_relative_coboundary(z: RelCocycle2) -> list[AbElt] | None:
    """Some u: G -> A with (delta u, u o f) = z, or None."""
    G, A, f = z.G, z.A, z.f
    N = G.order
    cols = N - 1  # unknown u(g) for g = 1..N-1, column g-1
    sols = []
    for j, d in enumerate(A.factors):
        rows, rhs = [], []
        for g in range(1, N):
            for h in range(1, N):
                row: dict[int, int] = {}
                for var, s in ((g, 1), (h, 1), (G.m(g, h), -1)):
                    if var:
                        row[var - 1] = row.get(var - 1, 0) + s
                rows.append({k: v for k, v in row.items() if v})
                rhs.append(z.c[g][h][j])
        for x in range(1, f.source.order):
            fx = f(x)
            rows.append({fx - 1: 1} if fx else {})
            rhs.append(z.w[x][j])
        sol = solve_mod(rows, d, rhs, cols)
        if sol is None:
            return None
        sols.append(sol)
    u = [A.zero()] + [A.reduce([sols[j][g - 1] for j in range(A.rank)]) for g in range(1, N)]
    if relative_coboundary(f, A, u).c != z.c or relative_coboundary(f, A, u).w != z.w:
        raise InternalInvariantError("coboundary solution does not reproduce the cocycle")
    return u


def is_relative_coboundary(z: RelCocycle2) -> bool:
    return solve_relative_coboundary(z) is not None


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True, eq=False)
class CentralExtension:
    """A -> E -> G with iota[A.index(a)] the element of E representing a."""

    A: AbGroup
    E: Group
    iota: tuple[int, ...]
    pi: Hom

    @property
    def G(self) -> Group:
        return self.pi.target

    def iota_of(self, a: AbElt) -> int:
        return self.iota[self.A.index(a)]

    def iota_inv(self, x: int) -> AbElt:
        table = self.__dict__.get("_iota_inv")
        if table is None:
            els = self.A.elements()
            table = {e: els[i] for i, e in enumerate(self.iota)}
            object.__setattr__(self, "_iota_inv", table)
        try:
            return table[x]
        except KeyError:
            raise ValueError(f"element {x} is not in the kernel") from None

    def section(self) -> list[int]:
        """Least-index preimage of each g in G."""
        s = self.__dict__.get("_section")
        if s is None:
            s = [-1] * self.G.order
            for x in range(self.E.order):
                g = self.pi(x)
                if s[g] < 0:
                    s[g] = x
            object.__setattr__(self, "_section", s)
        return s

    def fiber(self, g: int) -> list[int]:
        return [self.E.m(self.iota[i], self.section()[g]) for i in range(len(self.iota))]

    def validate_central(self) -> None:
        E, A = self.E, self.A
        if len(self.iota) != A.order or len(set(self.iota)) != A.order:
            raise HypothesisError("iota is not injective")
        if self.iota[0] != 0:
            raise HypothesisError("iota does not send 0 to the identity")
        els = A.elements()
        for i, a in enumerate(els):
            for j, b in enumerate(els):
                if E.m(self.iota[i], self.iota[j]) != self.iota[A.index(A.add(a, b))]:
                    raise HypothesisError("iota is not a homomorphism")
        mul = E.mul
        for x in self.iota:
            if not np.array_equal(mul[x, :], mul[:, x]):
                raise HypothesisError("kernel is not central")
        if not self.pi.is_surjective():
            raise HypothesisError("pi is not surjective")
        ker = {x for x in range(E.order) if self.pi(x) == 0}
        if ker != set(self.iota):
            raise HypothesisError("image of iota differs from the kernel of pi")


@dataclass(frozen=True, eq=False)
class FExtension(CentralExtension):
    """A central extension of G with structure map psi: Gamma -> E over f."""

    f: Hom = field(default=None)
    psi: Hom = field(default=None)

    @property
    def Gamma(self) -> Group:
        return self.f.source

    def validate(self) -> None:
        self.validate_central()
        if self.psi.target is not self.E and not self.psi.target.same_table(self.E):
            raise HypothesisError("psi does not land in E")
        if self.f.target is not self.G and not self.f.target.same_table(self.G):
            raise HypothesisError("f does not land in G")
        for x in range(self.Gamma.order):
            if self.pi(self.psi(x)) != self.f(x):
                raise HypothesisError(f"pi o psi != f at {x}")


def extension_from_cocycle(z: RelCocycle2, *, check: bool = False) -> FExtension:
    """Twisted product A x G; element (a, g) has index g*|A| + A.index(a)."""
    if check:
        z.validate()
    G, A, f = z.G, z.A, z.f
    nA, N = A.order, G.order
    ar = _Arith(A)
    c, w = z.index_tables()
    gm = G.mul.astype(np.int64)
    gi = np.repeat(np.arange(N), nA)
    ai = np.tile(np.arange(nA), N)
    g, h = gi[:, None], gi[None, :]
    a, b = ai[:, None], ai[None, :]
    mul = gm[g, h] * nA + ar.add[ar.add[a, b], c[g, h]]
    E = Group(mul.astype(np.int32))
    pi = Hom(E, G, gi.tolist(), check=False)
    fm = np.asarray(f.image, dtype=np.int64)
    psi = Hom(f.source, E, (fm * nA + ar.neg[w]).tolist(), check=False)
    return FExtension(A, E, tuple(range(nA)), pi, f=f, psi=psi)


def classify(X: FExtension) -> RelCocycle2:
    """(c, w) from the least-index section: c = s(g)s(h)s(gh)^-1, w = -(psi s(f)^-1)."""
    E, G = X.E, X.G
    s = X.section()
    inv = E.inverses
    N = G.order
    c = [[X.iota_inv(E.m(E.m(s[g], s[h]), inv[s[G.m(g, h)]])) for h in range(N)] for g in range(N)]
    A = X.A
    w = [A.neg(X.iota_inv(E.m(X.psi(x), inv[s[X.f(x)]]))) for x in range(X.Gamma.order)]
    return RelCocycle2.make(X.f, A, c, w, check=False)


def is_equivalent(X: FExtension, Y: FExtension) -> bool:
    if X.A != Y.A or X.f != Y.f:
        raise HypothesisError("equivalence needs the same f and the same kernel")
    return is_relative_coboundary(classify(X) - classify(Y))


def split_extension(f: Hom, A: AbGroup) -> FExtension:
    return extension_from_cocycle(RelCocycle2.zero(f, A))


def baer_sum(X: FExtension, Y: FExtension) -> FExtension:
    return extension_from_cocycle(classify(X) + classify(Y))


def negate(X: FExtension) -> FExtension:
    """Pushout along a -> -a."""
    return pushout_along(X, AbMap.identity(X.A).negate())


def pushout_along(X: FExtension, e: AbMap) -> FExtension:
    if e.source != X.A:
        raise HypothesisError("coefficient map does not start at the kernel")
    return extension_from_cocycle(classify(X).push(e))


def baer_sum_oracle(X: FExtension, Y: FExtension, budget: config.Budget | None = None) -> FExtension:
    """Literal pullback over G, then pushout along addition A + A -> A."""
    budget = config.get(budget)
    if X.A != Y.A or X.f != Y.f:
        raise HypothesisError("Baer sum needs the same f and kernel")
    if X.E.order > budget.baer_oracle_cap or Y.E.order > budget.baer_oracle_cap:
        raise BudgetError("group-level Baer sum oracle is limited to small extensions")
    A = X.A
    # pullback E_X x_G E_Y
    pairs = [(x, y) for x in range(X.E.order) for y in range(Y.E.order) if X.pi(x) == Y.pi(y)]
    pos = {p: i for i, p in enumerate(pairs)}
    # antidiagonal {(iota a, iota -a)}
    anti = [pos[(X.iota_of(a), Y.iota_of(A.neg(a)))] for a in A.elements()]
    # cosets of the antidiagonal; representative = least pair index
    n = len(pairs)
    pmul = [[pos[(X.E.m(x1, x2), Y.E.m(y1, y2))] for (x2, y2) in pairs] for (x1, y1) in pairs]
    rep = [-1] * n
    reps = []
    for i in range(n):
        if rep[i] < 0:
            k = len(reps)
            reps.append(i)
            for a in anti:
                rep[pmul[i][a]] = k
    mul = np.array([[rep[pmul[reps[i]][reps[j]]] for j in range(len(reps))] for i in range(len(reps))],
                   dtype=np.int32)
    Q = Group(mul)
    pi = Hom(Q, X.G, [X.pi(pairs[r][0]) for r in reps], check=False)
    iota = tuple(rep[pos[(X.iota_of(a), 0)]] for a in A.elements())
    psi = Hom(X.Gamma, Q, [rep[pos[(X.psi(x), Y.psi(x))]] for x in range(X.Gamma.order)], check=False)
    Z = FExtension(A, Q, iota, pi, f=X.f, psi=psi)
    Z.validate()
    return Z


# ---------------------------------------------------------------------------
# homomorphism searches


def _extend(src: Group, tgt: Group, gens: Sequence[int], imgs: Sequence[int]) -> list[int] | None:
    """Unique homomorphism with gens -> imgs, or None when inconsistent."""
    img = [-1] * src.order
    img[0] = 0
    queue = [0]
    for x in queue:
        ix = img[x]
        for g, t in zip(gens, imgs):
            y = src.m(x, g)
            v = tgt.m(ix, t)
            if img[y] < 0:
                img[y] = v
                queue.append(y)
            elif img[y] != v:
                return None
    if len(queue) != src.order:
        raise InternalInvariantError("search generators do not generate the source")
    return img


def _gens_with_forced(src: Group, forced: Sequence[int]) -> list[int]:
    from .grp import _closure

    gens: list[int] = []
    span = {0}
    for x in list(forced) + list(range(src.order)):
        if x not in span:
            gens.append(x)
            span = _closure(src, gens)
            if len(span) == src.order:
                break
    return gens


def compatible_maps(
    src: Group, src_pi: Hom, src_psi: Hom, tgt: Group, tgt_pi: Hom, tgt_psi: Hom,
    budget: config.Budget | None = None, limit: int | None = None,
) -> list[Hom]:
    """All tau: src -> tgt with tgt_pi o tau = src_pi and tau o src_psi = tgt_psi."""
    budget = config.get(budget)
    if src.order > budget.hom_search_cap:
        raise BudgetError(f"map search from a group of order {src.order} exceeds {budget.hom_search_cap}")
    Gam = src_psi.source
    forced = {}
    for x in Gam.generators:
        forced.setdefault(src_psi(x), tgt_psi(x))
    gens = _gens_with_forced(src, list(forced))
    fibers: dict[int, list[int]] = {}
    for y in range(tgt.order):
        fibers.setdefault(tgt_pi(y), []).append(y)
    choices = []
    for g in gens:
        if g in forced:
            if tgt_pi(forced[g]) != src_pi(g):
                return []
            choices.append([forced[g]])
        else:
            choices.append(fibers.get(src_pi(g), []))
    out = []
    for imgs in itertools.product(*choices):
        img = _extend(src, tgt, gens, imgs)
        if img is None:
            continue
        if any(tgt_pi(img[x]) != src_pi(x) for x in range(src.order)):
            continue
        if any(img[src_psi(x)] != tgt_psi(x) for x in range(Gam.order)):
            continue
        out.append(Hom(src, tgt, img, check=False))
        if limit is not None and len(out) >= limit:
            break
    return out


def f_extension_maps(X: FExtension, Y: FExtension, budget: config.Budget | None = None) -> list[Hom]:
    """Maps of f-extensions E_X -> E_Y over the identity of G."""
    if X.f != Y.f:
        raise HypothesisError("f-extension maps need the same f")
    return compatible_maps(X.E, X.pi, X.psi, Y.E, Y.pi, Y.psi, budget)


def lifts(g: Hom, X: CentralExtension, budget: config.Budget | None = None, limit: int | None = None) -> list[Hom]:
    """Homomorphisms g~: Gamma0 -> E with pi o g~ = g."""
    budget = config.get(budget)
    src = g.source
    if src.order > budget.lift_search_cap:
        raise BudgetError(f"lift search over a group of order {src.order} exceeds {budget.lift_search_cap}")
    gens = _gens_with_forced(src, [])
    choices = [X.fiber(g(x)) for x in gens]
    out = []
    for imgs in itertools.product(*choices):
        img = _extend(src, X.E, gens, imgs)
        if img is None or any(X.pi(img[x]) != g(x) for x in range(src.order)):
            continue
        out.append(Hom(src, X.E, img, check=False))
        if limit is not None and len(out) >= limit:
            break
    return out


# ---------------------------------------------------------------------------
# pullback


@dataclass
class Pullback:
    M: Group
    to_E: Hom
    to_Gamma: Hom
    sections: list[Hom]
    structure_maps: list[Hom]  # to_E o s for each section s


def pullback_along(X: CentralExtension, f: Hom, budget: config.Budget | None = None) -> Pullback:
    """M' = {(m, gamma) : pi(m) = f(gamma)} with all homomorphic sections of M' -> Gamma."""
    budget = config.get(budget)
    if f.target is not X.G and not f.target.same_table(X.G):
        raise HypothesisError("f does not land in the base of the extension")
    Gam, E = f.source, X.E
    if Gam.order > budget.lift_search_cap:
        raise BudgetError("section search limited by lift_search_cap")
    pairs = [(m, x) for x in range(Gam.order) for m in X.fiber(f(x))]
    pairs.sort(key=lambda p: (p[1], p[0]))
    # identity first: (0, 0) is the least pair
    pos = {p: i for i, p in enumerate(pairs)}
    mul = np.array([[pos[(E.m(m1, m2), Gam.m(x1, x2))] for (m2, x2) in pairs] for (m1, x1) in pairs],
                   dtype=np.int32)
    M = Group(mul)
    to_E = Hom(M, E, [p[0] for p in pairs], check=False)
    to_G = Hom(M, Gam, [p[1] for p in pairs], check=False)
    gens = _gens_with_forced(Gam, [])
    fib = {}
    for i, (m, x) in enumerate(pairs):
        fib.setdefault(x, []).append(i)
    sections, structure = [], []
    for imgs in itertools.product(*(fib[x] for x in gens)):
        img = _extend(Gam, M, gens, imgs)
        if img is None or any(to_G(img[x]) != x for x in range(Gam.order)):
            continue
        s = Hom(Gam, M, img, check=False)
        sections.append(s)
        structure.append(s.then(to_E))
    return Pullback(M, to_E, to_G, sections, structure)


def f_extension_from_section(X: CentralExtension, f: Hom, pb: Pullback, k: int) -> FExtension:
    return FExtension(X.A, X.E, X.iota, X.pi, f=f, psi=pb.structure_maps[k])


# ---------------------------------------------------------------------------
# brute-force class enumeration


def _relative_equations(f: Hom) -> tuple[int, list[list[tuple[int, int]]]]:
    """Variables: c(g,h) for g,h != e (index (g-1)(N-1)+h-1), then w(x) for x != e."""
    G, Gam = f.target, f.source
    N, M = G.order, Gam.order
    nc = (N - 1) ** 2

    def cv(g, h):
        return None if g == 0 or h == 0 else (g - 1) * (N - 1) + (h - 1)

    def wv(x):
        return None if x == 0 else nc + x - 1

    eqs = []
    for g, h, k in itertools.product(range(1, N), repeat=3):
        terms: dict[int, int] = {}
        for v, s in ((cv(g, h), 1), (cv(G.m(g, h), k), 1), (cv(h, k), -1), (cv(g, G.m(h, k)), -1)):
            if v is not None:
                terms[v] = terms.get(v, 0) + s
        t = [(v, s) for v, s in terms.items() if s]
        if t:
            eqs.append(t)
    for a, b in itertools.product(range(1, M), repeat=2):
        terms = {}
        for v, s in ((wv(b), 1), (wv(Gam.m(a, b)), -1), (wv(a), 1), (cv(f(a), f(b)), -1)):
            if v is not None:
                terms[v] = terms.get(v, 0) + s
        t = [(v, s) for v, s in terms.items() if s]
        if t:
            eqs.append(t)
    return nc + M - 1, eqs


def gauge_tree(G: Group) -> list[int]:
    """c-variables on the edges x -> xs (x != e) of a breadth-first spanning tree of the Cayley graph.

    Adjusting u(xs) kills c(x, s) along the tree, so every class has a cocycle vanishing there.
    """
    N = G.order
    seen = {0}
    queue = [0]
    fixed = []
    for x in queue:
        for s in G.generators:
            y = G.m(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
                if x:
                    fixed.append((x - 1) * (N - 1) + (s - 1))
    return fixed


def enumerate_relative_cocycles(f: Hom, A: AbGroup, budget: config.Budget | None = None,
                                fixed_zero: Sequence[int] = ()) -> np.ndarray:
    """Every normalized relative cocycle as a row of element indices (c entries then w entries).

    Depth-first search over the table entries with forced-value propagation;
    variables in fixed_zero are pinned to 0.
    """
    budget = config.get(budget)
    nvar, eqs = _relative_equations(f)
    ar = _Arith(A)
    add, neg = ar.add, ar.neg
    nA = A.order
    scale = {s: np.array([A.index(A.scale(s, a)) for a in ar.els], dtype=np.int64) for s in (-2, -1, 1, 2)}
    # scaled values as plain lists for speed
    sc = {s: v.tolist() for s, v in scale.items()}
    addl = add.tolist()
    negl = neg.tolist()
    by_var: list[list[int]] = [[] for _ in range(nvar)]
    for i, e in enumerate(eqs):
        for v, _ in e:
            by_var[v].append(i)
    val = [-1] * nvar
    out: list[list[int]] = []
    visited = [0]

    def check_and_force(start: list[int], trail: list[int]) -> bool:
        stack = list(start)
        while stack:
            v = stack.pop()
            for ei in by_var[v]:
                total = 0
                free = None
                nfree = 0
                for u, s in eqs[ei]:
                    x = val[u]
                    if x < 0:
                        nfree += 1
                        free = (u, s)
                        if nfree > 1:
                            break
                    else:
                        total = addl[total][sc[s][x]]
                if nfree == 0:
                    if total:
                        return False
                elif nfree == 1 and free[1] in (1, -1):
                    u, s = free
                    x = negl[total] if s == 1 else total
                    val[u] = x
                    trail.append(u)
                    stack.append(u)
        return True

    # branch on c(g, s) for generators s and w on generators of Gamma first: these
    # determine the rest, which then arrives by propagation
    G, Gam = f.target, f.source
    N = G.order
    first = [(g - 1) * (N - 1) + (s - 1) for s in G.generators for g in range(1, N)]
    first += [(N - 1) ** 2 + x - 1 for x in Gam.generators]
    order = list(dict.fromkeys(first + list(range(nvar))))

    def dfs(pos: int) -> None:
        while pos < nvar and val[order[pos]] >= 0:
            pos += 1
        if pos == nvar:
            out.append(list(val))
            return
        var = order[pos]
        for x in range(nA):
            visited[0] += 1
            if visited[0] > budget.cocycle_enum_cap:
                raise BudgetError(f"cocycle enumeration exceeded {budget.cocycle_enum_cap} nodes")
            trail = [var]
            val[var] = x
            if check_and_force([var], trail):
                dfs(pos + 1)
            for u in trail:
                val[u] = -1

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * nvar + 1000))
    try:
        trail = list(fixed_zero)
        for v in fixed_zero:
            val[v] = 0
        if check_and_force(list(fixed_zero), trail):
            dfs(0)
    finally:
        sys.setrecursionlimit(old)
    return np.array(out, dtype=np.int64).reshape(len(out), nvar)


def relative_coboundary_rows(f: Hom, A: AbGroup) -> np.ndarray:
    """All (delta u, u o f) for normalized u: G -> A, encoded like enumerate_relative_cocycles."""
    G = f.target
    N = G.order
    ar = _Arith(A)
    nA = A.order
    us = np.array(list(itertools.product(range(nA), repeat=N - 1)), dtype=np.int64)
    us = us.reshape(nA ** (N - 1), N - 1)
    U = np.concatenate([np.zeros((us.shape[0], 1), dtype=np.int64), us], axis=1)
    g, h = np.meshgrid(np.arange(1, N), np.arange(1, N), indexing="ij")
    g, h = g.ravel(), h.ravel()
    gh = G.mul.astype(np.int64)[g, h]
    c = ar.add[ar.add[U[:, h], ar.neg[U[:, gh]]], U[:, g]]
    fm = np.asarray(f.image, dtype=np.int64)[1:]
    w = U[:, fm]
    return np.concatenate([c, w], axis=1)


def _rows_to_cocycle(f: Hom, A: AbGroup, row: Sequence[int]) -> RelCocycle2:
    G, Gam = f.target, f.source
    N, M = G.order, Gam.order
    els = A.elements()
    c = [[A.zero()] * N for _ in range(N)]
    k = 0
    for g in range(1, N):
        for h in range(1, N):
            c[g][h] = els[row[k]]
            k += 1
    w = [A.zero()] + [els[row[k + i]] for i in range(M - 1)]
    return RelCocycle2.make(f, A, c, w, check=False)


def enumerate_class_cocycles(f: Hom, A: AbGroup, budget: config.Budget | None = None) -> list[RelCocycle2]:
    """One cocycle per class: gauge-fixed cocycles modulo the residual coboundaries, orbits formed explicitly."""
    budget = config.get(budget)
    G, Gam = f.target, f.source
    if G.order > budget.ext_group_cap or Gam.order > budget.ext_group_cap or A.order > budget.ext_coeff_cap:
        raise BudgetError(
            f"class enumeration is limited to |G|, |Gamma| <= {budget.ext_group_cap} and |A| <= {budget.ext_coeff_cap}"
        )
    fixed = gauge_tree(G)
    Z = enumerate_relative_cocycles(f, A, budget, fixed_zero=fixed)
    B = relative_coboundary_rows(f, A)
    B = np.unique(B[(B[:, fixed] == 0).all(axis=1)] if fixed else B, axis=0)
    add = _Arith(A).add
    seen: set[bytes] = set()
    reps = []
    for row in Z:
        key = row.astype(np.uint8).tobytes()
        if key in seen:
            continue
        reps.append(row)
        orbit = add[row[None, :], B].astype(np.uint8)
        seen.update(r.tobytes() for r in orbit)
    if len(seen) != len(Z):
        raise InternalInvariantError("coboundary orbits do not partition the cocycles")
    return [_rows_to_cocycle(f, A, r.tolist()) for r in reps]


def enumerate_classes(f: Hom, A: AbGroup, budget: config.Budget | None = None) -> list[FExtension]:
    """One FExtension per equivalence class of central f-extensions with kernel A."""
    return [extension_from_cocycle(z) for z in enumerate_class_cocycles(f, A, budget)]


def identity_extension(G: Group) -> FExtension:
    """G over id_G with trivial kernel."""
    ident = identity_hom(G)
    return FExtension(AbGroup(()), G, (0,), ident, f=ident, psi=ident)
