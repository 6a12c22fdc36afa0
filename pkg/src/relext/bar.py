"""Bar complexes, the relative (mapping-cone) complex, and low-degree (co)homology.

Conventions, used everywhere else in the package:

* Degree-n chains of G have basis the n-tuples [g1|...|gn] of non-identity
  elements in lexicographic index order (normalized bar complex).
* The relative complex of f: Gamma -> G is C_n(G) + C_{n-1}(Gamma) with

      d(x, y) = (dx - f_*(y), -dy).

  The minus sign on dy is what makes d o d = 0.
* A relative 2-cochain is presented as a pair (c, w), c a normalized 2-cochain
  on G and w a normalized 1-cochain on Gamma, and is the cone cochain
  (c, -w).  Hence (c, w) is a cocycle iff

      delta c = 0   and   w(h) - w(gh) + w(g) = c(f g, f h),

  the coboundary of u: G -> A is (delta u, u o f), and the pairing with a
  relative 2-chain (x, y) is <(c, w), (x, y)> = c(x) - w(y).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod
from typing import Callable, Sequence

import numpy as np

from . import config
from .abelian import AbElt, AbGroup, AbMap
from .errors import BudgetError, InternalInvariantError
from .grp import Group, Hom
from .zmat import Cokernel, IntMat, _snf_dense

DEGREE_CAP = 3


@dataclass
class ChainComplex:
    """Chain groups in degrees 0..3; boundaries[n]: C_n -> C_{n-1} (boundaries[0] is C_0 -> 0)."""

    basis_sizes: list[int]
    boundaries: list[IntMat]
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def check(self) -> None:
        for n in range(1, DEGREE_CAP):
            prod_ = self.boundaries[n] @ self.boundaries[n + 1]
            if not prod_.is_zero():
                raise InternalInvariantError(f"d_{n} o d_{n + 1} != 0 in {self.name}")

    def cokernel(self, n: int) -> Cokernel:
        """Cokernel of d_n, cached."""
        key = ("cok", n)
        if key not in self._cache:
            self._cache[key] = Cokernel(self.boundaries[n])
        return self._cache[key]


# ---------------------------------------------------------------------------
# bar complexes


def _check_cap(order: int, budget: config.Budget) -> None:
    cap = budget.effective_bar_cap
    if order > cap:
        hint = "" if budget.slow else " (the slow flag raises it)"
        raise BudgetError(f"bar complex of a group of order {order} exceeds cap {cap}{hint}")


def _tuples(m: int, n: int, base: int) -> np.ndarray:
    """All n-tuples over base..base+m-1, lexicographic, shape (m**n, n)."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(base, base + m)] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _bar_boundary(G: Group, n: int, normalized: bool) -> IntMat:
    N = G.order
    base = 1 if normalized else 0
    m = N - base
    cols_src = _tuples(m, n, base)
    rows = m ** (n - 1)
    mul = G.mul.astype(np.int64)

    def index(arr: np.ndarray) -> np.ndarray:
        out = np.zeros(arr.shape[0], dtype=np.int64)
        for k in range(arr.shape[1]):
            out = out * m + (arr[:, k] - base)
        return out

    terms = []  # (row index array, sign, valid mask)
    ncol = cols_src.shape[0]
    ones = np.ones(ncol, dtype=bool)
    terms.append((index(cols_src[:, 1:]), 1, ones))
    for i in range(n - 1):
        merged = mul[cols_src[:, i], cols_src[:, i + 1]]
        arr = np.concatenate([cols_src[:, :i], merged[:, None], cols_src[:, i + 2:]], axis=1)
        valid = merged != 0 if normalized else ones
        terms.append((index(arr) if arr.shape[1] else np.zeros(ncol, dtype=np.int64), (-1) ** (i + 1), valid))
    terms.append((index(cols_src[:, :-1]), (-1) ** n, ones))
    lists = [(t[0].tolist(), t[1], t[2].tolist()) for t in terms]
    out = IntMat(rows, ncol)
    cols = out._c
    for j in range(ncol):
        col: dict[int, int] = {}
        for idx, sign, valid in lists:
            if valid[j]:
                r = idx[j]
                v = col.get(r, 0) + sign
                if v:
                    col[r] = v
                else:
                    del col[r]
        if col:
            cols[j] = col
    return out


def bar_complex(G: Group, budget: config.Budget | None = None, *, normalized: bool = True) -> ChainComplex:
    """Bar complex of G with trivial integer coefficients, degrees 0..3."""
    budget = config.get(budget)
    _check_cap(G.order, budget)
    key = "_bar_normalized" if normalized else "_bar_full"
    cached = G.__dict__.get(key)
    if cached is not None:
        return cached
    m = G.order - 1 if normalized else G.order
    sizes = [m ** n for n in range(DEGREE_CAP + 1)]
    bounds = [IntMat(0, 1)] + [_bar_boundary(G, n, normalized) for n in range(1, DEGREE_CAP + 1)]
    C = ChainComplex(sizes, bounds, name=f"bar({G.order})")
    G.__dict__[key] = C
    return C


def chain_index(tup: Sequence[int], N: int) -> int:
    """Index of a normalized bar chain [g1|...|gn] for a group of order N."""
    i = 0
    for g in tup:
        i = i * (N - 1) + (g - 1)
    return i


def chain_tuple(i: int, n: int, N: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        out.append(i % (N - 1) + 1)
        i //= N - 1
    return tuple(reversed(out))


def chain_map(f: Hom, n: int) -> IntMat:
    """[g1|...|gn] -> [f g1|...|f gn], zero once an entry becomes the identity."""
    S, T = f.source, f.target
    src = _tuples(S.order - 1, n, 1)
    img = np.asarray(f.image, dtype=np.int64)[src] if n else src
    valid = (img != 0).all(axis=1)
    idx = np.zeros(src.shape[0], dtype=np.int64)
    for k in range(n):
        idx = idx * (T.order - 1) + (img[:, k] - 1)
    cols = {j: {int(idx[j]): 1} for j in np.nonzero(valid)[0].tolist()}
    return IntMat((T.order - 1) ** n, (S.order - 1) ** n, cols)


def _block(rows: Sequence[int], cols: Sequence[int], blocks: dict[tuple[int, int], IntMat]) -> IntMat:
    roff = [sum(rows[:i]) for i in range(len(rows))]
    coff = [sum(cols[:j]) for j in range(len(cols))]
    out = IntMat(sum(rows), sum(cols))
    for (bi, bj), M in blocks.items():
        for j, col in M._c.items():
            tgt = out._c.setdefault(coff[bj] + j, {})
            for i, v in col.items():
                tgt[roff[bi] + i] = tgt.get(roff[bi] + i, 0) + v
    out._c = {j: {i: v for i, v in c.items() if v} for j, c in sorted(out._c.items())}
    out._c = {j: c for j, c in out._c.items() if c}
    return out


def _neg(M: IntMat) -> IntMat:
    return IntMat(M.rows, M.cols, {j: {i: -v for i, v in c.items()} for j, c in M._c.items()})


@lru_cache(maxsize=128)
def _relative_complex_cached(f: Hom, budget: config.Budget) -> ChainComplex:
    G, Gam = f.target, f.source
    CG = bar_complex(G, budget)
    CH = bar_complex(Gam, budget)
    sizes = [CG.basis_sizes[0]] + [CG.basis_sizes[n] + CH.basis_sizes[n - 1] for n in range(1, DEGREE_CAP + 1)]
    bounds = [IntMat(0, sizes[0])]
    for n in range(1, DEGREE_CAP + 1):
        fmap = chain_map(f, n - 1)
        rows = [CG.basis_sizes[n - 1]] + ([CH.basis_sizes[n - 2]] if n >= 2 else [])
        cols = [CG.basis_sizes[n], CH.basis_sizes[n - 1]]
        blocks = {(0, 0): CG.boundaries[n], (0, 1): _neg(fmap)}
        if n >= 2:
            blocks[(1, 1)] = _neg(CH.boundaries[n - 1])
        bounds.append(_block(rows, cols, blocks))
    return ChainComplex(sizes, bounds, name=f"cone({Gam.order}->{G.order})")


def relative_complex(f: Hom, budget: config.Budget | None = None) -> ChainComplex:
    """Mapping cone of C(f): C_n(G) + C_{n-1}(Gamma), d(x, y) = (dx - f_* y, -dy)."""
    return _relative_complex_cached(f, config.get(budget))


def relative_split(f: Hom, n: int) -> int:
    """Offset of the Gamma block inside degree n of the relative complex."""
    return (f.target.order - 1) ** n


def cone_map(top: Hom, f_src: Hom, f_tgt: Hom, n: int) -> IntMat:
    """(x, y) -> (top_* x, y) from cone(f_src) to cone(f_tgt), where top o f_src = f_tgt."""
    a = chain_map(top, n)
    k = (f_src.source.order - 1) ** (n - 1)
    ident = IntMat(k, k, {i: {i: 1} for i in range(k)})
    return _block([a.rows, k], [a.cols, k], {(0, 0): a, (1, 1): ident})


# ---------------------------------------------------------------------------
# homology


@dataclass
class HomologyResult:
    group: AbGroup
    cycle_reps: list[dict[int, int]]
    _project: Callable[[dict[int, int]], AbElt] = field(repr=False)

    def project(self, cycle: dict[int, int]) -> AbElt:
        return self._project(cycle)


def homology(C: ChainComplex, n: int) -> HomologyResult:
    """ker d_n / im d_{n+1} for n in {1, 2}, with representatives and projection."""
    if n not in (1, 2):
        raise ValueError("homology is provided in degrees 1 and 2")
    key = ("H", n)
    if key in C._cache:
        return C._cache[key]
    cok = C.cokernel(n + 1)
    rank_dn = C.cokernel(n).rank
    free = C.basis_sizes[n] - rank_dn - cok.rank
    if free:
        raise InternalInvariantError(f"H_{n} has free rank {free}; finite groups only")
    A = AbGroup(tuple(cok.torsion_orders))
    dn = C.boundaries[n]
    reps = []
    for t in range(A.rank):
        z = cok.lift_torsion(t)
        if dn.apply(z):
            raise InternalInvariantError("homology representative is not a cycle")
        reps.append(z)

    def project(x: dict[int, int]) -> AbElt:
        tors, fr = cok.coordinates(x)
        if any(fr):
            raise ValueError("not a cycle")
        return tors

    res = HomologyResult(A, reps, project)
    C._cache[key] = res
    return res


def relative_homology(f: Hom, n: int, budget: config.Budget | None = None) -> HomologyResult:
    return homology(relative_complex(f, budget), n)


def induced_h2(f: Hom, budget: config.Budget | None = None) -> AbMap:
    """H_2(Gamma) -> H_2(G) induced by f."""
    HS = homology(bar_complex(f.source, budget), 2)
    HT = homology(bar_complex(f.target, budget), 2)
    F = chain_map(f, 2)
    imgs = [HT.project(F.apply(z)) for z in HS.cycle_reps]
    return AbMap.from_images(HS.group, HT.group, imgs)


def induced_homology(C_src: ChainComplex, C_tgt: ChainComplex, F: IntMat, n: int) -> AbMap:
    HS, HT = homology(C_src, n), homology(C_tgt, n)
    return AbMap.from_images(HS.group, HT.group, [HT.project(F.apply(z)) for z in HS.cycle_reps])


# ---------------------------------------------------------------------------
# cohomology with finite coefficients


@dataclass
class CohomologyResult:
    group: AbGroup
    coefficients: AbGroup
    cocycle_reps: list[list[AbElt]]  # one value in A per basis element of C_n
    _project: Callable[[list[AbElt]], AbElt] = field(repr=False)

    def project(self, cochain: list[AbElt]) -> AbElt:
        return self._project(cochain)


def _dense(M: IntMat) -> list[list[int]]:
    return M.to_dense()


def _cyclic_cohomology(C: ChainComplex, d: int, n: int):
    """H^n(C; Z/d) as (orders, reps as integer vectors, projection)."""
    N = C.basis_sizes[n]
    up = C.boundaries[n + 1]    # C_{n+1} -> C_n, N x N1
    down = C.boundaries[n]      # C_n -> C_{n-1}
    A = _dense(up)
    diag, U, Ui, _, _ = _snf_dense([list(r) for r in A], N, up.cols, want_u=True, want_v=False)
    r = len(diag)
    k = [d // gcd(diag[i], d) if i < r else 1 for i in range(N)]
    # relations in z-coordinates: rows of down @ U^-1 scaled by 1/k, plus d/k_i e_i
    rel: list[list[int]] = []
    Dn = _dense(down)
    for row in Dn:
        if not any(row):
            continue
        y = [sum(row[l] * Ui[l][i] for l in range(N) if row[l]) for i in range(N)]
        if any(y[i] % k[i] for i in range(N)):
            raise InternalInvariantError("coboundary is not a cocycle")
        rel.append([y[i] // k[i] for i in range(N)])
    for i in range(N):
        rel.append([d // k[i] if j == i else 0 for j in range(N)])
    R = [list(r_) for r_ in rel]
    D, _, _, Q, Qi = _snf_dense(R, len(R), N, want_u=False, want_v=True)
    orders, reps = [], []
    for i, Dii in enumerate(D):
        if Dii > 1:
            z = Qi[i]
            y = [z[j] * k[j] for j in range(N)]
            x = [sum(y[j] * U[j][l] for j in range(N) if y[j]) % d for l in range(N)]
            orders.append((i, Dii))
            reps.append(x)

    def project(x: Sequence[int]) -> list[int]:
        xs = [a % d for a in x]
        chk = [sum(xs[i] * A[i][j] for i in range(N) if xs[i]) % d for j in range(up.cols)]
        if any(chk):
            raise ValueError("not a cocycle")
        y = [sum(xs[l] * Ui[l][i] for l in range(N) if xs[l]) for i in range(N)]
        z = [y[i] // k[i] for i in range(N)]
        zq = [sum(z[j] * Q[j][i] for j in range(N) if z[j]) for i in range(N)]
        return [zq[i] % Dii for i, Dii in orders]

    return [o for _, o in orders], reps, project


def cohomology(C: ChainComplex, A: AbGroup, n: int = 2) -> CohomologyResult:
    """H^n(Hom(C, A)) with explicit cocycle tables (dense; small complexes)."""
    key = ("coh", n, A.factors)
    if key in C._cache:
        return C._cache[key]
    N = C.basis_sizes[n]
    parts = [_cyclic_cohomology(C, d, n) for d in A.factors]
    orders = [o for p in parts for o in p[0]]
    H, T, Tinv = AbGroup.from_orders_with_lifts(orders)
    # old generators: (factor j, local generator t) -> cochain with values in A
    old_reps: list[list[AbElt]] = []
    for j, (_, reps, _) in enumerate(parts):
        for x in reps:
            old_reps.append([tuple(x[b] if jj == j else 0 for jj in range(A.rank)) for b in range(N)])
    new_reps = []
    for i in range(H.rank):
        coeffs = [Tinv[k][i] for k in range(len(orders))]
        rep = [A.zero() for _ in range(N)]
        for c, old in zip(coeffs, old_reps):
            if c:
                rep = [A.add(a, A.scale(c, b)) for a, b in zip(rep, old)]
        new_reps.append(rep)

    def project(cochain: list[AbElt]) -> AbElt:
        old = []
        for j, (_, _, proj) in enumerate(parts):
            old.extend(proj([v[j] for v in cochain]))
        return H.reduce([sum(T[i][k] * old[k] for k in range(len(old))) for i in range(H.rank)])

    res = CohomologyResult(H, A, new_reps, project)
    C._cache[key] = res
    return res


def cohomology_order(C: ChainComplex, A: AbGroup, n: int = 2) -> int:
    """|H^n(C; A)| from the Smith diagonals of d_n and d_{n+1} alone."""
    s = C.cokernel(n + 1).divisors
    t = C.cokernel(n).divisors
    N = C.basis_sizes[n]
    total = 1
    for d in A.factors:
        z = d ** (N - len(s)) * prod(gcd(x, d) for x in s)
        b = d ** len(t) // prod(gcd(x, d) for x in t)
        total *= z // b
    return total


def pair(cochain: Sequence[AbElt], chain: dict[int, int], A: AbGroup) -> AbElt:
    out = A.zero()
    for i, a in chain.items():
        out = A.add(out, A.scale(a, cochain[i]))
    return out


@dataclass
class UCTReport:
    h1: AbGroup
    h2: AbGroup
    cohomology: AbGroup
    ext_order: int
    hom_order: int
    evaluation: AbMap  # H^2(C; A) -> Hom(H_2, A)
    evaluation_surjective: bool
    kernel_is_ext: bool

    @property
    def exact(self) -> bool:
        return self.evaluation_surjective and self.kernel_is_ext


def hom_coordinates(H: AbGroup, A: AbGroup, values: Sequence[AbElt]) -> tuple[AbGroup, AbElt]:
    """Coordinates in Hom(H, A) of the map sending generator i of H to values[i]."""
    orders, coords = [], []
    for i, h in enumerate(H.factors):
        for j, a in enumerate(A.factors):
            g = gcd(h, a)
            step = a // g
            v = values[i][j]
            if v % step:
                raise ValueError("values do not define a homomorphism")
            orders.append(g)
            coords.append(v // step)
    Hom_, T = AbGroup.from_orders(orders)
    return Hom_, Hom_.reduce([sum(T[r][k] * coords[k] for k in range(len(coords))) for r in range(Hom_.rank)])


def universal_coefficients(C: ChainComplex, A: AbGroup) -> UCTReport:
    """0 -> Ext(H_1, A) -> H^2(C; A) -> Hom(H_2, A) -> 0, checked by orders and evaluation."""
    H1, H2 = homology(C, 1), homology(C, 2)
    coh = cohomology(C, A, 2)
    ext = prod(gcd(h, a) for h in H1.group.factors for a in A.factors)
    hom = prod(gcd(h, a) for h in H2.group.factors for a in A.factors)
    imgs = []
    HomG = None
    for rep in coh.cocycle_reps:
        vals = [pair(rep, z, A) for z in H2.cycle_reps]
        HomG, coord = hom_coordinates(H2.group, A, vals)
        imgs.append(coord)
    if HomG is None:
        HomG = hom_coordinates(H2.group, A, [A.zero()] * H2.group.rank)[0]
    ev = AbMap.from_images(coh.group, HomG, imgs)
    return UCTReport(
        h1=H1.group, h2=H2.group, cohomology=coh.group, ext_order=ext, hom_order=hom, evaluation=ev,
        evaluation_surjective=ev.is_surjective() and HomG.order == hom,
        kernel_is_ext=ev.kernel_order() == ext,
    )


# ---------------------------------------------------------------------------
# relative cochains as (c, w) tables


def relative_cochain_from_tables(f: Hom, A: AbGroup, c: Sequence[Sequence[AbElt]], w: Sequence[AbElt]) -> list[AbElt]:
    """Cone 2-cochain (c, -w) as a list over the degree-2 basis of relative_complex(f)."""
    NG, NH = f.target.order, f.source.order
    out = [c[g][h] for g, h in itertools.product(range(1, NG), repeat=2)]
    out += [A.neg(w[x]) for x in range(1, NH)]
    return out


def tables_from_relative_cochain(f: Hom, A: AbGroup, cochain: Sequence[AbElt]):
    NG, NH = f.target.order, f.source.order
    c = [[A.zero()] * NG for _ in range(NG)]
    k = 0
    for g, h in itertools.product(range(1, NG), repeat=2):
        c[g][h] = cochain[k]
        k += 1
    w = [A.zero()] * NH
    for x in range(1, NH):
        w[x] = A.neg(cochain[k])
        k += 1
    return c, w
