"""Universal central f-extensions, the Schur tower, five-term sequences and lifting obstructions."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Sequence

from sympy import factorint

from . import config
from .abelian import AbElt, AbGroup, AbMap, quotient_by_multiple, structure_of_abelian_group
from .bar import (
    bar_complex, cone_map, homology, induced_homology, pair, relative_complex,
)
from .errors import BudgetError, HypothesisError, InternalInvariantError
from .ext import (
    FExtension, RelCocycle2, classify, compatible_maps, enumerate_classes, extension_from_cocycle,
    f_extension_maps, lifts, solve_relative_coboundary,
)
from .grp import (
    Group, Hom, Subgroup, commutator_subgroup, corestrict, derived_subgroup, identity_hom, image,
    is_ab_surjective, join, kernel, normal_closure, normal_subgroups, quotient, subgroup_as_group,
    sylow_subgroup, whole,
)
from .zmat import solve_mod


# ---------------------------------------------------------------------------
# relative H_1 and H_2 by the cheapest applicable method


def relative_h1(f: Hom) -> AbGroup:
    """H_1(G, Gamma) = G / [G,G] f(Gamma), the cokernel of f_ab."""
    G = f.target
    N = join(G, derived_subgroup(G), normal_closure(G, image(f).members))
    Q, _ = quotient(G, N)
    return structure_of_abelian_group(Q)[0]


def _bar_fits(order: int, budget: config.Budget) -> bool:
    return order <= budget.effective_bar_cap


def sylow_h2_vanishes(G: Group, budget: config.Budget | None = None) -> bool | None:
    """True if H_2(P) = 0 for a Sylow P at every prime, which forces H_2(G) = 0.

    The p-part of H_2(G) is a quotient of H_2(P) (corestriction after
    restriction is multiplication by the prime-to-p index).  None when some
    Sylow subgroup has nonzero H_2 or is too large for a bar complex.
    """
    budget = config.get(budget)
    for p in sorted(factorint(G.order)):
        P, _ = subgroup_as_group(sylow_subgroup(G, p))
        if not _bar_fits(P.order, budget):
            return None
        if not homology(bar_complex(P, budget), 2).group.is_trivial():
            return None
    return True


def relative_h2(f: Hom, budget: config.Budget | None = None) -> tuple[AbGroup, str]:
    """(H_2(G, Gamma), method) with method in {"hopf", "cone", "sylow"}."""
    budget = config.get(budget)
    if f.is_surjective():
        return hopf_surjective(f)[0], "hopf"
    G, Gam = f.target, f.source
    if _bar_fits(G.order, budget) and _bar_fits(Gam.order, budget):
        return homology(relative_complex(f, budget), 2).group, "cone"
    if Gam.order == 1 and sylow_h2_vanishes(G, budget):
        return AbGroup(()), "sylow"
    raise BudgetError(
        f"H_2 of a map into a group of order {G.order} is beyond the bar cap {budget.effective_bar_cap}"
    )


# ---------------------------------------------------------------------------
# universal extensions


def hopf_surjective(f: Hom) -> tuple[AbGroup, Hom, FExtension]:
    """K/[K,Gamma] -> Gamma/[K,Gamma] -> G with the quotient map as structure map."""
    if not f.is_surjective():
        raise HypothesisError("the Hopf description needs a surjective f")
    Gam, G = f.source, f.target
    K = kernel(f)
    KG = commutator_subgroup(Gam, K, whole(Gam))
    U, q = quotient(Gam, KG)
    members = sorted({q(k) for k in K.members})
    A, _, st = structure_of_abelian_group(U, members)
    pi_img = [-1] * U.order
    for x in range(Gam.order):
        pi_img[q(x)] = f(x)
    pi = Hom(U, G, pi_img, check=False)
    X = FExtension(A, U, tuple(st.table()), pi, f=f, psi=q)
    return A, q, X


def universal_cocycle(f: Hom, budget: config.Budget | None = None) -> RelCocycle2:
    """The relative cocycle pairing to the identity of H_2(G, Gamma), by congruence solving."""
    budget = config.get(budget)
    C = relative_complex(f, budget)
    H = homology(C, 2)
    A = H.group
    G, Gam = f.target, f.source
    N, M = G.order, Gam.order
    n2 = C.basis_sizes[2]
    cocycle_rows = [col for col in C.boundaries[3].columns() if col]
    phis = []
    for j, d in enumerate(A.factors):
        rows = cocycle_rows + list(H.cycle_reps)
        rhs = [0] * len(cocycle_rows) + [1 if i == j else 0 for i in range(A.rank)]
        sol = solve_mod(rows, d, rhs, n2)
        if sol is None:
            raise InternalInvariantError("no cocycle pairs to the identity; sign convention fault")
        phis.append(sol)
    nc = (N - 1) ** 2

    def val(k: int) -> AbElt:
        return A.reduce([phis[j][k] for j in range(A.rank)])

    c = [[A.zero()] * N for _ in range(N)]
    for g in range(1, N):
        for h in range(1, N):
            c[g][h] = val((g - 1) * (N - 1) + h - 1)
    w = [A.zero()] + [A.neg(val(nc + x - 1)) for x in range(1, M)]
    z = RelCocycle2.make(f, A, c, w)
    cone = z.cone_cochain()
    for i, zi in enumerate(H.cycle_reps):
        if pair(cone, zi, A) != A.gen(i):
            raise InternalInvariantError("universal cocycle does not pair to the identity")
    return z


def _cone_universal(f: Hom, budget: config.Budget) -> FExtension:
    return extension_from_cocycle(universal_cocycle(f, budget))


def check_mutually_inverse(X: FExtension, Y: FExtension, budget: config.Budget | None = None) -> None:
    """Unique maps both ways composing to the identities, else InternalInvariantError."""
    xy = f_extension_maps(X, Y, budget)
    yx = f_extension_maps(Y, X, budget)
    if len(xy) != 1 or len(yx) != 1:
        raise InternalInvariantError(f"expected unique maps, found {len(xy)} and {len(yx)}")
    a, b = xy[0], yx[0]
    if any(b(a(x)) != x for x in range(X.E.order)) or any(a(b(y)) != y for y in range(Y.E.order)):
        raise InternalInvariantError("maps between universal extensions are not inverse")


def universal_extension_with_method(f: Hom, budget: config.Budget | None = None,
                                    verify: bool = False) -> tuple[FExtension, str]:
    budget = config.get(budget)
    if not is_ab_surjective(f):
        raise HypothesisError("f_ab is not surjective; no universal central f-extension")
    if f.is_surjective():
        X = hopf_surjective(f)[2]
        if verify:
            check_mutually_inverse(X, _cone_universal(f, budget), budget)
        return X, "hopf"
    return _cone_universal(f, budget), "cone"


def universal_extension(f: Hom, budget: config.Budget | None = None, verify: bool = False) -> FExtension:
    """The universal central f-extension (U, eta) with kernel H_2(G, Gamma)."""
    return universal_extension_with_method(f, budget, verify)[0]


# ---------------------------------------------------------------------------
# the tower


@dataclass
class Tower:
    f: Hom
    stages: list[FExtension]
    stabilized: bool
    composite: Hom          # U_N -> G
    stop_reason: str        # "stabilized", "max_steps" or "order_cap"
    methods: list[str] = field(default_factory=list)

    @property
    def top(self) -> Group:
        return self.stages[-1].E if self.stages else self.f.target

    @property
    def structure_map(self) -> Hom:
        return self.stages[-1].psi if self.stages else self.f

    @property
    def kernels(self) -> list[AbGroup]:
        return [X.A for X in self.stages]


def schur_tower(f: Hom, max_steps: int = 8, budget: config.Budget | None = None) -> Tower:
    """Iterate universal extensions over the original Gamma until H_2(U_n, Gamma) = 0."""
    budget = config.get(budget)
    if not is_ab_surjective(f):
        raise HypothesisError("the tower needs f_ab surjective")
    eta = f
    comp = identity_hom(f.target)
    stages: list[FExtension] = []
    methods: list[str] = []
    reason = "max_steps"
    for step in range(max_steps + 1):
        H, method = relative_h2(eta, budget)
        methods.append(method)
        if H.is_trivial():
            reason = "stabilized"
            break
        if step == max_steps:
            break
        if eta.target.order * H.order > budget.tower_order_cap:
            reason = "order_cap"
            break
        X = universal_extension(eta, budget)
        if X.A != H:
            raise InternalInvariantError("stage kernel differs from H_2(U_n, Gamma)")
        stages.append(X)
        comp = X.pi.then(comp)
        eta = X.psi
        if not is_ab_surjective(eta):
            raise InternalInvariantError("structure map of a universal extension is not ab-surjective")
    return Tower(f, stages, reason == "stabilized", comp, reason, methods)


# ---------------------------------------------------------------------------
# five-term sequence


@dataclass
class FiveTermReport:
    groups: dict[str, AbGroup]
    alpha: AbMap     # H_2(E, Gamma) -> H_2(G, Gamma)
    boundary: AbMap  # H_2(G, Gamma) -> A
    beta: AbMap      # A -> H_1(E, Gamma)
    gamma: AbMap     # H_1(E, Gamma) -> H_1(G, Gamma)
    exact_at: list[bool]

    @property
    def exact(self) -> bool:
        return all(self.exact_at)

    @property
    def boundary_iso(self) -> bool:
        return self.boundary.is_isomorphism()


def _exact_pair(first: AbMap, second: AbMap) -> bool:
    return first.compose(second).is_zero() and first.image_order() == second.kernel_order()


def five_term_check(X: FExtension, budget: config.Budget | None = None) -> FiveTermReport:
    """H_2(E,Gamma) -> H_2(G,Gamma) -> A -> H_1(E,Gamma) -> H_1(G,Gamma) -> 0."""
    budget = config.get(budget)
    CE = relative_complex(X.psi, budget)
    CG = relative_complex(X.f, budget)
    H2E, H2G = homology(CE, 2), homology(CG, 2)
    H1E = homology(CE, 1)
    A = X.A
    alpha = induced_homology(CE, CG, cone_map(X.pi, X.psi, X.f, 2), 2)
    phi = classify(X).cone_cochain()
    boundary = AbMap.from_images(H2G.group, A, [pair(phi, z, A) for z in H2G.cycle_reps])
    beta = AbMap.from_images(A, H1E.group, [H1E.project({X.iota_of(A.gen(i)) - 1: 1}) for i in range(A.rank)])
    gamma = induced_homology(CE, CG, cone_map(X.pi, X.psi, X.f, 1), 1)
    exact = [
        True,  # nothing maps into H_2(E, Gamma) in this sequence
        _exact_pair(alpha, boundary),
        _exact_pair(boundary, beta),
        _exact_pair(beta, gamma),
        gamma.is_surjective(),
    ]
    groups = {"H2(E,Gamma)": H2E.group, "H2(G,Gamma)": H2G.group, "A": A,
              "H1(E,Gamma)": H1E.group, "H1(G,Gamma)": homology(CG, 1).group}
    return FiveTermReport(groups, alpha, boundary, beta, gamma, exact)


# ---------------------------------------------------------------------------
# obstructions


@dataclass
class ObstructionReport:
    kind: str                 # "commuting-pair", "element-order" or "hom-lift"
    value: Any
    vanishes: bool
    witness: Any = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": _jsonable(self.value), "vanishes": self.vanishes,
                "witness": _jsonable(self.witness), **{k: _jsonable(v) for k, v in self.details.items()}}


def _jsonable(v):
    if isinstance(v, AbGroup):
        return list(v.factors)
    if isinstance(v, Hom):
        return list(v.image)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def commuting_pair_obstruction(X: FExtension, x: int, y: int, resamples: int = 3,
                               seed: int | None = None) -> ObstructionReport:
    """iota^-1 of the commutator of preimages of a commuting pair."""
    G, E = X.G, X.E
    if G.m(x, y) != G.m(y, x):
        raise HypothesisError(f"elements {x} and {y} do not commute")
    s = X.section()
    value = X.iota_inv(E.commutator(s[x], s[y]))
    rng = random.Random(config.DEFAULT.seed if seed is None else seed)
    fx, fy = X.fiber(x), X.fiber(y)
    for _ in range(resamples):
        a, b = rng.choice(fx), rng.choice(fy)
        if X.iota_inv(E.commutator(a, b)) != value:
            raise InternalInvariantError("commutator of lifts depends on the lifts")
    witness = next(((a, b) for a in fx for b in fy if E.m(a, b) == E.m(b, a)), None)
    vanishes = value == X.A.zero()
    if vanishes != (witness is not None):
        raise InternalInvariantError("commuting-lift search disagrees with the commutator value")
    return ObstructionReport("commuting-pair", value, vanishes, witness)


def order_lifting_obstruction(X: FExtension, x: int, resamples: int = 3,
                              seed: int | None = None) -> ObstructionReport:
    """Class of iota^-1(x~^n) in A/nA, n the order of x."""
    G, E, A = X.G, X.E, X.A
    n = G.element_order(x)
    Q, proj = quotient_by_multiple(A, n)
    s = X.section()
    value = proj(X.iota_inv(E.power(s[x], n)))
    rng = random.Random(config.DEFAULT.seed if seed is None else seed)
    fib = X.fiber(x)
    for _ in range(resamples):
        if proj(X.iota_inv(E.power(rng.choice(fib), n))) != value:
            raise InternalInvariantError("order obstruction depends on the lift")
    witness = next((a for a in fib if E.element_order(a) == n), None)
    vanishes = value == Q.zero()
    if vanishes != (witness is not None):
        raise InternalInvariantError("order-lift search disagrees with the obstruction value")
    return ObstructionReport("element-order", value, vanishes, witness,
                             {"order": n, "quotient": Q, "lift_orders": sorted({E.element_order(a) for a in fib})})


def pullback_cocycle(g: Hom, X: FExtension) -> RelCocycle2:
    """The ordinary cocycle c(g a, g b) on Gamma_0 (as a cocycle over 1 -> Gamma_0)."""
    from .grp import trivial_group, trivial_hom

    z = classify(X)
    S = g.source
    c = [[z.c[g(a)][g(b)] for b in range(S.order)] for a in range(S.order)]
    t = trivial_hom(trivial_group(), S)
    return RelCocycle2.make(t, z.A, c, [z.A.zero()])


def h2_vanishing_test(g: Hom, X: FExtension, budget: config.Budget | None = None) -> ObstructionReport:
    """Does the class of X pull back to zero along g: Gamma_0 -> G?  Then search for a lift."""
    budget = config.get(budget)
    if g.target is not X.G and not g.target.same_table(X.G):
        raise HypothesisError("g does not land in the base of the extension")
    zc = pullback_cocycle(g, X)
    coboundary = solve_relative_coboundary(zc) is not None
    values = []
    if _bar_fits(g.source.order, budget):
        H2 = homology(bar_complex(g.source, budget), 2)
        cone = zc.cone_cochain()
        values = [pair(cone, z, X.A) for z in H2.cycle_reps]
    found = lifts(g, X, budget, limit=1)
    witness = found[0] if found else None
    if coboundary != (witness is not None):
        raise InternalInvariantError("lift search disagrees with the pulled-back cocycle")
    return ObstructionReport("hom-lift", values, coboundary, witness, {"coboundary": coboundary})


# ---------------------------------------------------------------------------
# maximal ab-surjective target


@dataclass
class TargetResult:
    B: Subgroup | None
    hom: Hom | None             # Gamma -> B as a group
    inclusion: Hom | None       # B -> G
    maximal: list[Subgroup]
    ambiguous: bool


def maximal_ab_surjective_target(f: Hom, budget: config.Budget | None = None) -> TargetResult:
    G = f.target
    im = image(f)
    passers = []
    for N in normal_subgroups(G, budget):
        if not im.issubset(N):
            continue
        h, _, _ = corestrict(f, N)
        if is_ab_surjective(h):
            passers.append(N)
    maximal = [N for N in passers if not any(N != M and N.issubset(M) for M in passers)]
    J = join(G, *maximal)
    if J in passers:
        h, _, inc = corestrict(f, J)
        return TargetResult(J, h, inc, maximal, False)
    return TargetResult(None, None, None, maximal, True)


# ---------------------------------------------------------------------------
# universality checks


@dataclass
class UniversalityReport:
    unique_maps_from_U: bool
    u_infinity_acyclic: bool
    initial: bool
    terminal: bool
    counts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.unique_maps_from_U and self.u_infinity_acyclic and self.initial and self.terminal


def terminal_samples(f: Hom, budget: config.Budget | None = None) -> list[tuple[Group, Hom, Hom]]:
    """Factorizations Gamma -> Gamma/N -> G with N <= ker f and N = [N, Gamma]; low-dimensionally acyclic."""
    if not f.is_surjective():
        return []
    Gam = f.source
    K = kernel(f)
    out = []
    for N in normal_subgroups(Gam, budget):
        if not N.issubset(K) or commutator_subgroup(Gam, N, whole(Gam)) != N:
            continue
        M, q = quotient(Gam, N)
        down = [-1] * M.order
        for x in range(Gam.order):
            down[q(x)] = f(x)
        out.append((M, Hom(M, f.target, down, check=False), q))
    return out


def universality_suite(f: Hom, coefficients: Sequence[AbGroup] = (AbGroup((2,)), AbGroup((3,)), AbGroup((4,)), AbGroup((2, 2))),
                       budget: config.Budget | None = None, max_samples: int = 6) -> UniversalityReport:
    budget = config.get(budget)
    U = universal_extension(f, budget)
    counts: dict[str, int] = {"classes": 0, "hypercentral": 0, "terminal": 0}
    # (a) unique map from U to every class
    ok_a = True
    in_budget = f.target.order <= budget.ext_group_cap and f.source.order <= budget.ext_group_cap
    first_stage: list[FExtension] = []
    for A in coefficients if in_budget else ():
        if A.order > budget.ext_coeff_cap:
            continue
        for X in enumerate_classes(f, A, budget):
            counts["classes"] += 1
            ok_a &= len(f_extension_maps(U, X, budget)) == 1
            first_stage.append(X)
    # (b) the top of the tower is low-dimensionally acyclic
    T = schur_tower(f, budget=budget)
    eta = T.structure_map
    ok_b = T.stabilized and relative_h1(eta).is_trivial() and relative_h2(eta, budget)[0].is_trivial()
    Uinf = T.top
    # (c) initial among hypercentral extensions of at most two central stages
    ok_c = True
    samples: list[tuple[Group, Hom, Hom]] = [(X.E, X.pi, X.psi) for X in first_stage[:max_samples]]
    for X in first_stage[:max_samples]:
        if X.E.order > budget.ext_group_cap:
            continue
        for A in coefficients[:2]:
            for Y in enumerate_classes(X.psi, A, budget)[:2]:
                if Y.E.order <= 128:
                    samples.append((Y.E, Y.pi.then(X.pi), Y.psi))
    for E, p, s in samples:
        counts["hypercentral"] += 1
        ok_c &= len(compatible_maps(Uinf, T.composite, eta, E, p, s, budget)) == 1
    # (d) terminal among low-dimensionally acyclic factorizations
    ok_d = True
    for M, p, s in terminal_samples(f, budget) + [(Uinf, T.composite, eta)]:
        counts["terminal"] += 1
        ok_d &= len(compatible_maps(M, p, s, Uinf, T.composite, eta, budget)) == 1
    return UniversalityReport(ok_a, ok_b, ok_c, ok_d, counts)
