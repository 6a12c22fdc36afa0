"""Deterministic fixture families built from the named catalogue."""

from __future__ import annotations

from functools import lru_cache

from . import config
from .catalogue import named_group, named_group_with_perms, perm_from_cycles
from .grp import (
    Group, Hom, direct_product, hom_from_generator_images, identity_hom, is_ab_surjective, normal_subgroups,
    quotient, subgroup_generated, subgroup_as_group, trivial_group, trivial_hom,
)

SMALL_NAMES = ("trivial", "cyclic:2", "cyclic:3", "cyclic:4", "klein", "sym:3", "dihedral:4", "quaternion:8",
               "cyclic:6", "cyclic:8")
SURJECTION_SOURCES = ("cyclic:4", "cyclic:6", "cyclic:8", "klein", "sym:3", "dihedral:4", "quaternion:8",
                      "dihedral:5", "alt:4", "dihedral:6", "dihedral:8", "sym:4", "dihedral:12")


@lru_cache(maxsize=None)
def group(name: str) -> Group:
    """Named group, or 'A*B' for a direct product of two named groups."""
    if "*" in name:
        a, b = name.split("*")
        return direct_product(group(a), group(b))[0]
    return named_group(name)


def quotient_maps(G: Group) -> list[Hom]:
    return [quotient(G, N)[1] for N in normal_subgroups(G)]


@lru_cache(maxsize=None)
def surjections(max_order: int = 24) -> tuple[tuple[str, Hom], ...]:
    """All quotient maps of catalogue groups and small products of order <= max_order."""
    names = list(SURJECTION_SOURCES) + ["cyclic:2*cyclic:4", "cyclic:2*klein", "cyclic:2*quaternion:8",
                                        "cyclic:3*sym:3", "cyclic:2*alt:4", "cyclic:4*cyclic:4"]
    out = []
    for name in names:
        G = group(name)
        if G.order > max_order:
            continue
        for k, q in enumerate(quotient_maps(G)):
            out.append((f"{name}/N{k}", q))
    return tuple(out)


def _inclusion(src: str, tgt: str, x: int) -> Hom:
    return hom_from_generator_images(group(src), group(tgt), [1], [x])


def _element_of_order(G: Group, n: int, pred=None) -> int:
    return next(x for x in range(G.order) if G.element_order(x) == n and (pred is None or pred(x)))


@lru_cache(maxsize=None)
def small_maps() -> tuple[tuple[str, Hom], ...]:
    """Maps between groups of order <= 8: surjections, inclusions and maps from or to 1."""
    out = []
    T = trivial_group()
    for name in ("cyclic:2", "cyclic:4", "klein", "sym:3", "dihedral:4", "quaternion:8"):
        G = group(name)
        out.append((f"1->{name}", trivial_hom(T, G)))
        out.append((f"{name}->1", trivial_hom(G, T)))
        out.append((f"id:{name}", identity_hom(G)))
    for name in ("cyclic:4", "klein", "sym:3", "dihedral:4", "quaternion:8", "cyclic:8", "cyclic:6"):
        for k, q in enumerate(quotient_maps(group(name))):
            if 1 < q.target.order < q.source.order:
                out.append((f"{name}/N{k}", q))
    c4 = group("cyclic:4")
    out.append(("Z2->Z4", _inclusion("cyclic:2", "cyclic:4", 2)))
    out.append(("Z2->S3", _inclusion("cyclic:2", "sym:3", _element_of_order(group("sym:3"), 2))))
    out.append(("Z3->S3", _inclusion("cyclic:3", "sym:3", _element_of_order(group("sym:3"), 3))))
    out.append(("Z4->Q8", _inclusion("cyclic:4", "quaternion:8", _element_of_order(group("quaternion:8"), 4))))
    D = group("dihedral:4")
    refl = _element_of_order(D, 2, lambda x: any(D.m(D.m(x, y), x) != y for y in range(8)))
    out.append(("Z2->D4", _inclusion("cyclic:2", "dihedral:4", refl)))
    out.append(("Z4->D4", _inclusion("cyclic:4", "dihedral:4", _element_of_order(D, 4))))
    out.append(("Z4->Z2", hom_from_generator_images(c4, group("cyclic:2"), [1], [1])))
    return tuple(out)


def ab_surjective_small_maps() -> list[tuple[str, Hom]]:
    return [(n, f) for n, f in small_maps() if is_ab_surjective(f)]


def klein_in_a5() -> tuple[Group, tuple[int, int], Hom]:
    """A5, the pair x = (0 1)(2 3), y = (0 2)(1 3), and the inclusion of the Klein group they generate."""
    G = group("alt:5")
    _, perms = named_group_with_perms("alt:5")
    x = perms.index(perm_from_cycles(5, (0, 1), (2, 3)))
    y = perms.index(perm_from_cycles(5, (0, 2), (1, 3)))
    V, inc = subgroup_as_group(subgroup_generated(G, [x, y]))
    return G, (x, y), inc


SLOW = config.Budget(slow=True)


@lru_cache(maxsize=None)
def a5_schur() -> tuple[Hom, object, str]:
    """(1 -> A5, its universal extension, method); minutes of bar-complex work, computed once per process."""
    from .universal import universal_extension_with_method

    f = trivial_hom(trivial_group(), group("alt:5"))
    X, method = universal_extension_with_method(f, SLOW)
    return f, X, method
