"""Named permutation groups used by fixtures and the CLI."""

from __future__ import annotations

from .errors import ParseError
from .grp import Group, group_from_permutations

NAMES = ("trivial", "cyclic:n", "dihedral:n", "quaternion:8", "sym:n", "alt:n", "klein")


def perm_from_cycles(degree: int, *cycles: tuple[int, ...]) -> tuple[int, ...]:
    p = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            p[a] = b
    return tuple(p)


def _quaternion_generators() -> tuple[int, list[tuple[int, ...]]]:
    # units 1, i, j, k, -1, -i, -j, -k; right multiplication on the 8 units
    table = {  # basis product, (sign, basis) with basis 0..3 = 1, i, j, k
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def idx(sign, b):
        return b if sign > 0 else b + 4

    def right(u):
        perm = []
        for x in range(8):
            sx, bx = (1, x) if x < 4 else (-1, x - 4)
            s, b = table[bx, u]
            perm.append(idx(sx * s, b))
        return tuple(perm)

    return 8, [right(1), right(2)]


def named_generators(name: str) -> tuple[int, list[tuple[int, ...]]]:
    """(degree, generators) for a catalogue name such as 'dihedral:4'."""
    base, _, arg = name.partition(":")
    try:
        n = int(arg) if arg else None
    except ValueError:
        raise ParseError(f"bad group parameter in {name!r}") from None
    if base == "trivial" and n is None:
        return 1, []
    if base == "klein" and n is None:
        return 4, [perm_from_cycles(4, (0, 1), (2, 3)), perm_from_cycles(4, (0, 2), (1, 3))]
    if base == "quaternion" and n == 8:
        return _quaternion_generators()
    if n is None or n < 1:
        raise ParseError(f"unknown or unparametrized group {name!r}; catalogue: {', '.join(NAMES)}")
    if base == "cyclic":
        return n, ([perm_from_cycles(n, tuple(range(n)))] if n > 1 else [])
    if base == "dihedral":
        if n == 1:
            return 2, [perm_from_cycles(2, (0, 1))]
        if n == 2:
            return 4, [perm_from_cycles(4, (0, 1), (2, 3)), perm_from_cycles(4, (0, 2), (1, 3))]
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        return n, [rot, ref]
    if base == "sym":
        if n == 1:
            return 1, []
        if n == 2:
            return 2, [perm_from_cycles(2, (0, 1))]
        return n, [perm_from_cycles(n, tuple(range(n))), perm_from_cycles(n, (0, 1))]
    if base == "alt":
        if n <= 2:
            return max(n, 1), []
        if n == 3:
            return 3, [perm_from_cycles(3, (0, 1, 2))]
        long = tuple(range(n)) if n % 2 else tuple(range(1, n))
        return n, [perm_from_cycles(n, long), perm_from_cycles(n, (0, 1, 2))]
    raise ParseError(f"unknown group {name!r}; catalogue: {', '.join(NAMES)}")


def named_group(name: str, budget=None) -> Group:
    G, _ = named_group_with_perms(name, budget)
    return G


def named_group_with_perms(name: str, budget=None) -> tuple[Group, list[tuple[int, ...]]]:
    degree, gens = named_generators(name)
    return group_from_permutations(degree, gens, budget)
