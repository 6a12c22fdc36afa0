"""Build the universal central extension of A5 and probe its lifting obstructions."""

from __future__ import annotations

import time

from relext.fixtures import a5_schur, klein_in_a5
from relext.grp import is_perfect
from relext.universal import commuting_pair_obstruction, h2_vanishing_test, order_lifting_obstruction


def main() -> None:
    t0 = time.perf_counter()
    f, X, method = a5_schur()
    print(f"H2(A5) = Z/{X.A.factors[0]} via {method}; |U| = {X.E.order}, perfect = {is_perfect(X.E)}"
          f"  ({time.perf_counter() - t0:.0f}s)")
    G, (x, y), inc = klein_in_a5()
    cp = commuting_pair_obstruction(X, x, y)
    print(f"Klein pair (0 1)(2 3), (0 2)(1 3): obstruction {list(cp.value)}")
    print(f"Klein subgroup lifts: {h2_vanishing_test(inc, X).vanishes}")
    by_order: dict[int, set[bool]] = {}
    for z in range(1, G.order):
        by_order.setdefault(G.element_order(z), set()).add(order_lifting_obstruction(X, z).vanishes)
    for n, v in sorted(by_order.items()):
        print(f"elements of order {n} lift to order {n}: {sorted(v)}")


if __name__ == "__main__":
    main()
