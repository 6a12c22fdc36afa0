"""Tabulate Schur towers for the quotient maps of small groups."""

from __future__ import annotations

import argparse

from relext.fixtures import surjections
from relext.grp import is_ab_surjective
from relext.universal import schur_tower


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=16)
    args = ap.parse_args()
    print(f"{'map':<32} {'|G|':>4} {'kernels':<20} {'|U_inf|':>8}  stop")
    for name, f in surjections(args.max_order):
        if not is_ab_surjective(f):
            continue
        T = schur_tower(f)
        kernels = " ".join("x".join(map(str, A.factors)) or "1" for A in T.kernels) or "-"
        print(f"{name:<32} {f.target.order:>4} {kernels:<20} {T.top.order:>8}  {T.stop_reason}")


if __name__ == "__main__":
    main()
