from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Budget:
    """Size caps and brute-force budgets.

    Exceeding any of these raises :class:`relext.errors.BudgetError`; nothing
    is ever silently sampled or truncated.
    """

    order_cap: int = 10_000          # permutation closure / tower groups
    assoc_exhaustive_cap: int = 256  # above this, associativity is sampled
    assoc_samples: int = 100_000
    subgroup_enum_cap: int = 512     # subgroup / normal subgroup enumeration
    bar_cap: int = 32                # bar complexes without the slow flag
    bar_cap_slow: int = 64
    slow: bool = False
    ext_group_cap: int = 8           # enumerate_classes: |G|, |Gamma| <= 8, |A| <= 4
    ext_coeff_cap: int = 4
    cocycle_enum_cap: int = 1 << 18  # relative cocycles visited by the brute force
    hom_search_cap: int = 512        # |E_X| in f_extension_maps
    lift_search_cap: int = 64        # |Gamma_0| in lift searches
    baer_oracle_cap: int = 64        # group-level Baer sum oracle, |G|*|A|
    tower_order_cap: int = 10_000
    seed: int = 0

    @property
    def effective_bar_cap(self) -> int:
        return self.bar_cap_slow if self.slow else self.bar_cap

    def with_(self, **kw) -> "Budget":
        return replace(self, **kw)


DEFAULT = Budget()


def get(budget: Budget | None) -> Budget:
    return DEFAULT if budget is None else budget
