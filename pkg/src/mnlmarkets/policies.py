"""Online assortment policies under inventory constraints.

A policy sees only the catalog qualities and which items are still in stock;
it never knows the number of buyers or the initial inventories. An item is
"heavy" for threshold lam when offering it alone captures at least a lam
fraction of the market, i.e. its solo equilibrium demand q_i({i}) >= lam.
Because items are sorted by quality, the heavy set is always a prefix.

Three policies are provided:

* hybrid: sell heavy items one at a time in quality order, then bundle all
  remaining light items;
* greedy: always offer everything still in stock;
* modified hybrid: like hybrid, but an item's heaviness is discounted by an
  exponential weight of its remaining inventory fraction, so nearly depleted
  items get demoted into the bundle and saved for later sales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .equilibrium import DomainError, ItemCatalog, solo_revenue_for_quality

PHASE_HEAVY = "phase1"
PHASE_LIGHT = "phase2"
PHASE_GREEDY = "greedy"
PHASE_MODIFIED = "modified"


@dataclass(frozen=True)
class OnlineInstance:
    """One online assortment problem: catalog, buyer count, heaviness threshold.

    The threshold nominally lives in (1/2, 1); the boundary value 1/2 is
    accepted because it is the standard experimental setting.
    """

    catalog: ItemCatalog
    m: int
    threshold: float

    def __post_init__(self):
        if self.m < 0:
            raise DomainError(f"buyer count must be nonnegative, got {self.m}")
        if not 0.5 <= self.threshold < 1.0:
            raise DomainError(f"threshold must lie in [0.5, 1), got {self.threshold}")


@dataclass
class InventoryState:
    """Mutable per-episode state: remaining units per item and the clock."""

    remaining: list[int]
    t: int = 0

    @classmethod
    def fresh(cls, instance: OnlineInstance) -> "InventoryState":
        return cls(remaining=list(instance.catalog.inventories), t=0)


@dataclass(frozen=True)
class PolicyDecision:
    """An assortment to display plus the phase that produced it."""

    assortment: tuple[int, ...]
    phase: str


@lru_cache(maxsize=1024)
def solo_demands(catalog: ItemCatalog) -> tuple[float, ...]:
    """Solo equilibrium demand q_i({i}) per item, nonincreasing in position."""
    out = []
    for theta in catalog.qualities:
        r = solo_revenue_for_quality(theta)
        out.append(r / (1.0 + r))
    return tuple(out)


def classify_heavy(catalog: ItemCatalog, threshold: float) -> tuple[int, ...]:
    """Positions of heavy items: q_i({i}) >= threshold. Always a prefix."""
    if not 0.5 <= threshold < 1.0:
        raise DomainError(f"threshold must lie in [0.5, 1), got {threshold}")
    demands = solo_demands(catalog)
    h = 0
    while h < len(demands) and demands[h] >= threshold:
        h += 1
    return tuple(range(h))


def hybrid_next(instance: OnlineInstance, state: InventoryState) -> PolicyDecision:
    """Two-phase rule: heaviest available heavy item alone, else light bundle."""
    heavy = classify_heavy(instance.catalog, instance.threshold)
    for i in heavy:
        if state.remaining[i] > 0:
            return PolicyDecision(assortment=(i,), phase=PHASE_HEAVY)
    h = len(heavy)
    light = tuple(
        i for i in range(h, len(instance.catalog)) if state.remaining[i] > 0
    )
    return PolicyDecision(assortment=light, phase=PHASE_LIGHT)


def greedy_all_next(state: InventoryState) -> PolicyDecision:
    """Offer every item that still has stock."""
    available = tuple(i for i, left in enumerate(state.remaining) if left > 0)
    return PolicyDecision(assortment=available, phase=PHASE_GREEDY)


def exponential_weight(x: float) -> float:
    """Inventory-balancing weight e/(e-1) * (1 - e^-x) on [0, 1]."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"weight argument must lie in [0, 1], got {x}")
    return math.e / (math.e - 1.0) * -math.expm1(-x)


def modified_hybrid_next(instance: OnlineInstance, state: InventoryState) -> PolicyDecision:
    """Hybrid rule re-thresholded on inventory-discounted heaviness.

    Item i's relative heaviness at time t is
    exponential_weight(remaining_i / c_i) * q_i({i}); items at or above the
    threshold are treated as heavy and the heaviest of them is offered alone,
    everything else in stock gets bundled. With full inventories the weight
    is 1 and the decision coincides with the base hybrid rule.
    """
    demands = solo_demands(instance.catalog)
    capacities = instance.catalog.inventories
    available = [i for i, left in enumerate(state.remaining) if left > 0]
    best = None
    best_rel = -1.0
    for i in available:
        rel = exponential_weight(state.remaining[i] / capacities[i]) * demands[i]
        if rel >= instance.threshold and rel > best_rel:
            best, best_rel = i, rel
    if best is not None:
        return PolicyDecision(assortment=(best,), phase=PHASE_MODIFIED)
    return PolicyDecision(assortment=tuple(available), phase=PHASE_MODIFIED)
