"""Single-buyer Bertrand price competition under multinomial-logit demand.

Each seller i carries one item with quality theta_i. Given a displayed
assortment S, sellers post prices simultaneously and the buyer picks item i
with probability

    q_i = exp(theta_i - p_i) / (1 + sum_j exp(theta_j - p_j)),

the extra 1 being the no-purchase option. The price game has a unique pure
Nash equilibrium with p_i = 1/(1 - q_i), and the equilibrium demands reduce
to a one-dimensional fixed point: q_i = V(q0 * exp(theta_i - 1)), where V
inverts y * exp(y/(1-y)) = x and the no-purchase share q0 solves

    sum_{i in S} V(q0 * exp(theta_i - 1)) = 1 - q0.

This module provides that machinery plus the raw (out-of-equilibrium) MNL
demand, the price-game potential, best responses, and two closed-form
variants: production costs that shift prices down, and the quality that makes
a solo item earn a prescribed revenue.

All functions are pure; qualities may be any finite reals (negative allowed),
and the exponential sums are evaluated with a max-exponent shift so large
qualities do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SolverError(RuntimeError):
    """An iterative solve failed to reach its tolerance."""


_MAX_ITER = 200


@dataclass(frozen=True)
class ItemCatalog:
    """The seller side of a market: qualities, inventories, optional unit costs.

    Items are stored sorted by descending quality (ties keep input order) and
    ``order[k]`` gives the original input index of the item at sorted
    position k. All other modules address items by sorted position.
    """

    qualities: tuple[float, ...]
    inventories: tuple[int, ...]
    costs: tuple[float, ...] | None = None
    order: tuple[int, ...] = field(default=())

    def __init__(self, qualities, inventories, costs=None):
        qualities = [float(t) for t in qualities]
        inventories = [int(c) for c in inventories]
        n = len(qualities)
        if n < 1:
            raise DomainError("catalog needs at least one item")
        if len(inventories) != n:
            raise DomainError("qualities and inventories must have equal length")
        if any(not math.isfinite(t) for t in qualities):
            raise DomainError("qualities must be finite")
        if any(c < 1 for c in inventories):
            raise DomainError("inventories must be >= 1")
        if costs is not None:
            costs = [float(b) for b in costs]
            if len(costs) != n:
                raise DomainError("costs must match the number of items")
            if any(b < 0 or not math.isfinite(b) for b in costs):
                raise DomainError("costs must be finite and nonnegative")
        order = sorted(range(n), key=lambda k: (-qualities[k], k))
        object.__setattr__(self, "qualities", tuple(qualities[k] for k in order))
        object.__setattr__(self, "inventories", tuple(inventories[k] for k in order))
        object.__setattr__(
            self, "costs", None if costs is None else tuple(costs[k] for k in order)
        )
        object.__setattr__(self, "order", tuple(order))

    def __len__(self) -> int:
        return len(self.qualities)

    def positions(self, original_ids: Iterable[int]) -> tuple[int, ...]:
        """Map original input indices to sorted positions."""
        inverse = {orig: pos for pos, orig in enumerate(self.order)}
        return tuple(inverse[i] for i in original_ids)


@dataclass(frozen=True)
class EquilibriumOutcome:
    """Equilibrium of the price game for one assortment.

    ``members`` are sorted catalog positions; ``demands``, ``prices`` and
    ``revenues`` align with it. ``q0`` is the no-purchase share and
    satisfies q0 + sum(demands) == 1.
    """

    members: tuple[int, ...]
    q0: float
    demands: tuple[float, ...]
    prices: tuple[float, ...]
    revenues: tuple[float, ...]
    total_revenue: float


def validate_assortment(catalog: ItemCatalog, members: Iterable[int]) -> tuple[int, ...]:
    """Normalize an assortment to a sorted tuple of distinct valid positions."""
    seen = set()
    for i in members:
        if not isinstance(i, int) or isinstance(i, bool):
            raise DomainError(f"assortment members must be integers, got {i!r}")
        if not 0 <= i < len(catalog):
            raise DomainError(f"item index {i} out of range for {len(catalog)} items")
        if i in seen:
            raise DomainError(f"duplicate item index {i}")
        seen.add(i)
    return tuple(sorted(seen))


def _share_from_log(lx: float) -> float:
    """Root y of  ln y + y/(1-y) = lx,  via w = y/(1-y).

    In w-space the equation reads  w + ln w - ln(1+w) = lx  with strictly
    increasing left side, so a bracketed Newton iteration cannot fail. Working
    with w keeps full precision when y approaches 1 (lx large).
    """
    # Initial guess: w ~ exp(lx) when lx << 0 (y ~ x), w ~ lx when lx >> 0.
    if lx > 1.0:
        w = lx
    else:
        w = math.exp(lx)
    lo, hi = 0.0, math.inf
    for _ in range(_MAX_ITER):
        f = w + math.log(w) - math.log1p(w) - lx
        if f > 0.0:
            hi = w
        else:
            lo = w
        if abs(f) < 1e-14:
            break
        step = f / (1.0 + 1.0 / (w * (1.0 + w)))
        nxt = w - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * w
        if nxt == w:
            break
        w = nxt
    else:
        raise SolverError(f"share iteration stalled at lx={lx}")
    return w / (1.0 + w)


def solve_share(x: float) -> float:
    """Solve y * exp(y/(1-y)) = x for the unique y in [0, 1).

    Strictly increasing in x, with y(0) = 0 and y -> 1 as x -> infinity. The
    returned root satisfies |y*exp(y/(1-y)) - x| <= 1e-12 * max(1, x).
    """
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"argument must be finite and nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    return _share_from_log(math.log(x))


def _no_purchase_root(qualities: Sequence[float]) -> float:
    """Root q0 of  sum_i V(q0 * e^{theta_i - 1}) + q0 - 1 = 0  on (0, 1]."""
    offsets = [t - 1.0 for t in qualities]

    def h_and_slope(q0: float) -> tuple[float, float]:
        lq = math.log(q0)
        total = q0 - 1.0
        slope = 1.0
        for off in offsets:
            y = _share_from_log(lq + off)
            w = y / (1.0 - y)
            total += y
            # dV/dq0 = y / (q0 * (1 + w(1+w)))
            slope += y / (q0 * (1.0 + w * (1.0 + w)))
        return total, slope

    lo, hi = 0.0, 1.0
    q0 = 0.5
    for _ in range(_MAX_ITER):
        h, slope = h_and_slope(q0)
        if h > 0.0:
            hi = q0
        else:
            lo = q0
        if abs(h) < 1e-13:
            return q0
        nxt = q0 - h / slope
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if nxt == q0:
            return q0
        q0 = nxt
    raise SolverError("no-purchase share iteration did not converge")


def solve_no_purchase(catalog: ItemCatalog, members: Iterable[int]) -> float:
    """Equilibrium no-purchase share q0 for the given assortment.

    Returns exactly 1.0 for the empty assortment.
    """
    members = validate_assortment(catalog, members)
    if not members:
        return 1.0
    return _no_purchase_root([catalog.qualities[i] for i in members])


@lru_cache(maxsize=100_000)
def _outcome_cached(catalog: ItemCatalog, members: tuple[int, ...]) -> EquilibriumOutcome:
    if not members:
        return EquilibriumOutcome(members=(), q0=1.0, demands=(), prices=(),
                                  revenues=(), total_revenue=0.0)
    q0 = _no_purchase_root([catalog.qualities[i] for i in members])
    lq = math.log(q0)
    demands = tuple(_share_from_log(lq + catalog.qualities[i] - 1.0) for i in members)
    prices = tuple(1.0 / (1.0 - q) for q in demands)
    revenues = tuple(q / (1.0 - q) for q in demands)
    return EquilibriumOutcome(members=members, q0=q0, demands=demands,
                              prices=prices, revenues=revenues,
                              total_revenue=sum(revenues))


def equilibrium_outcome(catalog: ItemCatalog, members: Iterable[int]) -> EquilibriumOutcome:
    """Equilibrium demands q_i, prices 1/(1-q_i), and revenues q_i/(1-q_i).

    Results are memoized per (catalog, assortment); outcomes are immutable
    so sharing is safe.
    """
    return _outcome_cached(catalog, validate_assortment(catalog, members))


def perishable_outcome(catalog: ItemCatalog, members: Iterable[int]) -> EquilibriumOutcome:
    """Equilibrium when each seller bears a production cost for unsold units.

    The cost beta_i shifts seller i's equilibrium price and revenue down by
    beta_i while leaving demands unchanged; revenues may go negative.
    """
    if catalog.costs is None:
        raise DomainError("catalog has no production costs")
    base = equilibrium_outcome(catalog, members)
    betas = [catalog.costs[i] for i in base.members]
    prices = tuple(p - b for p, b in zip(base.prices, betas))
    revenues = tuple(r - b for r, b in zip(base.revenues, betas))
    return EquilibriumOutcome(members=base.members, q0=base.q0, demands=base.demands,
                              prices=prices, revenues=revenues,
                              total_revenue=sum(revenues))


def mnl_demand(qualities: Sequence[float], prices: Sequence[float]) -> list[float]:
    """Raw MNL purchase probabilities at arbitrary posted prices.

    q_i = e^{theta_i - p_i} / (1 + sum_j e^{theta_j - p_j}); the implied
    no-purchase share is 1 - sum(q). Exponents are shifted by their maximum
    before summing so arbitrarily large qualities stay finite.
    """
    if len(qualities) != len(prices):
        raise DomainError("qualities and prices must have equal length")
    utils = [float(t) - float(p) for t, p in zip(qualities, prices)]
    shift = max(0.0, max(utils, default=0.0))
    weights = [math.exp(u - shift) for u in utils]
    denom = math.exp(-shift) + sum(weights)
    return [w / denom for w in weights]


def price_game_potential(qualities: Sequence[float], prices: Sequence[float]) -> float:
    """Potential of the price game: prod_j p_j e^{theta_j - p_j} / denom.

    A unilateral move p_i -> p_i' changes ln(potential) by exactly
    ln r_i(p) - ln r_i(p'), so best responses climb it and converge.
    """
    if len(qualities) != len(prices):
        raise DomainError("qualities and prices must have equal length")
    if any(p <= 0.0 for p in prices):
        raise DomainError("potential requires strictly positive prices")
    utils = [float(t) - float(p) for t, p in zip(qualities, prices)]
    shift = max(0.0, max(utils, default=0.0))
    log_denom = shift + math.log(math.exp(-shift) + sum(math.exp(u - shift) for u in utils))
    log_num = sum(math.log(p) + u for p, u in zip(prices, utils))
    return math.exp(log_num - log_denom)


def best_response_price(qualities: Sequence[float], prices: Sequence[float], i: int) -> float:
    """Revenue-maximizing price for seller i against fixed rival prices.

    Maximizes p * q_i(p) over [0, P_max]; the first-order condition
    1 - p(1 - q_i(p)) = 0 has a single sign change because its left side is
    strictly decreasing, so a bracketed Newton iteration suffices.
    """
    if not 0 <= i < len(qualities):
        raise DomainError(f"seller index {i} out of range")
    if len(qualities) != len(prices):
        raise DomainError("qualities and prices must have equal length")
    p_max = max(20.0, max(qualities) + 20.0)
    # log of the rival-plus-outside weight: ln(1 + sum_{j != i} e^{theta_j - p_j})
    utils = [float(t) - float(p) for j, (t, p) in enumerate(zip(qualities, prices)) if j != i]
    shift = max(0.0, max(utils, default=0.0))
    log_rival = shift + math.log(math.exp(-shift) + sum(math.exp(u - shift) for u in utils))
    theta = float(qualities[i])

    def share(p: float) -> float:
        z = theta - p - log_rival
        if z > 0:
            return 1.0 / (1.0 + math.exp(-z))
        ez = math.exp(z)
        return ez / (1.0 + ez)

    lo, hi = 0.0, p_max
    p = min(p_max, 1.0 / (1.0 - share(min(2.0, p_max))))
    for _ in range(_MAX_ITER):
        q = share(p)
        g = 1.0 - p * (1.0 - q)
        if g > 0.0:
            lo = p
        else:
            hi = p
        if abs(g) < 1e-13:
            return p
        slope = -(1.0 - q) * (1.0 + p * q)
        nxt = p - g / slope
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if nxt == p:
            return p
        p = nxt
    raise SolverError("best response iteration did not converge")


def quality_for_target_revenue(r: float) -> float:
    """Quality theta whose solo-assortment equilibrium revenue equals r.

    Closed form theta = 1 + r + ln r, from q/(1-q) = r and the equilibrium
    fixed point. Rejects r below 1e-12 where ln r underflows usefulness.
    """
    r = float(r)
    if not math.isfinite(r) or r < 1e-12:
        raise DomainError(f"target revenue must be >= 1e-12, got {r}")
    return 1.0 + r + math.log(r)


def solo_revenue_for_quality(theta: float) -> float:
    """Solo equilibrium revenue q/(1-q) for one item of quality theta.

    Inverse of :func:`quality_for_target_revenue`: solves r + ln r = theta - 1
    in r-space, which stays stable for arbitrarily large theta where the
    general q0 route would overflow.
    """
    target = float(theta) - 1.0
    if not math.isfinite(target):
        raise DomainError("quality must be finite")
    # r + ln r is increasing; Newton from r ~ target or e^{target}.
    r = target if target > 1.0 else math.exp(min(target, 1.0))
    lo, hi = 0.0, math.inf
    for _ in range(_MAX_ITER):
        f = r + math.log(r) - target
        if f > 0.0:
            hi = r
        else:
            lo = r
        if abs(f) < 1e-12 * max(1.0, abs(target)):
            return r
        nxt = r - f / (1.0 + 1.0 / r)
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * r
        if nxt == r:
            return r
        r = nxt
    raise SolverError("solo revenue iteration did not converge")
