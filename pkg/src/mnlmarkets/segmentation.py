"""Flow-based market segmentation for the bipartite price game.

Splitting a market into single-seller pools and letting each pool set its
own equilibrium price can beat the whole-market equilibrium. The pools come
from a max-weight flow at a reference unit price: source -> buyer arcs of
capacity 1, buyer -> seller arcs of capacity 1 weighted by the unit-price
revenue e^{theta_ik - 1} / (1 + e^{theta_ik - 1}), and seller -> sink arcs
of capacity c_i. The heaviest flow of min(m, sum c_i) units is integral, so
it assigns each buyer to at most one seller while respecting capacities;
each seller's assigned buyers form a pool, which is then re-equilibrated
with the capacity-aware single-seller best response (never worse than the
unit price it was scored at).

Arc weights are fixed-point integers at scale 1e9 and the flow solver does
exact integer arithmetic, so the optimum is deterministic with no floating
tie ambiguity.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .equilibrium import DomainError
from .network import (
    BipartiteMarket,
    EquilibriumReport,
    network_demand,
    seller_best_response,
    solve_network_equilibrium,
)

WEIGHT_SCALE = 10 ** 9
UNIT_PRICE_FLOOR = 1.0 / (1.0 + math.e)  # worst arc weight when theta >= 0


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: int
    weight: int  # fixed-point, WEIGHT_SCALE per revenue unit


@dataclass(frozen=True)
class FlowNetwork:
    """Layered network: 0 = source, 1..m buyers, m+1..m+n sellers, last = sink."""

    market: BipartiteMarket
    num_nodes: int
    source: int
    sink: int
    arcs: tuple[Arc, ...]

    def buyer_node(self, k: int) -> int:
        return 1 + k

    def seller_node(self, i: int) -> int:
        return 1 + self.market.buyers + i


@dataclass(frozen=True)
class FlowAssignment:
    """Integral max-weight flow: buyer -> seller pairs actually used."""

    pairs: tuple[tuple[int, int], ...]
    value: int
    total_weight: int  # fixed-point
    shortfall: bool  # true when visibility blocks the min(m, sum c) target


@dataclass(frozen=True)
class Pool:
    seller: int
    buyers: tuple[int, ...]


@dataclass(frozen=True)
class Segmentation:
    """Pools with their equilibrium prices/revenues and certificates.

    ``lower_bound`` is the min(m, sum c)/(1+e) revenue floor, present only
    when every pair is visible and no quality is negative; ``upper_bound``
    is the price-cap times assignable-units bound.
    """

    pools: tuple[Pool, ...]
    pool_prices: tuple[float, ...]
    pool_revenues: tuple[float, ...]
    total_revenue: float
    flow_weight: float
    lower_bound: float | None
    upper_bound: float


@dataclass(frozen=True)
class SegmentationComparison:
    segmentation: Segmentation
    whole: EquilibriumReport
    segmented_revenue: float
    whole_revenue: float


def unit_price_weight(theta: float) -> float:
    """Revenue of one visible pair at the reference price 1."""
    return math.exp(theta - 1.0) / (1.0 + math.exp(theta - 1.0)) if theta - 1.0 < 500 else 1.0


def build_flow_network(market: BipartiteMarket) -> FlowNetwork:
    """Assemble the segmentation network with fixed-point arc weights."""
    m, n = market.buyers, market.sellers
    arcs = []
    sink = 1 + m + n
    for k in range(m):
        arcs.append(Arc(tail=0, head=1 + k, capacity=1, weight=0))
    for k in range(m):
        for i in range(n):
            if market.visibility[i, k]:
                w = round(WEIGHT_SCALE * unit_price_weight(float(market.theta[i, k])))
                arcs.append(Arc(tail=1 + k, head=1 + m + i, capacity=1, weight=int(w)))
    for i in range(n):
        arcs.append(Arc(tail=1 + m + i, head=sink, capacity=market.capacities[i], weight=0))
    return FlowNetwork(market=market, num_nodes=sink + 1, source=0, sink=sink,
                       arcs=tuple(arcs))


def max_weight_flow(network: FlowNetwork) -> FlowAssignment:
    """Max-weight integral flow of min(m, sum c) units, or the densest
    feasible flow when visibility cannot carry that much.

    Successive shortest paths on negated weights with integer node
    potentials: one Bellman-Ford pass absorbs the negative arc costs, after
    which Dijkstra on reduced costs finds each augmenting path. Capacities
    and costs are integers, so every intermediate flow is integral and the
    optimum is exact.
    """
    market = network.market
    target = min(market.buyers, sum(market.capacities))
    nn = network.num_nodes
    heads: list[int] = []
    caps: list[int] = []
    costs: list[int] = []
    adj: list[list[int]] = [[] for _ in range(nn)]

    def add(u: int, v: int, cap: int, cost: int) -> None:
        adj[u].append(len(heads))
        heads.append(v)
        caps.append(cap)
        costs.append(cost)
        adj[v].append(len(heads))
        heads.append(u)
        caps.append(0)
        costs.append(-cost)

    for arc in network.arcs:
        add(arc.tail, arc.head, arc.capacity, -arc.weight)

    big = 1 << 62
    # Bellman-Ford potentials; the network is layered so a few passes settle.
    pot = [big] * nn
    pot[network.source] = 0
    for _ in range(4):
        changed = False
        for u in range(nn):
            if pot[u] >= big:
                continue
            for e in adj[u]:
                if caps[e] > 0 and pot[u] + costs[e] < pot[heads[e]]:
                    pot[heads[e]] = pot[u] + costs[e]
                    changed = True
        if not changed:
            break
    pot = [0 if d >= big else d for d in pot]

    sent = 0
    total_cost = 0
    while sent < target:
        dist = [big] * nn
        parent_edge = [-1] * nn
        dist[network.source] = 0
        heap = [(0, network.source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for e in adj[u]:
                if caps[e] <= 0:
                    continue
                v = heads[e]
                nd = d + costs[e] + pot[u] - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    parent_edge[v] = e
                    heapq.heappush(heap, (nd, v))
        if dist[network.sink] >= big:
            break
        for v in range(nn):
            if dist[v] < big:
                pot[v] += dist[v]
        # Bottleneck along the path (always >= 1; buyer arcs cap it at 1).
        push = big
        v = network.sink
        while v != network.source:
            e = parent_edge[v]
            push = min(push, caps[e])
            v = heads[e ^ 1]
        v = network.sink
        while v != network.source:
            e = parent_edge[v]
            caps[e] -= push
            caps[e ^ 1] += push
            total_cost += push * costs[e]
            v = heads[e ^ 1]
        sent += push

    pairs = []
    edge_id = 0
    for arc in network.arcs:
        if 1 <= arc.tail <= market.buyers and arc.head != network.sink:
            if caps[edge_id] == 0 and caps[edge_id ^ 1] == 1:
                pairs.append((arc.tail - 1, arc.head - 1 - market.buyers))
        edge_id += 2
    pairs.sort()
    return FlowAssignment(
        pairs=tuple(pairs),
        value=sent,
        total_weight=-total_cost,
        shortfall=sent < target,
    )


def pools_from_flow(assignment: FlowAssignment) -> tuple[Pool, ...]:
    """Group assigned buyers by seller; sellers without inflow get no pool,
    unassigned buyers drop out of the segmented market."""
    by_seller: dict[int, list[int]] = {}
    for buyer, seller in assignment.pairs:
        by_seller.setdefault(seller, []).append(buyer)
    return tuple(
        Pool(seller=s, buyers=tuple(sorted(bs))) for s, bs in sorted(by_seller.items())
    )


def equilibrate_pool(market: BipartiteMarket, pool: Pool) -> tuple[float, float]:
    """Equilibrium price and revenue of one single-seller pool.

    The pool's seller faces only its assigned buyers and no rivals, so its
    equilibrium is the capacity-aware best response; revenue can only
    improve on the unit price the pool was scored at.
    """
    if not pool.buyers:
        raise DomainError("pool must contain at least one buyer")
    sub = BipartiteMarket(
        market.theta[pool.seller, list(pool.buyers)].reshape(1, -1),
        capacities=[market.capacities[pool.seller]],
    )
    price = seller_best_response(sub, np.array([1.0]), 0)
    demand = float(network_demand(sub, [price]).sum())
    revenue = price * min(demand, market.capacities[pool.seller])
    return price, revenue


def segment_market(market: BipartiteMarket) -> Segmentation:
    """Full pipeline: flow network, integral assignment, pool equilibria.

    The revenue floor min(m, sum c)/(1+e) only certifies markets where
    every pair is visible and no quality is negative; otherwise it is
    reported as absent. The upper bound multiplies the assignable units by
    the equilibrium price cap.
    """
    assignment = max_weight_flow(build_flow_network(market))
    pools = pools_from_flow(assignment)
    prices = []
    revenues = []
    for pool in pools:
        price, revenue = equilibrate_pool(market, pool)
        prices.append(price)
        revenues.append(revenue)
    units = min(market.buyers, sum(market.capacities))
    certifiable = bool(market.visibility.all()) and bool(
        np.all(market.theta[market.visibility] >= 0.0)
    )
    return Segmentation(
        pools=pools,
        pool_prices=tuple(prices),
        pool_revenues=tuple(revenues),
        total_revenue=float(sum(revenues)),
        flow_weight=assignment.total_weight / WEIGHT_SCALE,
        lower_bound=units * UNIT_PRICE_FLOOR if certifiable else None,
        upper_bound=(market.price_box() - 1.0) * units,
    )


def compare_segmented_vs_whole(market: BipartiteMarket) -> SegmentationComparison:
    """Segmented total revenue next to the unsegmented equilibrium revenue.

    No ordering between the two is implied; segmentation can help or hurt
    depending on how polarized the quality matrix is. Non-convergence of the
    whole-market solve is carried through on the report.
    """
    seg = segment_market(market)
    whole = solve_network_equilibrium(market)
    totals = whole.demands.sum(axis=1)
    whole_revenue = float(
        sum(
            p * min(t, c)
            for p, t, c in zip(whole.prices, totals, market.capacities)
        )
    )
    return SegmentationComparison(
        segmentation=seg,
        whole=whole,
        segmented_revenue=seg.total_revenue,
        whole_revenue=whole_revenue,
    )
