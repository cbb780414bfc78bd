"""Monte-Carlo harness for online assortment policies.

Runs buyer-by-buyer episodes against a catalog, estimates the competitive
ratio versus the clairvoyant LP benchmark, evaluates the theoretical
lower-bound curve for the hybrid policy's ratio as a function of the
heaviness threshold, and generates the worst-case heterogeneous-buyer family
that rules out constant-ratio online algorithms.

Randomness contract: replication r of a run seeded with s draws from
``numpy.random.default_rng([s, r])``, an independent, platform-stable PCG64
stream. Every episode step consumes exactly one uniform variate, so results
are bit-reproducible and independent of how replications are scheduled
across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .equilibrium import (
    DomainError,
    EquilibriumOutcome,
    equilibrium_outcome,
    quality_for_target_revenue,
    solo_revenue_for_quality,
)
from .lp import solve_opt
from .policies import (
    InventoryState,
    OnlineInstance,
    PolicyDecision,
    greedy_all_next,
    hybrid_next,
    modified_hybrid_next,
)

Policy = Callable[[OnlineInstance, InventoryState], PolicyDecision]


def _greedy_policy(instance: OnlineInstance, state: InventoryState) -> PolicyDecision:
    return greedy_all_next(state)


POLICIES: dict[str, Policy] = {
    "hybrid": hybrid_next,
    "greedy": _greedy_policy,
    "modified": modified_hybrid_next,
}


@dataclass(frozen=True)
class EpisodeResult:
    """One simulated buyer stream: revenue, per-item sales, optional path."""

    revenue: float
    sold_units: tuple[int, ...]
    path: tuple[tuple[tuple[int, ...], int | None], ...] | None


@dataclass(frozen=True)
class RatioEstimate:
    """Replicated revenue estimate against the LP optimum."""

    mean_revenue: float
    std_error: float
    opt: float
    ratio: float
    replications: int


@dataclass(frozen=True)
class HeterogeneousInstance:
    """Single unit-stock item whose per-buyer revenue grows geometrically.

    Buyer t values the item so that selling to t alone is worth growth**t;
    any online rule must hedge across buyers while hindsight takes the last
    one, which drives the achievable ratio to zero as the horizon grows.
    """

    qualities: tuple[float, ...]
    growth: float
    horizon: int

    def target_revenue(self, t: int) -> float:
        """Intended solo revenue of buyer t (1-based)."""
        return self.growth ** t

    def solo_revenue(self, t: int) -> float:
        """Actual solo equilibrium revenue of buyer t, solved from quality."""
        return solo_revenue_for_quality(self.qualities[t - 1])

    def solo_demand(self, t: int) -> float:
        r = self.solo_revenue(t)
        return r / (1.0 + r)


def episode_rng(seed: int, replication: int) -> np.random.Generator:
    """The documented per-replication stream: PCG64 keyed by (seed, rep)."""
    return np.random.default_rng([int(seed), int(replication)])


def sample_choice(outcome: EquilibriumOutcome, rng: np.random.Generator) -> int | None:
    """Draw the buyer's pick: member i with probability q_i, else None.

    Consumes exactly one uniform variate regardless of the assortment.
    """
    u = rng.random()
    acc = 0.0
    for member, q in zip(outcome.members, outcome.demands):
        acc += q
        if u < acc:
            return member
    return None


def run_episode(
    policy: Policy,
    instance: OnlineInstance,
    rng: np.random.Generator,
    record_path: bool = True,
) -> EpisodeResult:
    """Simulate one buyer stream under a policy.

    Each of the m steps asks the policy for an assortment, draws the buyer's
    choice at the assortment's equilibrium demands, collects the equilibrium
    price on a sale, and decrements inventory. Exactly one uniform variate is
    consumed per step, so path structure never desynchronizes the stream.
    """
    catalog = instance.catalog
    state = InventoryState.fresh(instance)
    revenue = 0.0
    sold = [0] * len(catalog)
    path: list[tuple[tuple[int, ...], int | None]] | None = [] if record_path else None
    for t in range(instance.m):
        state.t = t
        decision = policy(instance, state)
        outcome = equilibrium_outcome(catalog, decision.assortment)
        purchased = sample_choice(outcome, rng)
        if purchased is not None:
            revenue += outcome.prices[outcome.members.index(purchased)]
            state.remaining[purchased] -= 1
            sold[purchased] += 1
        if path is not None:
            path.append((decision.assortment, purchased))
    return EpisodeResult(
        revenue=revenue,
        sold_units=tuple(sold),
        path=tuple(path) if path is not None else None,
    )


def _revenue_block(policy_name: str, instance: OnlineInstance, seed: int,
                   lo: int, hi: int) -> list[float]:
    policy = POLICIES[policy_name]
    return [
        run_episode(policy, instance, episode_rng(seed, rep), record_path=False).revenue
        for rep in range(lo, hi)
    ]


def estimate_ratio(
    policy: Policy | str,
    instance: OnlineInstance,
    replications: int,
    seed: int,
    workers: int = 1,
) -> RatioEstimate:
    """Mean episode revenue over independent replications, divided by OPT.

    Replication r always uses the (seed, r) stream, so the estimate is
    identical for any worker count; parallel workers only split the index
    range.
    """
    if replications < 1:
        raise DomainError("need at least one replication")
    if isinstance(policy, str):
        name = policy
        if name not in POLICIES:
            raise DomainError(f"unknown policy {name!r}")
    else:
        matches = [k for k, v in POLICIES.items() if v is policy]
        name = matches[0] if matches else None
    if name is not None and workers > 1:
        bounds = np.linspace(0, replications, workers + 1).astype(int)
        revenues: list[float] = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = [
                pool.submit(_revenue_block, name, instance, seed, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            for job in jobs:
                revenues.extend(job.result())
    else:
        fn = POLICIES[name] if name is not None else policy
        revenues = [
            run_episode(fn, instance, episode_rng(seed, rep), record_path=False).revenue
            for rep in range(replications)
        ]
    arr = np.asarray(revenues)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(replications)) if replications > 1 else 0.0
    opt = solve_opt(instance.catalog, instance.m).objective if instance.m >= 1 else 0.0
    ratio = mean / opt if opt > 0 else math.nan
    return RatioEstimate(mean_revenue=mean, std_error=se, opt=opt,
                         ratio=ratio, replications=replications)


def threshold_headroom(lam: float) -> float:
    """The revenue-concentration factor max{1 + ((1-lam)/lam)^2, 1/lam}.

    Bounds how much any assortment can out-earn the heaviest heavy item
    offered alone.
    """
    return max(1.0 + ((1.0 - lam) / lam) ** 2, 1.0 / lam)


def _bound_closed_branch(lam: float) -> float:
    """Analytic branch (inventory exceeds buyers): max over x of
    (lam - x) x / ((f + x)(1 - x))."""
    f = threshold_headroom(lam)
    num = math.sqrt((1.0 - lam) * (lam + f)) - math.sqrt(f)
    den = math.sqrt(f * (lam + f)) - math.sqrt(1.0 - lam)
    return (num / den) ** 2


def _branch_value(lam: float, f: float, y: np.ndarray, x: np.ndarray) -> np.ndarray:
    return (1.0 - y / lam) * ((1.0 - lam) / 2.0 - x / (f + x)) + (
        (y - x) * x / ((f + x) * (1.0 - x))
    )


def _bound_numeric_branch(lam: float, coarse: float = 1e-3, fine: float = 1e-5) -> float:
    """Numeric branch (buyers exceed inventory): min over y of max over x.

    Coarse grid, then local refinement of both the inner argmax and the
    outer argmin; the objective is smooth on the domain so two stages are
    enough for the reported precision.
    """
    f = threshold_headroom(lam)

    def inner_max(y: float) -> float:
        xs = np.arange(0.0, y + coarse, coarse)
        xs = xs[xs <= y]
        vals = _branch_value(lam, f, np.full_like(xs, y), xs)
        x0 = float(xs[int(vals.argmax())])
        xs2 = np.arange(max(0.0, x0 - 1.5 * coarse), min(y, x0 + 1.5 * coarse) + fine, fine)
        xs2 = xs2[xs2 <= y]
        return float(_branch_value(lam, f, np.full_like(xs2, y), xs2).max())

    ys = np.arange(0.0, lam + coarse, coarse)
    ys = ys[ys <= lam]
    grid = np.full((ys.size, ys.size), -np.inf)
    xs = ys
    yy, xx = np.meshgrid(ys, xs, indexing="ij")
    mask = xx <= yy
    grid[mask] = _branch_value(lam, f, yy[mask], xx[mask])
    coarse_vals = grid.max(axis=1)
    y0 = float(ys[int(coarse_vals.argmin())])
    best = math.inf
    for y in np.arange(max(0.0, y0 - 1.5 * coarse), min(lam, y0 + 1.5 * coarse) + fine, fine):
        best = min(best, inner_max(min(float(y), lam)))
    return best


def hybrid_ratio_bound(lam: float) -> float:
    """Worst-case competitive-ratio lower bound of the hybrid policy.

    Minimum of the analytic large-inventory branch and the numeric
    small-inventory branch at heaviness threshold lam in [0.5, 1).
    """
    lam = float(lam)
    if not 0.5 <= lam < 1.0:
        raise DomainError(f"threshold must lie in [0.5, 1), got {lam}")
    return min(_bound_closed_branch(lam), _bound_numeric_branch(lam))


def adversarial_instance(growth: float, horizon: int) -> HeterogeneousInstance:
    """Geometric-revenue buyer family with a single unit-stock item.

    Buyer t's quality is chosen so its solo equilibrium revenue is
    growth**t; every such buyer purchases with probability above 1/2 when
    offered. Rejected if growth**horizon leaves double range.
    """
    growth = float(growth)
    if growth <= 1.0:
        raise DomainError(f"growth must exceed 1, got {growth}")
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    if horizon * math.log(growth) > math.log(1e300):
        raise DomainError("growth**horizon overflows the floating range")
    qualities = tuple(
        quality_for_target_revenue(growth ** t) for t in range(1, horizon + 1)
    )
    return HeterogeneousInstance(qualities=qualities, growth=growth, horizon=horizon)


def always_offer_ratio(instance: HeterogeneousInstance, upto: int) -> float:
    """Hindsight ratio of the offer-while-in-stock rule on the first `upto` buyers.

    Expected revenue sum_t r_t q_t prod_{s<t}(1 - q_s) in closed form,
    against the clairvoyant value r_upto (save the unit for the last,
    richest buyer). Decays geometrically in the horizon.
    """
    if not 1 <= upto <= instance.horizon:
        raise DomainError("prefix length out of range")
    expected = 0.0
    available = 1.0
    for t in range(1, upto + 1):
        q = instance.solo_demand(t)
        expected += available * q * (1.0 + instance.solo_revenue(t))
        available *= 1.0 - q
    return expected / instance.target_revenue(upto)
