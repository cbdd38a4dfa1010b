"""Envy-free unit-demand pricing and its restatement as an assortment problem.

Two consumer behaviours are supported.  Under the min rule each consumer has
a bundle of acceptable items and a budget, and buys the cheapest affordable
item of the bundle.  Under the rank rule each consumer walks her preference
list and buys the first item priced within its valuation.  Both problems
reduce to assortment instances over (item, price level) pairs whose choice
probabilities are exact rationals, so oracle comparisons against the pricing
side are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .assortment import AssortmentInstance
from .errors import GroundSetTooLarge, SearchSpaceTooLarge
from .models import ChoiceModel, Subset

UNPRICED = math.inf


@dataclass(frozen=True)
class MinConsumer:
    """A bundle of acceptable items and the budget the consumer will pay."""

    bundle: frozenset[int]
    valuation: float


@dataclass(frozen=True)
class RankConsumer:
    """A preference order over all items and one valuation per item."""

    ranking: tuple[int, ...]
    valuations: tuple


class UdpMinInstance:
    """Cheapest-affordable-item pricing problem."""

    def __init__(self, n: int, consumers: Sequence[tuple[Iterable[int], float]]):
        if n < 1:
            raise ValueError("at least one item is required")
        parsed = []
        for bundle, valuation in consumers:
            members = frozenset(bundle)
            if not members or not members <= frozenset(range(1, n + 1)):
                raise ValueError(f"bundle {sorted(members)} must be a nonempty subset of 1..{n}")
            if not valuation > 0:
                raise ValueError("valuations must be positive")
            parsed.append(MinConsumer(members, valuation))
        if not parsed:
            raise ValueError("at least one consumer is required")
        self._n = n
        self._consumers = tuple(parsed)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._consumers)

    @property
    def consumers(self) -> tuple[MinConsumer, ...]:
        return self._consumers

    @property
    def valuation_levels(self) -> tuple:
        """Distinct consumer budgets, ascending; candidate prices live here."""
        return tuple(sorted({c.valuation for c in self._consumers}))


class UdpRankInstance:
    """First-affordable-item pricing problem."""

    def __init__(self, n: int, consumers: Sequence[tuple[Sequence[int], Sequence[float]]]):
        if n < 1:
            raise ValueError("at least one item is required")
        parsed = []
        for ranking, valuations in consumers:
            order = tuple(ranking)
            if frozenset(order) != frozenset(range(1, n + 1)):
                raise ValueError(f"{order} is not a permutation of 1..{n}")
            values = tuple(valuations)
            if len(values) != n:
                raise ValueError("one valuation per item is required")
            if any(not v > 0 for v in values):
                raise ValueError("valuations must be positive")
            parsed.append(RankConsumer(order, values))
        if not parsed:
            raise ValueError("at least one consumer is required")
        self._n = n
        self._consumers = tuple(parsed)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._consumers)

    @property
    def consumers(self) -> tuple[RankConsumer, ...]:
        return self._consumers

    @property
    def valuation_levels(self) -> tuple:
        return tuple(sorted({v for c in self._consumers for v in c.valuations}))


@dataclass(frozen=True)
class PriceLadder:
    """A required price ordering: prices must be non-decreasing along psi."""

    psi: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.psi)
        if frozenset(self.psi) != frozenset(range(1, n + 1)):
            raise ValueError(f"{self.psi} is not a permutation of 1..{n}")

    def is_feasible(self, prices: Sequence) -> bool:
        ordered = [prices[x - 1] for x in self.psi]
        return all(a <= b for a, b in zip(ordered, ordered[1:]))


@dataclass(frozen=True)
class PurchaseOutcome:
    """Item bought by each consumer (None for no purchase) and total revenue."""

    purchases: tuple[int | None, ...]
    revenue: float


def simulate_purchases_min(instance: UdpMinInstance, prices: Sequence) -> PurchaseOutcome:
    """Each consumer buys the cheapest affordable item of her bundle.

    Price ties go to the lowest item index; the revenue is tie-invariant
    since tied items cost the same.
    """
    _validate_prices(instance.n, prices)
    purchases: list[int | None] = []
    revenue = 0
    for consumer in instance.consumers:
        affordable = [
            (prices[x - 1], x) for x in sorted(consumer.bundle) if prices[x - 1] <= consumer.valuation
        ]
        if affordable:
            price, item = min(affordable)
            purchases.append(item)
            revenue += price
        else:
            purchases.append(None)
    return PurchaseOutcome(tuple(purchases), revenue)


def simulate_purchases_rank(instance: UdpRankInstance, prices: Sequence) -> PurchaseOutcome:
    """Each consumer buys the first item of her list priced within valuation."""
    _validate_prices(instance.n, prices)
    purchases: list[int | None] = []
    revenue = 0
    for consumer in instance.consumers:
        bought = None
        for x in consumer.ranking:
            if prices[x - 1] <= consumer.valuations[x - 1]:
                bought = x
                revenue += prices[x - 1]
                break
        purchases.append(bought)
    return PurchaseOutcome(tuple(purchases), revenue)


def _validate_prices(n: int, prices: Sequence) -> None:
    if len(prices) != n:
        raise ValueError(f"expected {n} prices, got {len(prices)}")
    for p in prices:
        if not (p > 0 or p == UNPRICED):
            raise ValueError("prices must be positive (or UNPRICED)")


def _simulate(instance, prices: Sequence) -> PurchaseOutcome:
    if isinstance(instance, UdpMinInstance):
        return simulate_purchases_min(instance, prices)
    return simulate_purchases_rank(instance, prices)


@dataclass(frozen=True)
class UniformPricingResult:
    """Best single price across all items, with every candidate's revenue."""

    price: float
    revenue: float
    candidates: tuple[tuple[float, float], ...]


def uniform_pricing(instance: UdpMinInstance | UdpRankInstance) -> UniformPricingResult:
    """Try one common price per distinct valuation and keep the best.

    Ties are broken toward the highest price.  A uniform assignment is
    feasible for every price ladder, so the result is unaffected by ladder
    constraints.
    """
    best_price = None
    best_revenue = None
    candidates = []
    for level in instance.valuation_levels:
        outcome = _simulate(instance, (level,) * instance.n)
        candidates.append((level, outcome.revenue))
        if best_revenue is None or outcome.revenue >= best_revenue:
            best_revenue = outcome.revenue
            best_price = level
    return UniformPricingResult(best_price, best_revenue, tuple(candidates))


@dataclass(frozen=True)
class PricingSolution:
    prices: tuple
    revenue: float


def brute_force_pricing(
    instance: UdpMinInstance | UdpRankInstance,
    ladder: PriceLadder | None = None,
    guard: int = 10**7,
) -> PricingSolution:
    """Exact optimum over the grid of valuation levels plus UNPRICED per item.

    Restricting prices to valuations loses nothing, and UNPRICED covers
    never-affordable items.  With a ladder, only ladder-feasible assignments
    compete.  Ties go to the lexicographically smallest price vector.
    """
    levels = list(instance.valuation_levels) + [UNPRICED]
    total = len(levels) ** instance.n
    if total > guard:
        raise SearchSpaceTooLarge(f"{total} price assignments exceed the guard {guard}")
    best: PricingSolution | None = None
    for assignment in itertools.product(levels, repeat=instance.n):
        if ladder is not None and not ladder.is_feasible(assignment):
            continue
        outcome = _simulate(instance, assignment)
        if best is None or outcome.revenue > best.revenue:
            best = PricingSolution(assignment, outcome.revenue)
    if best is None:
        raise ValueError("no feasible price assignment")
    return best


class _PairCatalogue:
    """Shared (item, price level) pair indexing for the reduced instances."""

    def __init__(self, n_items: int, levels: Sequence):
        self.levels = tuple(levels)
        self.pairs = tuple((x, v) for x in range(1, n_items + 1) for v in self.levels)
        self.index = {pair: where + 1 for where, pair in enumerate(self.pairs)}

    def floor_prices(self, members: Subset, n_items: int) -> list:
        """Per-item cheapest level present in the pair set (UNPRICED if none)."""
        floor = [UNPRICED] * n_items
        for where in members:
            x, v = self.pairs[where - 1]
            if v < floor[x - 1]:
                floor[x - 1] = v
        return floor


class _ReducedUdpModel(ChoiceModel):
    """Base for the pricing-to-assortment choice models.

    Probabilities are averages of per-consumer indicator distributions and
    are returned as exact fractions, so revenue comparisons against the
    pricing oracle can demand exact equality.
    """

    def __init__(self, instance, catalogue: _PairCatalogue):
        super().__init__(len(catalogue.pairs))
        self._instance = instance
        self._catalogue = catalogue
        self._cache: dict[Subset, dict[int, Fraction]] = {}

    @property
    def pair_catalogue(self) -> _PairCatalogue:
        return self._catalogue

    def _distribution(self, S: Subset) -> dict[int, Fraction]:
        cached = self._cache.get(S)
        if cached is None:
            cached = self._consumer_average(S)
            self._cache[S] = cached
        return cached

    def _member_probability(self, x: int, S: Subset):
        return self._distribution(S).get(x, Fraction(0))

    def _consumer_average(self, S: Subset) -> dict[int, Fraction]:
        raise NotImplementedError


class MinPricingChoiceModel(_ReducedUdpModel):
    """Choice probabilities encoding the cheapest-affordable purchase rule.

    Consumer i spreads her purchase uniformly over the cheapest bundle pairs
    present in the offer set, provided that cheapest level is affordable.
    """

    def _consumer_average(self, S: Subset) -> dict[int, Fraction]:
        instance = self._instance
        m = instance.m
        totals: dict[int, Fraction] = {}
        for consumer in instance.consumers:
            relevant = [
                where
                for where in S
                if self._catalogue.pairs[where - 1][0] in consumer.bundle
            ]
            if not relevant:
                continue
            cheapest = min(self._catalogue.pairs[where - 1][1] for where in relevant)
            if cheapest > consumer.valuation:
                continue
            chosen = [where for where in relevant if self._catalogue.pairs[where - 1][1] == cheapest]
            share = Fraction(1, m * len(chosen))
            for where in chosen:
                totals[where] = totals.get(where, Fraction(0)) + share
        return totals


class RankPricingChoiceModel(_ReducedUdpModel):
    """Choice probabilities encoding the first-affordable purchase rule.

    The offer set induces the price assignment that charges each item its
    cheapest offered level; consumer i deterministically picks the pair her
    scan would buy under those prices.
    """

    def _consumer_average(self, S: Subset) -> dict[int, Fraction]:
        instance = self._instance
        m = instance.m
        floor = self._catalogue.floor_prices(S, instance.n)
        totals: dict[int, Fraction] = {}
        for consumer in instance.consumers:
            for x in consumer.ranking:
                price = floor[x - 1]
                if price <= consumer.valuations[x - 1]:
                    where = self._catalogue.index[(x, price)]
                    totals[where] = totals.get(where, Fraction(0)) + Fraction(1, m)
                    break
        return totals


def _reduce(instance, model_cls, guard: int) -> AssortmentInstance:
    catalogue = _PairCatalogue(instance.n, instance.valuation_levels)
    if len(catalogue.pairs) > guard:
        raise GroundSetTooLarge(
            f"reduction would create {len(catalogue.pairs)} products; guard is {guard}"
        )
    model = model_cls(instance, catalogue)
    revenue = [instance.m * v for (_, v) in catalogue.pairs]
    return AssortmentInstance(model, revenue)


def reduce_min_to_assortment(instance: UdpMinInstance, guard: int = 20) -> AssortmentInstance:
    """Restate a min-rule pricing problem as an assortment problem.

    Products are (item, valuation level) pairs earning m * level; offering S
    amounts to charging each item its cheapest offered level.  The optimum
    revenue is preserved, and the revenue-ordered candidates coincide with
    the uniform-pricing candidates threshold by threshold.
    """
    return _reduce(instance, MinPricingChoiceModel, guard)


def reduce_rank_to_assortment(instance: UdpRankInstance, guard: int = 20) -> AssortmentInstance:
    """Restate a rank-rule pricing problem as an assortment problem.

    Mirrors the min-rule construction with first-affordable semantics; the
    equivalence is validated against the pricing oracle on small instances.
    """
    return _reduce(instance, RankPricingChoiceModel, guard)
