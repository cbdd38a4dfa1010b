"""Matroid machinery and the leader-follower base-buying pricing problem.

A follower buys a minimum-weight base of a matroid whose elements are split
into red ones with fixed costs and blue ones priced by the leader, blue
preferred on cost ties.  The leader's problem reduces to an assortment
instance over (blue element, cost level) pairs via an auxiliary matroid that
caps each blue element at one copy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .assortment import AssortmentInstance
from .errors import GroundSetTooLarge, SearchSpaceTooLarge
from .models import ChoiceModel, Subset
from .udp import UNPRICED

Element = Hashable


class Matroid:
    """A ground set with a pure independence predicate."""

    def __init__(self, ground: Iterable[Element]):
        self._ground = tuple(ground)
        if len(set(self._ground)) != len(self._ground):
            raise ValueError("ground set elements must be distinct")

    @property
    def ground(self) -> tuple[Element, ...]:
        return self._ground

    def is_independent(self, subset: Iterable[Element]) -> bool:
        raise NotImplementedError

    def rank(self) -> int:
        return len(greedy(self, self._ground, self._ground))


class FunctionMatroid(Matroid):
    """Independence supplied as a callable; also hosts non-matroid sentinels
    used to validate the property-checking harnesses."""

    def __init__(self, ground: Iterable[Element], predicate: Callable[[frozenset], bool]):
        super().__init__(ground)
        self._predicate = predicate

    def is_independent(self, subset: Iterable[Element]) -> bool:
        return self._predicate(frozenset(subset))


class GraphicMatroid(Matroid):
    """Forests of an undirected multigraph; elements are edge indices.

    Parallel edges are allowed (two of them already form a cycle) and a
    self-loop is dependent on its own.
    """

    def __init__(self, n_vertices: int, edges: Sequence[tuple[int, int]]):
        if n_vertices < 1:
            raise ValueError("at least one vertex is required")
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u}, {v}) references unknown vertices")
        super().__init__(range(len(edges)))
        self._n_vertices = n_vertices
        self._edges = tuple((u, v) for u, v in edges)

    @property
    def n_vertices(self) -> int:
        return self._n_vertices

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    def is_independent(self, subset: Iterable[Element]) -> bool:
        parent = list(range(self._n_vertices))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for index in subset:
            u, v = self._edges[index]
            root_u, root_v = find(u), find(v)
            if root_u == root_v:
                return False
            parent[root_u] = root_v
        return True


def greedy(matroid: Matroid, F: Iterable[Element], order: Sequence[Element]) -> frozenset:
    """Scan F in the given order, keeping every element that stays independent.

    Returns the canonical greedy set, a maximal independent subset of F.
    """
    chosen_f = frozenset(F)
    selected: list[Element] = []
    for element in order:
        if element not in chosen_f:
            continue
        if matroid.is_independent(selected + [element]):
            selected.append(element)
    return frozenset(selected)


def check_matroid_axioms(matroid: Matroid, guard: int = 8) -> bool:
    """Exhaustively verify the three matroid axioms on a small ground set."""
    ground = matroid.ground
    if len(ground) > guard:
        raise GroundSetTooLarge(f"{len(ground)} elements exceed the axiom-check guard {guard}")
    subsets = []
    for size in range(len(ground) + 1):
        subsets.extend(frozenset(c) for c in itertools.combinations(ground, size))
    independent = {S for S in subsets if matroid.is_independent(S)}
    if frozenset() not in independent:
        return False
    for S in independent:
        if any(S - {e} not in independent for e in S):
            return False
    for small in independent:
        for big in independent:
            if len(small) < len(big):
                if not any(small | {e} in independent for e in big - small):
                    return False
    return True


@dataclass(frozen=True)
class GreedyNestingReport:
    """Randomised check of the two nesting properties of matroid greedy:
    growing F never shrinks the greedy set, and elements of F selected from
    the larger set are also selected from F itself."""

    passed: bool
    trials: int
    failures: tuple[tuple, ...]


def check_greedy_nesting(matroid: Matroid, trials: int, rng: Random | None = None) -> GreedyNestingReport:
    """Sample random F within F' and random orders; report any counterexample.

    A genuine matroid always passes; a non-matroid independence system is
    expected to fail, which validates the harness itself.
    """
    rng = rng or Random(0)
    ground = list(matroid.ground)
    failures: list[tuple] = []
    for _ in range(trials):
        order = ground[:]
        rng.shuffle(order)
        larger = frozenset(e for e in ground if rng.random() < 0.7)
        smaller = frozenset(e for e in larger if rng.random() < 0.6)
        from_larger = greedy(matroid, larger, order)
        from_smaller = greedy(matroid, smaller, order)
        if len(from_larger) < len(from_smaller):
            failures.append(("cardinality", tuple(order), smaller, larger))
        if not (smaller & from_larger) <= from_smaller:
            failures.append(("containment", tuple(order), smaller, larger))
    return GreedyNestingReport(not failures, trials, tuple(failures))


class StackelbergInstance:
    """A matroid with fixed-cost red elements and leader-priced blue ones.

    The red elements must contain a base (otherwise the optimal revenue is
    unbounded and construction is rejected).
    """

    def __init__(self, matroid: Matroid, red_costs: Mapping[Element, float], blue: Iterable[Element]):
        red = frozenset(red_costs)
        blue = frozenset(blue)
        if red & blue or red | blue != frozenset(matroid.ground):
            raise ValueError("red and blue must partition the ground set")
        for element, cost in red_costs.items():
            if not cost > 0:
                raise ValueError(f"cost of red element {element!r} is {cost}; must be > 0")
        if len(greedy(matroid, red, matroid.ground)) != matroid.rank():
            raise ValueError("the red elements must contain a base of the matroid")
        self._matroid = matroid
        self._red_costs = dict(red_costs)
        self._blue = blue

    @property
    def matroid(self) -> Matroid:
        return self._matroid

    @property
    def red_costs(self) -> dict:
        return dict(self._red_costs)

    @property
    def blue(self) -> frozenset:
        return self._blue

    @property
    def cost_levels(self) -> tuple:
        """Distinct red costs c_1 < ... < c_k."""
        return tuple(sorted(set(self._red_costs.values())))

    def effective_costs(self, prices: Mapping[Element, float]) -> dict:
        costs = dict(self._red_costs)
        for element in self._blue:
            costs[element] = prices[element]
        return costs


def _sort_key(element: Element) -> tuple:
    if isinstance(element, int):
        return (0, element, "")
    return (1, 0, repr(element))


def cost_compatible_ordering(instance: StackelbergInstance, prices: Mapping[Element, float]) -> tuple:
    """The canonical follower ordering: ascending cost, blue before red on
    ties, element identity as the final (revenue-irrelevant) tie-break."""
    costs = instance.effective_costs(prices)
    blue = instance.blue

    def key(element: Element) -> tuple:
        return (costs[element], 0 if element in blue else 1, _sort_key(element))

    return tuple(sorted(instance.matroid.ground, key=key))


def is_cost_compatible(
    order: Sequence[Element], costs: Mapping[Element, float], blue: frozenset
) -> bool:
    """Check the two follower-ordering constraints: cheaper first, and blue
    before red when costs tie."""
    position = {element: where for where, element in enumerate(order)}
    for e in order:
        for f in order:
            if costs[e] < costs[f] and not position[e] < position[f]:
                return False
            if costs[e] == costs[f] and e in blue and f not in blue and not position[e] < position[f]:
                return False
    return True


@dataclass(frozen=True)
class StackelbergOutcome:
    revenue: float
    bought_blue: frozenset


def revenue_of_prices(instance: StackelbergInstance, prices: Mapping[Element, float]) -> StackelbergOutcome:
    """Revenue when the follower buys a cheapest base under the given prices.

    The follower may use any cost-compatible ordering; the revenue does not
    depend on which, so the canonical one is used.  Blue elements may be
    UNPRICED, which keeps them out of every cheapest base.
    """
    for element in instance.blue:
        price = prices[element]
        if not (price > 0 or price == UNPRICED):
            raise ValueError(f"price of blue element {element!r} must be positive or UNPRICED")
    order = cost_compatible_ordering(instance, prices)
    base = greedy(instance.matroid, instance.matroid.ground, order)
    bought = frozenset(base & instance.blue)
    if any(prices[e] == UNPRICED for e in bought):
        raise AssertionError("an unpriced blue element was bought; red elements cannot span")
    revenue = sum(sorted(prices[e] for e in bought))
    return StackelbergOutcome(revenue, bought)


def check_tiebreak_independence(
    instance: StackelbergInstance,
    prices: Mapping[Element, float],
    trials: int,
    rng: Random | None = None,
) -> bool:
    """Sample random cost-compatible orderings and confirm the revenue and
    the per-price-level count of bought blue elements never change."""
    rng = rng or Random(0)
    costs = instance.effective_costs(prices)
    blue = instance.blue

    def level_counts(bought: frozenset) -> dict:
        counts: dict = {}
        for e in bought:
            counts[prices[e]] = counts.get(prices[e], 0) + 1
        return counts

    reference = revenue_of_prices(instance, prices)
    reference_counts = level_counts(reference.bought_blue)

    blocks: dict[tuple, list] = {}
    for element in instance.matroid.ground:
        block = (costs[element], 0 if element in blue else 1)
        blocks.setdefault(block, []).append(element)
    block_keys = sorted(blocks)

    for _ in range(trials):
        order: list = []
        for block in block_keys:
            members = blocks[block][:]
            rng.shuffle(members)
            order.extend(members)
        base = greedy(instance.matroid, instance.matroid.ground, order)
        bought = frozenset(base & blue)
        revenue = sum(sorted(prices[e] for e in bought))
        if revenue != reference.revenue or level_counts(bought) != reference_counts:
            return False
    return True


@dataclass(frozen=True)
class UniformStackelbergResult:
    price: float
    revenue: float
    bought_blue: frozenset
    candidates: tuple[tuple[float, float], ...]


def uniform_pricing_stackelberg(instance: StackelbergInstance) -> UniformStackelbergResult:
    """Price every blue element at a common red cost level; keep the best.

    Ties are broken toward the largest level.
    """
    best: UniformStackelbergResult | None = None
    candidates = []
    for level in instance.cost_levels:
        prices = {e: level for e in instance.blue}
        outcome = revenue_of_prices(instance, prices)
        candidates.append((level, outcome.revenue))
        if best is None or outcome.revenue >= best.revenue:
            best = UniformStackelbergResult(level, outcome.revenue, outcome.bought_blue, ())
    if best is None:
        raise ValueError("an instance must have at least one red cost level")
    return UniformStackelbergResult(best.price, best.revenue, best.bought_blue, tuple(candidates))


@dataclass(frozen=True)
class StackelbergSolution:
    prices: dict
    revenue: float


def brute_force_stackelberg(instance: StackelbergInstance, guard: int = 10**7) -> StackelbergSolution:
    """Exact optimum over the grid of red cost levels plus UNPRICED per blue.

    Restricting to that grid loses nothing: any price strictly between
    levels can be raised to the next level, and anything above the top level
    is never bought.
    """
    blue = sorted(instance.blue, key=_sort_key)
    levels = list(instance.cost_levels) + [UNPRICED]
    total = len(levels) ** len(blue)
    if total > guard:
        raise SearchSpaceTooLarge(f"{total} price assignments exceed the guard {guard}")
    best: StackelbergSolution | None = None
    for assignment in itertools.product(levels, repeat=len(blue)):
        prices = dict(zip(blue, assignment))
        outcome = revenue_of_prices(instance, prices)
        if best is None or outcome.revenue > best.revenue:
            best = StackelbergSolution(prices, outcome.revenue)
    assert best is not None
    return best


class PricedCopyMatroid(Matroid):
    """The auxiliary matroid on red elements plus (blue, level) pairs.

    A set is independent when it takes at most one copy per blue element and
    its projection (reds plus the blue elements behind the chosen copies) is
    independent in the base matroid.  For graphic matroids this is exactly
    the graph with each blue edge replaced by one parallel copy per level.
    """

    def __init__(self, base: Matroid, blue: frozenset, levels: Sequence):
        self._base = base
        self._blue_levels = tuple(levels)
        pairs = [(e, q) for e in sorted(blue, key=_sort_key) for q in self._blue_levels]
        reds = [e for e in base.ground if e not in blue]
        super().__init__(tuple(reds) + tuple(pairs))
        self._blue = blue
        self._reds = frozenset(reds)

    def is_independent(self, subset: Iterable[Element]) -> bool:
        members = frozenset(subset)
        reds = {e for e in members if e in self._reds}
        copies = members - reds
        chosen_blue = [e for e, _ in copies]
        if len(chosen_blue) != len(set(chosen_blue)):
            return False
        return self._base.is_independent(reds | set(chosen_blue))


class StackelbergChoiceModel(ChoiceModel):
    """Choice probabilities encoding the follower's greedy purchase.

    Offering pair set S makes the follower run greedy on the auxiliary
    matroid over the reds plus S; each selected pair is chosen with exact
    probability 1/|B|.
    """

    def __init__(self, instance: StackelbergInstance):
        levels = instance.cost_levels
        blue = sorted(instance.blue, key=_sort_key)
        self._pairs = tuple((e, q) for e in blue for q in levels)
        self._pair_index = {pair: where + 1 for where, pair in enumerate(self._pairs)}
        super().__init__(len(self._pairs))
        self._instance = instance
        self._aux = PricedCopyMatroid(instance.matroid, instance.blue, levels)
        self._reds = frozenset(e for e in instance.matroid.ground if e not in instance.blue)
        red_costs = instance.red_costs

        def key(element: Element) -> tuple:
            if element in self._reds:
                return (red_costs[element], 1, _sort_key(element))
            return (element[1], 0, _sort_key(element))

        self._order = tuple(sorted(self._aux.ground, key=key))
        self._cache: dict[Subset, frozenset] = {}

    @property
    def pairs(self) -> tuple:
        return self._pairs

    @property
    def auxiliary_matroid(self) -> PricedCopyMatroid:
        return self._aux

    @property
    def reference_order(self) -> tuple:
        return self._order

    def _selection(self, S: Subset) -> frozenset:
        cached = self._cache.get(S)
        if cached is None:
            offered = self._reds | {self._pairs[where - 1] for where in S}
            cached = greedy(self._aux, offered, self._order)
            self._cache[S] = cached
        return cached

    def _member_probability(self, x: int, S: Subset):
        blue_count = len(self._instance.blue)
        if self._pairs[x - 1] in self._selection(S):
            return Fraction(1, blue_count)
        return Fraction(0)


def reduce_to_assortment(instance: StackelbergInstance, guard: int = 20) -> AssortmentInstance:
    """Restate the pricing problem as an assortment problem.

    Products are (blue element, cost level) pairs earning |B| * level; the
    optimum revenue is preserved, and uniform pricing at a level matches the
    revenue-ordered candidate at the corresponding threshold.
    """
    model = StackelbergChoiceModel(instance)
    if model.n > guard:
        raise GroundSetTooLarge(f"reduction would create {model.n} products; guard is {guard}")
    blue_count = len(instance.blue)
    revenue = [blue_count * q for (_, q) in model.pairs]
    return AssortmentInstance(model, revenue)
