"""Revenue-ordered assortments, the exact oracle, and approximation bounds.

An assortment instance pairs a choice model with a positive revenue per
product.  The revenue-ordered strategy evaluates one candidate set per
distinct revenue level (all products priced at least that level) and keeps
the best.  Three lower bounds relate that value to the true optimum: one in
the number of distinct revenues, one in the spread of revenues, and one in
the distribution of purchases inside an optimal assortment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .axioms import check_axioms
from .errors import BoundCUnavailable, GroundSetTooLarge, NonPositiveRevenue, RegularityViolation
from .models import ChoiceModel, TightExampleModel, demand, enumerate_subsets, evaluate_revenue

RTOL = 1e-9


class AssortmentInstance:
    """A choice model plus a positive revenue for each product."""

    def __init__(self, model: ChoiceModel, revenue: Sequence[float]):
        if len(revenue) != model.n:
            raise ValueError(f"expected {model.n} revenues, got {len(revenue)}")
        for x, r in enumerate(revenue, start=1):
            if not r > 0:
                raise NonPositiveRevenue(f"revenue of product {x} is {r}; must be > 0")
        self._model = model
        self._revenue = tuple(revenue)

    @property
    def model(self) -> ChoiceModel:
        return self._model

    @property
    def revenue(self) -> tuple:
        return self._revenue

    @property
    def n(self) -> int:
        return self._model.n

    def revenue_of(self, x: int):
        return self._revenue[x - 1]

    @property
    def levels(self) -> tuple:
        """Distinct revenue values r_1 < ... < r_k (exact-equality dedup)."""
        return tuple(sorted(set(self._revenue)))

    def threshold_set(self, level) -> frozenset[int]:
        """All products with revenue at least the given level."""
        return frozenset(x for x in range(1, self.n + 1) if self._revenue[x - 1] >= level)

    def assortment_revenue(self, S: Iterable[int]):
        return evaluate_revenue(self._model, self._revenue, S)


@dataclass(frozen=True)
class AssortmentSolution:
    """An offer set with its expected revenue and the method that found it."""

    assortment: frozenset[int]
    revenue: float
    method: str


@dataclass(frozen=True)
class RevenueOrderedResult:
    """Best revenue-ordered assortment plus the revenue of every candidate.

    candidates lists (threshold, revenue) pairs in increasing threshold
    order, one per distinct revenue level.
    """

    solution: AssortmentSolution
    candidates: tuple[tuple[float, float], ...]


def revenue_ordered(instance: AssortmentInstance) -> RevenueOrderedResult:
    """Evaluate every threshold set and keep the best.

    Ties are broken toward the largest threshold, i.e. the smallest
    candidate set.
    """
    best_set: frozenset[int] = frozenset()
    best_revenue = None
    candidates = []
    for level in instance.levels:
        S = instance.threshold_set(level)
        value = instance.assortment_revenue(S)
        candidates.append((level, value))
        if best_revenue is None or value >= best_revenue:
            best_revenue = value
            best_set = S
    if best_revenue is None:
        best_revenue = 0.0
    return RevenueOrderedResult(
        AssortmentSolution(best_set, best_revenue, "revenue-ordered"),
        tuple(candidates),
    )


def brute_force_optimum(instance: AssortmentInstance, guard: int = 20) -> AssortmentSolution:
    """Exact optimum by enumerating every subset (the empty set included).

    Revenue ties are broken toward the lexicographically smallest subset, so
    the result is deterministic.
    """
    if instance.n > guard:
        raise GroundSetTooLarge(f"n={instance.n} exceeds the enumeration guard {guard}")
    best_key: tuple[int, ...] = ()
    best_set: frozenset[int] = frozenset()
    best_revenue = 0
    first = True
    for subset in enumerate_subsets(instance.n, guard):
        value = instance.assortment_revenue(subset) if subset else 0
        if first or value > best_revenue or (value == best_revenue and subset < best_key):
            best_key = subset
            best_set = frozenset(subset)
            best_revenue = value
            first = False
    return AssortmentSolution(best_set, best_revenue, "brute-force")


@dataclass(frozen=True)
class BoundReport:
    """The three lower bounds on the revenue-ordered approximation ratio.

    bound_a: 1/k for k distinct revenue levels.
    bound_b_exact: 1 / sum_i (r_i - r_{i-1}) / r_i, with r_0 = 0.
    bound_b_log: 1 / (1 + ln rho), rho = r_k / r_1; never above bound_b_exact.
    bound_c_*: analogous bounds from the purchase masses N_i inside a
        supplied optimal assortment; None when no optimum was supplied or
        nothing sells in it.
    nu: N_1 / N_ell.
    lambda_tilde: purchase probability when offering only the top-revenue
        products; on instances with an optimum supplied, nu <= 1/lambda_tilde.
    n_masses: the N_i themselves (diagnostics), None without an optimum.
    """

    n_levels: int
    bound_a: float
    bound_b_exact: float
    bound_b_log: float
    lambda_tilde: float
    bound_c_exact: float | None = None
    bound_c_log: float | None = None
    nu: float | None = None
    ell: int | None = None
    n_masses: tuple[float, ...] | None = None


def _bound_c(instance: AssortmentInstance, optimal: AssortmentSolution):
    """Purchase-mass bound w.r.t. an optimal assortment; raises if nothing sells."""
    levels = instance.levels
    k = len(levels)
    S = optimal.assortment
    probs = {x: instance.model.evaluate(x, S) for x in sorted(S)}
    masses = []
    for level in levels:
        masses.append(float(sum(p for x, p in probs.items() if instance.revenue_of(x) >= level)))
    if not masses or masses[0] <= 0:
        raise BoundCUnavailable("no product sells in the supplied optimal assortment")
    ell = max(i + 1 for i in range(k) if masses[i] > 0)
    padded = masses + [0.0]
    total = sum((padded[i] - padded[i + 1]) / padded[i] for i in range(ell))
    nu = masses[0] / masses[ell - 1]
    return 1.0 / total, 1.0 / (1.0 + math.log(nu)), nu, ell, tuple(masses)


def compute_bounds(instance: AssortmentInstance, optimal: AssortmentSolution | None = None) -> BoundReport:
    """Compute the approximation-ratio bounds for an instance.

    The purchase-mass bound needs an optimal assortment; its fields stay
    None when none is supplied or when nothing sells in it (the latter can
    be surfaced as an error via require_optimal_bound).
    """
    levels = instance.levels
    k = len(levels)
    if k == 0:
        raise ValueError("bounds are undefined for an empty catalogue")
    ratio_sum = 0.0
    previous = 0.0
    for level in levels:
        ratio_sum += (level - previous) / level
        previous = level
    rho = levels[-1] / levels[0]
    lambda_tilde = float(demand(instance.model, instance.threshold_set(levels[-1])))
    report = BoundReport(
        n_levels=k,
        bound_a=1.0 / k,
        bound_b_exact=1.0 / ratio_sum,
        bound_b_log=1.0 / (1.0 + math.log(rho)),
        lambda_tilde=lambda_tilde,
    )
    if optimal is None:
        return report
    try:
        c_exact, c_log, nu, ell, masses = _bound_c(instance, optimal)
    except BoundCUnavailable:
        return report
    return BoundReport(
        n_levels=k,
        bound_a=report.bound_a,
        bound_b_exact=report.bound_b_exact,
        bound_b_log=report.bound_b_log,
        lambda_tilde=lambda_tilde,
        bound_c_exact=c_exact,
        bound_c_log=c_log,
        nu=nu,
        ell=ell,
        n_masses=masses,
    )


def require_optimal_bound(instance: AssortmentInstance, optimal: AssortmentSolution):
    """As compute_bounds with an optimum, but BoundCUnavailable propagates."""
    _bound_c(instance, optimal)
    return compute_bounds(instance, optimal)


def check_technical_bound(
    instance: AssortmentInstance, optimal: AssortmentSolution, rtol: float = RTOL
) -> bool:
    """revenue(S_i) >= r_i * sum_{x in S* and S_i} P(x, S*), for every level i.

    The workhorse inequality behind all three guarantees; exposed so it can
    be verified on its own.
    """
    S_star = optimal.assortment
    probs = {x: instance.model.evaluate(x, S_star) for x in sorted(S_star)}
    for level in instance.levels:
        S_i = instance.threshold_set(level)
        lhs = instance.assortment_revenue(S_i)
        rhs = level * sum(p for x, p in probs.items() if x in S_i)
        if lhs < rhs - rtol * max(1.0, abs(rhs)):
            return False
    return True


@dataclass(frozen=True)
class GuaranteeReport:
    """Outcome of checking the revenue-ordered guarantees on one instance."""

    passed: bool
    ratio: float
    optimum: AssortmentSolution
    heuristic: AssortmentSolution
    bounds: BoundReport
    failures: tuple[str, ...]


def verify_guarantee(instance: AssortmentInstance, guard: int = 20, rtol: float = RTOL) -> GuaranteeReport:
    """Assert revord >= bound * OPT for every applicable bound.

    The guarantees are only claimed for regular models, so a failed
    regularity check raises RegularityViolation.  The realized ratio
    revord/OPT is reported (1.0 when the optimum revenue is zero).
    """
    report = check_axioms(instance.model, guard=guard)
    if not report.regularity.passed:
        raise RegularityViolation(
            f"model violates regularity at witness {report.regularity.witness}",
            witness=report.regularity.witness,
        )
    optimum = brute_force_optimum(instance, guard=guard)
    heuristic = revenue_ordered(instance).solution
    bounds = compute_bounds(instance, optimal=optimum)
    opt_value = float(optimum.revenue)
    heuristic_value = float(heuristic.revenue)
    applicable = [("A", bounds.bound_a), ("B", bounds.bound_b_exact)]
    if bounds.bound_c_exact is not None:
        applicable.append(("C", bounds.bound_c_exact))
    failures = tuple(
        f"bound {name}: revord {heuristic_value} < {factor} * OPT {opt_value}"
        for name, factor in applicable
        if heuristic_value < factor * opt_value * (1.0 - rtol)
    )
    ratio = heuristic_value / opt_value if opt_value > 0 else 1.0
    return GuaranteeReport(not failures, ratio, optimum, heuristic, bounds, failures)


def generate_tight_instance(k: int, epsilon: float) -> AssortmentInstance:
    """Worst-case instance: the ratio OPT/revord approaches k as epsilon -> 0.

    Pair (i, j) earns epsilon^{-j}, so the distinct revenue levels are
    exactly epsilon^{-1} .. epsilon^{-k}.
    """
    model = TightExampleModel(k, epsilon)
    revenue = [(1.0 / model.epsilon) ** j for (_, j) in model.pairs]
    return AssortmentInstance(model, revenue)
