"""Finite-horizon, capacity-limited selling with revenue-ordered offer sets.

One customer arrives per period.  The firm, restricted to revenue-ordered
assortments, picks a threshold each period given the remaining horizon t and
inventory q.  The value recursion is

    J_t(q, l) = sum_x P(x, A_l) * (r(x) + J_{t-1}(q-1)) + P(0, A_l) * J_{t-1}(q)

with J = 0 once t or q hits zero, J_t(q) = max_l J_t(q, l), and l*_t(q) the
least maximising threshold index.  For regular models l* is monotone in both
state variables (nesting by fare order).
"""

from __future__ import annotations

from dataclasses import dataclass

from .assortment import AssortmentInstance
from .axioms import check_axioms
from .errors import DeltaOutOfRange
from .models import demand

RTOL = 1e-9


@dataclass(frozen=True)
class RevenueLadder:
    """Products re-indexed by non-increasing revenue, plus the per-threshold
    offer sets and their one-period statistics.

    levels are the distinct revenues r_1 < ... < r_k; prefix l contains the
    j(l) products priced at least r_l, so larger indices mean smaller sets.
    expected_revenue[l-1] and purchase_probability[l-1] are the one-period
    revenue and sale probability of offering prefix l.
    """

    order: tuple[int, ...]
    levels: tuple
    prefix_sizes: tuple[int, ...]
    prefixes: tuple[frozenset, ...]
    expected_revenue: tuple[float, ...]
    purchase_probability: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.levels)


def revenue_ladder(instance: AssortmentInstance) -> RevenueLadder:
    """Precompute the nested revenue-ordered assortments of an instance."""
    order = tuple(sorted(range(1, instance.n + 1), key=lambda x: (-instance.revenue_of(x), x)))
    levels = instance.levels
    prefix_sizes = []
    prefixes = []
    expected = []
    sold = []
    for level in levels:
        size = sum(1 for x in order if instance.revenue_of(x) >= level)
        members = frozenset(order[:size])
        prefix_sizes.append(size)
        prefixes.append(members)
        expected.append(float(instance.assortment_revenue(members)))
        sold.append(float(demand(instance.model, members)))
    return RevenueLadder(order, levels, tuple(prefix_sizes), tuple(prefixes), tuple(expected), tuple(sold))


class MultiPeriodInstance:
    """An assortment instance with a selling horizon and an inventory cap."""

    def __init__(self, base: AssortmentInstance, horizon: int, capacity: int):
        if horizon < 1 or capacity < 1:
            raise ValueError("horizon and capacity must be positive")
        if base.n < 1:
            raise ValueError("the catalogue must contain at least one product")
        self._base = base
        self._horizon = horizon
        self._capacity = capacity
        self._ladder = revenue_ladder(base)

    @property
    def base(self) -> AssortmentInstance:
        return self._base

    @property
    def horizon(self) -> int:
        return self._horizon

    @property
    def capacity(self) -> int:
        return self._capacity

    @property
    def ladder(self) -> RevenueLadder:
        return self._ladder


@dataclass(frozen=True)
class DpTable:
    """Tabulated values of the capacity DP.

    value[t][q] holds J_t(q); value_by_level[t][q][l-1] holds J_t(q, l);
    lstar[t][q] is the least l attaining the cell maximum under the relative
    equality tolerance (1 on boundary cells, where every choice is
    worthless).  regularity_ok is None when the model was too large to
    check.
    """

    horizon: int
    capacity: int
    k: int
    value: tuple[tuple[float, ...], ...]
    value_by_level: tuple[tuple[tuple[float, ...], ...], ...]
    lstar: tuple[tuple[int, ...], ...]
    regularity_ok: bool | None

    def marginal(self, t: int, q: int) -> float:
        """Delta J_t(q) = J_t(q) - J_t(q-1), the value of one inventory unit."""
        return self.value[t][q] - self.value[t][q - 1]


def _argmin_level(values, best: float, rtol: float) -> int:
    # Relative tolerance with a unit floor: near-zero values would otherwise
    # never tie, and ties there are exactly the degenerate all-worthless cells.
    slack = rtol * max(1.0, abs(best))
    for where, value in enumerate(values):
        if best - value <= slack:
            return where + 1
    raise AssertionError("the maximum is always within tolerance of itself")


def solve_dp(
    instance: MultiPeriodInstance,
    rtol: float = RTOL,
    check_regularity: bool = True,
    guard: int = 20,
) -> DpTable:
    """Tabulate J, the per-threshold values, and the least optimal thresholds.

    The monotonicity guarantees assume a regular model, so the table records a
    regularity verdict (a warning flag, not an error: the DP itself is well
    defined regardless).
    """
    ladder = instance.ladder
    T, Q, k = instance.horizon, instance.capacity, ladder.k
    regularity_ok: bool | None = None
    if check_regularity and instance.base.n <= guard:
        regularity_ok = check_axioms(instance.base.model, guard=guard).regularity.passed

    value = [[0.0] * (Q + 1) for _ in range(T + 1)]
    by_level = [[[0.0] * k for _ in range(Q + 1)] for _ in range(T + 1)]
    lstar = [[1] * (Q + 1) for _ in range(T + 1)]
    for t in range(1, T + 1):
        for q in range(1, Q + 1):
            cell = []
            for level in range(k):
                sell = ladder.purchase_probability[level]
                gained = ladder.expected_revenue[level]
                cell.append(
                    gained + sell * value[t - 1][q - 1] + (1.0 - sell) * value[t - 1][q]
                )
            best = max(cell)
            value[t][q] = best
            by_level[t][q] = cell
            lstar[t][q] = _argmin_level(cell, best, rtol)
    return DpTable(
        horizon=T,
        capacity=Q,
        k=k,
        value=tuple(tuple(row) for row in value),
        value_by_level=tuple(tuple(tuple(cell) for cell in row) for row in by_level),
        lstar=tuple(tuple(row) for row in lstar),
        regularity_ok=regularity_ok,
    )


@dataclass(frozen=True)
class MonotonicityReport:
    passed: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.passed


def check_nesting_monotonicity(table: DpTable) -> MonotonicityReport:
    """l*_t(q) never grows with remaining capacity and never shrinks with
    remaining time; the witness names the first violating cell."""
    for t in range(1, table.horizon + 1):
        for q in range(2, table.capacity + 1):
            if table.lstar[t][q] > table.lstar[t][q - 1]:
                return MonotonicityReport(False, ("capacity", t, q))
    for t in range(2, table.horizon + 1):
        for q in range(1, table.capacity + 1):
            if table.lstar[t][q] < table.lstar[t - 1][q]:
                return MonotonicityReport(False, ("time", t, q))
    return MonotonicityReport(True)


def check_marginal_value(table: DpTable, rtol: float = RTOL) -> MonotonicityReport:
    """The marginal value of capacity is concave in q and non-decreasing in t.

    These hold for any choice model (regular or not); the tolerance only
    absorbs floating-point noise.
    """
    scale = max(1.0, table.value[table.horizon][table.capacity])
    slack = rtol * scale
    for t in range(0, table.horizon + 1):
        for q in range(2, table.capacity + 1):
            if table.marginal(t, q - 1) < table.marginal(t, q) - slack:
                return MonotonicityReport(False, ("concavity", t, q))
    for t in range(1, table.horizon + 1):
        for q in range(1, table.capacity + 1):
            if table.marginal(t, q) < table.marginal(t - 1, q) - slack:
                return MonotonicityReport(False, ("time", t, q))
    return MonotonicityReport(True)


def lstar_delta(instance: AssortmentInstance, delta: float, rtol: float = RTOL) -> int:
    """Least optimal threshold after shifting every revenue by delta.

    The shift must keep the top revenue nonnegative.  As delta grows the
    result can only decrease (larger assortments become optimal), which is
    what makes the DP thresholds monotone.
    """
    ladder = revenue_ladder(instance)
    top = ladder.levels[-1]
    if top + delta < -rtol * max(1.0, top):
        raise DeltaOutOfRange(f"shift {delta} drives the top revenue {top} negative")
    values = [
        ladder.expected_revenue[level] + ladder.purchase_probability[level] * delta
        for level in range(ladder.k)
    ]
    return _argmin_level(values, max(values), rtol)
