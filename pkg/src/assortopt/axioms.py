"""Exhaustive checkers for the behavioural axioms of a choice model.

Every checker materialises the model as a table (one evaluation per (x, S)
pair), walks offer sets in the canonical order of
:func:`assortopt.models.enumerate_subsets`, and reports the first violation
found, so witnesses are reproducible.  Probabilities are compared with an
absolute tolerance of 1e-9; strict violations beyond tolerance fail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .models import ChoiceModel, enumerate_subsets

ATOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single check: a verdict, an optional witness, and the
    largest violation magnitude seen (0.0 on a pass)."""

    passed: bool
    witness: tuple | None = None
    gap: float = 0.0

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom verdicts for a choice model.

    nonnegativity: P(x, S) >= 0 everywhere.
    unavailable_zero: P(x, S) = 0 whenever x is not offered.
    substochastic: sum_{x in S} P(x, S) <= 1 for every S.
    regularity: P(x, S) >= P(x, S') whenever S is a subset of S', for every
        x in S union {0}.
    """

    nonnegativity: CheckResult
    unavailable_zero: CheckResult
    substochastic: CheckResult
    regularity: CheckResult

    @property
    def passed(self) -> bool:
        return (
            self.nonnegativity.passed
            and self.unavailable_zero.passed
            and self.substochastic.passed
            and self.regularity.passed
        )


def _tabulate(model: ChoiceModel, guard: int):
    subsets = [frozenset(s) for s in enumerate_subsets(model.n, guard)]
    probs = {S: {x: model.evaluate(x, S) for x in sorted(S)} for S in subsets}
    return subsets, probs


def _superset_pairs(n: int, subsets):
    """Yield (S, S') with S a subset of S', S in canonical order and S' grown
    from S by complement subsets in canonical order.  3^n pairs in total."""
    for S in subsets:
        rest = sorted(set(range(1, n + 1)) - S)
        for size in range(len(rest) + 1):
            for extra in itertools.combinations(rest, size):
                yield S, S | frozenset(extra)


def check_axioms(model: ChoiceModel, guard: int = 20, atol: float = ATOL) -> AxiomReport:
    """Verify the four axioms of a regular discrete choice model.

    Witnesses are (x, S) for nonnegativity and availability, (S,) for the
    at-most-one-purchase axiom, and (x, S, S') for regularity.
    """
    subsets, probs = _tabulate(model, guard)

    nonnegativity = CheckResult(True)
    for S in subsets:
        for x in sorted(S):
            p = probs[S][x]
            if p < -atol:
                nonnegativity = CheckResult(False, (x, S), float(-p))
                break
        else:
            p0 = 1 - sum(probs[S].values())
            if p0 < -atol:
                nonnegativity = CheckResult(False, (0, S), float(-p0))
        if not nonnegativity.passed:
            break

    unavailable_zero = CheckResult(True)
    for S in subsets:
        for x in range(1, model.n + 1):
            if x in S:
                continue
            p = model.evaluate(x, S)
            if abs(p) > atol:
                unavailable_zero = CheckResult(False, (x, S), float(abs(p)))
                break
        if not unavailable_zero.passed:
            break

    substochastic = CheckResult(True)
    for S in subsets:
        total = sum(probs[S].values())
        if total > 1 + atol:
            substochastic = CheckResult(False, (S,), float(total - 1))
            break

    regularity = CheckResult(True)
    sold = {S: sum(probs[S].values()) for S in subsets}
    for S, larger in _superset_pairs(model.n, subsets):
        for x in sorted(S):
            drop = probs[larger][x] - probs[S][x]
            if drop > atol:
                regularity = CheckResult(False, (x, S, larger), float(drop))
                break
        else:
            zero_drop = (1 - sold[larger]) - (1 - sold[S])
            if zero_drop > atol:
                regularity = CheckResult(False, (0, S, larger), float(zero_drop))
        if not regularity.passed:
            break

    return AxiomReport(nonnegativity, unavailable_zero, substochastic, regularity)


def check_purchase_monotonicity(model: ChoiceModel, guard: int = 20, atol: float = ATOL) -> CheckResult:
    """Check that the purchase probability never drops when the offer grows.

    The witness on failure is the pair (S, S').  Regular models always pass.
    """
    subsets, probs = _tabulate(model, guard)
    sold = {S: sum(probs[S].values()) for S in subsets}
    for S, larger in _superset_pairs(model.n, subsets):
        if sold[S] > sold[larger] + atol:
            return CheckResult(False, (S, larger), float(sold[S] - sold[larger]))
    return CheckResult(True)


def check_demand_submodularity(model: ChoiceModel, guard: int = 20, atol: float = ATOL) -> CheckResult:
    """Check submodularity of the demand f(S) = sum_{x in S} P(x, S).

    Scans every pair S subset of S' and every product x, and reports the
    maximal violation of f(S' + x) - f(S') <= f(S + x) - f(S) as the gap,
    witnessed by the first (S, S', x) attaining it.  Random-utility models
    pass; regularity alone does not imply a pass.
    """
    subsets, probs = _tabulate(model, guard)
    sold = {S: sum(probs[S].values()) for S in subsets}
    worst = CheckResult(True)
    for S, larger in _superset_pairs(model.n, subsets):
        for x in range(1, model.n + 1):
            gain_small = sold[S | {x}] - sold[S]
            gain_large = sold[larger | {x}] - sold[larger]
            gap = gain_large - gain_small
            if gap > atol and gap > worst.gap:
                worst = CheckResult(False, (S, larger, x), float(gap))
    return worst
