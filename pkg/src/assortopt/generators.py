"""Seeded random instance generators for every problem kind.

All generators are deterministic functions of a ``random.Random`` stream, so
the same seed always reproduces the same instance, byte for byte once
serialised.  Generated choice models are valid by construction (each family
satisfies the axioms it claims); tests re-verify this through the checkers.
"""

from __future__ import annotations

from random import Random

from .assortment import AssortmentInstance, generate_tight_instance
from .errors import InvalidParams
from .io import instance_to_dict
from .models import (
    CoverageCapacity,
    HfamModel,
    MallowsModel,
    MixedMnlModel,
    MnlModel,
    StochasticPreferenceModel,
)
from .multiperiod import MultiPeriodInstance
from .stackelberg import GraphicMatroid, StackelbergInstance
from .udp import UdpMinInstance, UdpRankInstance

ASSORTMENT_FAMILIES = ("mnl", "mixed_mnl", "stochastic_preference", "mallows", "hfam", "tight")


def _random_revenue(rng: Random, n: int) -> list:
    """Positive revenues; integer grids half the time so duplicate levels occur."""
    if rng.random() < 0.5:
        return [rng.randint(1, 5) for _ in range(n)]
    return [round(rng.uniform(0.5, 10.0), 3) for _ in range(n)]


def _random_weights(rng: Random, count: int) -> list[float]:
    raw = [rng.uniform(0.05, 1.0) for _ in range(count)]
    total = sum(raw)
    weights = [w / total for w in raw]
    weights[-1] = 1.0 - sum(weights[:-1])
    return weights


def random_assortment_instance(family: str, rng: Random, n_max: int = 7) -> AssortmentInstance:
    """One random instance of the given model family, at most n_max products."""
    if family == "mnl":
        n = rng.randint(1, n_max)
        model = MnlModel([rng.gauss(0.0, 1.5) for _ in range(n)])
    elif family == "mixed_mnl":
        n = rng.randint(1, n_max)
        components = rng.randint(2, 4)
        weights = _random_weights(rng, components)
        model = MixedMnlModel(
            [(w, [rng.gauss(0.0, 1.5) for _ in range(n)]) for w in weights]
        )
    elif family == "stochastic_preference":
        n = rng.randint(1, n_max)
        count = rng.randint(1, 5)
        weights = _random_weights(rng, count)
        rankings = []
        for w in weights:
            order = list(range(n + 1))
            rng.shuffle(order)
            rankings.append((w, tuple(order)))
        model = StochasticPreferenceModel(n, rankings)
    elif family == "mallows":
        n = rng.randint(2, min(4, n_max))
        central = list(range(n + 1))
        rng.shuffle(central)
        model = MallowsModel(central, rng.uniform(0.0, 3.0))
    elif family == "hfam":
        n = rng.randint(1, min(6, n_max))
        points = rng.randint(2, 6)
        weights = [rng.uniform(0.05, 1.0) for _ in range(points)]
        total = sum(weights) * rng.uniform(1.0, 1.5)
        weights = [w / total for w in weights]
        covers = [
            [p for p in range(points) if rng.random() < 0.5] for _ in range(n)
        ]
        preference = list(range(1, n + 1))
        rng.shuffle(preference)
        model = HfamModel(preference, CoverageCapacity(n, weights, covers))
    elif family == "tight":
        return generate_tight_instance(rng.randint(1, 4), rng.choice([0.5, 0.1, 0.01]))
    else:
        raise InvalidParams(f"unknown assortment family {family!r}; pick one of {ASSORTMENT_FAMILIES}")
    return AssortmentInstance(model, _random_revenue(rng, model.n))


def random_udp_min(rng: Random, n_max: int = 3, m_max: int = 3) -> UdpMinInstance:
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    consumers = []
    for _ in range(m):
        bundle = [x for x in range(1, n + 1) if rng.random() < 0.6] or [rng.randint(1, n)]
        consumers.append((bundle, rng.randint(1, 9)))
    return UdpMinInstance(n, consumers)


def random_udp_rank(rng: Random, n_max: int = 3, m_max: int = 3, value_pool: int = 3) -> UdpRankInstance:
    # A small valuation pool keeps the reduced catalogue (n * distinct
    # valuations products) within enumeration guards and exercises ties.
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    consumers = []
    for _ in range(m):
        ranking = list(range(1, n + 1))
        rng.shuffle(ranking)
        consumers.append((ranking, [rng.randint(1, value_pool) for _ in range(n)]))
    return UdpRankInstance(n, consumers)


def random_stackelberg(
    rng: Random,
    max_vertices: int = 5,
    max_cost_levels: int = 2,
    max_blue: int = 3,
) -> StackelbergInstance:
    """A random graph whose red edges contain a spanning tree.

    The generator draws a random spanning tree, colours it red with costs
    from a small level set, then sprinkles blue edges (parallel edges
    allowed) and occasionally an extra red edge.
    """
    n_vertices = rng.randint(2, max_vertices)
    level_pool = sorted(rng.sample(range(1, 6), rng.randint(1, max_cost_levels)))
    edges: list[tuple[int, int]] = []
    red_costs: dict[int, float] = {}
    vertices = list(range(n_vertices))
    rng.shuffle(vertices)
    for where in range(1, n_vertices):
        u = vertices[where]
        v = vertices[rng.randint(0, where - 1)]
        red_costs[len(edges)] = rng.choice(level_pool)
        edges.append((u, v))
    if rng.random() < 0.3 and n_vertices >= 2:
        u, v = rng.sample(range(n_vertices), 2)
        red_costs[len(edges)] = rng.choice(level_pool)
        edges.append((u, v))
    blue: list[int] = []
    for _ in range(rng.randint(1, max_blue)):
        if n_vertices >= 2 and rng.random() < 0.8:
            u, v = rng.sample(range(n_vertices), 2)
        else:
            u, v = rng.choice(edges)
        blue.append(len(edges))
        edges.append((u, v))
    return StackelbergInstance(GraphicMatroid(n_vertices, edges), red_costs, blue)


def random_multiperiod(
    rng: Random,
    family: str = "stochastic_preference",
    n_max: int = 5,
    horizon_max: int = 6,
    capacity_max: int = 6,
) -> MultiPeriodInstance:
    base = random_assortment_instance(family, rng, n_max=n_max)
    return MultiPeriodInstance(base, rng.randint(1, horizon_max), rng.randint(1, capacity_max))


def generate(kind: str, family: str | None, params: dict, seed: int) -> dict:
    """Build a serialisable instance file: deterministic in (kind, family,
    params, seed)."""
    rng = Random(seed)
    params = dict(params or {})
    try:
        if kind == "assortment":
            family = family or "mnl"
            if family == "tight":
                instance = generate_tight_instance(
                    int(params.get("k", 3)), float(params.get("eps", 0.1))
                )
            else:
                instance = random_assortment_instance(
                    family, rng, n_max=int(params.get("n_max", 7))
                )
        elif kind == "udp_min":
            instance = random_udp_min(
                rng, n_max=int(params.get("n_max", 3)), m_max=int(params.get("m_max", 3))
            )
        elif kind == "udp_rank":
            instance = random_udp_rank(
                rng, n_max=int(params.get("n_max", 3)), m_max=int(params.get("m_max", 3))
            )
        elif kind == "stackelberg":
            instance = random_stackelberg(
                rng,
                max_vertices=int(params.get("v", 5)),
                max_cost_levels=int(params.get("cost_levels", 2)),
            )
        elif kind == "multiperiod":
            instance = random_multiperiod(
                rng,
                family=family or "stochastic_preference",
                n_max=int(params.get("n_max", 5)),
                horizon_max=int(params.get("T", 6)),
                capacity_max=int(params.get("Q", 6)),
            )
        else:
            raise InvalidParams(f"unknown instance kind {kind!r}")
    except (TypeError, ValueError) as error:
        if isinstance(error, InvalidParams):
            raise
        raise InvalidParams(str(error)) from error
    return instance_to_dict(instance, kind=kind, seed=seed)
