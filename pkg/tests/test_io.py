"""Serialisation round trips and generator determinism."""

from random import Random

import pytest

from assortopt import (
    CoverageCapacity,
    HfamModel,
    MallowsModel,
    MixedMnlModel,
    MnlModel,
    StochasticPreferenceModel,
    TableCapacity,
    TabularModel,
    TightExampleModel,
    check_axioms,
)
from assortopt.generators import (
    generate,
    random_stackelberg,
    random_udp_min,
    random_udp_rank,
)
from assortopt.io import (
    dumps,
    instance_from_dict,
    instance_to_dict,
    loads,
    model_from_dict,
    model_to_dict,
)
from assortopt.models import enumerate_subsets


def assert_same_model(a, b):
    assert a.n == b.n
    for subset in enumerate_subsets(a.n):
        for x in list(subset) + [0]:
            assert a.evaluate(x, subset) == b.evaluate(x, subset)


MODELS = [
    MnlModel([0.4, -1.0, 2.2]),
    MixedMnlModel([(0.3, [0.0, 1.0]), (0.7, [1.0, -1.0])]),
    StochasticPreferenceModel(2, [(0.25, (0, 1, 2)), (0.75, (2, 0, 1))]),
    MallowsModel((1, 0, 2), 1.5),
    HfamModel((2, 1), CoverageCapacity(2, [0.5, 0.25], [[0], [0, 1]])),
    HfamModel(
        (1, 2),
        TableCapacity(2, {(): 0.0, (1,): 0.4, (2,): 0.3, (1, 2): 0.6}),
    ),
    TightExampleModel(3, 0.1),
    TabularModel(2, {(): {}, (1,): {1: 0.5}, (2,): {2: 0.25}, (1, 2): {1: 0.5, 2: 0.25}}),
]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_model_round_trip(model):
    rebuilt = model_from_dict(loads(dumps(model_to_dict(model))))
    assert_same_model(model, rebuilt)


def test_unknown_model_type_rejected():
    with pytest.raises(ValueError):
        model_from_dict({"type": "nested_logit"})


class TestInstanceRoundTrips:
    def test_assortment(self):
        data = generate("assortment", "stochastic_preference", {}, seed=5)
        instance = instance_from_dict(data)
        again = instance_to_dict(instance, seed=5)
        assert dumps(data) == dumps(again)

    def test_udp_min(self):
        instance = random_udp_min(Random(9))
        data = instance_to_dict(instance)
        rebuilt = instance_from_dict(data)
        assert rebuilt.n == instance.n
        assert rebuilt.consumers == instance.consumers
        assert dumps(instance_to_dict(rebuilt)) == dumps(data)

    def test_udp_rank(self):
        instance = random_udp_rank(Random(10))
        data = instance_to_dict(instance)
        rebuilt = instance_from_dict(data)
        assert rebuilt.consumers == instance.consumers

    def test_stackelberg(self):
        instance = random_stackelberg(Random(11))
        data = instance_to_dict(instance)
        rebuilt = instance_from_dict(data)
        assert rebuilt.red_costs == instance.red_costs
        assert rebuilt.blue == instance.blue
        assert rebuilt.matroid.edges == instance.matroid.edges
        assert dumps(instance_to_dict(rebuilt)) == dumps(data)

    def test_multiperiod(self):
        data = generate("multiperiod", "mnl", {}, seed=3)
        instance = instance_from_dict(data)
        assert dumps(instance_to_dict(instance, seed=3)) == dumps(data)


class TestGenerate:
    def test_deterministic_and_byte_identical(self):
        for kind in ("assortment", "udp_min", "udp_rank", "stackelberg", "multiperiod"):
            one = dumps(generate(kind, None, {}, seed=17))
            two = dumps(generate(kind, None, {}, seed=17))
            assert one == two

    def test_distinct_seeds_distinct_instances(self):
        a = dumps(generate("assortment", "mnl", {}, seed=1))
        b = dumps(generate("assortment", "mnl", {}, seed=2))
        assert a != b

    def test_generated_models_pass_axioms(self):
        for family in ("mnl", "mixed_mnl", "stochastic_preference", "mallows", "hfam", "tight"):
            for seed in range(3):
                data = generate("assortment", family, {}, seed=seed)
                instance = instance_from_dict(data)
                assert check_axioms(instance.model).passed, (family, seed)

    def test_tight_family_params(self):
        data = generate("assortment", "tight", {"k": 3, "eps": 0.1}, seed=0)
        instance = instance_from_dict(data)
        assert instance.n == 6
        assert check_axioms(instance.model).passed

    def test_invalid_kind_and_family(self):
        from assortopt import InvalidParams

        with pytest.raises(InvalidParams):
            generate("portfolio", None, {}, seed=0)
        with pytest.raises(InvalidParams):
            generate("assortment", "nested", {}, seed=0)

    def test_stackelberg_has_red_spanning_base(self):
        for seed in range(10):
            data = generate("stackelberg", None, {}, seed=seed)
            instance = instance_from_dict(data)  # constructor re-validates
            assert instance.cost_levels
