import math

import numpy as np
import pytest

from infoshare.attacks import (
    NO_ATTACK,
    AttackCatalogue,
    AttackScenarioSpec,
    Strategy,
    active_count,
    sample_catalogue,
    select_targets,
    targeting_probabilities,
)
from infoshare.errors import ValidationError
from infoshare.network import DependencyNetwork, NetworkGenSpec, generate_scale_free


def star(n, weight=0.5):
    """Every leaf provides a service to hub 0."""
    A = np.zeros((n, n))
    A[1:, 0] = weight
    return DependencyNetwork(A)


class TestCatalogue:
    def test_zero_sd_gives_mean(self):
        spec = AttackScenarioSpec(impact_sd=0.0)
        cat = sample_catalogue(spec, 10, np.random.default_rng(0))
        assert np.all(cat.D == 0.4)

    def test_paper_defaults_are_clamped(self):
        spec = AttackScenarioSpec()
        for seed in range(50):
            D = sample_catalogue(spec, 10, np.random.default_rng(seed)).D
            assert D.min() >= 0.2 and D.max() <= 0.6

    def test_deterministic(self):
        spec = AttackScenarioSpec()
        a = sample_catalogue(spec, 10, np.random.default_rng(99))
        b = sample_catalogue(spec, 10, np.random.default_rng(99))
        assert a == b

    def test_round_trip(self, tmp_path):
        cat = sample_catalogue(AttackScenarioSpec(), 10, np.random.default_rng(1))
        cat.dump(tmp_path / "cat.json")
        assert AttackCatalogue.load(tmp_path / "cat.json") == cat

    def test_rejects_out_of_range_impact(self):
        with pytest.raises(ValidationError):
            AttackCatalogue([0.2, 1.3])


class TestScenarioSpec:
    def test_strategy_from_string(self):
        assert AttackScenarioSpec(strategy="in_degree").strategy is Strategy.IN_DEGREE

    def test_unknown_strategy(self):
        with pytest.raises(ValidationError) as err:
            AttackScenarioSpec(strategy="sideways")
        assert err.value.field == "strategy"

    def test_mean_outside_clamp(self):
        with pytest.raises(ValidationError):
            AttackScenarioSpec(impact_mean=0.7)

    def test_active_count_rounds_up(self):
        assert active_count(AttackScenarioSpec(active_fraction=0.3), 10) == 3
        assert active_count(AttackScenarioSpec(active_fraction=0.01), 10) == 1
        assert active_count(AttackScenarioSpec(active_fraction=0.0), 10) == 0


class TestSelectTargets:
    cat = AttackCatalogue(np.linspace(0.2, 0.6, 10))

    def test_zero_target_fraction(self):
        spec = AttackScenarioSpec(target_fraction=0.0)
        Y = select_targets(star(10), spec, self.cat, np.random.default_rng(0))
        assert np.all(Y == NO_ATTACK)

    def test_random_fraction_count_is_exact(self):
        net = generate_scale_free(NetworkGenSpec(n=50, seed=1))
        spec = AttackScenarioSpec(target_fraction=0.05)
        rng = np.random.default_rng(4)
        for _ in range(200):
            Y = select_targets(net, spec, self.cat, rng)
            assert (Y != NO_ATTACK).sum() == math.ceil(0.05 * 50)

    def test_attacks_come_from_active_subset(self):
        net = generate_scale_free(NetworkGenSpec(n=50, seed=1))
        spec = AttackScenarioSpec(target_fraction=0.5, active_fraction=0.3)
        rng = np.random.default_rng(8)
        for _ in range(200):
            Y = select_targets(net, spec, self.cat, rng)
            used = set(Y[Y != NO_ATTACK].tolist())
            assert len(used) <= 3
            assert used <= set(range(10))

    def test_star_hub_and_leaf_frequencies(self):
        n = 10
        spec = AttackScenarioSpec(strategy="in_degree", floor_probability=0.02)
        p = targeting_probabilities(star(n), spec)
        assert p[0] == (n - 1) / n
        assert np.all(p[1:] == 0.02)

        rng = np.random.default_rng(2024)
        draws = 10_000
        hits = np.zeros(n)
        for _ in range(draws):
            hits += select_targets(star(n), spec, self.cat, rng) != NO_ATTACK
        freq = hits / draws
        assert abs(freq[0] - (n - 1) / n) <= 0.02
        assert np.all(np.abs(freq[1:] - 0.02) <= 0.02)

    def test_isolated_node_hit_at_floor(self):
        net = DependencyNetwork(np.zeros((3, 3)))
        spec = AttackScenarioSpec(strategy="out_degree", floor_probability=0.02)
        rng = np.random.default_rng(77)
        hits = sum((select_targets(net, spec, self.cat, rng) != NO_ATTACK)[0] for _ in range(10_000))
        assert abs(hits / 10_000 - 0.02) <= 0.005

    def test_out_degree_uses_rows(self):
        A = np.zeros((4, 4))
        A[0, 1:] = 0.5
        p = targeting_probabilities(DependencyNetwork(A), AttackScenarioSpec(strategy="out_degree"))
        assert p[0] == 0.75
        assert np.all(p[1:] == 0.02)

    def test_probability_never_below_floor(self):
        net = generate_scale_free(NetworkGenSpec(n=50, seed=3))
        for strategy in ("in_degree", "out_degree"):
            p = targeting_probabilities(net, AttackScenarioSpec(strategy=strategy, floor_probability=0.05))
            assert p.min() >= 0.05

    def test_deterministic(self):
        net = generate_scale_free(NetworkGenSpec(n=50, seed=1))
        spec = AttackScenarioSpec(strategy="in_degree")
        a = [select_targets(net, spec, self.cat, r) for r in [np.random.default_rng(5)] * 20]
        b = [select_targets(net, spec, self.cat, r) for r in [np.random.default_rng(5)] * 20]
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
