import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webbicluster.bpso import (
    Particle,
    SwarmConfig,
    decode,
    encode,
    inertia,
    run,
    sigmoid,
    step_particle,
)
from webbicluster.coherence import Bicluster, FitnessPolicy, fitness
from webbicluster.usage_matrix import AccessMatrix


class FixedDraws:
    """Stand-in generator returning preset uniforms in draw order."""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)

    def random(self, size):
        return self.values.reshape(size)


def _particle(x, v, pbest):
    return Particle(np.array(x, dtype=np.uint8), np.array(v, dtype=float),
                    np.array(pbest, dtype=np.uint8))


def _planted(seed=0, n=30, m=12):
    rng = np.random.default_rng(seed)
    values = rng.uniform(0, 10, size=(n, m))
    values[:8, :5] = rng.uniform(0, 5, 5)[None, :] + rng.uniform(0, 3, 8)[:, None]
    return AccessMatrix(values, [f"u{i}" for i in range(n)], [f"p{j}" for j in range(m)])


def _seeds(matrix, count, seed=1):
    rng = np.random.default_rng(seed)
    return [Bicluster(rng.choice(matrix.n, 4, replace=False), rng.choice(matrix.m, 3, replace=False))
            for _ in range(count)]


class TestEncoding:
    def test_hidden_bicluster(self):
        bits = encode(Bicluster([0, 1, 3], [0, 2, 3]), 4, 4)
        assert bits.tolist() == [1, 1, 0, 1, 1, 0, 1, 1]

    def test_empty_and_full(self):
        assert encode(Bicluster([], []), 4, 4).tolist() == [0] * 8
        assert encode(Bicluster(range(4), range(3)), 4, 3).tolist() == [1] * 7

    def test_decode_inverse(self):
        assert decode([1, 1, 0, 1, 1, 0, 1, 1], 4, 4) == Bicluster([0, 1, 3], [0, 2, 3])
        assert decode([0] * 8, 4, 4) == Bicluster([], [])

    def test_decode_length(self):
        with pytest.raises(ValueError, match="expected 8 bits"):
            decode([1, 0, 1], 4, 4)

    def test_encode_bounds(self):
        with pytest.raises(ValueError, match="out of bounds"):
            encode(Bicluster([5], [0]), 4, 4)


class TestSigmoid:
    @pytest.mark.parametrize("v, expected", [(0.0, 0.5), (4.0, 0.98201), (-4.0, 0.01799)])
    def test_values(self, v, expected):
        assert sigmoid(v) == pytest.approx(expected, abs=5e-6)

    def test_extremes_do_not_overflow(self):
        with np.errstate(over="raise"):
            out = sigmoid(np.array([-1000.0, 1000.0]))
        assert out.tolist() == [0.0, 1.0]

    @given(st.floats(-50, 50))
    def test_symmetry(self, v):
        assert sigmoid(-v) == pytest.approx(1 - sigmoid(v), abs=1e-12)


class TestInertia:
    def test_schedule(self):
        cfg = SwarmConfig(iter_max=100)
        assert inertia(cfg, 0) == 0.9
        assert inertia(cfg, 100) == 0.4
        assert inertia(cfg, 50) == pytest.approx(0.65, abs=1e-12)

    def test_fixed(self):
        cfg = SwarmConfig.with_inertia("fixed:0.4")
        assert inertia(cfg, 0) == inertia(cfg, 77) == 0.4
        assert cfg.inertia_label == "fixed:0.4"

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            inertia(SwarmConfig(iter_max=10), 11)

    @pytest.mark.parametrize("spec", ["fixed:", "fixed:abc", "linear"])
    def test_bad_spec(self, spec):
        with pytest.raises(ValueError):
            SwarmConfig.with_inertia(spec)


class TestStep:
    def test_worked_example(self):
        p = _particle([0], [0.0], [1])
        out = step_particle(p, np.array([1]), 0.9, SwarmConfig(), FixedDraws([0.5, 0.5, 0.5]))
        assert out.velocity[0] == pytest.approx(2.0)
        assert sigmoid(out.velocity[0]) == pytest.approx(0.8808, abs=1e-4)
        assert out.position.tolist() == [1]

    @pytest.mark.parametrize("r3, bit", [(0.49, 1), (0.51, 0)])
    def test_no_attraction(self, r3, bit):
        p = _particle([1], [0.0], [1])
        out = step_particle(p, np.array([1]), 0.9, SwarmConfig(), FixedDraws([0.3, 0.7, r3]))
        assert out.velocity[0] == 0.0
        assert out.position.tolist() == [bit]

    def test_clamped(self):
        p = _particle([0, 1], [10.0, -10.0], [0, 1])
        out = step_particle(p, np.array([0, 1]), 1.0, SwarmConfig(), FixedDraws([0.5] * 6))
        assert out.velocity.tolist() == [4.0, -4.0]

    def test_draw_order_per_component(self):
        # component 0 gets (r1, r2, r3) = (1, 0, 0.99); component 1 gets (0, 1, 0.01)
        p = _particle([0, 0], [0.0, 0.0], [1, 0])
        out = step_particle(p, np.array([0, 1]), 0.0, SwarmConfig(),
                            FixedDraws([1.0, 0.0, 0.99, 0.0, 1.0, 0.01]))
        assert out.velocity.tolist() == [2.0, 2.0]
        assert out.position.tolist() == [0, 1]

    def test_pbest_untouched(self):
        p = _particle([0, 1, 1], [0.0, 0.0, 0.0], [1, 1, 0])
        out = step_particle(p, np.array([1, 0, 0]), 0.5, SwarmConfig(), np.random.default_rng(0))
        assert out.pbest_position.tolist() == [1, 1, 0]


class TestRun:
    def test_zero_iterations_returns_seeds(self):
        matrix = _planted()
        seeds = _seeds(matrix, 5)
        policy = FitnessPolicy(0.3)
        result = run(matrix, seeds, policy, SwarmConfig(iter_max=0))
        assert result.pbests == seeds
        best = max(range(5), key=lambda i: (fitness(matrix, seeds[i], policy), -i))
        assert result.gbest == seeds[best]
        assert len(result.trace) == 1 and result.iterations == 0

    def test_singleton_swarm(self):
        matrix = _planted()
        result = run(matrix, _seeds(matrix, 1), FitnessPolicy(0.3), SwarmConfig(iter_max=15))
        assert result.pbests == [result.gbest]
        assert result.stats["gbest_fitness"] == result.stats["mean_pbest_volume"]

    def test_empty_seeds(self):
        with pytest.raises(ValueError, match="without seeds"):
            run(_planted(), [], FitnessPolicy(0.5))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(["variable", "fixed:0.4", "fixed:0.9"]))
    def test_gbest_trace_non_decreasing(self, seed, spec):
        matrix = _planted(seed % 7)
        cfg = SwarmConfig.with_inertia(spec, iter_max=20, seed=seed)
        result = run(matrix, _seeds(matrix, 6, seed % 11), FitnessPolicy(0.4), cfg)
        fits = [e.gbest_fitness for e in result.trace]
        assert fits == sorted(fits)
        assert fits[-1] == max(fitness(matrix, b, FitnessPolicy(0.4)) for b in result.pbests)

    def test_stall_stops_early(self):
        matrix = _planted()
        result = run(matrix, _seeds(matrix, 4), FitnessPolicy(1.0),
                     SwarmConfig(iter_max=50, stall_limit=3))
        assert result.iterations == 3

    def test_random_search_degeneracy(self):
        matrix = _planted()
        cfg = SwarmConfig.with_inertia("fixed:0", c1=0.0, c2=0.0, iter_max=200, stall_limit=None)
        result = run(matrix, _seeds(matrix, 1), FitnessPolicy(0.0), cfg)
        assert result.iterations == 200

    def test_deterministic_across_threads(self):
        matrix = _planted(3)
        seeds = _seeds(matrix, 8)
        a = run(matrix, seeds, FitnessPolicy(0.5), SwarmConfig(iter_max=30, seed=5))
        b = run(matrix, seeds, FitnessPolicy(0.5), SwarmConfig(iter_max=30, seed=5, n_jobs=4))
        assert a.gbest == b.gbest and a.pbests == b.pbests
        assert a.trace == b.trace and a.stats == b.stats

    def test_seed_changes_path(self):
        matrix = _planted(3)
        seeds = _seeds(matrix, 8)
        runs = [run(matrix, seeds, FitnessPolicy(0.5), SwarmConfig(iter_max=10, seed=s,
                                                                   stall_limit=None))
                for s in (1, 2)]
        assert runs[0].trace != runs[1].trace or runs[0].pbests != runs[1].pbests

    def test_stats_shape(self):
        matrix = _planted()
        result = run(matrix, _seeds(matrix, 4), FitnessPolicy(0.3), SwarmConfig(iter_max=5))
        assert set(result.stats) == {"swarm_size", "gbest_volume", "gbest_acv", "gbest_fitness",
                                     "mean_pbest_volume", "mean_pbest_acv"}
        assert result.stats["swarm_size"] == 4
        assert not math.isnan(result.stats["mean_pbest_acv"])
