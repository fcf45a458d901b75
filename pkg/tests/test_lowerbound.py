"""The adversary-world lab: merges, the balance process, and the constants."""

import math

import pytest

from majoritylab import (
    AdversaryWorld,
    ComponentState,
    ConvergenceError,
    RandomStream,
    beta_interval,
    integrate,
    lower_bound_constant,
    merge_step,
    normal_cdf,
    predict_bound,
    simulate_balance,
)


def test_component_state_validation():
    with pytest.raises(ValueError):
        ComponentState(0, 0)
    with pytest.raises(ValueError):
        ComponentState(-1, 2)
    c = ComponentState(3, 1, color_a=1)
    assert c.size == 4 and c.delta == 2 and c.balance == 4
    assert not c.monochromatic
    assert c.part_color("a") == 1 and c.part_color("b") == 0
    assert c.larger_side() == "a"


def world_of(*components):
    return AdversaryWorld(components=[ComponentState(*c) for c in components])


def test_merge_mono_mono_infers_nothing():
    # Same color: both balls land in one part, no new knowledge beyond the
    # compared pair itself.
    w = world_of((1, 0, 1), (1, 0, 1))
    merge_step(w, 0, 1)
    assert len(w.components) == 1
    assert w.components[0].monochromatic and w.components[0].size == 2
    assert w.inferred_edges == 0 and w.merges_mono_mono == 1

    # Different colors: a two-part component, still no inferred edge.
    w = world_of((1, 0, 1), (1, 0, 0))
    merge_step(w, 0, 1)
    assert w.components[0].balance == 0
    assert w.inferred_edges == 0 and w.merges_mono_mono == 1


def test_merge_mixed_unequal_infers_one_edge():
    # A mono component joining the far side of a two-part component links it
    # to every ball there except the one it was compared with... which is
    # one inferred edge for the pre-existing far ball.
    w = world_of((2, 1, 1), (1, 0, 1))  # compare side a (color 1) vs mono color 1
    merge_step(w, 0, 1, sides=("a", "a"))
    assert w.merges_mixed == 1 and w.inferred_edges == 0  # equal answer

    w = world_of((2, 1, 1), (1, 0, 0))  # mono color 0 against side color 1
    merge_step(w, 0, 1, sides=("a", "a"))
    assert w.merges_mixed == 1
    assert w.inferred_edges == 1
    assert w.inferred_by_color == [1, 0]  # the edge carries the newcomer's color


def test_merge_di_di_edge_counts():
    # Equal answer: far sides fuse, one inferred edge of the opposite color.
    w = world_of((2, 1, 1), (1, 1, 1))
    merge_step(w, 0, 1, sides=("a", "a"))
    assert w.merges_di_di == 1
    assert w.inferred_edges == 1 and w.inferred_by_color == [1, 0]

    # Unequal answer: both cross fusions happen, one edge per color.
    w = world_of((2, 1, 1), (1, 1, 0))
    merge_step(w, 0, 1, sides=("a", "a"))
    assert w.inferred_edges == 2 and w.inferred_by_color == [1, 1]


def test_merge_balance_identity():
    # The merged squared difference is (d_i + d_j)^2 on one outcome and
    # (d_i - d_j)^2 on the other, depending only on color agreement.
    w = world_of((3, 1, 1), (2, 0, 1))  # deltas 2 and 2, equal colors
    merge_step(w, 0, 1, sides=("a", "a"))
    assert w.components[0].balance == (2 + 2) ** 2

    w = world_of((3, 1, 1), (2, 0, 0))  # deltas 2 and 2, opposite colors
    merge_step(w, 0, 1, sides=("a", "a"))
    assert w.components[0].balance == (2 - 2) ** 2


def test_merge_self_is_noop():
    w = world_of((2, 1, 1), (1, 0, 0))
    merge_step(w, 0, 0)
    assert w.steps == 0 and len(w.components) == 2


def test_merge_rejects_empty_side():
    w = world_of((2, 0, 1), (1, 0, 0))
    with pytest.raises(ValueError):
        merge_step(w, 0, 1, sides=("b", "a"))


def test_fresh_world_and_bookkeeping():
    w = AdversaryWorld.fresh(30, RandomStream(1, "w"))
    assert w.n == 30
    assert w.total_balance == 30  # singletons each contribute 1
    assert w.nonzero_balance_count == 30
    zeros, ones = w.color_counts()
    assert zeros + ones == 30
    rng = RandomStream(2, "m")
    while len(w.components) > 1:
        i = rng.randrange(len(w.components))
        j = rng.randrange(len(w.components))
        merge_step(w, i, j)
    assert w.steps == 29
    assert w.n == 30
    maj = w.majority_color()
    assert maj == (0 if zeros > 15 else 1 if ones > 15 else None)
    assert w.inferred_majority_edges() <= w.inferred_edges


def test_simulate_balance_shapes_and_martingale():
    stats = simulate_balance(400, "uniform", trials=60, rng=RandomStream(3, "sb"))
    assert stats.n == 400 and stats.trials == 60
    assert len(stats.checkpoints) == len(stats.nonzero_count_mean)
    assert stats.checkpoints[0] == 0 and stats.checkpoints[-1] == 399
    assert stats.nonzero_count_mean[0] == 400.0
    # terminal squared-difference mean sits near n (martingale, E = n)
    assert 0.7 * 400 < stats.terminal_balance_mean < 1.3 * 400
    # the count of unbalanced components can only shrink
    for earlier, later in zip(stats.nonzero_count_mean, stats.nonzero_count_mean[1:]):
        assert later <= earlier + 1e-9


def test_simulate_balance_strategies_agree_on_expectation():
    for strategy in ("smallest-first", "largest-first"):
        stats = simulate_balance(200, strategy, trials=80, rng=RandomStream(4, strategy))
        assert 0.6 * 200 < stats.terminal_balance_mean < 1.4 * 200


def test_simulate_balance_rejects_unknown_strategy():
    with pytest.raises(ValueError):
        simulate_balance(10, "sideways", trials=2, rng=RandomStream(5))


def test_normal_cdf_reference_points():
    assert normal_cdf(0.0) == pytest.approx(0.5)
    assert normal_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-12)
    assert normal_cdf(-1.0) == pytest.approx(1 - normal_cdf(1.0), abs=1e-12)


def test_predict_bound_endpoints_and_monotonicity():
    assert predict_bound(0, 100) == pytest.approx(0.5)
    assert predict_bound(67, 100) == 1.0  # at and past 2n/3 the bound saturates
    assert predict_bound(1000, 100) == 1.0
    values = [predict_bound(k, 100) for k in range(0, 70, 5)]
    for lo, hi in zip(values, values[1:]):
        assert hi >= lo
    with pytest.raises(ValueError):
        predict_bound(-1, 100)
    with pytest.raises(ValueError):
        predict_bound(1, 0)


def test_integrate_polynomial_exactness():
    # Simpson is exact on cubics, so the adaptive wrapper must nail this.
    assert integrate(lambda x: x**3 - 2 * x, 0.0, 2.0, 1e-12) == pytest.approx(0.0)
    assert integrate(math.sin, 0.0, math.pi, 1e-10) == pytest.approx(2.0)


def test_integrate_reports_nonconvergence():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: math.sin(1.0 / max(x, 1e-300)), 0.0, 1.0, 1e-13, max_depth=4)


def test_lower_bound_constant_value():
    assert lower_bound_constant(1e-8) == pytest.approx(1.0191289143, abs=1e-9)
    with pytest.raises(ValueError):
        lower_bound_constant(0.0)


def test_beta_interval_values():
    lo, hi = beta_interval()
    assert lo == pytest.approx(1.0 - 1.0 / math.sqrt(3.0), abs=1e-12)
    assert hi == pytest.approx(0.47579949323375736, abs=2e-9)
    # the upper end is a root of p^3 - 19 p^2 - 8 p + 8
    assert abs(((hi - 19.0) * hi - 8.0) * hi + 8.0) < 1e-7
