"""Unit tests for the allocation vector primitives."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from shardlab.allocation import (
    as_allocation,
    deficit,
    distance_to_target,
    instantaneous_fraction,
    project_to_box,
    update_running_average,
    worst_shard_fraction,
)


def nonneg_vectors(max_k=8, max_value=10.0):
    return hnp.arrays(
        np.float64,
        st.integers(1, max_k),
        elements=st.floats(0.0, max_value, allow_nan=False),
    )


class TestInstantaneousFraction:
    def test_basic_split(self):
        out = instantaneous_fraction([0.25, 0.25], [0.5, 0.0])
        np.testing.assert_allclose(out, [1.0 / 3.0, 1.0])

    def test_replication_symmetry(self):
        out = instantaneous_fraction([0.3, 0.2], [0.3, 0.2])
        np.testing.assert_array_equal(out, [0.5, 0.5])

    def test_zero_over_zero_is_zero(self):
        out = instantaneous_fraction([0.0, 0.5], [0.0, 0.5])
        np.testing.assert_array_equal(out, [0.0, 0.5])

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="shape mismatch"):
            instantaneous_fraction([0.1, 0.2], [0.1, 0.2, 0.3])

    @given(g=nonneg_vectors(), scale=st.floats(0.0, 10.0, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_output_in_unit_interval(self, g, scale):
        b = np.roll(g, 1) * scale
        out = instantaneous_fraction(g, b)
        assert np.all(out >= 0.0)
        assert np.all(out <= 1.0)
        assert np.all(np.isfinite(out))


class TestRunningAverage:
    def test_second_round(self):
        np.testing.assert_array_equal(update_running_average([1.0], [0.0], 2), [0.5])

    def test_first_round_ignores_prev(self):
        np.testing.assert_array_equal(
            update_running_average([0.0, 0.0], [0.4, 0.6], 1), [0.4, 0.6]
        )
        # even garbage in prev is discarded at t=1
        np.testing.assert_array_equal(
            update_running_average([0.9, 0.9], [0.4, 0.6], 1), [0.4, 0.6]
        )

    def test_fixed_point(self):
        np.testing.assert_array_equal(update_running_average([0.5], [0.5], 7), [0.5])

    def test_rejects_bad_round_index(self):
        with pytest.raises(ValueError, match="t must be >= 1"):
            update_running_average([0.5], [0.5], 0)

    @given(
        st.lists(
            st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=3, max_size=3),
            min_size=1,
            max_size=40,
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_recurrence_matches_batch_mean(self, rows):
        trace = np.array(rows)
        avg = np.zeros(3)
        for t, row in enumerate(trace, start=1):
            avg = update_running_average(avg, row, t)
        np.testing.assert_allclose(avg, trace.mean(axis=0), atol=1e-10)


class TestDeficit:
    def test_scalar_target(self):
        np.testing.assert_allclose(deficit([0.2, 0.6], 0.5), [0.3, 0.0])

    def test_boundary(self):
        np.testing.assert_array_equal(deficit([0.5, 0.5], 0.5), [0.0, 0.0])

    def test_cold_start(self):
        np.testing.assert_array_equal(deficit([0.0, 0.0, 0.0], 0.3), [0.3, 0.3, 0.3])

    def test_vector_target(self):
        np.testing.assert_allclose(deficit([0.2, 0.6], [0.5, 0.7]), [0.3, 0.1])

    def test_vector_target_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape mismatch"):
            deficit([0.2, 0.6], [0.5, 0.7, 0.9])


class TestDistanceToTarget:
    def test_one_sided(self):
        assert distance_to_target([0.3, 0.6], 0.5) == pytest.approx(0.2, abs=1e-15)

    def test_inside_the_box(self):
        assert distance_to_target([0.5, 0.9], 0.5) == 0.0

    def test_two_sided(self):
        assert distance_to_target([0.1, 0.2], 0.5) == pytest.approx(0.5, abs=1e-15)

    @given(nonneg_vectors(max_value=1.0), st.floats(0.01, 1.0, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_two_path_agreement(self, avg, h):
        direct = distance_to_target(avg, h)
        manual = float(np.sqrt(np.sum(deficit(avg, h) ** 2)))
        assert abs(direct - manual) <= 1e-12


class TestProjectToBox:
    def test_lower_clamp(self):
        np.testing.assert_array_equal(
            project_to_box([0.01, 0.49], 0.05, 1.0), [0.05, 0.49]
        )

    def test_interior_untouched(self):
        np.testing.assert_array_equal(project_to_box([0.2, 0.3], 0.05, 1.0), [0.2, 0.3])

    def test_upper_clamp(self):
        np.testing.assert_array_equal(project_to_box([1.5], 0.0, 1.0), [1.0])

    def test_empty_box_rejected(self):
        with pytest.raises(ValueError, match="empty box"):
            project_to_box([0.5], 0.7, 0.3)

    def test_idempotent_and_nonexpansive(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            x = rng.uniform(-1.0, 2.0, size=5)
            y = rng.uniform(-1.0, 2.0, size=5)
            px, py = project_to_box(x, 0.0, 1.0), project_to_box(y, 0.0, 1.0)
            np.testing.assert_array_equal(project_to_box(px, 0.0, 1.0), px)
            assert np.linalg.norm(px - py) <= np.linalg.norm(x - y) + 1e-15


class TestWorstShard:
    def test_min(self):
        assert worst_shard_fraction([0.4, 0.6, 0.5]) == 0.4

    def test_uniform(self):
        assert worst_shard_fraction([0.5] * 7) == 0.5

    def test_throttled_shard(self):
        assert worst_shard_fraction([0.0099, 0.99, 0.98]) == 0.0099

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            worst_shard_fraction([])


class TestAsAllocation:
    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="finite and >= 0"):
            as_allocation([0.2, -0.1])

    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="finite and >= 0"):
            as_allocation([0.2, float("nan")])

    def test_rejects_matrix(self):
        with pytest.raises(ValueError, match="1-D"):
            as_allocation([[0.1, 0.2]])

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="expected 3 shards"):
            as_allocation([0.1, 0.2], num_shards=3)

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="at least one shard"):
            as_allocation([])

    def test_single_shard_is_legal(self):
        np.testing.assert_array_equal(as_allocation([0.5], num_shards=1), [0.5])
