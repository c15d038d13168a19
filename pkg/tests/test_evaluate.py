import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import treerings as tr
from oracles import exhaustive_edit_cost

sorted_positions = st.lists(st.integers(0, 9), min_size=0, max_size=6).map(
    lambda v: sorted(10 * x for x in v)
)


class TestEditDistance:
    def test_identical_lists_cost_zero(self):
        res = tr.edit_distance([10, 20, 30], [10, 20, 30])
        assert res.total_cost == 0.0
        assert res.pairs == [(0, 0), (1, 1), (2, 2)]
        assert res.unmatched_truth == [] and res.unmatched_detected == []

    def test_single_move(self):
        res = tr.edit_distance([10, 20], [12, 20])
        assert res.total_cost == 2.0
        assert res.pairs == [(0, 0), (1, 1)]

    def test_false_negative_costs_200(self):
        res = tr.edit_distance([10], [])
        assert res.total_cost == 200.0
        assert res.unmatched_truth == [0]

    def test_remove_beats_long_move(self):
        # pairing 10<->500 would cost 490; matching 10<->10 and removing 500 costs 200
        res = tr.edit_distance([10], [10, 500])
        assert res.total_cost == 200.0
        assert res.pairs == [(0, 0)]
        assert res.unmatched_detected == [1]

    def test_unsorted_rejected(self):
        with pytest.raises(tr.UnsortedInput):
            tr.edit_distance([10, 5], [1])
        with pytest.raises(tr.UnsortedInput):
            tr.edit_distance([1], [10, 5])

    def test_custom_costs(self):
        res = tr.edit_distance([10], [], tr.EditCosts(add_cost=7.0, remove_cost=3.0))
        assert res.total_cost == 7.0
        res = tr.edit_distance([], [10], tr.EditCosts(add_cost=7.0, remove_cost=3.0))
        assert res.total_cost == 3.0

    def test_nonpositive_costs_rejected(self):
        with pytest.raises(ValueError):
            tr.EditCosts(add_cost=0.0)

    @given(a=sorted_positions)
    @settings(max_examples=100, deadline=None)
    def test_identity_property(self, a):
        assert tr.edit_distance(a, a).total_cost == 0.0

    @given(a=sorted_positions, b=sorted_positions)
    @settings(max_examples=200, deadline=None)
    def test_symmetry_with_equal_costs(self, a, b):
        assert tr.edit_distance(a, b).total_cost == tr.edit_distance(b, a).total_cost

    @given(a=sorted_positions, b=sorted_positions)
    @settings(max_examples=200, deadline=None)
    def test_upper_bound(self, a, b):
        assert tr.edit_distance(a, b).total_cost <= 200.0 * (len(a) + len(b))

    @given(a=sorted_positions, b=sorted_positions)
    @settings(max_examples=150, deadline=None)
    def test_matches_exhaustive_enumeration(self, a, b):
        assert tr.edit_distance(a, b).total_cost == exhaustive_edit_cost(a, b)

    @given(a=sorted_positions, b=sorted_positions)
    @settings(max_examples=150, deadline=None)
    def test_backtrace_consistency(self, a, b):
        res = tr.edit_distance(a, b)
        # pairs strictly increase in both coordinates (no crossings)
        for (i1, j1), (i2, j2) in zip(res.pairs, res.pairs[1:]):
            assert i1 < i2 and j1 < j2
        # cost decomposition
        move = sum(abs(a[i] - b[j]) for i, j in res.pairs)
        total = 200.0 * len(res.unmatched_truth) + 200.0 * len(res.unmatched_detected) + move
        assert res.total_cost == pytest.approx(total)
        # index partition
        assert sorted([i for i, _ in res.pairs] + res.unmatched_truth) == list(range(len(a)))
        assert sorted([j for _, j in res.pairs] + res.unmatched_detected) == list(range(len(b)))


def noisy_ring_polar(seed=1, rows=64):
    gen = np.random.default_rng(seed)
    r = np.arange(100, dtype=float)
    prof = 20.0 + 130.0 * sum(np.exp(-((r - rk) ** 2) / 8.0) for rk in (20, 40, 60))
    base = np.tile(prof, (rows, 1))
    base = base + gen.uniform(-1, 1, base.shape) * 0.05 * base.max()
    np.clip(base, 0, None, out=base)
    return tr.PolarImage(base=base, pad_rows=0, center=(0.0, 0.0), angular_bins=rows, max_radius=100.0)


class TestRunSweep:
    def test_degenerate_grid_equals_direct_call(self):
        pol = noisy_ring_polar()
        params = tr.DetectionParams(sigma=1.0, pre_threshold=0.1, post_threshold=0.02, mode="ridges")
        grid = tr.run_sweep(pol, [20, 40, 60], 5, (1.0,), (0.1,), (0.02,), mode="ridges")
        marks = tr.detect_rings(pol, params)[5]
        direct = tr.edit_distance([20, 40, 60], [float(p) for p in marks.positions]).total_cost
        assert grid.costs.shape == (1, 1, 1)
        assert grid.costs[0, 0, 0] == direct

    def test_post_axis_monotone_detection_count(self):
        pol = noisy_ring_polar()
        posts = (0.0, 0.02, 0.05, 0.1, 0.2)
        counts = []
        for post in posts:
            params = tr.DetectionParams(sigma=1.0, post_threshold=post, mode="ridges")
            counts.append(tr.detect_rings(pol, params)[3].positions.size)
        assert counts == sorted(counts, reverse=True)
        assert counts[0] == max(counts)
        grid = tr.run_sweep(pol, [20, 40, 60], 3, (1.0,), (0.0,), posts, mode="ridges")
        assert len(set(grid.costs.ravel().tolist())) > 1  # costs vary non-trivially

    def test_synthetic_disk_has_zero_cost_cell(self):
        base = np.tile(
            20.0 + 130.0 * sum(np.exp(-((np.arange(100.0) - rk) ** 2) / 8.0) for rk in (20, 40, 60)),
            (32, 1),
        )
        pol = tr.PolarImage(base=base, pad_rows=0, center=(0.0, 0.0), angular_bins=32, max_radius=100.0)
        grid = tr.run_sweep(pol, [20, 40, 60], 0, (0.0, 1.0), (0.0, 0.1), (0.0, 0.02), mode="ridges")
        assert grid.best[3] == 0.0

    def test_determinism_bit_identical(self):
        pol = noisy_ring_polar(seed=7)
        kwargs = dict(
            blur_values=(0.0, 1.0),
            pre_values=(0.0, 0.1),
            post_values=(0.0, 0.02, 0.05),
            mode="ridges",
        )
        g1 = tr.run_sweep(pol, [20, 40, 60], 2, **kwargs)
        g2 = tr.run_sweep(pol, [20, 40, 60], 2, **kwargs)
        assert np.array_equal(g1.costs, g2.costs)
        assert g1.best == g2.best

    def test_row_out_of_range(self):
        pol = noisy_ring_polar()
        with pytest.raises(tr.RowOutOfRange):
            tr.run_sweep(pol, [20], 64, (0.0,), (0.0,), (0.0,), mode="ridges")

    def test_empty_grid_rejected(self):
        pol = noisy_ring_polar()
        with pytest.raises(tr.EmptyGrid):
            tr.run_sweep(pol, [20], 0, (), (0.0,), (0.0,), mode="ridges")

    def test_best_tie_break_lexicographic(self):
        grid = tr.SweepGrid(
            blur_values=(0.0, 1.0),
            pre_values=(0.0, 0.1),
            post_values=(0.0, 0.05),
            costs=np.full((2, 2, 2), 5.0),
        )
        assert grid.best == (0.0, 0.0, 0.0, 5.0)


class TestWriteHeatmap:
    def known_grid(self):
        costs = np.array(
            [
                [[400.0, 200.0], [100.0, 50.0]],
                [[300.0, 250.0], [75.0, 42.0]],
            ]
        )
        return tr.SweepGrid(
            blur_values=(1.0, 2.0),
            pre_values=(0.0, 0.12),
            post_values=(0.0, 0.02),
            costs=costs,
        )

    def test_exact_csv_cells(self):
        text = tr.write_heatmap(self.known_grid(), 1.0)
        lines = text.splitlines()
        assert lines[0] == "pre\\post,0.0,0.02"
        assert lines[1] == "0.0,400.0,200.0"
        assert lines[2] == "0.12,100.0,50.0"
        assert lines[3].startswith("# best ")

    def test_footer_names_global_best(self):
        text = tr.write_heatmap(self.known_grid(), 1.0)
        assert text.splitlines()[-1] == "# best blur=2.0 pre=0.12 post=0.02 cost=42.0"

    def test_blur_not_in_grid(self):
        with pytest.raises(tr.BlurNotInGrid):
            tr.write_heatmap(self.known_grid(), 3.0)

    def test_empty_axis_rejected_at_construction(self):
        with pytest.raises(tr.EmptyGrid):
            tr.SweepGrid(blur_values=(1.0,), pre_values=(0.0,), post_values=(), costs=np.zeros((1, 1, 0)))
