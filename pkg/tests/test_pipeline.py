import numpy as np
import pytest

from keyvol.errors import InvalidChunking, InvalidCount, InvalidInput
from keyvol.pipeline import (
    SelectionConfig,
    chunk_budgets,
    select,
    select_chunked,
    select_fast,
    select_slow,
    uniform_downsample,
)
from keyvol.synthetic import clustered_stream, constant_stream, random_stream


class TestUniformDownsample:
    def test_formula(self):
        assert uniform_downsample(list(range(10)), 5) == [0, 2, 4, 6, 9]

    def test_identity_when_k_equals_length(self):
        idx = [3, 5, 8]
        assert uniform_downsample(idx, 3) == idx

    def test_single(self):
        assert uniform_downsample([4, 7, 9], 1) == [4]

    def test_endpoints_kept(self):
        out = uniform_downsample(list(range(100)), 7)
        assert out[0] == 0 and out[-1] == 99

    def test_invalid_count(self):
        with pytest.raises(InvalidCount):
            uniform_downsample([1, 2, 3], 0)
        with pytest.raises(InvalidCount):
            uniform_downsample([1, 2, 3], 4)


class TestSelectFast:
    def test_near_duplicate_rows_collapse(self):
        q = constant_stream(64, 32, seed=0)
        report = select_fast(q, SelectionConfig())
        assert 1 <= len(report.selected_indices) <= 2

    def test_orthogonal_rows_stop_at_rank(self):
        report = select_fast(np.eye(64), SelectionConfig())
        assert len(report.selected_indices) == 8

    def test_identity_selection_forced(self):
        cfg = SelectionConfig(rank=4, max_out=4, min_out=1)
        report = select_fast(np.eye(4), cfg)
        assert report.selected_indices == [0, 1, 2, 3]

    def test_max_out_exceeding_rows_rejected(self):
        with pytest.raises(InvalidInput):
            select_fast(np.eye(4), SelectionConfig(max_out=8))

    def test_indices_sorted_and_in_range(self):
        q = random_stream(50, 16, seed=1)
        report = select_fast(q, SelectionConfig(max_out=20))
        idx = report.selected_indices
        assert idx == sorted(idx)
        assert all(0 <= i < 50 for i in idx)

    def test_scale_invariance(self):
        q = random_stream(40, 12, seed=2)
        cfg = SelectionConfig(max_out=20)
        a = select_fast(q, cfg).selected_indices
        b = select_fast(q * 37.5, cfg).selected_indices
        assert a == b

    def test_determinism(self):
        q = random_stream(60, 24, seed=3)
        cfg = SelectionConfig(max_out=30)
        r1, r2 = select_fast(q, cfg), select_fast(q.copy(), cfg)
        assert r1.selected_indices == r2.selected_indices
        assert r1.steps == r2.steps


class TestSelectSlow:
    def test_downsamples_when_over_budget(self):
        q, _ = clustered_stream([8] * 16, 64, seed=4, noise=0.3)
        cfg = SelectionConfig(mode="slow", pool=128, max_out=12,
                              tol=0.15, rank=16)
        report = select_slow(q, cfg)
        assert report.pre_downsample_count > 12
        assert len(report.selected_indices) == 12
        # downsample keeps endpoints of the sorted pre-selection
        pre = sorted(s["index"] for s in report.steps) if report.steps else []
        assert report.selected_indices[0] <= report.selected_indices[-1]

    def test_no_op_when_within_budget(self):
        q = constant_stream(128, 16, seed=5)
        cfg = SelectionConfig(mode="slow", pool=128, max_out=64)
        report = select_slow(q, cfg)
        assert report.pre_downsample_count == len(report.selected_indices)

    def test_pool_equal_to_budget_matches_fast(self):
        q = random_stream(64, 32, seed=6)
        slow = select_slow(q, SelectionConfig(mode="slow", pool=64, max_out=64))
        fast = select_fast(q, SelectionConfig(mode="fast", max_out=64))
        assert slow.selected_indices == fast.selected_indices

    def test_pool_below_budget_rejected(self):
        with pytest.raises(InvalidInput):
            SelectionConfig(mode="slow", pool=32, max_out=64)


class TestSelectChunked:
    def test_chunk_bounds(self):
        q = random_stream(64, 16, seed=7)
        cfg = SelectionConfig(mode="chunked", chunks=4, max_out=16)
        report = select_chunked(q, cfg)
        assert report.chunk_bounds == [[0, 16], [16, 32], [32, 48], [48, 64]]
        for lo, hi in report.chunk_bounds:
            assert any(lo <= i < hi for i in report.selected_indices)

    def test_every_scene_represented(self):
        for seed in range(20):
            q, labels = clustered_stream([10] * 5, 16, seed=seed)
            cfg = SelectionConfig(mode="chunked", chunks=5, max_out=10)
            report = select_chunked(q, cfg)
            scenes = {int(labels[i]) for i in report.selected_indices}
            assert scenes == {0, 1, 2, 3, 4}

    def test_single_chunk_matches_fast(self):
        q = random_stream(32, 8, seed=8)
        chunked = select_chunked(
            q, SelectionConfig(mode="chunked", chunks=1, max_out=16))
        fast = select_fast(q, SelectionConfig(mode="fast", max_out=16))
        assert chunked.selected_indices == fast.selected_indices

    def test_remainder_goes_to_early_chunks(self):
        q = random_stream(10, 4, seed=9)
        cfg = SelectionConfig(mode="chunked", chunks=3, max_out=6)
        report = select_chunked(q, cfg)
        assert report.chunk_bounds == [[0, 4], [4, 7], [7, 10]]

    def test_too_many_chunks_rejected(self):
        q = random_stream(4, 4, seed=10)
        with pytest.raises(InvalidChunking):
            select_chunked(q, SelectionConfig(mode="chunked", chunks=8,
                                              max_out=16))

    def test_budgets_sum_to_max_out(self):
        assert chunk_budgets(64, 32) == [2] * 32
        assert sum(chunk_budgets(64, 5)) == 64
        assert min(chunk_budgets(7, 5)) >= 1


class TestCardinalityContract:
    @pytest.mark.parametrize("seed", range(10))
    @pytest.mark.parametrize("mode", ["fast", "slow", "chunked"])
    def test_adversarial_inputs(self, mode, seed):
        inputs = {
            "constant": constant_stream(64, 16, seed),
            "two_scene": clustered_stream([32, 32], 16, seed)[0],
            "skewed": clustered_stream([48, 4, 4, 4, 4], 16, seed)[0],
            "noise": random_stream(64, 16, seed),
        }
        cfg = SelectionConfig(mode=mode, pool=64, chunks=4, max_out=16)
        for q in inputs.values():
            report = select(q, cfg)
            assert cfg.min_out <= len(report.selected_indices) <= cfg.max_out
            if mode == "chunked":
                for lo, hi in report.chunk_bounds:
                    assert any(lo <= i < hi for i in report.selected_indices)
