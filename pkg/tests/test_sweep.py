import pytest

from pathdev.config import ConfigError, RunConfig
from pathdev.sweep import SweepSpec, coordinate_descent, parse_sweep


def in_range_base(**overrides):
    defaults = dict(lr=0.001, epochs=100, batch_size=32, dev_order=16, hidden_width=16)
    defaults.update(overrides)
    return RunConfig(**defaults)


def table_evaluate(table):
    """Deterministic fake objective keyed by (lr, batch_size)."""

    def evaluate(cfg):
        return {"specificity": table[(cfg.lr, cfg.batch_size)]}

    return evaluate


class TestParseSweep:
    def test_basic(self):
        spec = parse_sweep("lr=0.001,0.01\nbatch_size=32,128\npasses=3\n")
        assert spec.passes == 3
        assert spec.coordinates == (("lr", (0.001, 0.01)), ("batch_size", (32, 128)))

    def test_default_passes(self):
        assert parse_sweep("lr=0.001\n").passes == 2

    def test_out_of_range_candidate_rejected(self):
        with pytest.raises(ConfigError, match="out of range"):
            parse_sweep("lr=0.005\n")
        with pytest.raises(ConfigError, match="out of range"):
            parse_sweep("DEV_Number=40\n")

    def test_unsweepable_key_rejected(self):
        with pytest.raises(ConfigError, match="not sweepable"):
            parse_sweep("seed=1,2\n")

    def test_empty_candidates_rejected(self):
        with pytest.raises(ConfigError, match="no candidate"):
            parse_sweep("lr=\n")

    def test_spec_validation(self):
        with pytest.raises(ValueError, match="passes"):
            SweepSpec(coordinates=(("lr", (0.001,)),), passes=0)
        with pytest.raises(ValueError, match="at least one"):
            SweepSpec(coordinates=(), passes=1)


class TestCoordinateDescent:
    def test_single_candidate_returns_that_value(self):
        spec = SweepSpec(coordinates=(("lr", (0.01,)),), passes=2)
        best, result, board = coordinate_descent(
            in_range_base(), spec, lambda cfg: {"specificity": 0.5}
        )
        assert best.lr == 0.01
        assert len(board) == 2  # base + one candidate

    def test_adopts_best_candidate_per_coordinate(self):
        table = {
            (0.001, 32): 0.2,
            (0.01, 32): 0.6,
            (0.001, 64): 0.3,
            (0.01, 64): 0.9,
        }
        spec = SweepSpec(
            coordinates=(("lr", (0.001, 0.01)), ("batch_size", (32, 64))), passes=2
        )
        best, result, board = coordinate_descent(
            in_range_base(), spec, table_evaluate(table)
        )
        assert (best.lr, best.batch_size) == (0.01, 64)
        assert result["specificity"] == 0.9

    def test_matches_replay_oracle(self):
        # independent replay of the coordinate path over random tables
        import itertools
        import random

        lrs = (0.001, 0.01)
        batches = (32, 64, 128)
        rng = random.Random(0)
        for _ in range(25):
            table = {
                pair: round(rng.random(), 3)
                for pair in itertools.product(lrs, batches)
            }
            spec = SweepSpec(
                coordinates=(("lr", lrs), ("batch_size", batches)), passes=3
            )
            best, result, _ = coordinate_descent(
                in_range_base(), spec, table_evaluate(table)
            )
            ref = _replay_oracle(table, lrs, batches, (0.001, 32), passes=3)
            assert (best.lr, best.batch_size) == ref

    def test_early_stop_on_stagnant_pass(self):
        calls = []

        def evaluate(cfg):
            calls.append((cfg.lr, cfg.batch_size))
            return {"specificity": 1.0 if cfg.lr == 0.001 else 0.0}

        spec = SweepSpec(
            coordinates=(("lr", (0.001, 0.01)), ("batch_size", (32, 64))), passes=5
        )
        coordinate_descent(in_range_base(), spec, evaluate)
        # base + (0.01 for lr, 64 for batch); pass 1 changes nothing, so the
        # remaining passes never run
        assert len(calls) == 3

    def test_ties_prefer_smaller_value(self):
        spec = SweepSpec(coordinates=(("batch_size", (128, 64, 32)),), passes=1)
        best, _, _ = coordinate_descent(
            in_range_base(batch_size=128), spec, lambda cfg: {"specificity": 0.7}
        )
        assert best.batch_size == 32

    def test_out_of_range_base_rejected(self):
        spec = SweepSpec(coordinates=(("lr", (0.001,)),), passes=1)
        bad_base = RunConfig(lr=0.5, epochs=100, batch_size=32, dev_order=16)
        with pytest.raises(ConfigError, match="outside"):
            coordinate_descent(bad_base, spec, lambda cfg: {"specificity": 0.0})

    def test_leaderboard_rows_are_replayable(self):
        spec = SweepSpec(coordinates=(("lr", (0.001, 0.01)),), passes=1)
        _, _, board = coordinate_descent(
            in_range_base(), spec, lambda cfg: {"specificity": 0.1}
        )
        for row in board:
            for key in ("config.lr", "config.epoch", "config.batch_size",
                        "config.DEV_Number", "config.DNN_Number",
                        "config.L2_Weight", "config.algebra", "config.seed"):
                assert key in row
            assert "specificity" in row


def _replay_oracle(table, lrs, batches, start, passes):
    """Plain re-implementation of one-coordinate-at-a-time search."""
    current = dict(lr=start[0], batch_size=start[1])
    for _ in range(passes):
        changed = False
        for key, candidates in (("lr", lrs), ("batch_size", batches)):
            best_v = None
            best_s = None
            for v in candidates:
                trial = dict(current)
                trial[key] = v
                s = table[(trial["lr"], trial["batch_size"])]
                if best_v is None or s > best_s or (s == best_s and v < best_v):
                    best_v, best_s = v, s
            if best_v != current[key]:
                current[key] = best_v
                changed = True
        if not changed:
            break
    return current["lr"], current["batch_size"]
