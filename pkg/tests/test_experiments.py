import os

import numpy as np
import pytest

from stablesep.errors import ConfigurationError, EmptyGroup
from stablesep.experiments import (
    BASELINE,
    DEFAULT_R_TEST,
    MODE_REAL,
    ExperimentConfig,
    default_group_split,
    run_real,
    run_synthetic,
)


class TestExperimentConfig:
    def test_synthetic_defaults(self):
        cfg = ExperimentConfig()
        assert cfg.r_test == DEFAULT_R_TEST
        assert cfg.resolved_k() == 3  # round(0.3 * 10)

    def test_explicit_k_wins(self):
        assert ExperimentConfig(k=5).resolved_k() == 5

    def test_mode_validation(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(mode="bogus")
        with pytest.raises(ConfigurationError):
            ExperimentConfig(r_test=())
        with pytest.raises(ConfigurationError):
            ExperimentConfig(r_test=(2.0,))  # stability needs two points
        with pytest.raises(ConfigurationError):
            ExperimentConfig(seed_count=0)

    def test_real_mode_needs_input_fields(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(mode=MODE_REAL, input_path="x.csv", response_column="y")
        ExperimentConfig(
            mode=MODE_REAL, input_path="x.csv", response_column="y", group_column="g"
        )

    def test_mode_mismatch_rejected_by_runner(self, tmp_path):
        cfg = ExperimentConfig(output_dir=str(tmp_path))
        with pytest.raises(ConfigurationError):
            run_real(cfg)


class TestDefaultGroupSplit:
    def test_42_keys_split_21_7_7_7(self):
        keys = [str(i) for i in range(1, 43)] * 3
        groups = default_group_split(keys)
        assert [len(groups[g]) for g in ("G1", "G2", "G3", "G4")] == [21, 7, 7, 7]
        assert groups["G1"][0] == "1" and groups["G1"][-1] == "21"

    def test_numeric_aware_ordering(self):
        groups = default_group_split(["10", "2", "1", "30", "4", "21"])
        assert groups["G1"] == ["1", "2", "4"]  # "10" sorts after "4"

    def test_partition_is_disjoint_and_complete(self):
        keys = [f"s{i}" for i in range(11)]
        groups = default_group_split(keys)
        merged = [k for g in sorted(groups) for k in groups[g]]
        assert sorted(merged) == sorted(keys)
        assert len(set(merged)) == len(merged)

    def test_five_keys(self):
        groups = default_group_split(list("abcde"))
        assert [len(groups[g]) for g in ("G1", "G2", "G3", "G4")] == [2, 1, 1, 1]

    def test_too_few_keys(self):
        with pytest.raises(ConfigurationError):
            default_group_split(["a", "b", "c"])


def tiny_synth_cfg(out, **kw):
    base = dict(
        n=400,
        p=10,
        r_train=2.0,
        r_test=(2.0, -2.0),
        seed_count=2,
        seed_variable=0,
        output_dir=str(out),
        rng_seed=7,
    )
    base.update(kw)
    return ExperimentConfig(**base)


class TestRunSynthetic:
    def test_outputs_and_aggregates(self, tmp_path):
        agg = run_synthetic(tiny_synth_cfg(tmp_path))
        for f in ("rmse_curve.tsv", "summary.tsv", "aggregate.tsv", "MANIFEST.txt"):
            assert os.path.exists(tmp_path / f)
        assert set(agg) >= {"ci_fisher_z", BASELINE, "files", "reports"}
        for name in ("ci_fisher_z", BASELINE):
            stats = agg[name]
            assert stats["seeds"] == 2
            assert 0.0 <= stats["precision_mean"] <= 1.0
            assert 1.0 <= stats["unstable_rank_median"] <= 10.0
            assert stats["average_error_mean"] > 0.0
            assert len(agg["reports"][name]) == 2

    def test_curve_has_one_row_per_cell(self, tmp_path):
        run_synthetic(tiny_synth_cfg(tmp_path))
        lines = (tmp_path / "rmse_curve.tsv").read_text().splitlines()
        assert lines[0] == "seed\tmethod\tr_test\trmse"
        assert len(lines) == 1 + 2 * 2 * 2  # seeds x methods x r grid

    def test_reruns_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_synthetic(tiny_synth_cfg(a))
        run_synthetic(tiny_synth_cfg(b))
        for f in ("rmse_curve.tsv", "summary.tsv", "aggregate.tsv"):
            assert (a / f).read_bytes() == (b / f).read_bytes()

    def test_seed_changes_results(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_synthetic(tiny_synth_cfg(a))
        run_synthetic(tiny_synth_cfg(b, rng_seed=8))
        assert (a / "rmse_curve.tsv").read_bytes() != (b / "rmse_curve.tsv").read_bytes()


class TestRunReal:
    def real_cfg(self, csv_path, out, **kw):
        base = dict(
            mode=MODE_REAL,
            input_path=csv_path,
            response_column="total_UPDRS",
            group_column="subject#",
            seed_variable=0,
            output_dir=str(out),
        )
        base.update(kw)
        return ExperimentConfig(**base)

    def test_default_split_and_curves(self, telemonitoring_csv, tmp_path):
        res = run_real(self.real_cfg(telemonitoring_csv, tmp_path))
        assert res["train_group"] == "G1"
        assert sorted(res["groups"]) == ["G1", "G2", "G3", "G4"]
        assert res["groups"]["G1"] == 21 * 30
        p = res["p"]
        for name, per_group in res["curves"].items():
            for label, vals in per_group.items():
                assert len(vals) == p
                assert all(v > 0 for v in vals)
        assert os.path.exists(tmp_path / "real_curve.tsv")
        assert os.path.exists(tmp_path / "groups.tsv")

    def test_overlapping_assignment_rejected(self, telemonitoring_csv, tmp_path):
        cfg = self.real_cfg(
            telemonitoring_csv,
            tmp_path,
            group_assignment={"G1": ["1", "2"], "G2": ["2", "3"]},
        )
        with pytest.raises(ConfigurationError):
            run_real(cfg)

    def test_empty_group_rejected(self, telemonitoring_csv, tmp_path):
        cfg = self.real_cfg(
            telemonitoring_csv,
            tmp_path,
            group_assignment={"G1": ["1", "2"], "G2": ["no_such_subject"]},
        )
        with pytest.raises(EmptyGroup):
            run_real(cfg)

    def test_rerun_byte_identical(self, telemonitoring_csv, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_real(self.real_cfg(telemonitoring_csv, a))
        run_real(self.real_cfg(telemonitoring_csv, b))
        assert (a / "real_curve.tsv").read_bytes() == (b / "real_curve.tsv").read_bytes()
