import json
import math

import pytest

from repobee_sepchoose import _exceptions, _experiments, _rng


def _spec(**overrides):
    data = dict(
        name="tiny",
        kind="erdosrenyi",
        n_values=[12],
        params=[3.0],
        param_exponent=-1.0,
        trials=2,
        master_seed=5,
        methods=["semi_local", "coloring"],
        local_search_steps=50,
    )
    data.update(overrides)
    return _experiments.ExperimentSpec.from_dict(data)


class TestExperimentSpec:
    @pytest.mark.parametrize(
        "overrides",
        [
            dict(trials=0),
            dict(n_values=[]),
            dict(methods=[]),
            dict(formats=["xlsx"]),
            dict(kind="percolation"),
            dict(methods=["magic"]),
            dict(master_seed=-1),
            dict(colour="red"),
        ],
        ids=[
            "no-trials",
            "no-n",
            "no-methods",
            "bad-format",
            "bad-kind",
            "bad-method",
            "negative-seed",
            "unknown-key",
        ],
    )
    def test_invalid_specs(self, overrides):
        with pytest.raises(_exceptions.ParameterError):
            _spec(**overrides)

    def test_invalid_json(self):
        with pytest.raises(_exceptions.ParameterError):
            _experiments.ExperimentSpec.from_json("{not json")

    def test_hash_is_stable_across_json(self):
        spec = _spec()

        reloaded = _experiments.ExperimentSpec.from_json(
            json.dumps(spec.to_dict())
        )

        assert reloaded == spec
        assert reloaded.spec_hash() == spec.spec_hash()
        assert len(spec.spec_hash()) == 64

    def test_hash_depends_on_every_field(self):
        assert _spec().spec_hash() != _spec(trials=3).spec_hash()
        assert _spec().spec_hash() != _spec(master_seed=6).spec_hash()

    def test_points_are_the_sweep_grid(self):
        spec = _spec(n_values=[10, 20], params=[1.0, 2.0])

        assert spec.points() == [(10, 1.0), (10, 2.0), (20, 1.0), (20, 2.0)]

    def test_one_sided_methods(self):
        assert _experiments.Method.SEMI_LOCAL.one_sided
        assert _experiments.Method.COLORING.one_sided
        assert not _experiments.Method.SEMI_EXACT.one_sided
        assert not _experiments.Method.ORACLE.one_sided


class TestRunExperiment:
    def test_rows_are_sorted_and_verified(self):
        spec = _spec()

        record = _experiments.run_experiment(spec)

        assert [(r.point, r.trial, r.method) for r in record.rows] == [
            (0, 0, "semi_local"),
            (0, 0, "coloring"),
            (0, 1, "semi_local"),
            (0, 1, "coloring"),
        ]
        assert all(r.verified and not r.error for r in record.rows)
        assert all(r.runtime_ms == 0 for r in record.rows)
        assert record.spec_hash == spec.spec_hash()

    def test_trial_seeds_are_derived_from_master_seed(self):
        record = _experiments.run_experiment(_spec())

        for row in record.rows:
            assert row.seed == _rng.derive_seed(5, row.point, row.trial)

    def test_is_deterministic(self):
        first = _experiments.run_experiment(_spec())
        second = _experiments.run_experiment(_spec())

        assert first == second

    def test_worker_count_does_not_change_rows(self):
        spec = _spec(trials=3)

        serial = _experiments.run_experiment(spec, workers=1)
        parallel = _experiments.run_experiment(spec, workers=2)

        assert serial.rows == parallel.rows

    def test_ratio_is_scaled_by_log_np(self):
        record = _experiments.run_experiment(_spec())

        for row in record.rows:
            assert row.ratio == pytest.approx(
                row.avg_degree_float / math.log(3)
            )
            assert json.loads(row.extras)["p"] == pytest.approx(0.25)

    def test_oracle_over_budget_is_recorded_as_error(self):
        spec = _spec(n_values=[20], methods=["oracle"], trials=1)

        (row,) = _experiments.run_experiment(spec).rows

        assert not row.verified
        assert "budget" in row.error
        assert row.ratio is None

    def test_trianglebip_rows_carry_construction_stats(self):
        spec = _spec(
            kind="trianglebip", n_values=[60], params=[0.5], trials=1
        )

        record = _experiments.run_trianglebip_stats(spec)

        extras = json.loads(record.rows[0].extras)
        assert extras["triangle_free"]
        assert extras["n"] == 60

    def test_transition_targets_minimum_degree(self):
        spec = _spec(
            kind="transition",
            n_values=[30],
            params=[0.3],
            trials=1,
            methods=["coloring"],
        )

        record = _experiments.run_transition_profile(spec)

        extras = json.loads(record.rows[0].extras)
        assert extras["target_min_degree"] == 3
        if extras["reached_min_degree"]:
            assert extras["graph_min_degree"] >= 3

    def test_erdosrenyi_runner_matches_run_experiment(self):
        spec = _spec()

        record = _experiments.RUNNERS[spec.kind](spec, 1)

        assert record == _experiments.run_erdosrenyi_scaling(spec)
        assert record == _experiments.run_experiment(spec)

    def test_kind_mismatch(self):
        with pytest.raises(_exceptions.ParameterError):
            _experiments.run_trianglebip_stats(_spec())


class TestAggregation:
    def test_one_entry_per_point_and_method(self):
        record = _experiments.run_experiment(
            _spec(n_values=[10, 12], trials=2)
        )

        assert len(record.aggregates) == 4
        assert all(a["verified_rows"] == 2 for a in record.aggregates)

    def test_unverified_rows_are_only_counted(self):
        record = _experiments.run_experiment(_spec(methods=["coloring"]))
        rows = list(record.rows)
        rows[1] = rows[1]._replace(verified=False)

        (entry,) = _experiments.aggregate(rows)

        assert entry["rows"] == 2
        assert entry["verified_rows"] == 1
        assert entry["max_avg_degree"] == rows[0].avg_degree_rational

    def test_ratio_band(self):
        band = _experiments.ratio_band(
            [{"mean_ratio": 0.5}, {"mean_ratio": 1.5}, {"mean_ratio": None}]
        )

        assert band == {"low": 0.5, "high": 1.5, "spread": 3.0}

    def test_ratio_band_without_ratios(self):
        assert _experiments.ratio_band([])["spread"] is None


class TestReports:
    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_report_round_trip(self, fmt, tmp_path):
        record = _experiments.run_experiment(_spec())

        (path,) = _experiments.emit_report(record, tmp_path, [fmt])
        spec_hash, rows = _experiments.parse_report(path)

        assert path.name == f"tiny.{fmt}"
        assert spec_hash == record.spec_hash
        assert tuple(rows) == record.rows

    def test_csv_starts_with_schema_and_hash(self):
        record = _experiments.run_experiment(_spec())

        lines = _experiments.format_csv(record).splitlines()

        assert lines[0] == "# schema_version=1"
        assert lines[1] == f"# spec_hash={record.spec_hash}"
        assert lines[2].split(",") == _experiments.COLUMNS

    def test_emits_all_spec_formats(self, tmp_path):
        record = _experiments.run_experiment(_spec())

        paths = _experiments.emit_report(record, tmp_path / "out")

        assert [p.name for p in paths] == ["tiny.csv", "tiny.json"]

    def test_unknown_schema_version(self, tmp_path):
        path = tmp_path / "report.json"
        path.write_text(json.dumps({"schema_version": 99, "rows": []}))

        with pytest.raises(_exceptions.ParameterError):
            _experiments.parse_report(path)
