"""
Testes da linha de comando: relatórios, códigos de saída e opções.
"""

import json

import pandas as pd
import pytest

from src.cli.main import cli
from src.cli.schemas.report import PortraitReport
from src.core.config import get_settings, use_settings
from src.domain import fixtures
from src.domain.models import CrossValidationSummary, OracleCheck
from src.domain.services.portrait_processor import PortraitProcessor

EPS_FIELD = json.dumps({"lambda": 1.0, "degree": 3, "Q1": [-1, -1, -1, -1], "Q2": [1, -1, 1, -1]})
QUADRATIC = json.dumps({"lambda": 1.0, "degree": 2, "Q1": [1, 0, 0], "Q2": [0, 0, 1]})
HETEROCLINIC = json.dumps({"lambda": 1.0, "degree": 3, "Q1": [0, 0, -1, 0], "Q2": [1, 0, 0, -1]})
NEAR_TANGENT = json.dumps({"lambda": 1.0, "degree": 3, "Q1": [0, 0, -1, -1e-7], "Q2": [1 + 1e-7, 0, 0, -1]})


def error_of(result) -> dict:
    return json.loads(result.stderr.strip().splitlines()[-1])


class TestAnalyze:
    def test_limit_cycle_report(self, runner):
        result = runner.invoke(cli, ["analyze", EPS_FIELD])
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["verdict"] == "limit_cycle"
        assert report["located_cycle"]["radius"] == pytest.approx(1.0, abs=1e-7)
        assert report["field"]["lambda"] == 1.0
        assert report["schema_version"] == "1.0"

    def test_report_from_file(self, runner, tmp_path):
        source = tmp_path / "quadratic.json"
        source.write_text(QUADRATIC)
        out = tmp_path / "reports" / "quadratic.json"
        result = runner.invoke(cli, ["analyze", str(source), "--out", str(out)])
        assert result.exit_code == 0, result.stderr
        report = json.loads(out.read_text())
        assert report["verdict"] == "invariant_cones"
        assert len(report["infinite_equilibria"]) == 6
        assert len(report["finite_equilibria"]) == 3

    def test_tolerance_overrides_recorded(self, runner):
        result = runner.invoke(cli, ["analyze", QUADRATIC, "--tol-root", "1e-6", "--seed", "5"])
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["tolerances"]["root_multiplicity_tol"] == 1e-6
        assert report["seed"] == 5

    def test_canonical_input(self, runner):
        source = json.dumps({"canonical": {"degree": 3, "form_id": "IX", "params": {"p1": 1.0}}})
        result = runner.invoke(cli, ["analyze", source])
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["consistency"]["spec"]["form_id"] == "IX"

    def test_invalid_json(self, runner):
        result = runner.invoke(cli, ["analyze", "{not json"])
        assert result.exit_code == 2
        assert error_of(result)["error"] == "InputSchemaError"

    def test_missing_coefficients(self, runner):
        result = runner.invoke(cli, ["analyze", json.dumps({"lambda": 1.0, "degree": 2, "Q1": [1, 0, 0]})])
        assert result.exit_code == 2

    def test_zero_lambda(self, runner):
        result = runner.invoke(cli, ["analyze", json.dumps({"lambda": 0.0, "degree": 2, "Q1": [1, 0, 0], "Q2": [0, 0, 1]})])
        assert result.exit_code == 2

    def test_invalid_canonical_params(self, runner):
        source = json.dumps({"canonical": {"degree": 3, "form_id": "I", "params": {"mu": 0.0}}})
        result = runner.invoke(cli, ["analyze", source])
        assert result.exit_code == 2
        assert error_of(result)["error"] == "ParamConstraintViolatedError"

    def test_strict_near_zero_f(self, runner):
        source = json.dumps({"lambda": 1.0, "degree": 3, "Q1": [0, 0, -1e-12, 0], "Q2": [1, 0, 0, -1e-12]})
        assert runner.invoke(cli, ["analyze", source]).exit_code == 0
        assert runner.invoke(cli, ["analyze", source, "--strict"]).exit_code != 0

    def test_contradiction_exits_3(self, runner, mocker):
        summary = CrossValidationSummary(
            seed=1, checks=(OracleCheck(name="origin_convergence", passed=False, detail="stub"),)
        )
        mocker.patch("src.domain.services.portrait_processor.cross_validate", return_value=summary)
        result = runner.invoke(cli, ["analyze", QUADRATIC, "--verify"])
        assert result.exit_code == 3
        assert json.loads(result.stdout)["cross_validation"]["checks"][0]["passed"] is False
        assert error_of(result)["details"]["checks"] == ["origin_convergence"]


    def test_near_tangent_field_is_analyzed(self, runner):
        result = runner.invoke(cli, ["analyze", NEAR_TANGENT])
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["verdict"] == "limit_cycle"
        assert any("near-zero g" in w for w in report["warnings"])


class TestDeterminism:
    def test_same_seed_same_report(self, runner):
        runs = [runner.invoke(cli, ["analyze", EPS_FIELD, "--verify", "--seed", "5"]) for _ in range(2)]
        assert all(run.exit_code == 0 for run in runs), runs[0].stderr
        reports = [json.loads(run.stdout) for run in runs]
        for report in reports:
            report.pop("generated_at")
        assert reports[0] == reports[1]

    def test_json_without_timestamp_is_byte_identical(self):
        settings = get_settings().with_overrides(seed=5)
        use_settings(settings)
        texts = [
            PortraitReport.from_result(PortraitProcessor(verify=True).process(fixtures.quadratic()), settings)
            .to_json(include_timestamp=False)
            for _ in range(2)
        ]
        assert texts[0] == texts[1]
        assert "generated_at" not in texts[0]

    def test_report_round_trips(self, runner):
        result = runner.invoke(cli, ["analyze", HETEROCLINIC])
        assert result.exit_code == 0, result.stderr
        report = PortraitReport.model_validate_json(result.stdout)
        assert report.verdict.value == "heteroclinic_cycle"
        assert json.loads(report.to_json()) == json.loads(result.stdout)


class TestPortrait:
    def test_writes_svg(self, runner, tmp_path):
        svg = tmp_path / "eps.svg"
        result = runner.invoke(cli, ["portrait", EPS_FIELD, "--svg", str(svg), "--samples", "1"])
        assert result.exit_code == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["verdict"] == "limit_cycle"
        assert svg.read_text().lstrip().startswith("<?xml")

    def test_svg_required(self, runner):
        assert runner.invoke(cli, ["portrait", EPS_FIELD]).exit_code == 2


class TestSweep:
    def test_requires_heteroclinic_base(self, runner):
        result = runner.invoke(cli, ["sweep", QUADRATIC])
        assert result.exit_code == 4
        assert error_of(result)["error"] == "PreconditionViolatedError"

    def test_invalid_grid(self, runner):
        result = runner.invoke(cli, ["sweep", HETEROCLINIC, "--eps-grid", "a,b"])
        assert result.exit_code == 2

    def test_negative_eps_rows(self, runner, tmp_path):
        csv = tmp_path / "sweep.csv"
        result = runner.invoke(cli, ["sweep", HETEROCLINIC, "--eps-grid", "-0.1,0", "--csv", str(csv)])
        assert result.exit_code == 0, result.stderr
        summary = json.loads(result.stdout)
        assert summary["base_verdict"] == "heteroclinic_cycle"
        assert summary["cycles_found"] == 0
        frame = pd.read_csv(csv)
        assert list(frame.columns) == ["eps", "criterion_integral", "cycle_found", "cycle_mean_radius"]
        assert len(frame) == 2


class TestAudit:
    def test_degree2_audit(self, runner):
        result = runner.invoke(cli, ["audit-canonical", "--degree", "2", "--grid", "0,2"])
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["degree"] == 2
        assert {f["form_id"] for f in report["forms"]} == {"i", "ii", "iii", "iv", "v"}
        assert all(row["diagnostic"] for row in report["mismatches"])

    def test_degree3_skips_invalid_points(self, runner):
        result = runner.invoke(cli, ["audit-canonical", "--degree", "3", "--grid", "0"])
        assert result.exit_code == 0, result.stderr
        forms = {f["form_id"]: f for f in json.loads(result.stdout)["forms"]}
        assert forms["X"]["skipped"] == 2
        assert forms["IX"]["mismatches"] == 0


class TestGroup:
    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.stdout
