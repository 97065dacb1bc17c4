"""
Testes das formas canônicas: instanciação, restrições de parâmetros,
casos de grau 2 e verificação de consistência.
"""

import math

import pytest

from src.core.exceptions import ParamConstraintViolatedError
from src.domain.models import CanonicalSpec, CheckStatus, FormId
from src.domain.services.canonical import (
    audit_grid,
    consistency_check,
    degree2_case,
    expected_infinity,
    instantiate,
    stated_angular_form,
)
from src.domain.services.poly_core import angular_form


def spec(form: FormId, lam_sign: int = 1, **params: float) -> CanonicalSpec:
    return CanonicalSpec(degree=form.degree, form_id=form, params=params, lambda_sign=lam_sign)


class TestInstantiate:
    def test_form_ix(self):
        field = instantiate(spec(FormId.IX, p1=0.5, p2=-1.0, p3=2.0, alpha=-1.0))
        assert field.q1.coeffs == (0.5, -1.0, 2.0, 0.0)
        assert field.q2.coeffs == (-1.0, 0.5, -1.0, 2.0)
        assert angular_form(field).coeffs == (-1.0, 0.0, 0.0, 0.0, 0.0)

    @pytest.mark.parametrize("form", [FormId.I, FormId.IV, FormId.VII, FormId.VIII, FormId.IX])
    def test_printed_degree3_matches_stated_form(self, form):
        s = spec(form, p1=0.3, p2=-0.7, p3=1.1)
        assert angular_form(instantiate(s)).coeffs == pytest.approx(stated_angular_form(s).coeffs)

    def test_lambda_sign(self):
        field = instantiate(spec(FormId.VI, lam_sign=-1, p1=1.0))
        assert field.lam == -1.0

    def test_zero_nonlinearity(self):
        with pytest.raises(ParamConstraintViolatedError):
            instantiate(spec(FormId.X))


class TestParamConstraints:
    def test_form_i_mu_region(self):
        with pytest.raises(ParamConstraintViolatedError):
            instantiate(spec(FormId.I, mu=0.0))

    def test_form_ii_excluded_mu(self):
        with pytest.raises(ParamConstraintViolatedError):
            instantiate(spec(FormId.II, mu=1.0 / 3.0))

    def test_unit_sign(self):
        with pytest.raises(ParamConstraintViolatedError):
            instantiate(spec(FormId.III, beta=2.0))

    def test_non_finite(self):
        with pytest.raises(ParamConstraintViolatedError):
            instantiate(spec(FormId.IX, p1=math.inf))

    def test_form_v_needs_nonzero(self):
        with pytest.raises(ParamConstraintViolatedError):
            instantiate(spec(FormId.F_V, q1=0.0, q2=0.0))

    def test_error_exit_code(self):
        with pytest.raises(ParamConstraintViolatedError) as exc:
            instantiate(spec(FormId.I, mu=1.0))
        assert exc.value.exit_code == 2


class TestDegree2Case:
    @pytest.mark.parametrize(
        "q1, q2, label",
        [(0.0, 2.0, "q2-q1>1"), (0.0, 0.5, "q2-q1<1"), (1.0, 2.0, "q2-q1=1")],
    )
    def test_form_i_labels(self, q1, q2, label):
        assert degree2_case(FormId.F_I, q1, q2).case_label == label

    def test_form_ii_region(self):
        prediction = degree2_case(FormId.F_II, 0.0, 0.0)
        assert prediction.case_label.startswith("A:")
        assert [e.relation for e in prediction.expectations] == ["<0", "=0", ">=0"]

    def test_form_v_line(self):
        prediction = degree2_case(FormId.F_V, 1.0, 0.0)
        assert prediction.case_label == "q1q2=0"
        assert all(e.relation == "=0" for e in prediction.expectations)

    def test_rejects_degree3(self):
        with pytest.raises(ParamConstraintViolatedError):
            degree2_case(FormId.IX, 1.0, 1.0)


class TestConsistency:
    @pytest.mark.parametrize("form", [FormId.I, FormId.IV, FormId.VII, FormId.IX])
    def test_degree3_forms_match(self, form):
        report = consistency_check(spec(form, p1=0.5, p2=-1.0, p3=2.0))
        assert report.mismatches == 0
        assert {c.name for c in report.checks} >= {"count", "stability_classes"}

    def test_form_x_infinitely_many(self):
        report = consistency_check(spec(FormId.X, p1=1.0, p3=1.0))
        assert [c.name for c in report.checks] == ["count"]
        assert report.checks[0].status is CheckStatus.MATCH
        assert report.checks[0].engine == "inf"

    def test_degree2_reports_informational_checks(self):
        report = consistency_check(spec(FormId.F_I, q1=0.0, q2=2.0))
        informational = {c.name for c in report.checks if c.informational}
        assert informational == {"binary_form_identity", "printed_angles"}
        count = next(c for c in report.checks if c.name == "count")
        assert count.status is CheckStatus.MATCH

    def test_expected_table(self):
        assert expected_infinity(spec(FormId.I)).count == 8
        assert expected_infinity(spec(FormId.X)).count is None


class TestAuditGrid:
    def test_degree2_skips_zero_form_v(self):
        specs = audit_grid([0.0], degree=2)
        assert len(specs) == 8
        assert all(s.form_id is not FormId.F_V for s in specs)

    def test_degree_filter_and_signs(self):
        specs = audit_grid([-1.0, 2.0], degree=3)
        assert all(s.degree == 3 for s in specs)
        assert {s.lambda_sign for s in specs} == {-1, 1}
        assert len([s for s in specs if s.form_id is FormId.X]) == 2 ** 3 * 2

    @pytest.mark.slow
    def test_degree3_audit_match_rate(self):
        reports = []
        for item in audit_grid([-1.0, 0.5, 2.0], degree=3):
            try:
                reports.append(consistency_check(item))
            except ParamConstraintViolatedError:
                continue
        matched = sum(1 for report in reports if report.mismatches == 0)
        assert len(reports) > 100
        assert matched / len(reports) >= 0.95
