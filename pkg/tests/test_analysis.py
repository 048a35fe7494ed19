import json
import math

import numpy as np
import pytest

from qegraph import (
    ThetaSpec,
    classification_sweep,
    classify_schoenberg,
    classify_theta_closed_form,
    classify_winkler,
    distance_matrix,
    is_isometrically_embedded,
    make_cycle,
    make_path,
    make_theta,
    qec,
    qec_cycle,
    qec_theta1_bounds,
    run_reference_suite,
    sweep_to_csv,
    sweep_to_json,
    witness_quadratic_form,
    witness_report,
)


class TestClosedForm:
    @pytest.mark.parametrize(
        "legs,expected,rule_part",
        [
            ((1, 2, 2), True, "alpha = 1"),
            ((1, 7, 11), True, "alpha = 1"),
            ((2, 3, 3), True, "{3, 5, 7}"),
            ((2, 3, 5), True, "{3, 5, 7}"),
            ((2, 3, 7), True, "{3, 5, 7}"),
            ((2, 2, 2), False, "alpha = beta = 2"),
            ((2, 2, 9), False, "alpha = beta = 2"),
            ((2, 3, 4), False, "gamma even"),
            ((2, 3, 100), False, "gamma even"),
            ((2, 3, 9), False, "gamma odd >= 9"),
            ((2, 3, 1001), False, "gamma odd >= 9"),
            ((2, 4, 5), False, "beta >= 4"),
            ((3, 3, 3), False, "alpha >= 3"),
            ((5, 6, 7), False, "alpha >= 3"),
        ],
    )
    def test_rules(self, legs, expected, rule_part):
        verdict = classify_theta_closed_form(ThetaSpec(*legs))
        assert verdict.is_qe == expected
        assert rule_part in verdict.evidence["rule"]

    def test_normalization_of_legs(self):
        assert classify_theta_closed_form(ThetaSpec(7, 3, 2)).is_qe
        assert classify_theta_closed_form(ThetaSpec(9, 3, 2)).is_qe is False


class TestDecisionRoutes:
    def test_corpus_agreement_with_known_class(self, corpus):
        for uri, g, expected in corpus:
            sb = classify_schoenberg(g)
            wk = classify_winkler(g)
            assert sb.is_qe == expected, (uri, sb.evidence)
            assert wk.is_qe == expected, (uri, wk.evidence)

    def test_modes_agree_on_corpus(self, corpus):
        for uri, g, _ in corpus:
            for classify in (classify_schoenberg, classify_winkler):
                float_v = classify(g, mode="float")
                exact_v = classify(g, mode="exact")
                assert float_v.is_qe == exact_v.is_qe, uri

    def test_verdict_shape(self):
        g = make_theta(ThetaSpec(2, 2, 2))
        verdict = classify_winkler(g)
        assert verdict.decision == "NonQE"
        assert verdict.method == "winkler"
        json.dumps(verdict.evidence)  # evidence must stay JSON-safe
        assert len(verdict.evidence["certificate"]) > 0

    def test_single_vertex_is_trivially_embeddable(self):
        g = make_path(1)
        assert classify_schoenberg(g).is_qe
        assert classify_winkler(g).is_qe


class TestQec:
    def test_path_values_are_negative(self):
        assert qec(make_path(2)).value == pytest.approx(-1.0)
        assert qec(make_path(5)).value < 0

    def test_cycles_match_closed_form(self):
        for m in (3, 4, 5, 6, 7, 9, 12, 13):
            value = qec(make_cycle(m)).value
            assert abs(value - qec_cycle(m)) <= 1e-9

    def test_maximizer_is_feasible_and_attains(self, corpus):
        for uri, g, _ in corpus:
            result = qec(g)
            f = np.array(result.maximizer)
            d = distance_matrix(g)
            assert abs(np.linalg.norm(f) - 1.0) <= 1e-9, uri
            assert abs(f.sum()) <= 1e-9, uri
            assert abs(float(f @ d @ f) - result.value) <= 1e-8, uri

    def test_sign_consistent_with_schoenberg(self, corpus):
        for uri, g, _ in corpus:
            assert qec(g).is_qe == classify_schoenberg(g).is_qe, uri

    def test_qec_cycle_validation(self):
        with pytest.raises(ValueError):
            qec_cycle(2)

    def test_qec_needs_two_vertices(self):
        with pytest.raises(ValueError):
            qec(make_path(1))

    def test_theta1_bounds(self):
        assert qec_theta1_bounds(3, 4) == (0.0, 0.0)
        low, high = qec_theta1_bounds(4, 6)
        assert high == 0.0
        assert low == pytest.approx(-1.0 / (4.0 * math.cos(math.pi / 7.0) ** 2))
        with pytest.raises(ValueError):
            qec_theta1_bounds(4, 3)


class TestIsometricMonotonicity:
    # an isometrically embedded subgraph can only lower the constant
    def test_short_leg_rings(self):
        for beta, gamma in ((2, 2), (2, 3), (3, 4), (4, 4), (4, 6), (5, 7)):
            spec = ThetaSpec(1, beta, gamma)
            g = make_theta(spec)
            ring = spec.path_vertices("z")
            h = make_cycle(gamma + 1)
            assert is_isometrically_embedded(h, g, dict(enumerate(ring)))
            assert qec(h).value <= qec(g).value + 1e-8, (beta, gamma)

    def test_balanced_theta_rings(self):
        for legs in ((2, 2, 2), (2, 2, 5), (3, 3, 3), (3, 3, 4)):
            spec = ThetaSpec(*legs)
            g = make_theta(spec)
            ring = list(spec.path_vertices("y"))
            ring += list(spec.path_vertices("z"))[-2:0:-1]
            h = make_cycle(len(ring))
            assert is_isometrically_embedded(h, g, dict(enumerate(ring)))
            assert qec(h).value <= qec(g).value + 1e-8, legs


class TestWitness:
    def test_value_for_small_k(self):
        for k in (1, 2, 3, 7):
            assert witness_quadratic_form(k) == 16272

    def test_report_contents(self):
        rep = witness_report(2)
        assert rep.spec == ThetaSpec(2, 3, 11)
        assert rep.quadratic_form == 16272
        assert len(rep.vertices) == len(rep.coefficients) == 13
        full = rep.full_vector()
        assert len(full) == rep.spec.n_vertices
        assert sum(full) == 0
        d = distance_matrix(make_theta(rep.spec))
        f = np.array(full, dtype=np.int64)
        assert int(f @ d @ f) == 16272

    def test_positive_form_certifies_non_embeddability(self):
        # the witness exhibits <f, Df> > 0 with sum(f) = 0
        rep = witness_report(1)
        assert rep.quadratic_form > 0
        assert not classify_schoenberg(make_theta(rep.spec)).is_qe

    def test_bad_k_rejected(self):
        with pytest.raises(ValueError):
            witness_quadratic_form(0)


class TestSweep:
    def test_row_count_matches_enumeration(self):
        report = classification_sweep(max_vertices=9)
        expected = sum(
            1
            for a in range(1, 20)
            for b in range(max(a, 2), 20)
            for c in range(b, 20)
            if a + b + c - 1 <= 9
        )
        assert len(report.rows) == expected == 23

    def test_embeddable_set_matches_classification(self):
        report = classification_sweep(max_vertices=12)
        got = {r.spec.legs for r in report.rows if r.schoenberg}
        want = {legs for legs in (r.spec.legs for r in report.rows) if legs[0] == 1}
        want |= {(2, 3, 3), (2, 3, 5), (2, 3, 7)}
        assert got == want
        assert report.all_consistent

    def test_min_vertices_enforced(self):
        with pytest.raises(ValueError):
            classification_sweep(max_vertices=4)

    def test_csv_and_json_outputs(self):
        report = classification_sweep(max_vertices=7)
        csv_text = sweep_to_csv(report)
        lines = csv_text.strip().splitlines()
        assert lines[0] == "alpha,beta,gamma,n,closed_form,schoenberg,winkler,qec"
        assert len(lines) == len(report.rows) + 1
        assert any(line.startswith("2,2,2,5,NonQE") for line in lines)
        assert any(line.startswith("1,2,2,4,QE") for line in lines)
        payload = json.loads(sweep_to_json(report))
        assert payload["max_vertices"] == 7
        assert payload["all_consistent"] is True
        assert len(payload["rows"]) == len(report.rows)


class TestReferenceSuite:
    def test_all_fixtures_pass(self):
        results = run_reference_suite()
        assert len(results) == 12
        failures = [r for r in results if not r.passed]
        assert not failures, failures
        assert all(r.elapsed >= 0.0 for r in results)

    def test_tampered_reference_detected(self, monkeypatch):
        from qegraph import fixtures

        bad = fixtures.reference_two_k(ThetaSpec(2, 3, 3)).copy()
        bad[0, 1] = 1
        bad[1, 0] = 1
        monkeypatch.setattr(fixtures, "reference_two_k", lambda spec: bad)
        results = run_reference_suite()
        assert any(not r.passed for r in results)
