"""Experiment document validation: defaults, rejections, echo round-trips."""
import math

import pytest

from dilsamp import CalibrationResult
from dilsamp.config import ConfigError, from_mapping, parse_config


def minimal(**sections):
    doc = {
        "dilation": {"rows": [[2]]},
        "generator": {"family": "hat"},
        "signal": {"kind": "gaussian"},
    }
    doc.update(sections)
    return doc


FALSIFIED = {
    "dilation": {"rows": [[2]]},
    "generator": {"family": "bspline4_1d", "params": "calibrate"},
    "operator": {"kind": "ball", "N": 3, "h": 0.5},
    "signal": {"kind": "gaussian"},
    "rule": {"kind": "falsified", "h": 0.5},
    "study": {"j_min": 1, "j_max": 7, "p": "inf"},
}


class TestDefaults:
    def test_minimal_document(self):
        cfg = from_mapping(minimal())
        assert cfg.d == 1
        assert (cfg.j_min, cfg.j_max) == (1, 8)
        assert cfg.p == math.inf and cfg.p_label == "inf"
        assert cfg.operator_kind == "delta"
        assert cfg.rule_kind == "exact"
        assert cfg.grid_per_scale == 8
        assert cfg.truncation_tol == 1e-10
        assert cfg.quad_order == 16
        assert cfg.fit_skip == 2
        assert cfg.slope_tolerance == 0.25
        assert cfg.seed == 0
        assert cfg.params is None and cfg.signal_offset == 0.0

    def test_numeric_p_normalizes(self):
        cfg = from_mapping(minimal(study={"p": 2}))
        assert cfg.p_label == "2" and cfg.p == 2.0

    def test_quad_spec_carries_order_and_seed(self):
        cfg = from_mapping(minimal(study={"quad_order": 24, "seed": 7}))
        q = cfg.quad()
        assert (q.order, q.seed) == (24, 7)


class TestRejections:
    @pytest.mark.parametrize(
        "mutate, needle",
        [
            (lambda d: d.update(extra={}), "config.extra: unknown key"),
            (lambda d: d.pop("signal"), "config.signal: required"),
            (lambda d: d["study"].update(bogus=1), "study.bogus: unknown key"),
            (lambda d: d["dilation"].update(rows=[[2, 0]]), "dilation.rows[0]"),
            (lambda d: d["dilation"].update(rows=[[1.5]]), "expected an integer"),
            (lambda d: d["generator"].update(family="mystery"), "generator.family"),
            (lambda d: d["signal"].update(kind="gaussian", offset=0.3),
             "takes no offset"),
            (lambda d: d["study"].update(j_min=5, j_max=5), "must exceed"),
            (lambda d: d["study"].update(p="3"), 'expected "2" or "inf"'),
            (lambda d: d["study"].update(slope_tolerance=True), "expected a number"),
            (lambda d: d["study"].update(truncation_tol=-1e-10), "must be positive"),
            (lambda d: d["study"].update(grid_per_scale=1), "at least 2"),
        ],
    )
    def test_invalid_documents(self, mutate, needle):
        doc = minimal(study={})
        mutate(doc)
        with pytest.raises(ConfigError) as err:
            from_mapping(doc)
        assert needle in str(err.value)

    def test_plain_generator_takes_no_params(self):
        doc = minimal()
        doc["generator"]["params"] = [1.0]
        with pytest.raises(ConfigError, match="takes no parameters"):
            from_mapping(doc)

    def test_family_params_arity(self):
        doc = minimal()
        doc["generator"] = {"family": "bspline4_1d", "params": [0.0, 1.0]}
        with pytest.raises(ConfigError, match="expects 3 values"):
            from_mapping(doc)

    def test_family_params_key_set(self):
        doc = minimal()
        doc["generator"] = {"family": "bspline4_1d",
                            "params": {"b1": 0.0, "bX": 1.0, "b3": 0.0}}
        with pytest.raises(ConfigError, match="expects keys b1, b2, b3"):
            from_mapping(doc)

    def test_family_needs_matching_dimension(self):
        doc = minimal()
        doc["dilation"] = {"rows": [[2, 0], [0, 2]]}
        doc["generator"] = {"family": "bspline4_1d", "params": "calibrate"}
        with pytest.raises(ConfigError, match="needs a 1-d dilation"):
            from_mapping(doc)

    def test_kinked_signal_needs_one_dimension(self):
        doc = minimal()
        doc["dilation"] = {"rows": [[2, 0], [0, 2]]}
        doc["generator"] = {"family": "hat"}
        doc["signal"] = {"kind": "laplace1d"}
        with pytest.raises(ConfigError, match="needs a 1-d dilation"):
            from_mapping(doc)

    def test_falsified_needs_radius(self):
        doc = minimal(rule={"kind": "falsified"})
        with pytest.raises(ConfigError, match="rule.h: required"):
            from_mapping(doc)

    def test_falsified_needs_ball_context(self):
        doc = minimal(rule={"kind": "falsified", "h": 0.5})
        with pytest.raises(ConfigError, match="ball operator context"):
            from_mapping(doc)

    def test_falsified_radius_must_match_operator(self):
        doc = dict(FALSIFIED)
        doc["rule"] = {"kind": "falsified", "h": 0.4}
        with pytest.raises(ConfigError, match="must match rule.h"):
            from_mapping(doc)

    def test_exact_rule_takes_no_radius(self):
        doc = minimal(rule={"kind": "exact", "h": 0.5})
        with pytest.raises(ConfigError, match="takes no h"):
            from_mapping(doc)

    def test_ball_operator_needs_order(self):
        doc = minimal(operator={"kind": "ball", "h": 0.5})
        with pytest.raises(ConfigError, match="operator.N: required"):
            from_mapping(doc)

    def test_json_syntax_errors_carry_position(self):
        with pytest.raises(ConfigError, match="config line 1 column"):
            parse_config("{bad json")


class TestBuilders:
    def test_falsified_document_builds_a_plan(self):
        cfg = from_mapping(dict(FALSIFIED))
        plan, cal = cfg.build_plan()
        assert isinstance(cal, CalibrationResult)
        assert cal.params["b2"] == pytest.approx(2.0 / 3.0 + 2.0 * 0.25 / 3.0,
                                                 abs=1e-9)
        assert plan.operator.order == 3
        assert plan.rule.h == 0.5
        assert plan.j_max == 7

    def test_offset_reaches_the_signal(self):
        doc = minimal(signal={"kind": "matern1d", "offset": 1.0 / 3.0})
        cfg = from_mapping(doc)
        sig = cfg.build_signal()
        assert sig.kinks == (pytest.approx(1.0 / 3.0),)

    def test_dilation_errors_are_config_errors(self):
        doc = minimal()
        doc["dilation"] = {"rows": [[0, -1], [1, 0]]}
        cfg = from_mapping(doc)
        with pytest.raises(ConfigError, match="dilation.rows"):
            cfg.build_dilation()


class TestEcho:
    def test_echo_of_minimal_round_trips(self):
        cfg = from_mapping(minimal())
        assert from_mapping(cfg.echo()) == cfg

    def test_echo_resolves_calibration(self):
        cfg = from_mapping(dict(FALSIFIED))
        _, cal = cfg.build_plan()
        echo = cfg.echo(cal, domain_halfwidth=4.2)
        params = echo["generator"]["params"]
        assert isinstance(params, list) and len(params) == 3
        assert params[1] == pytest.approx(5.0 / 6.0, abs=1e-9)
        assert echo["operator"] == {"kind": "ball", "N": 3, "h": 0.5}
        assert echo["rule"] == {"kind": "falsified", "h": 0.5}
        assert echo["study"]["domain_halfwidth"] == 4.2
        # a resolved echo is itself a valid document
        resolved = from_mapping(echo)
        assert resolved.params == tuple(params)
