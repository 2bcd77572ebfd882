"""Experiment configuration: one JSON document describing a study.

The document has six sections.  ``dilation``, ``generator`` and ``signal``
are required; ``operator``, ``rule`` and ``study`` fall back to defaults
(identity operator, exact sampling, the study parameters listed in
:data:`STUDY_DEFAULTS`).  Every key is checked: unknown keys, missing
required keys, and out-of-range values raise :class:`ConfigError` with the
offending ``section.key`` path in the message.

Example::

    {
      "dilation": {"rows": [[2]]},
      "generator": {"family": "bspline4_1d", "params": "calibrate"},
      "operator": {"kind": "ball", "N": 3, "h": 0.5},
      "signal": {"kind": "gaussian"},
      "rule": {"kind": "falsified", "h": 0.5},
      "study": {"j_min": 1, "j_max": 7, "p": "inf"}
    }
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from ._quadrature import QuadSpec
from .analysis import StudyPlan
from .calibrate import CalibrationResult, solve_free_params
from .diffop import DiffOperator, ball_operator, delta_operator
from .dilation import Dilation
from .expansion import DifferentialRule, ExactRule, FalsifiedRule
from .generators import named_families, named_generators
from .signals import Signal, gaussian, named_signals

STUDY_DEFAULTS = {
    "j_min": 1,
    "j_max": 8,
    "p": "inf",
    "domain_halfwidth": None,
    "grid_per_scale": 8,
    "truncation_tol": 1e-10,
    "quad_order": 16,
    "fit_skip": 2,
    "slope_tolerance": 0.25,
    "seed": 0,
}

_FAMILY_DIM = {"bspline3_2d": 2, "bspline4_1d": 1}
_KINKED_SIGNALS = ("laplace1d", "matern1d")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


_MISSING = object()


def _mapping(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    return dict(obj)


def _take(sec: dict, path: str, key: str, default=_MISSING):
    if key in sec:
        return sec.pop(key)
    if default is _MISSING:
        raise ConfigError(f"{path}.{key}: required key missing")
    return default


def _reject_leftovers(sec: dict, path: str):
    if sec:
        raise ConfigError(f"{path}.{sorted(sec)[0]}: unknown key")


def _real(value, path: str, positive: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number")
    if positive and value <= 0:
        raise ConfigError(f"{path}: must be positive")
    return float(value)


def _integer(value, path: str, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: must be at least {minimum}")
    return value


def _choice(value, path: str, allowed: tuple):
    if value not in allowed:
        opts = ", ".join(repr(a) for a in allowed)
        raise ConfigError(f"{path}: expected one of {opts}")
    return value


def _matrix_rows(value, path: str):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected a non-empty list of rows")
    d = len(value)
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != d:
            raise ConfigError(f"{path}[{i}]: expected a row of length {d}")
        for v in row:
            _integer(v, f"{path}[{i}]")
        rows.append(tuple(int(v) for v in row))
    return tuple(rows)


def _json_number(v):
    v = complex(v)
    if v.imag == 0:
        return v.real
    return [v.real, v.imag]


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description with constructors for each piece."""

    rows: tuple
    family: str
    params: object
    operator_kind: str
    operator_n: int | None
    operator_h: float | None
    signal_kind: str
    signal_offset: float
    rule_kind: str
    rule_h: float | None
    j_min: int
    j_max: int
    p_label: str
    domain_halfwidth: float | None
    grid_per_scale: int
    truncation_tol: float
    quad_order: int
    fit_skip: int
    slope_tolerance: float
    seed: int

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def p(self) -> float:
        return math.inf if self.p_label == "inf" else float(self.p_label)

    def quad(self) -> QuadSpec:
        return QuadSpec(order=self.quad_order, seed=self.seed)

    def build_dilation(self) -> Dilation:
        try:
            return Dilation(self.rows)
        except ValueError as e:
            raise ConfigError(f"dilation.rows: {e}") from e

    def build_operator(self) -> DiffOperator:
        if self.operator_kind == "delta":
            return delta_operator(self.d)
        return ball_operator(self.d, self.operator_n, self.operator_h)

    def build_signal(self) -> Signal:
        if self.signal_kind == "gaussian":
            return gaussian(self.d)
        return named_signals[self.signal_kind](self.signal_offset)

    def build_generator(self):
        """The configured generator and its calibration result, if any."""
        if self.family in named_families:
            family = named_families[self.family]
            if self.params == "calibrate":
                zero = family.make([0.0] * len(family.param_names))
                result = solve_free_params(
                    family, self.build_operator(), zero.sf_order
                )
                return family.make(result.params), result
            return family.make(self.params), None
        return named_generators[self.family](self.d), None

    def build_rule(self):
        if self.rule_kind == "exact":
            return ExactRule()
        if self.rule_kind == "differential":
            return DifferentialRule(self.build_operator())
        return FalsifiedRule(self.rule_h, quad=self.quad())

    def build_plan(self):
        """A ready-to-run study plan plus the calibration result, if any."""
        g, cal = self.build_generator()
        plan = StudyPlan(
            generator=g,
            dilation=self.build_dilation(),
            rule=self.build_rule(),
            signal=self.build_signal(),
            operator=self.build_operator(),
            p=self.p,
            j_min=self.j_min,
            j_max=self.j_max,
            grid_per_scale=self.grid_per_scale,
            fit_skip=self.fit_skip,
            slope_tolerance=self.slope_tolerance,
            domain_halfwidth=self.domain_halfwidth,
            truncation_tol=self.truncation_tol,
        )
        return plan, cal

    def echo(self, calibration: CalibrationResult | None = None,
             domain_halfwidth: float | None = None) -> dict:
        """JSON-safe fully-resolved config for embedding in reports."""
        if calibration is not None:
            params = [_json_number(calibration.params[n])
                      for n in named_families[self.family].param_names]
        elif isinstance(self.params, dict):
            params = {k: _json_number(v) for k, v in self.params.items()}
        elif isinstance(self.params, (tuple, list)):
            params = [_json_number(v) for v in self.params]
        else:
            params = self.params
        operator = {"kind": self.operator_kind}
        if self.operator_kind == "ball":
            operator.update(N=self.operator_n, h=self.operator_h)
        signal = {"kind": self.signal_kind}
        if self.signal_kind in _KINKED_SIGNALS:
            signal["offset"] = self.signal_offset
        rule = {"kind": self.rule_kind}
        if self.rule_kind == "falsified":
            rule["h"] = self.rule_h
        halfwidth = (
            domain_halfwidth if domain_halfwidth is not None
            else self.domain_halfwidth
        )
        return {
            "dilation": {"rows": [list(r) for r in self.rows]},
            "generator": {"family": self.family, "params": params},
            "operator": operator,
            "signal": signal,
            "rule": rule,
            "study": {
                "j_min": self.j_min,
                "j_max": self.j_max,
                "p": self.p_label,
                "domain_halfwidth": halfwidth,
                "grid_per_scale": self.grid_per_scale,
                "truncation_tol": self.truncation_tol,
                "quad_order": self.quad_order,
                "fit_skip": self.fit_skip,
                "slope_tolerance": self.slope_tolerance,
                "seed": self.seed,
            },
        }


def from_mapping(obj) -> ExperimentConfig:
    """Validate a parsed configuration document."""
    doc = _mapping(obj, "config")
    dil = _mapping(_take(doc, "config", "dilation"), "dilation")
    gen = _mapping(_take(doc, "config", "generator"), "generator")
    sig = _mapping(_take(doc, "config", "signal"), "signal")
    op = _mapping(_take(doc, "config", "operator", {"kind": "delta"}),
                  "operator")
    rule = _mapping(_take(doc, "config", "rule", {"kind": "exact"}), "rule")
    study = _mapping(_take(doc, "config", "study", {}), "study")
    _reject_leftovers(doc, "config")

    rows = _matrix_rows(_take(dil, "dilation", "rows"), "dilation.rows")
    _reject_leftovers(dil, "dilation")
    d = len(rows)

    family = _choice(_take(gen, "generator", "family"), "generator.family",
                     tuple(sorted(named_generators)))
    params = _take(gen, "generator", "params", None)
    _reject_leftovers(gen, "generator")
    params = _check_params(family, params, d)

    kind = _choice(_take(op, "operator", "kind", "delta"), "operator.kind",
                   ("delta", "ball"))
    if kind == "ball":
        op_n = _integer(_take(op, "operator", "N"), "operator.N", minimum=0)
        op_h = _real(_take(op, "operator", "h"), "operator.h", positive=True)
    else:
        op_n, op_h = None, None
    _reject_leftovers(op, "operator")

    sig_kind = _choice(_take(sig, "signal", "kind"), "signal.kind",
                       tuple(sorted(named_signals)))
    offset = _take(sig, "signal", "offset", None)
    _reject_leftovers(sig, "signal")
    if sig_kind in _KINKED_SIGNALS:
        if d != 1:
            raise ConfigError(f"signal.kind: {sig_kind} needs a 1-d dilation")
        offset = 0.0 if offset is None else _real(offset, "signal.offset")
    elif offset is not None:
        raise ConfigError(f"signal.offset: {sig_kind} takes no offset")
    else:
        offset = 0.0

    rule_kind = _choice(_take(rule, "rule", "kind", "exact"), "rule.kind",
                        ("exact", "differential", "falsified"))
    rule_h = _take(rule, "rule", "h", None)
    _reject_leftovers(rule, "rule")
    if rule_kind == "falsified":
        if rule_h is None:
            raise ConfigError("rule.h: required for the falsified rule")
        rule_h = _real(rule_h, "rule.h", positive=True)
        if kind != "ball":
            raise ConfigError(
                "operator.kind: falsified studies need a ball operator context"
            )
        if op_h != rule_h:
            raise ConfigError(
                "operator.h: must match rule.h for falsified studies"
            )
    elif rule_h is not None:
        raise ConfigError(f"rule.h: the {rule_kind} rule takes no h")

    def study_key(key, check, **kw):
        v = _take(study, "study", key, STUDY_DEFAULTS[key])
        if v is None and STUDY_DEFAULTS[key] is None:
            return None
        return check(v, f"study.{key}", **kw)

    j_min = study_key("j_min", _integer, minimum=0)
    j_max = study_key("j_max", _integer, minimum=1)
    if j_max <= j_min:
        raise ConfigError("study.j_max: must exceed study.j_min")
    p_label = _take(study, "study", "p", STUDY_DEFAULTS["p"])
    if p_label in (2, "2"):
        p_label = "2"
    elif p_label == "inf":
        p_label = "inf"
    else:
        raise ConfigError('study.p: expected "2" or "inf"')
    halfwidth = study_key("domain_halfwidth", _real, positive=True)
    grid_per_scale = study_key("grid_per_scale", _integer, minimum=2)
    truncation_tol = study_key("truncation_tol", _real, positive=True)
    quad_order = study_key("quad_order", _integer, minimum=2)
    fit_skip = study_key("fit_skip", _integer, minimum=0)
    slope_tolerance = study_key("slope_tolerance", _real, positive=True)
    seed = study_key("seed", _integer, minimum=0)
    _reject_leftovers(study, "study")

    return ExperimentConfig(
        rows=rows,
        family=family,
        params=params,
        operator_kind=kind,
        operator_n=op_n,
        operator_h=op_h,
        signal_kind=sig_kind,
        signal_offset=offset,
        rule_kind=rule_kind,
        rule_h=rule_h,
        j_min=j_min,
        j_max=j_max,
        p_label=p_label,
        domain_halfwidth=halfwidth,
        grid_per_scale=grid_per_scale,
        truncation_tol=truncation_tol,
        quad_order=quad_order,
        fit_skip=fit_skip,
        slope_tolerance=slope_tolerance,
        seed=seed,
    )


def _check_params(family: str, params, d: int):
    want = _FAMILY_DIM.get(family)
    if want is not None and want != d:
        raise ConfigError(
            f"generator.family: {family} needs a {want}-d dilation"
        )
    if family not in named_families:
        if params is not None:
            raise ConfigError(f"generator.params: {family} takes no parameters")
        return None
    names = named_families[family].param_names
    if params == "calibrate":
        return "calibrate"
    if isinstance(params, list):
        if len(params) != len(names):
            raise ConfigError(
                f"generator.params: {family} expects {len(names)} values"
            )
        return tuple(_real(v, "generator.params") for v in params)
    if isinstance(params, dict):
        if set(params) != set(names):
            raise ConfigError(
                f"generator.params: {family} expects keys {', '.join(names)}"
            )
        return {k: _real(v, f"generator.params.{k}") for k, v in params.items()}
    raise ConfigError(
        'generator.params: expected a list, an object, or "calibrate"'
    )


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON experiment document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"config line {e.lineno} column {e.colno}: {e.msg}"
        ) from e
    return from_mapping(obj)
