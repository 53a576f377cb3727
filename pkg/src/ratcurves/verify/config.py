"""Run configuration: JSON schema, validation and conversion to domain objects."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import jsonschema

from ..errors import ConfigError
from ..exact import DEFAULT_SEED, Field, FieldConfig
from ..geometry import BlowupTower, CurveClass, build_tower
from ..incidence import DEFAULT_RETRIES, compile_infinitesimal, make_datum, make_prescription

SCHEMA_VERSION = 1
EXPERIMENT_KINDS = (
    "fiber-dimension",
    "freeness",
    "splitting-census",
    "jet-roundtrip",
    "pencil-closure",
    "property-suites",
)

_number = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*-?\d+)?\s*$"},
    ]
}
_vector = {"type": "array", "items": _number, "minItems": 1}
_point_list = {"type": "array", "items": _vector, "minItems": 1}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["ambient", "beta", "field"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "ambient": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "centers": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind"],
                "properties": {"kind": {"enum": ["linear", "infinitesimal"]}},
                "if": {"properties": {"kind": {"const": "linear"}}},
                "then": {
                    "additionalProperties": False,
                    "properties": {
                        "kind": {},
                        "point": _point_list,
                        "equations": {"type": "array", "items": {"type": "array", "items": _vector}},
                    },
                    "oneOf": [{"required": ["point"]}, {"required": ["equations"]}],
                },
                "else": {
                    "additionalProperties": False,
                    "required": ["parent", "chart", "direction"],
                    "properties": {
                        "kind": {},
                        "parent": {"type": "integer", "minimum": 0},
                        "chart": {"type": "integer", "minimum": 0},
                        "direction": {"type": "array", "items": _number},
                    },
                },
            },
        },
        "beta": {
            "type": "object",
            "additionalProperties": False,
            "required": ["degrees"],
            "properties": {
                "degrees": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
                "e_total": {"type": "array", "items": {"type": "integer"}},
            },
        },
        "data": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["p", "center"],
                "properties": {
                    "p": {"type": "array", "items": _number, "minItems": 2, "maxItems": 2},
                    "center": {"type": "integer", "minimum": 0},
                    "q": _point_list,
                    "path": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["chart", "direction"],
                            "properties": {
                                "chart": {"type": "integer", "minimum": 0},
                                "direction": {"type": "array", "items": _number},
                            },
                        },
                    },
                    "mult": {"type": "integer", "minimum": 1},
                },
            },
        },
        "jets": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["p", "q", "values"],
                "properties": {
                    "p": {"type": "array", "items": _number, "minItems": 2, "maxItems": 2},
                    "q": _point_list,
                    "values": {"type": "array", "items": _vector},
                },
            },
        },
        "field": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "seed"],
            "properties": {
                "kind": {"enum": ["q", "fp"]},
                "prime": {"type": "integer", "minimum": 2},
                "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
            },
            "if": {"properties": {"kind": {"const": "fp"}}},
            "then": {"required": ["prime"]},
        },
        "experiment": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": list(EXPERIMENT_KINDS)},
                "trials": {"type": "integer", "minimum": 1},
                "retries": {"type": "integer", "minimum": 1},
                "exploratory": {"type": "boolean"},
            },
        },
    },
}

_validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def validate_config(raw) -> None:
    """Raise ConfigError for the most relevant schema violation."""
    err = jsonschema.exceptions.best_match(_validator.iter_errors(raw))
    if err is not None:
        raise ConfigError(_pointer(err.absolute_path), err.message)


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str = "fiber-dimension"
    trials: int = 200
    retries: int = DEFAULT_RETRIES
    exploratory: bool = False


@dataclass(frozen=True, eq=False)
class RunConfig:
    name: str
    field_config: FieldConfig
    field: Field
    tower: BlowupTower
    beta: CurveClass
    data: tuple  # IncidenceDatum
    jets: tuple  # JetPrescription
    experiment: ExperimentSpec
    raw: dict

    @property
    def seed(self) -> int:
        return self.field_config.seed


def _build(raw: dict, field_config: FieldConfig, name: str) -> RunConfig:
    F = field_config.field()
    tower_spec = {"ambient": raw["ambient"], "centers": raw.get("centers", [])}
    try:
        tower = build_tower(tower_spec, F)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError("/centers", str(exc)) from exc
    b = raw["beta"]
    if len(b["degrees"]) != tower.ambient.n_factors:
        raise ConfigError("/beta/degrees", f"needs {tower.ambient.n_factors} entries")
    e_total = b.get("e_total", [0] * tower.r)
    if len(e_total) != tower.r:
        raise ConfigError("/beta/e_total", f"needs {tower.r} entries, one per center")
    try:
        beta = CurveClass(tuple(b["degrees"]), tuple(e_total))
    except ValueError as exc:
        raise ConfigError("/beta/degrees", str(exc)) from exc

    data = []
    for a, d in enumerate(raw.get("data", [])):
        where = f"/data/{a}"
        if d["center"] >= tower.r:
            raise ConfigError(f"{where}/center", f"center {d['center']} does not exist")
        try:
            datum = make_datum(F, d["p"], d["center"], d.get("q"), d.get("mult", 1))
            if "path" in d:
                path = [(s["chart"], s["direction"]) for s in d["path"]]
                compile_infinitesimal(tower, beta.degrees, datum, path=path)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(where, str(exc)) from exc
        data.append(datum)

    jets = []
    for a, j in enumerate(raw.get("jets", [])):
        try:
            jets.append(make_prescription(F, tower.ambient, j["p"], j["q"], j["values"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"/jets/{a}", str(exc)) from exc

    exp = raw.get("experiment", {})
    spec = ExperimentSpec(
        kind=exp.get("kind", "fiber-dimension"),
        trials=exp.get("trials", ExperimentSpec.trials),
        retries=exp.get("retries", DEFAULT_RETRIES),
        exploratory=exp.get("exploratory", False),
    )
    return RunConfig(name, field_config, F, tower, beta, tuple(data), tuple(jets), spec, raw)


def parse_config(raw, name: str = "config", overrides: dict | None = None) -> RunConfig:
    """Validate ``raw`` against the schema, apply CLI overrides and build the run."""
    validate_config(raw)
    overrides = overrides or {}
    fraw = raw["field"]
    kind = overrides.get("field") or fraw["kind"]
    prime = overrides.get("prime") or fraw.get("prime", FieldConfig.prime)
    seed = overrides["seed"] if overrides.get("seed") is not None else fraw.get("seed", DEFAULT_SEED)
    try:
        fc = FieldConfig(kind, prime, seed)
    except ValueError as exc:
        raise ConfigError("/field", str(exc)) from exc
    run = _build(raw, fc, raw.get("name", name))
    if overrides.get("trials") is not None:
        run = replace(run, experiment=replace(run.experiment, trials=overrides["trials"]))
    return run


def load_config(path, overrides: dict | None = None) -> RunConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError("/", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("/", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_config(raw, path.stem, overrides)
