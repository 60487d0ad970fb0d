"""JSON config loading, schema validation and object construction."""

from importlib import resources
import json
import math
import os

import jsonschema
from referencing import Registry, Resource

from dcl import constants as C
from dcl import stiffness as st
from dcl.dynamics import JumpScenario, RobotParams
from dcl.lattice import SectorDomain, TpmsField


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (exit code 2)."""


_SCHEMA_DIR = resources.files("dcl") / "data" / "schemas"
_CONFIG_DIR = resources.files("dcl") / "data" / "configs"


def _registry():
    resources_ = []
    for entry in _SCHEMA_DIR.iterdir():
        if entry.name.endswith(".schema.json"):
            resources_.append((entry.name, Resource.from_contents(json.loads(entry.read_text()))))
    return Registry().with_resources(resources_)


def shipped_dataset():
    """Directory of the bundled synthetic 5-trial mocap set."""
    return str(resources.files("dcl") / "data" / "mocap_synthetic")


def schema(name):
    return json.loads((_SCHEMA_DIR / f"{name}.schema.json").read_text())


def default_config(name):
    """Shipped default config ``name`` (e.g. ``"pipeline"``)."""
    return json.loads((_CONFIG_DIR / f"{name}.json").read_text())


def default_config_path(name):
    return str(_CONFIG_DIR / f"{name}.json")


def validate(cfg, name):
    validator = jsonschema.Draft202012Validator(schema(name), registry=_registry())
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"invalid config field '{where}': {err.message}")
    return cfg


def load(path, name):
    """Read and validate a JSON config. Missing file -> ConfigError."""
    if path is None:
        cfg = default_config(name)
        base = None
    else:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
        base = os.path.dirname(os.path.abspath(path))
    validate(cfg, name)
    cfg["_base_dir"] = base
    return cfg


def set_path(cfg, dotted, value):
    """Override ``cfg[a][b]...`` from a flag; ``None`` leaves the key untouched."""
    if value is None:
        return
    keys = dotted.split(".")
    node = cfg
    for k in keys[:-1]:
        node = node.setdefault(k, {})
    node[keys[-1]] = value


def resolve_input(cfg, path):
    if path is None or os.path.isabs(path):
        return path
    base = cfg.get("_base_dir")
    if base and os.path.exists(os.path.join(base, path)):
        return os.path.join(base, path)
    return path


def strip_private(cfg):
    return {k: v for k, v in cfg.items() if not k.startswith("_")}


# --- builders --------------------------------------------------------------

def build_lattice(cfg):
    """(TpmsField, SectorDomain) from a lattice config (mm/deg -> m/rad)."""
    d = {"inner_radius_mm": 12.0, "outer_radius_mm": 40.0, "start_deg": 30.0, "end_deg": 90.0, "thickness_mm": 16.0}
    d.update(cfg.get("domain", {}))
    try:
        domain = SectorDomain(
            d["inner_radius_mm"] * 1e-3,
            d["outer_radius_mm"] * 1e-3,
            (math.radians(d["start_deg"]), math.radians(d["end_deg"])),
            d["thickness_mm"] * 1e-3,
        )
        field = TpmsField(cfg.get("kind", "Gyroid"), cfg.get("cell_size_mm", 8.0) * 1e-3,
                          cfg.get("level", 0.0), cfg.get("shell_halfwidth", 0.0))
    except ValueError as exc:
        raise ConfigError(f"invalid config field 'domain': {exc}") from None
    return field, domain


def build_robot(cfg):
    try:
        return RobotParams(**cfg.get("robot", {}))
    except ValueError as exc:
        raise ConfigError(f"invalid config field 'robot': {exc}") from None


def stiffness_regions(block):
    op = math.radians(block.get("operating_max_deg", C.OPERATING_MAX_DEG))
    safety = math.radians(block.get("safety_max_deg", C.DESIGN_LIMIT_DEG))
    if not op < safety:
        raise ConfigError("invalid config field 'stiffness.safety_max_deg': must exceed operating_max_deg")
    return op, safety


def stiffness_samples(cfg, seed):
    """Torque-angle samples named by the ``stiffness`` block (surrogate or CSV)."""
    block = cfg.get("stiffness", {})
    source = block.get("source", "surrogate")
    op, _ = stiffness_regions(block)
    if source == "csv":
        path = resolve_input(cfg, block.get("csv"))
        if not path or not os.path.exists(path):
            raise ConfigError(f"invalid config field 'stiffness.csv': file not found: {block.get('csv')}")
        return st.read_samples_csv(path)
    if source == "model":
        raise ConfigError("stiffness source 'model' carries no samples")
    s = block.get("surrogate", {})
    return st.generate_surrogate_fea(
        peak_torque=s.get("peak_torque_nm", C.PEAK_TORQUE_NM),
        operating_max=op,
        densification_onset=math.radians(s.get("densification_onset_deg", C.DESIGN_LIMIT_DEG)),
        n=s.get("n", 91),
        seed=seed,
        noise=s.get("noise", 0.02),
        linear_share=s.get("linear_share", 0.6),
    )


def build_stiffness(cfg, seed):
    """(StiffnessModel, samples or None) from the ``stiffness`` block."""
    block = cfg.get("stiffness", {})
    op, safety = stiffness_regions(block)
    if block.get("source") == "model":
        path = resolve_input(cfg, block.get("model"))
        if not path or not os.path.exists(path):
            raise ConfigError(f"invalid config field 'stiffness.model': file not found: {block.get('model')}")
        with open(path, encoding="utf-8") as fh:
            return st.StiffnessModel.from_json(json.load(fh)), None
    samples = stiffness_samples(cfg, seed)
    return st.fit_operating_region(samples, op, safety), samples


def build_scenario(cfg, model):
    sc = cfg.get("scenario", {})
    eng = sc.get("engagement_flexion_deg")
    try:
        return JumpScenario(
            sc.get("mode", "Baseline"),
            sc.get("squat_height_mm", C.H_BASE_MM) / 1000.0,
            model,
            None if eng is None else math.radians(eng),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid config field 'scenario': {exc}") from None
