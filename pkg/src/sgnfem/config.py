"""TOML run configuration: strict parsing, defaults, round-trip emission.

Unknown keys are rejected with the offending name so sweep typos fail
fast. Flags given on the command line override file values.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import BadInput

VALID_FAMILIES = ("P1", "P2", "P3", "S3")
VALID_DT_RULES = ("dx8", "dx2", "fixed")


@dataclass
class CustomScenarioConfig:
    """Inline scenario: solitary wave over a preset or file bottom."""

    domain: list = field(default_factory=lambda: [-100.0, 0.0])
    g: float = 1.0
    bathymetry: str = "flat"
    depth: float = 1.0
    bathymetry_file: str = ""
    smoothing_radius: float = 0.0
    amplitude: float = 0.2
    x0: float = -50.0
    b0: float = 1.0
    gauges: list = field(default_factory=list)
    t_end: float = 60.0


@dataclass
class RunSettings:
    scenario: str = "energy_conservation"
    amplitude: float | None = None
    family_h: str = ""
    family_u: str = ""
    dx: float | None = None
    dt: float | None = None
    t_end: float | None = None
    gauges: list | None = None
    gauge_period: float = 0.1
    lumping: bool = False
    standard_galerkin: bool = False
    record_energy: bool = True
    energy_period: float = 0.5
    verify_rkf: bool = False
    bottom_coupling: str = "strong"
    depth_floor: float = 1e-8
    out_dir: str = ""
    custom: CustomScenarioConfig | None = None


@dataclass
class ConvergeSettings:
    family_h: str = "P1"
    family_u: str = "P1"
    n_values: list = field(default_factory=lambda: [80, 160, 320, 640])
    norms: list = field(default_factory=lambda: ["L2", "H1", "Linf"])
    dt_rule: str = "dx8"
    dt: float | None = None
    threads: int = 1
    out_dir: str = ""


@dataclass
class BenchSettings:
    name: str = "runup-sweep"
    amplitudes: list = field(default_factory=list)
    families: list = field(default_factory=lambda: ["P1", "S3"])
    collision_check: bool = False
    threads: int = 1
    out_dir: str = ""


@dataclass
class Config:
    run: RunSettings | None = None
    converge: ConvergeSettings | None = None
    bench: BenchSettings | None = None


_SECTION_TYPES = {"run": RunSettings, "converge": ConvergeSettings, "bench": BenchSettings}


def _build(cls, data: dict, where: str):
    allowed = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in allowed:
            raise BadInput(f"unknown config key {key!r} in [{where}]")
        if key == "custom" and isinstance(value, dict):
            value = _build(CustomScenarioConfig, value, f"{where}.custom")
        kwargs[key] = value
    try:
        obj = cls(**kwargs)
    except TypeError as exc:
        raise BadInput(f"bad [{where}] section: {exc}") from None
    return obj


def _validate(cfg: Config) -> Config:
    if cfg.run is not None:
        for fam in (cfg.run.family_h, cfg.run.family_u):
            if fam and fam not in VALID_FAMILIES:
                raise BadInput(f"unknown element family {fam!r}; pick from {VALID_FAMILIES}")
        if cfg.run.bottom_coupling not in ("strong", "half"):
            raise BadInput(f"bottom_coupling must be 'strong' or 'half', not {cfg.run.bottom_coupling!r}")
    if cfg.converge is not None:
        for fam in (cfg.converge.family_h, cfg.converge.family_u):
            if fam not in VALID_FAMILIES:
                raise BadInput(f"unknown element family {fam!r}; pick from {VALID_FAMILIES}")
        if cfg.converge.dt_rule not in VALID_DT_RULES:
            raise BadInput(f"dt_rule must be one of {VALID_DT_RULES}, not {cfg.converge.dt_rule!r}")
        if not cfg.converge.n_values:
            raise BadInput("converge needs a nonempty n_values list")
    return cfg


def parse_config(text: str) -> Config:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise BadInput(f"config is not valid TOML: {exc}") from None
    cfg = Config()
    for key, value in raw.items():
        if key not in _SECTION_TYPES:
            raise BadInput(f"unknown config section [{key}]")
        if not isinstance(value, dict):
            raise BadInput(f"[{key}] must be a section, not a bare value")
        setattr(cfg, key, _build(_SECTION_TYPES[key], value, key))
    return _validate(cfg)


def load_config(path) -> Config:
    try:
        with open(path, "rb") as f:
            text = f.read().decode("utf-8")
    except OSError as exc:
        raise BadInput(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


# -- emission ----------------------------------------------------------------


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise BadInput(f"cannot serialize config value {v!r}")


def _emit_section(name: str, obj) -> list[str]:
    lines = [f"[{name}]"]
    sub = []
    for f in fields(obj):
        v = getattr(obj, f.name)
        if v is None:
            continue
        if f.name == "custom":
            sub.extend(_emit_section(f"{name}.custom", v))
            continue
        lines.append(f"{f.name} = {_toml_value(v)}")
    lines.append("")
    return lines + sub


def emit_config(cfg: Config) -> str:
    lines: list[str] = []
    for name in ("run", "converge", "bench"):
        obj = getattr(cfg, name)
        if obj is not None:
            lines.extend(_emit_section(name, obj))
    return "\n".join(lines)
