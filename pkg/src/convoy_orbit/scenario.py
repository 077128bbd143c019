"""Scenario files: YAML documents mapping one-to-one onto :class:`SimConfig`.

Every physical parameter must be given explicitly. Only ``dt`` (0.05 s),
``duration`` and ``regression_every`` (1) have defaults. Angles may be
written as plain numbers or as multiples of pi such as ``pi/4``,
``-pi/3`` or ``3*pi/20``.

Example::

    name: case1_stationary
    limits: {V_A_min: 10, V_A_max: 20, V_T_max: 0, omega_max: 0.3, d_s: 0}
    gains: {k_gamma: 0.5, k_psi: 1}
    direction: ccw
    agent: {x: 600, y: -200, psi: pi/4, V_A: 15}
    wind: {V_w: 0, psi_w: 0}
    ellipse: {center: [300, 200], a: 250, b: 150, theta_E: pi/4}
    duration: 600
"""

from __future__ import annotations

import contextlib
import math
import re
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import yaml

from .dynamics import AgentState, LinearConvoy, LissajousConvoy, Pose2D, WaypointConvoy, Wind
from .geometry import EllipseSpec, Vec2
from .guidance import GuidanceGains, OrbitDirection
from .simulation import DEFAULT_DT, AgentLimits, SimConfig

DEFAULT_DURATION = 600.0

BUNDLED = ("case1_stationary", "case2_stationary", "sim1_lissajous", "sim2_lissajous_wind")

_PI_EXPR = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?:(?P<mul>\d+(?:\.\d*)?|\.\d+)\s*\*?\s*)?pi"
    r"\s*(?:/\s*(?P<div>\d+(?:\.\d*)?|\.\d+))?\s*$"
)


class ScenarioError(ValueError):
    """Invalid scenario; ``key`` and ``line`` point at the offending entry."""

    def __init__(self, message: str, key: str = "", line: Optional[int] = None, source: str = ""):
        self.key = key
        self.line = line
        self.source = source
        where = source or "<scenario>"
        if line is not None:
            where = f"{where}:{line}"
        prefix = f"{where}: " + (f"{key}: " if key else "")
        super().__init__(prefix + message)


# schema: key -> kind; a trailing "?" marks an optional key
_KINDS = {
    "limits": {"V_A_min": "num", "V_A_max": "num", "V_T_max": "num", "omega_max": "num", "d_s": "num"},
    "gains": {"k_gamma": "num", "k_psi": "num"},
    "agent": {"x": "num", "y": "num", "psi": "num", "V_A": "num"},
    "wind": {"V_w": "num", "psi_w": "num"},
    "ellipse": {"center": "vec2", "a": "num", "b": "num", "theta_E": "num"},
}
_TARGET_KINDS = {
    "lissajous": {"A": "num", "B": "num", "phi_dot": "num", "phi0": "nums"},
    "linear": {"origins": "vec2s", "headings": "nums", "speeds": "nums"},
    "waypoints": {"waypoints": "vec2s", "speeds": "nums", "starts": "nums"},
}
_TOP = {
    "name": "str",
    "description": "str?",
    "limits": "map",
    "gains": "map",
    "direction": "str",
    "agent": "map",
    "wind": "map",
    "ellipse": "map?",
    "targets": "map?",
    "dt": "num?",
    "duration": "num?",
    "regression_every": "int?",
}


def parse_number(text: str) -> float:
    """Parse a float or a pi expression like ``-3*pi/20``."""
    m = _PI_EXPR.match(text)
    if m:
        value = math.pi
        if m["mul"]:
            value *= float(m["mul"])
        if m["div"]:
            value /= float(m["div"])
        return -value if m["sign"] == "-" else value
    return float(text)


class _Reader:
    def __init__(self, source: str):
        self.source = source
        self.lines: dict[str, int] = {}

    def fail(self, message: str, key: str, node) -> ScenarioError:
        line = node.start_mark.line + 1 if node is not None else None
        return ScenarioError(message, key, line, self.source)

    def mapping(self, node, key: str, schema: dict[str, str]) -> dict[str, Any]:
        if not isinstance(node, yaml.MappingNode):
            raise self.fail("expected a mapping", key, node)
        out: dict[str, Any] = {}
        for k_node, v_node in node.value:
            name = k_node.value
            path = f"{key}.{name}" if key else name
            if name not in schema:
                raise self.fail(f"unknown key (allowed: {', '.join(schema)})", path, k_node)
            if name in out:
                raise self.fail("duplicate key", path, k_node)
            self.lines[path] = k_node.start_mark.line + 1
            out[name] = self.value(v_node, path, schema[name].rstrip("?"))
        for name, kind in schema.items():
            if not kind.endswith("?") and name not in out:
                raise self.fail("missing required key", f"{key}.{name}" if key else name, node)
        return out

    def value(self, node, key: str, kind: str) -> Any:
        if kind == "map":
            return node
        if kind == "str":
            if not isinstance(node, yaml.ScalarNode):
                raise self.fail("expected a string", key, node)
            return node.value
        if kind == "num":
            return self.number(node, key)
        if kind == "int":
            if not isinstance(node, yaml.ScalarNode) or node.tag != "tag:yaml.org,2002:int":
                raise self.fail("expected an integer", key, node)
            return int(node.value)
        if kind == "nums":
            return [self.number(n, key) for n in self.sequence(node, key)]
        if kind == "vec2":
            items = self.sequence(node, key)
            if len(items) != 2:
                raise self.fail("expected a pair [x, y]", key, node)
            return [self.number(n, key) for n in items]
        if kind == "vec2s":
            return [self.value(n, key, "vec2") for n in self.sequence(node, key)]
        raise AssertionError(kind)

    def sequence(self, node, key: str) -> list:
        if not isinstance(node, yaml.SequenceNode):
            raise self.fail("expected a list", key, node)
        return node.value

    def number(self, node, key: str) -> float:
        if not isinstance(node, yaml.ScalarNode) or node.tag == "tag:yaml.org,2002:bool":
            raise self.fail("expected a number", key, node)
        try:
            value = parse_number(node.value)
        except ValueError:
            raise self.fail(f"expected a number or pi expression, got {node.value!r}", key, node) from None
        if not math.isfinite(value):
            raise self.fail("expected a finite number", key, node)
        return value


def load_document(text: str, source: str = "") -> tuple[dict, dict[str, int]]:
    """Validate scenario text against the schema; return plain data and key lines."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ScenarioError(f"malformed YAML: {getattr(exc, 'problem', exc)}", "", line, source) from None
    if root is None:
        raise ScenarioError("empty scenario", "", None, source)
    r = _Reader(source)
    doc = r.mapping(root, "", _TOP)
    for section, schema in _KINDS.items():
        if section in doc:
            doc[section] = r.mapping(doc[section], section, schema)
    if "targets" in doc:
        node = doc["targets"]
        if not isinstance(node, yaml.MappingNode):
            raise r.fail("expected a mapping", "targets", node)
        model = next((v.value for k, v in node.value if k.value == "model"), None)
        if model not in _TARGET_KINDS:
            raise r.fail(f"targets.model must be one of {', '.join(_TARGET_KINDS)}", "targets.model", node)
        doc["targets"] = r.mapping(node, "targets", {"model": "str", **_TARGET_KINDS[model]})
    return doc, r.lines


@contextlib.contextmanager
def _section(key: str, lines: dict[str, int], source: str):
    try:
        yield
    except ScenarioError:
        raise
    except (ValueError, TypeError) as exc:
        raise ScenarioError(str(exc), key, lines.get(key), source) from None


def _targets_from_dict(d: dict):
    model = d["model"]
    if model == "lissajous":
        return LissajousConvoy(d["A"], d["B"], d["phi_dot"], tuple(d["phi0"]))
    if model == "linear":
        return LinearConvoy(
            tuple(Vec2(*o) for o in d["origins"]), tuple(d["headings"]), tuple(d["speeds"])
        )
    if model == "waypoints":
        return WaypointConvoy(
            tuple(Vec2(*w) for w in d["waypoints"]), tuple(d["speeds"]), tuple(d["starts"])
        )
    raise ValueError(f"unknown target model {model!r}")


def _default_duration(targets) -> float:
    if isinstance(targets, LissajousConvoy) and targets.phi_dot != 0.0:
        return 2.0 * math.pi / abs(targets.phi_dot)
    return DEFAULT_DURATION


def config_from_dict(doc: dict, lines: Optional[dict[str, int]] = None, source: str = "") -> SimConfig:
    """Build a SimConfig from validated plain data, naming violated invariants."""
    lines = lines or {}
    with _section("limits", lines, source):
        limits = AgentLimits(**{k: float(v) for k, v in doc["limits"].items()})
    with _section("gains", lines, source):
        gains = GuidanceGains(float(doc["gains"]["k_gamma"]), float(doc["gains"]["k_psi"]))
    with _section("direction", lines, source):
        direction = OrbitDirection.parse(doc["direction"])
    ag = doc["agent"]
    with _section("agent", lines, source):
        agent = AgentState(Pose2D(Vec2(ag["x"], ag["y"]), float(ag["psi"])), float(ag["V_A"]))
    with _section("wind", lines, source):
        wind = Wind(float(doc["wind"]["V_w"]), float(doc["wind"]["psi_w"]))
    ellipse = targets = None
    if doc.get("ellipse") is not None:
        e = doc["ellipse"]
        with _section("ellipse", lines, source):
            ellipse = EllipseSpec(Vec2(*e["center"]), float(e["a"]), float(e["b"]), float(e["theta_E"]))
    if doc.get("targets") is not None:
        with _section("targets", lines, source):
            targets = _targets_from_dict(doc["targets"])
    duration = doc.get("duration")
    with _section("duration", lines, source):
        return SimConfig(
            limits=limits,
            gains=gains,
            direction=direction,
            agent=agent,
            duration=_default_duration(targets) if duration is None else float(duration),
            wind=wind,
            dt=float(doc.get("dt", DEFAULT_DT)),
            targets=targets,
            ellipse=ellipse,
            regression_every=int(doc.get("regression_every", 1)),
            name=str(doc.get("name", "")),
            description=str(doc.get("description", "")),
        )


def config_to_dict(cfg: SimConfig) -> dict:
    """Plain-data form of a config; inverse of :func:`config_from_dict`."""
    lim = cfg.limits
    doc: dict[str, Any] = {
        "name": cfg.name,
        "description": cfg.description,
        "limits": {
            "V_A_min": float(lim.V_A_min),
            "V_A_max": float(lim.V_A_max),
            "V_T_max": float(lim.V_T_max),
            "omega_max": float(lim.omega_max),
            "d_s": float(lim.d_s),
        },
        "gains": {"k_gamma": float(cfg.gains.k_gamma), "k_psi": float(cfg.gains.k_psi)},
        "direction": cfg.direction.value,
        "agent": {
            "x": cfg.agent.x,
            "y": cfg.agent.y,
            "psi": cfg.agent.psi,
            "V_A": float(cfg.agent.V_A),
        },
        "wind": {"V_w": float(cfg.wind.V_w), "psi_w": float(cfg.wind.psi_w)},
    }
    if cfg.ellipse is not None:
        e = cfg.ellipse
        doc["ellipse"] = {"center": [e.center.x, e.center.y], "a": e.a, "b": e.b, "theta_E": e.theta_E}
    t = cfg.targets
    if isinstance(t, LissajousConvoy):
        doc["targets"] = {
            "model": "lissajous",
            "A": float(t.A),
            "B": float(t.B),
            "phi_dot": float(t.phi_dot),
            "phi0": list(t.phi0),
        }
    elif isinstance(t, LinearConvoy):
        doc["targets"] = {
            "model": "linear",
            "origins": [[o.x, o.y] for o in t.origins],
            "headings": list(t.headings),
            "speeds": list(t.speeds),
        }
    elif isinstance(t, WaypointConvoy):
        doc["targets"] = {
            "model": "waypoints",
            "waypoints": [[w.x, w.y] for w in t.waypoints],
            "speeds": list(t.speeds),
            "starts": list(t.starts),
        }
    doc["dt"] = float(cfg.dt)
    doc["duration"] = float(cfg.duration)
    doc["regression_every"] = cfg.regression_every
    return doc


def parse_scenario_text(text: str, source: str = "") -> SimConfig:
    doc, lines = load_document(text, source)
    return config_from_dict(doc, lines, source)


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("convoy_orbit") / "scenarios" / f"{name}.yaml"))


def resolve_scenario(ref: Union[str, Path]) -> Path:
    """Accept a file path or the name of a bundled scenario."""
    path = Path(ref)
    if path.exists():
        return path
    if str(ref) in BUNDLED:
        return bundled_path(str(ref))
    raise FileNotFoundError(f"no scenario file or bundled scenario named {str(ref)!r}")


def parse_scenario(path: Union[str, Path]) -> SimConfig:
    path = resolve_scenario(path)
    return parse_scenario_text(path.read_text(encoding="utf-8"), str(path))


def dump_scenario(cfg: SimConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False, default_flow_style=None)


def write_scenario(cfg: SimConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_scenario(cfg), encoding="utf-8")
