"""Fixed-step closed-loop simulation of one agent orbiting a (moving) ellipse.

Per tick: targets advance, the regression frame is refreshed, ellipse axes
are chosen with stand-off inflation and turn-radius floors, the guidance law
produces a turn rate and the unicycle is integrated one step. Every tick is
recorded with its monitor values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .dynamics import CALM, AgentState, TargetModel, Wind, advance_targets, step_unicycle
from .geometry import EllipseSpec, Vec2, level_local, rotate_into, wrap_angle
from .guidance import GuidanceGains, OrbitDirection, guidance_command
from .regression import RegressionFrame, init_regression, update_regression

SQRT2 = math.sqrt(2.0)
DEFAULT_DT = 0.05

BASE_COLUMNS = (
    "t", "x_A", "y_A", "psi_A", "x_o", "y_o", "a", "b", "theta_E",
    "gamma", "psi_T", "psi_O", "psi_D", "omega_raw", "omega",
    "V", "V_tilde", "Gamma",
)  # fmt: skip


def trace_columns(n_targets: int) -> tuple[str, ...]:
    return BASE_COLUMNS + tuple(f"gamma_T{i + 1}" for i in range(n_targets))


@dataclass(frozen=True)
class AgentLimits:
    V_A_min: float
    V_A_max: float
    V_T_max: float
    omega_max: float
    d_s: float = 0.0

    def __post_init__(self):
        for name in ("V_A_min", "V_A_max", "V_T_max", "omega_max", "d_s"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.V_A_min > 0.0:
            raise ValueError(f"invariant 0 < V_A_min violated: V_A_min={self.V_A_min}")
        if self.V_A_max < self.V_A_min:
            raise ValueError(
                f"invariant V_A_min <= V_A_max violated: {self.V_A_min} > {self.V_A_max}"
            )
        if self.V_T_max < 0.0:
            raise ValueError(f"invariant V_T_max >= 0 violated: V_T_max={self.V_T_max}")
        if not self.V_T_max < self.V_A_min:
            raise ValueError(
                f"invariant V_T_max < V_A_min violated: V_T_max={self.V_T_max}, "
                f"V_A_min={self.V_A_min}"
            )
        if not self.omega_max > 0.0:
            raise ValueError(f"invariant omega_max > 0 violated: omega_max={self.omega_max}")
        if self.d_s < 0.0:
            raise ValueError(f"invariant d_s >= 0 violated: d_s={self.d_s}")

    @property
    def V_R_max(self) -> float:
        return self.V_A_max + self.V_T_max

    @property
    def turn_radius_floor(self) -> float:
        return self.V_R_max / self.omega_max


@dataclass(frozen=True)
class SimConfig:
    """Everything needed to reproduce one run.

    Exactly one of ``targets`` (moving convoy) and ``ellipse`` (fixed orbit,
    no targets) must be given. ``regression_every`` holds the regression
    frame for that many ticks between refits.
    """

    limits: AgentLimits
    gains: GuidanceGains
    direction: OrbitDirection
    agent: AgentState
    duration: float
    wind: Wind = CALM
    dt: float = DEFAULT_DT
    targets: Optional[TargetModel] = None
    ellipse: Optional[EllipseSpec] = None
    regression_every: int = 1
    name: str = ""
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "direction", OrbitDirection.parse(self.direction))
        if (self.targets is None) == (self.ellipse is None):
            raise ValueError("exactly one of targets or a fixed ellipse must be configured")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"invariant dt > 0 violated: dt={self.dt}")
        if not (math.isfinite(self.duration) and self.duration > 0.0):
            raise ValueError(f"invariant duration > 0 violated: duration={self.duration}")
        if not (isinstance(self.regression_every, int) and self.regression_every >= 1):
            raise ValueError(
                f"invariant regression_every >= 1 violated: {self.regression_every!r}"
            )
        lim = self.limits
        v = self.agent.V_A
        if not lim.V_A_min <= v <= lim.V_A_max:
            raise ValueError(
                f"invariant V_A_min <= V_A <= V_A_max violated: V_A={v}, "
                f"range [{lim.V_A_min}, {lim.V_A_max}]"
            )
        if not self.agent.pose.position.is_finite():
            raise ValueError("agent initial position must be finite")
        if self.targets is not None:
            vt = self.targets.max_speed()
            if vt > lim.V_T_max * (1.0 + 1e-12):
                raise ValueError(
                    f"invariant target speed <= V_T_max violated: max speed {vt} > {lim.V_T_max}"
                )

    @property
    def n_targets(self) -> int:
        return 0 if self.targets is None else self.targets.n_targets

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


class MonitorRecord(NamedTuple):
    gamma: float
    zeta: float
    V: float
    V_tilde: float
    Gamma: float
    gamma_T: tuple[float, ...]


@dataclass
class SimTrace:
    """Column-oriented record of a run; one row per tick."""

    config: SimConfig
    columns: dict[str, np.ndarray]
    aborted: Optional[dict] = None

    def __post_init__(self):
        names = trace_columns(self.config.n_targets)
        if tuple(self.columns) != names:
            raise ValueError(f"trace columns {tuple(self.columns)} do not match {names}")
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"inconsistent column lengths {sorted(lengths)}")

    def __len__(self) -> int:
        return len(self.columns["t"])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def n_targets(self) -> int:
        return self.config.n_targets

    def gamma_targets(self) -> np.ndarray:
        """Array of shape (ticks, N) with the per-target level values."""
        cols = [self.columns[f"gamma_T{i + 1}"] for i in range(self.n_targets)]
        if not cols:
            return np.empty((len(self), 0))
        return np.column_stack(cols)

    def ellipse_at(self, i: int) -> EllipseSpec:
        c = self.columns
        return EllipseSpec(
            Vec2(c["x_o"][i], c["y_o"][i]), c["a"][i], c["b"][i], c["theta_E"][i]
        )

    @classmethod
    def empty(cls, config: SimConfig) -> SimTrace:
        return cls(config, {n: np.empty(0) for n in trace_columns(config.n_targets)})


class SimulationAborted(RuntimeError):
    """Raised when a non-finite value shows up; carries the partial trace."""

    def __init__(self, message: str, trace: SimTrace, diagnostic: dict):
        super().__init__(message)
        self.trace = trace
        self.diagnostic = diagnostic


def select_axes(frame: RegressionFrame, limits: AgentLimits) -> tuple[float, float]:
    """Ellipse semi-axes around the inflated bounding rectangle.

    Each axis takes the least-area circumscribing value unless the
    turn-radius floor is larger, so b^2/a never drops below V_R_max/omega_max.
    A rectangle wider than long gives b > a; the major axis is then raised
    to b, which keeps the rectangle inside and the curvature bound intact.
    """
    floor = limits.turn_radius_floor
    l1 = frame.l1 + 2.0 * limits.d_s
    l2 = frame.l2 + 2.0 * limits.d_s
    a = max(l1 / SQRT2, floor)
    b = max(l2 / SQRT2, math.sqrt(a * floor))
    if b > a:
        a = b
    return a, b


def compute_monitors(
    agent: Vec2,
    psi_D: float,
    ellipse: EllipseSpec,
    targets: Iterable[Vec2] = (),
    reference: Optional[EllipseSpec] = None,
) -> MonitorRecord:
    """Convergence monitors for one tick.

    ``psi_D`` is the desired heading in the ellipse frame. ``V`` is measured
    against ``reference`` (the fixed orbit) when given, otherwise against the
    current ellipse, in which case it coincides with ``V_tilde``.
    """
    a, b, th = ellipse.a, ellipse.b, ellipse.theta_E
    cx, cy = ellipse.center
    x, y = rotate_into(agent[0] - cx, agent[1] - cy, th)
    gamma = level_local(x, y, a, b)
    zeta = gamma - 1.0
    v_tilde = zeta * zeta
    if reference is None:
        v = v_tilde
    else:
        rx, ry = rotate_into(agent[0] - reference.center.x, agent[1] - reference.center.y,
                             reference.theta_E)
        v = (level_local(rx, ry, reference.a, reference.b) - 1.0) ** 2
    big_gamma = abs(2.0 * x / (a * a) * math.cos(psi_D) + 2.0 * y / (b * b) * math.sin(psi_D))
    gamma_t = tuple(
        level_local(*rotate_into(p[0] - cx, p[1] - cy, th), a, b) for p in targets
    )
    return MonitorRecord(gamma, zeta, v, v_tilde, big_gamma, gamma_t)


def _finite(values: Sequence[float]) -> bool:
    return all(math.isfinite(v) for v in values)


def run_simulation(cfg: SimConfig) -> SimTrace:
    names = trace_columns(cfg.n_targets)
    rows: list[tuple[float, ...]] = []
    lim, gains, direction = cfg.limits, cfg.gains, cfg.direction
    agent = cfg.agent
    ellipse = cfg.ellipse
    reference = cfg.ellipse
    frame: Optional[RegressionFrame] = None
    n_steps = cfg.n_steps

    def finish(aborted: Optional[dict] = None) -> SimTrace:
        if rows:
            data = np.array(rows, dtype=np.float64)
            cols = {n: data[:, j].copy() for j, n in enumerate(names)}
        else:
            cols = {n: np.empty(0) for n in names}
        return SimTrace(cfg, cols, aborted)

    for k in range(n_steps + 1):
        t = k * cfg.dt
        positions: Sequence[Vec2] = ()
        if cfg.targets is not None:
            snapshot = advance_targets(cfg.targets, t)
            positions = snapshot.positions
            if frame is None:
                frame = init_regression(snapshot)
            elif k % cfg.regression_every == 0:
                frame = update_regression(frame.theta_E, snapshot)
            if frame is not None and (ellipse is None or k % cfg.regression_every == 0):
                a, b = select_axes(frame, lim)
                ellipse = EllipseSpec(frame.center, a, b, frame.theta_E)
        assert ellipse is not None

        th = ellipse.theta_E
        x_l, y_l = rotate_into(agent.x - ellipse.center.x, agent.y - ellipse.center.y, th)
        psi_E = wrap_angle(agent.psi - th)
        cmd = guidance_command(Vec2(x_l, y_l), psi_E, ellipse.a, ellipse.b, direction,
                               gains, lim.omega_max)
        mon = compute_monitors(agent.pose.position, cmd.psi_D, ellipse, positions, reference)

        row = (
            t, agent.x, agent.y, agent.psi,
            ellipse.center.x, ellipse.center.y, ellipse.a, ellipse.b, th,
            cmd.gamma, cmd.psi_T, cmd.psi_O, cmd.psi_D, cmd.omega_raw, cmd.omega,
            mon.V, mon.V_tilde, mon.Gamma,
        ) + mon.gamma_T  # fmt: skip
        rows.append(row)
        if not _finite(row):
            bad = [n for n, v in zip(names, row) if not math.isfinite(v)]
            diagnostic = {"tick": k, "t": t, "non_finite": bad}
            raise SimulationAborted(
                f"non-finite state at tick {k} (t={t}): {', '.join(bad)}",
                finish(diagnostic),
                diagnostic,
            )
        if k < n_steps:
            agent = step_unicycle(agent, cmd.omega, cfg.wind, cfg.dt)

    return finish()
