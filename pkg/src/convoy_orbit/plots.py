"""Static SVG figures for a trace. Presentation only."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import post_transient_mask, settle_time  # noqa: E402
from .simulation import SimTrace  # noqa: E402

MAX_POINTS = 4000

plt.rcParams["svg.hashsalt"] = "convoy_orbit"


def _stride(n: int) -> int:
    return max(1, math.ceil(n / MAX_POINTS))


def _ellipse_xy(xo, yo, a, b, th, n=200):
    s = np.linspace(0.0, 2.0 * np.pi, n)
    x, y = a * np.cos(s), b * np.sin(s)
    c, si = np.cos(th), np.sin(th)
    return xo + c * x - si * y, yo + si * x + c * y


def _warn(fig, text: Optional[str]):
    if text:
        fig.text(0.5, 0.01, text, ha="center", color="tab:red", fontsize=9)


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def snapshot_indices(trace: SimTrace, times: Optional[Sequence[float]] = None) -> list[int]:
    t = trace["t"]
    if times is None:
        times = np.linspace(t[0], t[-1], 4)
    return sorted({int(np.argmin(np.abs(t - tq))) for tq in times})


def render_plots(
    trace: SimTrace,
    out_dir: Union[str, Path],
    snapshot_times: Optional[Sequence[float]] = None,
) -> list[Path]:
    """Write trajectory, Lyapunov/turn-rate, tracking and target-level figures."""
    if len(trace) == 0:
        raise ValueError("cannot plot an empty trace")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = trace.config
    t = trace["t"]
    k = _stride(len(t))
    omega_max = cfg.limits.omega_max
    warning = None
    if settle_time(trace) is None or not post_transient_mask(trace).any():
        warning = "warning: agent did not settle onto the ellipse within the run"
    files = []

    fig, ax = plt.subplots(figsize=(7, 6))
    ax.plot(trace["x_A"][::k], trace["y_A"][::k], lw=0.8, color="tab:blue", label="agent")
    for i in snapshot_indices(trace, snapshot_times):
        ex, ey = _ellipse_xy(trace["x_o"][i], trace["y_o"][i], trace["a"][i], trace["b"][i],
                             trace["theta_E"][i])
        ax.plot(ex, ey, lw=1.0, ls="--", label=f"ellipse t={t[i]:.0f} s")
        if cfg.targets is not None:
            pts = np.array(cfg.targets.positions(float(t[i])))
            ax.plot(pts[:, 0], pts[:, 1], "o", ms=3, color="tab:red")
    ax.plot(trace["x_A"][0], trace["y_A"][0], "k^", ms=6, label="start")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(fontsize=7, loc="best")
    ax.set_title(cfg.name or "trajectory")
    _warn(fig, warning)
    files.append(_save(fig, out / "trajectory.svg"))

    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    ax1.plot(t[::k], trace["V"][::k], lw=0.8)
    ax1.set_ylabel("V")
    ax1.set_yscale("symlog", linthresh=1e-4)
    ax2.plot(t[::k], trace["omega"][::k], lw=0.8)
    for s in (-1, 1):
        ax2.axhline(s * omega_max, color="tab:red", lw=0.8, ls=":")
    ax2.set_ylabel("omega [rad/s]")
    ax2.set_xlabel("t [s]")
    _warn(fig, warning)
    files.append(_save(fig, out / "lyapunov_omega.svg"))

    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(7, 6))
    axes[0].plot(t[::k], trace["gamma"][::k], lw=0.8)
    axes[0].axhline(1.0, color="k", lw=0.5)
    axes[0].set_ylabel("gamma")
    axes[1].plot(t[::k], trace["omega"][::k], lw=0.8)
    axes[1].set_ylabel("omega [rad/s]")
    axes[2].plot(t[::k], np.full(len(t[::k]), cfg.agent.V_A), lw=0.8)
    axes[2].set_ylabel("V_A [m/s]")
    axes[2].set_xlabel("t [s]")
    _warn(fig, warning)
    files.append(_save(fig, out / "gamma_omega_speed.svg"))

    fig, ax = plt.subplots(figsize=(7, 4))
    if trace.n_targets:
        g = trace.gamma_targets()
        for i in range(trace.n_targets):
            ax.plot(t[::k], g[::k, i], lw=0.8, label=f"target {i + 1}")
        ax.axhline(1.0, color="k", lw=0.5)
        ax.legend(fontsize=7)
    else:
        ax.text(0.5, 0.5, "no targets in this scenario", ha="center", transform=ax.transAxes)
    ax.set_ylabel("gamma_Ti")
    ax.set_xlabel("t [s]")
    _warn(fig, warning)
    files.append(_save(fig, out / "gamma_targets.svg"))
    return files
