"""Scalar summaries of a trace: settling, tracking error, turn-rate peaks."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.signal import find_peaks

from .simulation import SimTrace

T_ALIGN = 30.0
SETTLE_BAND = 0.05
PEAK_HEIGHT = 0.15


def settle_time(trace: SimTrace, band: float = SETTLE_BAND) -> Optional[float]:
    """First time |gamma - 1| drops below ``band``, or None."""
    if len(trace) == 0:
        return None
    hits = np.flatnonzero(np.abs(trace["gamma"] - 1.0) < band)
    if hits.size == 0:
        return None
    return float(trace["t"][hits[0]])


def transient_end(trace: SimTrace, t_align: float = T_ALIGN) -> float:
    """End of the approach and heading-alignment transient.

    The transient lasts at least ``t_align`` seconds and until the agent
    first comes within the settle band. A run that never settles falls
    back to ``t_align``.
    """
    ts = settle_time(trace)
    return t_align if ts is None else max(t_align, ts)


def post_transient_mask(trace: SimTrace, t_align: float = T_ALIGN) -> np.ndarray:
    return trace["t"] > transient_end(trace, t_align)


def count_omega_peaks(omega: np.ndarray, height: float = PEAK_HEIGHT) -> int:
    """Number of local maxima of |omega| above ``height``."""
    if omega.size < 3:
        return 0
    peaks, _ = find_peaks(np.abs(omega), height=height)
    return int(peaks.size)


def agent_target_distances(trace: SimTrace) -> np.ndarray:
    """Array of shape (ticks, N) of agent-to-target distances.

    Target positions are not stored in the trace, so they are regenerated
    from the configured motion model at each recorded time.
    """
    model = trace.config.targets
    if model is None or len(trace) == 0:
        return np.empty((len(trace), 0))
    xa, ya = trace["x_A"], trace["y_A"]
    out = np.empty((len(trace), model.n_targets))
    for k, t in enumerate(trace["t"]):
        for i, p in enumerate(model.positions(float(t))):
            out[k, i] = math.hypot(xa[k] - p.x, ya[k] - p.y)
    return out


def _opt(value) -> Optional[float]:
    return None if value is None else float(value)


def summarize(trace: SimTrace, t_align: float = T_ALIGN) -> dict:
    """Deterministic summary of a trace; plain JSON-serializable types only."""
    summary: dict = {
        "name": trace.config.name,
        "ticks": len(trace),
        "dt": trace.config.dt,
        "aborted": trace.aborted is not None,
    }
    if len(trace) == 0:
        summary.update(status="empty", settled=False)
        return summary

    ts = settle_time(trace)
    t_end = transient_end(trace, t_align)
    post = trace["t"] > t_end
    err = np.abs(trace["gamma"] - 1.0)
    summary.update(
        settle_time=_opt(ts),
        transient_end=t_end,
        settled=ts is not None,
        post_transient_ticks=int(post.sum()),
        max_abs_omega=float(np.max(np.abs(trace["omega"]))),
        omega_peaks=count_omega_peaks(trace["omega"]),
    )
    summary["status"] = "settled" if ts is not None and post.any() else "did not settle"
    if post.any():
        summary.update(
            max_abs_omega_post=float(np.max(np.abs(trace["omega"][post]))),
            max_abs_omega_raw_post=float(np.max(np.abs(trace["omega_raw"][post]))),
            mean_abs_gamma_err_post=float(np.mean(err[post])),
            max_abs_gamma_err_post=float(np.max(err[post])),
        )
    else:
        summary.update(
            max_abs_omega_post=None,
            max_abs_omega_raw_post=None,
            mean_abs_gamma_err_post=None,
            max_abs_gamma_err_post=None,
        )
    if trace.n_targets:
        summary["max_gamma_T"] = float(np.max(trace.gamma_targets()))
        summary["min_agent_target_distance"] = float(np.min(agent_target_distances(trace)))
    else:
        summary["max_gamma_T"] = None
        summary["min_agent_target_distance"] = None
    return summary
