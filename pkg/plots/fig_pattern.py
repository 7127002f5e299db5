"""Beam-pattern figures: best-gain-versus-angle and normalized patterns."""

from __future__ import annotations

import numpy as np

from csvio import pattern_series


def render_fig4(inputs: list[dict], ax, style: dict) -> None:
    """Best achievable pattern versus steering angle, closed form vs oracle."""
    for item in inputs:
        data = pattern_series(item["path"], ["g_closed_form", "g_oracle"])
        theta = data["theta_deg"]
        label = item.get("label") or ""
        ax.plot(theta, 10 * np.log10(data["g_oracle"]), linestyle="--",
                label=f"{label} numerical".strip())
        ax.plot(theta, 10 * np.log10(data["g_closed_form"]),
                label=f"{label} closed form".strip())
    ax.set_xlabel("steering angle (degrees)")
    ax.set_ylabel("best beam pattern (dB)")
    ax.legend()
    ax.grid(True, alpha=0.4)


def render_fig5(inputs: list[dict], ax, style: dict) -> None:
    """Normalized pattern of a fixed load configuration, polar axes."""
    for item in inputs:
        data = pattern_series(item["path"], ["pattern_db"])
        theta = np.deg2rad(data["theta_deg"])
        floor = float(style.get("floor_db", -40.0))
        values = np.maximum(data["pattern_db"], floor) - floor
        ax.plot(theta, values, label=item.get("label"))
    floor = float(style.get("floor_db", -40.0))
    ticks = np.arange(0.0, -floor + 1e-9, 10.0)
    ax.set_rgrids(ticks, labels=[f"{v + floor:.0f}" for v in ticks])
    ax.set_title("normalized pattern (dB), angle in degrees")
    if any(item.get("label") for item in inputs):
        ax.legend(loc="lower left")
