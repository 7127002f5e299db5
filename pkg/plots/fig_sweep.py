"""Efficiency sweep figures: SE/EE versus power, element counts, spacing."""

from __future__ import annotations

from csvio import sweep_series

ARCH_LABELS = {
    "hrp-upa": "HRP-UPA (proposed)",
    "fd-ula": "FD-ULA",
    "fd-upa": "FD-UPA",
    "hps-upa": "HPS-UPA",
    "random-baseline": "random-search baseline",
}

AXIS_LABELS = {
    "pmax_dbm": "radiated power budget (dBm)",
    "n_parasitic": "parasitic elements per active antenna",
    "n_active": "active antennas",
    "dx_over_lambda": "parasitic spacing (wavelengths)",
}


def _render_sweep(inputs: list[dict], ax, style: dict, value_column: str,
                  ylabel: str, xlabel: str) -> None:
    labels = dict(ARCH_LABELS)
    labels.update(style.get("legend", {}))
    for item in inputs:
        series = sweep_series(item["path"], value_column)
        prefix = item.get("label")
        for arch in sorted(series):
            xs, ys = series[arch]
            name = labels.get(arch, arch)
            if prefix:
                name = f"{prefix} {name}"
            ax.plot(xs, ys, marker="o", markersize=3, label=name)
    if style.get("logy"):
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    ax.grid(True, alpha=0.4)


def render_fig7(inputs, ax, style):
    _render_sweep(inputs, ax, style, "mean_se_bps_hz",
                  "spectral efficiency (bps/Hz)", AXIS_LABELS["pmax_dbm"])


def render_fig8(inputs, ax, style):
    _render_sweep(inputs, ax, style, "mean_ee_bps_hz_w",
                  "energy efficiency (bps/Hz/W)", AXIS_LABELS["pmax_dbm"])


def render_fig9(inputs, ax, style):
    _render_sweep(inputs, ax, style, "mean_se_bps_hz",
                  "spectral efficiency (bps/Hz)", AXIS_LABELS["n_parasitic"])


def render_fig10(inputs, ax, style):
    _render_sweep(inputs, ax, style, "mean_se_bps_hz",
                  "spectral efficiency (bps/Hz)", AXIS_LABELS["n_active"])


def render_fig11(inputs, ax, style):
    _render_sweep(inputs, ax, style, "mean_se_bps_hz",
                  "spectral efficiency (bps/Hz)",
                  AXIS_LABELS["dx_over_lambda"])
