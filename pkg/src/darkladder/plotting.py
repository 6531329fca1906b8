"""PNG figures for :class:`~darkladder.sweep.SweepResult` tables (Agg backend, no display)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

LABELS = {
    "delta12": r"$\Delta_{12}/\kappa$",
    "delta23": r"$\Delta_{23}/\kappa$",
    "omega12": r"$\Omega_{12}/\kappa$",
    "omega23": r"$\Omega_{23}/\kappa$",
    "g": r"$g/\kappa$",
    "n_photon": r"$\langle a^\dagger a\rangle$",
    "p33": r"$\langle\sigma_{33}\rangle$",
    "g2_zero": r"$g^{(2)}(0)$",
    "ratio": r"$\langle a^\dagger a\rangle/\langle\sigma_{33}\rangle$",
    "concurrence": "concurrence",
    "theta_rot": r"$\theta_{\rm rot}$",
    "t": r"$\kappa t$",
}
_LOG_QUANTITIES = {"n_photon", "p33", "ratio", "bright_population"}
_LINE_SERIES_MAX = 6

STYLE = {
    "figure.figsize": (5.0, 3.6),
    "figure.dpi": 120,
    "axes.labelsize": 10,
    "font.size": 9,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "savefig.bbox": "tight",
}


def _label(name: str) -> str:
    return LABELS.get(name, name.replace("_", " "))


def _value_columns(result) -> list[str]:
    skip = set(result.axes) | {"n_max", "error", "t"}
    return [h for h in result.header if h not in skip]


def _save(fig, path: Path) -> Path:
    fig.savefig(path)
    plt.close(fig)
    return path


def _heatmap(result, name: str, path: Path) -> Path:
    xname, yname = result.axes
    x = np.unique(result.column(xname))
    y = np.unique(result.column(yname))
    z = result.column(name).reshape(len(x), len(y)).T
    fig, ax = plt.subplots()
    norm = None
    positive = z[np.isfinite(z) & (z > 0)]
    if name in _LOG_QUANTITIES and positive.size:
        norm = LogNorm(vmin=positive.min(), vmax=positive.max())
    mesh = ax.pcolormesh(x, y, np.ma.masked_invalid(z), shading="nearest", norm=norm, cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=_label(name))
    ax.set_xlabel(_label(xname))
    ax.set_ylabel(_label(yname))
    return _save(fig, path)


def _lines(result, name: str, path: Path) -> Path:
    """One curve per value of the leading axis when the sweep is 2D with a short first axis."""
    fig, ax = plt.subplots()
    if len(result.axes) == 1:
        groups = [(None, np.ones(len(result.rows), dtype=bool))]
        xname = result.axes[0]
    else:
        lead, xname = result.axes
        lead_col = result.column(lead)
        groups = [(v, lead_col == v) for v in np.unique(lead_col)]
    x_all = result.column(xname)
    y_all = result.column(name)
    for value, mask in groups:
        label = None if value is None else f"{_label(result.axes[0])} = {value:g}"
        ax.plot(x_all[mask], y_all[mask], label=label)
    if np.all(x_all > 0) and x_all.max() / x_all.min() > 50:
        ax.set_xscale("log")
    if name in _LOG_QUANTITIES and np.nanmin(y_all) > 0:
        ax.set_yscale("log")
    ax.set_xlabel(_label(xname))
    ax.set_ylabel(_label(name))
    if len(groups) > 1:
        ax.legend()
    return _save(fig, path)


def plot_sweep(result, stem: str | Path) -> list[Path]:
    stem = Path(stem)
    written = []
    with plt.rc_context(STYLE):
        for name in _value_columns(result):
            if np.all(np.isnan(result.column(name))):
                continue
            path = stem.with_name(f"{stem.name}_{name}.png")
            lead = len(np.unique(result.column(result.axes[0])))
            if len(result.axes) == 2 and lead > _LINE_SERIES_MAX:
                written.append(_heatmap(result, name, path))
            else:
                written.append(_lines(result, name, path))
    return written


def plot_series(result, stem: str | Path, x: str, groups: dict[str, list[str]]) -> list[Path]:
    """One figure per group, each overlaying the listed columns against ``x``."""
    stem = Path(stem)
    xs = result.column(x)
    written = []
    with plt.rc_context(STYLE):
        for tag, cols in groups.items():
            cols = [c for c in cols if c in result.header]
            if not cols:
                continue
            fig, ax = plt.subplots()
            for c in cols:
                ax.plot(xs, result.column(c), label=_label(c))
            ax.set_xlabel(_label(x))
            ax.legend()
            written.append(_save(fig, stem.with_name(f"{stem.name}_{tag}.png")))
    return written


def plot_result(result, stem: str | Path) -> list[Path]:
    """Dispatch on ``result.kind`` and write PNGs named ``<stem>_<panel>.png``."""
    if result.kind == "sweep":
        return plot_sweep(result, stem)
    if result.kind == "timeevo":
        dark = [h for h in result.header if h.startswith("dark_p")]
        groups = {"photons": ["n_photon", "p33"], "dark": dark}
        if "fidelity_cat" in result.header:
            groups["fidelity"] = ["fidelity_cat"]
        return plot_series(result, stem, "t", groups)
    if result.kind == "darkstates":
        return plot_series(result, stem, "n", {
            "coefficients": ["q", "r"],
            "rates": ["decay_rate"],
            "couplings": ["ladder_coupling", "ladder_coupling_limit"],
        })
    if result.kind == "catscan":
        return plot_series(result, stem, "theta_rot", {
            "fidelity": ["fidelity_effective", "fidelity_model"],
            "detection": ["p_detect_1", "p_detect_2"],
            "amplitudes": ["alpha_plus_re", "alpha_plus_im", "alpha_minus_re", "alpha_minus_im"],
        })
    raise ValueError(f"no plot recipe for result kind {result.kind!r}")
