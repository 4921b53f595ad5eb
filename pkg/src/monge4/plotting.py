"""Static stratum maps for scan results."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .scanner import ScanResult  # noqa: E402

STRATUM_ORDER = [
    "Pi_E",
    "Pi_S",
    "Pi_B",
    "Pi_2B",
    "Pi_H",
    "Pi_P",
    "Pi_I_plus",
    "Pi_I_minus",
    "HigherCodim",
    "Error",
]

COLORS = [
    "#4c72b0",
    "#dd8452",
    "#c44e52",
    "#8172b3",
    "#55a868",
    "#937860",
    "#da8bc3",
    "#8c8c8c",
    "#ccb974",
    "#000000",
]


def stratum_grid(result: ScanResult) -> np.ndarray:
    index = {name: k for k, name in enumerate(STRATUM_ORDER)}
    grid = np.zeros((result.grid.nv, result.grid.nu), dtype=int)
    for r in result.records:
        grid[r.j, r.i] = index.get(r.stratum, len(STRATUM_ORDER) - 1)
    return grid


def plot_stratum_map(result: ScanResult, path, title: str | None = None, dpi: int = 150) -> str:
    """Write a PNG of the stratum labels with S/B crossing edges overlaid."""
    grid = stratum_grid(result)
    us = [float(r.u) for r in result.records if r.j == 0]
    vs = [float(r.v) for r in result.records if r.i == 0]
    du = (us[1] - us[0]) / 2 if len(us) > 1 else 0.5
    dv = (vs[1] - vs[0]) / 2 if len(vs) > 1 else 0.5
    extent = (us[0] - du, us[-1] + du, vs[0] - dv, vs[-1] + dv)

    fig, ax = plt.subplots(figsize=(6, 5))
    cmap = ListedColormap(COLORS)
    ax.imshow(grid, origin="lower", extent=extent, cmap=cmap, vmin=0, vmax=len(COLORS) - 1,
              interpolation="nearest", aspect="auto")

    cu, cv = [], []
    for c in result.crossings():
        a, b = result.at(*c.a), result.at(*c.b)
        cu.append((float(a.u) + float(b.u)) / 2)
        cv.append((float(a.v) + float(b.v)) / 2)
    if cu:
        ax.plot(cu, cv, ".", color="k", ms=2, label="S/B boundary")

    present = sorted(set(grid.ravel().tolist()))
    handles = [Patch(color=COLORS[k], label=STRATUM_ORDER[k]) for k in present]
    if cu:
        handles.append(plt.Line2D([], [], ls="", marker=".", color="k", label="S/B boundary"))
    ax.legend(handles=handles, loc="upper right", fontsize=8, framealpha=0.9)
    ax.set_xlabel("u")
    ax.set_ylabel("v")
    ax.set_title(title or f"strata of {result.surface.name or 'surface'} ({result.grid.nu}x{result.grid.nv})")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return str(path)
