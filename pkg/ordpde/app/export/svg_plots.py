"""Static SVG artifacts: heat map of the representative u_N with the skeleton overlaid, and the decay plot."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ordpde.app.core.tiled_function import TiledFunction  # noqa: E402
from ordpde.app.core.geometry import SampleGrid  # noqa: E402
from ordpde.app.solver.convergence import DecayRow  # noqa: E402

logger = logging.getLogger(__name__)

# Fixed salt and no date keep the SVG bytes reproducible.
plt.rcParams["svg.hashsalt"] = "ordpde"
_SVG_METADATA = {"Date": None}


def plot_heatmap(path: Union[str, Path], u: TiledFunction, grid: SampleGrid, n: int) -> Path:
    p = Path(path)
    X, Y = grid.mesh
    values = u.evaluate_many(X, Y)
    fig, ax = plt.subplots(figsize=(6, 5))
    a, b = grid.domain.a, grid.domain.b
    im = ax.imshow(values, origin="lower", extent=(-a, a, -b, b), aspect="auto", cmap="viridis")
    fig.colorbar(im, ax=ax, label="u")
    segments_drawn = 0
    if u.tiling.structured and len(u.tiling.tiles) <= 4096:
        for xe in u.tiling.x_edges or ():
            ax.axvline(xe, color="white", lw=0.3, alpha=0.6)
        for ye in u.tiling.y_edges or ():
            ax.axhline(ye, color="white", lw=0.3, alpha=0.6)
        segments_drawn = len(u.tiling.x_edges or ()) + len(u.tiling.y_edges or ())
    ax.axhline(0.0, color="red", lw=0.8, ls="--")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"representative u_{n} (eps = 1/{n}, {len(u.tiling.tiles)} tiles)")
    fig.tight_layout()
    fig.savefig(p, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    logger.info("Wrote %s (%d skeleton lines)", p, segments_drawn)
    return p


def plot_decay(path: Union[str, Path], rows: Sequence[DecayRow]) -> Path:
    p = Path(path)
    n = np.array([r.n for r in rows], dtype=float)
    sup = np.array([r.sup_residual for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(n, sup, "o-", label="sup |T~u_n| off the skeleton")
    ax.loglog(n, 1.0 / n, "k--", lw=0.8, label="1/n")
    ax.loglog(n, 0.5 / n, "k:", lw=0.8, label="1/(2n)")
    ax.set_xlabel("n")
    ax.set_ylabel("residual")
    ax.legend()
    fig.tight_layout()
    fig.savefig(p, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    return p


__all__ = ["plot_heatmap", "plot_decay"]
