"""Figure data: ESD boundary contours and negativity trajectories.

Each figure id emits one CSV per curve plus a rendered PNG:

* 1 - zero-negativity boundaries of the phi1 family in the
  (gamma*t, gamma1*t) plane for beta = 0.8, 0.9, 0.95.
* 2 - negativity vs time of the maximally entangled phi2 state for
  k = 1 and k = 0.
* 3 - mixed-family boundaries at b = 0.02 in the (gamma*t, gamma2*t)
  plane for c = 0.15, 0.2 at k = 1 and k = 0.
* 4 - same as 3 for b = 0.06 with c = 0.25, 0.4.

Boundaries are extracted by marching squares on the signed (unclamped)
negativity over a 256x256 grid; the plotted window defaults to [0, 3]
in each dissipation factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dynamics
from .dynamics import DecayRates, MixedFamilyParams

GRID_POINTS = 256
WINDOW = 3.0

FIGURE_IDS = (1, 2, 3, 4)


def marching_squares(
    xs: np.ndarray, ys: np.ndarray, field: np.ndarray, level: float = 0.0
) -> list[np.ndarray]:
    """Level-set polylines of a scalar field sampled on a rectangular grid.

    ``field[i, j]`` is the value at ``(xs[i], ys[j])``.  Crossing points
    are linearly interpolated on cell edges; segments sharing endpoints
    are chained into polylines, returned in deterministic order.
    """
    f = np.asarray(field, dtype=float) - level
    nx, ny = f.shape
    if xs.shape != (nx,) or ys.shape != (ny,):
        raise ValueError("axis lengths do not match the field shape")

    def interp(xa, ya, va, xb, yb, vb):
        frac = va / (va - vb)
        return (xa + frac * (xb - xa), ya + frac * (yb - ya))

    # restrict the Python loop to cells whose corners straddle the level
    pos = f > 0.0
    crossing = (
        (pos[:-1, :-1] != pos[1:, :-1])
        | (pos[:-1, :-1] != pos[:-1, 1:])
        | (pos[:-1, :-1] != pos[1:, 1:])
    )
    segments: list[tuple[tuple[float, float], tuple[float, float]]] = []
    for i, j in zip(*np.nonzero(crossing)):
        corners = (
            (xs[i], ys[j], f[i, j]),
            (xs[i + 1], ys[j], f[i + 1, j]),
            (xs[i + 1], ys[j + 1], f[i + 1, j + 1]),
            (xs[i], ys[j + 1], f[i, j + 1]),
        )
        points = []
        for a in range(4):
            xa, ya, va = corners[a]
            xb, yb, vb = corners[(a + 1) % 4]
            if (va > 0.0) != (vb > 0.0):
                points.append(interp(xa, ya, va, xb, yb, vb))
        # crossings through a grid node produce zero-length segments; drop them
        points = [
            p
            for n, p in enumerate(points)
            if all(
                abs(p[0] - q[0]) > 1e-12 or abs(p[1] - q[1]) > 1e-12
                for q in points[:n]
            )
        ]
        if len(points) == 2:
            segments.append((points[0], points[1]))
        elif len(points) == 4:
            # saddle cell: pair edges (0,1) and (2,3); ambiguous cases do
            # not occur for the monotone boundaries drawn here
            segments.append((points[0], points[1]))
            segments.append((points[2], points[3]))

    return _chain_segments(segments)


def _chain_segments(segments) -> list[np.ndarray]:
    """Join shared-endpoint segments into polylines (deterministic order)."""
    def key(pt):
        return (round(pt[0], 9), round(pt[1], 9))

    adjacency: dict[tuple, list[int]] = {}
    for idx, (a, b) in enumerate(segments):
        adjacency.setdefault(key(a), []).append(idx)
        adjacency.setdefault(key(b), []).append(idx)

    used = [False] * len(segments)
    polylines = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        a, b = segments[start]
        chain = [a, b]
        for head, append in ((key(b), True), (key(a), False)):
            node = head
            while True:
                nxt = [i for i in adjacency.get(node, []) if not used[i]]
                if not nxt:
                    break
                idx = nxt[0]
                used[idx] = True
                p, q = segments[idx]
                step = q if key(p) == node else p
                if append:
                    chain.append(step)
                else:
                    chain.insert(0, step)
                node = key(step)
        polylines.append(np.array(chain))

    polylines.sort(key=lambda arr: (arr[0, 0], arr[0, 1]))
    return polylines


@dataclass(frozen=True)
class FigureCurve:
    """One CSV-worth of figure data."""

    label: str
    columns: tuple[str, ...]
    data: np.ndarray


def _phi1_boundary(beta: float) -> FigureCurve:
    axis = np.linspace(0.0, WINDOW, GRID_POINTS)
    field = dynamics.phi1_negativity_unclamped(
        beta, axis[:, None], axis[None, :]
    )
    polylines = marching_squares(axis, axis, field)
    points = (
        np.vstack(polylines) if polylines else np.empty((0, 2))
    )
    return FigureCurve(
        label=f"beta_{beta:g}",
        columns=("gamma_t", "gamma1_t"),
        data=points,
    )


def _phi2_trajectory(k: float) -> FigureCurve:
    rates = DecayRates(gamma=1.0, gamma1=k, gamma2=1.0)
    amp = np.sqrt(0.5)
    ts = np.linspace(0.0, WINDOW, GRID_POINTS)
    values = np.array([dynamics.negativity_phi2_closed(amp, amp, rates, t) for t in ts])
    return FigureCurve(
        label=f"k{k:g}",
        columns=("t", "negativity"),
        data=np.column_stack([ts, values]),
    )


def _mixed_boundary(b: float, c: float, k: float) -> FigureCurve:
    params = MixedFamilyParams.from_bc(b, c)
    axis = np.linspace(0.0, WINDOW, GRID_POINTS)
    gamma_t = axis[:, None]
    gamma2_t = axis[None, :]
    field = dynamics.mixed_negativity_unclamped(
        params, gamma_t, k * gamma2_t, gamma2_t
    )
    polylines = marching_squares(axis, axis, field)
    points = np.vstack(polylines) if polylines else np.empty((0, 2))
    return FigureCurve(
        label=f"k{k:g}_c{c:g}",
        columns=("gamma_t", "gamma2_t"),
        data=points,
    )


def figure_curves(fig_id: int) -> list[FigureCurve]:
    """All curves of one figure, in emission order."""
    if fig_id == 1:
        return [_phi1_boundary(beta) for beta in (0.8, 0.9, 0.95)]
    if fig_id == 2:
        return [_phi2_trajectory(k) for k in (1.0, 0.0)]
    if fig_id == 3:
        return [_mixed_boundary(0.02, c, k) for k in (1.0, 0.0) for c in (0.15, 0.2)]
    if fig_id == 4:
        return [_mixed_boundary(0.06, c, k) for k in (1.0, 0.0) for c in (0.25, 0.4)]
    raise ValueError(f"figure id must be one of {FIGURE_IDS}, got {fig_id!r}")


def write_figure(fig_id: int, out_dir: str | Path, fmt, *, render: bool = True) -> list[Path]:
    """Emit the CSV files (and PNG) of one figure; returns written paths.

    ``fmt`` formats one float to its canonical text form.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    curves = figure_curves(fig_id)
    written = []
    for curve in curves:
        path = out / f"fig{fig_id}_{curve.label}.csv"
        lines = [",".join(curve.columns)]
        for row in curve.data:
            lines.append(",".join(fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    if render:
        written.append(render_figure(fig_id, curves, out))
    return written


def render_figure(fig_id: int, curves: list[FigureCurve], out_dir: Path) -> Path:
    """Draw one figure to ``fig<id>.png`` with matplotlib (Agg backend)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for curve in curves:
        if curve.data.size == 0:
            continue
        ax.plot(curve.data[:, 0], curve.data[:, 1], label=curve.label, linewidth=1.4)
    ax.set_xlabel(curves[0].columns[0])
    ax.set_ylabel(curves[0].columns[1])
    if fig_id == 2:
        ax.set_title("negativity decay of the maximally entangled phi2 state")
    else:
        ax.set_title("separability boundary (zero negativity)")
        ax.set_xlim(0.0, WINDOW)
        ax.set_ylim(0.0, WINDOW)
    ax.legend(loc="best", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = Path(out_dir) / f"fig{fig_id}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
