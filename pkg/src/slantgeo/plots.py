"""Figure rendering for analysis and detection reports.

Everything is written to files (PNG); matplotlib is imported lazily with
the Agg backend so the core library never needs a display.
"""

from __future__ import annotations

import math
import os

import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_point_table(table, outdir, stem):
    """2x2 heatmap panel: Wirtinger angle, G, G^D, |H| over the grid."""
    plt = _pyplot()
    us = sorted({row["u"] for row in table})
    vs = sorted({row["v"] for row in table})
    shape = (len(us), len(vs))
    fields = ("theta_mean", "G", "GD", "H_norm")
    titles = ("Wirtinger angle", "Gauss curvature G",
              "normal curvature G^D", "|H|")
    grids = {f: np.full(shape, np.nan) for f in fields}
    ui = {u: i for i, u in enumerate(us)}
    vi = {v: j for j, v in enumerate(vs)}
    for row in table:
        for f in fields:
            grids[f][ui[row["u"]], vi[row["v"]]] = row[f]
    fig, axes = plt.subplots(2, 2, figsize=(9, 7))
    for ax, f, title in zip(axes.ravel(), fields, titles):
        im = ax.imshow(grids[f].T, origin="lower", aspect="auto",
                       extent=(us[0], us[-1], vs[0], vs[-1]))
        ax.set_title(title)
        ax.set_xlabel("u")
        ax.set_ylabel("v")
        fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    path = os.path.join(outdir, f"{stem}_fields.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_gauss_projections(samples, detection, outdir, stem):
    """Both projected Gauss images on their spheres with fitted circles."""
    plt = _pyplot()
    fig = plt.figure(figsize=(10, 5))
    for k, (cls, pts) in enumerate((
            ("plus", np.array([s.plus3() for s in samples])),
            ("minus", np.array([s.minus3() for s in samples])))):
        ax = fig.add_subplot(1, 2, k + 1, projection="3d")
        r = 1.0 / math.sqrt(2.0)
        tt, pp = np.meshgrid(np.linspace(0, math.pi, 25),
                             np.linspace(0, 2 * math.pi, 49))
        ax.plot_wireframe(r * np.sin(tt) * np.cos(pp), r * np.sin(tt) * np.sin(pp),
                          r * np.cos(tt), color="0.85", linewidth=0.3)
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=4)
        det = detection.plus if cls == "plus" else detection.minus
        fit = det.fit
        if fit is not None and det.classification == "circle":
            axis = fit.axis
            seed = np.array([1.0, 0.0, 0.0])
            if abs(seed @ axis) > 0.9:
                seed = np.array([0.0, 1.0, 0.0])
            b1 = seed - (seed @ axis) * axis
            b1 /= np.linalg.norm(b1)
            b2 = np.cross(axis, b1)
            rad = math.sqrt(max(0.0, 0.5 - fit.offset ** 2))
            ang = np.linspace(0, 2 * math.pi, 181)
            circ = (fit.offset * axis[None, :]
                    + rad * (np.cos(ang)[:, None] * b1 + np.sin(ang)[:, None] * b2))
            ax.plot(circ[:, 0], circ[:, 1], circ[:, 2], color="crimson", lw=1.2)
            ax.quiver(0, 0, 0, *axis, length=r, color="crimson", lw=1.0)
        ax.set_title(f"S2_{cls}: {det.classification}")
        ax.set_box_aspect((1, 1, 1))
    fig.tight_layout()
    path = os.path.join(outdir, f"{stem}_gauss.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_loop_integrand(ts, values, psi, outdir, stem):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.plot(ts, values, lw=1.0)
    ax.set_xlabel("loop parameter")
    ax.set_ylabel("Theta along loop")
    ax.set_title(f"loop integrand (Psi = {psi:.6f})")
    fig.tight_layout()
    path = os.path.join(outdir, f"{stem}_loop.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
