"""Figure rendering for scan and fringe datasets.

Everything here is optional decoration; the numeric outputs never depend on
it. The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_nodal_scan(rows, out_path: str) -> None:
    """Heatmap of nodal eta^2 over the (omega, fb) plane; gaps where no solution."""
    fbs = sorted({row.fb for row in rows})
    oms = sorted({row.omega for row in rows})
    fb_index = {v: i for i, v in enumerate(fbs)}
    om_index = {v: i for i, v in enumerate(oms)}
    grid = np.full((len(fbs), len(oms)), np.nan)
    for row in rows:
        grid[fb_index[row.fb], om_index[row.omega]] = row.eta2
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    mesh = ax.pcolormesh(oms, fbs, grid, shading="nearest", vmin=0.5, vmax=1.0)
    fig.colorbar(mesh, ax=ax, label="nodal visibility squared")
    ax.set_xlabel("solid angle [rad]")
    ax.set_ylabel("Bures fidelity")
    ax.set_title("Where the two-cycle trace vanishes")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def render_fringe(scan, out_path: str) -> None:
    """Sampled coincidence fringe with its cosine fit."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(scan.chi_values, scan.intensities, "o", ms=4, label="samples")
    dense = np.linspace(float(scan.chi_values.min()), float(scan.chi_values.max()), 400)
    model = scan.offset * (1.0 + scan.visibility * np.cos(dense - scan.shift))
    ax.plot(dense, model, "-",
            label=f"fit: shift {scan.shift:+.4f} rad, visibility {scan.visibility:.4f}")
    ax.set_xlabel("analyzer phase chi [rad]")
    ax.set_ylabel("normalized coincidence rate")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def render_sweep(rows, out_path: str) -> None:
    """Intensity heatmaps over (chi, beta), one panel per marginal purity r."""
    r_values = sorted({row[0] for row in rows})[:6]
    fig, axes = plt.subplots(len(r_values), 1, figsize=(7.0, 2.6 * len(r_values)),
                             squeeze=False)
    for ax, r in zip(axes[:, 0], r_values):
        betas = sorted({row[1] for row in rows if row[0] == r})
        chis = sorted({row[2] for row in rows if row[0] == r})
        grid = np.full((len(betas), len(chis)), np.nan)
        b_index = {v: i for i, v in enumerate(betas)}
        c_index = {v: i for i, v in enumerate(chis)}
        for rr, beta, chi, intensity in rows:
            if rr == r:
                grid[b_index[beta], c_index[chi]] = intensity
        mesh = ax.pcolormesh(chis, betas, grid, shading="nearest")
        fig.colorbar(mesh, ax=ax, label="intensity")
        ax.set_ylabel("beta [rad]")
        ax.set_title(f"r = {r:g}")
    axes[-1, 0].set_xlabel("analyzer phase chi [rad]")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
