"""Rendering: deterministic SVG of a realization with its Voronoi tessellation,
and matplotlib figures for the curve experiments."""

from __future__ import annotations

import math

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .geometry import chord_half_length, line_point, LineParams  # noqa: E402
from .sampler import Realization  # noqa: E402
from .tessellation import Tessellation  # noqa: E402

__all__ = ["realization_svg", "save_curve_figure", "save_realization_figure"]


def _f(x: float) -> str:
    return f"{x:.6f}"


def realization_svg(
    real: Realization,
    tess: Tessellation | None = None,
    window_radius: float | None = None,
    size: int = 600,
) -> str:
    """SVG picture of roads (lines), vehicles (dots) and, if given, the
    Voronoi cell boundaries, clipped to the observation disk."""
    R = window_radius if window_radius is not None else real.obs_radius
    scale = size / (2.0 * R)

    def sx(x):
        return _f((x + R) * scale)

    def sy(y):
        return _f((R - y) * scale)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{size/2}" cy="{size/2}" r="{size/2}" fill="none" '
        'stroke="black" stroke-width="1"/>',
        f'<clipPath id="win"><circle cx="{size/2}" cy="{size/2}" r="{size/2}"/></clipPath>',
        '<g clip-path="url(#win)">',
    ]
    for r, th in zip(real.line_r, real.line_theta):
        if abs(r) >= R:
            continue
        h = chord_half_length(r, R)
        ln = LineParams(r, th)
        a = line_point(ln, -h)
        b = line_point(ln, h)
        parts.append(
            f'<line x1="{sx(a.x)}" y1="{sy(a.y)}" x2="{sx(b.x)}" y2="{sy(b.y)}" '
            'stroke="#555555" stroke-width="1"/>'
        )
    if tess is not None:
        far = 4.0 * R
        for e in tess.edges:
            if e.v1 is not None and e.v2 is not None:
                p, q = tess.vertices[e.v1], tess.vertices[e.v2]
            elif e.v1 is not None and e.direction is not None:
                p = tess.vertices[e.v1]
                q = p + far * np.asarray(e.direction)
            else:
                continue
            parts.append(
                f'<line x1="{sx(p[0])}" y1="{sy(p[1])}" x2="{sx(q[0])}" y2="{sy(q[1])}" '
                'stroke="#1f77b4" stroke-width="0.8"/>'
            )
    for x, y in zip(real.point_x, real.point_y):
        if math.hypot(x, y) <= R:
            parts.append(
                f'<circle cx="{sx(x)}" cy="{sy(y)}" r="2.5" fill="#d62728"/>'
            )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_curve_figure(path, x, curves: dict, xlabel: str, ylabel: str, title: str):
    """One PNG with each labelled curve over the common abscissa."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in curves.items():
        style = "-" if "analytic" in label else "--"
        ax.plot(x, y, style, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)


def save_realization_figure(path, real: Realization, tess: Tessellation | None = None):
    """Matplotlib version of the realization picture."""
    R = real.obs_radius
    fig, ax = plt.subplots(figsize=(6, 6))
    for r, th in zip(real.line_r, real.line_theta):
        if abs(r) >= R:
            continue
        h = chord_half_length(r, R)
        ln = LineParams(r, th)
        a = line_point(ln, -h)
        b = line_point(ln, h)
        ax.plot([a.x, b.x], [a.y, b.y], color="0.4", lw=0.8)
    if tess is not None:
        for e in tess.edges:
            if e.v1 is not None and e.v2 is not None:
                p, q = tess.vertices[e.v1], tess.vertices[e.v2]
                ax.plot([p[0], q[0]], [p[1], q[1]], color="tab:blue", lw=0.6)
    ax.plot(real.point_x, real.point_y, ".", color="tab:red", ms=3)
    ax.add_patch(plt.Circle((0, 0), R, fill=False, color="black"))
    ax.set_xlim(-R, R)
    ax.set_ylim(-R, R)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
