"""Static SVG scatter plots of 2-D (or PCA-projected) embeddings."""
from __future__ import annotations

import colorsys
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

BASE_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


@dataclass(frozen=True)
class PlotSpec:
    width: int = 640
    height: int = 480
    radius: float = 5.0
    padding: float = 0.08
    legend_width: int = 160

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0 or self.radius <= 0:
            raise ValueError("plot dimensions and point radius must be positive")
        if not 0 <= self.padding < 0.5:
            raise ValueError("padding fraction must be in [0, 0.5)")


def palette(count: int) -> list[str]:
    """Tab10 colours, then evenly spaced hues for any further labels."""
    colours = list(BASE_PALETTE[:count])
    extra = count - len(colours)
    for i in range(extra):
        r, g, b = colorsys.hls_to_rgb((i + 0.5) / extra, 0.45, 0.65)
        colours.append("#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255)))
    return colours


def _power_iteration(C: np.ndarray, iters: int = 1000, tol: float = 1e-12) -> tuple[float, np.ndarray]:
    d = C.shape[0]
    v = np.ones(d) + np.arange(d) / d
    v /= np.linalg.norm(v)
    for _ in range(iters):
        w = C @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            break
        w /= norm
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    lam = float(v @ C @ v)
    return lam, v


def pca_project(X: np.ndarray, components: int = 2) -> np.ndarray:
    """Project centred rows onto the top principal axes found by power iteration with deflation.

    Each axis is signed so its largest-magnitude entry is positive.
    """
    X = np.asarray(X, dtype=float)
    Z = X - X.mean(axis=0)
    C = Z.T @ Z / len(Z)
    axes = []
    for _ in range(components):
        lam, v = _power_iteration(C)
        k = int(np.argmax(np.abs(v)))
        if v[k] < 0:
            v = -v
        axes.append(v)
        C = C - lam * np.outer(v, v)
    return Z @ np.column_stack(axes)


def to_plane(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError("plotting needs an embedding with d >= 2; re-embed with -d 2")
    return X if X.shape[1] == 2 else pca_project(X, 2)


def render_svg(X: np.ndarray, labels: Sequence[str] | None = None, spec: PlotSpec = PlotSpec()) -> str:
    """Scatter plot, one circle per node coloured by label, legend on the right."""
    P = to_plane(X)
    n = len(P)
    names = list(labels) if labels is not None else ["node"] * n
    if len(names) != n:
        raise ValueError(f"{n} points but {len(names)} labels")
    order = list(dict.fromkeys(names))
    colour = dict(zip(order, palette(len(order))))

    plot_w = spec.width - spec.legend_width
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    # equal scaling on both axes so distances read correctly
    scale = min(plot_w * (1 - 2 * spec.padding) / span[0], spec.height * (1 - 2 * spec.padding) / span[1])
    cx = plot_w / 2 - (lo[0] + hi[0]) / 2 * scale
    cy = spec.height / 2 + (lo[1] + hi[1]) / 2 * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>',
        '<g id="points" fill-opacity="0.75">',
    ]
    for (x, y), name in zip(P, names):
        out.append(
            f'<circle cx="{cx + x * scale:.3f}" cy="{cy - y * scale:.3f}" r="{spec.radius:g}" '
            f'fill="{colour[name]}"><title>{escape(name)}</title></circle>'
        )
    out.append("</g>")
    out.append('<g id="legend" font-family="sans-serif" font-size="12">')
    for i, name in enumerate(order):
        y = 20 + 18 * i
        out.append(f'<rect x="{plot_w + 10}" y="{y - 9}" width="10" height="10" fill="{colour[name]}"/>')
        out.append(f'<text x="{plot_w + 26}" y="{y}">{escape(name)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
