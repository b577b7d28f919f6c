"""Static figures of sampled stars and maps (PNG via the Agg backend).

Floats appear only here, when exact samples are handed to matplotlib.
"""

from __future__ import annotations

import math
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .geometry import PolarPoint, Star  # noqa: E402
from .homeo import Homeo  # noqa: E402


def _xy(theta, s) -> tuple[float, float]:
    a = 2 * math.pi * float(theta)
    return float(s) * math.cos(a), float(s) * math.sin(a)


def _outline(S: Star, n: int = 400):
    pts = [_xy(k / n, S(Fraction(k % n, n))) for k in range(n + 1)]
    return [p[0] for p in pts], [p[1] for p in pts]


def render_star(S: Star, path, samples: list | None = None, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    xs, ys = _outline(S)
    ax.fill(xs, ys, alpha=0.15, color="tab:blue")
    ax.plot(xs, ys, color="tab:blue", lw=1.5)
    if samples:
        px, py = zip(*(_xy(t, v) for t, v in samples))
        ax.plot(px, py, "o", color="tab:red", ms=4)
    ax.plot([0], [0], "k+")
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.savefig(path, dpi=100, bbox_inches="tight")
    plt.close(fig)


def render_map(h: Homeo, path, pairs: list[tuple[PolarPoint, PolarPoint]], title: str = "") -> None:
    """Domain and range outlines with arrows from sampled boundary points to their images."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for S, color, label in ((h.dom, "tab:blue", "dom"), (h.ran, "tab:orange", "ran")):
        xs, ys = _outline(S)
        ax.plot(xs, ys, color=color, lw=1.5, label=label)
    for p, q in pairs:
        (x0, y0), (x1, y1) = _xy(p.theta, p.s), _xy(q.theta, q.s)
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0), arrowprops=dict(arrowstyle="->", color="0.4", lw=0.8))
    ax.plot([0], [0], "k+")
    ax.set_aspect("equal")
    ax.legend(loc="upper right")
    ax.set_title(title)
    fig.savefig(path, dpi=100, bbox_inches="tight")
    plt.close(fig)
