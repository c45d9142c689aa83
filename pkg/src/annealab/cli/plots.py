# -*- coding: utf-8 -*-
"""
SVG views of the result tables.

Figures are built on the object API of :mod:`matplotlib` (no global ``pyplot``
state) inside a fixed style, and rendered by the SVG backend with a fixed hash salt
and no date, so the same data always produces the same bytes.
"""
import io
import logging
import math
from pathlib import Path
from typing import Sequence

import matplotlib
import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from ..utils.io import atomic_write_bytes

logger = logging.getLogger(__name__)

STYLE = {
    "svg.hashsalt": "annealab",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

FIGSIZE = (5.0, 3.2)


def _figure_with_axes() -> Figure:
    _fig = Figure(figsize=FIGSIZE)
    FigureCanvasSVG(_fig)
    _fig.add_subplot(1, 1, 1)

    return _fig


def save_svg(figure: Figure, path: Path) -> Path:
    """
    Render ``figure`` to SVG and write it atomically.
    """
    _buffer = io.BytesIO()

    with matplotlib.rc_context(STYLE):
        figure.savefig(_buffer, format="svg", metadata={"Date": None})

    logger.debug("plot_written path=%s", path)

    return atomic_write_bytes(path, _buffer.getvalue())


@matplotlib.rc_context(STYLE)
def plot_equilibrium(
    path: Path,
    centers: np.ndarray,
    empirical: np.ndarray,
    reference: np.ndarray,
    beta: float,
) -> Path:
    _fig = _figure_with_axes()
    _axes = _fig.axes[0]
    _width = 2.0 * math.pi / len(centers)

    _axes.bar(centers, empirical, width=_width, alpha=0.5, label="empirical")
    _axes.plot(centers, reference, color="black", linewidth=1.0, label="Gibbs")
    _axes.set_xlabel("angle [rad]")
    _axes.set_ylabel("probability")
    _axes.set_title(f"Occupation at beta = {beta:g}")
    _axes.legend(frameon=False)

    return save_svg(_fig, path)


@matplotlib.rc_context(STYLE)
def plot_arrhenius(
    path: Path,
    betas: Sequence[float],
    log_means: Sequence[float],
    log_lows: Sequence[float],
    log_highs: Sequence[float],
    slope: float = math.nan,
    intercept: float = math.nan,
) -> Path:
    _fig = _figure_with_axes()
    _axes = _fig.axes[0]
    _betas = np.asarray(betas, dtype=float)
    _means = np.asarray(log_means, dtype=float)

    _axes.errorbar(
        _betas,
        _means,
        yerr=[_means - np.asarray(log_lows), np.asarray(log_highs) - _means],
        fmt="o",
        capsize=3,
        label="mean exit time",
    )

    if math.isfinite(slope):
        _axes.plot(
            _betas,
            slope * _betas + intercept,
            color="black",
            linewidth=1.0,
            label=f"fit, slope {slope:.3g}",
        )

    _axes.set_xlabel("beta")
    _axes.set_ylabel("ln mean exit time")
    _axes.legend(frameon=False)

    return save_svg(_fig, path)


@matplotlib.rc_context(STYLE)
def plot_anneal(
    path: Path,
    rates: Sequence[float],
    fractions: Sequence[float],
    lows: Sequence[float],
    highs: Sequence[float],
    c_star: float,
) -> Path:
    _fig = _figure_with_axes()
    _axes = _fig.axes[0]
    _rates = np.asarray(rates, dtype=float)
    _fractions = np.asarray(fractions, dtype=float)

    _axes.errorbar(
        _rates,
        _fractions,
        yerr=[_fractions - np.asarray(lows), np.asarray(highs) - _fractions],
        fmt="o",
        capsize=3,
    )

    if math.isfinite(c_star):
        _axes.axvline(c_star, color="black", linestyle="--", linewidth=1.0)

    _axes.set_xlabel("logarithmic rate c")
    _axes.set_ylabel("success fraction")
    _axes.set_ylim(-0.05, 1.05)

    return save_svg(_fig, path)


@matplotlib.rc_context(STYLE)
def plot_sharpening(
    path: Path,
    betas: Sequence[float],
    norms: Sequence[float],
    slope: float = math.nan,
) -> Path:
    _fig = _figure_with_axes()
    _axes = _fig.axes[0]

    _axes.loglog(betas, norms, marker="o")
    _axes.set_xlabel("beta")
    _axes.set_ylabel("anchor Hessian spectral norm")

    if math.isfinite(slope):
        _axes.set_title(f"log-log slope {slope:.3g}")

    return save_svg(_fig, path)


@matplotlib.rc_context(STYLE)
def plot_gradcheck(
    path: Path, gradient_errors: Sequence[float], hessian_errors: Sequence[float]
) -> Path:
    _fig = _figure_with_axes()
    _axes = _fig.axes[0]
    _floor = np.finfo(float).tiny

    _axes.semilogy(
        np.maximum(np.asarray(gradient_errors, dtype=float), _floor),
        linestyle="none",
        marker=".",
        label="gradient",
    )
    _axes.semilogy(
        np.maximum(np.asarray(hessian_errors, dtype=float), _floor),
        linestyle="none",
        marker="x",
        label="anchor Hessian",
    )
    _axes.set_xlabel("trial")
    _axes.set_ylabel("max relative error")
    _axes.legend(frameon=False)

    return save_svg(_fig, path)