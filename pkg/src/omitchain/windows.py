"""Transparency-window detection, width measurement, and lossless prediction.

A window is a deep local minimum of |eps_T|; its width is the connected
interval around the center where the absorptive quadrature Re(eps_T) drops
below half the baseline value 2.  The central feature at x = 0 is classified
as an absorptive peak, an absorptive dip, or a split peak.

All thresholds are anchored to the baseline |eps_T| = 2 of an empty lossy
cavity and are overridable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import argrelmax, find_peaks

from .errors import NotApplicableError, ResolutionError
from .model import NormalizedSystem
from .response import ResponseSpectrum

ABSORPTIVE_PEAK = "AbsorptivePeak"
ABSORPTIVE_DIP = "AbsorptiveDip"
SPLIT_PEAK = "SplitPeak"

DEFAULT_DEPTH_THRESHOLD = 0.2
DEFAULT_PROMINENCE = 0.1
DEFAULT_WIDTH_LEVEL = 1.0
DEFAULT_CENTRAL_BAND = 0.35
MIN_WINDOW_POINTS = 5


@dataclass(frozen=True)
class Window:
    center_x: float
    depth: float
    width: float
    left: float
    right: float


@dataclass(frozen=True)
class WindowReport:
    windows: tuple[Window, ...]
    count: int
    central_feature: str
    thresholds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "windows": [
                {"center_x": w.center_x, "depth": w.depth, "width": w.width,
                 "left": w.left, "right": w.right}
                for w in self.windows
            ],
            "count": self.count,
            "central_feature": self.central_feature,
            "thresholds": self.thresholds,
        }


def _crossing(x: np.ndarray, y: np.ndarray, i_out: int, i_in: int, level: float) -> float:
    """Linear interpolation of the x where y crosses `level` between two samples."""
    y0, y1 = y[i_out], y[i_in]
    if y0 == y1:
        return x[i_in]
    f = (level - y0) / (y1 - y0)
    return x[i_out] + f * (x[i_in] - x[i_out])


def _width_interval(x: np.ndarray, re: np.ndarray, idx: int,
                    level: float) -> tuple[float, float, int]:
    """Connected interval around sample idx where re < level.

    Returns (left, right, n_points) with level crossings interpolated.
    """
    n = len(x)
    lo = idx
    while lo > 0 and re[lo - 1] < level:
        lo -= 1
    hi = idx
    while hi < n - 1 and re[hi + 1] < level:
        hi += 1
    left = _crossing(x, re, lo - 1, lo, level) if lo > 0 else x[0]
    right = _crossing(x, re, hi + 1, hi, level) if hi < n - 1 else x[-1]
    return left, right, hi - lo + 1


def detect_windows(spec: ResponseSpectrum, *,
                   depth_threshold: float = DEFAULT_DEPTH_THRESHOLD,
                   prominence: float = DEFAULT_PROMINENCE,
                   width_level: float = DEFAULT_WIDTH_LEVEL,
                   central_band: float = DEFAULT_CENTRAL_BAND) -> WindowReport:
    """Find transparency windows and classify the central feature.

    A window is a local minimum of |eps_T| below `depth_threshold` with
    topographic prominence at least `prominence`.  Raises ResolutionError if
    a detected window spans fewer than MIN_WINDOW_POINTS grid points.
    """
    x = np.asarray(spec.x_grid)
    eps = np.asarray(spec.eps_T)
    mag = np.abs(eps)
    re = eps.real

    idxs, props = find_peaks(-mag, prominence=prominence)
    idxs = [i for i in idxs if mag[i] < depth_threshold]

    wins = []
    for i in idxs:
        left, right, n_pts = _width_interval(x, re, i, width_level)
        if n_pts < MIN_WINDOW_POINTS:
            raise ResolutionError(
                f"window at x={x[i]:.4g} spans only {n_pts} grid points; "
                "refine the spectrum grid")
        wins.append(Window(center_x=float(x[i]), depth=float(mag[i]),
                           width=float(right - left), left=float(left),
                           right=float(right)))
    wins.sort(key=lambda w: w.center_x)

    feature = _classify_central(x, re, wins, central_band, width_level)
    return WindowReport(
        windows=tuple(wins), count=len(wins), central_feature=feature,
        thresholds={"depth_threshold": depth_threshold, "prominence": prominence,
                    "width_level": width_level, "central_band": central_band},
    )


def _classify_central(x: np.ndarray, re: np.ndarray, wins: list[Window],
                      central_band: float, width_level: float) -> str:
    """Classify the feature at x = 0.

    SplitPeak: two windows bracket a local maximum of Re lying within the
    central band (the split remnant of a former central peak or dip).
    AbsorptiveDip: x = 0 lies inside a window.  AbsorptivePeak: Re(0) > the
    width level with no split.
    """
    re0 = float(np.interp(0.0, x, re))

    max_idx = argrelmax(re)[0]
    band_maxima = [x[i] for i in max_idx
                   if abs(x[i]) < central_band and re[i] > width_level]
    centers = [w.center_x for w in wins]
    for xm in band_maxima:
        below = [c for c in centers if c < xm]
        above = [c for c in centers if c > xm]
        if not below or not above:
            continue
        # A split remnant has one of its bracketing windows essentially at
        # the origin; an ordinary central dip keeps its maxima between
        # well-separated windows instead.
        if min(abs(max(below)), abs(min(above))) <= 0.5 * central_band:
            return SPLIT_PEAK

    for w in wins:
        if w.left <= 0.0 <= w.right and abs(w.center_x) < central_band:
            return ABSORPTIVE_DIP
    if re0 > width_level:
        return ABSORPTIVE_PEAK
    return ABSORPTIVE_DIP


def central_feature_width(spec: ResponseSpectrum, *,
                          width_level: float = DEFAULT_WIDTH_LEVEL,
                          central_band: float = DEFAULT_CENTRAL_BAND) -> float:
    """Width of the central absorptive peak or dip.

    Peak: extent of the connected region around x = 0 where Re > width_level.
    Dip: the window width at x = 0.  Raises NotApplicableError for a split
    central feature.
    """
    report = detect_windows(spec, width_level=width_level, central_band=central_band)
    x = np.asarray(spec.x_grid)
    re = np.asarray(spec.eps_T).real

    if report.central_feature == SPLIT_PEAK:
        raise NotApplicableError("central feature is split; width undefined")

    i0 = int(np.argmin(np.abs(x)))
    if report.central_feature == ABSORPTIVE_PEAK:
        left, right, _ = _width_interval(x, -re, i0, -width_level)
        return float(right - left)

    for w in report.windows:
        if w.left <= x[i0] <= w.right:
            return w.width
    raise NotApplicableError("no window at x = 0")


def predict_windows_lossless(system: NormalizedSystem) -> np.ndarray:
    """Transparency positions from the lossless denominator polynomial.

    Sets every decay to zero and tracks each continued-fraction level as a
    ratio P_k/Q_k of real polynomials in t = i*x.  eps_T vanishes where the
    final level diverges, i.e. at the real roots (in x) of Q_N.  Returned in
    angular units, sorted.
    """
    n = system.n
    G2 = abs(system.G) ** 2
    a = system.g_a**2 * float((-system.sigma_z_bar).real) \
        if system.atom_position is not None else 0.0
    pos = system.atom_position

    t = npoly.Polynomial([0.0, 1.0])
    one = npoly.Polynomial([1.0])

    # Level 1: D_1 = t + G^2/t (+ a/t when the atom sits in cavity 1).
    inner = G2 + (a if pos == 1 else 0.0)
    if inner > 0:
        P, Q = t * t + inner, t
    else:
        P, Q = t, one

    for k in range(1, n):
        g2 = system.hopping[k - 1] ** 2
        if pos == k + 1 and a > 0:
            # D_{k+1} = t + g^2 Q/P + a/t
            P, Q = t * t * P + g2 * t * Q + a * P, t * P
        else:
            P, Q = t * P + g2 * Q, P

    coeffs = Q.coef
    if len(coeffs) < 2:
        return np.array([])
    roots_t = npoly.polyroots(coeffs)
    scale = max(1.0, float(np.max(np.abs(roots_t))) if len(roots_t) else 1.0)
    real_x = sorted(r.imag for r in roots_t if abs(r.real) < 1e-8 * scale)
    return np.array(real_x)
