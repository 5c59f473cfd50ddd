"""Uniformity statistics for the intersection coordinates.

Thresholds used by the acceptance suite are fixed constants; nothing here
computes p-values.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import Empty, TooFewSamples
from .field import CubicPoly, basis_matrix_g0
from .units import UnitSystem


def ks_uniform(samples) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF and U[0,1)."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n == 0:
        raise Empty("no samples")
    i = np.arange(1, n + 1)
    return float(max((i / n - x).max(), (x - (i - 1) / n).max()))


def chi_square_bins(points, bins_per_axis: int):
    """Pearson statistic of equal-width bins of [0,1)^d against uniform; returns (stat, dof)."""
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    n, d = P.shape
    k = bins_per_axis**d
    if n < 5 * k:
        raise TooFewSamples(f"{n} samples for {k} bins (need {5 * k})")
    idx = np.clip((P * bins_per_axis).astype(np.int64), 0, bins_per_axis - 1)
    flat = np.ravel_multi_index(idx.T, (bins_per_axis,) * d)
    counts = np.bincount(flat, minlength=k)
    expected = n / k
    return float(((counts - expected) ** 2).sum() / expected), k - 1


def cusp_expected(Y: float) -> float:
    """Hyperbolic-area fraction of the fundamental domain above height Y >= 1."""
    if Y < 1:
        raise ValueError("closed form only valid for Y >= 1")
    return 3 / (math.pi * Y)


def cusp_fraction(zy, Y: float):
    zy = np.asarray(zy, dtype=float)
    obs = float((zy >= Y).mean()) if len(zy) else 0.0
    return obs, cusp_expected(Y)


def star_discrepancy_2d(points, grid: int = 64) -> float:
    """Sup over grid corners (a, b) of |#{x < a, y < b}/n - a b|."""
    P = np.asarray(points, dtype=float)
    n = len(P)
    if n == 0:
        raise Empty("no samples")
    H, _, _ = np.histogram2d(P[:, 0], P[:, 1], bins=grid, range=[[0, 1], [0, 1]])
    cum = H.cumsum(axis=0).cumsum(axis=1) / n
    g = np.arange(1, grid + 1) / grid
    return float(np.abs(cum - np.outer(g, g)).max())


def badlu_values(F: CubicPoly, U: UnitSystem, gl, grid_n: int = 400) -> np.ndarray:
    """(1,1) entry of gl . diag(eps1^s1 eps2^s2) . g0^{-1} on a grid_n x grid_n grid."""
    g0 = basis_matrix_g0(F).mat
    gl = np.asarray(getattr(gl, "mat", gl), dtype=float)
    g0inv = np.linalg.inv(g0)
    s = (np.arange(grid_n) + 0.5) / grid_n
    S1, S2 = np.meshgrid(s, s, indexing="ij")
    logs = S1[..., None] * U.logs[0] + S2[..., None] * U.logs[1]
    return np.exp(logs) @ (gl[0] * g0inv[:, 0])


def badlu_scan(F: CubicPoly, U: UnitSystem, gl, grid_n: int = 400, eps_list=(0.2, 0.1, 0.05, 0.025)):
    if grid_n < 100:
        raise ValueError("grid_n must be >= 100")
    v = np.abs(badlu_values(F, U, gl, grid_n))
    return [(float(e), float((v <= e).mean()) if e > 0 else 0.0) for e in eps_list]


@dataclass
class StatsReport:
    n: int
    ks_s1: float | None = None
    ks_s2: float | None = None
    ks_c1: float | None = None
    ks_c2: float | None = None
    chi2_torus: tuple | None = None
    chi2_joint: tuple | None = None
    cusp_fracs: list = field(default_factory=list)
    discrepancy_2d: float | None = None
    badlu: list = field(default_factory=list)

    def to_json(self) -> dict:
        def chi(v):
            return None if v is None else {"stat": v[0], "dof": v[1]}

        return {
            "n": self.n,
            "ks": {"s1": self.ks_s1, "s2": self.ks_s2, "c1": self.ks_c1, "c2": self.ks_c2},
            "chi2": {"torus": chi(self.chi2_torus), "joint": chi(self.chi2_joint)},
            "cusp": [{"Y": Y, "obs": o, "exp": e} for Y, o, e in self.cusp_fracs],
            "badlu": [{"eps": e, "fraction": f} for e, f in self.badlu],
            "discrepancy_2d": self.discrepancy_2d,
        }

    def as_dict(self):
        return asdict(self)


def _safe(fn, *args):
    try:
        return fn(*args)
    except (Empty, TooFewSamples):
        return None


def build_report(points, bins: int = 10, joint_bins: int = 4, cusp_Y=(2, 3, 5),
                 badlu=None) -> StatsReport:
    """Statistics over a list of IntersectionPoints (degenerate fields are None)."""
    s = np.array([[p.s1, p.s2] for p in points], dtype=float).reshape(-1, 2)
    c = np.array([[p.c1, p.c2] for p in points], dtype=float).reshape(-1, 2)
    zy = np.array([p.zy for p in points], dtype=float)
    rep = StatsReport(n=len(points))
    if len(points):
        rep.ks_s1, rep.ks_s2 = ks_uniform(s[:, 0]), ks_uniform(s[:, 1])
        rep.ks_c1, rep.ks_c2 = ks_uniform(c[:, 0]), ks_uniform(c[:, 1])
        rep.discrepancy_2d = star_discrepancy_2d(s)
    rep.chi2_torus = _safe(chi_square_bins, s, bins)
    rep.chi2_joint = _safe(chi_square_bins, np.hstack([s, c]), joint_bins)
    rep.cusp_fracs = [(float(Y), *cusp_fraction(zy, Y)) for Y in cusp_Y]
    rep.badlu = list(badlu or [])
    return rep
