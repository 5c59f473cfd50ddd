"""Coordinates of one intersection point: torus chart, reduced hyperbolic point, affine fiber."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonConvergence, NotSublattice, SingularM
from .field import CubicPoly, OrderElement, from_row, mul
from .ideals import IdealHNF, hnf_reduce
from .units import DomainPoint, UnitSystem, enumerate_domain, reduce_to_domain

CSV_COLUMNS = ("N", "m1", "mu1", "m2", "mu2", "lambda",
               "s1", "s2", "zx", "zy", "c1", "c2", "t")


@dataclass(frozen=True)
class IntersectionPoint:
    N: int
    m1: int
    mu1: int
    m2: int
    mu2: int
    lam: int
    s1: float
    s2: float
    zx: float
    zy: float
    c1: float
    c2: float
    t: float

    @property
    def key(self):
        return (self.m1, self.mu1, self.m2, self.mu2, self.lam)

    def row(self):
        return (self.N, self.m1, self.mu1, self.m2, self.mu2, self.lam,
                self.s1, self.s2, self.zx, self.zy, self.c1, self.c2, self.t)


def _canonical_sign(g):
    (a, b), (c, d) = g
    if c < 0 or (c == 0 and d < 0):
        return ((-a, -b), (-c, -d))
    return g


def reduce_sl2(zx, zy, max_steps: int = 10_000):
    """Move z = zx + i zy into the standard fundamental domain.

    Returns ``(zx', zy', gamma)`` with ``gamma . z = z'``, ``-1/2 <= zx' < 1/2``
    and ``|z'| >= 1``. Exact when given Fractions.
    """
    if zy <= 0:
        raise ValueError("z must lie in the upper half plane")
    a, b, c, d = 1, 0, 0, 1
    for _ in range(max_steps):
        n = math.floor(zx + Fraction(1, 2) if isinstance(zx, Fraction) else zx + 0.5)
        if n:
            zx -= n
            a, b = a - n * c, b - n * d
        r2 = zx * zx + zy * zy
        if r2 < 1:
            zx, zy = -zx / r2, zy / r2
            a, b, c, d = -c, -d, a, b
            continue
        if zx >= 0.5:  # float rounding can leave zx at exactly 1/2
            zx -= 1
            a, b = a - c, b - d
        return zx, zy, _canonical_sign(((a, b), (c, d)))
    raise NonConvergence(f"no reduction after {max_steps} steps")


def affine_fiber_coords(v, M, gamma):
    """c = v M^{-1} gamma^{-1} mod 1.

    The sign of gamma is fixed so that gamma*M has canonical bottom row; this
    makes c invariant under (M, v) -> (g M, w M + v) for integer (g, w).
    """
    M = np.asarray(M, dtype=float)
    det = np.linalg.det(M)
    if abs(det) < 1e-300:
        raise SingularM("M is singular")
    g = np.asarray(gamma, dtype=float)
    gm = g @ M
    if gm[1, 0] < 0 or (gm[1, 0] == 0 and gm[1, 1] < 0):
        g = -g
    (a, b), (c, d) = g
    ginv = np.array([[d, -b], [-c, a]])
    w = np.asarray(v, dtype=float) @ np.linalg.inv(M) @ ginv
    return tuple(float(x) for x in np.mod(w, 1.0) % 1.0)


def asl_datum(I: IdealHNF, F: CubicPoly):
    """(M, v) of the P0 factor of the normalised ideal basis, as floats.

    The basis rows of a content-one ideal, scaled by (m1^2 m2)^(-1/3), factor
    as P * a(t) with t = log(m1^2 m2)/6 and P = [[1, v], [0, M]],
    M = [[m2^-1/2, -mu2 m2^-1/2], [0, m2^1/2]],
    v = (e / (m1 m2^1/2), lambda / (m1 m2^1/2)), e = (mu1 + a1) mod m1.
    """
    r = math.sqrt(I.m2)
    M = np.array([[1 / r, -I.mu2 / r], [0.0, r]])
    e = (I.mu1 + F.a1) % I.m1
    v = np.array([e / (I.m1 * r), I.lam / (I.m1 * r)])
    return M, v


def _fiber_exact(I: IdealHNF, F: CubicPoly, gamma):
    """Exact c for the datum of :func:`asl_datum` (v M^{-1} is rational)."""
    e = (I.mu1 + F.a1) % I.m1
    w1 = Fraction(e, I.m1)
    w2 = Fraction(I.lam + I.mu2 * e, I.m1 * I.m2)
    (a, b), (c, d) = gamma
    c1 = (w1 * d - w2 * c) % 1
    c2 = (-w1 * b + w2 * a) % 1
    return float(c1), float(c2)


def ideal_rows_of(xi: OrderElement, class_basis, F: CubicPoly):
    """Power-basis rows of xi * I for I spanned by ``class_basis``."""
    out = []
    for b in class_basis:
        p = mul(xi, b, F)
        if not p.is_integral:
            raise NotSublattice(f"xi * {b} = {p} is not integral")
        out.append(p.row())
    return out


def point_from_ideal(I: IdealHNF, s1: float, s2: float, F: CubicPoly) -> IntersectionPoint:
    if I.a != 1:
        raise NotSublattice(f"ideal has content {I.a}; xi is not primitive")
    zx, zy, gamma = reduce_sl2(Fraction(-I.mu2, I.m2), Fraction(1, I.m2))
    c1, c2 = _fiber_exact(I, F, gamma)
    N = I.m1 * I.m1 * I.m2
    return IntersectionPoint(N, I.m1, I.mu1, I.m2, I.mu2, I.lam, s1, s2,
                             float(zx), float(zy), c1, c2, math.log(N) / 6)


def intersection_point(dp: DomainPoint, U: UnitSystem, class_basis,
                       F: CubicPoly) -> IntersectionPoint:
    """Intersection point of a reduced totally positive xi (class basis spans I_l)."""
    I = hnf_reduce(ideal_rows_of(dp.xi, class_basis, F), F)
    return point_from_ideal(I, dp.s1, dp.s2, F)


def intersection_of(xi: OrderElement, U: UnitSystem, class_basis, F: CubicPoly):
    """Same as :func:`intersection_point` but reduces xi into D first."""
    dp, _ = reduce_to_domain(xi, U, F)
    return intersection_point(dp, U, class_basis, F)


PRINCIPAL = [from_row((1, 0, 0)), from_row((0, 1, 0)), from_row((0, 0, 1))]


def sort_key(p: IntersectionPoint):
    return (p.t, p.m1, p.mu1, p.m2, p.mu2, p.lam)


def compute_points(F: CubicPoly, U: UnitSystem, X: int, classes=None):
    """All intersection points with m1^2 m2 <= X over the given classes.

    ``classes`` is a list of ``(class_basis, inverse_basis, class_norm)``;
    the default is the principal class only.
    """
    if classes is None:
        classes = [(PRINCIPAL, PRINCIPAL, 1)]
    pts = []
    for cls_basis, inv_basis, cls_norm in classes:
        for dp in enumerate_domain(F, U, inv_basis, X, class_norm=cls_norm):
            pts.append(intersection_point(dp, U, cls_basis, F))
    pts.sort(key=sort_key)
    return pts


def format_real(x: float) -> str:
    """15 significant digits, positional notation."""
    if x == 0:
        return "0"
    return np.format_float_positional(x, precision=15, unique=False,
                                      fractional=False, trim="-")


def write_csv(points, fh):
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for p in points:
        fields = [str(v) if isinstance(v, int) else format_real(v) for v in p.row()]
        fh.write(",".join(fields) + "\n")


def read_csv(fh):
    import csv

    rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        out.append(IntersectionPoint(
            int(r["N"]), int(r["m1"]), int(r["mu1"]), int(r["m2"]), int(r["mu2"]),
            int(r["lambda"]), float(r["s1"]), float(r["s2"]), float(r["zx"]),
            float(r["zy"]), float(r["c1"]), float(r["c2"]), float(r["t"])))
    return out
