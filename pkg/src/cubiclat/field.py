"""Exact arithmetic in Z[alpha] for a monic cubic F, plus its real embeddings.

Elements are stored in the power basis ``c0 + c1*alpha + c2*alpha**2``.
Lattice code elsewhere uses the row order ``(alpha**2, alpha, 1)``; see
:meth:`OrderElement.row` and :func:`from_row`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import NotTotallyReal


@dataclass(frozen=True)
class CubicPoly:
    """F(X) = X^3 + a1 X^2 + a2 X + a3."""

    a1: int
    a2: int
    a3: int

    @cached_property
    def disc(self) -> int:
        return discriminant(self)

    @property
    def coeffs(self):
        return (self.a1, self.a2, self.a3)

    def __call__(self, x):
        return ((x + self.a1) * x + self.a2) * x + self.a3

    def deriv(self, x):
        return (3 * x + 2 * self.a1) * x + self.a2

    def __str__(self):
        return f"{self.a1},{self.a2},{self.a3}"


DEFAULT_POLY = CubicPoly(-1, -2, 1)


def parse_poly(text: str) -> CubicPoly:
    """Parse the ``"a1,a2,a3"`` input format (monic implied)."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected 'a1,a2,a3', got {text!r}")
    return CubicPoly(*(int(p) for p in parts))


def discriminant(F: CubicPoly) -> int:
    a1, a2, a3 = F.coeffs
    return (18 * a1 * a2 * a3 - 4 * a1**3 * a3 + a1**2 * a2**2
            - 4 * a2**3 - 27 * a3**2)


def _divisors(n: int):
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def is_irreducible(F: CubicPoly) -> bool:
    # a monic cubic over Q is reducible iff it has an integer root dividing a3
    if F.a3 == 0:
        return False
    return not any(F(s * d) == 0 for d in _divisors(F.a3) for s in (1, -1))


# ---------------------------------------------------------------------------
# elements

@dataclass(frozen=True)
class OrderElement:
    """``(c0 + c1*alpha + c2*alpha^2) / den`` with ``den > 0`` in lowest terms."""

    c0: int
    c1: int
    c2: int
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(math.gcd(self.c0, self.c1), math.gcd(self.c2, self.den))
        if g > 1:
            object.__setattr__(self, "c0", self.c0 // g)
            object.__setattr__(self, "c1", self.c1 // g)
            object.__setattr__(self, "c2", self.c2 // g)
            object.__setattr__(self, "den", self.den // g)

    @property
    def coeffs(self):
        return (self.c0, self.c1, self.c2)

    @property
    def is_integral(self) -> bool:
        return self.den == 1

    def row(self):
        """Integer coordinates w.r.t. ``(alpha^2, alpha, 1)``; requires den == 1."""
        if self.den != 1:
            raise ValueError("row() needs an integral element")
        return (self.c2, self.c1, self.c0)

    def __add__(self, other: OrderElement) -> OrderElement:
        d = self.den * other.den
        return OrderElement(self.c0 * other.den + other.c0 * self.den,
                            self.c1 * other.den + other.c1 * self.den,
                            self.c2 * other.den + other.c2 * self.den, d)

    def __neg__(self):
        return OrderElement(-self.c0, -self.c1, -self.c2, self.den)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> OrderElement:
        k = Fraction(k)
        return OrderElement(self.c0 * k.numerator, self.c1 * k.numerator,
                            self.c2 * k.numerator, self.den * k.denominator)

    def embed(self, roots) -> np.ndarray:
        r = np.asarray(roots, dtype=float)
        return (self.c0 + self.c1 * r + self.c2 * r * r) / self.den

    def __str__(self):
        s = f"{self.c0},{self.c1},{self.c2}"
        return s if self.den == 1 else f"({s})/{self.den}"


ONE = OrderElement(1, 0, 0)
ALPHA = OrderElement(0, 1, 0)


def from_row(row, den: int = 1) -> OrderElement:
    """Inverse of :meth:`OrderElement.row`."""
    return OrderElement(row[2], row[1], row[0], den)


def parse_element(text: str) -> OrderElement:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected 'c0,c1,c2', got {text!r}")
    return OrderElement(*parts)


def mul(x: OrderElement, y: OrderElement, F: CubicPoly) -> OrderElement:
    a1, a2, a3 = F.coeffs
    p0 = x.c0 * y.c0
    p1 = x.c0 * y.c1 + x.c1 * y.c0
    p2 = x.c0 * y.c2 + x.c1 * y.c1 + x.c2 * y.c0
    p3 = x.c1 * y.c2 + x.c2 * y.c1
    p4 = x.c2 * y.c2
    # alpha^3 = -a1 a^2 - a2 a - a3
    # alpha^4 = (a1^2 - a2) a^2 + (a1 a2 - a3) a + a1 a3
    c0 = p0 - a3 * p3 + a1 * a3 * p4
    c1 = p1 - a2 * p3 + (a1 * a2 - a3) * p4
    c2 = p2 - a1 * p3 + (a1 * a1 - a2) * p4
    return OrderElement(c0, c1, c2, x.den * y.den)


def power(x: OrderElement, n: int, F: CubicPoly) -> OrderElement:
    if n < 0:
        return power(inverse(x, F), -n, F)
    result, base = ONE, x
    while n:
        if n & 1:
            result = mul(result, base, F)
        base = mul(base, base, F)
        n >>= 1
    return result


def mult_matrix(x: OrderElement, F: CubicPoly):
    """Integer matrix (numerators) of multiplication by x on the basis (1, alpha, alpha^2).

    Row i holds the coordinates of ``x * alpha^i``; divide by ``x.den``.
    """
    num = OrderElement(x.c0, x.c1, x.c2)
    rows = [num]
    for _ in range(2):
        rows.append(mul(rows[-1], ALPHA, F))
    return [list(r.coeffs) for r in rows]


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def norm_trace(x: OrderElement, F: CubicPoly):
    m = mult_matrix(x, F)
    norm = Fraction(_det3(m), x.den**3)
    trace = Fraction(m[0][0] + m[1][1] + m[2][2], x.den)
    return norm, trace


def norm(x: OrderElement, F: CubicPoly) -> Fraction:
    return norm_trace(x, F)[0]


def inverse(x: OrderElement, F: CubicPoly) -> OrderElement:
    """Exact inverse in Q(alpha) via the adjugate of the multiplication matrix."""
    m = mult_matrix(x, F)
    d = _det3(m)
    if d == 0:
        raise ZeroDivisionError("element is zero")
    # y * M = e0 for the row vector y, so y is the first row of M^{-1}
    y = [_cofactor(m, j, 0) for j in range(3)]
    sign = 1 if d > 0 else -1
    return OrderElement(sign * y[0] * x.den, sign * y[1] * x.den,
                        sign * y[2] * x.den, abs(d))


def _cofactor(m, i, j):
    r = [k for k in range(3) if k != i]
    c = [k for k in range(3) if k != j]
    minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
    return minor if (i + j) % 2 == 0 else -minor


# ---------------------------------------------------------------------------
# real embeddings

@dataclass(frozen=True)
class EmbeddingTriple:
    """Three real images with an absolute error bound on each."""

    e1: float
    e2: float
    e3: float
    err: float

    def __iter__(self):
        return iter((self.e1, self.e2, self.e3))

    def as_array(self) -> np.ndarray:
        return np.array([self.e1, self.e2, self.e3])


def _sign_exact(F: CubicPoly, x: float) -> int:
    v = F(Fraction(x))
    return (v > 0) - (v < 0)


def _bisect(F: CubicPoly, lo: float, hi: float, eps: float):
    """Shrink a sign-change bracket (F(lo) < 0 < F(hi) or reversed) to width eps."""
    slo = _sign_exact(F, lo)
    while hi - lo > eps:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # adjacent doubles
        s = _sign_exact(F, mid)
        if s == 0:
            return mid, mid
        if s == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def real_roots(F: CubicPoly, eps: float = 1e-12) -> EmbeddingTriple:
    """Descending real roots, each certified within ``err <= eps`` of a true root."""
    if F.disc <= 0:
        raise NotTotallyReal(f"disc({F}) = {F.disc} <= 0")
    a1, a2, _ = F.coeffs
    s = math.sqrt(a1 * a1 - 3 * a2)
    crit = sorted(((-a1 - s) / 3, (-a1 + s) / 3))
    bound = 1.0 + max(abs(c) for c in F.coeffs)
    # F(-bound) < 0 < F(crit_lo), F(crit_hi) < 0 < F(bound)
    pts = [-bound, crit[0], crit[1], bound]
    signs = [_sign_exact(F, p) for p in pts]
    if signs != [-1, 1, -1, 1]:
        # critical points too crude; fall back to numpy root separation
        approx = sorted(np.roots([1, a1, a2, F.a3]).real)
        pts = [-bound, 0.5 * (approx[0] + approx[1]),
               0.5 * (approx[1] + approx[2]), bound]
        signs = [_sign_exact(F, p) for p in pts]
        if signs != [-1, 1, -1, 1]:
            raise NotTotallyReal(f"could not isolate the roots of {F}")
    roots, err = [], 0.0
    for lo, hi in zip(pts, pts[1:]):
        lo, hi = _bisect(F, lo, hi, eps)
        x = 0.5 * (lo + hi)
        for _ in range(3):
            d = F.deriv(x)
            if d == 0:
                break
            x = x - F(x) / d
        if not lo <= x <= hi:
            x = 0.5 * (lo + hi)
        roots.append(x)
        err = max(err, hi - lo)
    roots.sort(reverse=True)
    return EmbeddingTriple(roots[0], roots[1], roots[2], err)


# ---------------------------------------------------------------------------
# maximality

def _factor_small(n: int):
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _polyval(c, x):
    # c lists coefficients from the constant term upward
    v = 0
    for a in reversed(c):
        v = v * x + a
    return v


def _dedekind_fails(F: CubicPoly, p: int) -> bool:
    roots = [r for r in range(p) if F(r) % p == 0]
    # multiplicities from the derivatives mod p
    repeated = [r for r in roots if F.deriv(r) % p == 0]
    if not repeated:
        return False
    r = repeated[0]  # a cubic has at most one repeated factor mod p
    if (3 * r + F.a1) % p == 0:
        g, h = [-r, 1], _polymul([-r, 1], [-r, 1])  # (x-r)^3
    else:
        other = (-F.a1 - 2 * r) % p
        g, h = _polymul([-r, 1], [-other, 1]), [-r, 1]  # (x-r)^2 (x-s)
    gh = _polymul(g, h)
    f = [a - b for a, b in zip([F.a3, F.a2, F.a1, 1], gh)]
    assert all(c % p == 0 for c in f)
    f = [c // p for c in f]
    return _polyval(f, r) % p == 0


def maximality_check(F: CubicPoly) -> list:
    """Primes p with p^2 | disc(F) at which Dedekind's criterion fails."""
    d = F.disc
    if d == 0:
        raise ValueError("F has a repeated root")
    return [p for p, e in sorted(_factor_small(d).items())
            if e >= 2 and _dedekind_fails(F, p)]


# ---------------------------------------------------------------------------
# basis matrices

@dataclass(frozen=True)
class BasisMatrix:
    mat: np.ndarray = field(repr=False)
    err: float
    role: str = "g0"

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.mat))

    @property
    def det_err(self) -> float:
        """First-order bound on |det error| from the entrywise error."""
        cof = np.linalg.det(self.mat) * np.linalg.inv(self.mat).T
        return float(np.abs(cof).sum() * self.err)

    def det_ok(self, eps: float) -> bool:
        return abs(self.det - 1.0) + self.det_err <= eps


def basis_matrix(rows, roots: EmbeddingTriple, covolume: float, role: str,
                 den: int = 1) -> BasisMatrix:
    """Embedding matrix of three elements (``(alpha^2, alpha, 1)`` rows over ``den``).

    Rescaled by ``covolume**(-1/3)`` where ``covolume`` is the exact value of
    the determinant (``sqrt(disc) * index / den^3``), so a bad root
    approximation shows up as a determinant defect instead of being absorbed.
    """
    r = roots.as_array()
    vand = np.vstack([r * r, r, np.ones(3)])
    rows = np.asarray(rows, dtype=float)
    scale = covolume ** (-1.0 / 3.0)
    m = rows @ vand / den * scale
    # entry error from root error: d/dr of (r^2, r, 1)
    deriv = np.array([2 * np.abs(r).max() + roots.err, 1.0, 0.0])
    err = float((np.abs(rows) @ deriv).max() * roots.err * scale / den)
    return BasisMatrix(m, err, role)


def basis_matrix_g0(F: CubicPoly, eps: float = 1e-12) -> BasisMatrix:
    """Rows (alpha^2, alpha, 1) at the descending roots, scaled by disc^(-1/6)."""
    roots = real_roots(F, eps)
    return basis_matrix(np.eye(3), roots, math.sqrt(F.disc), "g0")
