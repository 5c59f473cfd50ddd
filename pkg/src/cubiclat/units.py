"""Totally positive units, the log-lattice fundamental domain D, and enumeration in D.

D is taken as the cone over the parallelogram ``{s1 l(eps1) + s2 l(eps2)}``
in the trace-zero plane, with half-open ranges ``s in [0, 1)^2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidUnit, NotTotallyPositive, SearchExhausted
from .field import ONE, CubicPoly, EmbeddingTriple, OrderElement, mul, norm, power, real_roots

# snapping tolerance for chart coordinates sitting on the domain boundary
BOUNDARY_TOL = 1e-9


def log_embedding(x: OrderElement, roots) -> np.ndarray:
    e = x.embed(roots.as_array() if isinstance(roots, EmbeddingTriple) else roots)
    bad = [i for i, v in enumerate(e) if v <= 0]
    if bad:
        raise NotTotallyPositive(f"{x} has non-positive embedding(s) {bad}: {e[bad]}")
    return np.log(e)


@dataclass(frozen=True)
class UnitSystem:
    eps1: OrderElement
    eps2: OrderElement
    logs: np.ndarray = field(repr=False)  # 2x3, rows l(eps1), l(eps2)
    roots: EmbeddingTriple = field(repr=False)

    @property
    def logM(self) -> np.ndarray:
        """Plane coordinates (first two embeddings) of l(eps1), l(eps2)."""
        return self.logs[:, :2]

    @property
    def regulator(self) -> float:
        return abs(float(np.linalg.det(self.logM)))

    @property
    def corner_max(self) -> np.ndarray:
        """Per-embedding maximum of s1 l(eps1) + s2 l(eps2) over s in [0,1]^2."""
        corners = np.array([[0, 0], [1, 0], [0, 1], [1, 1]]) @ self.logs
        return corners.max(axis=0)

    @property
    def C_D(self) -> np.ndarray:
        return np.exp(self.corner_max)

    def chart(self, logvec) -> np.ndarray:
        """Raw (unreduced) coordinates s of the trace-zero projection of logvec(s)."""
        logvec = np.asarray(logvec, dtype=float)
        p = logvec - logvec.mean(axis=-1, keepdims=True)
        return p[..., :2] @ np.linalg.inv(self.logM)


@dataclass(frozen=True)
class DomainPoint:
    xi: OrderElement
    s1: float
    s2: float
    normN: Fraction


def _element_chart(coeffs, den, U: UnitSystem) -> np.ndarray:
    """Chart of elements given as rows (c0, c1, c2) over ``den``.

    Written with explicit elementwise operations so one element and a batch
    containing it produce bit-identical coordinates.
    """
    c = np.asarray(coeffs, dtype=float).reshape(-1, 3)
    r = U.roots.as_array()
    e = (c[:, :1] + c[:, 1:2] * r + c[:, 2:] * (r * r)) / den
    lg = np.log(e)
    p0 = lg[:, 0] - (lg[:, 0] + lg[:, 1] + lg[:, 2]) / 3
    p1 = lg[:, 1] - (lg[:, 0] + lg[:, 1] + lg[:, 2]) / 3
    Li = np.linalg.inv(U.logM)
    return np.stack([p0 * Li[0, 0] + p1 * Li[1, 0], p0 * Li[0, 1] + p1 * Li[1, 1]], axis=1)


def _reduce_chart(s):
    """Split s into (floor part k, fractional part in [0,1)) with boundary snapping."""
    k = np.floor(np.asarray(s) + BOUNDARY_TOL)
    frac = np.clip(np.asarray(s) - k, 0.0, None)
    return k.astype(np.int64), frac


# ---------------------------------------------------------------------------
# unit search

def _unit_candidates(F: CubicPoly, roots: EmbeddingTriple, H: int):
    r = roots.as_array()
    rng = np.arange(-H, H + 1)
    c0, c1, c2 = (a.ravel() for a in np.meshgrid(rng, rng, rng, indexing="ij"))
    e = c0[:, None] + c1[:, None] * r + c2[:, None] * r * r
    nrm = np.prod(e, axis=1)
    idx = np.flatnonzero(np.abs(np.abs(nrm) - 1) < 0.5)
    out = []
    for i in idx:
        x = OrderElement(int(c0[i]), int(c1[i]), int(c2[i]))
        if abs(norm(x, F)) == 1:
            out.append(x)
    return out


def _log_abs(x: OrderElement, r) -> np.ndarray:
    return np.log(np.abs(x.embed(r)))


def _lattice_basis(units, F: CubicPoly, r, tol=1e-7):
    """Basis (as exact units) of the log lattice generated by the given units.

    Start from the minimal-area pair among the shortest vectors; any unit
    with non-integral coordinates is reduced into the fundamental
    parallelogram and fed back, which strictly shrinks the area.
    """
    pool = {}
    for u in units:
        v = _log_abs(u, r)
        if np.linalg.norm(v) < tol:
            continue  # +-1
        key = tuple(np.round(v, 6))
        if key not in pool:
            pool[key] = (u, v)
    cand = sorted(pool.values(), key=lambda uv: np.linalg.norm(uv[1]))
    if len(cand) < 2:
        raise SearchExhausted("fewer than two independent units found; raise the height bound")
    short = cand[:60]
    while True:
        best = None
        for (u, v), (w, z) in itertools.combinations(short, 2):
            d = abs(v[0] * z[1] - v[1] * z[0])
            if d > tol and (best is None or d < best[0] - tol):
                best = (d, (u, v), (w, z))
        if best is None:
            raise SearchExhausted("found units are all dependent; raise the height bound")
        _, (u1, v1), (u2, v2) = best
        B = np.array([v1[:2], v2[:2]])
        Binv = np.linalg.inv(B)
        offender = None
        for u, v in cand:
            x = v[:2] @ Binv
            if np.abs(x - np.round(x)).max() > 1e-6:
                offender = (u, v, np.floor(x).astype(int))
                break
        if offender is None:
            return (u1, v1), (u2, v2)
        u, v, k = offender
        w = mul(u, mul(power(u1, -int(k[0]), F), power(u2, -int(k[1]), F), F), F)
        short.append((w, _log_abs(w, r)))


def _sign_vector(x: OrderElement, r):
    return tuple(int(s) for s in (x.embed(r) < 0))


def _totally_positive_sublattice(eta1, eta2, r, F: CubicPoly):
    """Generators of U+ given generators eta1, eta2 of U / {+-1}."""
    s1 = np.array(_sign_vector(eta1, r))
    s2 = np.array(_sign_vector(eta2, r))
    minus = np.ones(3, dtype=int)

    def positivable(a, b):
        v = (a * s1 + b * s2) % 2
        return not v.any() or not ((v + minus) % 2).any()

    good = [(a, b) for a in (0, 1) for b in (0, 1) if positivable(a, b)]
    if len(good) == 4:
        exps = [(1, 0), (0, 1)]
    elif len(good) == 1:
        exps = [(2, 0), (0, 2)]
    else:
        h = next(g for g in good if g != (0, 0))
        other = (0, 1) if h[0] == 1 else (1, 0)
        exps = [h, (2 * other[0], 2 * other[1])]
    gens = []
    for a, b in exps:
        x = mul(power(eta1, a, F), power(eta2, b, F), F)
        if (x.embed(r) < 0).all():
            x = -x
        gens.append(x)
    return gens


def _gauss_reduce(e1, e2, F: CubicPoly, r):
    v1, v2 = _log_abs(e1, r), _log_abs(e2, r)
    if np.dot(v1, v1) > np.dot(v2, v2):
        e1, e2, v1, v2 = e2, e1, v2, v1
    while True:
        mu = np.dot(v1, v2) / np.dot(v1, v1)
        if abs(mu) <= 0.5 + 1e-9:
            break
        q = int(round(mu))
        e2 = mul(e2, power(e1, -q, F), F)
        v2 = _log_abs(e2, r)
        if np.dot(v2, v2) >= np.dot(v1, v1):
            break
        e1, e2, v1, v2 = e2, e1, v2, v1
    return e1, e2


def make_unit_system(eps1: OrderElement, eps2: OrderElement, F: CubicPoly,
                     roots: EmbeddingTriple | None = None) -> UnitSystem:
    """Validate a pair of generators (norm 1, totally positive, independent)."""
    roots = roots or real_roots(F)
    for name, e in (("eps1", eps1), ("eps2", eps2)):
        if not e.is_integral:
            raise InvalidUnit(f"{name} = {e} is not in Z[alpha]")
        n = norm(e, F)
        if n != 1:
            raise InvalidUnit(f"{name} = {e} has norm {n}, not 1")
        if (e.embed(roots.as_array()) <= 0).any():
            raise InvalidUnit(f"{name} = {e} is not totally positive")
    logs = np.array([log_embedding(eps1, roots), log_embedding(eps2, roots)])
    d = np.linalg.det(logs[:, :2])
    if abs(d) < 1e-9:
        raise InvalidUnit("generators are multiplicatively dependent")
    if d < 0:
        eps1, eps2 = eps2, eps1
        logs = logs[::-1].copy()
    return UnitSystem(eps1, eps2, logs, roots)


def find_totally_positive_generators(F: CubicPoly, height_bound: int = 20,
                                     roots: EmbeddingTriple | None = None) -> UnitSystem:
    """Search units of height <= height_bound and return Gauss-reduced U+ generators.

    Fundamentality is heuristic: the basis is the smallest-area lattice the
    found units generate.
    """
    roots = roots or real_roots(F)
    r = roots.as_array()
    units = _unit_candidates(F, roots, height_bound)
    (eta1, _), (eta2, _) = _lattice_basis(units, F, r)
    e1, e2 = _totally_positive_sublattice(eta1, eta2, r, F)
    e1, e2 = _gauss_reduce(e1, e2, F, r)
    return make_unit_system(e1, e2, F, roots)


# ---------------------------------------------------------------------------
# reduction into D

def unit_power(U: UnitSystem, k1: int, k2: int, F: CubicPoly) -> OrderElement:
    return mul(power(U.eps1, k1, F), power(U.eps2, k2, F), F)


def reduce_to_domain(xi: OrderElement, U: UnitSystem, F: CubicPoly):
    """(DomainPoint, u) with xi*u in D and u in the group generated by eps1, eps2."""
    lv = log_embedding(xi, U.roots)
    k, s = _reduce_chart(U.chart(lv))
    u = unit_power(U, -int(k[0]), -int(k[1]), F)
    y = mul(xi, u, F)
    # chart of the representative itself, so every orbit member gives identical s
    _, s = _reduce_chart(_element_chart([y.coeffs], y.den, U)[0])
    return DomainPoint(y, float(s[0]), float(s[1]), norm(y, F)), u


def in_domain(xi: OrderElement, U: UnitSystem) -> bool:
    e = xi.embed(U.roots.as_array())
    if (e <= 0).any():
        return False
    s = U.chart(np.log(e))
    return bool(((s >= -BOUNDARY_TOL) & (s < 1 - BOUNDARY_TOL)).all())


# ---------------------------------------------------------------------------
# enumeration

def _basis_embeddings(basis, r):
    return np.array([b.embed(r) for b in basis])


def _common_den(basis):
    d = 1
    for b in basis:
        d = d * b.den // math.gcd(d, b.den)
    return d


def enumerate_domain(F: CubicPoly, U: UnitSystem, basis=None, X: int = 1,
                     class_norm: int = 1, chunk: int = 2_000_000):
    """All primitive totally positive xi = sum c_k basis_k in D with class_norm * N(xi) <= X.

    ``basis`` spans the inverse of the class representative (default
    1, alpha, alpha^2 for the principal class); ``class_norm`` is the norm
    of that representative, so the bound is on the norm of the ideal xi*I.
    Returns DomainPoints sorted by (norm, coordinates).
    """
    if basis is None:
        basis = [ONE, OrderElement(0, 1, 0), OrderElement(0, 0, 1)]
    r = U.roots.as_array()
    B = _basis_embeddings(basis, r)  # e = c @ B
    Y = X / class_norm
    upper = Y ** (1 / 3) * U.C_D * (1 + 1e-9)
    Binv = np.linalg.inv(B)
    # coordinate ranges from e in [0, upper]
    lo = np.floor(np.minimum(0, upper[:, None] * Binv).sum(axis=0)).astype(np.int64)
    hi = np.ceil(np.maximum(0, upper[:, None] * Binv).sum(axis=0)).astype(np.int64)

    D = _common_den(basis)
    int_basis = [(b.c0 * (D // b.den), b.c1 * (D // b.den), b.c2 * (D // b.den))
                 for b in basis]
    found = []
    c1_all = np.arange(lo[1], hi[1] + 1, dtype=np.int64)
    pending = []
    pending_n = 0

    def flush():
        nonlocal pending, pending_n
        if pending:
            found.extend(_filter_candidates(np.concatenate(pending), B, U, Y,
                                            int_basis, D, F, class_norm, X))
        pending, pending_n = [], 0

    for c0 in range(lo[0], hi[0] + 1):
        # e_i = c0 B0i + c1 B1i + c2 B2i in (0, upper_i]: interval for c2
        base = c0 * B[0][None, :] + c1_all[:, None] * B[1][None, :]
        b2 = B[2]
        with np.errstate(divide="ignore"):
            t_a = (0 - base) / b2
            t_b = (upper - base) / b2
        low = np.where(b2 > 0, t_a, t_b).max(axis=1)
        high = np.where(b2 > 0, t_b, t_a).min(axis=1)
        lo2 = np.ceil(low - 1e-9).astype(np.int64)
        hi2 = np.floor(high + 1e-9).astype(np.int64)
        cnt = np.maximum(hi2 - lo2 + 1, 0)
        tot = int(cnt.sum())
        if tot == 0:
            continue
        keep = cnt > 0
        c1v = np.repeat(c1_all[keep], cnt[keep])
        starts = np.repeat(lo2[keep], cnt[keep])
        offs = np.arange(tot) - np.repeat(np.cumsum(cnt[keep]) - cnt[keep], cnt[keep])
        c2v = starts + offs
        pending.append(np.stack([np.full(tot, c0, dtype=np.int64), c1v, c2v], axis=1))
        pending_n += tot
        if pending_n >= chunk:
            flush()
    flush()
    found.sort(key=lambda t: (t[0], t[1]))
    return [pt for _, _, pt in found]


def _filter_candidates(C, B, U, Y, int_basis, D, F, class_norm, X):
    e = C @ B
    pos = (e > 0).all(axis=1)
    C, e = C[pos], e[pos]
    nrm = e.prod(axis=1)
    ok = nrm <= Y * (1 + 1e-7)
    C, e, nrm = C[ok], e[ok], nrm[ok]
    k, s = _reduce_chart(U.chart(np.log(e)))
    inD = (k == 0).all(axis=1)
    C, s = C[inD], s[inD]
    g = np.gcd.reduce(np.abs(C), axis=1)
    prim = g == 1
    C, s = C[prim], s[prim]
    kept = []
    for c in C.tolist():
        num = [sum(ci * b[j] for ci, b in zip(c, int_basis)) for j in range(3)]
        xi = OrderElement(num[0], num[1], num[2], D)
        n = norm(xi, F)
        if n * class_norm <= X:
            kept.append((n, tuple(c), xi))
    if not kept:
        return []
    # recompute s from the reduced elements exactly as reduce_to_domain does
    dens = np.array([[xi.den] for _, _, xi in kept], dtype=float)
    _, s = _reduce_chart(_element_chart([xi.coeffs for _, _, xi in kept], dens, U))
    return [(n, c, DomainPoint(xi, float(a), float(b), n))
            for (n, c, xi), (a, b) in zip(kept, s.tolist())]
