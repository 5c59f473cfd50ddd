"""Ideals of Z[alpha] in Hermite normal form coordinates (a; m1, mu1, m2, mu2, lambda).

An ideal with these coordinates has the basis rows (w.r.t. alpha^2, alpha, 1)::

    a * [[1, e,  lambda    ],
         [0, m1, -mu2 * m1 ],
         [0, 0,  m1 * m2   ]]

with ``e = (mu1 + a1) mod m1``. The residues mu1, mu2, lambda are kept in
[0, m1), [0, m2), [0, m1*m2); lambda is computed with the representative
``e - a1`` of mu1, which is what makes it agree with the lattice entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .congruence import is_prime, roots_mod_m
from .errors import NoSolution, NotSublattice, PreconditionFailed, Singular
from .field import ALPHA, CubicPoly, OrderElement, from_row, mul


# ---------------------------------------------------------------------------
# integer Hermite normal form

def hnf(rows, ncols: int = 3):
    """Row-style HNF: upper triangular, positive pivots, entries above a pivot in [0, pivot).

    Zero rows are dropped. Works on arbitrary Python ints.
    """
    A = [list(r) for r in rows if any(r)]
    piv_row = 0
    for col in range(ncols):
        # Euclid on column ``col`` among rows piv_row..end
        while True:
            nz = [i for i in range(piv_row, len(A)) if A[i][col] != 0]
            if not nz:
                break
            i_min = min(nz, key=lambda i: abs(A[i][col]))
            A[piv_row], A[i_min] = A[i_min], A[piv_row]
            p = A[piv_row][col]
            done = True
            for i in range(piv_row + 1, len(A)):
                q = A[i][col] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[piv_row])]
                if A[i][col]:
                    done = False
            if done:
                break
        if piv_row < len(A) and A[piv_row][col] != 0:
            if A[piv_row][col] < 0:
                A[piv_row] = [-x for x in A[piv_row]]
            p = A[piv_row][col]
            for i in range(piv_row):
                q = A[i][col] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[piv_row])]
            piv_row += 1
    return [r for r in A if any(r)]


def in_row_span(vec, H) -> bool:
    """Membership of an integer vector in the lattice spanned by a full-rank HNF."""
    v = list(vec)
    for k, row in enumerate(H):
        p = row[k]
        if v[k] % p:
            return False
        q = v[k] // p
        v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def is_closed_under_alpha(rows, F: CubicPoly) -> bool:
    """Direct ideal test: alpha * (each basis row) lies in the row span."""
    H = hnf(rows)
    if len(H) < 3:
        raise Singular("lattice is not full rank")
    return all(in_row_span(mul(ALPHA, from_row(r), F).row(), H) for r in H)


# ---------------------------------------------------------------------------
# ideal coordinates

@dataclass(frozen=True, order=True)
class IdealHNF:
    a: int
    m1: int
    mu1: int
    m2: int
    mu2: int
    lam: int

    @property
    def norm(self) -> int:
        return self.a**3 * self.m1**2 * self.m2

    @property
    def key(self):
        """The content-free tuple (m1, mu1, m2, mu2, lambda)."""
        return (self.m1, self.mu1, self.m2, self.mu2, self.lam)

    def rows(self, F: CubicPoly):
        a, m1, m2 = self.a, self.m1, self.m2
        return [[a, a * ((self.mu1 + F.a1) % m1), a * self.lam],
                [0, a * m1, -a * self.mu2 * m1],
                [0, 0, a * m1 * m2]]

    def basis(self, F: CubicPoly):
        return [from_row(r) for r in self.rows(F)]


UNIT_IDEAL = IdealHNF(1, 1, 0, 1, 0, 0)


def hnf_reduce(rows, F: CubicPoly) -> IdealHNF:
    """Canonical ideal coordinates of the lattice spanned by ``rows``."""
    H = hnf(rows)
    if len(H) < 3:
        raise Singular("rows do not span a full-rank lattice")
    d1, d2, d3 = H[0][0], H[1][1], H[2][2]
    if d2 % d1 or d3 % d2:
        raise NotSublattice(f"diagonal ({d1}, {d2}, {d3}) is not (a, a m1, a m1 m2)")
    a = d1
    if any(x % a for r in H for x in r):
        raise NotSublattice(f"content {a} does not divide every entry")
    H = [[x // a for x in r] for r in H]
    m1, m12 = H[1][1], H[2][2]
    m2 = m12 // m1
    if H[1][2] % m1:
        raise NotSublattice("entry (2,3) is not a multiple of m1")
    mu2 = (-(H[1][2] // m1)) % m2
    mu1 = (H[0][1] - F.a1) % m1
    # HNF already has entry (1,2) in [0, m1); row2 becomes (0, m1, -mu2 m1)
    # by adding a multiple of row3, which leaves row1 alone mod m1*m2
    lam = H[0][2] % m12
    return IdealHNF(a, m1, mu1, m2, mu2, lam)


def _bezout(x: int, y: int):
    """(u, v) with u*x + v*y = gcd(x, y)."""
    u0, u1, v0, v1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    return u0, v0


def solve_linear_congruence(a: int, b: int, n: int):
    """Solutions of a*x = b (mod n) as (x0, step), or None."""
    g = math.gcd(a, n)
    if b % g:
        return None
    step = n // g
    if step == 1:
        return 0, 1
    x0 = (b // g) * pow(a // g, -1, step) % step
    return x0, step


def lambda_from_roots(mu1: int, m1: int, mu2: int, m2: int, F: CubicPoly,
                      shift: int = 0) -> int:
    """lambda mod m1*m2 for the roots mu1 mod m1, mu2 mod m2.

    ``shift`` moves to another Bezout pair ``(mbar1 + t*m2/g, mbar2 - t*m1/g)``;
    the result must not depend on it.
    """
    if F(mu1) % m1 or F(mu2) % m2:
        raise NoSolution("mu_j is not a root mod m_j")
    a1, a2 = F.a1, F.a2
    mu1 = (mu1 + a1) % m1 - a1
    g = math.gcd(m1, m2)
    n1, n2 = m1 // g, m2 // g
    mbar1, mbar2 = _bezout(n1, n2)
    mbar1, mbar2 = mbar1 + shift * n2, mbar2 - shift * n1
    assert mbar1 * n1 + mbar2 * n2 == 1
    if (mu1 * mu1 + mu1 * mu2 + mu2 * mu2 + a1 * (mu1 + mu2) + a2) % g:
        raise NoSolution("quadratic compatibility condition fails mod gcd(m1, m2)")
    rhs = (F(mu1) // m1) * mbar2 + (F(mu2) // m2) * mbar1
    sol = solve_linear_congruence(mu2 - mu1, rhs, g)
    if sol is None:
        raise NoSolution(f"no kappa: ({mu2 - mu1}) kappa = {rhs} mod {g}")
    kappa = sol[0]
    lam = ((mu1 * mu1 + a1 * mu1 + a2) * mbar2 * n2
           - (mu2 * mu2 + mu1 * mu2 + a1 * mu2) * mbar1 * n1
           + kappa * n1 * m2)
    return lam % (m1 * m2)


def gcd_condition(m1: int, mu1: int, m2: int, mu2: int) -> bool:
    return math.gcd(math.gcd(m1, m2), mu1 - mu2) == 1


def is_ideal(I: IdealHNF, F: CubicPoly) -> bool:
    """gcd(m1, m2, mu1 - mu2) = 1 and lambda agrees with the root formula.

    For maximal Z[alpha] this is equivalent to closure under alpha
    (:func:`is_closed_under_alpha`).
    """
    if F(I.mu1) % I.m1 or F(I.mu2) % I.m2:
        return False
    if not gcd_condition(I.m1, I.mu1, I.m2, I.mu2):
        return False
    try:
        lam = lambda_from_roots(I.mu1, I.m1, I.mu2, I.m2, F)
    except NoSolution:
        return False
    return lam == I.lam % (I.m1 * I.m2)


def ideal_from_roots(mu1: int, m1: int, mu2: int, m2: int, F: CubicPoly) -> IdealHNF:
    lam = lambda_from_roots(mu1, m1, mu2, m2, F)
    return IdealHNF(1, m1, mu1 % m1, m2, mu2 % m2, lam)


def lattice_product(A, B, F: CubicPoly):
    """HNF of the Z-span of the nine products of the rows of A and B."""
    prods = [mul(from_row(x), from_row(y), F).row() for x in A for y in B]
    H = hnf(prods)
    if len(H) < 3:
        raise Singular("product lattice is degenerate")
    return H


def ideal_product(I: IdealHNF, J: IdealHNF, F: CubicPoly) -> IdealHNF:
    return hnf_reduce(lattice_product(I.rows(F), J.rows(F), F), F)


def obstruction_matrices(F: CubicPoly, p: int, mu: int):
    """The two degree-one lattices attached to a root mu mod p."""
    left = [[1, 0, -mu * mu], [0, 1, -mu], [0, 0, p]]
    right = [[1, mu + F.a1, mu * mu + F.a1 * mu + F.a2], [0, p, 0], [0, 0, p]]
    return left, right


def verify_obstruction(F: CubicPoly, p: int, mu: int) -> bool:
    """Check I1*I2 == p*I1 exactly for a root mu with F(mu)=0 mod p^2, F'(mu)=0 mod p."""
    if not is_prime(p):
        raise PreconditionFailed(f"{p} is not prime")
    if F(mu) % (p * p):
        raise PreconditionFailed(f"F({mu}) = {F(mu)} is not 0 mod {p * p}")
    if F.deriv(mu) % p:
        raise PreconditionFailed(f"F'({mu}) = {F.deriv(mu)} is not 0 mod {p}")
    left, right = obstruction_matrices(F, p, mu)
    prod = lattice_product(left, right, F)
    return prod == hnf([[p * x for x in r] for r in left])


def enumerate_ideal_tuples(F: CubicPoly, X: int):
    """All content-one ideals of norm m1^2 m2 <= X, sorted by (norm, key)."""
    out = []
    m1 = 1
    while m1 * m1 <= X:
        r1 = roots_mod_m(F, m1).roots
        if r1:
            for m2 in range(1, X // (m1 * m1) + 1):
                r2 = roots_mod_m(F, m2).roots
                if not r2:
                    continue
                g = math.gcd(m1, m2)
                for mu1 in r1:
                    for mu2 in r2:
                        if math.gcd(g, mu1 - mu2) != 1:
                            continue
                        lam = lambda_from_roots(mu1, m1, mu2, m2, F)
                        out.append(IdealHNF(1, m1, mu1, m2, mu2, lam))
        m1 += 1
    out.sort(key=lambda I: (I.norm, I.key))
    return out


# ---------------------------------------------------------------------------
# inverse ideals

def inverse_basis(rows, F: CubicPoly):
    """A Z-basis (three rational OrderElements) of the inverse of an integral ideal.

    Uses I^{-1} = (1/n) {y in Z[alpha] : y I in n Z[alpha]} with n = N(I).
    """
    H = hnf(rows)
    n = H[0][0] * H[1][1] * H[2][2]
    basis = [from_row(r) for r in H]
    # constraint matrix: e_k -> coordinates of e_k * beta_j, for k over (a^2, a, 1)
    unit_rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    cons = []
    for e in unit_rows:
        cons.append([c for b in basis for c in mul(from_row(e), b, F).row()])
    # kernel of Z^3 -> (Z/n)^9 via HNF of [[I3 | C], [0 | n I9]]
    big = [list(e) + c for e, c in zip(unit_rows, cons)]
    for j in range(9):
        big.append([0, 0, 0] + [n if i == j else 0 for i in range(9)])
    K = hnf([r[3:] + r[:3] for r in big], ncols=12)
    ker = [r[9:] for r in K if not any(r[:9])]
    ker = hnf(ker)
    if len(ker) != 3:
        raise Singular("could not compute the inverse ideal")
    return [from_row(r, n) for r in ker]
