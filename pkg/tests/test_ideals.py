import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubiclat.errors import NoSolution, NotSublattice, PreconditionFailed, Singular
from cubiclat.field import DEFAULT_POLY, CubicPoly, OrderElement, from_row, mul
from cubiclat.ideals import (UNIT_IDEAL, IdealHNF, enumerate_ideal_tuples, hnf, hnf_reduce,
                             ideal_from_roots, ideal_product, in_row_span, inverse_basis,
                             is_closed_under_alpha, is_ideal, lambda_from_roots,
                             solve_linear_congruence, verify_obstruction)

F = DEFAULT_POLY
# maximal orders used for the closure oracle (disc 49, 81, 148, 169)
MAXIMAL = [F, CubicPoly(0, -3, 1), CubicPoly(-1, -3, 1), CubicPoly(-1, -4, -1)]


def closed_sublattices(G, bound):
    """Oracle: every HNF sublattice of index <= bound that is closed under alpha."""
    out = []
    for d1, d2, d3 in itertools.product(range(1, bound + 1), repeat=3):
        if d1 * d2 * d3 > bound:
            continue
        for b, c, e in itertools.product(range(d2), range(d3), range(d3)):
            rows = [[d1, b, c], [0, d2, e], [0, 0, d3]]
            if is_closed_under_alpha(rows, G):
                out.append(rows)
    return out


def test_hnf_basic():
    assert hnf([[2, 0, 0], [0, 2, 0], [1, 1, 1]]) == [[1, 1, 1], [0, 2, 0], [0, 0, 2]]
    # 15(1,1,1) - 5(0,3,0) - 3(0,0,5) = (15,0,0) together with (2,0,0) gives e1
    assert hnf([[2, 0, 0], [0, 3, 0], [0, 0, 5], [1, 1, 1]]) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert hnf([[0, 0, 0]]) == []


@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=3, max_size=5))
def test_hnf_same_lattice(rows):
    H = hnf(rows)
    if len(H) < 3:
        return
    assert all(H[i][j] == 0 for i in range(3) for j in range(i))
    assert all(0 <= H[i][j] < H[j][j] for j in range(3) for i in range(j))
    assert all(in_row_span(r, H) for r in rows)
    # same index as the lattice spanned by any 3 independent input rows' gcd of minors
    minors = [abs(_det(a, b, c)) for a, b, c in itertools.combinations(rows, 3)]
    assert H[0][0] * H[1][1] * H[2][2] == math.gcd(*minors)


def _det(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def test_hnf_reduce_examples():
    assert hnf_reduce([[1, 0, 0], [0, 1, 0], [0, 0, 1]], F) == UNIT_IDEAL
    assert hnf_reduce([[1, 0, -9], [0, 1, -3], [0, 0, 13]], F) == IdealHNF(1, 1, 0, 13, 3, 4)
    right = hnf_reduce([[1, 2, 4], [0, 13, 0], [0, 0, 13]], F)
    assert (right.a, right.m1, right.mu1, right.m2, right.mu2, right.lam % 13) == (1, 13, 3, 1, 0, 4)


def test_hnf_reduce_content_and_errors():
    I = hnf_reduce([[2, 0, 0], [0, 2, 0], [0, 0, 2]], F)
    assert (I.a, I.norm) == (2, 8)
    with pytest.raises(Singular):
        hnf_reduce([[1, 0, 0], [0, 1, 0], [1, 1, 0]], F)
    with pytest.raises(NotSublattice):
        hnf_reduce([[2, 0, 0], [0, 1, 0], [0, 0, 1]], F)


def test_lambda_examples():
    for mu1 in roots_of(13):
        assert lambda_from_roots(mu1, 13, 0, 1, F) == (mu1 * mu1 + F.a1 * mu1 + F.a2) % 13
    assert lambda_from_roots(3, 13, 5, 13, F) == 95
    with pytest.raises(NoSolution):
        lambda_from_roots(3, 13, 3, 13, F)


def roots_of(m):
    return [r for r in range(m) if F(r) % m == 0]


def test_is_ideal_examples():
    assert is_ideal(UNIT_IDEAL, F)
    assert is_ideal(IdealHNF(1, 13, 3, 13, 5, 95), F)
    assert all(not is_ideal(IdealHNF(1, 13, 3, 13, 3, lam), F) for lam in range(169))
    assert is_closed_under_alpha(IdealHNF(1, 13, 3, 13, 5, 95).rows(F), F)


def test_linear_congruence():
    assert solve_linear_congruence(6, 4, 10) == (4, 5)
    assert solve_linear_congruence(0, 1, 13) is None
    assert solve_linear_congruence(0, 0, 13) == (0, 1)


@pytest.mark.parametrize("G", MAXIMAL, ids=str)
def test_lambda_formula_matches_closure_oracle(G):
    assert not _lambda_failures(G, 30)


def _lambda_failures(G, M):
    bad = []
    for m1 in range(1, M):
        r1 = [r for r in range(m1) if G(r) % m1 == 0]
        for m2 in range(1, M):
            r2 = [r for r in range(m2) if G(r) % m2 == 0]
            for mu1, mu2 in itertools.product(r1, r2):
                if math.gcd(math.gcd(m1, m2), mu1 - mu2) != 1:
                    continue
                I = ideal_from_roots(mu1, m1, mu2, m2, G)
                rows = I.rows(G)
                if not is_closed_under_alpha(rows, G) or hnf_reduce(rows, G) != I:
                    bad.append(I)
                if lambda_from_roots(mu1, m1, mu2, m2, G, shift=1) != I.lam:
                    bad.append(I)
    return bad


def test_closure_forces_lambda():
    # for each admissible root pair exactly one lambda mod m1 m2 gives an ideal
    m1, m2 = 13, 13
    for mu1, mu2 in [(3, 5), (5, 6), (6, 3)]:
        good = [lam for lam in range(m1 * m2)
                if is_closed_under_alpha(IdealHNF(1, m1, mu1, m2, mu2, lam).rows(F), F)]
        assert good == [lambda_from_roots(mu1, m1, mu2, m2, F)]


def test_enumerate_small():
    assert enumerate_ideal_tuples(F, 1) == [UNIT_IDEAL]
    tuples = enumerate_ideal_tuples(F, 13)
    assert [I.key for I in tuples] == [(1, 0, 1, 0, 0), (1, 0, 7, 5, 3), (1, 0, 13, 3, 4),
                                       (1, 0, 13, 5, 1), (1, 0, 13, 6, 3)]


def test_enumerate_matches_sublattice_oracle():
    oracle = [hnf_reduce(rows, F) for rows in closed_sublattices(F, 30)]
    content_one = sorted(I.key for I in oracle if I.a == 1)
    assert content_one == sorted(I.key for I in enumerate_ideal_tuples(F, 30))
    assert sorted(I.norm for I in oracle if I.a > 1) == [8, 27]


def test_ideal_product_examples():
    I = IdealHNF(1, 1, 0, 13, 3, 4)
    assert ideal_product(I, UNIT_IDEAL, F) == I
    primes = [ideal_from_roots(0, 1, mu, 13, F) for mu in (3, 5, 6)]
    P = ideal_product(ideal_product(primes[0], primes[1], F), primes[2], F)
    assert (P.a, P.m1, P.m2, P.norm) == (13, 1, 1, 13**3)


SMALL = enumerate_ideal_tuples(F, 200)


@given(st.sampled_from(SMALL), st.sampled_from(SMALL))
def test_ideal_product_laws(I, J):
    IJ = ideal_product(I, J, F)
    assert IJ == ideal_product(J, I, F)
    assert IJ.norm == I.norm * J.norm
    assert is_closed_under_alpha(IJ.rows(F), F)


@given(st.sampled_from(enumerate_ideal_tuples(F, 3000)))
def test_hnf_round_trip(I):
    assert hnf_reduce(I.rows(F), F) == I
    assert is_ideal(I, F)


def test_obstruction():
    assert verify_obstruction(CubicPoly(-1, -2, -8), 2, 0) is True
    with pytest.raises(PreconditionFailed):
        verify_obstruction(F, 7, 5)
    with pytest.raises(PreconditionFailed):
        verify_obstruction(F, 13, 3)


@pytest.mark.parametrize("G", MAXIMAL, ids=str)
def test_no_obstruction_instances_for_maximal_orders(G):
    for p in (q for q in range(2, 101) if all(q % d for d in range(2, q))):
        assert not any(G(mu) % (p * p) == 0 and G.deriv(mu) % p == 0 for mu in range(p))


@given(st.sampled_from(SMALL[1:]))
def test_inverse_basis(I):
    inv = inverse_basis(I.rows(F), F)
    ideal_basis = [from_row(r) for r in I.rows(F)]
    prods = [mul(x, y, F) for x in ideal_basis for y in inv]
    assert all(p.is_integral for p in prods)
    assert hnf([p.row() for p in prods]) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    # a denominator survives: I^{-1} is strictly bigger than Z[alpha]
    assert any(not b.is_integral for b in inv) or I.norm == 1
    assert isinstance(inv[0], OrderElement)
