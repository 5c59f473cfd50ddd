"""Roots of F(mu) = 0 mod m by residue scan, Hensel lifting and CRT."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotPrime
from .field import CubicPoly

# trial division is only meant for desk-scale moduli
TRIAL_DIVISION_LIMIT = 10**8


@dataclass(frozen=True)
class RootSet:
    m: int
    roots: tuple

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def factorize(m: int) -> dict:
    """Prime factorisation by trial division (``m <= TRIAL_DIVISION_LIMIT``)."""
    if m < 1:
        raise ValueError("m must be positive")
    if m > TRIAL_DIVISION_LIMIT:
        raise ValueError(f"modulus {m} above the trial-division cutoff")
    out = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _scan(F: CubicPoly, p: int):
    if p < 64:
        return [r for r in range(p) if F(r) % p == 0]
    x = np.arange(p, dtype=np.int64)
    # Horner with reductions keeps products below p^2
    v = (x + F.a1) % p
    v = (v * x + F.a2) % p
    v = (v * x + F.a3) % p
    return np.flatnonzero(v == 0).tolist()


def roots_mod_prime_power(F: CubicPoly, p: int, k: int) -> RootSet:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("k must be >= 1")
    roots = _scan(F, p)
    q = p
    for _ in range(k - 1):
        nq = q * p
        lifted = []
        for r in roots:
            d = F.deriv(r) % p
            if d:
                # unique Hensel lift
                t = (-(F(r) // q) * pow(d, -1, p)) % p
                lifted.append(r + t * q)
            else:
                lifted.extend(r + t * q for t in range(p) if F(r + t * q) % nq == 0)
        roots, q = lifted, nq
    return RootSet(q, tuple(sorted(roots)))


def _crt_combine(a: RootSet, b: RootSet) -> RootSet:
    m = a.m * b.m
    # x = r (mod a.m), x = s (mod b.m)
    inv = pow(a.m, -1, b.m) if b.m > 1 else 0
    out = [(r + a.m * (((s - r) * inv) % b.m)) % m for r in a.roots for s in b.roots]
    return RootSet(m, tuple(sorted(out)))


@lru_cache(maxsize=None)
def roots_mod_m(F: CubicPoly, m: int) -> RootSet:
    result = RootSet(1, (0,))
    for p, k in sorted(factorize(m).items()):
        result = _crt_combine(result, roots_mod_prime_power(F, p, k))
        if not result.roots:
            return RootSet(m, ())
    return result


def brute_force_roots(F: CubicPoly, m: int) -> RootSet:
    """Exhaustive residue scan, the oracle for :func:`roots_mod_m`."""
    return RootSet(m, tuple(r for r in range(m) if F(r) % m == 0))
