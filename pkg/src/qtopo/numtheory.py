"""Exact modular arithmetic, quadratic characters, and scalar Gauss sums.

Everything here is desk-scale number theory: moduli are odd primes or odd
prime powers, small enough that O(sqrt(k)) and O(k) algorithms are instant.
Phases are always derived from an exact integer residue, reduced modulo k
before the single conversion to a float angle, so sums stay accurate for
moduli up to 2**31.

All functions are pure and all value types immutable; safe for concurrent
use from any number of threads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

# Witness set making Miller-Rabin deterministic for n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n == w:
            return True
        if n % w == 0:
            return False
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_odd_prime(k: int) -> None:
    if k < 3 or k % 2 == 0 or not is_prime(k):
        raise ValueError(f"modulus {k} is not an odd prime")


def _prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division (desk-scale n)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class ModK:
    """Residue arithmetic context for a modulus k = p**e, p an odd prime."""

    k: int
    p: int
    e: int

    def __post_init__(self) -> None:
        if self.p < 3 or self.p % 2 == 0 or not is_prime(self.p):
            raise ValueError(f"base {self.p} is not an odd prime")
        if self.e < 1 or self.p**self.e != self.k:
            raise ValueError(f"modulus {self.k} is not {self.p}**{self.e}")

    @classmethod
    def from_modulus(cls, k: int) -> "ModK":
        """Build the context from k alone; rejects k that is not an odd prime power."""
        if k < 3 or k % 2 == 0:
            raise ValueError(f"modulus {k} must be an odd prime power >= 3")
        p = 3
        while p * p <= k:
            if k % p == 0:
                break
            p += 2
        else:
            p = k
        e = 0
        n = k
        while n % p == 0:
            n //= p
            e += 1
        if n != 1:
            raise ValueError(f"modulus {k} is not a power of a single odd prime")
        return cls(k=k, p=p, e=e)

    def reduce(self, n: int) -> int:
        """Canonical representative of n in [0, k)."""
        return n % self.k

    def valuation(self, n: int) -> int:
        """p-adic valuation of n mod k, capped at e (the valuation of 0)."""
        n %= self.k
        if n == 0:
            return self.e
        v = 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v


@dataclass(frozen=True)
class Character:
    """Legendre-symbol character table for an odd prime modulus.

    table[n] is +1 on nonzero quadratic residues, -1 on non-residues and
    0 at n = 0.
    """

    k: int
    table: tuple[int, ...]

    @classmethod
    def legendre(cls, k: int) -> "Character":
        _require_odd_prime(k)
        table = tuple(legendre_chi(n, k) for n in range(k))
        return cls(k=k, table=table)

    def __call__(self, n: int) -> int:
        return self.table[n % self.k]


def legendre_chi(n: int, k: int) -> int:
    """Legendre symbol (n/k) for an odd prime k, via Euler's criterion.

    Returns +1 for nonzero quadratic residues, -1 for non-residues, 0 when
    k divides n.
    """
    _require_odd_prime(k)
    n %= k
    if n == 0:
        return 0
    r = pow(n, (k - 1) // 2, k)
    return -1 if r == k - 1 else r


def primitive_root(k: int) -> int:
    """Smallest generator of the multiplicative group mod an odd prime k."""
    _require_odd_prime(k)
    factors = _prime_factors(k - 1)
    for g in range(2, k):
        if all(pow(g, (k - 1) // q, k) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root found for {k}")  # unreachable for prime k


def is_generator(g: int, k: int) -> bool:
    """Whether g generates the multiplicative group mod the odd prime k."""
    _require_odd_prime(k)
    g %= k
    if g == 0:
        return False
    return all(pow(g, (k - 1) // q, k) != 1 for q in _prime_factors(k - 1))


def discrete_log(n: int, g: int, k: int) -> int:
    """Exponent x in [0, k-1) with g**x = n (mod k), by baby-step/giant-step.

    O(sqrt(k)) time and space. g must be a generator of the group; n must
    be nonzero mod k.
    """
    _require_odd_prime(k)
    n %= k
    if n == 0:
        raise ValueError("discrete log of 0 is undefined")
    if not is_generator(g, k):
        raise ValueError(f"{g} is not a generator mod {k}")
    order = k - 1
    step = math.isqrt(order) + 1
    baby = {}
    cur = 1
    for j in range(step):
        baby.setdefault(cur, j)
        cur = cur * g % k
    giant = pow(g, -step, k)
    y = n
    for i in range(step + 1):
        if y in baby:
            return (i * step + baby[y]) % order
        y = y * giant % k
    raise ValueError(f"discrete log of {n} base {g} mod {k} not found")  # unreachable


def gauss_sum_brute(k: int, a: int) -> complex:
    """Quadratic Gauss sum over n in [0, k) with negative exponent convention.

    Sums exp(-2*pi*i * a*n**2 / k) by direct enumeration, reducing a*n**2
    modulo k in exact integer arithmetic before the angle conversion. Any
    modulus k >= 2 is accepted so the function can serve as an oracle.
    """
    if k < 2:
        raise ValueError(f"modulus {k} must be >= 2")
    a %= k
    step = -2.0 * math.pi / k
    acc = 0.0 + 0.0j
    for n in range(k):
        acc += cmath.exp(1j * (step * (a * n * n % k)))
    return acc


def gauss_sum_closed(k: int, a: int) -> complex:
    """Closed form of the quadratic Gauss sum for an odd prime modulus.

    Equals chi(a) * conj(eps_k) * sqrt(k), where eps_k is 1 for k = 1 (mod 4)
    and i for k = 3 (mod 4); the conjugate matches the negative exponent
    convention of gauss_sum_brute. Requires gcd(a, k) = 1.
    """
    _require_odd_prime(k)
    if math.gcd(a, k) != 1:
        raise ValueError(f"a={a} is not coprime to k={k}")
    eps_conj = 1.0 + 0.0j if k % 4 == 1 else -1.0j
    return legendre_chi(a, k) * eps_conj * math.sqrt(k)


def kirby_phase(k: int) -> float:
    """Phase 3*pi*(k-2)/(4*k) picked up per elementary framed-link move."""
    if k < 2:
        raise ValueError(f"level {k} must be >= 2")
    return 3.0 * math.pi * (k - 2) / (4.0 * k)
