"""Exact modular arithmetic over Z_n.

Everything here is a pure function of its integer arguments. Python integers
do not overflow, so products of two residues are always exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd as _gcd
from typing import Iterable, List, Sequence, Tuple


class NotAUnitError(ValueError):
    """Raised when an element that must be invertible mod n is not."""


@dataclass(frozen=True)
class ResidueRing:
    """The ring Z_n with n >= 2."""

    modulus: int

    def __post_init__(self) -> None:
        if not isinstance(self.modulus, int) or self.modulus < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.modulus!r}")

    def reduce(self, x: int) -> int:
        return x % self.modulus

    def is_unit(self, x: int) -> bool:
        return _gcd(x % self.modulus, self.modulus) == 1

    def units(self) -> List[int]:
        return [x for x in range(1, self.modulus) if _gcd(x, self.modulus) == 1]

    def __len__(self) -> int:
        return self.modulus


@dataclass(frozen=True)
class CongruenceSolution:
    """All solutions of a*x = b (mod n), ascending, and d = gcd(a, n)."""

    solutions: Tuple[int, ...]
    gcd_divisor: int

    def __bool__(self) -> bool:
        return bool(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


def gcd(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError("gcd arguments must be nonnegative")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return _gcd(a, b)


def extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(d, x, y)`` with ``a*x + b*y == d == gcd(a, b)``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def inverse_mod(a: int, n: int) -> int:
    d, x, _ = extended_gcd(a % n, n)
    if d != 1:
        raise NotAUnitError(f"{a} is not a unit modulo {n}")
    return x % n


def _check_elements(ring: ResidueRing, *values: int) -> None:
    for v in values:
        if not 0 <= v < ring.modulus:
            raise ValueError(f"{v} is not a reduced element of Z_{ring.modulus}")


class LinearCongruence:
    """Precomputed solver for ``a*x = b (mod n)`` with fixed ``a`` and ``n``.

    With ``d = gcd(a, n)`` the congruence is solvable iff ``d`` divides ``b``;
    then its ``d`` solutions are ``x0 + i*n/d`` for ``i < d``.
    """

    __slots__ = ("n", "d", "step", "inv")

    def __init__(self, a: int, n: int) -> None:
        self.n = n
        self.d = _gcd(a, n)  # gcd(0, n) == n
        self.step = n // self.d
        self.inv = inverse_mod(a // self.d, self.step) if self.step > 1 else 0

    def solve(self, b: int) -> range:
        if b % self.d:
            return range(0)
        x0 = (b // self.d) * self.inv % self.step if self.step > 1 else 0
        return range(x0, self.n, self.step)


def solve_linear_congruence(a: int, b: int, ring: ResidueRing) -> CongruenceSolution:
    """Solve ``a*x = b (mod n)``.

    >>> solve_linear_congruence(2, 4, ResidueRing(8)).solutions
    (2, 6)
    """
    _check_elements(ring, a, b)
    lc = LinearCongruence(a, ring.modulus)
    return CongruenceSolution(tuple(lc.solve(b)), lc.d)


def is_prime(n: int) -> bool:
    if n < 0:
        raise ValueError("is_prime expects a positive integer")
    if n == 0:
        raise ValueError("is_prime(0) is not defined here")
    if n < 4:
        return n >= 2
    if n % 2 == 0 or n % 3 == 0:
        return False
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def factorize(n: int) -> List[Tuple[int, int]]:
    """Trial-division factorization as ascending ``(prime, exponent)`` pairs."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi expects n >= 1")
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def multiplicative_order(e: int, ring: ResidueRing) -> int:
    """Smallest ``t >= 1`` with ``e**t = 1 (mod n)``.

    Starts from phi(n) and strips prime factors while the power stays 1.
    """
    n = ring.modulus
    e %= n
    if _gcd(e, n) != 1:
        raise NotAUnitError(f"{e} is not a unit modulo {n}")
    order = euler_phi(n)
    for q, _ in factorize(order):
        while order % q == 0 and pow(e, order // q, n) == 1:
            order //= q
    return order


def is_primitive_root(g: int, p: int) -> bool:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    g %= p
    if p == 2:
        return g == 1
    return g != 0 and multiplicative_order(g, ResidueRing(p)) == p - 1


def primitive_root(p: int) -> int:
    """Smallest generator of the unit group of Z_p (1 for p = 2)."""
    if not is_prime(p):
        raise ValueError(f"primitive_root needs a prime, got {p}")
    if p == 2:
        return 1
    qs = [q for q, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def crt_solve(residue_pairs: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """Solve a system of congruences with pairwise coprime moduli.

    Returns ``(x, M)`` where ``M`` is the product of the moduli and ``x`` is
    the unique solution in ``[0, M)``.
    """
    pairs = list(residue_pairs)
    if not pairs:
        raise ValueError("crt_solve needs at least one congruence")
    for r, m in pairs:
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        if not 0 <= r < m:
            raise ValueError(f"remainder {r} is not reduced modulo {m}")
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if _gcd(pairs[i][1], pairs[j][1]) != 1:
                raise ValueError(
                    f"moduli {pairs[i][1]} and {pairs[j][1]} are not coprime"
                )
    x, M = 0, 1
    for r, m in pairs:
        # x + M*u = r (mod m)
        u = (r - x) * inverse_mod(M % m, m) % m if m > 1 else 0
        x += M * u
        M *= m
    return x % M, M


def divisors(n: int) -> List[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def p_adic_valuation(a: int, p: int) -> int:
    """Largest ``i`` with ``p**i`` dividing ``a`` (a != 0)."""
    if a == 0:
        raise ValueError("valuation of 0 is infinite")
    i = 0
    while a % p == 0:
        a //= p
        i += 1
    return i


def lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // _gcd(out, v)
    return out
