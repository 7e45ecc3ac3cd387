"""Integer arithmetic behind the nonexistence tests.

Everything here is exact and sized for moduli below about 10^6:
factorization is plain trial division on a 2-3-5 wheel.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational

from .errors import DomainError

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            last = p
            prod *= p ** e
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __iter__(self):
        return iter(self.factors)


def factorize(n: int) -> Factorization:
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    m = n
    for p in (2, 3, 5):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
    d, i = 7, 0
    while d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e:
            out.append((d, e))
        d += _WHEEL[i]
        i = (i + 1) % 8
    if m > 1:
        out.append((m, 1))
    return Factorization(n, tuple(out))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = factorize(n).factors
    return len(f) == 1 and f[0][1] == 1


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, s) with q = p**s, or None if q is not a prime power."""
    if q < 2:
        return None
    f = factorize(q).factors
    return f[0] if len(f) == 1 else None


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p ** i for d in divs for i in range(e + 1)]
    return sorted(divs)


def odd_part_free_of(w: int, p: int) -> int:
    """w with every factor p removed."""
    while w % p == 0:
        w //= p
    return w


def multiplicative_order(a: int, n: int) -> int:
    if n < 2:
        raise DomainError(f"order modulo {n} is undefined")
    a %= n
    if gcd(a, n) != 1:
        raise DomainError(f"{a} is not a unit modulo {n}")
    # order divides lambda(n); walk the divisors of phi(n)
    phi = n
    for p, _ in factorize(n):
        phi = phi // p * (p - 1)
    order = phi
    for p, e in factorize(phi):
        for _ in range(e):
            if pow(a, order // p, n) == 1:
                order //= p
            else:
                break
    return order


def cyclic_subgroup(a: int, n: int) -> list[int]:
    """Sorted powers of a modulo n."""
    if n == 1:
        return [0]
    out = []
    x = 1 % n
    while True:
        out.append(x)
        x = x * a % n
        if x == 1 % n:
            break
    return sorted(out)


def minus_one_in_powers(a: int, n: int) -> bool:
    """Is -1 a power of a modulo n?"""
    if n <= 2:
        return True
    if gcd(a, n) != 1:
        return False
    f = multiplicative_order(a, n)
    return f % 2 == 0 and pow(a, f // 2, n) == n - 1


def is_self_conjugate(p: int, w: int) -> bool:
    """p^f = -1 (mod w1) for some f > 0, where w1 is w with p removed."""
    if w < 1:
        raise DomainError(f"w must be positive, got {w}")
    return minus_one_in_powers(p, odd_part_free_of(w, p))


def integer_self_conjugate(u: int, w: int) -> bool:
    """Every prime divisor of u is self-conjugate modulo w."""
    return all(is_self_conjugate(p, w) for p, _ in factorize(u))


# ---------------------------------------------------------------------------
# squares and small Diophantine equations
# ---------------------------------------------------------------------------

def is_perfect_square(k: int) -> bool:
    return k >= 0 and isqrt(k) ** 2 == k


def squarefree_decomposition(k: int) -> tuple[int, int]:
    """(a, b) with k = a^2 * b and b squarefree."""
    a, b = 1, 1
    for p, e in factorize(k):
        a *= p ** (e // 2)
        if e % 2:
            b *= p
    return a, b


def sum_of_two_squares(k: int) -> tuple[int, int] | None:
    for a in range(isqrt(k) + 1):
        if is_perfect_square(k - a * a):
            return a, isqrt(k - a * a)
    return None


def solve_4k_diophantine(k: int, q: int) -> tuple[int, int] | None:
    """Nonnegative (x, y) with 4k = x^2 + q y^2, scanning x upward."""
    if k < 1 or q < 1:
        raise DomainError("k and q must be positive")
    target = 4 * k
    for x in range(isqrt(target) + 1):
        rest = target - x * x
        if rest % q == 0 and is_perfect_square(rest // q):
            return x, isqrt(rest // q)
    return None


# ---------------------------------------------------------------------------
# Legendre and Hilbert symbols
# ---------------------------------------------------------------------------

def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation of zero")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _split(x: Rational, p: int) -> tuple[int, int]:
    """(v_p(x), integer with the same Legendre class as the unit part)."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("Hilbert symbol of zero")
    num, den = x.numerator, x.denominator
    a, b = valuation(num, p), valuation(den, p)
    unit = (num // p ** a) * (den // p ** b)  # den^-1 has the class of den
    return a - b, unit


def hilbert_symbol(a: Rational, b: Rational, p: int) -> int:
    """(a, b)_p for an odd prime p."""
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    eps = (p - 1) // 2
    sign = -1 if (alpha * beta * eps) % 2 else 1
    lu = legendre(u, p) if beta % 2 else 1
    lv = legendre(v, p) if alpha % 2 else 1
    return sign * lu * lv
