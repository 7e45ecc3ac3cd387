"""Circulant weighing matrices as signed group-ring elements."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping

from .errors import DomainError, InvariantViolation, ParameterError
from .fields import complement_singer_ds, crt_pair, singer_rds
from .groupring import (
    GroupRingElement,
    RdsParams,
    correlation_vector,
    verify_rds,
)
from .numtheory import is_perfect_square, prime_power


@dataclass(frozen=True)
class SignedCirculant:
    modulus: int
    signs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ParameterError(f"modulus must be positive, got {self.modulus}")
        last = -1
        for r, s in self.signs:
            if not 0 <= r < self.modulus or r <= last:
                raise ParameterError(f"residues must be ascending in [0, {self.modulus})")
            if s not in (1, -1):
                raise ParameterError(f"sign {s} at {r} is not +-1")
            last = r

    @classmethod
    def from_map(cls, signs: Mapping[int, int], modulus: int) -> "SignedCirculant":
        cleaned = {}
        for r, s in signs.items():
            r %= modulus
            if r in cleaned:
                raise ParameterError(f"residue {r} given twice")
            cleaned[r] = int(s)
        return cls(modulus, tuple(sorted(cleaned.items())))

    @classmethod
    def from_lists(cls, residues: Iterable[int], signs: Iterable[int],
                   modulus: int) -> "SignedCirculant":
        residues, signs = list(residues), list(signs)
        if len(residues) != len(signs):
            raise ParameterError("residue and sign lists differ in length")
        if len({r % modulus for r in residues}) != len(residues):
            raise ParameterError(f"repeated residues in {residues}")
        return cls.from_map(dict(zip(residues, signs)), modulus)

    @classmethod
    def from_element(cls, A: GroupRingElement) -> "SignedCirculant":
        return cls(A.modulus, A.terms)

    @property
    def weight(self) -> int:
        return len(self.signs)

    @property
    def support(self) -> list[int]:
        return [r for r, _ in self.signs]

    @property
    def sign_list(self) -> list[int]:
        return [s for _, s in self.signs]

    def element(self) -> GroupRingElement:
        return GroupRingElement(self.modulus, self.signs)

    def flip(self, r: int) -> "SignedCirculant":
        return SignedCirculant(self.modulus,
                               tuple((x, -s if x == r else s) for x, s in self.signs))

    def __str__(self) -> str:
        return f"CW({self.modulus},{self.weight})"


def verify_cw(W: SignedCirculant) -> bool:
    """W W^(-1) = k."""
    conv = correlation_vector(W.element(), W.element())
    return conv[0] == W.weight and not any(conv[1:])


def _require_verified(W: SignedCirculant, what: str):
    if not verify_cw(W):
        raise DomainError(f"{what}: {W} is not a verified weighing matrix")


def is_proper(W: SignedCirculant) -> bool:
    """Not induced from a smaller circulant: the support differences generate Z_n."""
    _require_verified(W, "is_proper")
    g = W.modulus
    supp = W.support
    for r in supp:
        g = gcd(g, r - supp[0])
    return g == 1


def _assert_good(W: SignedCirculant, what: str) -> SignedCirculant:
    if not verify_cw(W):
        raise InvariantViolation(f"{what} produced an invalid {W}")
    if not is_perfect_square(W.weight):
        raise InvariantViolation(f"{what} produced weight {W.weight}, not a square")
    if not is_proper(W):
        raise InvariantViolation(f"{what} produced an improper {W}")
    return W


def kronecker(W1: SignedCirculant, W2: SignedCirculant) -> SignedCirculant:
    """Product over Z_n1 x Z_n2 = Z_n1n2, signs multiplied."""
    n1, n2 = W1.modulus, W2.modulus
    if gcd(n1, n2) != 1:
        raise ParameterError(f"moduli {n1} and {n2} are not coprime")
    for W in (W1, W2):
        _require_verified(W, "kronecker")
        if not is_proper(W):
            raise DomainError(f"kronecker: {W} is not proper")
    out = {}
    for a, s in W1.signs:
        for b, t in W2.signs:
            out[crt_pair(a, n1, b, n2)] = s * t
    return _assert_good(SignedCirculant.from_map(out, n1 * n2), "kronecker")


def cw_from_rds(R: GroupRingElement, p: RdsParams) -> SignedCirculant:
    """Split Z_mn = Z_(mn/2) x Z_2 and sign each element by its Z_2 part."""
    if p.m % 2 == 0 or p.n % 4 != 2:
        raise ParameterError(f"need m odd and n = 2 mod 4, got {p}")
    if not verify_rds(R, p):
        raise DomainError(f"input is not a {p}-RDS")
    h = p.order // 2
    out: dict[int, int] = {}
    for r in R.support:
        x = r % h
        if x in out:
            raise InvariantViolation(f"two elements of the RDS collide at {x}")
        out[x] = -1 if r % 2 else 1
    W = SignedCirculant.from_map(out, h)
    if W.weight != p.k:
        raise InvariantViolation("weight differs from k")  # pragma: no cover
    return _assert_good(W, "cw_from_rds")


def _searched_rds(q: int, d: int, forb: int) -> tuple[GroupRingElement, RdsParams]:
    from .orbitsearch import lifts_up_to_translation

    D, ds = complement_singer_ds(q, d)
    lifts = lifts_up_to_translation(D, ds, forb)
    if not lifts:
        raise ParameterError(f"no lifting of the ({q},{d}) Singer complement with n={forb}")
    return lifts[0], RdsParams.lifting(ds, forb)


def singer_cw(q: int, d: int, n: int) -> SignedCirculant:
    """Proper CW of weight q^(d-1) from a Singer-type RDS with forbidden order 2 mod 4.

    For q even the order is (q^d - 1)/n with n | q - 1, and the RDS with
    forbidden subgroup of order 2(q-1)/n comes from the lift search.  For q
    odd, n must be odd with 2n | q - 1; the RDS is the trace-one set projected
    to forbidden order 2n and the order is m n, m = (q^d - 1)/(q - 1).
    """
    if prime_power(q) is None:
        raise ParameterError(f"{q} is not a prime power")
    if d < 3 or d % 2 == 0:
        raise ParameterError(f"d must be odd and at least 3, got {d}")
    if n < 1 or (q - 1) % n:
        raise ParameterError(f"n={n} does not divide q-1={q - 1}")
    if q % 2 == 0:
        R, p = _searched_rds(q, d, 2 * (q - 1) // n)
    else:
        if n % 2 == 0 or (q - 1) % (2 * n):
            raise ParameterError(
                f"q odd needs n odd with 2n | q-1 so the forbidden order is 2 mod 4; "
                f"got q={q}, n={n}")
        R, p = singer_rds(q, d, 2 * n)
    return cw_from_rds(R, p)
