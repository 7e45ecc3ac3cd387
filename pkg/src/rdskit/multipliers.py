"""Numerical multipliers of difference sets and of their liftings."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import _kernels
from .errors import CapacityError, DomainError, ParameterError, TheoremViolation
from .groupring import (
    DesignParams,
    GroupRingElement,
    RdsParams,
    apply_numerical,
    translate,
)
from .numtheory import cyclic_subgroup, divisors, factorize

BRUTEFORCE_CAP = 10_000


@dataclass(frozen=True)
class MultiplierGroup:
    modulus: int
    generators: tuple[int, ...]
    elements: tuple[int, ...]

    def __post_init__(self):
        es = set(self.elements)
        if 1 % self.modulus not in es:
            raise ParameterError("multiplier group must contain 1")
        for a in self.elements:
            if gcd(a, self.modulus) != 1:
                raise ParameterError(f"{a} is not a unit modulo {self.modulus}")
            for b in self.generators:
                if a * b % self.modulus not in es:
                    raise ParameterError("element set is not closed")

    @classmethod
    def generated_by(cls, gens, modulus: int) -> "MultiplierGroup":
        gens = tuple(sorted({g % modulus for g in gens} - {1 % modulus}))
        elems = {1 % modulus}
        frontier = [1 % modulus]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = x * g % modulus
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return cls(modulus, gens, tuple(sorted(elems)))

    @classmethod
    def from_elements(cls, elems, modulus: int) -> "MultiplierGroup":
        elems = sorted({e % modulus for e in elems})
        # a small generating set: add elements until they span everything
        gens: list[int] = []
        span = {1 % modulus}
        for e in elems:
            if e not in span:
                gens.append(e)
                span = set(cls.generated_by(gens, modulus).elements)
        grp = cls.generated_by(gens, modulus)
        if list(grp.elements) != elems:
            raise ParameterError("elements do not form a group")
        return grp

    def __contains__(self, t: int) -> bool:
        return t % self.modulus in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def reduce(self, w: int) -> "MultiplierGroup":
        if self.modulus % w:
            raise ParameterError(f"{w} does not divide {self.modulus}")
        return MultiplierGroup.from_elements((e % w for e in self.elements), w)


def units(v: int) -> list[int]:
    return [t for t in range(v) if gcd(t, v) == 1]


def multiplier_group_bruteforce(D: GroupRingElement, p: DesignParams) -> MultiplierGroup:
    """Every unit t with D^(t) a translate of D, by direct test."""
    v = p.v
    if v > BRUTEFORCE_CAP:
        raise CapacityError(f"v={v} exceeds the brute-force cap {BRUTEFORCE_CAP}")
    if D.modulus != v:
        raise ParameterError("design modulus does not match parameters")
    cands = np.array([t % v for t in units(v)], dtype=np.int64)
    flags = _kernels.multiplier_flags(np.array(D.support, dtype=np.int64), v, cands)
    return MultiplierGroup.from_elements(cands[flags].tolist(), v)


def first_multiplier_primes(p: DesignParams) -> list[int]:
    """Primes p | k - lambda with p not dividing v and p > lambda."""
    order = p.k - p.lam
    if order <= 0:
        return []
    return [q for q, _ in factorize(order) if p.v % q and q > p.lam]


def _prime_condition_mask(prime: int, vstar: int) -> np.ndarray:
    """Residues t mod v* with q^f = t for an admissible q (existential in f, l)."""
    mask = np.zeros(vstar, dtype=bool)
    if vstar % prime:
        mask[cyclic_subgroup(prime, vstar)] = True
        return mask
    u = vstar
    while u % prime == 0:
        u //= prime
    ts = np.arange(vstar)
    ok = np.zeros(u, dtype=bool)
    ok[cyclic_subgroup(prime % u, u)] = True
    mask[:] = ok[ts % u] & (ts % prime != 0)
    return mask


def k2_value(ds: DesignParams, n: int, k1: int) -> int:
    return k1 // gcd(ds.v * n, k1)


def lift_multiplier(t: int, ds: DesignParams, n: int, k1: int) -> bool:
    """Prime-power condition for t to lift to a multiplier of an (m,n,k,lambda) RDS.

    ``ds`` is the base (m, k, n lambda) design; v* is taken as mn.
    """
    vstar = ds.v * n
    if gcd(t, vstar) != 1:
        raise DomainError(f"t={t} is not coprime to mn={vstar}")
    if ds.k % k1:
        raise ParameterError(f"k1={k1} does not divide k={ds.k}")
    t %= vstar
    for prime, _ in factorize(k1):
        if not _prime_condition_mask(prime, vstar)[t]:
            return False
    return True


def certified_rds_multipliers(ds: DesignParams, n: int, base: MultiplierGroup,
                              *, require_k2: bool = True) -> list[int]:
    """Residues t mod mn certified as multipliers of any lifting with this n.

    A t qualifies if t mod m lies in the base multiplier group and the
    prime-power condition holds for some divisor k1 of k.  With
    ``require_k2`` only divisors with k1 / gcd(mn, k1) > lambda are used.
    """
    rp = RdsParams.lifting(ds, n)
    vstar = rp.order
    ts = np.arange(vstar)
    unit = np.gcd(ts, vstar) == 1
    in_base = np.zeros(ds.v, dtype=bool)
    in_base[list(base.elements)] = True
    pool = unit & in_base[ts % ds.v]
    masks = {prime: _prime_condition_mask(prime, vstar) for prime, _ in factorize(ds.k)}
    found = np.zeros(vstar, dtype=bool)
    for k1 in divisors(ds.k):
        if require_k2 and k2_value(ds, n, k1) <= rp.lam:
            continue
        sel = pool.copy()
        for prime, _ in factorize(k1):
            sel &= masks[prime]
        found |= sel
    return np.flatnonzero(found).tolist()


def is_fixed_by(R: GroupRingElement, t: int) -> bool:
    return apply_numerical(R, t) == R


def fixed_translate(R: GroupRingElement, p: RdsParams, M: MultiplierGroup) -> GroupRingElement:
    """Least s such that R + s is fixed by the generator (or all of M)."""
    v = p.order
    if M.modulus != v:
        raise ParameterError("multiplier group modulus must be mn")
    if gcd(v, p.k) == 1:
        taus = list(M.generators)
    else:
        taus = list(M.generators[:1])
    for s in range(v):
        cand = translate(R, s)
        if all(is_fixed_by(cand, t) for t in taus):
            return cand
    raise TheoremViolation(f"no translate of the {p}-RDS is fixed by {taus}")


def reduce_mod(D: GroupRingElement, w: int) -> GroupRingElement:
    if D.modulus % w:
        raise ParameterError(f"{w} does not divide {D.modulus}")
    acc: dict[int, int] = {}
    for r, c in D.terms:
        acc[r % w] = acc.get(r % w, 0) + c
    return GroupRingElement.from_dict(acc, w)


def is_w_multiplier(D: GroupRingElement, w: int, t: int) -> bool:
    """D^(t) = D + s in Z[Z_w] for some s, after reducing D modulo w."""
    if gcd(t, w) != 1:
        raise DomainError(f"t={t} is not coprime to w={w}")
    img = reduce_mod(D, w)
    target = apply_numerical(img, t)
    return any(translate(img, s) == target for s in range(w))
