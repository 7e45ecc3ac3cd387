"""Integer group ring over a cyclic group Z_v.

Elements are immutable and stored sparsely as sorted ``(residue, coeff)``
pairs.  Coefficients are Python ints; the int64 kernel is only used when
the product of the L1 norms cannot overflow.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .errors import InvariantViolation, ParameterError, StructuralError

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class GroupRingElement:
    modulus: int
    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.modulus < 1:
            raise ParameterError(f"modulus must be positive, got {self.modulus}")
        for r, c in self.terms:
            if not 0 <= r < self.modulus:
                raise ParameterError(f"residue {r} outside [0, {self.modulus})")
            if c == 0:
                raise ParameterError("zero coefficients are not stored")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int], modulus: int) -> "GroupRingElement":
        acc: dict[int, int] = {}
        for r, c in coeffs.items():
            r %= modulus
            acc[r] = acc.get(r, 0) + int(c)
        return cls(modulus, tuple(sorted((r, c) for r, c in acc.items() if c)))

    @classmethod
    def from_set(cls, residues: Iterable[int], modulus: int) -> "GroupRingElement":
        rs = sorted({int(r) % modulus for r in residues})
        return cls(modulus, tuple((r, 1) for r in rs))

    @classmethod
    def from_signed(cls, residues: Iterable[int], signs: Iterable[int],
                    modulus: int) -> "GroupRingElement":
        acc: dict[int, int] = {}
        for r, s in zip(residues, signs):
            r = int(r) % modulus
            acc[r] = acc.get(r, 0) + int(s)
        return cls(modulus, tuple(sorted((r, c) for r, c in acc.items() if c)))

    @classmethod
    def whole_group(cls, modulus: int) -> "GroupRingElement":
        return cls(modulus, tuple((r, 1) for r in range(modulus)))

    @classmethod
    def subgroup(cls, modulus: int, order: int) -> "GroupRingElement":
        """Indicator of the unique subgroup of the given order."""
        if modulus % order:
            raise ParameterError(f"{order} does not divide {modulus}")
        step = modulus // order
        return cls(modulus, tuple((r, 1) for r in range(0, modulus, step)))

    # -- views --------------------------------------------------------------
    @property
    def support(self) -> list[int]:
        return [r for r, _ in self.terms]

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self.terms)

    def __getitem__(self, g: int) -> int:
        g %= self.modulus
        for r, c in self.terms:
            if r == g:
                return c
        return 0

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_setlike(self) -> bool:
        return all(c == 1 for _, c in self.terms)

    @property
    def weight(self) -> int:
        """Sum of coefficients (the augmentation)."""
        return sum(c for _, c in self.terms)

    def to_dense(self) -> list[int]:
        out = [0] * self.modulus
        for r, c in self.terms:
            out[r] = c
        return out

    # -- ring operations ----------------------------------------------------
    def _check(self, other: "GroupRingElement"):
        if self.modulus != other.modulus:
            raise StructuralError(f"moduli differ: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        acc = dict(self.terms)
        for r, c in other.terms:
            acc[r] = acc.get(r, 0) + c
        return GroupRingElement.from_dict(acc, self.modulus)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.modulus, tuple((r, -c) for r, c in self.terms))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        acc: dict[int, int] = {}
        v = self.modulus
        for a, ca in self.terms:
            for b, cb in other.terms:
                g = (a + b) % v
                acc[g] = acc.get(g, 0) + ca * cb
        return GroupRingElement.from_dict(acc, v)

    def inverse_image(self) -> "GroupRingElement":
        """A^(-1): every residue negated."""
        return apply_numerical(self, -1)

    def __repr__(self) -> str:
        if self.is_setlike:
            return f"GroupRingElement({self.support}, mod {self.modulus})"
        return f"GroupRingElement({dict(self.terms)}, mod {self.modulus})"


def correlation_vector(A: GroupRingElement, B: GroupRingElement) -> list[int]:
    """Dense coefficients of A * B^(-1): entry g is sum_h A[g+h] B[h]."""
    A._check(B)
    v = A.modulus
    norm = sum(abs(c) for _, c in A.terms) * sum(abs(c) for _, c in B.terms)
    if norm < _INT64_SAFE:
        a = np.array([r for r, _ in A.terms], dtype=np.int64)
        wa = np.array([c for _, c in A.terms], dtype=np.int64)
        if A is B or A == B:
            out = _kernels.difference_counts(a, wa, v)
        else:
            b = np.array([r for r, _ in B.terms], dtype=np.int64)
            wb = np.array([c for _, c in B.terms], dtype=np.int64)
            out = _kernels.cross_counts(a, wa, b, wb, v)
        return [int(x) for x in out]
    out = [0] * v
    for a, ca in A.terms:
        for b, cb in B.terms:
            out[(a - b) % v] += ca * cb
    return out


def convolve_with_inverse(A: GroupRingElement, B: GroupRingElement) -> GroupRingElement:
    return GroupRingElement.from_dict(dict(enumerate(correlation_vector(A, B))), A.modulus)


def apply_numerical(A: GroupRingElement, t: int) -> GroupRingElement:
    """A^(t) = sum a_g (t g); coinciding images accumulate."""
    v = A.modulus
    acc: dict[int, int] = {}
    for r, c in A.terms:
        g = (r * t) % v
        acc[g] = acc.get(g, 0) + c
    return GroupRingElement.from_dict(acc, v)


def translate(A: GroupRingElement, s: int) -> GroupRingElement:
    v = A.modulus
    return GroupRingElement(v, tuple(sorted(((r + s) % v, c) for r, c in A.terms)))


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DesignParams:
    v: int
    k: int
    lam: int

    def __post_init__(self):
        if not 0 < self.k <= self.v:
            raise ParameterError(f"need 0 < k <= v, got {self}")
        if self.k * (self.k - 1) != self.lam * (self.v - 1):
            raise ParameterError(f"k(k-1) != lambda(v-1) for {self}")

    def complement(self) -> "DesignParams":
        return DesignParams(self.v, self.v - self.k, self.v - 2 * self.k + self.lam)

    def __str__(self) -> str:
        return f"({self.v},{self.k},{self.lam})"


@dataclass(frozen=True)
class RdsParams:
    m: int
    n: int
    k: int
    lam: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1 or self.k < 1 or self.lam < 0:
            raise ParameterError(f"invalid RDS parameters {self}")
        if self.k > self.m:
            raise ParameterError(f"k > m is impossible for a lifting: {self}")
        if self.k * (self.k - 1) != self.lam * self.n * (self.m - 1):
            raise ParameterError(f"k(k-1) != lambda n (m-1) for {self}")

    @property
    def order(self) -> int:
        return self.m * self.n

    def base(self) -> DesignParams:
        """Parameters of the difference set in G/N."""
        return DesignParams(self.m, self.k, self.n * self.lam)

    @classmethod
    def lifting(cls, ds: DesignParams, n: int) -> "RdsParams":
        if n < 1 or ds.lam % n:
            raise ParameterError(f"n={n} does not divide lambda of {ds}")
        return cls(ds.v, n, ds.k, ds.lam // n)

    @property
    def is_regular(self) -> bool:
        return self.k != self.n * self.lam

    def __str__(self) -> str:
        return f"({self.m},{self.n},{self.k},{self.lam})"


# ---------------------------------------------------------------------------
# verification and derived designs
# ---------------------------------------------------------------------------

def _require_setlike(D: GroupRingElement, v: int, k: int, what: str):
    if D.modulus != v:
        raise ParameterError(f"{what}: modulus {D.modulus} != {v}")
    if not D.is_setlike or len(D) != k:
        raise ParameterError(f"{what}: expected a {k}-subset, got {len(D)} terms")


def verify_ds(D: GroupRingElement, p: DesignParams) -> bool:
    """D D^(-1) = (k - lambda) + lambda G."""
    _require_setlike(D, p.v, p.k, "verify_ds")
    conv = correlation_vector(D, D)
    return conv[0] == p.k and all(c == p.lam for c in conv[1:])


def verify_rds(R: GroupRingElement, p: RdsParams) -> bool:
    """R R^(-1) = k + lambda (G - N) with N the multiples of m."""
    _require_setlike(R, p.order, p.k, "verify_rds")
    conv = correlation_vector(R, R)
    if conv[0] != p.k:
        return False
    for g in range(1, p.order):
        want = 0 if g % p.m == 0 else p.lam
        if conv[g] != want:
            return False
    return True


def project(R: GroupRingElement, p: RdsParams, u: int) -> tuple[GroupRingElement, RdsParams]:
    """Image of R in G/U for the subgroup U of order u inside N."""
    if u < 1 or p.n % u:
        raise ParameterError(f"u={u} does not divide n={p.n}")
    q = RdsParams(p.m, p.n // u, p.k, p.lam * u)
    acc: dict[int, int] = {}
    for r in R.support:
        g = r % q.order
        acc[g] = acc.get(g, 0) + 1
    img = GroupRingElement.from_dict(acc, q.order)
    if not img.is_setlike or len(img) != p.k or not verify_rds(img, q):
        raise InvariantViolation(f"projection of {p} by u={u} is not a {q}-RDS")
    return img, q


def complement_ds(D: GroupRingElement, p: DesignParams) -> tuple[GroupRingElement, DesignParams]:
    members = set(D.support)
    comp = GroupRingElement.from_set((r for r in range(p.v) if r not in members), p.v)
    q = p.complement()
    if not verify_ds(comp, q):
        raise InvariantViolation(f"complement of a {p} design failed verification")
    return comp, q


def pairwise_difference_count(elems: Iterable[int], v: int) -> list[int]:
    """Definition-level tally of a - b over ordered pairs of distinct elements."""
    es = list(elems)
    out = [0] * v
    for i, a in enumerate(es):
        for j, b in enumerate(es):
            if i != j:
                out[(a - b) % v] += 1
    return out


def is_unit(t: int, v: int) -> bool:
    return gcd(t, v) == 1
