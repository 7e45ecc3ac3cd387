"""Finite fields GF(p^e) and the constructive design families.

Field elements are encoded as integers whose base-p digits are the
polynomial coefficients, constant term least significant.  Every field
carries full log/antilog tables; orders are capped at 2^20.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import CapacityError, DomainError, InvariantViolation, ParameterError
from .groupring import (
    DesignParams,
    GroupRingElement,
    RdsParams,
    complement_ds,
    project,
    verify_ds,
    verify_rds,
)
from .numtheory import factorize, is_prime, legendre, prime_power

MAX_FIELD_ORDER = 1 << 20


# ---------------------------------------------------------------------------
# polynomials over GF(p) as coefficient lists, constant first
# ---------------------------------------------------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv = pow(f[-1], p - 2, p)
    while len(_trim(a)) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_pmod(a, b, p))
    return a


def _ppowmod(base, exp, f, p):
    result = [1]
    base = _trim(_pmod(base, f, p))
    while exp:
        if exp & 1:
            result = _trim(_pmod(_pmul(result, base, p), f, p))
        base = _trim(_pmod(_pmul(base, base, p), f, p))
        exp >>= 1
    return result


def _is_irreducible(f, p):
    """Rabin's test for a monic f of degree e over GF(p)."""
    e = len(f) - 1
    if e == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p ** e, f, p), x, p):
        return False
    for r, _ in factorize(e):
        h = _psub(_ppowmod(x, p ** (e // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# field objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]  # constant first, monic, length e + 1
    generator: int = field(default=0, compare=False)
    _log: tuple[int, ...] = field(default=(), compare=False, repr=False)
    _exp: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def order(self) -> int:
        return self.p ** self.e

    # -- encoding -------------------------------------------------------------
    def digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.e):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def encode(self, coeffs) -> int:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + (c % self.p)
        return x

    # -- arithmetic on encoded integers ----------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        da, db = self.digits(a), self.digits(b)
        return self.encode((x + y) % self.p for x, y in zip(da, db))

    def neg(self, a: int) -> int:
        return self.encode((-x) % self.p for x in self.digits(a))

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _pmul(_trim(self.digits(a)), _trim(self.digits(b)), self.p)
        return self.encode(_pmod(prod, list(self.modulus), self.p)[: self.e])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if not self._log:
            return self._slow_mul(a, b)
        n = self.order - 1
        return self._exp[(self._log[a] + self._log[b]) % n]

    def power(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k else 1
        if self._log:
            return self._exp[(self._log[a] * k) % (self.order - 1)]
        r, base = 1, a
        k %= self.order - 1
        while k:
            if k & 1:
                r = self._slow_mul(r, base)
            base = self._slow_mul(base, base)
            k >>= 1
        return r

    def log(self, a: int) -> int:
        if a == 0:
            raise DomainError("log of zero")
        return self._log[a]

    def exp(self, i: int) -> int:
        return self._exp[i % (self.order - 1)]

    def element(self, value) -> "FieldElement":
        if isinstance(value, int):
            return FieldElement(self, value % self.order if value >= 0 else self.encode([value]))
        return FieldElement(self, self.encode(value))


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    @property
    def coeffs(self) -> list[int]:
        return self.spec.digits(self.value)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.spec, self.spec.add(self.value, other.value))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.spec, self.spec.mul(self.value, other.value))

    def __pow__(self, k: int) -> "FieldElement":
        return FieldElement(self.spec, self.spec.power(self.value, k))

    def __repr__(self) -> str:
        return f"GF({self.spec.p}^{self.spec.e})<{self.coeffs}>"


def _least_irreducible(p: int, e: int) -> tuple[int, ...]:
    # enumerate monic polynomials by the integer whose digits they are
    for body in range(p ** e):
        coeffs = []
        x = body
        for _ in range(e):
            x, r = divmod(x, p)
            coeffs.append(r)
        f = coeffs + [1]
        if e > 1 and f[0] == 0:
            continue
        if _is_irreducible(f, p):
            return tuple(f)
    raise InvariantViolation(f"no irreducible polynomial of degree {e} over GF({p})")


def _least_generator(spec: FieldSpec) -> int:
    n = spec.order - 1
    if n == 1:
        return 1
    rs = [r for r, _ in factorize(n)]
    for g in range(1, spec.order):
        if all(spec.power(g, n // r) != 1 for r in rs):
            return g
    raise InvariantViolation("multiplicative group has no generator")


def build_field(p: int, e: int) -> FieldSpec:
    """GF(p^e) modulo the least monic irreducible of degree e."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if e < 1:
        raise DomainError("degree must be positive")
    if p ** e > MAX_FIELD_ORDER:
        raise CapacityError(f"GF({p}^{e}) exceeds the 2^20 cap")
    bare = FieldSpec(p, e, _least_irreducible(p, e))
    g = _least_generator(bare)
    n = bare.order - 1
    exp = [0] * n
    log = [0] * bare.order
    x = 1
    for i in range(n):
        exp[i] = x
        log[x] = i
        x = bare._slow_mul(x, g) if e > 1 else x * g % p
    if x != 1:
        raise InvariantViolation("generator order mismatch")
    return FieldSpec(p, e, bare.modulus, g, tuple(log), tuple(exp))


def primitive_element(F: FieldSpec) -> FieldElement:
    return FieldElement(F, F.generator)


def discrete_log_table(F: FieldSpec, g: FieldElement | None = None) -> dict[int, int]:
    """Map each nonzero encoded element to its exponent base g."""
    if g is None or g.value == F.generator:
        return {x: F._log[x] for x in range(1, F.order)}
    n = F.order - 1
    table = {}
    x = 1
    for i in range(n):
        if x in table:
            raise DomainError(f"{g} does not generate GF({F.p}^{F.e})*")
        table[x] = i
        x = F.mul(x, g.value)
    return table


def relative_trace(F: FieldSpec, x: FieldElement, q: int) -> FieldElement:
    """Tr(x) = sum_{i<d} x^(q^i) down to the subfield of order q."""
    pp = prime_power(q)
    if pp is None or pp[0] != F.p or F.e % pp[1]:
        raise DomainError(f"GF({q}) is not a subfield of GF({F.p}^{F.e})")
    d = F.e // pp[1]
    acc = 0
    y = x.value
    for _ in range(d):
        acc = F.add(acc, y)
        y = F.power(y, q)
    if F.power(acc, q) != acc:
        raise InvariantViolation("trace left the subfield")
    return FieldElement(F, acc)


# ---------------------------------------------------------------------------
# design constructions
# ---------------------------------------------------------------------------

def _singer_field(q: int, d: int) -> tuple[FieldSpec, int, int]:
    pp = prime_power(q)
    if pp is None:
        raise ParameterError(f"{q} is not a prime power")
    if d < 2:
        raise ParameterError("Singer constructions need d >= 2")
    if q ** d > MAX_FIELD_ORDER:
        raise CapacityError(f"q^d = {q ** d} exceeds the 2^20 cap")
    p, s = pp
    return build_field(p, s * d), p, s


def _traces(F: FieldSpec, q: int, count: int) -> list[int]:
    """Encoded Tr(g^i) for i < count."""
    d = F.e // prime_power(q)[1]
    n = F.order - 1
    out = []
    for i in range(count):
        acc = 0
        j = i
        for _ in range(d):
            acc = F.add(acc, F._exp[j])
            j = j * q % n
        out.append(acc)
    return out


def singer_ds(q: int, d: int) -> tuple[GroupRingElement, DesignParams]:
    """Classical Singer set: logs of the trace-zero hyperplane modulo m."""
    F, _, _ = _singer_field(q, d)
    m = (q ** d - 1) // (q - 1)
    params = DesignParams(m, (q ** (d - 1) - 1) // (q - 1), (q ** (d - 2) - 1) // (q - 1))
    tr = _traces(F, q, m)
    D = GroupRingElement.from_set((i for i in range(m) if tr[i] == 0), m)
    if not verify_ds(D, params):
        raise InvariantViolation(f"Singer construction failed for q={q}, d={d}")
    return D, params


def complement_singer_ds(q: int, d: int) -> tuple[GroupRingElement, DesignParams]:
    return complement_ds(*singer_ds(q, d))


def singer_rds(q: int, d: int, n: int) -> tuple[GroupRingElement, RdsParams]:
    """Logs of {Tr(x) = 1}, projected so the forbidden subgroup has order n."""
    if n < 1 or (q - 1) % n:
        raise ParameterError(f"n={n} does not divide q-1={q - 1}")
    F, _, _ = _singer_field(q, d)
    full = q ** d - 1
    m = full // (q - 1)
    tr = _traces(F, q, full)
    R = GroupRingElement.from_set((i for i in range(full) if tr[i] == 1), full)
    params = RdsParams(m, q - 1, q ** (d - 1), q ** (d - 2))
    if not verify_rds(R, params):
        raise InvariantViolation(f"trace-one set is not a {params}-RDS")
    return project(R, params, (q - 1) // n)


def quadratic_residues(p: int) -> list[int]:
    return sorted({x * x % p for x in range(1, p)})


def paley_ds(p: int) -> tuple[GroupRingElement, DesignParams]:
    if not is_prime(p) or p % 4 != 3:
        raise ParameterError(f"Paley needs a prime p = 3 mod 4, got {p}")
    params = DesignParams(p, (p - 1) // 2, (p - 3) // 4)
    D = GroupRingElement.from_set(quadratic_residues(p), p)
    if not verify_ds(D, params):
        raise InvariantViolation(f"Paley construction failed for p={p}")
    return D, params


def tpp_ds(p: int) -> tuple[GroupRingElement, DesignParams]:
    """Twin prime power set in Z_p x Z_(p+2), mapped into Z_p(p+2)."""
    r = p + 2
    if not (is_prime(p) and is_prime(r)):
        raise ParameterError(f"{p} and {p + 2} are not twin primes")
    v = p * r
    members = []
    for z in range(v):
        a, b = z % p, z % r
        if b == 0:
            members.append(z)
        elif a and legendre(a, p) == legendre(b, r):
            members.append(z)
    params = DesignParams(v, (v - 1) // 2, (v - 3) // 4)
    D = GroupRingElement.from_set(members, v)
    if not verify_ds(D, params):
        raise InvariantViolation(f"twin prime power construction failed for p={p}")
    return D, params


def ingest_catalog(path) -> list[tuple[GroupRingElement, DesignParams]]:
    """Load difference sets from an exchange file, re-verifying each."""
    from .catalog import read_catalog

    out = []
    for entry in read_catalog(path):
        if entry.kind == "ds":
            out.append((entry.element(), entry.design_params()))
    return out


def crt_pair(x1: int, n1: int, x2: int, n2: int) -> int:
    """The residue mod n1*n2 congruent to x1 mod n1 and x2 mod n2."""
    if gcd(n1, n2) != 1:
        raise ParameterError(f"moduli {n1}, {n2} are not coprime")
    return (x1 * n2 * pow(n2, -1, n1) + x2 * n1 * pow(n1, -1, n2)) % (n1 * n2)
