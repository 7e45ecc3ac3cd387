"""Nonexistence tests for cyclic relative difference sets.

Each checker returns a ``FeasibilityVerdict``.  ``ruled_out`` always comes
with a witness dict holding enough values to re-derive the contradiction
using only ``numtheory``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import DomainError
from .groupring import DesignParams, GroupRingElement, RdsParams
from .multipliers import (
    MultiplierGroup,
    certified_rds_multipliers,
    multiplier_group_bruteforce,
)
from .numtheory import (
    divisors,
    factorize,
    hilbert_symbol,
    integer_self_conjugate,
    is_perfect_square,
    legendre,
    minus_one_in_powers,
    multiplicative_order,
    prime_power,
    solve_4k_diophantine,
    squarefree_decomposition,
    sum_of_two_squares,
)

RULED_OUT = "ruled_out"
PASSES = "passes"
INAPPLICABLE = "inapplicable"

LAM31, LAM32, LAM34, LAM35, POTT25 = "Lam3.1", "Lam3.2", "Lam3.4", "Lam3.5", "Pott2.5"
PRIORITY = (POTT25, LAM32, LAM35, LAM31, LAM34)


@dataclass(frozen=True)
class FeasibilityVerdict:
    params: RdsParams | None
    status: str
    theorem: str | None
    witness: dict = field(default_factory=dict)
    fired: tuple[str, ...] = ()

    def __post_init__(self):
        if self.status not in (RULED_OUT, PASSES, INAPPLICABLE):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == RULED_OUT and not self.witness:
            raise ValueError("a ruled_out verdict needs a witness")

    @property
    def ruled_out(self) -> bool:
        return self.status == RULED_OUT


def _v(params, status, thm, **witness) -> FeasibilityVerdict:
    return FeasibilityVerdict(params, status, thm, witness,
                              (thm,) if status == RULED_OUT else ())


# ---------------------------------------------------------------------------
# individual theorems
# ---------------------------------------------------------------------------

def check_lam31(q: int, n: int) -> FeasibilityVerdict:
    """Lifts of the complemented plane (q^2+q+1, q^2, q^2-q) with n = p^r n1, r >= 1."""
    pp = prime_power(q)
    if pp is None or n < 1:
        return _v(None, INAPPLICABLE, LAM31, reason="q is not a prime power")
    p, s = pp
    ds = DesignParams(q * q + q + 1, q * q, q * q - q)
    if ds.lam % n:
        return _v(None, INAPPLICABLE, LAM31, reason=f"n={n} does not divide {ds.lam}")
    params = RdsParams.lifting(ds, n)
    r, n1 = 0, n
    while n1 % p == 0:
        n1 //= p
        r += 1
    if r == 0:
        return _v(params, INAPPLICABLE, LAM31, reason=f"{p} does not divide n")
    e = 3 * s // gcd(3 * s, r)
    residue = pow(n1, e, p ** r)
    status = PASSES if residue == 1 % p ** r else RULED_OUT
    return _v(params, status, LAM31, p=p, s=s, r=r, n1=n1, e=e, residue=residue)


def check_lam32(p: RdsParams) -> FeasibilityVerdict:
    """u self-conjugate modulo w forces u <= 2^(s-1) mn / w."""
    a, _ = squarefree_decomposition(p.k)
    us = [u for u in divisors(a) if u > 1]
    if not us:
        return _v(p, INAPPLICABLE, LAM32, reason="k has no square factor")
    mn = p.order
    tried = 0
    for w in divisors(mn):
        if w == 1 or p.m % w == 0:
            continue
        s = len(factorize(w).factors)
        bound = 2 ** (s - 1) * (mn // w)
        for u in us:
            if not integer_self_conjugate(u, w):
                continue
            tried += 1
            if u > bound:
                return _v(p, RULED_OUT, LAM32, u=u, w=w, s=s, bound=bound)
    if not tried:
        return _v(p, INAPPLICABLE, LAM32, reason="no self-conjugate u for any w")
    return _v(p, PASSES, LAM32, pairs_checked=tried)


def _lam35_condition(prime: int, q: int, e: int) -> str | None:
    if prime == q:
        return "p=q"
    if multiplicative_order(prime, q) % 2 == 0:
        return "even order mod q"
    if multiplicative_order(prime, q ** e) == q ** (e - 1) * (q - 1) // 2:
        return "order q^(e-1)(q-1)/2"
    return None


def check_lam35(p: RdsParams) -> FeasibilityVerdict:
    """4k = x^2 + q y^2 must be solvable for suitable q = 3 mod 4."""
    mn = p.order
    used = []
    for q, e in factorize(mn):
        if q % 4 != 3 or p.m % q ** e == 0:
            continue
        conds = {}
        for prime, _ in factorize(p.k):
            c = _lam35_condition(prime, q, e)
            if c is None:
                break
            conds[prime] = c
        else:
            sol = solve_4k_diophantine(p.k, q)
            if sol is None:
                return _v(p, RULED_OUT, LAM35, q=q, e=e, conditions=conds,
                          scan_bound=2 * p.k)
            used.append({"q": q, "e": e, "solution": list(sol)})
    if not used:
        return _v(p, INAPPLICABLE, LAM35, reason="no admissible prime q")
    return _v(p, PASSES, LAM35, solved=used)


def _odd_support(*vals: int) -> list[int]:
    primes = set()
    for x in vals:
        if x:
            primes.update(q for q, _ in factorize(abs(x)) if q != 2)
    return sorted(primes)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def check_pott25(p: RdsParams) -> FeasibilityVerdict:
    m, n, k, lam = p.m, p.n, p.k, p.lam
    excess = k - n * lam
    if m % 2 == 0:
        if not is_perfect_square(excess):
            return _v(p, RULED_OUT, POTT25, case=1, failed="k - n lambda square",
                      value=excess)
        if m % 4 == 2 and n % 2 == 0 and sum_of_two_squares(k) is None:
            return _v(p, RULED_OUT, POTT25, case=1, failed="k sum of two squares",
                      value=k)
        return _v(p, PASSES, POTT25, case=1)
    if n % 2 == 0:
        if not is_perfect_square(k):
            return _v(p, RULED_OUT, POTT25, case=2, failed="k square", value=k)
        if excess == 0:
            return _v(p, PASSES, POTT25, case=2, note="k = n lambda, symbol skipped")
        b = _sign((m - 1) // 2) * n * lam
        for q in _odd_support(excess, b):
            h = hilbert_symbol(excess, b, q)
            if h != 1:
                return _v(p, RULED_OUT, POTT25, case=2, prime=q,
                          symbols=[[excess, b, h]])
        return _v(p, PASSES, POTT25, case=2)
    b1 = _sign((n - 1) // 2) * n
    b2 = _sign((m - 1) // 2) * n * lam
    for q in _odd_support(k, b1, excess, b2):
        h1 = hilbert_symbol(k, b1, q)
        h2 = hilbert_symbol(excess, b2, q) if excess else 1
        if h1 * h2 != 1:
            return _v(p, RULED_OUT, POTT25, case=3, prime=q,
                      symbols=[[k, b1, h1], [excess, b2, h2]])
    return _v(p, PASSES, POTT25, case=3)


def _residues_mod(multipliers, w: int) -> set[int]:
    return {t % w for t in multipliers}


def check_lam34(p: RdsParams, w: int, t: int, multipliers=None) -> FeasibilityVerdict:
    """Theorem for RDS with a w-multiplier t having t^f = -1 (mod w).

    ``multipliers`` are residues mod mn known to be multipliers of every
    such RDS; t qualifies as a w-multiplier when it agrees mod w with one
    of them (1 always qualifies).
    """
    mn = p.order
    if w < 1 or mn % w or p.m % w == 0:
        return _v(p, INAPPLICABLE, LAM34, reason=f"need w | mn and w not dividing m, w={w}")
    known = _residues_mod(list(multipliers or ()) + [1], w)
    if gcd(t, w) != 1 or t % w not in known:
        raise DomainError(f"t={t} is not a certified {w}-multiplier")
    if not minus_one_in_powers(t, w):
        return _v(p, INAPPLICABLE, LAM34, reason=f"-1 is not a power of {t} mod {w}")
    k = p.k
    if is_perfect_square(k):
        return _v(p, PASSES, LAM34, w=w, t=t, shape="square")
    k1, q = squarefree_decomposition(k)
    base = dict(w=w, t=t, k1=k1, q=q)
    if not (prime_power(q) == (q, 1) and w % q == 0):
        return _v(p, RULED_OUT, LAM34, failed="shape", **base)
    for prime, alpha in factorize(w):
        if prime != q and p.m % prime ** alpha:
            return _v(p, RULED_OUT, LAM34, failed="1", prime=prime, alpha=alpha, **base)
    if q % 2 and p.m % q and q % 4 != 1:
        return _v(p, RULED_OUT, LAM34, failed="2", **base)
    if q == 2 and w % 4:
        return _v(p, RULED_OUT, LAM34, failed="3", **base)
    if p.m % q and legendre(t, q) != 1:
        return _v(p, RULED_OUT, LAM34, failed="4", legendre=legendre(t, q), **base)
    return _v(p, PASSES, LAM34, shape="k1^2 q", **base)


def lam34_search(p: RdsParams, multipliers) -> FeasibilityVerdict:
    """Try every admissible w and every certified t; first contradiction wins."""
    mn = p.order
    cands = sorted(set(multipliers) | {1})
    seen_any = False
    for w in divisors(mn):
        if w == 1 or p.m % w == 0:
            continue
        for t in sorted({c % w for c in cands}):
            if gcd(t, w) != 1 or not minus_one_in_powers(t, w):
                continue
            seen_any = True
            v = check_lam34(p, w, t, cands)
            if v.ruled_out:
                return v
    if not seen_any:
        return _v(p, INAPPLICABLE, LAM34, reason="no (w, t) with t^f = -1 mod w")
    return _v(p, PASSES, LAM34)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def _plane_order(ds: DesignParams) -> int | None:
    for q in range(2, ds.v):
        if q * q + q + 1 > ds.v:
            return None
        if (ds.v, ds.k, ds.lam) == (q * q + q + 1, q * q, q * q - q):
            return q
    return None


def verdicts_for(p: RdsParams, multipliers=(), plane_q: int | None = None
                 ) -> dict[str, FeasibilityVerdict]:
    out = {
        POTT25: check_pott25(p),
        LAM32: check_lam32(p),
        LAM35: check_lam35(p),
        LAM31: check_lam31(plane_q, p.n) if plane_q else
        _v(p, INAPPLICABLE, LAM31, reason="not a complemented plane"),
        LAM34: lam34_search(p, multipliers),
    }
    return out


def feasibility_report(ds: DesignParams, multiplier_data: MultiplierGroup | None = None,
                       *, D: GroupRingElement | None = None,
                       require_k2: bool = True) -> list[FeasibilityVerdict]:
    """One verdict per n > 1 dividing lambda, in ascending n.

    ``multiplier_data`` is the multiplier group of the base design; when
    absent it is computed from ``D`` if given, otherwise only t = 1 is used
    for the w-multiplier test.  A value of n is also ruled out when some
    divisor of n is, since lifts project onto lifts.
    """
    if multiplier_data is None and D is not None:
        multiplier_data = multiplier_group_bruteforce(D, ds)
    plane_q = _plane_order(ds)
    out: list[FeasibilityVerdict] = []
    by_n: dict[int, FeasibilityVerdict] = {}
    for n in divisors(ds.lam):
        if n == 1:
            continue
        p = RdsParams.lifting(ds, n)
        mult = (certified_rds_multipliers(ds, n, multiplier_data, require_k2=require_k2)
                if multiplier_data is not None else [1])
        vs = verdicts_for(p, mult, plane_q)
        direct = {t for t in PRIORITY if vs[t].ruled_out}
        below = [by_n[d] for d in sorted(by_n) if n % d == 0 and by_n[d].ruled_out]
        inherited = {t for v in below for t in v.fired}
        fired = tuple(t for t in PRIORITY if t in direct | inherited)
        if fired:
            thm = fired[0]
            if thm in direct:
                witness = vs[thm].witness
            else:
                src = next(v for v in below if thm in v.fired)
                witness = {"via_divisor": src.params.n, **src.witness}
            verdict = FeasibilityVerdict(p, RULED_OUT, thm, witness, fired)
        elif any(v.status == PASSES for v in vs.values()):
            verdict = FeasibilityVerdict(p, PASSES, None, {})
        else:
            verdict = FeasibilityVerdict(p, INAPPLICABLE, None, {})
        by_n[n] = verdict
        out.append(verdict)
    return out
