"""Orbit backtracking search for liftings of cyclic difference sets.

A lifting of a (m, k, n lambda) difference set D is an (m, n, k, lambda)
RDS R in Z_mn with R mod m = D.  If R is fixed by a multiplier group M,
it is a union of M-orbits, and every M-orbit of D has n candidate
preimage orbits.  The search picks one preimage per base orbit, pruning
on a running difference tally and on the intersection numbers b_i.
"""
from __future__ import annotations

import itertools
from collections import Counter
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb, factorial, gcd
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import CapacityError, DomainError, InvariantViolation, ParameterError
from .groupring import (
    DesignParams,
    GroupRingElement,
    RdsParams,
    apply_numerical,
    project,
    translate,
    verify_ds,
    verify_rds,
)
from .multipliers import (
    MultiplierGroup,
    certified_rds_multipliers,
    multiplier_group_bruteforce,
)
from .numtheory import multiplicative_order

PROFILE_CAP = 1_000_000
BRUTEFORCE_CAP = 10 ** 8


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitSystem:
    modulus: int
    group: MultiplierGroup
    orbits: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(x for orb in self.orbits for x in orb)
        if seen != list(range(self.modulus)):
            raise InvariantViolation("orbits do not partition the group")
        for orb in self.orbits:
            members = set(orb)
            for g in self.group.generators:
                if any(x * g % self.modulus not in members for x in orb):
                    raise InvariantViolation(f"orbit {orb} not closed under {g}")

    @property
    def tags(self) -> list[tuple[int, int]]:
        """(least element, size) for each orbit, written <o>_s."""
        return [(orb[0], len(orb)) for orb in self.orbits]

    def orbit_of(self, x: int) -> tuple[int, ...]:
        x %= self.modulus
        for orb in self.orbits:
            if x in orb:
                return orb
        raise InvariantViolation(f"{x} lies in no orbit")  # pragma: no cover

    def __len__(self) -> int:
        return len(self.orbits)


def _orbits_of(points, gens, v: int) -> list[tuple[int, ...]]:
    left = set(points)
    out = []
    while left:
        start = min(left)
        orb = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for g in gens:
                y = x * g % v
                if y not in orb:
                    orb.add(y)
                    stack.append(y)
        left -= orb
        out.append(tuple(sorted(orb)))
    out.sort()
    return out


def orbit_decomposition(v: int, M: MultiplierGroup) -> OrbitSystem:
    if M.modulus != v:
        raise ParameterError(f"group acts modulo {M.modulus}, not {v}")
    return OrbitSystem(v, M, tuple(_orbits_of(range(v), M.generators, v)))


# ---------------------------------------------------------------------------
# intersection numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class IntersectionProfile:
    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)


def residue_profile(R: GroupRingElement, n: int) -> IntersectionProfile:
    counts = [0] * n
    for r in R.support:
        counts[r % n] += 1
    return IntersectionProfile(tuple(counts))


def _sorted_solutions(n: int, total: int, squares: int, cap: int):
    """Nonincreasing n-tuples with the given sum and sum of squares, entries <= cap."""
    out = []
    prefix: list[int] = []

    def rec(slots, s, q, top):
        if slots == 0:
            if s == 0 and q == 0:
                out.append(tuple(prefix))
            return
        # with s spread evenly the square sum is smallest; with one lump, largest
        lo_q = (s // slots) ** 2 * (slots - s % slots) + (s // slots + 1) ** 2 * (s % slots)
        if q < lo_q:
            return
        for b in range(min(top, s), -1, -1):
            if b * b > q:
                continue
            if b * slots < s:
                break
            prefix.append(b)
            rec(slots - 1, s - b, q - b * b, b)
            prefix.pop()

    rec(n, total, squares, cap)
    return out


def _distinct_permutations(t: tuple[int, ...]):
    counts: dict[int, int] = {}
    for x in t:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    out: list[int] = []

    def rec():
        if len(out) == len(t):
            yield tuple(out)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                out.append(key)
                yield from rec()
                out.pop()
                counts[key] += 1

    yield from rec()


def _arrangements(t: tuple[int, ...]) -> int:
    out = factorial(len(t))
    for c in Counter(t).values():
        out //= factorial(c)
    return out


def intersection_profiles(p: RdsParams) -> list[IntersectionProfile]:
    """All (b_0..b_{n-1}) with sum k and sum of squares k + lambda (m - gcd(n, m)).

    Ordered so that the lexicographically largest profile comes first.
    """
    d = gcd(p.n, p.m)
    squares = p.k + p.lam * (p.m - d)
    bases = list(_sorted_solutions(p.n, p.k, squares, p.m))
    total = 0
    for base in bases:
        total += _arrangements(base)
        if total > PROFILE_CAP:
            raise CapacityError(f"more than {PROFILE_CAP} profiles for {p}")
    out = []
    for base in bases:
        for perm in _distinct_permutations(base):
            if sum(perm) != p.k or sum(b * b for b in perm) != squares:
                raise InvariantViolation(f"bad profile {perm}")  # pragma: no cover
            out.append(IntersectionProfile(perm))
            if len(out) > PROFILE_CAP:
                raise CapacityError(f"more than {PROFILE_CAP} profiles for {p}")
    out.sort(reverse=True)
    return out


def _shift_group(n: int, m: int, gens) -> list[int]:
    """Shifts j*m mod n of the profile index coming from translations by j*m
    that commute with every generator."""
    mn = m * n
    js = [j for j in range(n) if all((g - 1) * j * m % mn == 0 for g in gens)]
    return sorted({j * m % n for j in js})


def _normal_profiles(profiles, shifts) -> list[IntersectionProfile]:
    keep = []
    for prof in profiles:
        c = prof.counts
        n = len(c)
        images = [tuple(c[(i - s) % n] for i in range(n)) for s in shifts]
        if c == max(images):
            keep.append(prof)
    return keep


# ---------------------------------------------------------------------------
# search jobs
# ---------------------------------------------------------------------------

@dataclass
class SearchJob:
    """Resumable lift search.  The frontier lists branch prefixes still to run."""

    m: int
    n: int
    k: int
    lam: int
    base: list[int]
    generators: list[int]
    normalize: bool = False
    frontier: list[list[int]] = field(default_factory=list)
    solutions: list[list[int]] = field(default_factory=list)
    started: bool = False

    @property
    def params(self) -> RdsParams:
        return RdsParams(self.m, self.n, self.k, self.lam)

    @property
    def done(self) -> bool:
        return self.started and not self.frontier

    def save(self, path) -> None:
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(asdict(self), sort_keys=True) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path) -> "SearchJob":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(**data)


@dataclass
class _Plan:
    choices: np.ndarray
    ncho: np.ndarray
    sizes: np.ndarray
    orbits: list[list[tuple[int, ...]]]
    profiles: np.ndarray


def _plan(job: SearchJob) -> _Plan:
    m, n = job.m, job.n
    mn = m * n
    gens = [g % mn for g in job.generators]
    base_gens = [g % m for g in gens]
    base_orbits = _orbits_of(job.base, base_gens, m)
    if sorted(x for o in base_orbits for x in o) != sorted(job.base):
        raise DomainError("base set is not a union of orbits")  # pragma: no cover
    for o in base_orbits:
        if any(x * g % m not in set(job.base) for x in o for g in base_gens):
            raise DomainError("base set is not fixed by the multiplier group")
    # largest orbits first, ties by least element
    base_orbits.sort(key=lambda o: (-len(o), o[0]))
    per_orbit = []
    for o in base_orbits:
        fibre = [x + j * m for x in o for j in range(n)]
        pre = [p for p in _orbits_of(fibre, gens, mn) if len(p) == len(o)]
        per_orbit.append(pre)
    n_orb = len(base_orbits)
    maxc = max([len(p) for p in per_orbit] + [1])
    maxs = max([len(o) for o in base_orbits] + [1])
    choices = np.zeros((n_orb, maxc, maxs), dtype=np.int64)
    ncho = np.zeros(n_orb, dtype=np.int64)
    sizes = np.array([len(o) for o in base_orbits], dtype=np.int64)
    for i, pre in enumerate(per_orbit):
        ncho[i] = len(pre)
        for j, orb in enumerate(pre):
            choices[i, j, : len(orb)] = orb
    p = job.params
    profs = intersection_profiles(p)
    if job.normalize:
        profs = _normal_profiles(profs, _shift_group(n, m, gens))
    parr = np.array([pr.counts for pr in profs], dtype=np.int64).reshape(len(profs), n)
    return _Plan(choices, ncho, sizes, per_orbit, parr)


def _initial_frontier(plan: _Plan, depth: int) -> list[list[int]]:
    depth = min(depth, len(plan.ncho))
    ranges = [range(int(c)) for c in plan.ncho[:depth]]
    return [list(pr) for pr in itertools.product(*ranges)]


def _run_prefix(job: SearchJob, plan: _Plan, prefix: list[int]) -> list[list[int]]:
    if plan.profiles.shape[0] == 0 or any(c == 0 for c in plan.ncho):
        return []
    choices = plan.choices.copy()
    ncho = plan.ncho.copy()
    for i, j in enumerate(prefix):
        choices[i, 0] = plan.choices[i, j]
        ncho[i] = 1
    picks = _kernels.orbit_search(choices, ncho, plan.sizes, job.m * job.n, job.m,
                                  job.n, job.lam, plan.profiles)
    out = []
    for row in picks:
        elems = []
        for i, j in enumerate(row):
            j = prefix[i] if i < len(prefix) else int(j)
            elems.extend(plan.orbits[i][j])
        out.append(sorted(elems))
    return out


def _split_depth(plan: _Plan, threads: int) -> int:
    if threads <= 1:
        return min(1, len(plan.ncho))
    depth, width = 0, 1
    while depth < len(plan.ncho) and width < 4 * threads and depth < 4:
        width *= int(plan.ncho[depth])
        depth += 1
    return depth


def run_job(job: SearchJob, *, threads: int = 1, checkpoint=None) -> SearchJob:
    """Advance a job to completion, saving after every finished prefix."""
    plan = _plan(job)
    if not job.started:
        job.frontier = _initial_frontier(plan, _split_depth(plan, threads))
        job.started = True
        if checkpoint is not None:
            job.save(checkpoint)

    def finish(prefix, found):
        job.frontier.remove(prefix)
        job.solutions.extend(found)
        job.solutions.sort()
        if checkpoint is not None:
            job.save(checkpoint)

    pending = [list(p) for p in job.frontier]
    if threads <= 1:
        for prefix in pending:
            finish(prefix, _run_prefix(job, plan, prefix))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [(p, pool.submit(_run_prefix, job, plan, p)) for p in pending]
            for prefix, fut in futures:
                finish(prefix, fut.result())
    return job


def _check_lift(D: GroupRingElement, ds: DesignParams, n: int):
    if ds.lam % n:
        raise ParameterError(f"n={n} does not divide lambda={ds.lam}")
    if not verify_ds(D, ds):
        raise ParameterError(f"base set is not a {ds} difference set")
    return RdsParams.lifting(ds, n)


def _finish_results(sols, D: GroupRingElement, p: RdsParams) -> list[GroupRingElement]:
    out = []
    for s in sorted({tuple(x) for x in sols}):
        R = GroupRingElement.from_set(s, p.order)
        if not verify_rds(R, p):
            raise InvariantViolation(f"search emitted a non-RDS {s}")
        img, _ = project(R, p, p.n)
        if img != D:
            raise InvariantViolation(f"search emitted a set that does not lift {D}")
        out.append(R)
    return out


def search_lifts(D: GroupRingElement, ds: DesignParams, n: int, t: int, *,
                 normalize: bool = False, threads: int = 1,
                 checkpoint=None) -> list[GroupRingElement]:
    """All liftings of D to an (m, n, k, lambda/n) RDS that are fixed by t.

    With ``normalize`` only intersection profiles that are lexicographically
    largest among their images under the translations by N commuting with t
    are searched; ``expand_normalized`` recovers the rest.
    """
    if ds.lam % n:
        return []
    p = _check_lift(D, ds, n)
    mn = p.order
    t %= mn
    if gcd(t, mn) != 1:
        raise DomainError(f"t={t} is not a unit modulo {mn}")
    base = multiplier_group_bruteforce(D, ds)
    if t not in certified_rds_multipliers(ds, n, base):
        raise DomainError(f"t={t} is not certified as a multiplier of the lifts")
    if apply_numerical(D, t) != D:
        raise DomainError(f"D is not fixed by t={t}; search a fixed translate instead")
    return _search_group(D, p, [t], normalize=normalize, threads=threads,
                         checkpoint=checkpoint)


def _search_group(D, p: RdsParams, gens, *, normalize=False, threads=1, checkpoint=None):
    job = None
    if checkpoint is not None and Path(checkpoint).exists():
        job = SearchJob.load(checkpoint)
        if (job.m, job.n, job.k, job.lam) != (p.m, p.n, p.k, p.lam) or \
                job.base != D.support or job.normalize != normalize:
            raise ParameterError(f"job file {checkpoint} belongs to a different search")
    if job is None:
        job = SearchJob(p.m, p.n, p.k, p.lam, D.support, sorted(set(gens)), normalize)
    run_job(job, threads=threads, checkpoint=checkpoint)
    return _finish_results(job.solutions, D, p)


def expand_normalized(sols, p: RdsParams, t: int) -> list[GroupRingElement]:
    """Undo the profile normalization by translating with every j*m commuting with t."""
    mn = p.order
    out = set()
    for R in sols:
        for j in range(p.n):
            if (t - 1) * j * p.m % mn == 0:
                out.add(tuple(translate(R, j * p.m).support))
    return [GroupRingElement.from_set(s, mn) for s in sorted(out)]


def search_multiplier(ds: DesignParams, n: int, base: MultiplierGroup) -> MultiplierGroup:
    """The group M used for the orbit search.

    When gcd(mn, k) = 1 every certified multiplier is used; otherwise a
    single certified t of largest order.
    """
    p = RdsParams.lifting(ds, n)
    mn = p.order
    cert = certified_rds_multipliers(ds, n, base)
    if gcd(mn, p.k) == 1:
        return MultiplierGroup.from_elements(
            MultiplierGroup.generated_by(cert, mn).elements, mn)
    best = max(cert, key=lambda t: (multiplicative_order(t, mn) if mn > 1 else 1, -t))
    return MultiplierGroup.generated_by([best], mn)


def lifts_up_to_translation(D: GroupRingElement, ds: DesignParams, n: int, *,
                            threads: int = 1) -> list[GroupRingElement]:
    """Liftings of D and its translates fixed by the search group.

    For a regular RDS some translate is fixed by the chosen multiplier,
    so every lifting of a translate of D appears here up to translation.
    """
    p = _check_lift(D, ds, n)
    base = multiplier_group_bruteforce(D, ds)
    M = search_multiplier(ds, n, base)
    gens = list(M.generators) or [1]
    out: dict[tuple, GroupRingElement] = {}
    for s in range(ds.v):
        Ds = translate(D, s)
        if all(apply_numerical(Ds, g) == Ds for g in gens):
            for R in _search_group(Ds, p, gens, threads=threads):
                out[tuple(R.support)] = R
    return [out[key] for key in sorted(out)]


# ---------------------------------------------------------------------------
# brute force and classification
# ---------------------------------------------------------------------------

def exhaustive_rds_bruteforce(p: RdsParams) -> list[GroupRingElement]:
    """Every (m, n, k, lambda) RDS in Z_mn relative to the multiples of m."""
    mn = p.order
    if comb(mn, p.k) > BRUTEFORCE_CAP:
        raise CapacityError(f"C({mn},{p.k}) exceeds {BRUTEFORCE_CAP}")
    rows = _kernels.rds_backtrack(p.m, p.n, p.k, p.lam)
    found = set()
    for row in rows:
        for s in range(mn):
            found.add(tuple(sorted((int(x) + s) % mn for x in row)))
    out = []
    for key in sorted(found):
        R = GroupRingElement.from_set(key, mn)
        if not verify_rds(R, p):
            raise InvariantViolation(f"brute force emitted a non-RDS {key}")
        out.append(R)
    return out


@dataclass(frozen=True)
class EquivalenceClass:
    representative: GroupRingElement
    members: tuple[GroupRingElement, ...]

    def __len__(self) -> int:
        return len(self.members)


def canonical_form(R: GroupRingElement) -> tuple[int, ...]:
    """Lexicographically least sorted image of R under x -> t x + s."""
    v = R.modulus
    best = None
    for t in range(1, v + 1):
        if gcd(t, v) != 1:
            continue
        img = [r * t % v for r in R.support]
        for a in img:
            cand = tuple(sorted((x - a) % v for x in img))
            if best is None or cand < best:
                best = cand
    return best if best is not None else ()


def classify_equivalence(sets, v: int) -> list[EquivalenceClass]:
    groups: dict[tuple, list[GroupRingElement]] = {}
    for R in sets:
        if R.modulus != v:
            raise ParameterError(f"set has modulus {R.modulus}, expected {v}")
        groups.setdefault(canonical_form(R), []).append(R)
    return [
        EquivalenceClass(GroupRingElement.from_set(key, v),
                         tuple(sorted(groups[key], key=lambda r: r.support)))
        for key in sorted(groups)
    ]


def count_inequivalent_lifts(D: GroupRingElement, ds: DesignParams, n: int,
                             *, threads: int = 1) -> int:
    p = RdsParams.lifting(ds, n)
    return len(classify_equivalence(lifts_up_to_translation(D, ds, n, threads=threads),
                                    p.order))
