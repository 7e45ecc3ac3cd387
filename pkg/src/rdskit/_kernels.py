"""Hot inner loops, with a numba path and a pure numpy/Python path.

The backend is picked at import from ``RDSKIT_BACKEND`` (``numba`` or
``numpy``); numba is used when importable and not disabled.  Both paths
return identical results; ``use_backend`` switches at runtime so tests and
the benchmark can compare them.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

_requested = os.environ.get("RDSKIT_BACKEND", "numba").strip().lower()
BACKEND = "numba" if (HAVE_NUMBA and _requested != "numpy") else "numpy"


def use_backend(name: str) -> str:
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    prev, BACKEND = BACKEND, name
    return prev


# ---------------------------------------------------------------------------
# difference tally: out[(a - b) mod v] += w_a * w_b
# ---------------------------------------------------------------------------

def _difference_counts_np(elems, weights, v):
    diffs = np.subtract.outer(elems, elems) % v
    w = np.multiply.outer(weights, weights)
    return np.bincount(diffs.ravel(), weights=w.ravel(), minlength=v).astype(np.int64)


def _cross_counts_np(a, wa, b, wb, v):
    diffs = np.subtract.outer(a, b) % v
    w = np.multiply.outer(wa, wb)
    return np.bincount(diffs.ravel(), weights=w.ravel(), minlength=v).astype(np.int64)


# ---------------------------------------------------------------------------
# multiplier scan: is D^(t) = D + s for some s?
# ---------------------------------------------------------------------------

def _multiplier_flags_np(elems, v, candidates):
    k = elems.shape[0]
    member = np.zeros(v, dtype=bool)
    member[elems] = True
    out = np.zeros(candidates.shape[0], dtype=bool)
    if k == 0:
        out[:] = True
        return out
    for idx, t in enumerate(candidates):
        img = (elems * t) % v
        # D^(t) - s must equal D; s = img[0] - d for some d in D
        shifts = (img[0] - elems) % v
        moved = (img[None, :] - shifts[:, None]) % v
        out[idx] = bool(member[moved].all(axis=1).any())
    return out


# ---------------------------------------------------------------------------
# exhaustive RDS enumeration with 0 forced into the set
# ---------------------------------------------------------------------------

def _rds_backtrack_py(m, n, k, lam, limit):
    v = m * n
    tally = np.zeros(v, dtype=np.int64)
    chosen = [0]
    found = []

    def ok_after_add(x):
        bad = False
        touched = []
        for y in chosen:
            for d in ((x - y) % v, (y - x) % v):
                tally[d] += 1
                touched.append(d)
                if d % m == 0 or tally[d] > lam:
                    bad = True
        return bad, touched

    def rec(start):
        if len(found) >= limit:
            return
        if len(chosen) == k:
            found.append(list(chosen))
            return
        need = k - len(chosen)
        for x in range(start, v - need + 1):
            bad, touched = ok_after_add(x)
            if not bad:
                chosen.append(x)
                rec(x + 1)
                chosen.pop()
            for d in touched:
                tally[d] -= 1

    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rec(1)
    return np.array(found, dtype=np.int64).reshape(len(found), k)


# ---------------------------------------------------------------------------
# orbit backtracking: pick one preimage orbit per base orbit
# ---------------------------------------------------------------------------

def _orbit_search_py(choices, ncho, sizes, mn, m, n, lam, profiles, limit):
    """choices[i, j, :sizes[i]] is preimage orbit j < ncho[i] of base orbit i."""
    n_orbits = choices.shape[0]
    tally = np.zeros(mn, dtype=np.int64)
    prof = np.zeros(n, dtype=np.int64)
    current: list[int] = []
    picks = np.zeros(n_orbits, dtype=np.int64)
    results = []
    offsync = np.arange(mn) % m  # residue class of a difference

    def fits_profile():
        return bool(np.any(np.all(profiles >= prof[None, :], axis=1)))

    def rec(i):
        if len(results) >= limit:
            return
        if i == n_orbits:
            results.append(picks.copy())
            return
        s = sizes[i]
        cur = np.array(current, dtype=np.int64)
        for j in range(ncho[i]):
            orb = choices[i, j, :s]
            delta = _difference_counts_np(orb, np.ones(s, dtype=np.int64), mn)
            if cur.size:
                cross = _cross_counts_np(orb, np.ones(s, dtype=np.int64),
                                         cur, np.ones(cur.size, dtype=np.int64), mn)
                delta += cross + cross[(-np.arange(mn)) % mn]
            delta[0] -= s  # self pairs; any remainder at 0 is an overlap
            tally[:] += delta
            np.add.at(prof, orb % n, 1)
            bad_n = np.any(tally[offsync == 0] > 0)
            bad_l = np.any(tally > lam)
            if not bad_n and not bad_l and fits_profile():
                picks[i] = j
                current.extend(orb.tolist())
                rec(i + 1)
                del current[len(current) - s:]
            tally[:] -= delta
            np.subtract.at(prof, orb % n, 1)

    rec(0)
    if not results:
        return np.zeros((0, n_orbits), dtype=np.int64)
    return np.array(results, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _difference_counts_nb(elems, weights, v):
        out = np.zeros(v, dtype=np.int64)
        k = elems.shape[0]
        for i in range(k):
            a = elems[i]
            wa = weights[i]
            for j in range(k):
                d = (a - elems[j]) % v
                out[d] += wa * weights[j]
        return out

    @njit(cache=True)
    def _cross_counts_nb(a, wa, b, wb, v):
        out = np.zeros(v, dtype=np.int64)
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                out[(a[i] - b[j]) % v] += wa[i] * wb[j]
        return out

    @njit(cache=True)
    def _multiplier_flags_nb(elems, v, candidates):
        k = elems.shape[0]
        member = np.zeros(v, dtype=np.bool_)
        for i in range(k):
            member[elems[i]] = True
        out = np.zeros(candidates.shape[0], dtype=np.bool_)
        img = np.empty(k, dtype=np.int64)
        for c in range(candidates.shape[0]):
            t = candidates[c]
            if k == 0:
                out[c] = True
                continue
            for i in range(k):
                img[i] = (elems[i] * t) % v
            for j in range(k):
                s = (img[0] - elems[j]) % v
                good = True
                for i in range(k):
                    if not member[(img[i] - s) % v]:
                        good = False
                        break
                if good:
                    out[c] = True
                    break
        return out

    @njit(cache=True)
    def _rds_backtrack_nb(m, n, k, lam, limit):
        v = m * n
        cap = 1024
        found = np.zeros((cap, k), dtype=np.int64)
        nfound = 0
        if k == 0:
            return found[:0]
        tally = np.zeros(v, dtype=np.int64)
        chosen = np.zeros(k, dtype=np.int64)
        chosen[0] = 0
        depth = 1
        nxt = np.zeros(k + 1, dtype=np.int64)
        nxt[1] = 1
        if k == 1:
            found[0, 0] = 0
            return found[:1]
        while depth >= 1:
            x = nxt[depth]
            need = k - depth
            if x > v - need:
                # exhausted this level: pop previous element
                depth -= 1
                if depth == 0:
                    break
                y = chosen[depth]
                for i in range(depth):
                    tally[(y - chosen[i]) % v] -= 1
                    tally[(chosen[i] - y) % v] -= 1
                nxt[depth] = y + 1
                continue
            bad = False
            for i in range(depth):
                d1 = (x - chosen[i]) % v
                d2 = (chosen[i] - x) % v
                tally[d1] += 1
                tally[d2] += 1
                if d1 % m == 0 or tally[d1] > lam or tally[d2] > lam:
                    bad = True
            if bad:
                for i in range(depth):
                    tally[(x - chosen[i]) % v] -= 1
                    tally[(chosen[i] - x) % v] -= 1
                nxt[depth] = x + 1
                continue
            chosen[depth] = x
            if depth + 1 == k:
                if nfound == found.shape[0]:
                    bigger = np.zeros((found.shape[0] * 2, k), dtype=np.int64)
                    bigger[:nfound] = found[:nfound]
                    found = bigger
                found[nfound] = chosen
                nfound += 1
                for i in range(depth):
                    tally[(x - chosen[i]) % v] -= 1
                    tally[(chosen[i] - x) % v] -= 1
                if nfound >= limit:
                    break
                nxt[depth] = x + 1
                continue
            depth += 1
            nxt[depth] = x + 1
        return found[:nfound]

    @njit(cache=True, nogil=True)
    def _orbit_search_nb(choices, ncho, sizes, mn, m, n, lam, profiles, limit):
        n_orbits = choices.shape[0]
        tally = np.zeros(mn, dtype=np.int64)
        prof = np.zeros(n, dtype=np.int64)
        total = 0
        for i in range(n_orbits):
            total += sizes[i]
        current = np.zeros(total, dtype=np.int64)
        ncur = 0
        picks = np.zeros(n_orbits, dtype=np.int64)
        nxt = np.zeros(n_orbits + 1, dtype=np.int64)
        cap = 64
        results = np.zeros((cap, n_orbits), dtype=np.int64)
        nres = 0
        if n_orbits == 0:
            return results[:1]
        depth = 0
        while depth >= 0:
            j = nxt[depth]
            if j >= ncho[depth]:
                depth -= 1
                if depth < 0:
                    break
                # undo the orbit chosen at this depth
                s = sizes[depth]
                pj = picks[depth]
                ncur -= s
                for a in range(s):
                    x = choices[depth, pj, a]
                    prof[x % n] -= 1
                    for b in range(ncur):
                        y = current[b]
                        tally[(x - y) % mn] -= 1
                        tally[(y - x) % mn] -= 1
                    for b in range(s):
                        if b != a:
                            tally[(x - choices[depth, pj, b]) % mn] -= 1
                nxt[depth] = pj + 1
                continue
            s = sizes[depth]
            bad = False
            # apply
            for a in range(s):
                x = choices[depth, j, a]
                prof[x % n] += 1
                for b in range(ncur):
                    y = current[b]
                    d1 = (x - y) % mn
                    d2 = (y - x) % mn
                    tally[d1] += 1
                    tally[d2] += 1
                    if d1 % m == 0 or tally[d1] > lam or tally[d2] > lam:
                        bad = True
                for b in range(s):
                    if b != a:
                        d = (x - choices[depth, j, b]) % mn
                        tally[d] += 1
                        if d % m == 0 or tally[d] > lam:
                            bad = True
            if not bad:
                fits = False
                for p in range(profiles.shape[0]):
                    good = True
                    for r in range(n):
                        if prof[r] > profiles[p, r]:
                            good = False
                            break
                    if good:
                        fits = True
                        break
                if not fits:
                    bad = True
            if bad:
                for a in range(s):
                    x = choices[depth, j, a]
                    prof[x % n] -= 1
                    for b in range(ncur):
                        y = current[b]
                        tally[(x - y) % mn] -= 1
                        tally[(y - x) % mn] -= 1
                    for b in range(s):
                        if b != a:
                            tally[(x - choices[depth, j, b]) % mn] -= 1
                nxt[depth] = j + 1
                continue
            picks[depth] = j
            for a in range(s):
                current[ncur + a] = choices[depth, j, a]
            ncur += s
            if depth + 1 == n_orbits:
                if nres == results.shape[0]:
                    bigger = np.zeros((results.shape[0] * 2, n_orbits), dtype=np.int64)
                    bigger[:nres] = results[:nres]
                    results = bigger
                results[nres] = picks
                nres += 1
                # undo and advance
                ncur -= s
                for a in range(s):
                    x = choices[depth, j, a]
                    prof[x % n] -= 1
                    for b in range(ncur):
                        y = current[b]
                        tally[(x - y) % mn] -= 1
                        tally[(y - x) % mn] -= 1
                    for b in range(s):
                        if b != a:
                            tally[(x - choices[depth, j, b]) % mn] -= 1
                if nres >= limit:
                    break
                nxt[depth] = j + 1
                continue
            depth += 1
            nxt[depth] = 0
        return results[:nres]


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def difference_counts(elems, weights, v: int) -> np.ndarray:
    elems, weights = _i64(elems), _i64(weights)
    if BACKEND == "numba":
        return _difference_counts_nb(elems, weights, int(v))
    return _difference_counts_np(elems, weights, int(v))


def cross_counts(a, wa, b, wb, v: int) -> np.ndarray:
    a, wa, b, wb = _i64(a), _i64(wa), _i64(b), _i64(wb)
    if BACKEND == "numba":
        return _cross_counts_nb(a, wa, b, wb, int(v))
    return _cross_counts_np(a, wa, b, wb, int(v))


def multiplier_flags(elems, v: int, candidates) -> np.ndarray:
    elems, candidates = _i64(elems), _i64(candidates)
    if BACKEND == "numba":
        return _multiplier_flags_nb(elems, int(v), candidates)
    return _multiplier_flags_np(elems, int(v), candidates)


def rds_backtrack(m: int, n: int, k: int, lam: int, limit: int = 1 << 62) -> np.ndarray:
    """All k-subsets of Z_mn containing 0 that satisfy the RDS tally bounds."""
    if BACKEND == "numba":
        return _rds_backtrack_nb(int(m), int(n), int(k), int(lam), int(limit))
    return _rds_backtrack_py(int(m), int(n), int(k), int(lam), int(limit))


def orbit_search(choices, ncho, sizes, mn, m, n, lam, profiles,
                 limit: int = 1 << 62) -> np.ndarray:
    """Backtrack over one preimage orbit per base orbit; rows are choice indices."""
    choices, ncho, sizes = _i64(choices), _i64(ncho), _i64(sizes)
    profiles = _i64(profiles)
    if BACKEND == "numba":
        return _orbit_search_nb(choices, ncho, sizes, int(mn), int(m), int(n), int(lam),
                                profiles, int(limit))
    return _orbit_search_py(choices, ncho, sizes, int(mn), int(m), int(n), int(lam),
                            profiles, int(limit))
