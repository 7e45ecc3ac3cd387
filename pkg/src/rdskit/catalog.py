"""JSON-lines exchange format for designs and weighing matrices.

One object per line::

    {"kind": "rds", "modulus": 14, "params": {"m": 7, "n": 2, "k": 4, "lam": 1},
     "elements": [0, 3, 5, 13], "signs": null, "provenance": "constructed:singer",
     "verified": true, "verified_at": "2026-01-01T00:00:00Z"}

Residues are ascending; ``signs`` is a parallel list for ``cw`` entries.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .cwkit import SignedCirculant, verify_cw
from .errors import CatalogIOError, ParameterError, RdsKitError, VerificationError
from .groupring import (
    DesignParams,
    GroupRingElement,
    RdsParams,
    correlation_vector,
    verify_ds,
    verify_rds,
)

KINDS = ("ds", "rds", "cw")
PROVENANCE_TAGS = ("constructed", "searched", "ingested")
_FIELDS = ("kind", "modulus", "params", "elements", "signs", "provenance",
           "verified", "verified_at")


def utc_stamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class CatalogEntry:
    kind: str
    modulus: int
    params: tuple[tuple[str, int], ...]
    elements: tuple[int, ...]
    signs: tuple[int, ...] | None = None
    provenance: str = "ingested:unknown"
    verified: bool = False
    verified_at: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown kind {self.kind!r}")
        if list(self.elements) != sorted(set(self.elements)):
            raise ParameterError("elements must be strictly ascending")
        if any(not 0 <= e < self.modulus for e in self.elements):
            raise ParameterError(f"element outside [0, {self.modulus})")
        if (self.signs is None) != (self.kind != "cw"):
            raise ParameterError("signs are required for cw entries and only for them")
        if self.signs is not None and len(self.signs) != len(self.elements):
            raise ParameterError("signs and elements differ in length")
        tag = self.provenance.split(":", 1)[0]
        if tag not in PROVENANCE_TAGS or ":" not in self.provenance:
            raise ParameterError(f"bad provenance {self.provenance!r}")
        if self.verified and not self.verified_at:
            raise ParameterError("verified entries carry a timestamp")
        self._check_params()

    # -- typed views --------------------------------------------------------
    @property
    def param_dict(self) -> dict[str, int]:
        return dict(self.params)

    def _check_params(self):
        p = self.param_dict
        if self.kind == "ds":
            dp = self.design_params()
            if dp.v != self.modulus:
                raise ParameterError("ds modulus must equal v")
        elif self.kind == "rds":
            rp = self.rds_params()
            if rp.order != self.modulus:
                raise ParameterError("rds modulus must equal m*n")
        else:
            if set(p) != {"n", "k"} or p["n"] != self.modulus:
                raise ParameterError("cw params are n (= modulus) and k")

    def design_params(self) -> DesignParams:
        p = self.param_dict
        try:
            return DesignParams(p["v"], p["k"], p["lam"])
        except KeyError as exc:
            raise ParameterError(f"ds entry lacks {exc}") from None

    def rds_params(self) -> RdsParams:
        p = self.param_dict
        try:
            return RdsParams(p["m"], p["n"], p["k"], p["lam"])
        except KeyError as exc:
            raise ParameterError(f"rds entry lacks {exc}") from None

    def element(self) -> GroupRingElement:
        return GroupRingElement.from_set(self.elements, self.modulus)

    def signed(self) -> SignedCirculant:
        return SignedCirculant.from_lists(self.elements, self.signs, self.modulus)

    # -- verification -------------------------------------------------------
    def check(self) -> bool:
        if self.kind == "ds":
            return verify_ds(self.element(), self.design_params())
        if self.kind == "rds":
            return verify_rds(self.element(), self.rds_params())
        W = self.signed()
        return W.weight == self.param_dict["k"] and verify_cw(W)

    def failing_residue(self) -> int | None:
        """First residue where the defining equation is violated."""
        if self.kind == "cw":
            A = self.signed().element()
            want = [self.param_dict["k"]] + [0] * (self.modulus - 1)
        else:
            A = self.element()
            if self.kind == "ds":
                p = self.design_params()
                want = [p.k] + [p.lam] * (p.v - 1)
            else:
                p = self.rds_params()
                want = [p.k] + [0 if g % p.m == 0 else p.lam for g in range(1, p.order)]
        if len(A) != self.param_dict["k"]:
            return 0
        conv = correlation_vector(A, A)
        for g, (a, b) in enumerate(zip(conv, want)):
            if a != b:
                return g
        return None

    def stamped(self, when: str | None = None) -> "CatalogEntry":
        """A verified copy, or VerificationError."""
        try:
            ok = self.check()
        except RdsKitError as exc:
            raise VerificationError(f"{self.kind} entry rejected: {exc}") from None
        if not ok:
            raise VerificationError(
                f"{self.kind} entry fails at residue {self.failing_residue()}")
        return CatalogEntry(self.kind, self.modulus, self.params, self.elements, self.signs,
                            self.provenance, True, when or utc_stamp())

    # -- serialization ------------------------------------------------------
    def to_json(self) -> str:
        obj = {
            "kind": self.kind,
            "modulus": self.modulus,
            "params": self.param_dict,
            "elements": list(self.elements),
            "signs": None if self.signs is None else list(self.signs),
            "provenance": self.provenance,
            "verified": self.verified,
            "verified_at": self.verified_at,
        }
        return json.dumps(obj, separators=(", ", ": "))

    @classmethod
    def from_json(cls, line: str) -> "CatalogEntry":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CatalogIOError(f"bad JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise CatalogIOError("each line must be a JSON object")
        missing = [f for f in ("kind", "modulus", "params", "elements") if f not in obj]
        if missing:
            raise ParameterError(f"entry lacks {missing}")
        extra = set(obj) - set(_FIELDS)
        if extra:
            raise ParameterError(f"unknown fields {sorted(extra)}")
        params = obj["params"]
        if not isinstance(params, dict) or not all(isinstance(v, int) for v in params.values()):
            raise ParameterError("params must map names to integers")
        signs = obj.get("signs")
        return cls(
            kind=obj["kind"],
            modulus=int(obj["modulus"]),
            params=tuple(sorted(params.items())),
            elements=tuple(int(e) for e in obj["elements"]),
            signs=None if signs is None else tuple(int(s) for s in signs),
            provenance=obj.get("provenance", "ingested:unknown"),
            verified=bool(obj.get("verified", False)),
            verified_at=obj.get("verified_at"),
        )


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def ds_entry(D: GroupRingElement, p: DesignParams, provenance: str,
             when: str | None = None) -> CatalogEntry:
    return CatalogEntry("ds", p.v, (("k", p.k), ("lam", p.lam), ("v", p.v)),
                        tuple(D.support), None, provenance).stamped(when)


def rds_entry(R: GroupRingElement, p: RdsParams, provenance: str,
              when: str | None = None) -> CatalogEntry:
    return CatalogEntry("rds", p.order, (("k", p.k), ("lam", p.lam), ("m", p.m), ("n", p.n)),
                        tuple(R.support), None, provenance).stamped(when)


def cw_entry(W: SignedCirculant, provenance: str, when: str | None = None) -> CatalogEntry:
    return CatalogEntry("cw", W.modulus, (("k", W.weight), ("n", W.modulus)),
                        tuple(W.support), tuple(W.sign_list), provenance).stamped(when)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def read_catalog(path) -> list[CatalogEntry]:
    """Parse a catalog; entries marked verified are re-verified."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogIOError(f"cannot read {path}: {exc}") from None
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            entry = CatalogEntry.from_json(line)
        except RdsKitError as exc:
            raise type(exc)(f"{path}:{lineno}: {exc}") from None
        if entry.verified:
            try:
                ok = entry.check()
            except RdsKitError:
                ok = False
            if not ok:
                raise VerificationError(
                    f"{path}:{lineno}: {entry.kind} entry fails at residue "
                    f"{entry.failing_residue()}")
        out.append(entry)
    return out


def write_catalog(path, entries: Iterable[CatalogEntry]) -> None:
    lines = []
    for e in entries:
        if e.verified and not e.check():
            raise VerificationError(f"refusing to persist a failing {e.kind} entry as verified")
        lines.append(e.to_json())
    try:
        Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    except OSError as exc:
        raise CatalogIOError(f"cannot write {path}: {exc}") from None
