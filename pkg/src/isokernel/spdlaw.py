"""Strict positive definiteness decided from coefficient supports.

Only the shape of the support matters, never the coefficient values:

* circle and complex sphere: the relevant index set must meet every full
  arithmetic progression ``nZ + j``;
* spheres (finite or infinite dimensional): it must contain infinitely many
  even and infinitely many odd integers;
* every other space: it must be infinite.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import semilinear as sl
from .errors import DegenerateInputError, UsageError
from .kernelmodel import (BiCoefficientSeq, Kernel, SpaceDescriptor, diff_support,
                          product_support, support)

STRICT = "strict"
POSITIVE_ONLY = "positive-only"

CRITERIA = {
    "full-ap": "every full arithmetic progression is met",
    "parity": "infinitely many even and infinitely many odd indices",
    "infinite": "support infinite",
}


@dataclass(frozen=True)
class SpdVerdict:
    decision: str
    criterion: str
    evidence: sl.SemilinearSet
    witness: Optional[dict] = None

    @property
    def strict(self) -> bool:
        return self.decision == STRICT

    def to_json(self) -> dict:
        return {"decision": self.decision, "criterion": self.criterion,
                "evidence": self.evidence.to_json(), "witness": self.witness}


def _criterion_tag(where: SpaceDescriptor, product: bool) -> str:
    family = {"circle": "circle", "complexSphere": "complex-sphere",
              "sphere": "sphere", "sphereInf": "sphere"}.get(where.kind, "projective")
    rule = where.criterion
    scope = "product" if product else "single"
    return f"{family}-{scope}-{rule}"


def _judge(where: SpaceDescriptor, evidence: sl.SemilinearSet, product: bool) -> SpdVerdict:
    rule = where.criterion
    tag = _criterion_tag(where, product)
    if rule == "full-ap":
        ok, ap = sl.hits_every_full_ap(evidence)
        witness = None if ok else {"kind": "missed-progression", "n": ap[0], "j": ap[1],
                                   "note": f"misses {ap[0]}Z+{ap[1]}"}
        return SpdVerdict(STRICT if ok else POSITIVE_ONLY, tag, evidence, witness)
    if rule == "parity":
        even, odd = sl.parity_split(evidence)
        lacking = [name for name, part in (("even", even), ("odd", odd)) if not sl.is_infinite(part)]
        if not lacking:
            return SpdVerdict(STRICT, tag, evidence)
        name = lacking[0]
        part = even if name == "even" else odd
        note = f"no {name} indices" if not part else f"finitely many {name} indices (max {max(part.finite)})"
        return SpdVerdict(POSITIVE_ONLY, tag, evidence,
                          {"kind": "parity-deficiency", "parity": name,
                           "members": list(part.finite), "note": note})
    if sl.is_infinite(evidence):
        return SpdVerdict(STRICT, tag, evidence)
    return SpdVerdict(POSITIVE_ONLY, tag, evidence,
                      {"kind": "finite-support", "max": max(evidence.finite),
                       "note": "support finite" if not product else "sumset finite"})


def _check_usable(f: Kernel, where: SpaceDescriptor):
    if where.kind == "spacetime":
        raise UsageError("space-time kernels are checked by sampling: use numverify.spacetime_check")
    if f.space != where:
        raise UsageError(f"kernel lives on {f.space}, not {where}")
    if f.is_zero():
        raise DegenerateInputError("the zero kernel is not classified")


def _index_set(f: Kernel) -> sl.SemilinearSet:
    return diff_support(f) if isinstance(f, BiCoefficientSeq) else support(f)


def decide_single(f: Kernel, where: Optional[SpaceDescriptor] = None) -> SpdVerdict:
    """Verdict for ``K(x, y) = f(t(x, y))`` on its space."""
    where = f.space if where is None else where
    _check_usable(f, where)
    evidence = _index_set(f)
    if where.kind == "circle":
        evidence = evidence | -evidence
    return _judge(where, evidence, product=False)


def decide_product(f: Kernel, g: Kernel, where: Optional[SpaceDescriptor] = None) -> SpdVerdict:
    """Verdict for the pointwise product of two kernels on the same space."""
    where = f.space if where is None else where
    _check_usable(f, where)
    _check_usable(g, where)
    return _judge(where, product_support(f, g), product=True)


def explain(verdict: SpdVerdict) -> str:
    """Stable multi-line rendering for reports and golden files."""
    rule = next(v for k, v in CRITERIA.items() if verdict.criterion.endswith(k))
    lines = [f"decision: {verdict.decision}",
             f"criterion: {verdict.criterion} ({rule})",
             f"evidence: {verdict.evidence}"]
    if verdict.witness is not None:
        lines.append(f"witness: {verdict.witness['note']}")
    return "\n".join(lines)


def check_witness(verdict: SpdVerdict, bound: int = 10 ** 5) -> bool:
    """Re-check a positive-only witness against the evidence set by enumeration."""
    w = verdict.witness
    if w is None:
        return verdict.strict
    members = sl.enumerate_upto(verdict.evidence, bound)
    if w["kind"] == "missed-progression":
        return all((x - w["j"]) % w["n"] for x in members)
    if w["kind"] == "parity-deficiency":
        parity = 0 if w["parity"] == "even" else 1
        hits = [x for x in members if x % 2 == parity]
        return hits == sorted(w["members"])
    return not verdict.evidence.rays and max(members) == w["max"]

