"""Sampling checks for space-time kernels ``F(u, t) = sum_k a_k(F; u) R_k(t)``.

Coefficient functions of the group variable are built from a small
expression grammar whose every production preserves positive
definiteness on the group:

* ``{"const": c}`` with ``c >= 0``;
* ``{"cos": lam}``: ``cos(lam . u)`` (``lam`` a vector on ``R^m``);
* ``{"add": [e1, e2, ...]}`` and ``{"mul": [e1, e2, ...]}``;
* ``{"pow": [e, n]}`` with integer ``n >= 0``;
* ``{"table": [v_0, ..., v_{order-1}]}`` on a finite group, accepted only
  if ``[v(a^{-1} b)]_{a,b}`` has no negative eigenvalue.

A check samples group elements ``u_1..u_p`` and a complex vector ``c``,
forms ``q_{k,l} = c^T [a_k(F; u_i^{-1} u_j) a_l(G; u_i^{-1} u_j)] conj(c)``
and records which ``k + l <= N`` carry a positive ``q``.  This is sampling
evidence only: the verdict reads "consistent with strict up to N" or
"inconsistent with strict up to N".
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..errors import UsageError, ValidationError
from ..groups import GroupDescriptor
from ..kernelmodel import CoefficientSeq

PSD_TOL = 1e-12
Q_RTOL = 1e-10


def _check_expr(expr, group: GroupDescriptor, path: str):
    if not isinstance(expr, Mapping) or len(expr) != 1:
        raise ValidationError(path, "expression must be a single-key object")
    (op, arg), = expr.items()
    if op == "const":
        if not (isinstance(arg, (int, float)) and arg >= 0):
            raise ValidationError(path, "constants must be nonnegative numbers")
    elif op == "cos":
        lam = np.atleast_1d(np.asarray(arg, dtype=float))
        if group.kind == "finite":
            raise ValidationError(path, "cos terms need a real group")
        if lam.size != group.m:
            raise ValidationError(path, f"frequency must have {group.m} components")
    elif op in ("add", "mul"):
        if not isinstance(arg, list) or not arg:
            raise ValidationError(path, f"{op} needs a nonempty list")
        for i, sub in enumerate(arg):
            _check_expr(sub, group, f"{path}.{op}[{i}]")
    elif op == "pow":
        if not (isinstance(arg, list) and len(arg) == 2 and isinstance(arg[1], int) and arg[1] >= 0):
            raise ValidationError(path, "pow takes [expression, nonnegative integer]")
        _check_expr(arg[0], group, f"{path}.pow[0]")
    elif op == "table":
        if group.kind != "finite" or len(arg) != group.order:
            raise ValidationError(path, "tables need a finite group and one value per element")
        values = np.asarray(arg, dtype=complex)
        diffs = np.array([[group.difference(a, b) for b in range(group.order)]
                          for a in range(group.order)])
        M = values[diffs]
        if not np.allclose(M, M.conj().T):
            raise ValidationError(path, "table does not define a Hermitian kernel")
        if np.linalg.eigvalsh(M).min() < -PSD_TOL * max(1.0, np.abs(values).max()):
            raise ValidationError(path, "table does not define a positive definite kernel")
    else:
        raise ValidationError(path, f"unknown operation {op!r}")


def evaluate_expr(expr, delta, finite: bool = False):
    """Value of ``expr`` at group elements ``delta``.

    On real groups ``delta`` carries the coordinates on its last axis; on
    finite groups it holds element indices.
    """
    (op, arg), = expr.items()
    delta = np.asarray(delta)
    shape = delta.shape if finite else delta.shape[:-1]
    if op == "const":
        return np.full(shape, float(arg))
    if op == "cos":
        return np.cos(delta @ np.atleast_1d(np.asarray(arg, dtype=float)))
    if op == "add":
        return sum(evaluate_expr(e, delta, finite) for e in arg)
    if op == "mul":
        out = evaluate_expr(arg[0], delta, finite)
        for e in arg[1:]:
            out = out * evaluate_expr(e, delta, finite)
        return out
    if op == "pow":
        return evaluate_expr(arg[0], delta, finite) ** arg[1]
    if op == "table":
        return np.asarray(arg)[delta.astype(int)]
    raise UsageError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class SpacetimeKernel:
    """Coefficient functions ``k -> a_k(.; u)`` on a group; ``d=None`` means the infinite sphere."""

    group: GroupDescriptor
    terms: Mapping[int, dict]
    d: Optional[int] = None

    def __post_init__(self):
        if self.d is not None and self.d < 2:
            raise ValidationError("d", "space-time kernels need d >= 2")
        terms = {}
        for k, expr in dict(self.terms).items():
            k = int(k)
            if k < 0:
                raise ValidationError(f"terms.{k}", "indices must be nonnegative")
            _check_expr(expr, self.group, f"terms.{k}")
            terms[k] = expr
        object.__setattr__(self, "terms", dict(sorted(terms.items())))

    @property
    def _finite(self) -> bool:
        return self.group.kind == "finite"

    def at_identity(self, k: int) -> float:
        e = self.group.identity if self._finite else np.zeros(self.group.m)
        return float(np.real(evaluate_expr(self.terms[k], e, self._finite)))

    def matrix(self, k: int, elements) -> np.ndarray:
        """``[a_k(u_i^{-1} u_j)]_{ij}``."""
        if self._finite:
            delta = np.array([[self.group.difference(a, b) for b in elements] for a in elements])
        else:
            u = np.asarray(elements, dtype=float).reshape(len(elements), self.group.m)
            delta = u[None, :, :] - u[:, None, :]
        return np.asarray(evaluate_expr(self.terms[k], delta, self._finite))


def _cos_power(lam, k):
    return {"pow": [{"cos": lam}, k]}


def cosine_power_kernels(lam: float, theta: float, f: CoefficientSeq, g: CoefficientSeq,
                    n_max: int = 64, group: Optional[GroupDescriptor] = None):
    """``a_k(F; u) = a_k(f) cos(lam u)^k`` and ``a_l(G; u) = a_l(g) cos(theta u)^l``.

    ``f`` and ``g`` live on the infinite sphere; indices up to ``n_max`` are
    materialized.
    """
    for h in (f, g):
        if h.space.kind != "sphereInf":
            raise UsageError("the construction takes kernels on sphereInf")
    group = group or GroupDescriptor("real-line")

    def terms(h, freq):
        return {k: {"mul": [{"const": a}, _cos_power(freq, k)]} for k, a in h.upto(n_max).items()}

    return SpacetimeKernel(group, terms(f, lam)), SpacetimeKernel(group, terms(g, theta))


@dataclass(frozen=True)
class TrialCensus:
    trial: int
    even: int
    odd: int
    max_even: Optional[int]
    max_odd: Optional[int]
    tail_even: bool
    tail_odd: bool

    @property
    def consistent(self) -> bool:
        return self.tail_even and self.tail_odd


@dataclass(frozen=True)
class SpacetimeReport:
    N: int
    p: int
    seed: int
    trials: List[TrialCensus]

    @property
    def consistent(self) -> bool:
        return all(t.consistent for t in self.trials)

    @property
    def verdict(self) -> str:
        word = "consistent" if self.consistent else "inconsistent"
        return f"{word} with strict up to N={self.N} (sampling evidence)"

    def to_json(self) -> dict:
        return {"N": self.N, "p": self.p, "seed": self.seed, "verdict": self.verdict,
                "consistent": self.consistent,
                "trials": [dict(vars(t), consistent=t.consistent) for t in self.trials]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields = ["trial", "even", "odd", "max_even", "max_odd", "tail_even", "tail_odd", "consistent"]
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for t in self.trials:
            writer.writerow([getattr(t, name) for name in fields])
        return buf.getvalue()


def _sample_elements(group: GroupDescriptor, p: int, rng):
    if group.kind == "finite":
        if p > group.order:
            raise UsageError(f"cannot pick {p} distinct elements from a group of order {group.order}")
        return [int(x) for x in rng.choice(group.order, size=p, replace=False)]
    while True:
        u = rng.uniform(-np.pi, np.pi, size=(p, group.m))
        gaps = np.linalg.norm(u[:, None, :] - u[None, :, :], axis=-1) + np.eye(p)
        if gaps.min() > 1e-9:
            return u[:, 0] if group.kind == "real-line" else u


def _sample_vector(p: int, rng):
    while True:
        c = rng.standard_normal(p) + 1j * rng.standard_normal(p)
        if np.linalg.norm(c) >= 1e-12:
            return c


def census(F: SpacetimeKernel, G: SpacetimeKernel, elements, c, N: int) -> Dict[int, bool]:
    """``m -> True`` for each ``m = k + l <= N`` with some ``q_{k,l}`` positive."""
    c = np.asarray(c, dtype=complex)
    norm2 = float(np.vdot(c, c).real)
    mats_f = {k: F.matrix(k, elements) for k in F.terms if k <= N}
    mats_g = {l: G.matrix(l, elements) for l in G.terms if l <= N}
    out: Dict[int, bool] = {}
    for k, A in mats_f.items():
        for l, B in mats_g.items():
            if k + l > N:
                continue
            q = float(np.real(c @ (A * B) @ c.conj()))
            tol = Q_RTOL * abs(F.at_identity(k) * G.at_identity(l)) * norm2
            if q > tol:
                out[k + l] = True
    return out


def _summarize(trial: int, hits, N: int) -> TrialCensus:
    evens = sorted(m for m in hits if m % 2 == 0)
    odds = sorted(m for m in hits if m % 2 == 1)
    half = N // 2
    return TrialCensus(trial, len(evens), len(odds),
                       evens[-1] if evens else None, odds[-1] if odds else None,
                       any(m > half for m in evens), any(m > half for m in odds))


def spacetime_check(F: SpacetimeKernel, G: SpacetimeKernel, group: Optional[GroupDescriptor] = None,
                    p: int = 3, trials: int = 32, N: int = 40, seed: int = 0,
                    points: Optional[Sequence] = None, vectors: Optional[Sequence] = None,
                    workers: Optional[int] = None) -> SpacetimeReport:
    """Parity census of positive ``q_{k,l}`` over sampled configurations.

    A trial counts as consistent with strictness when both an even and an
    odd ``k + l`` in ``(N/2, N]`` carry a positive ``q``.  ``points`` and
    ``vectors`` fix the group elements and vectors of every trial instead
    of sampling them.  Each trial draws from its own seed substream, so
    the report does not depend on ``workers``.
    """
    group = group or F.group
    if F.group != group or G.group != group:
        raise UsageError("both kernels must live on the given group")
    if p < 1 or N < 4:
        raise UsageError("need p >= 1 and N >= 4")
    if points is not None:
        p = len(points)
    streams = np.random.SeedSequence(seed).spawn(trials)

    def run(i):
        rng = np.random.default_rng(streams[i])
        elements = points if points is not None else _sample_elements(group, p, rng)
        c = vectors if vectors is not None else _sample_vector(len(elements), rng)
        return _summarize(i, census(F, G, elements, c, N), N)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(i) for i in range(trials)]
    return SpacetimeReport(N, p, seed, results)


def parse_spacetime(doc):
    """``(F, G)`` from a space-time document.

    Either ``{"group": ..., "F": {"d": ..., "terms": {k: expr}}, "G": ...}``
    or ``{"cosine_powers": {"lambda": ..., "theta": ..., "f": spec, "g": spec,
    "n_max": ...}}`` with ``f`` and ``g`` kernel specs on ``sphereInf``.
    """
    from ..kernelmodel import parse_kernel

    if not isinstance(doc, Mapping):
        raise ValidationError("", "space-time document must be an object")
    if "cosine_powers" in doc:
        unknown = set(doc) - {"cosine_powers", "group"}
        body = doc["cosine_powers"]
        unknown |= {f"cosine_powers.{k}" for k in set(body) - {"lambda", "theta", "f", "g", "n_max"}}
        if unknown:
            raise ValidationError("", f"unknown keys {sorted(unknown)}")
        group = GroupDescriptor.from_json(doc["group"]) if "group" in doc else None
        try:
            lam, theta = float(body["lambda"]), float(body["theta"])
            f, g = parse_kernel(body["f"]), parse_kernel(body["g"])
        except KeyError as exc:
            raise ValidationError(f"cosine_powers.{exc.args[0]}", "missing field") from None
        return cosine_power_kernels(lam, theta, f, g, int(body.get("n_max", 64)), group)
    unknown = set(doc) - {"group", "F", "G"}
    if unknown:
        raise ValidationError("", f"unknown keys {sorted(unknown)}")
    if "group" not in doc:
        raise ValidationError("group", "missing field")
    group = GroupDescriptor.from_json(doc["group"])
    kernels = []
    for name in ("F", "G"):
        part = doc.get(name)
        if not isinstance(part, Mapping) or "terms" not in part:
            raise ValidationError(name, "expected an object with terms")
        extra = set(part) - {"d", "terms"}
        if extra:
            raise ValidationError(name, f"unknown keys {sorted(extra)}")
        kernels.append(SpacetimeKernel(group, part["terms"], part.get("d")))
    return tuple(kernels)
