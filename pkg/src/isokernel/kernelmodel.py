"""Isotropic kernels as nonnegative coefficient sequences over a basis.

A kernel ``K(x, y) = f(t(x, y))`` on a compact two-point homogeneous space is
stored through the coefficients of ``f`` in the basis attached to the space:

========================  ==========================  =====================
space                     basis                        ``t(x, y)``
========================  ==========================  =====================
circle, sphere(d)         Jacobi ``((d-2)/2, (d-2)/2)``  ``x . y``
projR / projC / projH     Jacobi ``((d-2)/2, beta)``   ``2|<x, y>|^2 - 1``
cayley16                  Jacobi ``(7, 3)``            (no point model)
sphereInf                 ``t^k``                      ``x . y``
projInf                   ``((1 + t)/2)^k``            ``2 (x . y)^2 - 1``
complexSphere(q)          disk ``R_{m,n}^{q-2}``       ``<x, y>`` in the disk
========================  ==========================  =====================

``beta`` is ``-1/2``, ``0`` and ``1`` for the real, complex and quaternionic
projective spaces.  All bases equal one at ``t = 1``, so ``f(1)`` is the sum
of the coefficients.  Infinite supports are geometric tails
``a_{base + step*t} = c * r^t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Mapping, NamedTuple, Optional, Tuple, Union

import numpy as np

from . import semilinear as sl
from .errors import DomainError, UnsupportedSpaceError, UsageError, ValidationError
from .groups import GroupDescriptor
from .orthopoly import PolyParams, jacobi_rows, linearization_array, linearize_disk

COMPACT_KINDS = ("circle", "sphere", "projR", "projC", "projH", "cayley16")
SPACE_KINDS = COMPACT_KINDS + ("sphereInf", "projInf", "complexSphere", "spacetime")

_BETA = {"projR": -0.5, "projC": 0.0, "projH": 1.0, "cayley16": 3.0}

UNIT_TOL = 1e-10


@dataclass(frozen=True)
class SpaceDescriptor:
    """Which manifold a kernel lives on; fixes the basis and the SPD criterion."""

    kind: str
    d: Optional[int] = None
    q: Optional[int] = None
    group: Optional[GroupDescriptor] = None

    def __post_init__(self):
        kind, d, q = self.kind, self.d, self.q
        if kind not in SPACE_KINDS:
            raise ValidationError("space.kind", f"unknown space kind {kind!r}")
        if kind == "circle":
            d = 1 if d is None else d
            ok = d == 1
        elif kind in ("sphere", "projR"):
            ok = d is not None and d >= 2
        elif kind == "projC":
            ok = d is not None and d >= 4 and d % 2 == 0
        elif kind == "projH":
            ok = d is not None and d >= 8 and d % 4 == 0
        elif kind == "cayley16":
            d = 16 if d is None else d
            ok = d == 16
        elif kind == "complexSphere":
            ok = q is not None and q >= 1 and d is None
        elif kind == "spacetime":
            ok = d is not None and d >= 2 and self.group is not None
        else:
            ok = d is None
        if not ok:
            raise ValidationError("space", f"inadmissible dimension for {kind}: d={d}, q={q}")
        object.__setattr__(self, "d", None if d is None else int(d))

    @property
    def params(self) -> Optional[PolyParams]:
        """Jacobi exponents for the compact two-point homogeneous spaces."""
        if self.kind not in COMPACT_KINDS:
            return None
        alpha = (self.d - 2) / 2.0
        if self.kind in ("circle", "sphere"):
            return PolyParams(alpha, alpha)
        return PolyParams(alpha, _BETA[self.kind])

    @property
    def basis(self) -> Optional[str]:
        if self.kind in COMPACT_KINDS:
            return "jacobi"
        return {"sphereInf": "monomial", "projInf": "half-monomial",
                "complexSphere": "disk" if (self.q or 0) >= 2 else "laurent"}.get(self.kind)

    @property
    def criterion(self) -> str:
        """``full-ap``, ``parity`` or ``infinite``: what the support must satisfy."""
        if self.kind in ("circle", "complexSphere"):
            return "full-ap"
        if self.kind in ("sphere", "sphereInf", "spacetime"):
            return "parity"
        return "infinite"

    @property
    def bi_indexed(self) -> bool:
        return self.kind == "complexSphere"

    def __str__(self):
        if self.kind == "complexSphere":
            return f"complexSphere({self.q})"
        return self.kind if self.d is None else f"{self.kind}({self.d})"

    def to_json(self) -> dict:
        doc = {"kind": self.kind}
        if self.d is not None and self.kind not in ("circle", "cayley16"):
            doc["d"] = self.d
        if self.q is not None:
            doc["q"] = self.q
        if self.group is not None:
            doc["group"] = self.group.to_json()
        return doc

    @classmethod
    def from_json(cls, doc) -> "SpaceDescriptor":
        if not isinstance(doc, Mapping):
            raise ValidationError("space", "expected an object")
        unknown = set(doc) - {"kind", "d", "q", "group"}
        if unknown:
            raise ValidationError("space", f"unknown keys {sorted(unknown)}")
        group = doc.get("group")
        return cls(doc.get("kind"), doc.get("d"), doc.get("q"),
                   GroupDescriptor.from_json(group) if group is not None else None)


def space(kind: str, d: Optional[int] = None, q: Optional[int] = None) -> SpaceDescriptor:
    return SpaceDescriptor(kind, d, q)


# -- coefficient data ---------------------------------------------------------

class Tail(NamedTuple):
    """``a_{base + step*t} = c * r^t`` for ``t >= 0``."""

    base: int
    step: int
    c: float
    r: float

    def remainder(self, start: int) -> float:
        """``sum_{t >= start} c r^t``."""
        return self.c * self.r ** start / (1.0 - self.r)

    def terms_for(self, eps: float) -> int:
        """Number of leading terms after which the remainder is ``<= eps``."""
        if self.remainder(0) <= eps:
            return 0
        count = math.ceil(math.log(eps * (1.0 - self.r) / self.c) / math.log(self.r))
        count = max(count, 0)
        while self.remainder(count) > eps:
            count += 1
        return count


class BiTail(NamedTuple):
    """``a_{(m + dm*t, n + dn*t)} = c * r^t`` for ``t >= 0``."""

    m: int
    n: int
    dm: int
    dn: int
    c: float
    r: float

    remainder = Tail.remainder
    terms_for = Tail.terms_for

    def index(self, t):
        return (self.m + self.dm * t, self.n + self.dn * t)


def _check_positive(value, path):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(path, f"expected a number, got {value!r}") from None
    if not (math.isfinite(value) and value > 0.0):
        raise ValidationError(path, f"coefficient must be positive and finite, got {value}")
    return value


def _check_int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise ValidationError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValidationError(path, f"must be >= {minimum}, got {value}")
    return int(value)


def _check_ratio(value, path):
    value = _check_positive(value, path)
    if not value < 1.0:
        raise ValidationError(path, f"geometric ratio must lie in (0, 1), got {value}")
    return value


@dataclass(frozen=True)
class CoefficientSeq:
    """Coefficients ``a_k(f) > 0`` of a kernel on a singly indexed basis."""

    space: SpaceDescriptor
    head: Tuple[Tuple[int, float], ...] = ()
    tails: Tuple[Tail, ...] = ()

    def __post_init__(self):
        if self.space.bi_indexed or self.space.kind == "spacetime":
            raise ValidationError("space", f"{self.space} kernels are not singly indexed")
        head_items = self.head.items() if isinstance(self.head, Mapping) else self.head
        head = {}
        for k, a in head_items:
            k = _check_int(k, f"head.{k}", 0)
            if k in head:
                raise ValidationError(f"head.{k}", "duplicate index")
            head[k] = _check_positive(a, f"head.{k}")
        tails = []
        for i, tail in enumerate(self.tails):
            if isinstance(tail, Mapping):
                tail = _tail_from_json(tail, f"tails[{i}]")
            tail = Tail(_check_int(tail[0], f"tails[{i}].base", 0),
                        _check_int(tail[1], f"tails[{i}].step", 1),
                        _check_positive(tail[2], f"tails[{i}].c"),
                        _check_ratio(tail[3], f"tails[{i}].r"))
            for k in head:
                if k >= tail.base and (k - tail.base) % tail.step == 0:
                    raise ValidationError(f"tails[{i}]", f"overlaps head index {k}")
            for j, other in enumerate(tails):
                if (tail.base - other.base) % math.gcd(tail.step, other.step) == 0:
                    raise ValidationError(f"tails[{i}]", f"overlaps tails[{j}]")
            tails.append(tail)
        object.__setattr__(self, "head", tuple(sorted(head.items())))
        object.__setattr__(self, "tails", tuple(tails))

    @property
    def head_dict(self) -> Dict[int, float]:
        return dict(self.head)

    def is_zero(self) -> bool:
        return not self.head and not self.tails

    def is_polynomial(self) -> bool:
        return not self.tails

    def coefficient(self, k: int) -> float:
        for idx, a in self.head:
            if idx == k:
                return a
        for tail in self.tails:
            if k >= tail.base and (k - tail.base) % tail.step == 0:
                return tail.c * tail.r ** ((k - tail.base) // tail.step)
        return 0.0

    def value_at_one(self) -> float:
        """``f(1)``, the sum of all coefficients."""
        return sum(a for _, a in self.head) + sum(t.remainder(0) for t in self.tails)

    def truncated(self, eps: float) -> Dict[int, float]:
        """Finitely many coefficients whose omitted mass is at most ``eps``."""
        out = dict(self.head)
        share = eps / max(len(self.tails), 1)
        for tail in self.tails:
            for t in range(tail.terms_for(share)):
                out[tail.base + tail.step * t] = tail.c * tail.r ** t
        return out

    def upto(self, n: int) -> Dict[int, float]:
        """Exact coefficients with index ``<= n``."""
        out = {k: a for k, a in self.head if k <= n}
        for tail in self.tails:
            for k in range(tail.base, n + 1, tail.step):
                out[k] = tail.c * tail.r ** ((k - tail.base) // tail.step)
        return out

    def to_json(self) -> dict:
        return {"space": self.space.to_json(),
                "head": {str(k): a for k, a in self.head},
                "tails": [{"base": t.base, "step": t.step, "c": t.c, "r": t.r}
                          for t in self.tails]}


@dataclass(frozen=True)
class BiCoefficientSeq:
    """Coefficients ``a_{m,n}(f) > 0`` of a kernel on the complex sphere."""

    space: SpaceDescriptor
    head: Tuple[Tuple[Tuple[int, int], float], ...] = ()
    tails: Tuple[BiTail, ...] = ()

    def __post_init__(self):
        if not self.space.bi_indexed:
            raise ValidationError("space", f"{self.space} kernels are not bi-indexed")
        head_items = self.head.items() if isinstance(self.head, Mapping) else self.head
        head = {}
        for key, a in head_items:
            path = f"head.{key[0]},{key[1]}"
            key = (_check_int(key[0], path, 0), _check_int(key[1], path, 0))
            if key in head:
                raise ValidationError(path, "duplicate index")
            head[key] = _check_positive(a, path)
        tails = []
        for i, tail in enumerate(self.tails):
            p = f"tails[{i}]"
            if isinstance(tail, Mapping):
                tail = _bitail_from_json(tail, p)
            tail = BiTail(_check_int(tail[0], f"{p}.m", 0), _check_int(tail[1], f"{p}.n", 0),
                          _check_int(tail[2], f"{p}.dm", 0), _check_int(tail[3], f"{p}.dn", 0),
                          _check_positive(tail[4], f"{p}.c"), _check_ratio(tail[5], f"{p}.r"))
            if tail.dm == 0 and tail.dn == 0:
                raise ValidationError(p, "tail direction (dm, dn) must be nonzero")
            for key in head:
                if _on_ray2d(key, tail):
                    raise ValidationError(p, f"overlaps head index {key}")
            for j, other in enumerate(tails):
                if _rays2d_meet(tail, other):
                    raise ValidationError(p, f"overlaps tails[{j}]")
            tails.append(tail)
        object.__setattr__(self, "head", tuple(sorted(head.items())))
        object.__setattr__(self, "tails", tuple(tails))

    @property
    def head_dict(self):
        return dict(self.head)

    def is_zero(self) -> bool:
        return not self.head and not self.tails

    def value_at_one(self) -> float:
        return sum(a for _, a in self.head) + sum(t.remainder(0) for t in self.tails)

    def truncated(self, eps: float) -> Dict[Tuple[int, int], float]:
        out = dict(self.head)
        share = eps / max(len(self.tails), 1)
        for tail in self.tails:
            for t in range(tail.terms_for(share)):
                out[tail.index(t)] = tail.c * tail.r ** t
        return out

    def to_json(self) -> dict:
        return {"space": self.space.to_json(),
                "head": {f"{m},{n}": a for (m, n), a in self.head},
                "tails": [_bitail_to_json(t) for t in self.tails]}


Kernel = Union[CoefficientSeq, BiCoefficientSeq]


def _on_ray2d(point, tail):
    dx, dy = point[0] - tail.m, point[1] - tail.n
    if dx * tail.dn != dy * tail.dm:
        return False
    t_num, t_den = (dx, tail.dm) if tail.dm else (dy, tail.dn)
    return t_num >= 0 and t_num % t_den == 0


def _rays2d_meet(a, b):
    """Do two lattice rays ``p + t v`` (t >= 0 integer) share a point?"""
    px, py = b.m - a.m, b.n - a.n
    cross = a.dm * b.dn - a.dn * b.dm
    if cross:
        t1_num = px * b.dn - py * b.dm
        t2_num = px * a.dn - py * a.dm
        if cross < 0:
            cross, t1_num, t2_num = -cross, -t1_num, -t2_num
        return (t1_num >= 0 and t2_num >= 0
                and t1_num % cross == 0 and t2_num % cross == 0)
    if px * a.dn != py * a.dm:
        return False
    g = math.gcd(a.dm, a.dn)
    ux, uy = a.dm // g, a.dn // g
    offset = px // ux if ux else py // uy
    ga, gb = g, math.gcd(b.dm, b.dn)
    return offset % math.gcd(ga, gb) == 0


def _bitail_to_json(tail):
    if tail.dm == tail.dn:
        return {"diff": tail.m - tail.n, "base": min(tail.m, tail.n), "step": tail.dm,
                "c": tail.c, "r": tail.r}
    return dict(zip(BiTail._fields, tail))


def _tail_from_json(doc, path):
    unknown = set(doc) - {"base", "step", "c", "r"}
    if unknown:
        raise ValidationError(path, f"unknown keys {sorted(unknown)}")
    try:
        return Tail(doc["base"], doc.get("step", 1), doc["c"], doc["r"])
    except KeyError as exc:
        raise ValidationError(f"{path}.{exc.args[0]}", "missing field") from None


def _bitail_from_json(doc, path):
    if "diff" in doc:
        unknown = set(doc) - {"diff", "base", "step", "c", "r"}
        if unknown:
            raise ValidationError(path, f"unknown keys {sorted(unknown)}")
        k = _check_int(doc["diff"], f"{path}.diff")
        s = _check_int(doc.get("base", 0), f"{path}.base", 0)
        step = _check_int(doc.get("step", 1), f"{path}.step", 1)
        try:
            return BiTail(s + max(k, 0), s + max(-k, 0), step, step, doc["c"], doc["r"])
        except KeyError as exc:
            raise ValidationError(f"{path}.{exc.args[0]}", "missing field") from None
    unknown = set(doc) - set(BiTail._fields)
    if unknown:
        raise ValidationError(path, f"unknown keys {sorted(unknown)}")
    try:
        return BiTail(*(doc[name] for name in BiTail._fields))
    except KeyError as exc:
        raise ValidationError(f"{path}.{exc.args[0]}", "missing field") from None


def _parse_bikey(key, q, path):
    parts = str(key).split(",")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise ValidationError(path, f"bad index {key!r}") from None
    if len(values) == 2:
        return tuple(values)
    if len(values) == 1 and q == 1:
        m = values[0]
        return (m, 0) if m >= 0 else (0, -m)
    raise ValidationError(path, f"bad index {key!r}")


def parse_kernel(doc, space_override: Optional[SpaceDescriptor] = None) -> Kernel:
    """Build a validated sequence from a kernel spec document."""
    if not isinstance(doc, Mapping):
        raise ValidationError("", "kernel spec must be a JSON object")
    unknown = set(doc) - {"space", "head", "tails"}
    if unknown:
        raise ValidationError("", f"unknown keys {sorted(unknown)}")
    if space_override is not None:
        where = space_override
    elif "space" in doc:
        where = SpaceDescriptor.from_json(doc["space"])
    else:
        raise ValidationError("space", "missing space descriptor")
    head = doc.get("head", {})
    tails = doc.get("tails", [])
    if not isinstance(head, Mapping):
        raise ValidationError("head", "expected an object")
    if not isinstance(tails, list):
        raise ValidationError("tails", "expected a list")
    if where.bi_indexed:
        pairs = [(_parse_bikey(k, where.q, f"head.{k}"), v) for k, v in head.items()]
        return BiCoefficientSeq(where, tuple(pairs), tuple(tails))
    pairs = []
    for k, v in head.items():
        try:
            idx = int(k)
        except ValueError:
            raise ValidationError(f"head.{k}", f"bad index {k!r}") from None
        pairs.append((idx, v))
    return CoefficientSeq(where, tuple(pairs), tuple(tails))


def serialize_kernel(f: Kernel) -> dict:
    return f.to_json()


def validate(raw) -> Kernel:
    """Checked sequence from a spec document or an existing sequence."""
    if isinstance(raw, (CoefficientSeq, BiCoefficientSeq)):
        if isinstance(raw, CoefficientSeq):
            return CoefficientSeq(raw.space, raw.head, raw.tails)
        return BiCoefficientSeq(raw.space, raw.head, raw.tails)
    return parse_kernel(raw)


# -- evaluation ---------------------------------------------------------------

def _horner(coeffs: Mapping[int, float], s):
    top = max(coeffs)
    acc = np.zeros_like(s) if np.ndim(s) else 0.0 * s
    for k in range(top, -1, -1):
        acc = acc * s + coeffs.get(k, 0.0)
    return acc


def _eval_jacobi_series(coeffs, params, t):
    t = np.asarray(t, dtype=float)
    acc = np.zeros_like(t)
    top = max(coeffs)
    for k, row in enumerate(jacobi_rows(top, params.alpha, params.beta, t)):
        a = coeffs.get(k)
        if a:
            acc = acc + a * row
    return acc


def _eval_disk_series(coeffs, q, z):
    z = np.asarray(z, dtype=complex)
    r2 = (z * z.conj()).real
    acc = np.zeros_like(z)
    if q == 1:
        if np.any(np.abs(r2 - 1.0) > 1e-9):
            raise DomainError("complexSphere(1) kernels live on |z| = 1")
        for (m, n), a in coeffs.items():
            k = m - n
            acc = acc + a * (z ** k if k >= 0 else z.conj() ** (-k))
        return acc
    if np.any(r2 > (1.0 + 1e-12) ** 2):
        raise DomainError("disk series are defined on |z| <= 1")
    by_diff: Dict[int, Dict[int, float]] = {}
    for (m, n), a in coeffs.items():
        by_diff.setdefault(m - n, {})[min(m, n)] = a
    x = 2.0 * r2 - 1.0
    for k, line in by_diff.items():
        radial = _eval_jacobi_series(line, _RawParams(float(q - 2), float(abs(k))), x)
        angular = z ** k if k >= 0 else z.conj() ** (-k)
        acc = acc + angular * radial
    return acc


class _RawParams(NamedTuple):
    alpha: float
    beta: float


def _eval_coeffs(where: SpaceDescriptor, coeffs, t):
    if not coeffs:
        return np.zeros_like(np.asarray(t, dtype=complex if where.bi_indexed else float))
    basis = where.basis
    if basis == "jacobi":
        return _eval_jacobi_series(coeffs, where.params, t)
    if basis == "monomial":
        return _horner(coeffs, np.asarray(t))
    if basis == "half-monomial":
        return _horner(coeffs, (1.0 + np.asarray(t)) / 2.0)
    if basis in ("disk", "laurent"):
        return _eval_disk_series(coeffs, where.q, t)
    raise UsageError(f"no series basis for {where}")


def eval_series(f: Kernel, t, eps: float = 1e-12):
    """``f(t)`` to within ``eps``; ``t`` may be an array (complex for the disk).

    Tails are cut where their geometric remainder drops below ``eps``; every
    basis is bounded by one in modulus, so that is the truncation error.
    """
    value = _eval_coeffs(f.space, f.truncated(eps), t)
    if np.ndim(value) == 0:
        return complex(value) if np.iscomplexobj(value) else float(value)
    return value


def support(f: CoefficientSeq) -> sl.SemilinearSet:
    """``{k : a_k(f) > 0}``."""
    return sl.make([k for k, _ in f.head], [(t.base, t.step, 1) for t in f.tails])


def diff_support(f: BiCoefficientSeq) -> sl.SemilinearSet:
    """``{m - n : a_{m,n}(f) > 0}``."""
    finite = [m - n for (m, n), _ in f.head]
    rays = []
    for tail in f.tails:
        k0, dk = tail.m - tail.n, tail.dm - tail.dn
        if dk == 0:
            finite.append(k0)
        else:
            rays.append((k0, abs(dk), 1 if dk > 0 else -1))
    return sl.make(finite, rays)


def _require_same_space(f, g):
    if f.space != g.space:
        raise UsageError(f"kernels live on different spaces: {f.space} vs {g.space}")


def product_expand(f: Kernel, g: Kernel, N: int, eps: float = 1e-12) -> dict:
    """Coefficients of the pointwise product ``fg`` up to index ``N``.

    On Jacobi spaces this is ``sum_{k,l} a_k(f) a_l(g) b_{k,l}(m)`` over
    linearization tables, with tails cut so each coefficient is within
    ``eps``.  Power-series spaces use the exact Cauchy product.  On the
    complex sphere keys are ``(m, n)`` with ``m + n <= N`` (``q >= 2``) or
    exponents ``|m| <= N`` (``q = 1``).
    """
    _require_same_space(f, g)
    if N < 0:
        raise UsageError("N must be nonnegative")
    basis = f.space.basis
    if basis in ("monomial", "half-monomial"):
        a, b = f.upto(N), g.upto(N)
        out = {m: 0.0 for m in range(N + 1)}
        for k, ak in a.items():
            for l, bl in b.items():
                if k + l <= N:
                    out[k + l] += ak * bl
        return out
    f1, g1 = f.value_at_one(), g.value_at_one()
    a = f.truncated(eps / (2.0 * max(g1, 1e-300)))
    b = g.truncated(eps / (2.0 * max(f1, 1e-300)))
    if basis == "jacobi":
        params = f.space.params
        out = np.zeros(N + 1)
        for k, ak in a.items():
            for l, bl in b.items():
                lo = abs(k - l)
                if lo > N:
                    continue
                start, values = linearization_array(k, l, params)
                hi = min(N, k + l)
                out[lo:hi + 1] += ak * bl * values[: hi - lo + 1]
        return {m: float(v) for m, v in enumerate(out)}
    if basis == "laurent":
        out: Dict = {}
        for (m1, n1), ak in a.items():
            for (m2, n2), bl in b.items():
                e = (m1 - n1) + (m2 - n2)
                if abs(e) <= N:
                    out[e] = out.get(e, 0.0) + ak * bl
        return dict(sorted(out.items()))
    if basis == "disk":
        out = {}
        for (m1, n1), ak in a.items():
            for (m2, n2), bl in b.items():
                if abs(m1 + n1 - m2 - n2) > N:
                    continue
                table = linearize_disk(m1, n1, m2, n2, f.space.q)
                for (m, n), c in table.entries.items():
                    if m + n <= N:
                        out[(m, n)] = out.get((m, n), 0.0) + ak * bl * c
        return dict(sorted(out.items()))
    raise UsageError(f"no product expansion for {f.space}")


def circle_product_coeffs(f: CoefficientSeq, g: CoefficientSeq, m: int, eps: float = 1e-12) -> float:
    """``a_m(fg)`` on the circle from the cosine addition formula.

    ``a_0(fg) = a_0(f)a_0(g) + 1/2 sum_{mu>=1} a_mu(f)a_mu(g)`` and, for
    ``m >= 1``, ``a_m(fg) = 1/2 sum_{nu=0}^m a_nu(f)a_{m-nu}(g)
    + 1/2 sum_{mu>=0} [a_mu(f)a_{mu+m}(g) + a_{mu+m}(f)a_mu(g)]``.
    """
    for h in (f, g):
        if h.space.kind != "circle":
            raise UsageError("circle_product_coeffs needs kernels on the circle")
    if m < 0:
        raise UsageError("m must be nonnegative")
    f1, g1 = f.value_at_one(), g.value_at_one()
    a = f.truncated(eps / (2.0 * max(g1, 1e-300)))
    b = g.truncated(eps / (2.0 * max(f1, 1e-300)))
    size = max(max(a, default=0), max(b, default=0), m) + m + 1
    A = np.zeros(size)
    B = np.zeros(size)
    for k, v in a.items():
        A[k] = v
    for k, v in b.items():
        B[k] = v
    if m == 0:
        return float(A[0] * B[0] + 0.5 * np.dot(A[1:], B[1:]))
    direct = np.dot(A[: m + 1], B[m::-1])
    shifted = np.dot(A[: size - m], B[m:]) + np.dot(A[m:], B[: size - m])
    return float(0.5 * direct + 0.5 * shifted)


def product_support(f: Kernel, g: Kernel) -> sl.SemilinearSet:
    """Index set whose shape decides strictness of ``fg``.

    Circle: ``{±k ± l}``; complex sphere: sums of ``m - n`` differences;
    every other space: ``{k + l}``.
    """
    _require_same_space(f, g)
    if f.space.bi_indexed:
        return sl.sumset(diff_support(f), diff_support(g))
    if f.space.kind == "circle":
        return sl.signed_sumset(support(f), support(g))
    return sl.sumset(support(f), support(g))


# -- point geometry -------------------------------------------------------------

def _quat_conj_left(x):
    """4x4 real matrices ``L`` with ``conj(x) * y == L @ y`` (last axis = quaternion)."""
    w, a, b, c = (x[..., i] for i in range(4))
    # conj(x) = (w, -a, -b, -c); left multiplication matrix of (w, -a, -b, -c)
    rows = [
        [w, a, b, c],
        [-a, w, c, -b],
        [-b, -c, w, a],
        [-c, b, -a, w],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def ambient_shape(where: SpaceDescriptor) -> Tuple[Optional[int], ...]:
    """Shape of one point in its coordinate model (``None`` = free length)."""
    kind = where.kind
    if kind in ("circle", "sphere", "projR"):
        return (where.d + 1,)
    if kind == "projC":
        return (where.d // 2 + 1,)
    if kind == "projH":
        return (where.d // 4 + 1, 4)
    if kind == "complexSphere":
        return (where.q,)
    if kind in ("sphereInf", "projInf"):
        return (None,)
    raise UnsupportedSpaceError(f"{where} has no numeric point model")


def _check_points(where, pts):
    shape = ambient_shape(where)
    pts = np.asarray(pts)
    expect = len(shape) + 1
    if pts.ndim != expect or any(s is not None and s != p for s, p in zip(shape, pts.shape[1:])):
        raise DomainError(f"points for {where} need shape (n,) + {shape}, got {pts.shape}")
    norms = np.sqrt(np.sum(np.abs(pts.reshape(len(pts), -1)) ** 2, axis=1))
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise DomainError("points must be unit vectors")
    return pts


def pairwise_t(where: SpaceDescriptor, X, Y=None):
    """Matrix of ``t(x_i, y_j)`` (complex inner products on the complex sphere)."""
    X = _check_points(where, X)
    same = Y is None
    Y = X if same else _check_points(where, Y)
    kind = where.kind
    if kind in ("circle", "sphere", "sphereInf"):
        return np.clip(X @ Y.T, -1.0, 1.0)
    if kind in ("projR", "projInf"):
        return np.clip(2.0 * (X @ Y.T) ** 2 - 1.0, -1.0, 1.0)
    if kind == "projC":
        return np.clip(2.0 * np.abs(X.conj() @ Y.T) ** 2 - 1.0, -1.0, 1.0)
    if kind == "projH":
        inner = np.einsum("aijk,bik->abj", _quat_conj_left(X), Y)
        return np.clip(2.0 * np.sum(inner ** 2, axis=-1) - 1.0, -1.0, 1.0)
    if kind == "complexSphere":
        z = X @ Y.conj().T
        z = z / np.maximum(np.abs(z), 1.0)
        if same:
            z = np.triu(z, 1) + np.triu(z, 1).conj().T + np.diag(np.diag(z).real)
        return z
    raise UnsupportedSpaceError(f"{where} has no numeric point model")


def t_of_points(where: SpaceDescriptor, x, y):
    """``t = cos(|xy|/2)`` for one pair; complex ``<x, y>`` on the complex sphere."""
    value = pairwise_t(where, np.asarray(x)[None], np.asarray(y)[None])[0, 0]
    return complex(value) if where.bi_indexed else float(value)


_COMPATIBLE = {"sphereInf": ("circle", "sphere", "sphereInf"),
               "projInf": ("projR", "projC", "projH", "projInf")}


def check_compatible(f: Kernel, where: SpaceDescriptor):
    """Kernels on ``sphereInf``/``projInf`` may be used on every finite member."""
    if f.space == where or where.kind in _COMPATIBLE.get(f.space.kind, ()):
        return
    raise UsageError(f"a kernel on {f.space} cannot be evaluated on {where}")


def eval_kernel(where: SpaceDescriptor, f: Kernel, x, y, eps: float = 1e-12):
    """``K(x, y) = f(t(x, y))``."""
    check_compatible(f, where)
    return eval_series(f, t_of_points(where, x, y), eps)
