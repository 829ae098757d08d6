"""Orthogonal polynomial bases, Gauss-Jacobi rules and linearization tables.

Every basis in this module is normalized to take the value 1 at ``t = 1``
(``z = 1`` for disk polynomials).  With that normalization the coefficients
of a product ``R_k R_l = sum_mu b(mu) R_mu`` add up to one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import DomainError, NumericalError, ParameterError

#: Linearization entries smaller than this in magnitude are structural zeros.
CLAMP = 1e-13

_QL_MAX_ITER = 60


@dataclass(frozen=True)
class PolyParams:
    """Jacobi exponents ``(alpha, beta)`` with ``alpha >= beta > -1``."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ParameterError(f"non-finite Jacobi parameters ({a}, {b})")
        if not b > -1.0:
            raise ParameterError(f"beta must exceed -1, got {b}")
        if a < b:
            raise ParameterError(f"alpha must be >= beta, got alpha={a}, beta={b}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def nonnegative_linearization(self) -> bool:
        """True when product coefficients are known to be nonnegative.

        Only the sufficient case ``alpha + beta >= -1`` is recognised.
        """
        return self.alpha + self.beta >= -1.0


def jacobi_rows(kmax, a, b, t):
    """Yield ``R_0(t), ..., R_kmax(t)`` for the at-one normalized family.

    ``a`` and ``b`` are raw exponents; no ordering is imposed because disk
    polynomials need ``beta > alpha``.
    """
    t = np.asarray(t)
    r0 = np.ones_like(t, dtype=np.result_type(t, float))
    yield r0
    if kmax == 0:
        return
    r1 = 1.0 + (a + b + 2.0) * (t - 1.0) / (2.0 * (a + 1.0))
    yield r1
    rm2, rm1 = r0, r1
    for n in range(2, kmax + 1):
        s = 2.0 * n + a + b
        lead = 2.0 * n * (n + a + b) * (s - 2.0)
        # P_{n-1}(1)/P_n(1) and P_{n-2}(1)/P_n(1)
        rho1 = n / (n + a)
        rho2 = rho1 * (n - 1.0) / (n - 1.0 + a)
        rn = ((s - 1.0) * (s * (s - 2.0) * t + a * a - b * b) * rho1 * rm1
              - 2.0 * (n + a - 1.0) * (n + b - 1.0) * s * rho2 * rm2) / lead
        yield rn
        rm2, rm1 = rm1, rn


def jacobi_table(kmax: int, params: PolyParams, t) -> np.ndarray:
    """Stack ``R_0..R_kmax`` evaluated at ``t``; shape ``(kmax + 1,) + t.shape``."""
    return np.stack(list(jacobi_rows(kmax, params.alpha, params.beta, t)))


def _raw_jacobi(k, a, b, t):
    for value in jacobi_rows(k, a, b, t):
        pass
    return value


def _check_degree(k):
    if int(k) != k or k < 0:
        raise ParameterError(f"degree must be a nonnegative integer, got {k}")
    return int(k)


def jacobi_eval(k: int, params: PolyParams, t):
    """At-one normalized Jacobi polynomial ``P_k(t) / P_k(1)``.

    Evaluated with the three-term recurrence; accepts scalars or arrays.
    """
    k = _check_degree(k)
    value = _raw_jacobi(k, params.alpha, params.beta, t)
    return float(value) if np.ndim(value) == 0 else value


def jacobi_at_one(k: int, params: PolyParams) -> float:
    """Unnormalized value ``P_k^{(alpha,beta)}(1) = binom(k + alpha, k)``."""
    k = _check_degree(k)
    value = 1.0
    for j in range(1, k + 1):
        value *= (params.alpha + j) / j
    return value


def chebyshev_eval(k: int, t):
    """``T_k(t) = cos(k arccos t)``."""
    k = _check_degree(k)
    value = np.cos(k * np.arccos(np.clip(t, -1.0, 1.0)))
    return float(value) if np.ndim(value) == 0 else value


def gegenbauer_eval(k: int, d: int, t):
    """Normalized Gegenbauer polynomial ``C_k^{(d-1)/2}(t) / C_k^{(d-1)/2}(1)``."""
    if d < 2:
        raise ParameterError(f"sphere dimension must be >= 2, got {d}")
    h = (d - 2) / 2.0
    return jacobi_eval(k, PolyParams(h, h), t)


def disk_eval(m: int, n: int, q: int, z):
    """Disk (Zernike) polynomial ``R_{m,n}^{q-2}(z)`` with ``R_{m,n}(1) = 1``.

    ``R_{m,n}(r e^{i theta}) = r^|m-n| e^{i(m-n)theta} R_min(m,n)^{(q-2,|m-n|)}(2r^2 - 1)``.
    """
    m, n = _check_degree(m), _check_degree(n)
    if q < 2:
        raise ParameterError(f"disk polynomials need q >= 2, got {q}")
    z = np.asarray(z, dtype=complex)
    r2 = (z * z.conj()).real
    if np.any(r2 > (1.0 + 1e-12) ** 2):
        raise DomainError("disk polynomials are defined on |z| <= 1")
    k = m - n
    angular = z ** k if k >= 0 else z.conj() ** (-k)
    radial = _raw_jacobi(min(m, n), float(q - 2), float(abs(k)), 2.0 * r2 - 1.0)
    value = angular * radial
    return complex(value) if value.ndim == 0 else value


# -- Gauss-Jacobi quadrature ------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight ``(1-t)^alpha (1+t)^beta`` on ``[-1, 1]``."""

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    params: PolyParams = field(repr=False)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def jacobi_moment(params: PolyParams) -> float:
    """Total mass ``int (1-t)^alpha (1+t)^beta dt``."""
    a, b = params.alpha, params.beta
    return math.exp((a + b + 1.0) * math.log(2.0) + math.lgamma(a + 1.0)
                    + math.lgamma(b + 1.0) - math.lgamma(a + b + 2.0))


def _recurrence(n, a, b):
    """Monic recurrence coefficients: diagonal ``a_0..a_{n-1}``, ``b_1..b_n``."""
    diag = np.empty(n)
    off2 = np.empty(n)
    for k in range(n):
        s = 2.0 * k + a + b
        if k == 0:
            diag[k] = (b - a) / (a + b + 2.0)
        else:
            diag[k] = (b * b - a * a) / (s * (s + 2.0))
    for k in range(1, n + 1):
        s = 2.0 * k + a + b
        if k == 1:
            off2[k - 1] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
        else:
            off2[k - 1] = (4.0 * k * (k + a) * (k + b) * (k + a + b)
                           / (s * s * (s + 1.0) * (s - 1.0)))
    return diag, off2


def tridiagonal_eigenvalues(diag, offdiag) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by implicit QL shifts.

    ``offdiag[i]`` couples rows ``i`` and ``i + 1``.  Raises
    :class:`NumericalError` when an eigenvalue needs more than 60 sweeps.
    """
    d = [float(x) for x in diag]
    n = len(d)
    e = [float(x) for x in offdiag] + [0.0]
    eps = np.finfo(float).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it == _QL_MAX_ITER:
                raise NumericalError(f"QL iteration did not converge for eigenvalue {l}")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


def _orthonormal_values(x, n, diag, off2, mu0):
    """Orthonormal polynomials ``p_0..p_n`` and ``p_n'`` at ``x``."""
    sq = np.sqrt(off2)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(mu0))
    dp_prev = np.zeros_like(x)
    dp = np.zeros_like(x)
    rows = [p]
    for k in range(n):
        sub = sq[k - 1] if k > 0 else 0.0
        p_next = ((x - diag[k]) * p - sub * p_prev) / sq[k]
        dp_next = (p + (x - diag[k]) * dp - sub * dp_prev) / sq[k]
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
        rows.append(p)
    return rows, dp


@lru_cache(maxsize=256)
def _gauss_jacobi_cached(n, a, b):
    diag, off2 = _recurrence(n, a, b)
    params = PolyParams(a, b)
    mu0 = jacobi_moment(params)
    x = tridiagonal_eigenvalues(diag, np.sqrt(off2[: n - 1]))
    # Newton polish on p_n, then Christoffel weights
    for _ in range(2):
        rows, dpn = _orthonormal_values(x, n, diag, off2, mu0)
        step = rows[n] / dpn
        x = np.clip(x - step, -1.0, 1.0)
    rows, _ = _orthonormal_values(x, n, diag, off2, mu0)
    w = 1.0 / np.sum(np.square(rows[:n]), axis=0)
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.flags.writeable = False
    w.flags.writeable = False
    return QuadratureRule(x, w, 2 * n - 1, params)


def gauss_jacobi_rule(n: int, params: PolyParams) -> QuadratureRule:
    """``n``-point Gauss-Jacobi rule (exact through degree ``2n - 1``).

    Nodes are eigenvalues of the Jacobi matrix built from the recurrence
    coefficients, refined by Newton steps; weights are Christoffel numbers.
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"rule size must be a positive integer, got {n}")
    return _gauss_jacobi_cached(int(n), params.alpha, params.beta)


# -- linearization ----------------------------------------------------------

@dataclass(frozen=True)
class LinearizationTable:
    """Coefficients of ``R_k R_l`` (or of a disk-polynomial product) in the basis.

    ``entries`` maps the target index (``mu`` or ``(m, n)``) to its
    coefficient; structural zeros are omitted.  ``raw_min`` is the smallest
    projected value before clamping.
    """

    k: object
    l: object
    params: object
    entries: Mapping
    raw_min: float
    nonnegativity_guaranteed: bool

    def total(self) -> float:
        return float(sum(self.entries.values()))


def _rule_size(degree_needed):
    n = 16
    while 2 * n - 1 < degree_needed:
        n *= 2
    return n


@lru_cache(maxsize=64)
def _basis_at_nodes(params: PolyParams, n: int):
    rule = gauss_jacobi_rule(n, params)
    table = jacobi_table(n - 1, params, rule.nodes)
    norms = np.square(table) @ rule.weights
    table.flags.writeable = False
    norms.flags.writeable = False
    return rule, table, norms


def _clamped(raw):
    return {key: value for key, value in raw.items() if abs(value) >= CLAMP}


@lru_cache(maxsize=65536)
def _linearize_jacobi_cached(k, l, params, clamp):
    rule, table, norms = _basis_at_nodes(params, _rule_size(2 * (k + l) + 1))
    weighted = table[k] * table[l] * rule.weights
    mus = np.arange(abs(k - l), k + l + 1)
    values = (table[mus] @ weighted) / norms[mus]
    raw = {int(mu): float(v) for mu, v in zip(mus, values)}
    entries = _clamped(raw) if clamp else raw
    return LinearizationTable(k, l, params, MappingProxyType(entries),
                              float(values.min()), params.nonnegative_linearization)


def linearization_array(k: int, l: int, params: PolyParams):
    """``(first_index, values)`` view of :func:`linearize_jacobi` for accumulation."""
    k, l = _check_degree(k), _check_degree(l)
    linearize_jacobi(k, l, params)
    return _as_array(k, l, params)


@lru_cache(maxsize=65536)
def _as_array(k, l, params):
    table = _linearize_jacobi_cached(k, l, params, True)
    lo = abs(k - l)
    values = np.zeros(table.k + table.l - lo + 1)
    for mu, b in table.entries.items():
        values[mu - lo] = b
    values.flags.writeable = False
    return lo, values


def linearize_jacobi(k: int, l: int, params: PolyParams, clamp: bool = True) -> LinearizationTable:
    """Table ``b(mu)`` with ``R_k R_l = sum_{mu=|k-l|}^{k+l} b(mu) R_mu``.

    Each ``b(mu)`` is the quadrature projection of the product onto
    ``R_mu``, using a rule exact to degree ``2(k + l)``.
    """
    k, l = _check_degree(k), _check_degree(l)
    if not params.nonnegative_linearization:
        raise ParameterError(
            f"linearization needs alpha + beta >= -1, got ({params.alpha}, {params.beta})")
    return _linearize_jacobi_cached(k, l, params, bool(clamp))


def _disk_target(s, k):
    return (s + max(k, 0), s + max(-k, 0))


@lru_cache(maxsize=16384)
def _linearize_disk_cached(m1, n1, m2, n2, q):
    alpha = float(q - 2)
    k1, k2 = m1 - n1, m2 - n2
    k = k1 + k2
    a1, a2 = min(m1, n1), min(m2, n2)
    total = m1 + n1 + m2 + n2
    s_max = (total - abs(k)) // 2
    expo = (abs(k1) + abs(k2) + abs(k)) // 2
    npts = total + 2
    rule = gauss_jacobi_rule(npts, PolyParams(alpha, 0.0))
    x, w = rule.nodes, rule.weights
    lift = (1.0 + x) / 2.0
    first = _raw_jacobi(a1, alpha, float(abs(k1)), x)
    second = _raw_jacobi(a2, alpha, float(abs(k2)), x)
    weighted = lift ** expo * first * second * w
    targets = np.stack(list(jacobi_rows(s_max, alpha, float(abs(k)), x)))
    norms = np.square(targets) @ (lift ** abs(k) * w)
    values = (targets @ weighted) / norms
    raw = {_disk_target(s, k): float(v) for s, v in enumerate(values)}
    return LinearizationTable((m1, n1), (m2, n2), q, MappingProxyType(_clamped(raw)),
                              float(values.min()), True)


def linearize_disk(m1: int, n1: int, m2: int, n2: int, q: int) -> LinearizationTable:
    """Coefficients of ``R_{m1,n1} R_{m2,n2}`` over disk polynomials ``R_{m,n}``.

    The angular integral forces ``m - n = (m1 - n1) + (m2 - n2)``; what is
    left is a one-dimensional Gauss-Jacobi integral in ``2r^2 - 1`` against
    the weight ``(1 - r^2)^(q-2)``.
    """
    m1, n1, m2, n2 = (_check_degree(v) for v in (m1, n1, m2, n2))
    if q < 2:
        raise ParameterError(f"disk polynomials need q >= 2, got {q}")
    return _linearize_disk_cached(m1, n1, m2, n2, int(q))
