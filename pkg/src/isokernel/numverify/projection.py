"""Coefficient oracles by numerical projection of functions of ``t``.

Jacobi spaces use Gauss-Jacobi quadrature against ``(1-t)^a (1+t)^b``,
normalized so that projecting ``R_j`` onto index ``k`` gives ``delta_jk``.
Power-series spaces (``sphereInf``, ``projInf``) read Taylor coefficients
off a trapezoidal Cauchy integral on a circle of radius ``rho``.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import UsageError
from ..kernelmodel import CoefficientSeq, SpaceDescriptor, eval_series
from ..orthopoly import gauss_jacobi_rule, jacobi_table

CAUCHY_RADIUS = 0.5


def _jacobi_projection(params, h, k, rule_size):
    if rule_size < k + 1:
        raise UsageError(f"rule of size {rule_size} cannot resolve index {k}")
    rule = gauss_jacobi_rule(rule_size, params)
    basis = jacobi_table(k, params, rule.nodes)[k]
    values = np.asarray(h(rule.nodes))
    return float(np.dot(rule.weights, values * basis) / np.dot(rule.weights, basis * basis))


def _cauchy_coefficient(h_of_s, k, rule_size, rho=CAUCHY_RADIUS):
    if rule_size < k + 1:
        raise UsageError(f"{rule_size} contour points cannot resolve index {k}")
    theta = 2.0 * np.pi * np.arange(rule_size) / rule_size
    s = rho * np.exp(1j * theta)
    values = np.asarray(h_of_s(s), dtype=complex)
    return float((np.mean(values * np.exp(-1j * k * theta)) / rho ** k).real)


def project_coeffs(where: SpaceDescriptor, h: Callable, k: int, rule_size: int = 64) -> float:
    """``a_k(h)`` in the basis of ``where``; ``h`` is vectorized over ``t``.

    On ``sphereInf`` and ``projInf`` ``h`` must extend analytically to a
    neighbourhood of the contour (complex ``t`` is passed in).
    """
    if k < 0:
        raise UsageError("index must be nonnegative")
    if where.params is not None:
        return _jacobi_projection(where.params, h, k, rule_size)
    if where.kind == "sphereInf":
        return _cauchy_coefficient(h, k, rule_size)
    if where.kind == "projInf":
        return _cauchy_coefficient(lambda s: h(2.0 * s - 1.0), k, rule_size)
    raise UsageError(f"no projection oracle for {where}")


def oracle_product_coeffs(f: CoefficientSeq, g: CoefficientSeq, k: int,
                          rule_size: int = 64, eps: float = 1e-14) -> float:
    """``a_k(fg)`` by projecting the pointwise product of the two series."""
    if f.space != g.space:
        raise UsageError(f"kernels live on different spaces: {f.space} vs {g.space}")
    return project_coeffs(f.space, lambda t: eval_series(f, t, eps) * eval_series(g, t, eps), k, rule_size)

