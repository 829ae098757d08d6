"""Gram matrices of isotropic kernels and their positive definiteness reports."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ..kernelmodel import Kernel, SpaceDescriptor, check_compatible, eval_series
from .linalg import jacobi_eigh
from .points import PointSet

PD_TOL = 1e-8


@dataclass(frozen=True)
class GramReport:
    n: int
    min_eig: float
    pd: bool
    tol: float
    near_null: Optional[np.ndarray] = None

    def to_json(self, space=None, seed=None) -> dict:
        doc = {"min_eig": self.min_eig, "pd": self.pd, "n": self.n, "tol": self.tol}
        if seed is not None:
            doc["seed"] = seed
        if space is not None:
            doc["space"] = str(space)
        if self.near_null is not None:
            doc["near_null"] = _vector_json(self.near_null)
        return doc


def _vector_json(v):
    if np.iscomplexobj(v):
        return [[float(x.real), float(x.imag)] for x in v]
    return [float(x) for x in v]


Factors = Union[Kernel, Sequence[Kernel]]


def _factors(f: Factors):
    return list(f) if isinstance(f, (list, tuple)) else [f]


def gram_matrix(where: SpaceDescriptor, f: Factors, pts: PointSet, eps: float = 1e-12):
    """``K[i, j] = prod_f f(t(x_i, x_j))``, Hermitian by construction.

    Only the upper triangle is evaluated; the lower one is its conjugate
    mirror, and the diagonal is real.
    """
    factors = _factors(f)
    for h in factors:
        check_compatible(h, where)
    t = pts.t_matrix()
    n = len(pts)
    iu = np.triu_indices(n)
    values = np.ones(len(iu[0]), dtype=complex if where.bi_indexed else float)
    for h in factors:
        values = values * eval_series(h, t[iu], eps / len(factors))
    K = np.zeros((n, n), dtype=values.dtype)
    K[iu] = values
    K = K + np.triu(K, 1).conj().T
    K[np.diag_indices(n)] = K.diagonal().real
    return K


def value_at_one(f: Factors) -> float:
    return float(np.prod([h.value_at_one() for h in _factors(f)]))


def report_from_matrix(K, scale: float) -> GramReport:
    n = K.shape[0]
    w, V = jacobi_eigh(K)
    tol = PD_TOL * n * scale
    min_eig = float(w[0])
    near_null = V[:, 0] if min_eig <= tol else None
    return GramReport(n, min_eig, min_eig >= -tol, tol, near_null)


def gram(where: SpaceDescriptor, f: Factors, pts: PointSet, eps: float = 1e-12) -> GramReport:
    """Smallest eigenvalue of the Gram matrix with tolerance ``1e-8 * n * f(1)``.

    ``f`` may be a list of kernels, meaning their pointwise product.
    ``near_null`` is the unit eigenvector of the smallest eigenvalue,
    present whenever that eigenvalue is within tolerance of zero.
    """
    return report_from_matrix(gram_matrix(where, f, pts, eps), value_at_one(f))
