"""Search for point configurations whose Gram matrix is singular.

Three kinds of configurations are tried each trial:

* random samples from the space;
* on spheres, a random half-sample together with its antipodes, which
  isolates the even or the odd part of the kernel;
* on the circle and the complex sphere, the ``n``-th roots of unity (times
  a fixed unit vector) for a missed progression ``nZ + j``, whose Fourier
  mode ``j`` then sees no positive coefficient.
"""
from __future__ import annotations

from math import comb
from typing import Optional, Tuple

import numpy as np

from ..errors import UsageError
from ..kernelmodel import SpaceDescriptor
from .gram import Factors, _factors, gram
from .points import PointSet, sample_points


def harmonic_dimension(where: SpaceDescriptor, degree: int) -> int:
    """Dimension of the span of ``x -> R_k(t(x, y))`` over all ``y``, ``k <= degree``.

    Exceeding it forces a Gram matrix of a degree-``degree`` kernel to be
    singular.
    """
    if where.kind == "circle":
        return 2 * degree + 1
    if where.kind == "sphere":
        d = where.d
        return comb(degree + d, d) + comb(degree + d - 1, d)
    if where.kind == "projR":
        # even harmonics of degree <= 2*degree on the covering sphere
        d = where.d
        return sum(comb(2 * j + d, d) - comb(2 * j + d - 2, d) for j in range(degree + 1))
    raise UsageError(f"no dimension bound implemented for {where}")


def _antipodal(where, n, rng_seed):
    half = sample_points(where, (n + 1) // 2, rng_seed)
    pts = np.concatenate([half.points, -half.points])[:n]
    return PointSet(where, pts, rng_seed)


def _roots_of_unity(where, n, rng_seed):
    phases = np.exp(2j * np.pi * np.arange(n) / n)
    if where.kind == "circle":
        pts = np.stack([phases.real, phases.imag], axis=1)
    else:
        base = sample_points(where, 1, rng_seed).points[0]
        pts = phases[:, None] * base[None, :]
    return PointSet(where, pts, rng_seed)


def _configurations(where, n_points, seed, witness):
    yield sample_points(where, n_points, seed)
    if where.kind in ("sphere", "sphereInf"):
        yield _antipodal(where, n_points, seed)
    if witness and witness.get("kind") == "missed-progression":
        yield _roots_of_unity(where, witness["n"], seed)


def falsify_spd(where: SpaceDescriptor, f: Factors, n_points: int, trials: int = 5,
                seed: int = 0, witness: Optional[dict] = None,
                eps: float = 1e-12) -> Optional[Tuple[PointSet, np.ndarray]]:
    """First configuration with ``min_eig <= tol`` and its near-null vector, or ``None``.

    ``witness`` is the witness of a positive-only verdict; a missed
    progression adds the roots-of-unity configuration.
    """
    for h in _factors(f):
        if h.space.kind == "cayley16":
            raise UsageError("cayley16 has no point model")
    for trial in range(trials):
        for pts in _configurations(where, n_points, (seed, trial), witness):
            report = gram(where, f, pts, eps)
            if report.near_null is not None:
                return pts, report.near_null
    return None
