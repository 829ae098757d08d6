"""Random point configurations on the spaces that have a coordinate model."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, UsageError
from ..kernelmodel import SpaceDescriptor, ambient_shape, pairwise_t

DISTINCT_TOL = 1e-12
DEFAULT_INF_DIM = 3


@dataclass(frozen=True)
class PointSet:
    space: SpaceDescriptor
    points: np.ndarray = field(repr=False)
    seed: int = 0

    def __post_init__(self):
        pts = np.asarray(self.points)
        norms = np.sqrt(np.sum(np.abs(pts.reshape(len(pts), -1)) ** 2, axis=1))
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise DomainError("points must be unit vectors")
        t = np.real(pairwise_t(self.space, pts))
        np.fill_diagonal(t, 0.0)
        if np.any(t >= 1.0 - DISTINCT_TOL):
            raise DomainError("points must be pairwise distinct in the space")

    def __len__(self):
        return len(self.points)

    def t_matrix(self):
        return pairwise_t(self.space, self.points)


def _draw(rng, where: SpaceDescriptor, n: int, dim: int):
    shape = tuple(dim if s is None else s for s in ambient_shape(where))
    if where.kind in ("projC", "complexSphere"):
        raw = rng.standard_normal((n,) + shape) + 1j * rng.standard_normal((n,) + shape)
    else:
        raw = rng.standard_normal((n,) + shape)
    norms = np.sqrt(np.sum(np.abs(raw.reshape(n, -1)) ** 2, axis=1))
    return raw / norms.reshape((n,) + (1,) * len(shape))


def sample_points(where: SpaceDescriptor, n: int, seed: int = 0, dim: int = DEFAULT_INF_DIM) -> PointSet:
    """``n`` uniform points from normalized Gaussian coordinates.

    ``dim`` is the ambient length used for ``sphereInf`` and ``projInf``.
    A draw is rejected when it coincides with an earlier point, that is
    when ``Re t >= 1 - DISTINCT_TOL``.
    """
    if n < 1:
        raise UsageError("need at least one point")
    rng = np.random.default_rng(seed)
    accepted = []
    while len(accepted) < n:
        batch = _draw(rng, where, n - len(accepted), dim)
        for p in batch:
            if accepted:
                t = np.real(pairwise_t(where, np.asarray(accepted), p[None]))
                if np.any(t >= 1.0 - DISTINCT_TOL):
                    continue
            accepted.append(p)
    return PointSet(where, np.asarray(accepted), seed)
