"""Numerical cross-checks: projection oracles, sampling, Gram reports and falsifiers."""
from .falsify import falsify_spd, harmonic_dimension
from .gram import GramReport, gram, gram_matrix
from .linalg import jacobi_eigh
from .points import PointSet, sample_points
from .projection import oracle_product_coeffs, project_coeffs
from .spacetime import (SpacetimeKernel, SpacetimeReport, cosine_power_kernels,
                        spacetime_check)

__all__ = [
    "GramReport", "PointSet", "SpacetimeKernel", "SpacetimeReport", "cosine_power_kernels",
    "falsify_spd", "gram", "gram_matrix", "harmonic_dimension", "jacobi_eigh",
    "oracle_product_coeffs", "project_coeffs", "sample_points", "spacetime_check",
]
