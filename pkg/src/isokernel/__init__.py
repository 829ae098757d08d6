"""Isotropic positive definite kernels on two-point homogeneous spaces."""
from .errors import (DegenerateInputError, DomainError, IsokernelError, NumericalError,
                     ParameterError, UnsupportedSpaceError, UsageError, ValidationError)
from .groups import GroupDescriptor
from .kernelmodel import (BiCoefficientSeq, BiTail, CoefficientSeq, SpaceDescriptor, Tail,
                          circle_product_coeffs, diff_support, eval_kernel, eval_series,
                          parse_kernel, product_expand, product_support, serialize_kernel,
                          space, support, t_of_points, validate)
from .orthopoly import (LinearizationTable, PolyParams, QuadratureRule, chebyshev_eval,
                        disk_eval, gauss_jacobi_rule, gegenbauer_eval, jacobi_at_one,
                        jacobi_eval, linearize_disk, linearize_jacobi)
from .semilinear import SemilinearSet
from .spdlaw import SpdVerdict, decide_product, decide_single, explain

__all__ = [
    "BiCoefficientSeq", "BiTail", "CoefficientSeq", "DegenerateInputError", "DomainError",
    "GroupDescriptor", "IsokernelError", "LinearizationTable", "NumericalError",
    "ParameterError", "PolyParams", "QuadratureRule", "SemilinearSet", "SpaceDescriptor",
    "SpdVerdict", "Tail", "UnsupportedSpaceError", "UsageError", "ValidationError",
    "chebyshev_eval", "circle_product_coeffs", "decide_product", "decide_single",
    "diff_support", "disk_eval", "eval_kernel", "eval_series", "explain",
    "gauss_jacobi_rule", "gegenbauer_eval", "jacobi_at_one", "jacobi_eval",
    "linearize_disk", "linearize_jacobi", "parse_kernel", "product_expand",
    "product_support", "serialize_kernel", "space", "support", "t_of_points", "validate",
]
