from .poly import (
    EMPTY,
    Context,
    ContextError,
    MonomialImages,
    MultiPoly,
    ParseError,
    add_scaled,
    UnknownVariable,
    VarFamily,
    format_scalar,
    infer_context,
    parse_poly,
    poly_sum,
    qnorm,
)
from .matrix import (
    RatMatrix,
    det,
    left_kernel,
    matrix_kernel,
    matrix_rank,
    modular_rank,
    rational_det,
)
from .univariate import squarefree_decomposition, univariate_gcd

__all__ = [
    "EMPTY", "Context", "ContextError", "MonomialImages", "MultiPoly", "add_scaled", "ParseError", "UnknownVariable",
    "VarFamily", "format_scalar", "infer_context", "parse_poly", "poly_sum", "qnorm",
    "RatMatrix", "det", "left_kernel", "matrix_kernel", "matrix_rank", "modular_rank",
    "rational_det", "squarefree_decomposition", "univariate_gcd",
]
