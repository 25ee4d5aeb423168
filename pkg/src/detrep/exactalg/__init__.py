"""Prime-field arithmetic, homogeneous forms and graded pieces of maps."""

from __future__ import annotations

from .field import DEFAULT_PRIME, PrimeField, default_prime, is_prime
from .linalg import inverse, matmul, nullspace, rank_lower_bound, rref, solve
from .linalg import kernel_dim as _kernel_dim
from .linalg import rank as _rank
from .modules import (FieldMatrix, GradedFreeModule, HomogMatrix, compose, graded_piece, hilbert_dim,
                      identity)
from .poly import (HomogPoly, constant, monomial_basis, monomial_count, monomial_index, poly_mul,
                   random_form, variable, zero_poly)


def rank(m, p: int | None = None) -> int:
    """Exact rank over GF(p); FieldMatrix carries its own prime."""
    if isinstance(m, FieldMatrix):
        return _rank(m.data, m.p)
    return _rank(m, p)


def kernel_dim(m, p: int | None = None) -> int:
    if isinstance(m, FieldMatrix):
        return _kernel_dim(m.data, m.p)
    return _kernel_dim(m, p)


__all__ = [
    "DEFAULT_PRIME", "PrimeField", "default_prime", "is_prime",
    "HomogPoly", "constant", "variable", "zero_poly", "monomial_basis", "monomial_count",
    "monomial_index", "poly_mul", "random_form",
    "GradedFreeModule", "HomogMatrix", "FieldMatrix", "compose", "identity", "graded_piece",
    "hilbert_dim", "rank", "kernel_dim", "rank_lower_bound", "rref", "nullspace", "solve",
    "inverse", "matmul",
]
