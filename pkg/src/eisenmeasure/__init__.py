"""Exact q-expansions of hermitian Siegel Eisenstein series and the checks
making their p-adic interpolation desk-verifiable."""

from .cyclotomic import AlgebraicValue
from .field import CMContext, FieldElement, init_cm_context, embed_p, reduce_mod_p

__all__ = [
    "AlgebraicValue",
    "CMContext",
    "FieldElement",
    "init_cm_context",
    "embed_p",
    "reduce_mod_p",
]
