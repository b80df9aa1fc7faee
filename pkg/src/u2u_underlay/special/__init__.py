"""Special functions behind the interference Laplacians."""

from .gamma import lower_incomplete_gamma
from .hypergeometric import gauss_2f1_neg
from .psi import (
    PsiArgs,
    annulus_interference,
    psi,
    psi_at_origin,
    psi_difference,
    psi_kernel,
)

__all__ = [
    "PsiArgs",
    "annulus_interference",
    "gauss_2f1_neg",
    "lower_incomplete_gamma",
    "psi",
    "psi_at_origin",
    "psi_difference",
    "psi_kernel",
]
