"""Exact p-adic verification of the truncated hypergeometric congruences
attached to the fourteen rigid Calabi-Yau hypergeometric data sets."""

from rigidcy.padic import PadicCtx, PadicNum, dwork_dash, embed, first_digit, nu, teichmuller

__all__ = [
    "PadicCtx",
    "PadicNum",
    "dwork_dash",
    "embed",
    "first_digit",
    "nu",
    "teichmuller",
]
