"""
Diagnostics package: convergence statistics, summaries, bands and gates.
"""

from app.services.diagnostics.convergence import ess, ess_tail, per_chain_rhat, split_rhat
from app.services.diagnostics.summary import (
    FunctionalBand,
    functional_bands,
    secant_slope,
    summarize,
)
from app.services.diagnostics.gates import enforce_gates, evaluate_gates

__all__ = [
    "ess",
    "ess_tail",
    "per_chain_rhat",
    "split_rhat",
    "FunctionalBand",
    "functional_bands",
    "secant_slope",
    "summarize",
    "enforce_gates",
    "evaluate_gates",
]
