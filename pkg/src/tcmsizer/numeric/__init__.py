from .fitting import FitProblem, FitResult, gauss_newton_fit
from .linalg import back_substitute, householder_qr, solve_linear_lsq
from .stats import CorrelationResult, pearson

__all__ = [
    "CorrelationResult",
    "FitProblem",
    "FitResult",
    "back_substitute",
    "gauss_newton_fit",
    "householder_qr",
    "pearson",
    "solve_linear_lsq",
]
