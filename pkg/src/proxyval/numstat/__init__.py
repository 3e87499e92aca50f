from .loess import loess, tricube
from .special import (
    chi2_sf,
    normal_sf_two_sided,
    reg_incomplete_beta,
    reg_incomplete_gamma_lower,
    reg_incomplete_gamma_upper,
    student_t_sf_two_sided,
)
from .stats import (
    TestResult,
    TrendGroup,
    TrendTable,
    TwoByTwoTable,
    chi_squared_2x2,
    cochran_armitage,
    pearson,
    rankdata,
    spearman,
)

__all__ = [
    "TestResult",
    "TrendGroup",
    "TrendTable",
    "TwoByTwoTable",
    "chi2_sf",
    "chi_squared_2x2",
    "cochran_armitage",
    "loess",
    "normal_sf_two_sided",
    "pearson",
    "rankdata",
    "reg_incomplete_beta",
    "reg_incomplete_gamma_lower",
    "reg_incomplete_gamma_upper",
    "spearman",
    "student_t_sf_two_sided",
    "tricube",
]
