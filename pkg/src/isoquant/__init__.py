"""Cost minimization on isoquants and a numerical test of the Cobb-Douglas characterization."""

from .characterization import (
    CharacterizationVerdict,
    ScanConfig,
    ShareScanReport,
    characterize,
    condition_b_residual,
    estimate_beta_pointwise,
    labour_share_of_cost,
    reconstruct_output,
    share_scan,
)
from .costmin import (
    CostMinResult,
    FactorPrices,
    closed_form_cd_minimizer,
    isoquant_solve_K,
    kkt_residuals,
    minimize_cost,
)
from .errors import (
    ComputationError,
    DomainError,
    IsoquantError,
    NoInteriorMinimum,
    NoRoot,
    NotDifferentiable,
    Unattainable,
)
from .production import (
    CES,
    Bundle,
    CobbDouglas,
    Leontief,
    Perturbed,
    ProductionFunction,
    euler_residual,
    evaluate,
    gradient,
    homogeneity_check,
    make_family,
)
from .profit import ZeroProfitReport, bowley_share_check, profit, zero_profit_gap, zero_profit_rental

__version__ = "0.1.0"
