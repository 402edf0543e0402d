from .ic import BudgetExceeded, IcReport, ic_audit, ic_check
from .ratios import (
    LALD_FLOOR,
    LDM_FLOOR,
    DistributionGraphMismatch,
    KExceedsN,
    RatioReport,
    approx_ratio,
    expected_progeny,
    lm_floor,
    optimal_sum,
    ratio_sweep,
)
from .upper_bound import CertificateViolation, LpCertificate, check_certificate, verify_upper_bound

__all__ = [
    "BudgetExceeded",
    "IcReport",
    "ic_audit",
    "ic_check",
    "LALD_FLOOR",
    "LDM_FLOOR",
    "DistributionGraphMismatch",
    "KExceedsN",
    "RatioReport",
    "approx_ratio",
    "expected_progeny",
    "lm_floor",
    "optimal_sum",
    "ratio_sweep",
    "CertificateViolation",
    "LpCertificate",
    "check_certificate",
    "verify_upper_bound",
]
