"""Certified numerical verification of explicit prime-counting bounds."""

from .config import (
    ConfigProfile,
    IntegrityError,
    PntError,
    RangeGuardError,
    ZeroFileError,
    load_config,
)
from .interval import Iv
from .logdomain import LogPoint, LogPointIv
from .constants import CONSTANTS, ConstantsTable, truncation_interval
from .chebyshev import (
    ChebyshevPoint,
    MertensPoint,
    Psi1Point,
    ScanClaim,
    chebyshev_at,
    estimate_E_B,
    mertens_at,
    psi1_at,
    scan_claims,
)
from .bounds import CLAIM_IDS, BoundSpec, claim_rows, registry
from .zeros import (
    ZeroTable,
    count_below,
    explicit_psi1,
    ingest,
    load_table,
    sum_inv_gamma,
    sum_inv_gamma_sq_tail,
)
from .verify import (
    ClaimSpec,
    CrossoverResult,
    VerificationReport,
    audit_constants,
    find_crossover,
    make_claim,
    report_json,
    report_to_dict,
    verify,
    verify_piecewise_table,
    violations_csv,
)
from .backend import backend_name

__version__ = "0.1.0"

__all__ = [
    "CLAIM_IDS",
    "CONSTANTS",
    "BoundSpec",
    "ChebyshevPoint",
    "ClaimSpec",
    "ConfigProfile",
    "ConstantsTable",
    "CrossoverResult",
    "IntegrityError",
    "Iv",
    "LogPoint",
    "LogPointIv",
    "MertensPoint",
    "PntError",
    "Psi1Point",
    "RangeGuardError",
    "ScanClaim",
    "VerificationReport",
    "ZeroFileError",
    "ZeroTable",
    "audit_constants",
    "backend_name",
    "chebyshev_at",
    "claim_rows",
    "count_below",
    "estimate_E_B",
    "explicit_psi1",
    "find_crossover",
    "ingest",
    "load_config",
    "load_table",
    "make_claim",
    "mertens_at",
    "psi1_at",
    "registry",
    "report_json",
    "report_to_dict",
    "scan_claims",
    "sum_inv_gamma",
    "sum_inv_gamma_sq_tail",
    "truncation_interval",
    "verify",
    "verify_piecewise_table",
    "violations_csv",
    "__version__",
]
