"""Audited literal constants used by the bound registry and the audits.

Every value is stored exactly as printed in its source display; nothing
here is an invented digit.  B, C, E are 5-decimal truncations of the
respective limit constants, so each pins its true value into a
width-1e-5 interval (truncation_interval below).  Higher precision for
B and E comes only from certified partial-sum interval estimates
(chebyshev.estimate_E_B); C is the Euler-Mascheroni constant, for which
the correctly rounded double is library-provided.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .interval import Iv, _dn, _up

EULER_GAMMA = float(np.euler_gamma)


@dataclass(frozen=True)
class ConstantsTable:
    B: float = 0.26149
    C: float = 0.57721
    E: float = -1.33258
    omega1: float = 16.2106480369
    H1: float = 1e7
    R_stechkin: float = 9.645908801
    alpha1: float = 1 + 1.93378e-8
    alpha2: float = 1.04320
    buthe_psi_c: float = 0.94
    buthe_theta_c: float = 1.95
    theta0_c: float = 1.02
    exp_chain_c: float = 0.501
    goldston_c: float = 2.6
    consolidation_c: float = 1.465
    thm1_c: float = 1.2325
    loglog_1e19: float = 3.77847
    rcal_shift: float = 3.37784
    rcal_midc: float = 2.95139
    NT_c: Tuple[float, float, float, float] = (0.28, 0.1038, 0.2573, 9.3675)
    eps_lo: float = 1.545
    eps_hi: float = 2.069
    diffs_lo: float = 0.999


#: What each literal is, by role (full derivations live in the audits).
NOTES: Dict[str, str] = {
    "B": "5-decimal truncation of the reciprocal-prime sum constant",
    "C": "5-decimal truncation of the Euler-Mascheroni constant",
    "E": "5-decimal truncation of the log p / p sum constant",
    "omega1": "doubled reciprocal zero-ordinate sum up to height H1",
    "H1": "zero-sum cutoff height used by the smoothed deviation bound",
    "R_stechkin": "constant block in the smoothed zero-sum window bound",
    "alpha1": "psi-to-theta transfer factor, sqrt term",
    "alpha2": "psi-to-theta transfer factor, sixth-root term",
    "buthe_psi_c": "computational psi deviation envelope on [11, 1e19]",
    "buthe_theta_c": "computational theta deviation envelope on [1423, 1e19]",
    "theta0_c": "coefficient in the lower correction -1.02/((x-1) log x)",
    "exp_chain_c": "quadratic-term coefficient in the product error chain",
    "goldston_c": "leading constant of the short-interval zero-sum lemma",
    "consolidation_c": "consolidated sqrt(x) log y coefficient",
    "thm1_c": "linear log x coefficient in the first deviation theorem",
    "loglog_1e19": "5-decimal truncation of log log 1e19",
    "rcal_shift": "shift inside the tail remainder's upper branch",
    "rcal_midc": "consolidated mid-range constant of the tail remainder",
    "NT_c": "zero-counting envelope coefficients (0.28 / refined triple)",
    "eps_lo": "lower edge of the smoothing-window residual",
    "eps_hi": "upper edge of the smoothing-window residual",
    "diffs_lo": "lower factor in the theta-branch deviation transfer",
}

CONSTANTS = ConstantsTable()


def truncation_interval(printed: float, decimals: int = 5) -> Iv:
    """Interval implied by a printed decimal truncation.

    Truncation keeps digits without rounding, so a printed positive t
    means the true value lies in [t, t + 10^-d); for negative t, in
    (t - 10^-d, t].  Endpoints are padded one ulp outward to cover the
    decimal-to-binary conversion of t itself.
    """
    step = 10.0 ** (-decimals)
    if printed >= 0:
        return Iv(_dn(printed), _up(printed + step))
    return Iv(_dn(printed - step), _up(printed))


def euler_gamma_interval() -> Iv:
    """The correctly rounded double, padded one ulp each way."""
    return Iv(_dn(EULER_GAMMA), _up(EULER_GAMMA))


def b_interval() -> Iv:
    return truncation_interval(CONSTANTS.B)


def e_interval() -> Iv:
    return truncation_interval(CONSTANTS.E)
