"""Prior-free probabilistic variable selection for Gaussian linear regression.

Typical use::

    from imvs import load_prostate, center, fit, build, plausibility_table, select

    theta = fit(center(load_prostate()))
    dist = build(theta.L, theta.nu, B=100_000, seed=1)
    table = plausibility_table(theta, dist)
    select(table, alpha=0.05).selected_names
"""

from .errors import (CholeskyFailure, DataError, DegenerateResidual, DimensionMismatch,
                     IMError, SingularDesign, TooFewRows)
from .im import (PlausibilityTable, PosiRegion, SelectionResult, assertion_belief,
                 model_plausibility, plausibility_table, posi_region, select,
                 singleton_plausibility)
from .maxnorm import MaxNormDist, build, univariate_t_cdf
from .regression import Dataset, ThetaFit, center, fit, load_prostate, read_csv

__version__ = "0.1.0"

__all__ = [
    "CholeskyFailure", "DataError", "DegenerateResidual", "DimensionMismatch", "IMError",
    "SingularDesign", "TooFewRows",
    "PlausibilityTable", "PosiRegion", "SelectionResult", "assertion_belief",
    "model_plausibility", "plausibility_table", "posi_region", "select",
    "singleton_plausibility",
    "MaxNormDist", "build", "univariate_t_cdf",
    "Dataset", "ThetaFit", "center", "fit", "load_prostate", "read_csv",
]
