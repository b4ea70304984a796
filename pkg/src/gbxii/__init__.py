"""Six-parameter generalized Burr XII distribution: evaluation, moments,
sampling, order statistics and maximum-likelihood fitting."""

from .distribution import (
    Params,
    burr_xii,
    cdf,
    hazard,
    interval_probability,
    log_logistic,
    log_pdf,
    lomax,
    mean,
    new_params,
    pdf,
    quantile,
    raw_moment,
    survival,
    variance,
)
from .errors import (
    ConvergenceError,
    DegenerateDataError,
    DomainError,
    GBXIIError,
    IdentifiabilityError,
    MomentExistenceError,
)
from .estimation import FitConfig, FitResult, fit_mle, init_heuristic, neg_log_likelihood
from .order_statistics import (
    OrderStatSpec,
    max_pdf,
    min_distribution,
    min_mean,
    min_moment,
    min_variance,
    order_stat_cdf,
    order_stat_pdf,
)
from .sampling import RngState, SampleBatch, sample

__version__ = "0.1.0"
