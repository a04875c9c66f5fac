"""Multiphoton interference of Gaussian mixed-state photons with and without time resolution."""

from .distinguishability import (
    ds_closed_form,
    ds_exact,
    ds_monte_carlo,
    j_a,
    j_b_proper,
    j_b_raw,
    lambda_t,
)
from .errors import (
    BosonDistError,
    DimensionError,
    DomainError,
    NumericRangeError,
    SizeLimitError,
    UnitarityError,
)
from .interference import (
    Experiment,
    prob_a,
    prob_a_classical,
    prob_a_ideal,
    prob_a_occupation,
    prob_b,
    prob_b_ideal,
)
from .linalg import beam_splitter_50_50, circulant_det, haar_unitary, permanent, permanent_naive
from .metrics import DistSummary, deviation_bound, required_purity, summarize, tvd_a, tvd_b
from .photon_model import GaussianModel, purity_approx, purity_order_n

__version__ = "0.1.0"
