"""Spectral learning of rational stochastic languages from Hankel matrices,
with exact moments and dimension-free concentration bounds."""

__version__ = "0.1.0"

from .lang import Basis, basis, factor_occurrences, is_prefix
from .wfa import (DivergenceError, LinearRepresentation, PfaForm, de_smooth, evaluate, moment, series_sum,
                  transform_rep, validate)
from .hankel import (FactoredHankel, SparseHankel, dilate, empirical_hankel, exact_hankel, induced_norms,
                     per_string_hankel, spectral_norm_diff)
from .spectral import (LearnedModel, SvdResult, extract_representation, l1_distance_upto, learn, learn_exact,
                       stewart_bound, subspace_distance, truncated_svd)
from .bounds import (BoundReport, bound_baseline, bound_factor, bound_opt, bound_prefix, bound_standard,
                     k_eta, restricted_sigma2, solve_t)
from .sampling import Sample, empirical_distribution, sample
