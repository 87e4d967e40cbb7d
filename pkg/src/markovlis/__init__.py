"""Markov random words, longest weakly increasing subsequences, and their
limit laws.

The package simulates two-letter Markov words, measures the longest
weakly increasing subsequence by three independent routes, evaluates the
exact moment structure of the associated imbalance walk, and compares
Monte Carlo fluctuations of the subsequence length against the predicted
limiting distributions.
"""

from ._backend import BACKEND, USING_NUMBA
from .chain import (ChainParams, DerivedParams, InitialDistribution, Word,
                    derive, evolve, imbalance_covariance, imbalance_mean,
                    imbalance_variance, increment_covariance,
                    pair_probabilities, sample_letters, sample_word)
from .errors import ConsistencyError, DegenerateChainError, ParameterError
from .experiments import (EmpiricalDistribution, ExperimentConfig, KsResult,
                          drift_functional_values, ks_statistic, li_values,
                          run_drift_experiment, run_li_experiment,
                          run_moment_check, run_shape_experiment)
from .laws import (GuePerturbation, LimitLaw, drifted_max_tail_bound,
                   fluctuation_cdf, fluctuation_density, fluctuation_quantile,
                   gue2_eigenvalue_density, limiting_law, normal_cdf,
                   sample_brownian_functional, sample_brownian_functional_many,
                   sample_perturbed_max_eigenvalue,
                   sample_traceless_max_eigenvalue)
from .lis import (LatticeWalk, YoungShape, build_walk, lis_bruteforce,
                  lis_combinatorial, lis_patience, rsk_shape)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "USING_NUMBA", "__version__",
    "ChainParams", "DerivedParams", "InitialDistribution", "Word",
    "derive", "evolve", "sample_word", "sample_letters",
    "imbalance_mean", "increment_covariance", "imbalance_variance",
    "imbalance_covariance", "pair_probabilities",
    "LatticeWalk", "YoungShape", "build_walk", "lis_bruteforce",
    "lis_patience", "lis_combinatorial", "rsk_shape",
    "LimitLaw", "GuePerturbation", "limiting_law", "normal_cdf",
    "fluctuation_density", "fluctuation_cdf", "fluctuation_quantile",
    "sample_brownian_functional", "sample_brownian_functional_many",
    "sample_traceless_max_eigenvalue", "sample_perturbed_max_eigenvalue",
    "gue2_eigenvalue_density", "drifted_max_tail_bound",
    "ExperimentConfig", "EmpiricalDistribution", "KsResult", "ks_statistic",
    "li_values", "run_li_experiment", "run_shape_experiment",
    "run_moment_check", "run_drift_experiment", "drift_functional_values",
    "ParameterError", "DegenerateChainError", "ConsistencyError",
]
