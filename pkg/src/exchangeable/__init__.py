"""Exact verification of exchangeability and reverse-martingale properties.

Laws over finite alphabets are represented exactly with rational masses.
The checkers cover exchangeability, stationarity, the reverse
measure-valued martingale property of empirical distributions, Markov and
urn conditions, and their analogues for separately exchangeable matrices.
"""

from .core import (ComplementBlock, ConditioningField, Conjunction, CountsTotal, DomainError,
                   EmpiricalAt, JointLaw, MatrixLaw, PrefixCoords, QuadrantEmpirical,
                   RandomVariable, SingleCoord, TailFrom, cond_expectation,
                   equal_in_distribution, field_from, marginal, permute, swap)
from .empirical import (EmpiricalPath, FactorialMeasure, Measure, TestFunction,
                        count_measure_factorial, empirical_2d, empirical_path, factorial_measure,
                        indicator, indicators, integrate)
from .families import (MarkovSpec, StationaryModel, backward_sample, counterexample_law,
                       decompose_adjacent, extend_backward_law, iid_law, markov_law, markov_spec,
                       mixture_law, polya_law, urn_law)
from .matrix import (check_marginal_characterisation, check_reverse_martingale_2d,
                     check_sep_exchangeable, conjecture_search, marginal_views, permute_matrix)
from .properties import (MartingaleCheckConfig, PreconditionError, check_exchangeable,
                         check_homogeneous, check_joint_urn, check_marginal_urn, check_markov,
                         check_reverse_martingale, check_stationary, demonstrate_flaw,
                         verify_converse)
from .report import CheckReport, Witness

__version__ = "0.1.0"
