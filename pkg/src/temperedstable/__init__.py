"""Tempered fractional multistable / tempered multifractional stable motions.

Exact kernels, characteristic functions, quasi-norms and dependence measures
for the tempered heavy-tailed motions with varying stability or Hurst index,
plus Monte Carlo path simulation to validate them against.
"""

from .analyze import (EmpiricalCF, LocalisabilityReport, MomentLimit,
                      MomentScalingReport, TailReport, empirical_cf, flimit,
                      holder_exponent_estimate, localisability_check,
                      moment_estimate, moment_scaling_experiment,
                      rescaled_increment_spec, sin2_integral, sup_growth_report,
                      tail_check, tangent_spec)
from .charfn import CFQuery, cf, cf_exponent, scaling_check
from .dependence import (BandCheck, DependencePoint, RateFit, abs_pow_diff,
                         band_check, dep_eval, rate_fit, semi_lrd_sum)
from .errors import (ConfigurationError, DomainError, ExperimentError,
                     NumericalError)
from .params import (Constant, LinearClamped, ParamFunction, PiecewiseLinear,
                     Sinusoidal)
from .process import (KINDS, ProcessSpec, constant_spec, increment_kernel,
                      kernel, noise_kernel, tempered_power, yaglom_kernel)
from .quadrature import (IntegrandSpec, QuadResult, adaptive_integrate,
                         integrate_alpha_power, truncation_bound)
from .quasinorm import (QuasiNormResult, SlopeFit, holder_slope_experiment,
                        increment_quasinorm, process_quasinorm, quasinorm)
from .simulate import (GridSpec, PathEnsemble, sample_sas,
                       simulate_increment_samples, simulate_noise,
                       simulate_paths)

__version__ = "0.1.0"
