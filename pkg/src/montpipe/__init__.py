"""Montgomery multiplication with a pipelined quotient and a bit-level datapath model."""

from .analysis import (DependenceDegree, LatencyParams, dependence_bound, dependence_degree,
                       estimate_t_max, latency_gain, latency_proposed, latency_serial)
from .classical import (MmmResult, QuotientTrace, check_quotient_consistency, classical_mmm,
                        final_reduce, modmul_oracle, mont_decode, mont_encode, mont_mul_corrected,
                        montgomery_expected, theorem1_constant)
from .context import MontgomeryContext, from_digits, make_context, to_digits
from .errors import InvariantError, MontError, ParameterError
from .variant import DrmmmTrace, drmmm_mul, q_hat

__version__ = "0.1.0"
