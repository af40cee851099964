"""Exact truncated q-series and an identity-verification harness."""

from .coeffring import INF, CoeffRing, LaurentCoeff, ParamSet, Window
from .errors import (BoundViolation, ConfigurationError, DomainError, EvaluationError,
                     NonTermination, NotInvertible, PrecisionError, QThetaError,
                     UnknownIdentity)
from .qseries import (QMonomial, QSeries, SeriesSpace, poch_finite, poch_inf, qs_invert,
                      render_series)
from .summation import Index, SumSpec, TerminationBound, eval_bilateral, eval_sum, phi, q_integral
from .special import big_q_jacobi, jacobi_norm, partial_theta

__version__ = "0.1.0"
