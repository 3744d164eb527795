"""Series systems whose units are randomly mixed can beat a uniformly stronger system.

Library layout:

* :mod:`.survival` - survival functions, families, series and mixture combinators
* :mod:`.quadrature` / :mod:`.sampling` - expected lifetimes and inverse-transform draws
* :mod:`.ordering` - grid checks of stochastic order and the paradox conditions
* :mod:`.paper_models` - the two concrete families where the mixed system wins
* :mod:`.game` - expected gain of the lifetime game, analytic and Monte Carlo
"""

__version__ = "0.1.0"

from .errors import (ConstructionError, InvalidSurvivalError, ParameterError, ParrondoError,
                     QuadratureError, SamplerError, UnderflowError)
from .game import Allocation, GameResult, GameSpec, analytic_gain, simulate, sweep
from .ordering import (FeasibilityPoint, OrderingReport, Verdict, check_paradox_conditions,
                       check_st_order, feasibility_point, hazard_identity_check, necessary_conditions,
                       sufficient_family_a_bound, sufficient_family_b_bound)
from .paper_models import (Example1Params, Example2Params, example1, example1_system_means, example2,
                           example2_custom, systems)
from .quadrature import mean_lifetime
from .sampling import SamplerConfig, quantile, sample
from .survival import (MixtureSystem, SeriesSystem, SurvivalFunction, exponential, hazard_rate,
                       mixture_system_survival, mixture_unit, series)
