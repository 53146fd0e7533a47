"""Best-guess joint probability P(X and Y) from the marginals P(X), P(Y),
and expected-KL scoring of aggregation operators under Jeffreys' prior."""

from .core_bounds import (
    DegenerateIntervalError,
    DomainError,
    FeasibleInterval,
    JointDistribution,
    Marginals,
    feasible_interval,
    truncated_arcsine_pdf,
)
from .fisher import (
    Categorical,
    characteristic_determinant,
    delta_divergence,
    fisher_determinant,
    fisher_matrix,
    fisher_matrix_iid,
    jeffreys_density,
)
from .evaluation import LeagueEntry, league_table, loss_surface
from .operators import OperatorId, apply_operator
from .posterior_loss import (
    LossCoefficients,
    coefficients_AB,
    expected_kl,
    kappa,
    kl_bernoulli,
    loss_coefficients,
    normalization_Z,
    optimal_estimate,
    optimal_expected_kl,
)
from .prior import prior_density, prior_density_bruteforce
from .special import antiderivative_I, complete_elliptic_K, incomplete_elliptic_K
from .quadrature import GridSpec, QuadratureGrid, build_grid, grid_cuts, integrate_marginal_average

__version__ = "0.1.0"
