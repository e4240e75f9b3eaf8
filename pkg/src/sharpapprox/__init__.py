"""Sharp-constant machinery for best trigonometric approximation of
periodic convolution classes, with independent numeric certificates.

Subpackages/modules:

* ``special_functions`` -- Hurwitz zeta (plain and alternating), digamma,
  log-gamma, generalized binomial numbers; everything else builds on these.
* ``multipliers``       -- coefficient families h, derived shape checks,
  admissible-perturbation thresholds, theorem applicability routing.
* ``series_engine``     -- sharp approximation values as certified series
  sums with explicit tail bounds.
* ``asymptotics``       -- small-delta expansions of those values with
  exact-coefficient terms and equality regions.
* ``oracle``            -- grid synthesis of kernels, discrete L1 best
  approximation (simplex), sign-pattern and positivity certificates.
* ``cli``               -- command-line front end (value / asymptote /
  verify / cesaro / sweep).
"""

from .special_functions import (
    cesaro_number,
    digamma,
    hurwitz_zeta,
    hurwitz_zeta_alternating,
    log_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "cesaro_number",
    "digamma",
    "hurwitz_zeta",
    "hurwitz_zeta_alternating",
    "log_gamma",
    "__version__",
]
