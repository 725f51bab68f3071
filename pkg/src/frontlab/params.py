"""Model parameters for the three-component front system.

The system couples a bistable fast field U to two linear slow fields V, W:

    u_t              = eps^2 u_xx + u - u^3 - eps*(alpha*v + beta*w + gamma)
    (tau/eps^2) v_t  = v_xx + u - v
    (theta/eps^2) w_t = D^2 w_xx + u - w

All parameters are order one with respect to the singular scale eps.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

from .errors import ParameterError

#: Reference setup used throughout the numerical experiments.
DEFAULT_EPSILON = 0.03
DEFAULT_TAU = 4.21
DEFAULT_THETA = 10.0
DEFAULT_D = 2.2


@dataclass(frozen=True)
class Params:
    """The seven model parameters.

    ``epsilon`` is the singular perturbation scale; ``alpha``, ``beta``,
    ``gamma`` couple the slow fields back into the fast equation;
    ``tau_hat`` and ``theta_hat`` are the (scaled) time constants of the
    slow fields and ``diff_D`` the slow diffusion contrast (``diff_D > 1``).
    """

    epsilon: float
    alpha: float
    beta: float
    gamma: float = 0.0
    tau_hat: float = DEFAULT_TAU
    theta_hat: float = DEFAULT_THETA
    diff_D: float = DEFAULT_D

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not self.tau_hat > 0:
            raise ParameterError(f"tau_hat must be positive, got {self.tau_hat}")
        if not self.theta_hat > 0:
            raise ParameterError(f"theta_hat must be positive, got {self.theta_hat}")
        if not self.diff_D > 1:
            raise ParameterError(f"diff_D must satisfy D > 1, got {self.diff_D}")
        _warn_if_not_order_one(self)

    def with_coupling(self, alpha: float, beta: float, gamma: float | None = None) -> "Params":
        """Copy with new coupling constants (used by parameter sweeps)."""
        g = self.gamma if gamma is None else gamma
        return replace(self, alpha=alpha, beta=beta, gamma=g)


def _warn_if_not_order_one(p: Params) -> None:
    """Soft check that the non-singular parameters are O(1) w.r.t. eps."""
    hi = 1.0 / p.epsilon
    lo = p.epsilon
    checks = {
        "tau_hat": p.tau_hat,
        "theta_hat": p.theta_hat,
        "diff_D": p.diff_D,
    }
    for name, value in checks.items():
        if value > hi or value < lo:
            warnings.warn(
                f"{name}={value} is not order one relative to epsilon={p.epsilon}; "
                "the singular-limit formulas may be inaccurate",
                stacklevel=3,
            )
    for name, value in (("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma)):
        if abs(value) > hi:
            warnings.warn(
                f"|{name}|={abs(value)} is large relative to 1/epsilon; "
                "the singular-limit formulas may be inaccurate",
                stacklevel=3,
            )
