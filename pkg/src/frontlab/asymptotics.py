"""Closed forms from the singular-limit analysis.

Everything in this module is analytic in the parameters: the kappa
combinations that control the multiplicity of the zero eigenvalue, the
existence condition for uniformly traveling fronts and its Taylor
coefficients, the traveling-front Evans function with its Taylor table, and
the closed-form (generalized) eigenfunctions of the linearization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateParametersError, DomainError, PreconditionError, \
    UnsupportedConfigurationError
from .grid import Grid
from .model import FieldState
from .params import Params

SQRT2 = np.sqrt(2.0)

#: |kappa| tolerance for "at the organizing center" when the caller supplies
#: parameters produced by :func:`organizing_center`.
CENTER_TOL = 1e-10
#: |kappa| tolerance for user-supplied parameters.
USER_CENTER_TOL = 1e-6


@dataclass(frozen=True)
class KappaTriple:
    """Parameter combinations controlling the zero-eigenvalue multiplicity."""

    kappa1: float
    kappa2: float
    kappa3: float


@dataclass(frozen=True)
class ExistenceTaylor:
    """Odd Taylor coefficients of the existence condition at c = 0."""

    c1: float  # kappa1 / 2
    c3: float  # -kappa3 / 16
    c5: float  # (3/256) (alpha tau^5 + beta theta^5 / D^5)

    def __call__(self, c):
        return self.c1 * c + self.c3 * c**3 + self.c5 * c**5


@dataclass(frozen=True)
class EvansCoeffs:
    """Taylor table a_ij of the reduced Evans function (j: c power / 2, i: spectral power)."""

    a00: float
    a20: float
    a01: float
    a21: float
    a02: float
    a03: float


def kappas(params: Params) -> KappaTriple:
    p = params
    return KappaTriple(
        kappa1=p.alpha * p.tau_hat + p.beta * p.theta_hat / p.diff_D - 2.0 * SQRT2 / 3.0,
        kappa2=p.alpha * p.tau_hat**2 + (p.beta / p.diff_D) * p.theta_hat**2,
        kappa3=p.alpha * p.tau_hat**3 + p.beta * p.theta_hat**3 / p.diff_D**3,
    )


def organizing_center(tau_hat: float, theta_hat: float, diff_D: float) -> tuple[float, float]:
    """The (alpha, beta) with kappa1 = kappa2 = 0 exactly."""
    if tau_hat == theta_hat:
        raise DegenerateParametersError("organizing center undefined for tau_hat == theta_hat")
    alpha = 2.0 * SQRT2 * theta_hat / (3.0 * tau_hat * (theta_hat - tau_hat))
    beta = 2.0 * SQRT2 * diff_D * tau_hat / (3.0 * (tau_hat - theta_hat) * theta_hat)
    return alpha, beta


def center_params(
    epsilon: float,
    tau_hat: float = 4.21,
    theta_hat: float = 10.0,
    diff_D: float = 2.2,
    gamma: float = 0.0,
) -> Params:
    """Params at the organizing center of (tau_hat, theta_hat, diff_D)."""
    alpha, beta = organizing_center(tau_hat, theta_hat, diff_D)
    return Params(
        epsilon=epsilon,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        tau_hat=tau_hat,
        theta_hat=theta_hat,
        diff_D=diff_D,
    )


def _smoothstep(y: np.ndarray) -> np.ndarray:
    t = np.clip(y, 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


def asymptotic_front(params: Params, grid: Grid) -> FieldState:
    """Leading-order stationary front profile.

    u = tanh(x / (sqrt(2) eps)); the slow fields carry the tails
    +-(1 - exp(-|x|)) and +-(1 - exp(-|x|/D)), switched off across the
    +-sqrt(eps) matching zone by a C^1 smoothstep (the sharp indicator
    functions of the matched expansion would be penalized by a discrete
    residual).
    """
    x = grid.nodes
    eps = params.epsilon
    u = np.tanh(x / (SQRT2 * eps))
    blend = _smoothstep(np.abs(x) / np.sqrt(eps))
    sgn = np.sign(x)
    v = blend * sgn * (1.0 - np.exp(-np.abs(x)))
    w = blend * sgn * (1.0 - np.exp(-np.abs(x) / params.diff_D))
    return FieldState(u, v, w)


def existence_gamma(c: float, params: Params) -> float:
    """Leading-order existence condition Gamma(c) for traveling fronts."""
    p = params
    t1 = p.alpha * c * p.tau_hat / np.sqrt(c**2 * p.tau_hat**2 + 4.0)
    t2 = (
        p.beta
        * p.theta_hat
        * c
        / (p.diff_D * np.sqrt(c**2 * p.theta_hat**2 / p.diff_D**2 + 4.0))
    )
    return t1 + t2 + p.gamma - (SQRT2 / 3.0) * c


def taylor_existence(params: Params) -> ExistenceTaylor:
    """Odd quintic Taylor of the existence condition; requires gamma = 0."""
    if params.gamma != 0.0:
        raise UnsupportedConfigurationError("existence Taylor is defined for gamma = 0 only")
    k = kappas(params)
    p = params
    c5 = (3.0 / 256.0) * (p.alpha * p.tau_hat**5 + p.beta * p.theta_hat**5 / p.diff_D**5)
    return ExistenceTaylor(c1=0.5 * k.kappa1, c3=-k.kappa3 / 16.0, c5=c5)


def _check_branch(arg: complex) -> None:
    if arg.imag == 0.0 and arg.real <= 0.0:
        raise DomainError(
            f"argument {arg} lies on the principal-branch cut of the square root"
        )


def evans_eval(lambda_hat: complex, c: float, params: Params) -> complex:
    """Traveling-front Evans function D(lambda_hat, c).

    Uses the normalization in which the c = 0 value is one half of the
    stationary-front formula; roots are unaffected.  Raises
    :class:`DomainError` when a square-root argument hits the branch cut.
    """
    p = params
    lam = complex(lambda_hat)
    rho_a = c * p.tau_hat
    rho_b = c * p.theta_hat / p.diff_D
    arg_a = rho_a**2 + 4.0 * (p.tau_hat * lam + 1.0)
    arg_b = rho_b**2 + 4.0 * (p.theta_hat * lam + 1.0)
    _check_branch(complex(arg_a))
    _check_branch(complex(arg_b))
    d_a = 1.0 / np.sqrt(rho_a**2 + 4.0) - 1.0 / np.sqrt(arg_a)
    d_b = 1.0 / np.sqrt(rho_b**2 + 4.0) - 1.0 / np.sqrt(arg_b)
    return -(SQRT2 / 6.0) * lam + p.alpha * d_a + (p.beta / p.diff_D) * d_b


def evans_deriv(lambda_hat: complex, c: float, params: Params) -> complex:
    """Analytic d D / d lambda_hat, used for Newton polishing of roots."""
    p = params
    lam = complex(lambda_hat)
    arg_a = (c * p.tau_hat) ** 2 + 4.0 * (p.tau_hat * lam + 1.0)
    arg_b = (c * p.theta_hat / p.diff_D) ** 2 + 4.0 * (p.theta_hat * lam + 1.0)
    _check_branch(complex(arg_a))
    _check_branch(complex(arg_b))
    return (
        -(SQRT2 / 6.0)
        + 2.0 * p.alpha * p.tau_hat * arg_a ** (-1.5)
        + 2.0 * (p.beta / p.diff_D) * p.theta_hat * arg_b ** (-1.5)
    )


def aij_table(
    alpha: float, beta: float, tau_hat: float, theta_hat: float, diff_D: float
) -> EvansCoeffs:
    """Closed-form Taylor table of E = D / lambda_hat around (0, 0)."""
    k1 = alpha * tau_hat + beta * theta_hat / diff_D - 2.0 * SQRT2 / 3.0
    k2 = alpha * tau_hat**2 + (beta / diff_D) * theta_hat**2
    k3 = alpha * tau_hat**3 + beta * theta_hat**3 / diff_D**3
    return EvansCoeffs(
        a00=k1 / 4.0,
        a20=-(3.0 / 32.0) * k3,
        a01=-(3.0 / 16.0) * k2,
        a21=(15.0 / 128.0) * (alpha * tau_hat**4 + (beta / diff_D**3) * theta_hat**4),
        a02=(5.0 / 32.0) * (alpha * tau_hat**3 + (beta / diff_D) * theta_hat**3),
        a03=-(35.0 / 256.0) * (alpha * tau_hat**4 + (beta / diff_D) * theta_hat**4),
    )


def evans_taylor_aij(params: Params) -> EvansCoeffs:
    """Taylor table a_ij evaluated at the model parameters."""
    p = params
    return aij_table(p.alpha, p.beta, p.tau_hat, p.theta_hat, p.diff_D)


def zero_root_multiplicity(params: Params, tol: float = USER_CENTER_TOL) -> int:
    """Multiplicity of the root lambda_hat = 0, decided by kappa1, kappa2."""
    k = kappas(params)
    if abs(k.kappa1) > tol:
        return 1
    if abs(k.kappa2) > tol:
        return 2
    return 3


def evans_roots(
    params: Params,
    c: float = 0.0,
    radius: float = 5.0,
    n_contour: int = 2048,
    tol: float = 1e-12,
) -> list[complex]:
    """All roots of D(., c) in the disc |lambda_hat| <= radius.

    Root counting uses the argument principle on the boundary of the disc
    intersected with the half-plane right of the branch cuts; roots are then
    polished by Newton from a deterministic seed set.  Returns the roots with
    multiplicity (the root at 0 is repeated per its kappa-multiplicity).
    Raises :class:`DomainError` when more than three roots are found, which
    signals parameters outside the regime of the analysis.
    """
    p = params
    cut = -1.0 / max(p.tau_hat, p.theta_hat)
    # stay to the right of the branch points with a small safety margin
    re_min = (1.0 - 1e-3) * cut

    def inside(z: complex) -> bool:
        return abs(z) <= radius and z.real >= re_min

    # winding number along the D-shaped contour
    ts = np.linspace(0.0, 2.0 * np.pi, n_contour, endpoint=False)
    contour = []
    for t in ts:
        z = radius * np.exp(1j * t)
        if z.real < re_min:
            # project onto the vertical cut line
            y = np.sqrt(max(radius**2 - re_min**2, 0.0))
            z = re_min + 1j * np.clip(z.imag, -y, y)
        contour.append(z)
    vals = np.array([evans_eval(z, c, params) for z in contour])
    dphase = np.angle(vals[np.r_[1:n_contour, 0]] / vals)
    winding = int(np.round(dphase.sum() / (2.0 * np.pi)))

    mult0 = zero_root_multiplicity(params)
    roots: list[complex] = [0.0j] * mult0

    zero_cluster = 1e-6

    # real roots: bracket sign changes on the real segment (D is real there)
    def _real_scan(lo: float, hi: float, m: int):
        from scipy.optimize import brentq

        xs = np.linspace(lo, hi, m)
        fs = np.array([evans_eval(x, c, params).real for x in xs])
        found = []
        for i in range(m - 1):
            if fs[i] == 0.0 and abs(xs[i]) > zero_cluster:
                found.append(xs[i])
            elif fs[i] * fs[i + 1] < 0:
                r = brentq(lambda x: evans_eval(x, c, params).real, xs[i], xs[i + 1])
                if abs(r) > zero_cluster:
                    found.append(r)
        return found

    real_roots = _real_scan(re_min * (1.0 - 1e-6), -1e-5, 600) + _real_scan(
        1e-5, radius, 600
    )
    for r in real_roots:
        if all(abs(r - z) > 1e-6 * (1.0 + abs(r)) for z in roots):
            roots.append(complex(r))

    # complex roots: deterministic Newton seeds on rings around the origin
    seeds = []
    for r in (0.05, 0.1, 0.3, 0.8, 1.8, 3.5):
        for t in np.linspace(0.0, 2.0 * np.pi, 24, endpoint=False):
            seeds.append(r * np.exp(1j * t))
    for z0 in seeds:
        if not inside(z0):
            continue
        z = complex(z0)
        converged = False
        for _ in range(80):
            try:
                f = evans_eval(z, c, params)
                df = evans_deriv(z, c, params)
            except DomainError:
                break
            if df == 0:
                break
            step = f / df
            z = z - step
            if abs(step) < tol * max(1.0, abs(z)):
                converged = True
                break
            if abs(z) > 3 * radius:
                break
        if not converged or not inside(z):
            continue
        if abs(z) < zero_cluster:
            continue  # belongs to the multiple root at zero
        if all(abs(z - r) > 1e-6 * (1.0 + abs(z)) for r in roots):
            roots.append(z)

    if len(roots) > 3 or winding > 3:
        raise DomainError(
            f"found {max(len(roots), winding)} roots in the disc; "
            "parameters are outside the at-most-three-eigenvalues regime"
        )
    return roots


@dataclass(frozen=True)
class ClosedEigenfunctions:
    """Pointwise evaluators of the closed-form (generalized) eigenfunctions.

    Each evaluator returns (u, v, w) at a point x; ``region`` reports which
    piece of the matched expansion applies there.  ``phi`` is the
    eigenfunction for eigenvalue eps^2*lambda_hat; ``psi`` and ``psi_tilde``
    are the first and second generalized eigenfunctions of the zero
    eigenvalue (they require the double/triple-zero conditions).
    """

    params: Params
    lambda_hat: float
    phi: Callable
    psi: Callable
    psi_tilde: Callable

    def region(self, x: float) -> str:
        lim = np.sqrt(self.params.epsilon)
        if x < -lim:
            return "slow-"
        if x > lim:
            return "slow+"
        return "fast"


def closed_eigenfunctions(params: Params, lambda_hat: float = 0.0) -> ClosedEigenfunctions:
    """Evaluators per the matched-asymptotics lemmas.

    ``psi`` needs kappa1 = 0 and ``psi_tilde`` needs kappa1 = kappa2 = 0
    (within tolerance); violating evaluators raise
    :class:`PreconditionError` when called.
    """
    p = params
    eps = p.epsilon
    lam = float(lambda_hat)
    k = kappas(params)
    tau_arg = p.tau_hat * lam + 1.0
    theta_arg = p.theta_hat * lam + 1.0
    if tau_arg <= 0 or theta_arg <= 0:
        raise DomainError("lambda_hat lies on the branch cut")
    h_v = 1.0 / np.sqrt(tau_arg)
    h_w = 1.0 / (p.diff_D * np.sqrt(theta_arg))
    rate_v = np.sqrt(tau_arg)  # slow decay rates of the v and w components
    rate_w = np.sqrt(theta_arg) / p.diff_D
    lim = np.sqrt(eps)

    def phi(x: float):
        xa = abs(x)
        u = (SQRT2 / (2.0 * eps)) / np.cosh(x / (SQRT2 * eps)) ** 2
        if xa <= lim:
            return (u, h_v, h_w)
        return (u, h_v * np.exp(-rate_v * xa), h_w * np.exp(-rate_w * xa))

    def _psi_slow(x: float):
        s = 1.0 if x > 0 else -1.0
        v = -0.5 * p.tau_hat * (1.0 + s * x) * np.exp(-s * x)
        w = -0.5 * (p.theta_hat / p.diff_D) * (1.0 + s * x / p.diff_D) * np.exp(-s * x / p.diff_D)
        return v, w

    def psi(x: float):
        if abs(k.kappa1) > USER_CENTER_TOL:
            raise PreconditionError(
                f"first generalized eigenfunction requires kappa1 = 0, got {k.kappa1}"
            )
        if abs(x) <= lim:
            return (eps / (3.0 * SQRT2), -0.5 * p.tau_hat, -0.5 * p.theta_hat / p.diff_D)
        v, w = _psi_slow(x)
        return (eps * (-0.5 * p.alpha * v - 0.5 * p.beta * w), v, w)

    def _psi_tilde_slow(x: float):
        s = 1.0 if x > 0 else -1.0
        v = (p.tau_hat**2 / 8.0) * (x**2 + 3.0 * s * x + 3.0) * np.exp(-s * x)
        w = (
            (p.theta_hat**2 / (8.0 * p.diff_D**3))
            * (x**2 + 3.0 * p.diff_D * s * x + 3.0 * p.diff_D**2)
            * np.exp(-s * x / p.diff_D)
        )
        return v, w

    def psi_tilde(x: float):
        if abs(k.kappa1) > USER_CENTER_TOL or abs(k.kappa2) > USER_CENTER_TOL:
            raise PreconditionError(
                "second generalized eigenfunction requires kappa1 = kappa2 = 0, got "
                f"({k.kappa1}, {k.kappa2})"
            )
        if abs(x) <= lim:
            return (0.0, 3.0 * p.tau_hat**2 / 8.0, 3.0 * p.theta_hat**2 / (8.0 * p.diff_D))
        v, w = _psi_tilde_slow(x)
        return (eps * (-0.5 * p.alpha * v - 0.5 * p.beta * w), v, w)

    return ClosedEigenfunctions(
        params=params, lambda_hat=lam, phi=phi, psi=psi, psi_tilde=psi_tilde
    )
