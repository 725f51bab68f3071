"""Center-manifold normal-form coefficients and the parameter unfolding map.

Near the triple zero the front velocity obeys, on the slow time scale,

    c'' = g1 c + g30 c^3 + c' (g2 + g40 c^2),

a symmetric Bogdanov-Takens normal form.  The constants g30, g40 and the
gradients g11, g21 of (g1, g2) with respect to the (alpha, beta) offsets are
ratios of Taylor coefficients of the Evans function, which makes them
invariant under rescaling of that function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotics import SQRT2, aij_table, organizing_center
from .errors import DegenerateParametersError, UnsupportedConfigurationError

#: b := (g2 g30) / (g1 g40) thresholds of the region-1..6 partition for
#: g30, g40 < 0: Hopf of the nontrivial equilibria at b = 1, the homoclinic
#: figure-eight at b = 4/5, and the fold of the symmetric cycles at the
#: minimum of the Melnikov ratio over the outer orbit family (see
#: reduced.cycle_fold_ratio, which recomputes it by quadrature).
ASYM_HOPF_RATIO = 1.0
HOMOCLINIC_RATIO = 0.8
CYCLE_FOLD_RATIO = 0.7522556


@dataclass(frozen=True)
class NormalFormCoeffs:
    """SBT coefficients at the organizing center plus the mu-gradients."""

    g30: float
    g40: float
    g11: np.ndarray  # gradient of g1 w.r.t. (alpha, beta) offsets
    g21: np.ndarray  # gradient of g2 w.r.t. (alpha, beta) offsets
    g1: float = 0.0
    g2: float = 0.0

    def at(self, g1: float, g2: float) -> "NormalFormCoeffs":
        return NormalFormCoeffs(self.g30, self.g40, self.g11, self.g21, g1, g2)


@dataclass(frozen=True)
class UnfoldingMap:
    """Affine map between (g1, g2) and the PDE parameters (alpha, beta)."""

    alpha0: float
    beta0: float
    matrix: np.ndarray  # d(g1, g2)/d(alpha, beta) at the center
    determinant: float

    @property
    def base(self) -> np.ndarray:
        return np.array([self.alpha0, self.beta0])


def g30_closed_form(tau_hat: float, theta_hat: float, diff_D: float) -> float:
    """(1/5) (D^2 tau - theta) / (D^2 (tau - theta)); equals the ratio form."""
    if tau_hat == theta_hat:
        raise DegenerateParametersError("g30 undefined for tau_hat == theta_hat")
    return 0.2 * (diff_D**2 * tau_hat - theta_hat) / (diff_D**2 * (tau_hat - theta_hat))


def g30_kappa_form(tau_hat: float, theta_hat: float, diff_D: float) -> float:
    """-(3 sqrt2 / 20) kappa3 / (tau theta) at the organizing center.

    This is the corollary's proof-stage prefactor; the statement carries
    -(3 / (20 sqrt2)), a factor 2 off, see :func:`g30_statement_prefactor`.
    The proof version reproduces both the ratio form and the reported
    numerical value (about -0.074 at (4.21, 10, 2.2)).
    """
    alpha, beta = organizing_center(tau_hat, theta_hat, diff_D)
    k3 = alpha * tau_hat**3 + beta * theta_hat**3 / diff_D**3
    return -(3.0 * SQRT2 / 20.0) * k3 / (tau_hat * theta_hat)


def g30_statement_prefactor(tau_hat: float, theta_hat: float, diff_D: float) -> float:
    """The suspected-typo variant -(3/(20 sqrt2)) kappa3/(tau theta), kept for the record."""
    return 0.5 * g30_kappa_form(tau_hat, theta_hat, diff_D)


def normal_form_coeffs(tau_hat: float, theta_hat: float, diff_D: float) -> NormalFormCoeffs:
    """g30, g40 and the gradients g11, g21 at the organizing center.

    g30 is computed in the normalization-free ratio form -(1/3) a20/a02;
    g40 = -(a21 - a20 a03 / a02)/a02.  The gradients are taken with respect
    to the (alpha, beta) offsets; the Taylor coefficients a00 and a01 are
    linear in (alpha, beta), so the gradients are exact.
    """
    if tau_hat == theta_hat:
        raise DegenerateParametersError("normal form undefined for tau_hat == theta_hat")
    alpha0, beta0 = organizing_center(tau_hat, theta_hat, diff_D)
    a = aij_table(alpha0, beta0, tau_hat, theta_hat, diff_D)
    g30 = -(1.0 / 3.0) * a.a20 / a.a02
    g40 = -(1.0 / a.a02) * (a.a21 - a.a20 * a.a03 / a.a02)
    # exact gradients of a00, a01 in (alpha, beta)
    grad_a00 = np.array([tau_hat / 4.0, theta_hat / (4.0 * diff_D)])
    grad_a01 = np.array(
        [-(3.0 / 16.0) * tau_hat**2, -(3.0 / 16.0) * theta_hat**2 / diff_D]
    )
    g11 = -grad_a00 / a.a02
    g21 = -(grad_a01 - grad_a00 * a.a03 / a.a02) / a.a02
    return NormalFormCoeffs(g30=g30, g40=g40, g11=g11, g21=g21)


def corollary_gradients(tau_hat: float, theta_hat: float, diff_D: float):
    """g11, g21 from the kappa-gradient formulas (independent route)."""
    grad_k1 = np.array([tau_hat, theta_hat / diff_D])
    grad_k2 = np.array([tau_hat**2, theta_hat**2 / diff_D])
    g11 = (6.0 * SQRT2 / (5.0 * tau_hat * theta_hat)) * grad_k1
    g21 = -(3.0 / (5.0 * SQRT2 * tau_hat * theta_hat)) * (
        3.0 * grad_k2 - 3.5 * (tau_hat + theta_hat) * grad_k1
    )
    return g11, g21


def unfolding_map(tau_hat: float, theta_hat: float, diff_D: float) -> UnfoldingMap:
    """Base point and 2x2 matrix of the affine (alpha, beta) <-> (g1, g2) map."""
    if tau_hat == theta_hat:
        raise DegenerateParametersError("unfolding map undefined for tau_hat == theta_hat")
    alpha0, beta0 = organizing_center(tau_hat, theta_hat, diff_D)
    m = (3.0 * SQRT2 / 5.0) * np.array(
        [
            [2.0 / theta_hat, 2.0 / (diff_D * tau_hat)],
            [
                (tau_hat + 7.0 * theta_hat) / (4.0 * theta_hat),
                (theta_hat + 7.0 * tau_hat) / (4.0 * diff_D * tau_hat),
            ],
        ]
    )
    det = (54.0 / 25.0) * (tau_hat - theta_hat) / (diff_D * tau_hat * theta_hat)
    return UnfoldingMap(alpha0=alpha0, beta0=beta0, matrix=m, determinant=det)


def g_to_params(g1: float, g2: float, umap: UnfoldingMap) -> tuple[float, float]:
    """(alpha, beta) realizing the unfolding values (g1, g2)."""
    if umap.determinant == 0:
        raise DegenerateParametersError("unfolding map is singular")
    offset = np.linalg.solve(umap.matrix, np.array([g1, g2]))
    ab = umap.base + offset
    return float(ab[0]), float(ab[1])


def params_to_g(alpha: float, beta: float, umap: UnfoldingMap) -> tuple[float, float]:
    """Linearized (g1, g2) of the parameter point (alpha, beta)."""
    g = umap.matrix @ (np.array([alpha, beta]) - umap.base)
    return float(g[0]), float(g[1])


def classify_region(
    g1: float,
    g2: float,
    coeffs: NormalFormCoeffs,
    boundary_tol: float = 1e-9,
):
    """Region 1-6 of the (g1, g2) unfolding plane for g30, g40 < 0.

    Returns the integer region index, or a string tag when the point lies on
    a boundary within ``boundary_tol``:

    1. g1 < 0, g2 < 0: stable stationary front only.
    2. g1 < 0, g2 > 0: stable symmetric cycle around the unstable origin.
    3. g1 > 0 above the nontrivial-equilibrium Hopf line: saddle origin, two
       unstable foci, the symmetric cycle persists.
    4. between that Hopf line and the homoclinic line: stable foci inside
       unstable asymmetric cycles, plus the big stable cycle.
    5. between the homoclinic line and the fold of cycles: stable foci and a
       stable/unstable pair of symmetric cycles.
    6. below the fold (including g2 <= 0): stable nontrivial equilibria only.
    """
    if not (coeffs.g30 < 0 and coeffs.g40 < 0):
        raise UnsupportedConfigurationError(
            "region classification covers the g30 < 0, g40 < 0 case only; got "
            f"g30={coeffs.g30}, g40={coeffs.g40}"
        )
    r = coeffs.g40 / coeffs.g30  # positive slope of the boundary lines in (g1, g2)
    scale = max(abs(g1), abs(g2))
    if scale <= boundary_tol:
        return "organizing-center"
    if abs(g1) <= boundary_tol * scale or abs(g1) <= boundary_tol:
        return "pitchfork-line"
    if g1 < 0:
        if abs(g2) <= boundary_tol:
            return "hopf-line"
        return 1 if g2 < 0 else 2
    # g1 > 0: compare g2 against the three rays g2 = ratio * r * g1
    for ratio, tag in (
        (ASYM_HOPF_RATIO, "asymmetric-hopf"),
        (HOMOCLINIC_RATIO, "homoclinic"),
        (CYCLE_FOLD_RATIO, "cycle-fold"),
    ):
        if abs(g2 - ratio * r * g1) <= boundary_tol * max(1.0, abs(g2)):
            return tag
    b = g2 / (r * g1)
    if b > ASYM_HOPF_RATIO:
        return 3
    if b > HOMOCLINIC_RATIO:
        return 4
    if b > CYCLE_FOLD_RATIO:
        return 5
    return 6
