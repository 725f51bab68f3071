"""Leading spectra, the numerical Jordan chain, and the scalar slow-fast
eigenvalue check.

The operator of interest is M^-1 dF(Z); its critical point spectrum consists
of at most three small eigenvalues lambda = eps^2 lambda_hat.  A bordered
(freezing) pencil removes the quasi-translation mode structurally, which is
essential near the triple zero where all three cluster eigenvectors collapse
onto the translation direction and overlap tests become meaningless.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .asymptotics import kappas
from .errors import SolverError
from .grid import Grid
from .model import (
    FieldState,
    jacobian,
    mass_diagonal,
    state_from_flat,
    weighted_inner,
    weighted_norm,
)
from .params import Params

#: |kappa| threshold beyond which the Jordan-chain solve warns.
TRIPLE_ZERO_TOL = 1e-8


@dataclass
class SpectrumReport:
    """The k eigenvalues of M^-1 dF nearest zero with solver diagnostics."""

    eigenvalues: np.ndarray          # sorted by |lambda|
    lambda_hats: np.ndarray          # eigenvalues / eps^2
    residuals: np.ndarray            # ||A v - lambda v|| / ||v||
    gap_to_next: float               # |lambda_{k+1}| - |lambda_k|
    essential_bound: float           # analytic left bound on the essential spectrum
    eigenvectors: np.ndarray = field(repr=False, default=None)

    def right_of_essential(self) -> bool:
        return bool(np.min(self.eigenvalues.real) >= self.essential_bound - 1e-12)


@dataclass
class JordanChainNumeric:
    """Discrete Jordan-chain vectors, chain residuals, and normalizations.

    Residual keys: 'phi' for ||L Phi||/||Phi||, 'psi' for
    ||L Psi - eps^2 Phi||/||Psi||, 'psi_tilde' for the second relation, and
    the 'adj_*' counterparts on the adjoint side.
    """

    phi: FieldState
    psi: FieldState
    psi_tilde: FieldState
    phi_star: FieldState
    psi_star: FieldState
    psi_tilde_star: FieldState
    residuals: dict
    p1: float
    p2: float
    p3: float
    orthogonality: dict
    condition_estimate: float


def linear_operator(params: Params, state: FieldState, grid: Grid, c: float = 0.0):
    """Sparse M^-1 dF(Z) - c D1 (comoving linearization for c != 0)."""
    J = jacobian(params, state, grid)
    minv = 1.0 / mass_diagonal(params, grid)
    A = sp.diags(minv) @ J
    if c != 0.0:
        D1 = grid.d1()
        A = A - c * sp.block_diag([D1, D1, D1], format="csr")
    return A.tocsc()


def essential_bound(params: Params) -> float:
    e2 = params.epsilon**2
    return max(-2.0, -e2 / params.tau_hat, -e2 / params.theta_hat)


def _eigs_near_zero(A, k: int, M=None, v0=None):
    n = A.shape[0]
    if v0 is None:
        v0 = np.ones(n) / np.sqrt(n)
    try:
        vals, vecs = spla.eigs(A, k=k, M=M, sigma=0.0, which="LM", v0=v0)
    except spla.ArpackNoConvergence as exc:
        raise SolverError(
            "shift-invert eigensolver did not converge",
            {"k": k, "n": n, "arpack": str(exc)},
        ) from exc
    order = np.argsort(np.abs(vals))
    return vals[order], vecs[:, order]


def leading_spectrum(params: Params, state: FieldState, grid: Grid, k: int = 3) -> SpectrumReport:
    """The k eigenvalues of M^-1 dF nearest zero (shift-invert about 0)."""
    A = linear_operator(params, state, grid)
    vals, vecs = _eigs_near_zero(A, k + 1)
    res = np.array(
        [
            np.linalg.norm(A @ vecs[:, i] - vals[i] * vecs[:, i]) / np.linalg.norm(vecs[:, i])
            for i in range(k + 1)
        ]
    )
    gap = float(np.abs(vals[k]) - np.abs(vals[k - 1]))
    return SpectrumReport(
        eigenvalues=vals[:k],
        lambda_hats=vals[:k] / params.epsilon**2,
        residuals=res[:k],
        gap_to_next=gap,
        essential_bound=essential_bound(params),
        eigenvectors=vecs[:, :k],
    )


def deflated_spectrum(params: Params, state: FieldState, grid: Grid, c: float = 0.0, k: int = 2):
    """Spectrum of the freezing-bordered pencil: translation mode removed.

    Solves lambda diag(I, 0) x = [[A, -Z_zeta], [q^T, 0]] x with the phase
    template q = w . Z_zeta, i.e. the linearization of the frozen system.
    Returns (eigenvalues, eigenvectors) with the eigenvalues sorted by
    modulus; the spurious infinite mode of the constraint is excluded by the
    shift-invert transform itself.
    """
    A = linear_operator(params, state, grid, c=c)
    n = A.shape[0]
    D1 = grid.d1()
    dz = sp.block_diag([D1, D1, D1], format="csr") @ state.flat()
    q = np.tile(grid.trapezoid_weights(), 3) * dz
    A_ext = sp.bmat(
        [[A, -dz.reshape(-1, 1)], [q.reshape(1, -1), None]], format="csc"
    )
    M_ext = sp.diags(np.concatenate([np.ones(n), [0.0]])).tocsc()
    vals, vecs = _eigs_near_zero(A_ext, k, M=M_ext)
    return vals, vecs


def adjoint_operator(A, grid: Grid):
    """Adjoint with respect to the trapezoid-weighted duality product."""
    w3 = np.tile(grid.trapezoid_weights(), 3)
    return (sp.diags(1.0 / w3) @ A.conj().T @ sp.diags(w3)).tocsc()


def _bordered_solve(A, border_col, constraint_row, rhs, w3):
    """Solve A x + xi b = rhs subject to <constraint, x>_w = 0.

    The border column absorbs the component of the right-hand side along the
    left near-null direction; |xi| * ||b|| is exactly the residual of the
    returned x in the unbordered equation.
    """
    n = A.shape[0]
    K = sp.bmat(
        [[A, border_col.reshape(-1, 1)], [(w3 * constraint_row).reshape(1, -1), None]],
        format="csc",
    )
    lu = spla.splu(K)
    sol = lu.solve(np.concatenate([rhs, [0.0]]))
    return sol[:n], float(sol[n]), lu


def _cond_estimate(lu, n):
    """Cheap 1-norm condition proxy of the bordered matrix inverse."""
    rng = np.random.default_rng(0)
    x = rng.standard_normal(n + 1)
    y = lu.solve(x)
    return float(np.linalg.norm(y, 1) / np.linalg.norm(x, 1))


def jordan_chain(params: Params, state: FieldState, grid: Grid) -> JordanChainNumeric:
    """Numerical Jordan chain L Phi = 0, L Psi = eps^2 Phi, L PsiT = eps^2 Psi.

    Phi is the spatial derivative of the steady front (normalized to unit
    weighted norm); Psi and PsiT come from bordered solves with the border
    along the numerically computed adjoint kernel and orthogonality against
    Phi.  The adjoint chain mirrors the construction; p1..p3 are computed
    outputs of the normalization, not inputs.
    """
    k = kappas(params)
    if abs(k.kappa1) > TRIPLE_ZERO_TOL or abs(k.kappa2) > TRIPLE_ZERO_TOL:
        warnings.warn(
            f"parameters are off the triple zero (kappa1={k.kappa1:.2e}, "
            f"kappa2={k.kappa2:.2e}); the bordered solves are still attempted",
            stacklevel=2,
        )
    e2 = params.epsilon**2
    A = linear_operator(params, state, grid)
    A_star = adjoint_operator(A, grid)
    w3 = np.tile(grid.trapezoid_weights(), 3)
    D1 = grid.d1()

    def wnorm(x):
        return float(np.sqrt(np.sum(w3 * x * x)))

    def winner(x, y):
        return float(np.sum(w3 * x * y))

    phi = sp.block_diag([D1, D1, D1], format="csr") @ state.flat()
    phi = phi / wnorm(phi)

    vals, vecs = _eigs_near_zero(A_star, 1)
    phi_star = np.real(vecs[:, 0])
    phi_star = phi_star / wnorm(phi_star)

    # direct chain
    psi, xi1, lu1 = _bordered_solve(A, w3 * phi_star, phi, e2 * phi, w3)
    psi_tilde, xi2, _ = _bordered_solve(A, w3 * phi_star, phi, e2 * psi, w3)
    # adjoint chain
    psi_star, xi1s, _ = _bordered_solve(A_star, w3 * phi, phi_star, e2 * phi_star, w3)
    psi_tilde_star, xi2s, _ = _bordered_solve(
        A_star, w3 * phi, phi_star, e2 * psi_star, w3
    )

    residuals = {
        "phi": wnorm(A @ phi) / wnorm(phi),
        "psi": wnorm(A @ psi - e2 * phi) / wnorm(psi),
        "psi_tilde": wnorm(A @ psi_tilde - e2 * psi) / wnorm(psi_tilde),
        "adj_phi": wnorm(A_star @ phi_star) / wnorm(phi_star),
        "adj_psi": wnorm(A_star @ psi_star - e2 * phi_star) / wnorm(psi_star),
        "adj_psi_tilde": wnorm(A_star @ psi_tilde_star - e2 * psi_star)
        / wnorm(psi_tilde_star),
    }
    orthogonality = {
        "<phi,phi*>": winner(phi, phi_star),
        "<phi,psi*>": winner(phi, psi_star),
        "<phi*,psi>": winner(phi_star, psi),
        "<psi,psi*>": winner(psi, psi_star),
        "<psi~,phi*>": winner(psi_tilde, phi_star),
        "<psi~,psi*>": winner(psi_tilde, psi_star),
    }
    p1 = winner(phi, psi_tilde_star)
    p2 = winner(psi, psi_tilde_star)
    p3 = winner(psi_tilde, psi_tilde_star)
    return JordanChainNumeric(
        phi=state_from_flat(phi),
        psi=state_from_flat(psi),
        psi_tilde=state_from_flat(psi_tilde),
        phi_star=state_from_flat(phi_star),
        psi_star=state_from_flat(psi_star),
        psi_tilde_star=state_from_flat(psi_tilde_star),
        residuals=residuals,
        p1=p1,
        p2=p2,
        p3=p3,
        orthogonality=orthogonality,
        condition_estimate=_cond_estimate(lu1, A.shape[0]),
    )


def scalar_interface_operator(params: Params, u: np.ndarray, grid: Grid):
    """The scalar operator eps^2 d_xx + 1 - 3 u^2 around the front's u."""
    D2 = grid.d2()
    return (params.epsilon**2 * D2 + sp.diags(1.0 - 3.0 * u**2)).tocsc()


def slep_scalar_eig(
    params: Params, grid: Grid, state: FieldState | None = None
) -> tuple[float, float]:
    """Maximal eigenvalue of the scalar interface operator and its prediction.

    The prediction is eps^2 (3 sqrt2 / 2)(alpha + beta/D).  When ``state`` is
    omitted the steady front is computed by Newton from the asymptotic seed.
    """
    if state is None:
        from .asymptotics import asymptotic_front
        from .continuation import newton_correct

        state = newton_correct(params, asymptotic_front(params, grid), grid)
    L = scalar_interface_operator(params, state.u, grid)
    # self-adjoint w.r.t. trapezoid weights: symmetrize and use eigsh
    w = grid.trapezoid_weights()
    s = np.sqrt(w)
    B = sp.diags(s) @ L @ sp.diags(1.0 / s)
    B = 0.5 * (B + B.T)
    vals = spla.eigsh(B.tocsc(), k=1, which="LA", return_eigenvectors=False,
                      v0=np.ones(grid.n) / np.sqrt(grid.n))
    prediction = params.epsilon**2 * (3.0 * np.sqrt(2.0) / 2.0) * (
        params.alpha + params.beta / params.diff_D
    )
    return float(vals[0]), float(prediction)


def slep_condition_checks(params: Params) -> tuple[float, float]:
    """(kappa1, -(3/4) kappa2): the SLEP solvability values whose zeros mark
    multiplicity two and three."""
    k = kappas(params)
    return k.kappa1, -(3.0 / 4.0) * k.kappa2
