"""Freezing-method time integration of the full PDE.

The comoving formulation evolves M W_t = F(W) - c(t) M D1 W where the
instantaneous frame velocity

    c(t) = <M^-1 F(W), W_x>_w / ||W_x||_w^2

makes W_t orthogonal to the translation-orbit direction; positions follow
by quadrature, a(t) = integral of c.  Time stepping is linearly implicit:
all linear terms (diffusion, linear reaction, coupling) are folded into a
constant matrix together with the eps^-2 mass factors, so the singular
scales do not constrain dt; the cubic term and the advection are explicit.
A second-order variant (trapezoidal linear part with two-step extrapolated
explicit terms) is available for convergence studies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DegenerateStateError, ParameterError, SolverError
from .grid import Grid
from .model import (
    FieldState,
    linear_part_matrix,
    mass_diagonal,
    state_from_flat,
)
from .params import Params


@dataclass
class TrajectoryRecord:
    """Velocity and position trace of a frozen-frame simulation."""

    t: np.ndarray
    c: np.ndarray
    a: np.ndarray
    snapshot_times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)

    def mean_velocity(self, t_from: float = 0.0) -> float:
        mask = self.t >= t_from
        tt, cc = self.t[mask], self.c[mask]
        if tt.size < 2:
            return float("nan")
        return float(np.trapezoid(cc, tt) / (tt[-1] - tt[0]))


def freeze_velocity(params: Params, state: FieldState, grid: Grid) -> float:
    """The orthogonality-condition frame velocity <M^-1 F, Z_x>_w/||Z_x||_w^2."""
    from .model import mass_inverse_apply, residual, weighted_inner

    D1 = grid.d1()
    zx = FieldState(D1 @ state.u, D1 @ state.v, D1 @ state.w)
    denom = weighted_inner(grid, zx, zx)
    if denom < 1e-14:
        raise DegenerateStateError("state has no translation direction (flat profile)")
    mf = mass_inverse_apply(params, residual(params, state, grid))
    return weighted_inner(grid, mf, zx) / denom


class Stepper:
    """Semi-implicit comoving stepper with a cached factorization.

    order=1: linearly implicit Euler (linear terms implicit, cubic and
    advection explicit).  order=2: trapezoidal linear part with
    Adams-Bashforth extrapolation of the explicit terms.
    """

    def __init__(self, params: Params, grid: Grid, dt: float, order: int = 1):
        if dt <= 0:
            raise ParameterError(f"dt must be positive, got {dt}")
        if order not in (1, 2):
            raise ParameterError(f"order must be 1 or 2, got {order}")
        self.params = params
        self.grid = grid
        self.dt = float(dt)
        self.order = order
        self.mdiag = mass_diagonal(params, grid)
        L = linear_part_matrix(params, grid)
        M = sp.diags(self.mdiag)
        theta = 1.0 if order == 1 else 0.5
        self._lhs = spla.splu((M / dt - theta * L).tocsc())
        self._L = L.tocsr()
        D1 = grid.d1()
        self._D1 = sp.block_diag([D1, D1, D1], format="csr")
        self._prev_explicit = None

    def _explicit(self, z: np.ndarray, c: float) -> np.ndarray:
        p = self.params
        n = self.grid.n
        u = z[:n]
        nl = np.zeros_like(z)
        nl[:n] = -(u**3) - p.epsilon * p.gamma
        adv = -c * (self.mdiag * (self._D1 @ z))
        return nl + adv

    def step(self, state: FieldState, c: float) -> FieldState:
        z = state.flat()
        ex = self._explicit(z, c)
        if self.order == 1:
            # (M/dt - L) z+ = M z/dt + explicit
            rhs = self.mdiag * z / self.dt + ex
        else:
            if self._prev_explicit is None:
                ex_eff = ex  # first step falls back to first order
            else:
                ex_eff = 1.5 * ex - 0.5 * self._prev_explicit
            self._prev_explicit = ex
            rhs = self.mdiag * z / self.dt + 0.5 * (self._L @ z) + ex_eff
        znew = self._lhs.solve(rhs)
        if not np.isfinite(znew).all():
            raise SolverError("time step produced non-finite values")
        return state_from_flat(znew)


def step(
    params: Params,
    state: FieldState,
    grid: Grid,
    dt: float,
    c: float = 0.0,
    order: int = 1,
) -> FieldState:
    """One semi-implicit step (convenience wrapper; builds a fresh Stepper).

    For long runs construct a :class:`Stepper` once and reuse it: the
    implicit matrix is constant and its factorization dominates the cost.
    """
    return Stepper(params, grid, dt, order=order).step(state, c)


def simulate_frozen(
    params: Params,
    state0: FieldState,
    grid: Grid,
    t_end: float,
    dt: float,
    order: int = 1,
    snapshot_stride: int = 0,
) -> TrajectoryRecord:
    """Alternate freeze_velocity and comoving steps; record c(t) and a(t).

    a is the cumulative trapezoid integral of c with a(0) = 0.  Snapshots of
    the full state are kept every ``snapshot_stride`` steps when the stride
    is positive.
    """
    stepper = Stepper(params, grid, dt, order=order)
    n_steps = int(np.ceil(t_end / dt))
    t = np.linspace(0.0, n_steps * dt, n_steps + 1)
    c = np.empty(n_steps + 1)
    state = state0.copy()
    snaps, snap_times = [], []
    c[0] = freeze_velocity(params, state, grid)
    for i in range(n_steps):
        state = stepper.step(state, c[i])
        c[i + 1] = freeze_velocity(params, state, grid)
        if snapshot_stride and (i + 1) % snapshot_stride == 0:
            snaps.append(state.copy())
            snap_times.append(t[i + 1])
    a = np.concatenate([[0.0], np.cumsum(0.5 * (c[1:] + c[:-1]) * np.diff(t))])
    return TrajectoryRecord(t=t, c=c, a=a, snapshot_times=snap_times, snapshots=snaps)


def perturb(state: FieldState, mode: FieldState, amplitude: float) -> FieldState:
    """state + amplitude * mode."""
    if mode.n != state.n:
        raise ParameterError("perturbation mode must live on the state's grid")
    return FieldState(
        state.u + amplitude * mode.u,
        state.v + amplitude * mode.v,
        state.w + amplitude * mode.w,
    )


def leading_unstable_mode(params: Params, state: FieldState, grid: Grid, k: int = 4):
    """Real part of the most unstable deflated eigenvector, unit weighted norm.

    This is the default perturbation mode for kicking a front off an
    unstable steady state.
    """
    from .model import weighted_norm
    from .spectral import deflated_spectrum

    vals, vecs = deflated_spectrum(params, state, grid, k=k)
    i = int(np.argmax(vals.real))
    mode_flat = np.real(vecs[: 3 * grid.n, i])
    mode = state_from_flat(mode_flat)
    nrm = weighted_norm(grid, mode)
    if nrm == 0:
        raise DegenerateStateError("unstable mode has zero norm")
    return FieldState(mode.u / nrm, mode.v / nrm, mode.w / nrm), vals[i]
