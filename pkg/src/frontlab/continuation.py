"""Steady-state solving, one-parameter continuation, bifurcation detection.

Steady states are computed in the comoving (freezing) formulation

    F(Z) - c M D1 Z = 0,   <Z - Z_ref, D1 Z_ref>_w = 0,

whose solutions with c != 0 are traveling fronts; on the symmetric branch
(gamma = 0) the velocity converges to zero and the formulation reduces to
F(Z) = 0.  Branches are continued with a secant predictor and Newton
corrector under adaptive steps; every accepted point carries a deflated
leading spectrum (the quasi-translation mode is removed structurally by the
freezing bordering), a stability flag, and a bifurcation tag.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NonConvergenceError, ParameterError, SwitchFailureError
from .grid import Grid
from .model import (
    FieldState,
    jacobian,
    mass_diagonal,
    reflect,
    residual,
    state_from_flat,
    weighted_norm,
)
from .normal_form import UnfoldingMap, g_to_params, params_to_g, unfolding_map
from .params import Params

#: Newton success threshold in the grid-weighted norm.
NEWTON_TOL = 1e-10
#: An eigenvalue with real part above this counts as unstable.
STABILITY_THRESHOLD = 1e-8
#: Bisection tolerance for bifurcation locations (in the driven parameter).
BIFURCATION_TOL = 1e-5


@dataclass
class BranchPoint:
    """One accepted continuation sample."""

    params: Params
    state: FieldState
    c: float
    param_name: str
    param_value: float
    g1: float
    g2: float
    norm: float
    eigenvalues: np.ndarray
    stable: bool
    bif: str = "none"
    bif_location: float = np.nan


@dataclass
class Branch:
    points: list = field(default_factory=list)
    events: list = field(default_factory=list)  # (tag, location, index)
    stalled: bool = False
    stall_message: str = ""


def newton_correct(
    params: Params,
    guess: FieldState,
    grid: Grid,
    tol: float = NEWTON_TOL,
    max_iter: int = 25,
) -> FieldState:
    """Newton iteration for the stationary problem F(Z) = 0."""
    z = guess.copy()
    history = []
    for _ in range(max_iter):
        F = residual(params, z, grid)
        rnorm = weighted_norm(grid, F)
        history.append(rnorm)
        if rnorm <= tol:
            return z
        J = jacobian(params, z, grid).tocsc()
        delta = spla.splu(J).solve(-F.flat())
        z = state_from_flat(z.flat() + delta)
        if not z.check_finite():
            raise NonConvergenceError("Newton iterate became non-finite", history)
    F = residual(params, z, grid)
    history.append(weighted_norm(grid, F))
    if history[-1] <= tol:
        return z
    raise NonConvergenceError(
        f"Newton did not reach {tol:g} within {max_iter} iterations", history
    )


def _stacked_weights(grid: Grid) -> np.ndarray:
    return np.tile(grid.trapezoid_weights(), 3)


def _d1_block(grid: Grid) -> sp.csr_matrix:
    D1 = grid.d1()
    return sp.block_diag([D1, D1, D1], format="csr")


def newton_comoving(
    params: Params,
    guess: FieldState,
    grid: Grid,
    c_guess: float = 0.0,
    phase_ref: FieldState | None = None,
    tol: float = NEWTON_TOL,
    max_iter: int = 30,
) -> tuple[FieldState, float]:
    """Newton iteration for the freezing steady problem.

    Unknowns are (Z, c); the phase condition <Z - Z_ref, D1 Z_ref>_w = 0
    selects one representative along the (approximate) group orbit and
    regularizes the near-singular translation direction.
    """
    ref = (phase_ref or guess).copy()
    D1s = _d1_block(grid)
    w3 = _stacked_weights(grid)
    dref = D1s @ ref.flat()
    phase_row = w3 * dref
    mdiag = mass_diagonal(params, grid)

    z = guess.flat().copy()
    c = float(c_guess)
    history = []
    for _ in range(max_iter):
        st = state_from_flat(z)
        F = residual(params, st, grid).flat()
        adv = mdiag * (D1s @ z)
        R = F - c * adv
        phase = float(phase_row @ (z - ref.flat()))
        rnorm = float(np.sqrt(np.sum(w3 * R * R) + phase * phase))
        history.append(rnorm)
        if rnorm <= tol:
            return state_from_flat(z), c
        J = jacobian(params, st, grid)
        Jc = J - c * sp.diags(mdiag) @ D1s
        K = sp.bmat(
            [[Jc, -adv.reshape(-1, 1)], [phase_row.reshape(1, -1), None]], format="csc"
        )
        rhs = np.concatenate([-R, [-phase]])
        delta = spla.splu(K).solve(rhs)
        z = z + delta[:-1]
        c = c + float(delta[-1])
        if not np.isfinite(z).all() or not np.isfinite(c):
            raise NonConvergenceError("comoving Newton became non-finite", history)
    raise NonConvergenceError(
        f"comoving Newton did not reach {tol:g} within {max_iter} iterations", history
    )


# -- parameter drivers ---------------------------------------------------------


def _apply_param(params: Params, umap: UnfoldingMap, name: str, value: float) -> Params:
    """Reparametrize: alpha/beta/gamma directly, g1/g2 through the unfolding map."""
    if name == "alpha":
        return params.with_coupling(value, params.beta)
    if name == "beta":
        return params.with_coupling(params.alpha, value)
    if name == "gamma":
        return params.with_coupling(params.alpha, params.beta, gamma=value)
    if name in ("g1", "g2"):
        g1, g2 = params_to_g(params.alpha, params.beta, umap)
        if name == "g1":
            g1 = value
        else:
            g2 = value
        a, b = g_to_params(g1, g2, umap)
        return params.with_coupling(a, b)
    raise ParameterError(f"unknown continuation parameter {name!r}")


def _param_value(params: Params, umap: UnfoldingMap, name: str) -> float:
    if name in ("alpha", "beta", "gamma"):
        return getattr(params, name)
    g1, g2 = params_to_g(params.alpha, params.beta, umap)
    return g1 if name == "g1" else g2


# -- spectra, stability, and classification ------------------------------------


def _point_spectrum(params, state, grid, c, k):
    from .spectral import deflated_spectrum

    return deflated_spectrum(params, state, grid, c=c, k=k)


def _is_stable(eigenvalues: np.ndarray) -> bool:
    return bool(np.max(eigenvalues.real) <= STABILITY_THRESHOLD)


def _eigvec_is_reflection_odd(vec: np.ndarray, grid: Grid) -> bool:
    """R v = -v for the gamma=0 reflection R(v)(x) = -v(-x)."""
    n = grid.n
    v = state_from_flat(np.real(vec[: 3 * n]))
    rv = reflect(v).flat()
    vv = v.flat()
    denom = float(vv @ vv)
    if denom == 0:
        return False
    return float(rv @ vv) / denom < -0.5


def make_branch_point(
    params: Params,
    state: FieldState,
    c: float,
    grid: Grid,
    umap: UnfoldingMap,
    param_name: str,
    k: int = 6,
) -> BranchPoint:
    eigs, _ = _point_spectrum(params, state, grid, c, k)
    g1, g2 = params_to_g(params.alpha, params.beta, umap)
    return BranchPoint(
        params=params,
        state=state,
        c=c,
        param_name=param_name,
        param_value=_param_value(params, umap, param_name),
        g1=g1,
        g2=g2,
        norm=weighted_norm(grid, state),
        eigenvalues=eigs,
        stable=_is_stable(eigs),
    )


def _unstable_counts(eigenvalues: np.ndarray, thr: float = STABILITY_THRESHOLD):
    """(number of unstable real eigenvalues, number of unstable complex ones)."""
    unstable = eigenvalues[eigenvalues.real > thr]
    n_complex = int(np.sum(np.abs(unstable.imag) > 10 * thr))
    return len(unstable) - n_complex, n_complex


def detect_bifurcation(prev: BranchPoint, next_: BranchPoint, resolver=None):
    """Classify an eigenvalue crossing between two accepted points.

    Hopf: the unstable complex-pair count changes.  Real crossing: pitchfork
    when the critical eigenvector is reflection-odd (gamma = 0), fold
    otherwise.  With a ``resolver`` callback (param_value -> BranchPoint)
    the location is refined by bisection to BIFURCATION_TOL; without one the
    midpoint is reported.  Simultaneous crossings produce a multi-tag join.
    """
    tags = []
    r0, c0 = _unstable_counts(prev.eigenvalues)
    r1, c1 = _unstable_counts(next_.eigenvalues)
    if c0 != c1:
        tags.append("hopf")
    if r0 != r1:
        tags.append("real-crossing")
    if not tags:
        return None
    lo, hi = prev.param_value, next_.param_value
    lo_point, hi_point = prev, next_
    if resolver is not None:
        while abs(hi - lo) > BIFURCATION_TOL:
            mid = 0.5 * (lo + hi)
            mid_point = resolver(mid)
            rm, cm = _unstable_counts(mid_point.eigenvalues)
            if (rm, cm) == (r0, c0):
                lo, lo_point = mid, mid_point
            else:
                hi, hi_point = mid, mid_point
    location = 0.5 * (lo + hi)
    return tags, location, hi_point


def _classify_real_crossing(point: BranchPoint, grid: Grid) -> str:
    from .spectral import deflated_spectrum

    eigs, vecs = deflated_spectrum(
        point.params, point.state, grid, c=point.c, k=min(6, len(point.eigenvalues))
    )
    # the critical vector belongs to the real eigenvalue nearest zero
    real_idx = [i for i in range(len(eigs)) if abs(eigs[i].imag) < 1e-3 * (1 + abs(eigs[i]))]
    if not real_idx:
        return "fold"
    i_crit = min(real_idx, key=lambda i: abs(eigs[i].real))
    if point.params.gamma == 0.0 and _eigvec_is_reflection_odd(vecs[:, i_crit], grid):
        return "pitchfork"
    return "fold"


def continue_branch(
    start: BranchPoint,
    which_param: str,
    target: float,
    grid: Grid,
    step: float | None = None,
    min_step: float = 1e-7,
    max_step: float | None = None,
    k_eigs: int = 6,
) -> Branch:
    """Natural-parameter continuation with secant predictor and Newton corrector.

    Walks ``which_param`` from the start point to ``target`` with adaptive
    steps; every accepted point carries its deflated spectrum and stability
    flag, and eigenvalue crossings between accepted points are classified and
    bisected.  A step collapse below ``min_step`` ends the branch with a
    stall report at the last good point.
    """
    umap = unfolding_map(start.params.tau_hat, start.params.theta_hat, start.params.diff_D)
    p0 = _param_value(start.params, umap, which_param)
    span = target - p0
    if span == 0:
        return Branch(points=[start])
    if step is None:
        step = span / 20.0
    if max_step is None:
        max_step = abs(span) / 4.0
    direction = np.sign(span)
    step = direction * min(abs(step), max_step)

    branch = Branch(points=[replace(start, param_name=which_param, param_value=p0)])

    def solve_at(value: float, guess: FieldState, c_guess: float):
        p = _apply_param(start.params, umap, which_param, value)
        z, c = newton_comoving(p, guess, grid, c_guess=c_guess, phase_ref=guess)
        return make_branch_point(p, z, c, grid, umap, which_param, k=k_eigs)

    current = branch.points[0]
    prev_sol = None
    while (target - current.param_value) * direction > 1e-14:
        h = direction * min(abs(step), abs(target - current.param_value))
        value = current.param_value + h
        # secant predictor in the full unknown vector
        if prev_sol is not None and abs(current.param_value - prev_sol.param_value) > 0:
            ratio = (value - current.param_value) / (
                current.param_value - prev_sol.param_value
            )
            guess_flat = current.state.flat() + ratio * (
                current.state.flat() - prev_sol.state.flat()
            )
            c_guess = current.c + ratio * (current.c - prev_sol.c)
            guess = state_from_flat(guess_flat)
        else:
            guess, c_guess = current.state, current.c
        try:
            accepted = solve_at(value, guess, c_guess)
        except NonConvergenceError:
            step = 0.5 * step
            if abs(step) < min_step:
                branch.stalled = True
                branch.stall_message = (
                    f"step collapsed below {min_step:g} at {which_param}="
                    f"{current.param_value:.8g}"
                )
                break
            continue
        # classify crossings between the previous and the new point
        event = detect_bifurcation(
            current,
            accepted,
            resolver=lambda v: solve_at(
                v, current.state, current.c
            ),
        )
        if event is not None:
            tags, location, at_point = event
            labels = []
            for tag in tags:
                label = tag
                if tag == "real-crossing":
                    label = _classify_real_crossing(at_point, grid)
                labels.append(label)
            label = "+".join(labels)
            accepted.bif = label
            accepted.bif_location = location
            branch.events.append((label, location, len(branch.points)))
        # distance monitor: no silent branch jumping
        dist = weighted_norm(
            grid, state_from_flat(accepted.state.flat() - current.state.flat())
        )
        scale = max(accepted.norm, 1e-9)
        if dist > 0.5 * scale and abs(step) > min_step * 4:
            step = 0.5 * step
            continue
        prev_sol, current = current, accepted
        branch.points.append(accepted)
        if abs(step) < max_step:
            step = direction * min(abs(step) * 1.4, max_step)
    return branch


def branch_switch(
    at: BranchPoint,
    grid: Grid,
    direction: float = 1.0,
    delta: float = 1e-2,
    k_eigs: int = 6,
) -> BranchPoint:
    """Seed Newton off a pitchfork point along the critical odd eigenvector.

    Retries with larger kicks when the corrector falls back onto the
    symmetric branch; raises :class:`SwitchFailureError` when all retries
    land back on it.
    """
    from .spectral import deflated_spectrum

    umap = unfolding_map(at.params.tau_hat, at.params.theta_hat, at.params.diff_D)
    eigs, vecs = deflated_spectrum(at.params, at.state, grid, c=at.c, k=k_eigs)
    real_idx = [i for i in range(len(eigs)) if abs(eigs[i].imag) < 1e-6]
    if not real_idx:
        raise SwitchFailureError("no real critical eigenvalue at the switch point")
    i_crit = min(real_idx, key=lambda i: abs(eigs[i].real))
    mode = np.real(vecs[: 3 * grid.n, i_crit])
    mode = mode / weighted_norm(grid, state_from_flat(mode))
    scale = max(at.norm, 1.0)
    for attempt in range(4):
        kick = direction * delta * (2.0**attempt) * scale
        guess = state_from_flat(at.state.flat() + kick * mode)
        try:
            z, c = newton_comoving(at.params, guess, grid, c_guess=at.c, phase_ref=guess)
        except NonConvergenceError:
            continue
        dist = weighted_norm(grid, state_from_flat(z.flat() - at.state.flat()))
        if dist > 1e-5 * scale or abs(c - at.c) > 1e-8:
            return make_branch_point(
                at.params, z, c, grid, umap, at.param_name, k=k_eigs
            )
    raise SwitchFailureError("corrector fell back onto the symmetric branch")
