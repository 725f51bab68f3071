"""The reduced planar dynamics of the front velocity.

On the slow time scale the center-manifold reduction yields

    a' = c,   c' = c_tilde,   c_tilde' = g1 c + g30 c^3 + c_tilde (g2 + g40 c^2),

odd in (c, c_tilde).  This module integrates the system, analyses its
equilibria, scans for limit cycles with a Poincare section, and evaluates
the Melnikov quadratures that place the homoclinic and fold-of-cycles
boundaries of the unfolding plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import DivergenceError, ParameterError, UnsupportedConfigurationError


@dataclass(frozen=True)
class ReducedState:
    """Position, scaled velocity, scaled acceleration."""

    a: float
    c: float
    c_tilde: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.c, self.c_tilde])


@dataclass(frozen=True)
class ReducedParams:
    g1: float
    g2: float
    g30: float
    g40: float
    epsilon: float = 0.03

    def pde_time_factor(self) -> float:
        """Slow-time periods multiply by 1/eps^2 to become PDE-time periods."""
        return 1.0 / self.epsilon**2


@dataclass
class Trajectory:
    t: np.ndarray
    a: np.ndarray
    c: np.ndarray
    c_tilde: np.ndarray


@dataclass(frozen=True)
class Equilibrium:
    c_star: float
    eigenvalues: tuple
    stability: str


@dataclass
class CycleReport:
    exists: bool
    indeterminate: bool = False
    amplitude: float = np.nan
    period: float = np.nan
    detail: str = ""


def reduced_rhs(state: ReducedState, params: ReducedParams) -> ReducedState:
    """Slow-time derivative (a', c', c_tilde')."""
    c, ct = state.c, state.c_tilde
    return ReducedState(
        a=c,
        c=ct,
        c_tilde=params.g1 * c + params.g30 * c**3 + ct * (params.g2 + params.g40 * c**2),
    )


def integrate(
    state0: ReducedState,
    params: ReducedParams,
    t_end: float,
    dt: float,
    c_bound: float = 1e3,
) -> Trajectory:
    """Classical fourth-order one-step integration with fixed step.

    Raises :class:`DivergenceError` (carrying the partial trajectory) when
    |c| exceeds ``c_bound``.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    n = int(np.ceil(t_end / dt))
    t = np.linspace(0.0, n * dt, n + 1)
    ys = np.empty((n + 1, 3))
    ys[0] = state0.as_array()
    # plain-float inner loop: roughly an order of magnitude faster than
    # numpy scalars for this 3-dimensional system
    g1, g2, g30, g40 = params.g1, params.g2, params.g30, params.g40
    a, c, ct = float(state0.a), float(state0.c), float(state0.c_tilde)
    h = float(dt)
    for i in range(n):
        f1 = g1 * c + g30 * c**3 + ct * (g2 + g40 * c**2)
        c2 = c + 0.5 * h * ct
        ct2 = ct + 0.5 * h * f1
        f2 = g1 * c2 + g30 * c2**3 + ct2 * (g2 + g40 * c2**2)
        c3 = c + 0.5 * h * ct2
        ct3 = ct + 0.5 * h * f2
        f3 = g1 * c3 + g30 * c3**3 + ct3 * (g2 + g40 * c3**2)
        c4 = c + h * ct3
        ct4 = ct + h * f3
        f4 = g1 * c4 + g30 * c4**3 + ct4 * (g2 + g40 * c4**2)
        a = a + (h / 6.0) * (c + 2.0 * c2 + 2.0 * c3 + c4)
        c_new = c + (h / 6.0) * (ct + 2.0 * ct2 + 2.0 * ct3 + ct4)
        ct_new = ct + (h / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
        c, ct = c_new, ct_new
        ys[i + 1, 0] = a
        ys[i + 1, 1] = c
        ys[i + 1, 2] = ct
        if not (abs(c) <= c_bound and np.isfinite(ct)):
            partial = Trajectory(t[: i + 2], ys[: i + 2, 0], ys[: i + 2, 1], ys[: i + 2, 2])
            raise DivergenceError(
                f"|c| exceeded {c_bound} at t={t[i + 1]:.6g}", trajectory=partial
            )
    return Trajectory(t, ys[:, 0], ys[:, 1], ys[:, 2])


def equilibria_and_stability(params: ReducedParams, tol: float = 1e-12) -> list[Equilibrium]:
    """Equilibria c* with the eigenvalues of the (c, c_tilde) linearization.

    The characteristic polynomial at c* is
    lambda^2 - G2(c*) lambda - dG1/dc(c*) with G2 = g2 + g40 c*^2 and
    dG1/dc = g1 + 3 g30 c*^2.
    """
    cs = [0.0]
    if params.g30 != 0:
        csq = -params.g1 / params.g30
        if csq > 0:
            cs += [np.sqrt(csq), -np.sqrt(csq)]
    out = []
    for c in cs:
        trace = params.g2 + params.g40 * c**2
        det = -(params.g1 + 3.0 * params.g30 * c**2)
        disc = trace**2 - 4.0 * det
        sq = np.sqrt(complex(disc))
        lams = ((trace + sq) / 2.0, (trace - sq) / 2.0)
        re_max = max(lams[0].real, lams[1].real)
        if re_max > tol:
            tag = "unstable"
        elif re_max < -tol:
            tag = "stable"
        else:
            tag = "center"
        out.append(Equilibrium(c_star=c, eigenvalues=lams, stability=tag))
    return out


def section_hits(t, c, ct):
    """Poincare section c_tilde = 0, c > 0, descending crossings.

    These occur at the positive-c extrema of a loop, so the interpolated
    c-value at the hit is the loop amplitude.
    """
    hits = []
    for i in range(len(t) - 1):
        if ct[i] > 0.0 >= ct[i + 1] and c[i] > 0:
            s = ct[i] / (ct[i] - ct[i + 1])
            hits.append((t[i] + s * (t[i + 1] - t[i]), c[i] + s * (c[i + 1] - c[i])))
    return hits


def _scan_one_seed(seed, params, t_max, dt, rel_tol):
    """Chunked integration until the section return map settles.

    Returns (amplitude, period) for a genuine cycle, or one of the string
    verdicts 'decayed' (origin/equilibrium reached), 'no-hits',
    'budget' (undecided), 'diverged'.
    """
    state = ReducedState(0.0, seed, 0.0)
    t_total = 0.0
    chunk = 1500.0
    all_hits = []
    while t_total < t_max:
        try:
            traj = integrate(state, params, chunk, dt)
        except DivergenceError:
            return "diverged"
        hits = section_hits(traj.t, traj.c, traj.c_tilde)
        all_hits += [(t_total + h[0], h[1]) for h in hits]
        state = ReducedState(traj.a[-1], traj.c[-1], traj.c_tilde[-1])
        t_total += chunk
        if all_hits and abs(all_hits[-1][1]) < 1e-8:
            return "decayed"
        if len(hits) == 0 and t_total >= 3 * chunk:
            return "no-hits"
        if len(all_hits) >= 5:
            cs = np.array([h[1] for h in all_hits[-4:]])
            ts = np.array([h[0] for h in all_hits[-4:]])
            drift = np.max(np.abs(np.diff(cs)))
            if drift <= rel_tol * abs(cs[-1]):
                period = float(np.mean(np.diff(ts)))
                # verify a genuine oscillation: a focus approach has a
                # vanishing c-range over one period
                check = integrate(state, params, 1.5 * period, dt)
                rng_ = float(np.max(check.c) - np.min(check.c))
                if rng_ < 0.2 * abs(cs[-1]):
                    return "decayed"
                amplitude = float(np.max(np.abs(check.c)))
                return (amplitude, period)
    return "budget"


def limit_cycle_scan(
    params: ReducedParams,
    t_max: float = 2e5,
    dt: float = 0.05,
    seeds: tuple = None,
    rel_tol: float = 1e-4,
) -> CycleReport:
    """Look for a stable limit cycle by long integration plus a return map.

    The Poincare section is the c_tilde = 0, c > 0 crossing, which symmetric
    cycles cross transversally at their positive-c extremum.  Integration
    proceeds in chunks until successive section values agree to ``rel_tol``
    (the return map has settled); reports the amplitude max|c| and the
    slow-time period.  Indeterminate when the budget runs out undecided.
    """
    if not (params.g30 < 0 and params.g40 < 0):
        raise UnsupportedConfigurationError("cycle scan assumes g30 < 0 and g40 < 0")
    if seeds is None:
        guesses = [2.0 * np.sqrt(abs(params.g2 / params.g40))] if params.g2 > 0 else []
        if params.g1 > 0 and params.g30 < 0:
            guesses.append(2.0 * np.sqrt(-params.g1 / params.g30))
        base = max(guesses) if guesses else 0.05
        seeds = tuple(guesses) + (0.25 * base, 3.0 * base)
    undecided = []
    for seed in seeds:
        out = _scan_one_seed(seed, params, t_max, dt, rel_tol)
        if isinstance(out, tuple):
            amplitude, period = out
            if amplitude > 1e-8:
                return CycleReport(exists=True, amplitude=amplitude, period=period)
        elif out in ("budget", "diverged"):
            undecided.append(out)
    if undecided:
        return CycleReport(
            exists=False, indeterminate=True, detail=",".join(sorted(set(undecided)))
        )
    return CycleReport(exists=False)


# -- Melnikov quadratures for the Hamiltonian limit ---------------------------
#
# Rescaling c = sqrt(g1/|g30|) u and time by 1/sqrt(g1) (g1 > 0) turns the
# system into u'' = u - u^3 + delta u'(b - u^2) with b = g2 g30 / (g1 g40)
# and delta -> 0 along rays to the origin of the (g1, g2) plane.  A cycle of
# the Hamiltonian energy level h survives the perturbation iff
# b = R(h) := (oint u'^2 u^2) / (oint u'^2).

def melnikov_ratio(h: float) -> float:
    """R(h) for the symmetric (outer, h > 0) orbit family."""
    if h <= 0:
        raise ParameterError("outer orbits require h > 0")
    um = np.sqrt(1.0 + np.sqrt(1.0 + 4.0 * h))

    def p(u):
        return np.sqrt(np.maximum(2.0 * h + u**2 - 0.5 * u**4, 0.0))

    i0 = quad(p, 0.0, um, limit=400)[0]
    i2 = quad(lambda u: u**2 * p(u), 0.0, um, limit=400)[0]
    return i2 / i0


def cycle_fold_ratio() -> float:
    """min_h R(h): the fold-of-cycles boundary value of b (about 0.7523)."""
    hs = np.logspace(-4, 1, 40)
    vals = [melnikov_ratio(h) for h in hs]
    i = int(np.argmin(vals))
    lo = hs[max(i - 1, 0)]
    hi = hs[min(i + 1, len(hs) - 1)]
    res = minimize_scalar(melnikov_ratio, bounds=(lo, hi), method="bounded")
    return float(res.fun)


def homoclinic_ratio(h_small: float = 1e-8) -> float:
    """R(h -> 0+): the homoclinic boundary value of b (equals 4/5)."""
    return melnikov_ratio(h_small)
