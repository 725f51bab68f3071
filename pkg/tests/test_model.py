import numpy as np
import pytest

from frontlab import (
    FieldState,
    Params,
    asymptotic_front,
    jacobian,
    make_grid,
    mass_apply,
    mass_inverse_apply,
    reflect,
    residual,
)
from frontlab.grid import diff2_matrix
from frontlab.model import (
    background_root,
    constant_state,
    state_from_flat,
    weighted_norm,
    zero_state,
)


def smooth_random_state(grid, rng, modes=6):
    """Band-limited random field, smooth on the grid scale."""
    x = grid.nodes / grid.half_length
    comps = []
    for _ in range(3):
        f = np.zeros_like(x)
        for k in range(1, modes + 1):
            a, b = rng.standard_normal(2)
            f += (a * np.cos(np.pi * k * x) + b * np.sin(np.pi * k * x)) / k**2
        comps.append(f)
    return FieldState(*comps)


def test_zero_state_zero_residual():
    p = Params(epsilon=0.05, alpha=0.3, beta=-0.1, gamma=0.0)
    g = make_grid(5.0, 256, 0.05)
    F = residual(p, zero_state(g), g)
    assert weighted_norm(g, F) == 0.0


def test_constant_one_state_residual():
    p = Params(epsilon=0.05, alpha=0.3, beta=-0.1, gamma=0.0)
    g = make_grid(5.0, 256, 0.05)
    F = residual(p, constant_state(g, 1.0, 1.0, 1.0), g)
    # 1e-10 absorbs the 1/h^2 cancellation roundoff of D2 @ const
    np.testing.assert_allclose(F.u, -p.epsilon * (p.alpha + p.beta), atol=1e-10)
    np.testing.assert_allclose(F.v, 0.0, atol=1e-10)
    np.testing.assert_allclose(F.w, 0.0, atol=1e-10)


def test_mass_scalings():
    p = Params(epsilon=0.1, alpha=0.0, beta=0.0, tau_hat=1.0, theta_hat=2.0, diff_D=1.5)
    g = make_grid(5.0, 128, 0.1)
    out = mass_inverse_apply(p, constant_state(g, 1.0, 1.0, 1.0))
    np.testing.assert_allclose(out.u, 1.0)
    np.testing.assert_allclose(out.v, 0.01)
    np.testing.assert_allclose(out.w, 0.005)


def test_mass_roundtrip(rng):
    p = Params(epsilon=0.03, alpha=0.4, beta=-0.2, tau_hat=4.21)
    g = make_grid(5.0, 256, 0.03)
    st = smooth_random_state(g, rng)
    back = mass_apply(p, mass_inverse_apply(p, st))
    np.testing.assert_allclose(back.flat(), st.flat(), rtol=1e-15)
    # v-scaling value for the reference parameters
    assert abs(0.03**2 / 4.21 - 2.1378e-4) < 1e-7


def test_jacobian_matches_directional_differences(ref_params, coarse_grid, rng):
    p, g = ref_params, coarse_grid
    z = asymptotic_front(p, g)
    J = jacobian(p, z, g)
    h = smooth_random_state(g, rng)
    hflat = h.flat()
    scale = 1.0
    errs = []
    for delta in (1e-5, 5e-6, 2.5e-6):
        zp = state_from_flat(z.flat() + delta * hflat)
        zm = state_from_flat(z.flat() - delta * hflat)
        fd = (residual(p, zp, g).flat() - residual(p, zm, g).flat()) / (2 * delta)
        errs.append(np.linalg.norm(fd - J @ hflat) / np.linalg.norm(J @ hflat))
    # central differences: already at rounding level for smooth states
    assert errs[-1] < 1e-6
    # one-sided differences converge with observed order >= 1 on halving
    fwd_errs = []
    for delta in (1e-3 * scale, 5e-4 * scale):
        zp = state_from_flat(z.flat() + delta * hflat)
        fd = (residual(p, zp, g).flat() - residual(p, z, g).flat()) / delta
        fwd_errs.append(np.linalg.norm(fd - J @ hflat))
    assert fwd_errs[1] < fwd_errs[0] / 1.7


def test_jacobian_blocks_at_zero_state():
    p = Params(epsilon=0.05, alpha=0.3, beta=-0.2)
    g = make_grid(5.0, 200, 0.05)
    n = g.n
    J = jacobian(p, zero_state(g), g).tocsr()
    D2 = diff2_matrix(g)
    # u-block diagonal carries +1 from d(U - U^3)/dU at U = 0
    uu_diag = J[:n, :n].diagonal() - p.epsilon**2 * D2.diagonal()
    np.testing.assert_allclose(uu_diag, 1.0, atol=1e-14)
    # coupling block dF_u/dV = -eps * alpha * I
    uv = J[:n, n : 2 * n].toarray()
    np.testing.assert_allclose(uv, -p.epsilon * p.alpha * np.eye(n), atol=1e-15)


def test_reflection_equivariance(rng):
    p = Params(epsilon=0.04, alpha=0.35, beta=-0.18, gamma=0.0)
    g = make_grid(6.0, 321, 0.04)
    z = smooth_random_state(g, rng)
    lhs = residual(p, reflect(z), g).flat()
    rhs = reflect(residual(p, z, g)).flat()
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_reflection_is_involution(rng):
    g = make_grid(6.0, 320, 0.04)
    z = smooth_random_state(g, rng)
    np.testing.assert_array_equal(reflect(reflect(z)).flat(), z.flat())


def test_background_root_near_one(ref_params):
    root = background_root(ref_params)
    assert np.max(np.abs(root - 1.0)) < ref_params.epsilon
    # verify it actually satisfies the algebraic system
    u, v, w = root
    p = ref_params
    assert abs(u - u**3 - p.epsilon * (p.alpha * v + p.beta * w)) < 1e-12
    assert abs(u - v) < 1e-12 and abs(u - w) < 1e-12


def test_asymptotic_front_mass_scaled_residual_is_order_eps(ref_params):
    """The leading-order front leaves an O(eps) dynamical residual."""
    p = ref_params
    bound = 2.0 * (abs(p.alpha) + abs(p.beta)) * p.epsilon
    maxima = []
    for n in (2049, 4097):
        g = make_grid(10.0, n, p.epsilon)
        F = mass_inverse_apply(p, residual(p, asymptotic_front(p, g), g))
        maxima.append(max(np.abs(F.u).max(), np.abs(F.v).max(), np.abs(F.w).max()))
        assert maxima[-1] <= bound
    # grid-converged: refinement no longer moves the plateau much
    assert abs(maxima[1] - maxima[0]) < 0.5 * maxima[0]
