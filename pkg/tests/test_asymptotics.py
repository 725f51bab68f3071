import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontlab import (
    Params,
    asymptotic_front,
    center_params,
    closed_eigenfunctions,
    evans_eval,
    evans_roots,
    evans_taylor_aij,
    existence_gamma,
    kappas,
    make_grid,
    organizing_center,
    taylor_existence,
)
from frontlab.asymptotics import SQRT2, zero_root_multiplicity
from frontlab.errors import (
    DegenerateParametersError,
    DomainError,
    PreconditionError,
    UnsupportedConfigurationError,
)

REF = dict(tau_hat=4.21, theta_hat=10.0, diff_D=2.2)


# -- kappas and the organizing center -----------------------------------------

def test_kappas_alpha_beta_zero():
    k = kappas(Params(epsilon=0.03, alpha=0.0, beta=0.0, **REF))
    assert abs(k.kappa1 + 2 * SQRT2 / 3) < 1e-15
    assert k.kappa2 == 0.0 and k.kappa3 == 0.0
    assert abs(k.kappa1 + 0.9428) < 1e-4


def test_organizing_center_reference_values(ref_params):
    a, b = organizing_center(**REF)
    assert abs(a - 0.3868) < 5e-4
    assert abs(b + 0.1508) < 5e-4
    k = kappas(ref_params)
    assert abs(k.kappa1) < 1e-14 and abs(k.kappa2) < 1e-13
    # kappa3 cross-checks g30 via the corollary (see normal-form tests)
    assert abs(k.kappa3 - 14.70) < 0.01


def test_organizing_center_degenerate():
    with pytest.raises(DegenerateParametersError):
        organizing_center(1.0, 1.0, 2.0)


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(-0.5, 0.5),
    b=st.floats(-0.5, 0.5),
)
def test_kappas_linear_in_alpha_beta(a, b):
    def k(al, be):
        trip = kappas(Params(epsilon=0.03, alpha=al, beta=be, **REF))
        return np.array([trip.kappa1, trip.kappa2, trip.kappa3])

    base = k(0.0, 0.0)
    lhs = k(2 * a, 2 * b) - base
    rhs = 2 * (k(a, b) - base)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


# -- asymptotic front ----------------------------------------------------------

def test_front_odd_and_tails(ref_params):
    g = make_grid(10.0, 2049, ref_params.epsilon)
    st_ = asymptotic_front(ref_params, g)
    i0 = np.argmin(np.abs(g.nodes))
    assert g.nodes[i0] == 0.0
    assert st_.u[i0] == 0.0 and st_.v[i0] == 0.0 and st_.w[i0] == 0.0
    assert abs(st_.v[-1] - 1.0) < 2 * np.exp(-10.0) + 1e-12
    assert abs(st_.v[0] + 1.0) < 2 * np.exp(-10.0) + 1e-12
    assert abs(st_.w[-1] - 1.0) < 2 * np.exp(-10.0 / ref_params.diff_D)
    # odd profile overall
    np.testing.assert_allclose(st_.u, -st_.u[::-1], atol=1e-15)
    np.testing.assert_allclose(st_.v, -st_.v[::-1], atol=1e-15)


# -- existence condition -------------------------------------------------------

def test_existence_gamma_at_zero_velocity():
    p = Params(epsilon=0.03, alpha=0.2, beta=0.1, gamma=0.37, **REF)
    assert existence_gamma(0.0, p) == pytest.approx(0.37, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(c=st.floats(-2.0, 2.0))
def test_existence_odd_for_gamma_zero(c):
    p = Params(epsilon=0.03, alpha=0.31, beta=-0.12, gamma=0.0, **REF)
    assert existence_gamma(-c, p) == pytest.approx(-existence_gamma(c, p), abs=1e-14)


def test_existence_at_center_small_velocity(ref_params):
    # frozen from direct evaluation; the cubic term -kappa3 c^3/16 dominates
    val = existence_gamma(0.1, ref_params)
    assert val == pytest.approx(-8.936296e-4, abs=2e-9)
    cubic = -kappas(ref_params).kappa3 * 0.1**3 / 16.0
    assert abs(val - cubic) < 0.04 * abs(cubic)


def test_taylor_existence_matches_polynomial_fit(ref_params):
    """Degree-5 odd fit of Gamma on |c| <= 0.05 recovers the coefficients."""
    p = ref_params
    t = taylor_existence(p)
    cs = np.linspace(-0.05, 0.05, 41)
    vals = np.array([existence_gamma(c, p) for c in cs])
    A = np.column_stack([cs, cs**3, cs**5, cs**7])
    coef, *_ = np.linalg.lstsq(A, vals, rcond=None)
    # c1 vanishes at the center: compare absolutely at the c-scale of the fit
    assert abs(coef[0] - t.c1) < 1e-4 * max(abs(t.c3) * 0.05**2, 1e-12) + 1e-12
    assert abs(coef[1] - t.c3) < 1e-4 * abs(t.c3)
    assert abs(coef[2] - t.c5) < 1e-3 * abs(t.c5)


def test_taylor_quintic_at_k1_k3_zero():
    tau, theta, D = REF["tau_hat"], REF["theta_hat"], REF["diff_D"]
    den = 3.0 * tau * (D**2 * tau**2 - theta**2)
    alpha = -2 * SQRT2 * theta**2 / den
    beta = 2 * SQRT2 * D**3 * tau**2 / (3.0 * theta * (D**2 * tau**2 - theta**2))
    p = Params(epsilon=0.03, alpha=alpha, beta=beta, **REF)
    k = kappas(p)
    assert abs(k.kappa1) < 1e-14 and abs(k.kappa3) < 1e-12
    t = taylor_existence(p)
    assert t.c5 == pytest.approx(-(SQRT2 / 128) * tau**2 * (theta / D) ** 2, rel=1e-12)


def test_taylor_existence_alpha_beta_zero():
    t = taylor_existence(Params(epsilon=0.03, alpha=0.0, beta=0.0, **REF))
    assert t.c1 == pytest.approx(-SQRT2 / 3, rel=1e-15)
    assert t.c3 == 0.0 and t.c5 == 0.0


def test_taylor_existence_rejects_gamma():
    with pytest.raises(UnsupportedConfigurationError):
        taylor_existence(Params(epsilon=0.03, alpha=0.1, beta=0.1, gamma=0.01, **REF))


def test_nontrivial_root_scales_with_kappa1(ref_params):
    """For small kappa1*kappa3 > 0 the nontrivial root obeys c^2 ~ 8 k1/k3."""
    p0 = ref_params
    for dk1 in (1e-4, 1e-5):
        # bump alpha to shift kappa1 by dk1 while kappa3 stays ~ fixed
        p = p0.with_coupling(p0.alpha + dk1 / p0.tau_hat, p0.beta)
        k = kappas(p)
        t = taylor_existence(p)
        roots = np.roots([t.c5, 0.0, t.c3, 0.0, t.c1])
        real_pos = sorted(
            r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0
        )
        assert real_pos, "expected a nontrivial root"
        c2 = real_pos[0] ** 2
        assert c2 == pytest.approx(8 * k.kappa1 / k.kappa3, rel=0.05)


# -- Evans function ------------------------------------------------------------

def stationary_evans_oracle(lam, p):
    """Stationary-front Evans formula, written independently for the test."""
    return (
        -(SQRT2 / 3.0) * lam
        + p.alpha * (1.0 - 1.0 / np.sqrt(p.tau_hat * lam + 1.0))
        + (p.beta / p.diff_D) * (1.0 - 1.0 / np.sqrt(p.theta_hat * lam + 1.0))
    )


def test_evans_translation_root_and_evenness(ref_params):
    p = ref_params
    for c in (0.0, 0.11, -0.37, 1.5):
        assert evans_eval(0.0, c, p) == 0.0
    for lam in (0.05 + 0.02j, -0.04 + 0.09j, 0.2):
        assert evans_eval(lam, 0.23, p) == pytest.approx(
            evans_eval(lam, -0.23, p), rel=1e-14
        )


def test_evans_at_c0_is_half_stationary_formula(ref_params):
    rng = np.random.default_rng(7)
    p = ref_params
    for _ in range(100):
        lam = complex(rng.uniform(-0.05, 0.5), rng.uniform(-0.5, 0.5))
        full = evans_eval(lam, 0.0, p)
        assert full == pytest.approx(0.5 * stationary_evans_oracle(lam, p), rel=1e-12)


def test_evans_derivatives_are_kappa_combinations(ref_params):
    p = Params(epsilon=0.03, alpha=0.31, beta=-0.17, **REF)
    k = kappas(p)
    h = 1e-5
    d1 = (evans_eval(h, 0.0, p) - evans_eval(-h, 0.0, p)) / (2 * h)
    assert d1.real == pytest.approx(k.kappa1 / 4.0, rel=1e-7, abs=1e-12)
    d2 = (
        evans_eval(h, 0.0, p) - 2 * evans_eval(0.0, 0.0, p) + evans_eval(-h, 0.0, p)
    ) / h**2
    assert d2.real == pytest.approx(-(3.0 / 8.0) * k.kappa2, rel=1e-5, abs=1e-10)


def test_evans_branch_cut_raises(ref_params):
    with pytest.raises(DomainError):
        evans_eval(-0.5, 0.0, ref_params)  # tau*lam + 1 < 0


def cauchy_taylor(f, order, radius=0.05, n=256):
    """Taylor coefficients of an analytic function by circle quadrature.

    The equally weighted trapezoid rule on a circle is the spectral limit of
    central differencing and is exact to rounding for these radii.
    """
    th = 2 * np.pi * np.arange(n) / n
    z = radius * np.exp(1j * th)
    vals = np.array([f(zz) for zz in z])
    coeffs = []
    for k in range(order + 1):
        coeffs.append(np.mean(vals * np.exp(-1j * k * th)) / radius**k)
    return np.array(coeffs)


def test_aij_table_against_numerical_differentiation(ref_params):
    p = ref_params
    a = evans_taylor_aij(p)

    def a_i_of_c(c):
        # E(lam, c) = D(lam, c)/lam is analytic near 0 (also for complex c)
        return cauchy_taylor(lambda lam: evans_eval(lam, c, p) / lam, 3)

    # second circle quadrature in c for the c^0 and c^2 coefficients
    rc, mc = 0.15, 64
    phis = 2 * np.pi * np.arange(mc) / mc
    rows = np.array([a_i_of_c(rc * np.exp(1j * ph)) for ph in phis])
    a0 = np.array([np.mean(rows[:, i]) for i in range(4)])
    a2 = np.array(
        [np.mean(rows[:, i] * np.exp(-2j * phis)) / rc**2 for i in range(4)]
    )

    scale = abs(a.a02)
    assert abs(a0[0].real - a.a00) < 1e-6 * scale
    assert abs(a0[1].real - a.a01) < 1e-6 * scale
    assert a0[2].real == pytest.approx(a.a02, rel=1e-6)
    assert a0[3].real == pytest.approx(a.a03, rel=1e-6)
    assert a2[0].real == pytest.approx(a.a20, rel=1e-6)
    assert a2[1].real == pytest.approx(a.a21, rel=1e-6)


def test_reference_aij_values(ref_params):
    a = evans_taylor_aij(ref_params)
    assert a.a02 == pytest.approx(-(5 * SQRT2 / 48) * 4.21 * 10.0, rel=1e-12)
    assert a.a02 == pytest.approx(-6.202, abs=5e-4)
    assert a.a20 == pytest.approx(-(3 / 32) * kappas(ref_params).kappa3, rel=1e-12)
    assert a.a20 == pytest.approx(-1.378, abs=5e-4)


# -- Evans roots ---------------------------------------------------------------

def test_roots_alpha_beta_zero():
    p = Params(epsilon=0.03, alpha=0.0, beta=0.0, **REF)
    assert evans_roots(p, 0.0) == [0j]
    assert zero_root_multiplicity(p) == 1


def test_roots_triple_at_center(ref_params):
    roots = evans_roots(ref_params, 0.0)
    assert roots == [0j, 0j, 0j]


def test_roots_hopf_side_complex_pair(ref_params):
    from frontlab import g_to_params, unfolding_map

    um = unfolding_map(**REF)
    p = ref_params.with_coupling(*g_to_params(-0.005, 0.01, um))
    roots = [z for z in evans_roots(p, 0.0) if abs(z) > 1e-8]
    assert len(roots) == 2
    assert roots[0] == pytest.approx(np.conj(roots[1]), rel=1e-8)
    assert all(z.real > 0 for z in roots)
    assert all(abs(z.imag) > 0.05 for z in roots)


# -- closed-form eigenfunctions -------------------------------------------------

def test_eigenfunction_slow_amplitudes(ref_params):
    ef = closed_eigenfunctions(ref_params, 0.0)
    u, v, w = ef.phi(0.0)
    assert v == pytest.approx(1.0)           # h_v(0) = 1
    assert w == pytest.approx(1.0 / 2.2)     # h_w(0) = 1/D
    assert u == pytest.approx(SQRT2 / (2 * ref_params.epsilon))


def test_generalized_eigenfunction_values(ref_params):
    ef = closed_eigenfunctions(ref_params, 0.0)
    u, v, w = ef.psi(0.0)
    assert v == pytest.approx(-4.21 / 2)         # -tau/2 = -2.105
    assert v == pytest.approx(-2.105, abs=1e-12)
    assert w == pytest.approx(-10.0 / (2 * 2.2))
    assert u == pytest.approx(ref_params.epsilon / (3 * SQRT2))
    ut, vt, wt = ef.psi_tilde(0.0)
    assert vt == pytest.approx(3 * 4.21**2 / 8)
    assert wt == pytest.approx(3 * 10.0**2 / (8 * 2.2))
    # slow side value at x = 1: (tau^2/8)(1 + 3 + 3) e^{-1}
    _, v1, _ = ef.psi_tilde(1.0)
    assert v1 == pytest.approx(5.705290502858416, rel=1e-12)


def test_generalized_eigenfunctions_even(ref_params):
    ef = closed_eigenfunctions(ref_params, 0.0)
    for x in (0.3, 0.9, 1.7, 3.2, 6.4):
        np.testing.assert_allclose(ef.psi(x), ef.psi(-x), rtol=1e-13)
        np.testing.assert_allclose(ef.psi_tilde(x), ef.psi_tilde(-x), rtol=1e-13)
        np.testing.assert_allclose(ef.phi(x), ef.phi(-x), rtol=1e-13)


def test_generalized_eigenfunction_preconditions():
    p = Params(epsilon=0.03, alpha=0.1, beta=0.1, **REF)  # kappa1 != 0
    ef = closed_eigenfunctions(p, 0.0)
    with pytest.raises(PreconditionError):
        ef.psi(1.0)
    with pytest.raises(PreconditionError):
        ef.psi_tilde(1.0)


def test_region_tags(ref_params):
    ef = closed_eigenfunctions(ref_params, 0.0)
    lim = np.sqrt(ref_params.epsilon)
    assert ef.region(-2 * lim) == "slow-"
    assert ef.region(0.0) == "fast"
    assert ef.region(2 * lim) == "slow+"
