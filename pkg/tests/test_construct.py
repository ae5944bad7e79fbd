import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from potbal.balayage import boundary_density
from potbal.charge import ChargeDistribution, Region, mirror_iR, restrict, upper_density
from potbal.construct import (
    alpha_balance,
    balance,
    complete_full,
    complete_iR,
    complete_R,
    dyadic_compensator,
    uniformize_rh,
    uniformize_strip,
    verification_radius,
)
from potbal.errors import ConditionMuRhFailed, OriginInSupport, SupportViolation
from potbal.fixtures import integers, ray
from potbal.logmeasure import LindelofKind, lindelof_report
from potbal.verdict import Verdict

A = ChargeDistribution.from_atoms


def right_steps(nu):
    """Sorted right-half-plane radii and the running sum of m Re(1/z) up to each, by direct loop."""
    # radii as numpy computes them, so that atoms sharing a circle share a step
    pts = sorted((float(np.abs(z)), m * (1 / z).real) for z, m in zip(nu.positions, nu.masses) if z.real > 0)
    radii, vals, acc = [], [0.0], 0.0
    for rho, w in pts:
        acc += w
        if radii and radii[-1] == rho:
            vals[-1] = acc
        else:
            radii.append(rho)
            vals.append(acc)
    return radii, vals


def forward_sup(vals):
    return max([0.0] + [vals[j] - vals[i] for i in range(len(vals)) for j in range(i + 1, len(vals))])


def abs_sup(vals):
    return max([0.0] + [abs(vals[j] - vals[i]) for i in range(len(vals)) for j in range(i + 1, len(vals))])


signed_atoms = st.lists(
    st.tuples(
        st.builds(complex, st.floats(0.05, 50), st.floats(-50, 50)).map(lambda z: complex(round(z.real, 2) or 0.01, round(z.imag, 2))),
        st.floats(-3, 3).filter(lambda m: abs(m) > 1e-2),
    ),
    min_size=1,
    max_size=14,
).map(A)


class TestAlpha:
    def test_two_atoms(self):
        eta = A([(1, 1.0), (2, -1.0)])
        res = balance(eta)
        assert alpha_balance(eta) == A([(2, 1.0)])
        assert res.sup_eta == pytest.approx(1.0)
        assert res.sup_combined <= 2 * res.sup_eta

    def test_exact_cancellation(self):
        eta = A([(1, -1.0)])
        alpha = alpha_balance(eta)
        assert alpha == A([(1, 1.0)])
        assert (eta + alpha).is_empty()

    def test_positive_input_needs_nothing(self):
        assert alpha_balance(integers(100) + ray(1 + 1j, 20)).is_empty()

    def test_origin(self):
        with pytest.raises(OriginInSupport):
            alpha_balance(A([(0, 1.0)]))

    @given(signed_atoms)
    def test_bound_against_brute_force(self, eta):
        alpha = alpha_balance(eta)
        assert alpha.is_mass
        assert np.all(alpha.positions.imag == 0) and np.all(alpha.positions.real > 0)
        _, before = right_steps(eta)
        _, after = right_steps(eta + alpha)
        S = forward_sup(before)
        scale = 1 + sum(abs(b - a) for a, b in zip(before, before[1:]))
        assert abs_sup(after) <= 2 * S + 1e-12 * scale


class TestUniformizeRH:
    def test_equal_inputs(self):
        nu = ray(2 + 1j, 50)
        res = uniformize_rh(nu, nu, 0.3)
        assert res.alpha.is_empty() and res.c == 0.0 and res.residual_sup == 0.0

    def test_single_atom(self):
        res = uniformize_rh(A([(1, 1.0)]), ChargeDistribution(), 0.5)
        assert res.residual_sup <= 1e-9
        # the genus-one sweep of a unit atom at 1 has density 1/(pi(1+y^2)) - 1/pi <= 0
        assert res.c == 0.0 and res.alpha.is_empty()
        y = np.linspace(-50, 50, 101)
        assert boundary_density(res.beta_plus, 0.0, y) == pytest.approx((1 - 1 / (1 + y * y)) / math.pi, abs=1e-15)

    def test_two_atoms(self):
        res = uniformize_rh(A([(1, 1.0)]), A([(2, 1.0)]), 0.5)
        assert res.residual_sup <= 1e-9
        assert res.beta_min >= -1e-12 and res.beta_certified

    def test_support(self):
        with pytest.raises(SupportViolation):
            uniformize_rh(A([(1j + 0.1, 1.0)]), ChargeDistribution(), 0.5)
        with pytest.raises(ValueError):
            uniformize_rh(A([(1, 1.0)]), ChargeDistribution(), 1.0)


class TestUniformizeStrip:
    def test_equal_inputs(self):
        nu = ray(3 + 1j, 40) + ray(3 - 1j, 40) + ray(-3 + 1j, 40) + ray(-3 - 1j, 40)
        res = uniformize_strip(nu, nu, 0.3, 1.0)
        assert res.c == 0.0 and res.alpha.is_empty() and res.residual_sup <= 1e-12

    def test_single_atom(self):
        res = uniformize_strip(A([(3, 1.0)]), ChargeDistribution(), 0.5, 1.0)
        assert res.residual_sup <= 1e-8
        assert set(res.beta_plus.lines()) == {1.0}
        assert set(res.beta_minus.lines()) == {-1.0}

    def test_mirror_symmetry(self):
        nu = A([(3 + 1j, 1.0), (5 - 2j, 2.0), (-4 + 1j, 1.0)])
        mu = A([(6 + 1j, 1.0), (-7, 1.0)])
        a = uniformize_strip(nu, mu, 0.3, 1.5)
        b = uniformize_strip(mirror_iR(nu), mirror_iR(mu), 0.3, 1.5)
        assert b.alpha.allclose(mirror_iR(a.alpha), atol=1e-12)
        assert b.c == pytest.approx(a.c, rel=1e-9)
        y = np.linspace(-30, 30, 61)
        assert boundary_density(b.beta_minus, -1.5, y) == pytest.approx(boundary_density(a.beta_plus, 1.5, y), abs=1e-9)

    def test_inside_strip_rejected(self):
        with pytest.raises(SupportViolation):
            uniformize_strip(A([(0.5, 1.0)]), ChargeDistribution(), 0.3, 1.0)


class TestCompleteR:
    def test_symmetric(self):
        mu = integers(1024)
        gamma = complete_R(mu)
        rep = lindelof_report(mu + gamma, LindelofKind.R, 1024)
        assert rep.sup_abs <= 1.0
        assert gamma.total_variation() <= 1.0

    def test_positive_ray(self):
        mu = ray(1, 2**12)
        gamma = complete_R(mu)
        assert np.all(gamma.positions.real < 0) and np.all(gamma.positions.imag == 0)
        assert gamma.is_mass
        R = verification_radius(mu)
        assert lindelof_report(mu + gamma, LindelofKind.R, R).verdict is Verdict.BOUNDED

    def test_empty(self):
        assert complete_R(ChargeDistribution()).is_empty()

    def test_left_heavy(self):
        with pytest.raises(ConditionMuRhFailed):
            complete_R(ray(-1, 2**12))

    def test_density_stays_finite(self):
        mu = ray(1, 2**12) + ray(2 + 1j, 2**10)
        gamma = complete_R(mu)
        d1 = upper_density(mu + gamma, 1, 2.0**11)
        d2 = upper_density(mu + gamma, 1, 2.0**12)
        assert d1 <= upper_density(mu, 1, 2.0**11) + 1.5
        assert d2 <= d1 * 1.2 + 0.1


class TestCompleteIR:
    def test_empty(self):
        assert complete_iR(ChargeDistribution()).is_empty()

    def test_conjugate_pair(self):
        beta = complete_iR(A([(2 + 1j, 1.0), (2 - 1j, 1.0)]))
        assert np.all(beta.positions.real == 0)

    def test_one_sided_imaginary_ray(self):
        nu = ray(1j, 2**10)
        beta = complete_iR(nu)
        assert beta.n_atoms > 0 and beta.is_mass
        assert np.all(beta.positions.real == 0)
        assert lindelof_report(nu + beta, LindelofKind.IR, verification_radius(nu)).verdict is Verdict.BOUNDED

    def test_origin(self):
        with pytest.raises(OriginInSupport):
            complete_iR(A([(0, 1.0)]))

    def test_compensator_masses(self):
        rot = A([(-3, 1.0), (-5, 2.0)])
        comp = dyadic_compensator(rot)
        # shells (2,4] and (4,8] carry left masses 1/3 and 2/5
        assert comp.allclose(A([(4, 4 / 3), (8, 8 * 2 / 5)]), atol=1e-14)


class TestCompleteFull:
    def test_empty(self):
        assert complete_full(ChargeDistribution()).is_empty()

    def test_positive_ray(self):
        mu = ray(1, 2**10)
        delta = complete_full(mu)
        added = delta - mu
        assert added.is_mass
        assert np.all((added.positions.real < 0) & (added.positions.imag == 0) | (added.positions.real == 0))
        rh = Region.right_half()
        assert restrict(delta, rh) == restrict(mu, rh)

    @settings(max_examples=8)
    @given(st.integers(6, 11), st.sampled_from([1, 1 + 1j, 2 - 1j, 3 + 0.5j]))
    def test_own_postconditions(self, k, w):
        mu = ray(w, 2**k) + integers(2**k)
        delta = complete_full(mu)
        R = verification_radius(mu)
        assert lindelof_report(delta, LindelofKind.FULL, R).verdict is Verdict.BOUNDED
