import numpy as np
import pytest

from bec_entanglement.pipeline.dynamics import CondensateDrive, propagate
from bec_entanglement.pipeline.fock import expectation, random_state
from bec_entanglement.pipeline.projection import (
    JointState,
    ProbeField,
    conditional_state,
)
from bec_entanglement.pipeline.witness import (
    duan_simon_xi,
    negativity,
    pt_variance_oracle,
    su11_inequality,
    su11_moments,
    witness_report,
)


def _coincidence_states(rng, bs, count):
    for _ in range(count):
        tau = rng.uniform(0.05, 10.0)
        coeffs_a = propagate(CondensateDrive(rng.uniform(0.0, 10.0)), tau)
        coeffs_b = propagate(CondensateDrive(rng.uniform(0.1, 10.0)), tau)
        probe_a = ProbeField.from_photon_number(
            rng.uniform(1.0, 20.0), rng.uniform(0, 6.3)
        )
        probe_b = ProbeField.from_photon_number(
            rng.uniform(1.0, 20.0), rng.uniform(0, 6.3)
        )
        yield conditional_state(coeffs_a, coeffs_b, probe_a, probe_b, bs)


def test_vacuum_moments(vacuum_state):
    assert su11_moments(vacuum_state) == pytest.approx((0.0, 1.0, 0.0, 0.0))


def test_bell_moments(bell_state):
    n2, n_tot, m_term, cross = su11_moments(bell_state)
    assert n2 == pytest.approx(0.0, abs=1e-15)
    assert n_tot == pytest.approx(2.0)
    assert cross == pytest.approx(0.5)
    assert m_term == pytest.approx(-1.0)


def test_vacuum_saturates_inequality(vacuum_state):
    report = su11_inequality(vacuum_state)
    assert report.lhs == pytest.approx(1.0)
    assert report.rhs == pytest.approx(1.0)
    assert not report.violated


def test_bell_state_violates_inequality(bell_state):
    report = su11_inequality(bell_state)
    assert report.var1 == pytest.approx(1.0)
    assert report.var2 == pytest.approx(2.0)
    assert report.lhs == pytest.approx(2.0)
    assert report.rhs == pytest.approx(4.0)
    assert report.violated
    assert report.reduced_form == pytest.approx(report.lhs_minus_rhs)


def test_pt_variance_oracle_reference_states(vacuum_state, bell_state):
    assert pt_variance_oracle(bell_state) == pytest.approx((1.0, 2.0), abs=1e-12)
    assert pt_variance_oracle(vacuum_state) == pytest.approx((1.0, 1.0), abs=1e-12)
    with pytest.raises(ValueError, match="headroom"):
        pt_variance_oracle(vacuum_state, headroom=1)


def test_naive_untransposed_variance_differs(bell_state):
    # Var(A†B† + AB) under the untransposed state, normal ordered by hand
    second = (
        2 * expectation(bell_state, (2, 0, 2, 0)).real
        + 2 * expectation(bell_state, (1, 1, 1, 1)).real
        + expectation(bell_state, (1, 1, 0, 0)).real
        + expectation(bell_state, (0, 0, 1, 1)).real
        + 1.0
    )
    mean = 2 * expectation(bell_state, (1, 0, 1, 0)).real
    assert second - mean**2 == pytest.approx(2.0)
    assert su11_inequality(bell_state).var1 == pytest.approx(1.0)


def test_closed_form_matches_transposed_state(rng):
    for _ in range(100):
        state = random_state(rng, n_max=2)
        report = su11_inequality(state)
        var1, var2 = pt_variance_oracle(state)
        assert report.var1 == pytest.approx(var1, abs=1e-10)
        assert report.var2 == pytest.approx(var2, abs=1e-10)
        assert report.var1 >= -1e-10
        assert report.var2 >= -1e-10


def test_separable_states_never_violate(product_state):
    for _ in range(50):
        state = product_state()
        report = su11_inequality(state)
        assert report.lhs >= report.rhs - 1e-10
        assert not report.violated
        assert negativity(state) >= -1e-10


def test_coincidence_states_have_no_pair_number_correlation(rng, balanced_bs):
    for state in _coincidence_states(rng, balanced_bs, 30):
        report = witness_report(state)
        assert abs(report.n2) <= 1e-12
        assert report.var1 >= 0
        assert report.n_tot >= 1
        assert report.reduced_form is not None
        # with N₂ = 0 the inequality reduces to -M² - 4(N + M)|⟨A†B⟩|² < 0
        scale = max(1.0, report.rhs)
        assert report.reduced_form == pytest.approx(
            report.lhs_minus_rhs, abs=1e-10 * scale
        )
        if report.violated:
            assert report.min_pt_eig < 0


def test_violation_implies_negative_partial_transpose(rng):
    for _ in range(50):
        state = random_state(rng, n_max=2, support_bound=2)
        report = witness_report(state)
        if report.violated:
            assert report.min_pt_eig < 0


def test_negativity_reference_states(vacuum_state, bell_state, product_state):
    assert negativity(bell_state) == pytest.approx(-0.5, abs=1e-10)
    assert abs(negativity(vacuum_state)) <= 1e-10
    assert abs(negativity(product_state())) <= 1e-10


def test_duan_simon_reference_states(vacuum_state, bell_state):
    assert duan_simon_xi(vacuum_state) == pytest.approx(1.0)
    assert duan_simon_xi(bell_state) == pytest.approx(2.0)


def test_duan_simon_two_mode_squeezed_state():
    # truncated Σ λⁿ|n,n⟩ with λ = -0.2 squeezes X_A + X_B and P_A - P_B
    lam = -0.2
    state = JointState.from_amplitudes(np.diag([1.0, lam, lam**2, lam**3]))
    assert duan_simon_xi(state) < 1.0


def test_witness_report_fills_every_field(balanced_bs):
    coeffs = propagate(CondensateDrive(7.7), 3.0)
    probe = ProbeField.from_photon_number(10.0)
    state = conditional_state(coeffs, coeffs, probe, probe, balanced_bs)
    report = witness_report(state)
    assert np.isfinite(report.min_pt_eig)
    assert np.isfinite(report.xi_xp)
    assert report.min_pt_eig < 0
    assert report.violated
