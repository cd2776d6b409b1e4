"""
Unit tests for the closed-form stationary solutions and optimal couplings.
"""

import math

import numpy as np
import pytest

from pairsim import analytic
from pairsim.analytic import (
    C_LIMIT,
    F_LIMIT,
    c_max_for_ratio,
    cmax_curve,
    closed_form,
    closed_form_optimum,
    default_mu1_bounds,
    mixing_phase,
    strong_optimal,
    strong_optimal_omega,
    strong_stationary,
    target_phase,
    target_state,
    weak_optimal,
    weak_stationary,
    weak_to_strong_bound,
    wrap_phase,
)
from pairsim.exceptions import FormulaDomainError, InvalidSpecError, NoSolutionError
from pairsim.measures import concurrence, fidelity_with
from pairsim.model import DrivenPhase, ModelSpec


# ---------- FIXTURES ----------

@pytest.fixture
def peak():
    """Strong-regime optimum for Omega = 100, G1 = 1, no pure dephasing."""
    return strong_optimal(100.0, 1.0, 0.0)


# ---------- CONSTANTS AND PHASES ----------

def test_limits():
    assert C_LIMIT == pytest.approx(0.30901699437494745)
    assert F_LIMIT == pytest.approx(0.6545084971874737)
    assert c_max_for_ratio(2.0) == pytest.approx(C_LIMIT)


def test_wrap_phase_range():
    assert wrap_phase(math.pi) == pytest.approx(math.pi)
    assert wrap_phase(-math.pi) == pytest.approx(math.pi)
    assert wrap_phase(3 * math.pi / 2) == pytest.approx(-math.pi / 2)


def test_mixing_and_target_phase():
    """phi = atan2(-8 G2, Omega) and psi = pi - th1 - phi."""
    assert mixing_phase(0.0, 0.5) == pytest.approx(-math.pi / 2)
    phi = mixing_phase(100.0, 0.5)
    assert phi == pytest.approx(math.atan(-4.0 / 100.0))
    assert target_phase(0.2, phi) == pytest.approx(wrap_phase(math.pi - 0.2 - phi))


# ---------- STRONG REGIME ----------

def test_peak_values(peak):
    assert peak.C_max == pytest.approx(C_LIMIT, abs=1e-12)
    assert peak.F_max == pytest.approx(F_LIMIT, abs=1e-12)
    sol = strong_stationary(100.0, peak.mu1_opt, 0.0, 1.0, 0.0)
    assert sol.C == pytest.approx(C_LIMIT, abs=1e-12)
    assert sol.F == pytest.approx(F_LIMIT, abs=1e-12)


def test_optimum_is_a_maximum(peak):
    at = strong_stationary(100.0, peak.mu1_opt, 0.0, 1.0, 0.0).C
    for factor in (0.9, 1.1):
        assert strong_stationary(100.0, factor * peak.mu1_opt, 0.0, 1.0, 0.0).C < at


def test_zero_coupling_gives_ground_state():
    sol = strong_stationary(100.0, 0.0, 0.0, 1.0, 0.2)
    assert sol.C == 0.0
    assert sol.F == 0.5
    assert sol.rho_inf.element("00", "00") == pytest.approx(1.0)


@pytest.mark.parametrize("mu1", [0.5, 7.7, 30.0, 200.0])
def test_reported_values_match_the_state(mu1):
    """C and F agree with Wootters and the overlap of the closed-form state."""
    sol = strong_stationary(100.0, mu1, 0.4, 1.0, 0.1)
    assert concurrence(sol.rho_inf) == pytest.approx(sol.C, abs=1e-10)
    assert fidelity_with(sol.rho_inf, sol.target) == pytest.approx(sol.F, abs=1e-12)
    assert sol.C == pytest.approx(sol.p - 2 * sol.beta, abs=1e-12) or sol.C == 0.0


def test_branch_flag_switches_with_coupling():
    assert strong_stationary(100.0, 1.0, 0.0, 1.0, 0.0).branch_valid
    assert not strong_stationary(100.0, 200.0, 0.0, 1.0, 0.0).branch_valid


def test_gamma1_must_be_positive():
    with pytest.raises(InvalidSpecError):
        strong_stationary(100.0, 1.0, 0.0, 0.0, 0.0)
    with pytest.raises(InvalidSpecError):
        strong_optimal(100.0, -1.0, 0.0)


def test_optimal_omega_inverts_optimal_coupling(peak):
    assert strong_optimal_omega(peak.mu1_opt, 1.0, 0.0) == pytest.approx(100.0, rel=1e-12)


def test_optimal_omega_below_floor():
    with pytest.raises(NoSolutionError):
        strong_optimal_omega(1e-3, 1.0, 0.0)


def test_weak_to_strong_bound_is_below_the_optimum():
    for gamma_phi in (0.0, 0.5, 3.0):
        bound = weak_to_strong_bound(100.0, 1.0, gamma_phi)
        assert bound <= strong_optimal(100.0, 1.0, gamma_phi).mu1_opt


# ---------- C_MAX CURVE ----------

def test_cmax_curve_is_monotone_with_known_endpoint():
    rows = cmax_curve(np.linspace(0.01, 2.0, 200))
    values = [c for _, c, _ in rows]
    assert all(b >= a for a, b in zip(values, values[1:]))
    ratio, c_max, f_max = rows[-1]
    assert ratio == 2.0
    assert c_max == pytest.approx(C_LIMIT, abs=1e-9)
    assert f_max == pytest.approx(F_LIMIT, abs=1e-9)


def test_cmax_curve_domain():
    with pytest.raises(FormulaDomainError):
        cmax_curve([2.5])
    with pytest.raises(InvalidSpecError):
        cmax_curve([0.0])


@pytest.mark.parametrize("gamma_phi", [0.0, 0.25, 1.0, 4.0])
def test_optimum_matches_the_curve(gamma_phi):
    g2 = 0.5 + gamma_phi
    point = strong_optimal(100.0, 1.0, gamma_phi)
    assert point.C_max == pytest.approx(c_max_for_ratio(1.0 / g2))
    sol = strong_stationary(100.0, point.mu1_opt, 0.0, 1.0, gamma_phi)
    assert sol.C == pytest.approx(point.C_max, abs=1e-12)


# ---------- WEAK REGIME ----------

def test_weak_optimum():
    point = weak_optimal(1.0, 0.0)
    assert point.mu1_opt == pytest.approx(1.0 / (math.sqrt(5) + 1))
    sol = weak_stationary(point.mu1_opt, 1.0, 0.0)
    assert sol.C == pytest.approx(C_LIMIT, abs=1e-12)
    assert sol.F == pytest.approx(F_LIMIT, abs=1e-12)


def test_weak_coupling_beyond_gamma1_has_no_entanglement():
    assert weak_stationary(1.5, 1.0, 0.0).C == 0.0


def test_weak_state_is_consistent():
    sol = weak_stationary(0.2, 1.0, 0.3, phi0=0.7)
    assert concurrence(sol.rho_rotating) == pytest.approx(sol.C, abs=1e-10)
    assert fidelity_with(sol.rho_rotating, sol.target) == pytest.approx(sol.F, abs=1e-12)
    assert sol.target_phase == pytest.approx(wrap_phase(math.pi - 0.7 + math.pi / 2))


# ---------- MODEL-LEVEL HELPERS ----------

def test_closed_form_dispatches_on_phase():
    static = ModelSpec(mu1=2.0, omega_a1=50.0, omega_a2=50.0, gamma1=1.0)
    driven = static.with_updates(omega_a1=100.0, omega_a2=100.0, phase1=DrivenPhase(200.0))
    assert isinstance(closed_form(static), analytic.StrongSolution)
    assert isinstance(closed_form(driven), analytic.WeakSolution)
    assert closed_form_optimum(driven).mu1_opt == pytest.approx(weak_optimal(1.0, 0.0).mu1_opt)
    assert fidelity_with(target_state(static), closed_form(static).target) == pytest.approx(1.0)


def test_lab_frame_target_rotates():
    driven = ModelSpec(
        mu1=0.3, omega_a1=100.0, omega_a2=100.0, gamma1=1.0, phase1=DrivenPhase(200.0)
    )
    t = 0.01
    start = analytic.lab_frame_target(driven, 0.0).element("00", "11")
    later = analytic.lab_frame_target(driven, t).element("00", "11")
    assert later == pytest.approx(start * np.exp(1j * 200.0 * t))


def test_default_bounds_bracket_the_optimum():
    spec = ModelSpec(mu1=1.0, omega_a1=50.0, omega_a2=50.0, gamma1=1.0)
    lower, upper = default_mu1_bounds(spec)
    assert lower < closed_form_optimum(spec).mu1_opt < upper
