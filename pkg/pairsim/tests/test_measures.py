"""
Unit tests for concurrence, X-state concurrence, fidelity and the Bell and
Werner helpers.
"""

import math

import numpy as np
import pytest

from pairsim.exceptions import InvalidSpecError, NonPhysicalStateError
from pairsim.measures import (
    XStateEntries,
    bell_target,
    concurrence,
    concurrence_x,
    fidelity_with,
    werner_state,
)
from pairsim.quantum_core import (
    basis_state,
    dm_from_pure,
    ground_state,
    maximally_mixed,
    random_density_matrix,
    random_local_unitary,
)
from pairsim.services import random_x_state


# ---------- FIXTURES ----------

@pytest.fixture
def rng():
    return np.random.default_rng(3)


# ---------- CONCURRENCE ----------

@pytest.mark.parametrize("phase", [0.0, 0.5, math.pi, -2.0])
def test_bell_states_are_maximally_entangled(phase):
    assert concurrence(bell_target(phase)) == pytest.approx(1.0, abs=1e-12)


def test_product_and_mixed_states_are_separable():
    assert concurrence(ground_state()) == 0.0
    assert concurrence(maximally_mixed()) == 0.0
    plus = np.array([1, 1]) / math.sqrt(2)
    assert concurrence(dm_from_pure(np.kron(plus, plus))) == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
def test_werner_concurrence(p):
    """C = max(0, (3p - 1) / 2)."""
    assert concurrence(werner_state(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-10)


def test_werner_weight_out_of_range():
    with pytest.raises(InvalidSpecError):
        werner_state(1.5)


def test_x_state_formula_matches_wootters(rng):
    for _ in range(200):
        x = random_x_state(rng)
        assert concurrence_x(x) == pytest.approx(concurrence(x.to_matrix()), abs=1e-10)


def test_x_state_entries_validate_positivity():
    with pytest.raises(InvalidSpecError):
        XStateEntries(a=0.5, b=0.0, c=0.0, d=0.5, w=0.6)
    with pytest.raises(InvalidSpecError):
        XStateEntries(a=0.5, b=0.5, c=0.5, d=0.5)


def test_x_state_read_back_from_matrix():
    x = XStateEntries(a=0.4, b=0.1, c=0.2, d=0.3, w=0.2j, z=0.05)
    assert XStateEntries.from_matrix(x.to_density_matrix()) == x


def test_concurrence_is_invariant_under_local_unitaries(rng):
    for _ in range(20):
        rho = random_density_matrix(rng, rank=2)
        u = random_local_unitary(rng)
        assert concurrence(rho.conjugated(u)) == pytest.approx(concurrence(rho), abs=1e-9)


def test_concurrence_rejects_non_states():
    with pytest.raises(NonPhysicalStateError):
        concurrence(np.diag([0.5, -0.5, 0.5, 0.5]))


# ---------- FIDELITY ----------

def test_bell_target_coherence_sign():
    """The |00><11| entry is e^{-i phase} / 2."""
    target = bell_target(0.9)
    assert target.element("00", "11") == pytest.approx(np.exp(-0.9j) / 2)


def test_fidelity_is_symmetric_and_bounded(rng):
    rho, sigma = random_density_matrix(rng), random_density_matrix(rng)
    value = fidelity_with(rho, sigma)
    assert value == pytest.approx(fidelity_with(sigma, rho))
    assert 0.0 <= value <= 1.0


def test_fidelity_with_pure_target_is_the_overlap():
    assert fidelity_with(bell_target(0.0), ground_state()) == pytest.approx(0.5)
    assert fidelity_with(bell_target(0.0), dm_from_pure(basis_state("01"))) == pytest.approx(0.0)
