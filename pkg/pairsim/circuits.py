"""
Superconducting-circuit adapters.

Each circuit spec describes one physical two-qubit design and converts to a
lab-frame `ModelSpec`:

    charge_direct   two Cooper-pair boxes coupled by a capacitor
    flux_direct     two flux qubits coupled by a mutual inductance
    charge_lc       two Cooper-pair boxes sharing an LC oscillator
    flux_coupler    two flux qubits coupled through a third, biased loop
    cqed            two Cooper-pair boxes in a cavity fed by a squeezed field

Units: every frequency, energy and rate is given in Hz (cyclic) and converted
to angular units (x 2 pi) on the way to the model. Fluxes are in units of the
flux quantum. Capacitances, inductances and currents are SI.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import MISSING, asdict, dataclass, field, fields, replace
from typing import Any, ClassVar, Dict, List, Optional, Tuple, Type, Union

from scipy import constants

from pairsim.analytic import GOLDEN, OptimalPoint, closed_form_optimum, strong_optimal_omega
from pairsim.conf import pairsim_settings
from pairsim.exceptions import (
    ApproximationRangeError,
    DispersiveRegimeError,
    InvalidSpecError,
    NoSolutionError,
)
from pairsim.model import DrivenPhase, ModelSpec, StaticPhase

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DEGENERATE_BIAS = 0.5
BIAS_TOL = 1e-12
SQUID_CLOSED_TOL = 1e-12


@dataclass(frozen=True)
class PhysConstants:
    """CODATA values from scipy.constants (SI)."""

    e: float = constants.e
    h: float = constants.h
    hbar: float = constants.hbar

    @property
    def Phi0(self) -> float:
        """Superconducting flux quantum h / 2e."""
        return self.h / (2.0 * self.e)


PHYS = PhysConstants()


def _angular(hz: float) -> float:
    return TWO_PI * hz


def _is_degenerate(bias: float) -> bool:
    return math.isclose(bias, DEGENERATE_BIAS, rel_tol=0.0, abs_tol=BIAS_TOL)


# ---------------------------------------------------------------------------
# Specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircuitSpec:
    """
    Base class for circuit specs.

    Subclasses set `kind`; `from_dict` checks required and unknown fields and
    coerces every value to float.
    """

    kind: ClassVar[str] = ""

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            try:
                number = float(value)
            except (TypeError, ValueError):
                raise InvalidSpecError(f"{self.kind}.{f.name} must be a number") from None
            if not math.isfinite(number):
                raise InvalidSpecError(f"{self.kind}.{f.name} must be finite")
            object.__setattr__(self, f.name, number)
        if getattr(self, "gamma1", 0.0) < 0:
            raise InvalidSpecError(f"{self.kind}.gamma1 must be >= 0")
        if (getattr(self, "gamma_phi", None) or 0.0) < 0:
            raise InvalidSpecError(f"{self.kind}.gamma_phi must be >= 0")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CircuitSpec":
        if not isinstance(data, dict):
            raise InvalidSpecError("circuit spec must be a JSON object")
        payload = {k: v for k, v in data.items() if k != "kind"}
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(payload) - names)
        if unknown:
            raise InvalidSpecError(f"unknown {cls.kind} fields: {', '.join(unknown)}")
        missing = [
            f.name
            for f in fields(cls)
            if f.default is MISSING and f.default_factory is MISSING and f.name not in payload
        ]
        if missing:
            raise InvalidSpecError(f"missing {cls.kind} fields: {', '.join(missing)}")
        return cls(**payload)

    def to_dict(self) -> Dict[str, Any]:
        data = {"kind": self.kind}
        data.update({k: v for k, v in asdict(self).items() if v is not None})
        return data


@dataclass(frozen=True)
class ChargeDirectSpec(CircuitSpec):
    """
    Capacitively coupled Cooper-pair boxes with SQUID junctions.

    J is taken as given, or derived from C_g, C_J0 and C_m.
    """

    kind: ClassVar[str] = "charge_direct"

    E_J0: float
    Phi_x1: float
    Phi_x2: float
    gamma1: float
    E_C: Optional[float] = None
    n_g1: float = DEGENERATE_BIAS
    n_g2: float = DEGENERATE_BIAS
    J: Optional[float] = None
    C_g: Optional[float] = None
    C_J0: Optional[float] = None
    C_m: Optional[float] = None
    gamma_phi: Optional[float] = None

    @property
    def at_degeneracy(self) -> bool:
        return _is_degenerate(self.n_g1) and _is_degenerate(self.n_g2)


@dataclass(frozen=True)
class FluxDirectSpec(CircuitSpec):
    """Inductively coupled flux qubits with SQUID-tuned tunnel splittings."""

    kind: ClassVar[str] = "flux_direct"

    I_p1: float
    I_p2: float
    L_1: float
    L_2: float
    I_0: float
    Phi_c1: float
    Phi_c2: float
    M_mut: float
    gamma1: float
    Phi_1: float = DEGENERATE_BIAS
    Phi_2: float = DEGENERATE_BIAS
    gamma_phi: Optional[float] = None

    @property
    def at_degeneracy(self) -> bool:
        return _is_degenerate(self.Phi_1) and _is_degenerate(self.Phi_2)


@dataclass(frozen=True)
class ChargeLCSpec(CircuitSpec):
    """Cooper-pair boxes at charge degeneracy coupled through an LC oscillator."""

    kind: ClassVar[str] = "charge_lc"

    E_J0: float
    Phi_x: float
    gamma1: float
    C_g: Optional[float] = None
    C_J0: Optional[float] = None
    L_osc: Optional[float] = None
    E_L: Optional[float] = None


@dataclass(frozen=True)
class FluxCouplerSpec(CircuitSpec):
    """Flux qubits at degeneracy coupled through a flux-biased third loop."""

    kind: ClassVar[str] = "flux_coupler"

    Delta_1: float
    Delta_2: float
    Phi_3: float
    gamma1: float
    alpha: Optional[float] = None
    I_p1: Optional[float] = None
    I_p2: Optional[float] = None
    E_J0: Optional[float] = None
    J0: Optional[float] = None


@dataclass(frozen=True)
class CQEDSpec(CircuitSpec):
    """
    Two Cooper-pair boxes in a cavity driven by a squeezed field.

    The three-level atom that produces the squeezing is described by its
    couplings lambda_g, lambda_e, lambda_d and detuning delta; the resonator
    by its bare frequency omega_c_bare.
    """

    kind: ClassVar[str] = "cqed"

    E_J: float
    omega_c_bare: float
    g: float
    lambda_g: float
    lambda_e: float
    lambda_d: float
    delta: float
    Omega_tilde: float
    gamma1: float


CIRCUIT_KINDS: Dict[str, Type[CircuitSpec]] = {
    cls.kind: cls
    for cls in (ChargeDirectSpec, FluxDirectSpec, ChargeLCSpec, FluxCouplerSpec, CQEDSpec)
}

AnyCircuit = Union[ChargeDirectSpec, FluxDirectSpec, ChargeLCSpec, FluxCouplerSpec, CQEDSpec]


def circuit_from_dict(data: Dict[str, Any]) -> AnyCircuit:
    """Parse a circuit spec using its `kind` discriminator."""
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidSpecError("circuit spec needs a 'kind' field")
    try:
        cls = CIRCUIT_KINDS[data["kind"]]
    except (KeyError, TypeError):
        raise InvalidSpecError(
            f"unknown circuit kind {data['kind']!r}; expected one of {', '.join(CIRCUIT_KINDS)}"
        ) from None
    return cls.from_dict(data)


# ---------------------------------------------------------------------------
# Charge qubits, direct capacitive coupling
# ---------------------------------------------------------------------------

def josephson_energy(E_J0: float, flux: float) -> float:
    """SQUID Josephson energy 2 E_J0 cos(pi flux)."""
    return 2.0 * E_J0 * math.cos(math.pi * flux)


def charging_splitting(E_C: float, n_g: float) -> float:
    """4 E_C (1 - 2 n_g); zero at the degeneracy point."""
    return 4.0 * E_C * (1.0 - 2.0 * n_g)


def capacitive_coupling(C_g: float, C_J0: float, C_m: float) -> float:
    """J = e^2 C_m / ((C_g + 2 C_J0)^2 - C_m^2), in Hz."""
    total = C_g + 2.0 * C_J0
    denom = total ** 2 - C_m ** 2
    if denom <= 0:
        raise InvalidSpecError("C_m must be smaller than C_g + 2 C_J0")
    return PHYS.e ** 2 * C_m / denom / PHYS.h


def _charge_direct_coupling(spec: ChargeDirectSpec) -> float:
    caps = (spec.C_g, spec.C_J0, spec.C_m)
    has_caps = all(c is not None for c in caps)
    if spec.J is not None:
        if has_caps:
            derived = capacitive_coupling(*caps)
            if not math.isclose(derived, spec.J, rel_tol=1e-3):
                logger.warning(
                    "given J=%g Hz differs from capacitance value %g Hz; using the given J",
                    spec.J,
                    derived,
                )
        return spec.J
    if has_caps:
        return capacitive_coupling(*caps)
    raise InvalidSpecError("charge_direct needs J or all of C_g, C_J0, C_m")


def _off_degeneracy_gamma_phi(spec, kind: str) -> float:
    if spec.gamma_phi is None:
        raise InvalidSpecError(f"{kind} away from the degeneracy point needs gamma_phi")
    logger.warning(
        "%s operated away from degeneracy: longitudinal coupling terms are dropped", kind
    )
    return spec.gamma_phi


def mixing_angle(longitudinal: float, transverse: float) -> float:
    """
    Eigenbasis angle th = 1/2 atan2(-transverse, longitudinal) of one qubit.

    `longitudinal` is the charge (or flux-bias) splitting and `transverse` the
    tunnelling energy; th = -pi/4 at the degeneracy point.
    """
    return 0.5 * math.atan2(-transverse, longitudinal)


def _projected_coupling(J: float, angles: Tuple[float, float], kind: str) -> float:
    """Transverse part J sin(2 th1) sin(2 th2); the longitudinal part is dropped."""
    longitudinal = J * math.cos(2.0 * angles[0]) * math.cos(2.0 * angles[1])
    if longitudinal:
        logger.debug("%s: dropping longitudinal coupling %g Hz", kind, longitudinal)
    return J * math.sin(2.0 * angles[0]) * math.sin(2.0 * angles[1])


def _degenerate_gamma_phi(spec, kind: str) -> float:
    if spec.gamma_phi:
        logger.warning("%s at degeneracy: gamma_phi=%g is ignored (set to 0)", kind, spec.gamma_phi)
    return 0.0


def charge_direct_to_model(spec: ChargeDirectSpec) -> ModelSpec:
    """
    Two capacitively coupled Cooper-pair boxes as a ModelSpec.

    At n_g = 1/2 the qubit frequencies are |E_J(Phi_x)|, mu1 = mu2 = J/4 and
    gamma_phi = 0. Away from it the frequencies become sqrt(E_C(n_g)^2 + E_J^2),
    only the transverse part J sin(2 th1) sin(2 th2) of the coupling is kept
    (th_j from `mixing_angle`) and gamma_phi must be given.

    Raises:
        InvalidSpecError: If a qubit frequency vanishes or J cannot be resolved.
    """
    J = _charge_direct_coupling(spec)
    e_j = (josephson_energy(spec.E_J0, spec.Phi_x1), josephson_energy(spec.E_J0, spec.Phi_x2))
    if spec.at_degeneracy:
        for flux in (spec.Phi_x1, spec.Phi_x2):
            _require_open_squid(flux)
        omegas = tuple(abs(x) for x in e_j)
        coupling = J
        gamma_phi = _degenerate_gamma_phi(spec, spec.kind)
    else:
        if spec.E_C is None:
            raise InvalidSpecError("charge_direct away from n_g = 1/2 needs E_C")
        e_c = (charging_splitting(spec.E_C, spec.n_g1), charging_splitting(spec.E_C, spec.n_g2))
        omegas = tuple(math.hypot(c, j) for c, j in zip(e_c, e_j))
        if min(omegas) <= 0:
            raise InvalidSpecError("qubit frequency is zero")
        angles = (mixing_angle(e_c[0], e_j[0]), mixing_angle(e_c[1], e_j[1]))
        coupling = _projected_coupling(J, angles, spec.kind)
        gamma_phi = _off_degeneracy_gamma_phi(spec, spec.kind)
    return _coupled_model(omegas, coupling, spec.gamma1, gamma_phi)


def _require_open_squid(flux: float) -> None:
    if abs(math.cos(math.pi * flux)) < SQUID_CLOSED_TOL:
        raise InvalidSpecError(f"qubit frequency is zero: cos(pi Phi_x) = 0 at Phi_x={flux:g}")


def _coupled_model(
    omegas: Tuple[float, float], coupling: float, gamma1: float, gamma_phi: float
) -> ModelSpec:
    """mu1 = mu2 = |coupling| / 4; a negative coupling becomes phase pi on both terms."""
    phase = math.pi if coupling < 0 else 0.0
    mu = _angular(abs(coupling)) / 4.0
    return ModelSpec(
        mu1=mu,
        mu2=mu,
        phase1=StaticPhase(phase),
        theta2=phase,
        omega_a1=_angular(omegas[0]),
        omega_a2=_angular(omegas[1]),
        gamma1=_angular(gamma1),
        gamma_phi=_angular(gamma_phi),
    )


def charge_direct_optimal_flux(spec: ChargeDirectSpec) -> float:
    """
    Flux Phi_x (both qubits) at which mu1 = J/4 is the optimal coupling.

    The qubit-frequency sum 4 E_J0 cos(pi Phi_x) is set to
    `strong_optimal_omega(J/4, gamma1, 0)`, which is (sqrt5 + 1) J for
    gamma1 << J.

    Raises:
        NoSolutionError: If the required cosine exceeds 1 or J is too weak.
        InvalidSpecError: Away from the charge degeneracy point.
    """
    if not spec.at_degeneracy:
        raise InvalidSpecError("optimal flux formula holds at n_g = 1/2")
    J = _charge_direct_coupling(spec)
    omega = strong_optimal_omega(abs(J) / 4.0, spec.gamma1, 0.0)
    cos_value = omega / (4.0 * spec.E_J0)
    if cos_value > 1.0:
        raise NoSolutionError(
            f"J={J:g} Hz is too large for E_J0={spec.E_J0:g} Hz (cos = {cos_value:.4g} > 1)"
        )
    return math.acos(cos_value) / math.pi


# ---------------------------------------------------------------------------
# Flux qubits, direct inductive coupling
# ---------------------------------------------------------------------------

def critical_current(I_0: float, flux: float) -> float:
    """SQUID critical current 2 I_0 |cos(pi flux)|."""
    return 2.0 * I_0 * abs(math.cos(math.pi * flux))


def flux_direct_delta(L: float, I_0: float, flux: float) -> float:
    """
    Tunnel splitting (3 Phi0^2 / 8 pi^2 L)(1 - Phi0 / (2 pi L I_c))^2 in Hz.

    Raises:
        ApproximationRangeError: Unless 0 < 2 pi L I_c / Phi0 - 1 < FLUX_DELTA_MAX_EPS.
    """
    phi0 = PHYS.Phi0
    i_c = critical_current(I_0, flux)
    eps = TWO_PI * L * i_c / phi0 - 1.0
    limit = pairsim_settings.FLUX_DELTA_MAX_EPS
    if not 0.0 < eps < limit:
        raise ApproximationRangeError(
            f"2 pi L I_c / Phi0 - 1 = {eps:.4g} outside (0, {limit:g}); the tunnel-splitting formula does not apply"
        )
    energy = 3.0 * phi0 ** 2 / (8.0 * math.pi ** 2 * L) * (1.0 - phi0 / (TWO_PI * L * i_c)) ** 2
    return energy / PHYS.h


def flux_direct_eps(L: float, I_0: float, flux: float) -> float:
    """2 pi L I_c / Phi0 - 1, the small parameter of the splitting formula."""
    return TWO_PI * L * critical_current(I_0, flux) / PHYS.Phi0 - 1.0


def inductive_coupling(M: float, I_p1: float, I_p2: float) -> float:
    """J = M I_p1 I_p2, in Hz."""
    return M * I_p1 * I_p2 / PHYS.h


def flux_bias_energy(I_p: float, flux: float) -> float:
    """epsilon = 2 I_p (Phi - Phi0/2), in Hz."""
    return 2.0 * I_p * PHYS.Phi0 * (flux - DEGENERATE_BIAS) / PHYS.h


def flux_direct_to_model(spec: FluxDirectSpec) -> ModelSpec:
    """
    Inductively coupled flux qubits as a ModelSpec.

    At Phi_j = Phi0/2 the qubit frequencies are the tunnel splittings
    Delta(Phi_cj), mu1 = mu2 = J/4 and gamma_phi = 0.

    Raises:
        ApproximationRangeError: If the splitting formula is out of range.
    """
    deltas = (
        flux_direct_delta(spec.L_1, spec.I_0, spec.Phi_c1),
        flux_direct_delta(spec.L_2, spec.I_0, spec.Phi_c2),
    )
    J = inductive_coupling(spec.M_mut, spec.I_p1, spec.I_p2)
    if spec.at_degeneracy:
        return _coupled_model(deltas, J, spec.gamma1, _degenerate_gamma_phi(spec, spec.kind))
    biases = (flux_bias_energy(spec.I_p1, spec.Phi_1), flux_bias_energy(spec.I_p2, spec.Phi_2))
    omegas = tuple(math.hypot(b, d) for b, d in zip(biases, deltas))
    angles = (mixing_angle(biases[0], deltas[0]), mixing_angle(biases[1], deltas[1]))
    coupling = _projected_coupling(J, angles, spec.kind)
    return _coupled_model(omegas, coupling, spec.gamma1, _off_degeneracy_gamma_phi(spec, spec.kind))


def flux_direct_optimal_delta(spec: FluxDirectSpec) -> float:
    """
    Tunnel splitting that makes mu1 = J/4 optimal.

    Half of `strong_optimal_omega(J/4, gamma1, 0)`; (sqrt5 + 1) J / 2 for
    gamma1 << J.
    """
    J = inductive_coupling(spec.M_mut, spec.I_p1, spec.I_p2)
    return strong_optimal_omega(abs(J) / 4.0, spec.gamma1, 0.0) / 2.0


def _invert_delta(delta_hz: float, L: float, I_0: float) -> float:
    phi0 = PHYS.Phi0
    s = math.sqrt(delta_hz * PHYS.h * 8.0 * math.pi ** 2 * L / (3.0 * phi0 ** 2))
    if s >= 1.0:
        raise NoSolutionError(f"splitting {delta_hz:g} Hz is beyond the SQUID range")
    i_c = phi0 / (TWO_PI * L * (1.0 - s))
    ratio = i_c / (2.0 * I_0)
    if ratio > 1.0:
        raise NoSolutionError(f"needs I_c={i_c:.4g} A > 2 I_0={2 * I_0:.4g} A")
    flux = math.acos(ratio) / math.pi
    eps = flux_direct_eps(L, I_0, flux)
    if not 0.0 < eps < pairsim_settings.FLUX_DELTA_MAX_EPS:
        raise ApproximationRangeError(f"optimal splitting leaves the formula's range (eps={eps:.4g})")
    return flux


def flux_direct_optimal_flux(spec: FluxDirectSpec) -> Tuple[float, float]:
    """
    SQUID fluxes (Phi_c1, Phi_c2) giving Delta_j = (sqrt5 + 1) J / 2.

    Raises:
        NoSolutionError: If the splitting cannot be reached.
        ApproximationRangeError: If the required bias leaves the formula's range.
    """
    target = flux_direct_optimal_delta(spec)
    return (_invert_delta(target, spec.L_1, spec.I_0), _invert_delta(target, spec.L_2, spec.I_0))


# ---------------------------------------------------------------------------
# Charge qubits coupled through an LC oscillator
# ---------------------------------------------------------------------------

def qubit_capacitance(C_J0: float, C_g: float) -> float:
    """C_qb = 2 C_J0 C_g / (2 C_J0 + C_g)."""
    return 2.0 * C_J0 * C_g / (2.0 * C_J0 + C_g)


def oscillator_energy(spec: ChargeLCSpec) -> float:
    """E_L = (2 C_J0 / C_qb)^2 Phi0^2 / (pi^2 L), in Hz; a given E_L wins."""
    lumped = (spec.C_g, spec.C_J0, spec.L_osc)
    has_lumped = all(x is not None for x in lumped)
    derived = None
    if has_lumped:
        c_qb = qubit_capacitance(spec.C_J0, spec.C_g)
        derived = (2.0 * spec.C_J0 / c_qb) ** 2 * PHYS.Phi0 ** 2 / (math.pi ** 2 * spec.L_osc) / PHYS.h
    if spec.E_L is not None:
        if derived is not None and not math.isclose(derived, spec.E_L, rel_tol=1e-3):
            logger.warning("given E_L=%g Hz differs from circuit value %g Hz; using E_L", spec.E_L, derived)
        if spec.E_L <= 0:
            raise InvalidSpecError("E_L must be > 0")
        return spec.E_L
    if derived is None:
        raise InvalidSpecError("charge_lc needs E_L or all of C_g, C_J0, L_osc")
    return derived


def lc_to_model(spec: ChargeLCSpec) -> ModelSpec:
    """
    Charge qubits at degeneracy sharing an LC oscillator.

    E_int = E_J^2 / E_L enters as mu1 = mu2 = E_int / 4 with theta2 = pi for
    the negative exchange term.

    Raises:
        InvalidSpecError: If E_J(Phi_x) vanishes.
    """
    _require_open_squid(spec.Phi_x)
    e_j = josephson_energy(spec.E_J0, spec.Phi_x)
    e_int = e_j ** 2 / oscillator_energy(spec)
    mu = _angular(e_int) / 4.0
    return ModelSpec(
        mu1=mu,
        mu2=mu,
        phase1=StaticPhase(0.0),
        theta2=math.pi,
        omega_a1=_angular(abs(e_j)),
        omega_a2=_angular(abs(e_j)),
        gamma1=_angular(spec.gamma1),
        gamma_phi=0.0,
    )


def charge_lc_optimal_flux(spec: ChargeLCSpec) -> float:
    """Flux with cos(pi Phi_x) = E_L / ((sqrt5 + 1) E_J0)."""
    cos_value = oscillator_energy(spec) / (GOLDEN * spec.E_J0)
    if cos_value > 1.0:
        raise NoSolutionError(f"E_L too large for E_J0 (cos = {cos_value:.4g} > 1)")
    return math.acos(cos_value) / math.pi


# ---------------------------------------------------------------------------
# Flux qubits with a tunable coupler loop
# ---------------------------------------------------------------------------

def coupler_amplitude(spec: FluxCouplerSpec) -> float:
    """
    J0 = alpha I_p1 I_p2 hbar^2 / (4 e^2 E_J0), in Hz.

    A given J0 wins; otherwise alpha, I_p1, I_p2 and E_J0 are required.
    """
    if spec.alpha is not None:
        if not 0.0 <= spec.alpha < 1.0:
            raise InvalidSpecError("alpha must lie in [0, 1)")
        if spec.alpha * pairsim_settings.DISPERSIVE_RATIO > 1.0:
            logger.warning("alpha=%g is not small; the coupler formula is approximate", spec.alpha)
    parts = (spec.alpha, spec.I_p1, spec.I_p2, spec.E_J0)
    derived = None
    if all(x is not None for x in parts):
        e_j0 = spec.E_J0 * PHYS.h
        derived = spec.alpha * spec.I_p1 * spec.I_p2 * PHYS.hbar ** 2 / (4.0 * PHYS.e ** 2 * e_j0) / PHYS.h
    if spec.J0 is not None:
        if derived is not None and not math.isclose(derived, spec.J0, rel_tol=1e-3):
            logger.warning("given J0=%g Hz differs from circuit value %g Hz; using J0", spec.J0, derived)
        return spec.J0
    if derived is None:
        raise InvalidSpecError("flux_coupler needs J0 or all of alpha, I_p1, I_p2, E_J0")
    return derived


def coupler_strength(J0: float, phi3: float) -> float:
    """J(Phi_3) = J0 cos(2 pi Phi_3)."""
    return J0 * math.cos(TWO_PI * phi3)


def flux_coupler_to_model(spec: FluxCouplerSpec) -> ModelSpec:
    """Qubit frequencies Delta_j, mu1 = mu2 = J(Phi_3) / 4, gamma_phi = 0."""
    if spec.Delta_1 <= 0 or spec.Delta_2 <= 0:
        raise InvalidSpecError("tunnel splittings must be > 0")
    J = coupler_strength(coupler_amplitude(spec), spec.Phi_3)
    return _coupled_model((spec.Delta_1, spec.Delta_2), J, spec.gamma1, 0.0)


def flux_coupler_optimal_phi3(spec: FluxCouplerSpec) -> float:
    """
    Coupler flux with cos(2 pi Phi_3) = (Delta_1 + Delta_2) / ((sqrt5 + 1) J0).

    Raises:
        NoSolutionError: If the right-hand side exceeds 1.
    """
    J0 = abs(coupler_amplitude(spec))
    if J0 == 0:
        raise NoSolutionError("coupler amplitude J0 is zero")
    cos_value = (spec.Delta_1 + spec.Delta_2) / (GOLDEN * J0)
    if cos_value > 1.0:
        raise NoSolutionError(f"J0={J0:g} Hz too small for the splittings (cos = {cos_value:.4g} > 1)")
    return math.acos(cos_value) / TWO_PI


# ---------------------------------------------------------------------------
# Circuit QED with a squeezed cavity field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SqueezedCavity:
    """Effective two-photon drive xi e^{i phi0} and dressed cavity frequency."""

    xi: float
    phi0_tilde: float
    omega_c: float


def squeezed_cavity_params(
    lambda_g: float, lambda_e: float, lambda_d: float, delta: float, omega_c_bare: float
) -> SqueezedCavity:
    """
    xi e^{i phi0} = 2 lambda_d lambda_g lambda_e / delta^2 and
    omega_c = omega_c_bare + 2 (lambda_g^2 + lambda_e^2) / delta.

    Raises:
        InvalidSpecError: If delta is zero.
    """
    if delta == 0:
        raise InvalidSpecError("detuning delta must be nonzero")
    amplitude = complex(2.0 * lambda_d * lambda_g * lambda_e / delta ** 2)
    omega_c = omega_c_bare + 2.0 * (abs(lambda_g) ** 2 + abs(lambda_e) ** 2) / delta
    return SqueezedCavity(xi=abs(amplitude), phi0_tilde=cmath.phase(amplitude), omega_c=omega_c)


@dataclass(frozen=True)
class ConditionCheck:
    """One 'much larger than' inequality: lhs >> rhs means lhs / rhs >= required."""

    name: str
    lhs: float
    rhs: float
    required: float
    fatal: bool

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return math.inf
        return abs(self.lhs) / abs(self.rhs)

    @property
    def ok(self) -> bool:
        return self.ratio >= self.required

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio if math.isfinite(self.ratio) else None,
            "required": self.required,
            "ok": self.ok,
            "fatal": self.fatal,
        }


def _cqed_detuning(spec: CQEDSpec) -> Tuple[SqueezedCavity, float]:
    cavity = squeezed_cavity_params(
        spec.lambda_g, spec.lambda_e, spec.lambda_d, spec.delta, spec.omega_c_bare
    )
    return cavity, spec.E_J - cavity.omega_c


def cqed_condition_report(spec: CQEDSpec) -> List[ConditionCheck]:
    """
    Every inequality behind the effective cQED model.

    Fatal checks (the dispersive conditions) make `cqed_to_model` raise; the
    others are reported as warnings.
    """
    ratio = pairsim_settings.DISPERSIVE_RATIO
    cavity, detuning = _cqed_detuning(spec)
    g2_over_delta = spec.g ** 2 / detuning if detuning else math.inf
    xi_g_over_delta = cavity.xi * spec.g / detuning if detuning else math.inf
    return [
        ConditionCheck("delta >> |lambda_g|", spec.delta, spec.lambda_g, ratio, True),
        ConditionCheck("delta >> |lambda_e|", spec.delta, spec.lambda_e, ratio, True),
        ConditionCheck("|Delta| >> |g|", detuning, spec.g, ratio, True),
        ConditionCheck(
            "delta >> |Omega_tilde - 2 omega_c_bare|",
            spec.delta,
            spec.Omega_tilde - 2.0 * spec.omega_c_bare,
            ratio,
            False,
        ),
        ConditionCheck("E_J / 2 >> g^2 / Delta", spec.E_J / 2.0, g2_over_delta, ratio, False),
        ConditionCheck("E_J / 2 >> xi g / Delta", spec.E_J / 2.0, xi_g_over_delta, ratio, False),
        ConditionCheck(
            "Omega_tilde = 2 E_J",
            1.0,
            (spec.Omega_tilde - 2.0 * spec.E_J) / (2.0 * spec.E_J) if spec.E_J else math.inf,
            1e12,
            False,
        ),
    ]


def cqed_to_model(spec: CQEDSpec) -> ModelSpec:
    """
    Effective two-qubit model after eliminating the cavity.

    mu1 = 2 g^2 xi / Delta^2 with the driven phase th1 = Omega_tilde t + phi0,
    mu2 = g^2 / |Delta| (theta2 = pi for Delta < 0), qubit frequencies E_J.

    Raises:
        DispersiveRegimeError: If any fatal condition of the report fails.
    """
    report = cqed_condition_report(spec)
    failed = [c for c in report if not c.ok]
    fatal = [f"{c.name} (ratio {c.ratio:.3g} < {c.required:g})" for c in failed if c.fatal]
    if fatal:
        raise DispersiveRegimeError(fatal)
    for check in failed:
        logger.warning("cqed condition not met: %s (ratio %.3g)", check.name, check.ratio)
    if spec.E_J <= 0:
        raise InvalidSpecError("E_J must be > 0")

    cavity, detuning = _cqed_detuning(spec)
    mu1 = 2.0 * spec.g ** 2 * cavity.xi / detuning ** 2
    mu2 = spec.g ** 2 / abs(detuning)
    return ModelSpec(
        mu1=_angular(mu1),
        mu2=_angular(mu2),
        theta2=math.pi if detuning < 0 else 0.0,
        phase1=DrivenPhase(_angular(spec.Omega_tilde), cavity.phi0_tilde),
        omega_a1=_angular(spec.E_J),
        omega_a2=_angular(spec.E_J),
        gamma1=_angular(spec.gamma1),
        gamma_phi=0.0,
    )


def cqed_optimal_xi(spec: CQEDSpec) -> float:
    """xi = Delta^2 G1 / (2 (sqrt5 + 1) g^2), the squeezing that makes mu1 optimal."""
    if spec.g == 0:
        raise NoSolutionError("g = 0: the qubits do not couple to the cavity")
    _, detuning = _cqed_detuning(spec)
    return detuning ** 2 * spec.gamma1 / (2.0 * GOLDEN * spec.g ** 2)


def cqed_optimal_lambda_d(spec: CQEDSpec) -> float:
    """Drive coupling lambda_d giving `cqed_optimal_xi`."""
    product = 2.0 * spec.lambda_g * spec.lambda_e
    if product == 0:
        raise NoSolutionError("lambda_g lambda_e = 0: xi cannot be tuned")
    return cqed_optimal_xi(spec) * spec.delta ** 2 / abs(product)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

_ADAPTERS = {
    ChargeDirectSpec: charge_direct_to_model,
    FluxDirectSpec: flux_direct_to_model,
    ChargeLCSpec: lc_to_model,
    FluxCouplerSpec: flux_coupler_to_model,
    CQEDSpec: cqed_to_model,
}


def to_model(spec: CircuitSpec) -> ModelSpec:
    """Convert any circuit spec with the adapter for its kind."""
    try:
        adapter = _ADAPTERS[type(spec)]
    except KeyError:
        raise InvalidSpecError(f"no adapter for {type(spec).__name__}") from None
    return adapter(spec)


@dataclass(frozen=True)
class KnobSetting:
    """
    Optimal knob of a circuit and the model it produces.

    Attributes:
        knob (str): Name of the tuned field(s).
        value (float | tuple): Optimal value.
        spec (CircuitSpec): Input spec with the knob applied.
        model (ModelSpec): Model of the tuned circuit.
        predicted (OptimalPoint): Closed-form optimum for that model.
    """

    knob: str
    value: Any
    spec: CircuitSpec
    model: ModelSpec
    predicted: OptimalPoint
    extra: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "knob": self.knob,
            "value": list(self.value) if isinstance(self.value, tuple) else self.value,
            "spec": self.spec.to_dict(),
            "model": self.model.to_dict(),
            "predicted": self.predicted.to_dict(),
            **self.extra,
        }


def optimal_knob(spec: CircuitSpec) -> KnobSetting:
    """
    Tune the design knob of a circuit to its optimal value.

    The knob is Phi_x for charge qubits, Phi_c for the direct flux design,
    Phi_3 for the coupler loop and lambda_d for the cavity design.

    Raises:
        NoSolutionError: If the optimality condition cannot be met.
    """
    extra: Dict[str, float] = {}
    if isinstance(spec, ChargeDirectSpec):
        flux = charge_direct_optimal_flux(spec)
        knob, value = "Phi_x", flux
        tuned = replace(spec, Phi_x1=flux, Phi_x2=flux)
    elif isinstance(spec, FluxDirectSpec):
        fluxes = flux_direct_optimal_flux(spec)
        knob, value = "Phi_c", fluxes
        tuned = replace(spec, Phi_c1=fluxes[0], Phi_c2=fluxes[1])
        extra["Delta_opt"] = flux_direct_optimal_delta(spec)
    elif isinstance(spec, ChargeLCSpec):
        flux = charge_lc_optimal_flux(spec)
        knob, value = "Phi_x", flux
        tuned = replace(spec, Phi_x=flux)
    elif isinstance(spec, FluxCouplerSpec):
        phi3 = flux_coupler_optimal_phi3(spec)
        knob, value = "Phi_3", phi3
        tuned = replace(spec, Phi_3=phi3)
    elif isinstance(spec, CQEDSpec):
        lam = cqed_optimal_lambda_d(spec)
        knob, value = "lambda_d", lam
        tuned = replace(spec, lambda_d=lam)
        extra["xi_opt"] = cqed_optimal_xi(spec)
    else:
        raise InvalidSpecError(f"no optimal knob for {type(spec).__name__}")
    model = to_model(tuned)
    return KnobSetting(
        knob=knob,
        value=value,
        spec=tuned,
        model=model,
        predicted=closed_form_optimum(model),
        extra=extra,
    )
