"""Heisenberg-picture dynamics of one Bragg-driven condensate and its probe.

The operator triad X = (α_q, α_{-q}†, c†) obeys dX/dτ = iMX with τ = ω_q^B t.
The evolved probe operator is read off the third row of P(τ) = exp(iτM):

    c(τ) = a_q α_q† + a_{-q} α_{-q} + a_c c(0)
    (a_q, a_{-q}, a_c) = conj(P[2, :])
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import datajoint as dj
import numpy as np
import scipy.linalg

from bec_entanglement import DEFAULT_DELTA

logger = dj.logger

__all__ = [
    "CondensateDrive",
    "ScatterCoeffs",
    "PropagatorDecomposition",
    "PropagationOverflowError",
    "OracleStepError",
    "build_m_matrix",
    "expm_taylor",
    "propagator_matrix",
    "scatter_coefficients_from_propagator",
    "propagate",
    "decompose",
    "propagate_eigen",
    "propagate_ode_oracle",
    "symplectic_residual",
]

ETA_BOUND = 1e3
MAX_GROWTH_EXPONENT = 600.0
MAX_CONDITION = 1e6

# Taylor scaling-and-squaring: scale until ||A/2^s||_1 <= 1/2, then sum the series
_SCALED_NORM = 0.5
_MAX_TAYLOR_TERMS = 40


class PropagationOverflowError(ArithmeticError):
    pass


class OracleStepError(ValueError):
    pass


@dataclass(frozen=True)
class CondensateDrive:
    eta_tilde: complex  # η/ω_q^B
    delta_tilde: float = DEFAULT_DELTA  # δ/ω_q^B

    def __post_init__(self):
        if not (np.isfinite(self.eta_tilde) and np.isfinite(self.delta_tilde)):
            raise ValueError(
                "Drive entries must be finite, got "
                f"eta={self.eta_tilde}, delta={self.delta_tilde}"
            )
        if abs(self.eta_tilde) >= ETA_BOUND:
            raise ValueError(
                f"|eta_tilde| must stay below {ETA_BOUND}, got {self.eta_tilde}"
            )


@dataclass(frozen=True)
class ScatterCoeffs:
    a_q: complex  # coefficient of α_q†
    a_minus_q: complex  # coefficient of α_{-q}
    a_c: complex  # coefficient of c(0)
    tau: float

    @property
    def symplectic_sum(self) -> float:
        """|a_c|² + |a_{-q}|² - |a_q|², equal to 1 for a bosonic output mode."""
        return abs(self.a_c) ** 2 + abs(self.a_minus_q) ** 2 - abs(self.a_q) ** 2

    def as_array(self) -> np.ndarray:
        return np.array([self.a_q, self.a_minus_q, self.a_c], dtype=complex)


@dataclass(frozen=True)
class PropagatorDecomposition:
    m_matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns are right eigenvectors (the matrix D)
    condition_estimate: float


def build_m_matrix(drive: CondensateDrive) -> np.ndarray:
    """Coupling matrix M in the basis (α_q, α_{-q}†, c†)."""
    eta = complex(drive.eta_tilde)
    delta = float(drive.delta_tilde)
    return np.array(
        [
            [-1.0, 0.0, -eta],
            [0.0, 1.0, eta],
            [eta.conjugate(), eta.conjugate(), -delta],
        ],
        dtype=complex,
    )


def expm_taylor(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series."""
    a = np.asarray(a, dtype=complex)
    ident = np.eye(a.shape[0], dtype=complex)
    norm = np.linalg.norm(a, 1)
    if norm == 0:
        return ident

    n_squarings = max(0, math.ceil(math.log2(norm / _SCALED_NORM)))
    scaled = a / 2.0**n_squarings

    result = ident.copy()
    term = ident
    for k in range(1, _MAX_TAYLOR_TERMS + 1):
        term = term @ scaled / k
        result = result + term
        if np.linalg.norm(term, 1) <= np.finfo(float).eps * np.linalg.norm(result, 1):
            break

    for _ in range(n_squarings):
        result = result @ result
    return result


def _check_tau(tau: float) -> float:
    tau = float(tau)
    if not np.isfinite(tau) or tau < 0:
        raise ValueError(f"tau must be a finite non-negative number, got {tau}")
    return tau


def propagator_matrix(drive: CondensateDrive, tau: float) -> np.ndarray:
    """P(τ) = exp(iτM)."""
    tau = _check_tau(tau)
    m_matrix = build_m_matrix(drive)

    growth = float(np.max(np.abs(np.linalg.eigvals(m_matrix).imag))) * tau
    if growth > MAX_GROWTH_EXPONENT:
        raise PropagationOverflowError(
            "Propagator would overflow: "
            f"max|Im λ|·τ = {growth:.1f} > {MAX_GROWTH_EXPONENT}"
        )

    p_matrix = expm_taylor(1j * tau * m_matrix)
    if not np.all(np.isfinite(p_matrix)):
        raise PropagationOverflowError(
            f"Non-finite matrix exponential at tau={tau} "
            f"(max|Im λ|·τ = {growth:.1f})"
        )
    return p_matrix


def scatter_coefficients_from_propagator(
    p_matrix: np.ndarray, tau: float
) -> ScatterCoeffs:
    a_q, a_minus_q, a_c = np.conj(p_matrix[2, :])
    return ScatterCoeffs(
        a_q=complex(a_q), a_minus_q=complex(a_minus_q), a_c=complex(a_c), tau=float(tau)
    )


def propagate(drive: CondensateDrive, tau: float) -> ScatterCoeffs:
    """Scattering coefficients (a_q, a_{-q}, a_c) of the probe after time τ."""
    return scatter_coefficients_from_propagator(propagator_matrix(drive, tau), tau)


def decompose(drive: CondensateDrive) -> PropagatorDecomposition:
    m_matrix = build_m_matrix(drive)
    eigenvalues, eigenvectors = scipy.linalg.eig(m_matrix)
    return PropagatorDecomposition(
        m_matrix=m_matrix,
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        condition_estimate=float(np.linalg.cond(eigenvectors)),
    )


def propagate_eigen(drive: CondensateDrive, tau: float) -> ScatterCoeffs:
    """Cross-check path X(τ) = D E(τ) D⁻¹ X(0).

    Refuses near-defective M, where the eigenbasis is ill-conditioned.
    """
    tau = _check_tau(tau)
    decomposition = decompose(drive)
    if decomposition.condition_estimate > MAX_CONDITION:
        raise ValueError(
            f"M is near-defective (cond(D) = {decomposition.condition_estimate:.3g}); "
            "use propagate() instead"
        )
    d_matrix = decomposition.eigenvectors
    e_diag = np.exp(1j * decomposition.eigenvalues * tau)
    p_matrix = (d_matrix * e_diag) @ np.linalg.inv(d_matrix)
    return scatter_coefficients_from_propagator(p_matrix, tau)


def propagate_ode_oracle(
    drive: CondensateDrive, tau: float, step: float
) -> ScatterCoeffs:
    """Classical RK4 integration of dP/dτ = iMP, P(0) = I.

    The step is shrunk so that an integer number of steps lands exactly on tau.
    """
    tau = _check_tau(tau)
    if not step > 0:
        raise OracleStepError(f"step must be positive, got {step}")
    if tau > 0 and step > tau / 10:
        raise OracleStepError(f"step {step} is too large for tau={tau} (max tau/10)")

    generator = 1j * build_m_matrix(drive)
    p_matrix = np.eye(3, dtype=complex)
    if tau == 0:
        return scatter_coefficients_from_propagator(p_matrix, tau)

    n_steps = math.ceil(tau / step)
    h = tau / n_steps
    for _ in range(n_steps):
        k1 = generator @ p_matrix
        k2 = generator @ (p_matrix + 0.5 * h * k1)
        k3 = generator @ (p_matrix + 0.5 * h * k2)
        k4 = generator @ (p_matrix + h * k3)
        p_matrix = p_matrix + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    logger.debug(f"RK4 oracle: {n_steps} steps of {h:.3g} to tau={tau}")
    return scatter_coefficients_from_propagator(p_matrix, tau)


def symplectic_residual(coeffs: ScatterCoeffs) -> float:
    """Deviation of the bosonic commutator from 1, relative to the largest term."""
    magnitude = abs(coeffs.a_c) ** 2 + abs(coeffs.a_minus_q) ** 2 + abs(coeffs.a_q) ** 2
    return abs(coeffs.symplectic_sum - 1.0) / max(1.0, magnitude)
