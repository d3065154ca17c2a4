"""Entanglement diagnostics of the conditional state.

The SU(1,1) inequality uses the pairing operators K_x = (A†B† + AB)/2 and
K_y = (A†B† - AB)/2i. Its variances are those of the untransposed operators
under the partially transposed state, which reduce to the closed forms

    var1 = N₂ + N + M,    var2 = N₂ + N - M - 4|⟨A†B⟩|²

with N₂ = 2⟨A†A B†B⟩, N = ⟨A†A⟩ + ⟨B†B⟩ + 1 and
M = ⟨A†²B²⟩ + ⟨A²B†²⟩ - ⟨A†B + AB†⟩². The state is entangled
when var1·var2 < N².
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from bec_entanglement.pipeline.fock import (
    annihilation,
    density_matrix,
    expectation,
    partial_transpose,
    pt_spectrum,
)
from bec_entanglement.pipeline.projection import JointState

__all__ = [
    "WitnessReport",
    "su11_moments",
    "su11_inequality",
    "pt_variance_oracle",
    "negativity",
    "duan_simon_xi",
    "witness_report",
]

VIOLATION_TOL = 1e-12
N2_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class WitnessReport:
    n2: float
    n_tot: float
    m_term: float
    cross: complex
    var1: float
    var2: float
    lhs: float
    rhs: float
    violated: bool
    min_pt_eig: float = float("nan")
    xi_xp: float = float("nan")
    # -M² - 4(N+M)|⟨A†B⟩|², only when N₂ = 0
    reduced_form: float | None = None

    @property
    def lhs_minus_rhs(self) -> float:
        return self.lhs - self.rhs


def su11_moments(state: JointState) -> tuple[float, float, float, complex]:
    """(N₂, N, M, ⟨A†B⟩) from normal-ordered moments."""
    n2 = 2.0 * expectation(state, (1, 1, 1, 1)).real
    n_a = expectation(state, (1, 1, 0, 0)).real
    n_b = expectation(state, (0, 0, 1, 1)).real
    n_tot = n_a + n_b + 1.0
    cross = expectation(state, (1, 0, 0, 1))
    # ⟨A²B†²⟩ = conj⟨A†²B²⟩ and ⟨A†B + AB†⟩ = 2 Re⟨A†B⟩
    m_term = 2.0 * expectation(state, (2, 0, 0, 2)).real - (2.0 * cross.real) ** 2
    return float(n2), float(n_tot), float(m_term), complex(cross)


def su11_inequality(state: JointState) -> WitnessReport:
    n2, n_tot, m_term, cross = su11_moments(state)
    var1 = n2 + n_tot + m_term
    var2 = n2 + n_tot - m_term - 4.0 * abs(cross) ** 2
    lhs = var1 * var2
    rhs = n_tot**2

    reduced_form = None
    if abs(n2) <= N2_ZERO_TOL:
        reduced_form = -(m_term**2) - 4.0 * (n_tot + m_term) * abs(cross) ** 2

    return WitnessReport(
        n2=n2,
        n_tot=n_tot,
        m_term=m_term,
        cross=cross,
        var1=var1,
        var2=var2,
        lhs=lhs,
        rhs=rhs,
        violated=bool(lhs < rhs - VIOLATION_TOL),
        reduced_form=reduced_form,
    )


def pt_variance_oracle(state: JointState, headroom: int = 2) -> tuple[float, float]:
    """Variances of O₁ and O₂ under ρ^{T_B}, computed with explicit matrices.

    O₁ = A†B† + AB and O₂ = (A†B† - AB)/i.

    The operators live on a space `headroom` levels above n_max so that the
    pair creation inside O² is not truncated.
    """
    if headroom < 2:
        raise ValueError(
            f"Pairing operators need at least 2 levels of headroom, got {headroom}"
        )
    n_big = state.n_max + headroom
    padded = np.zeros((n_big + 1, n_big + 1), dtype=complex)
    padded[: state.dim, : state.dim] = state.amplitudes
    rho = density_matrix(JointState(n_max=n_big, amplitudes=padded))
    rho_tb = partial_transpose(rho, n_big).entries

    a = annihilation(n_big)
    ident = np.eye(n_big + 1)
    a_op = np.kron(a, ident)
    b_op = np.kron(ident, a)
    creation = a_op.conj().T @ b_op.conj().T
    pairing = a_op @ b_op
    o1 = creation + pairing
    o2 = (creation - pairing) / 1j

    def variance(op: np.ndarray) -> float:
        mean = np.trace(rho_tb @ op)
        return float((np.trace(rho_tb @ op @ op) - mean**2).real)

    return variance(o1), variance(o2)


def negativity(state: JointState) -> float:
    """Smallest eigenvalue of the partially transposed density matrix."""
    return pt_spectrum(density_matrix(state), state.n_max).min_eig


def duan_simon_xi(state: JointState) -> float:
    """ξ_XP = ½[Var(X_A + X_B) + Var(P_A - P_B)].

    Quadratures X = (A + A†)/√2 and P = (A - A†)/(√2 i); vacuum gives 1.
    """
    n_a = expectation(state, (1, 1, 0, 0)).real
    n_b = expectation(state, (0, 0, 1, 1)).real
    a_sq = expectation(state, (0, 2, 0, 0)).real
    b_sq = expectation(state, (0, 0, 0, 2)).real
    ab = expectation(state, (0, 1, 0, 1)).real
    a_dag_b = expectation(state, (1, 0, 0, 1)).real
    mean_a = expectation(state, (0, 1, 0, 0))
    mean_b = expectation(state, (0, 0, 0, 1))

    x_second = n_a + n_b + 1.0 + a_sq + b_sq + 2.0 * ab + 2.0 * a_dag_b
    x_mean = np.sqrt(2.0) * (mean_a.real + mean_b.real)
    p_second = n_a + n_b + 1.0 - a_sq - b_sq + 2.0 * ab - 2.0 * a_dag_b
    p_mean = np.sqrt(2.0) * (mean_a.imag - mean_b.imag)

    return float(0.5 * ((x_second - x_mean**2) + (p_second - p_mean**2)))


def witness_report(state: JointState) -> WitnessReport:
    """SU(1,1) inequality together with the PT minimum eigenvalue and ξ_XP."""
    report = su11_inequality(state)
    return dataclasses.replace(
        report,
        min_pt_eig=negativity(state),
        xi_xp=duan_simon_xi(state),
    )
