"""Oracle suites: each fast path against an independent slow one on random draws."""

from dataclasses import dataclass

import datajoint as dj
import numpy as np

from bec_entanglement import CHECK_DRAWS, CHECK_SEED
from bec_entanglement.pipeline.dynamics import (
    CondensateDrive,
    propagate,
    propagate_ode_oracle,
    symplectic_residual,
)
from bec_entanglement.pipeline.fock import (
    density_matrix,
    hermitian_eigenvalues,
    partial_transpose,
    pt_spectrum_oracle,
    random_state,
    schmidt_coefficients,
)
from bec_entanglement.pipeline.optics import make_beam_splitter
from bec_entanglement.pipeline.projection import (
    ProbeField,
    brute_force_oracle,
    conditional_state,
    phase_aligned_deviation,
)
from bec_entanglement.pipeline.witness import pt_variance_oracle, su11_inequality

logger = dj.logger

__all__ = ["CheckResult", "CHECK_SUITES", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    draws: int
    max_error: float
    tolerance: float
    passed: bool


def _weak_amplitude(rng: np.random.Generator) -> complex:
    # |α| <= 0.5 keeps the oracle's photon cutoff of 10 negligible
    return rng.uniform(0.1, 0.5) * np.exp(1j * rng.uniform(0, 2 * np.pi))


def _relative_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def check_propagator(rng: np.random.Generator, draws: int) -> float:
    """Matrix exponential vs RK4 on P(τ)."""
    errors = []
    for _ in range(draws):
        drive = CondensateDrive(eta_tilde=rng.uniform(0.0, 8.0), delta_tilde=1.0)
        tau = rng.uniform(0.05, 5.0)
        fast = propagate(drive, tau).as_array()
        slow = propagate_ode_oracle(drive, tau, step=1e-3).as_array()
        errors.append(_relative_error(fast, slow))
    return max(errors)


def check_symplectic(rng: np.random.Generator, draws: int) -> float:
    """|a_c|² + |a_{-q}|² - |a_q|² = 1."""
    errors = []
    for _ in range(draws):
        drive = CondensateDrive(
            eta_tilde=rng.uniform(0.0, 8.0), delta_tilde=rng.uniform(0.5, 2.0)
        )
        errors.append(symplectic_residual(propagate(drive, rng.uniform(0.0, 10.0))))
    return max(errors)


def check_projection(rng: np.random.Generator, draws: int) -> float:
    """Closed-form conditional state vs explicit truncated field operators."""
    bs = make_beam_splitter(1.0 / np.sqrt(2.0))
    errors = []
    for _ in range(draws):
        tau = rng.uniform(0.2, 1.5)
        coeffs_a = propagate(CondensateDrive(rng.uniform(0.1, 1.0)), tau)
        coeffs_b = propagate(CondensateDrive(rng.uniform(0.1, 1.0)), tau)
        probe_a = ProbeField(_weak_amplitude(rng))
        probe_b = ProbeField(_weak_amplitude(rng))

        fast = conditional_state(coeffs_a, coeffs_b, probe_a, probe_b, bs).amplitudes
        slow = brute_force_oracle(
            coeffs_a, coeffs_b, probe_a, probe_b, bs, photon_cutoff=10
        ).amplitudes
        errors.append(phase_aligned_deviation(fast, slow))
    return max(errors)


def check_pt_spectrum(rng: np.random.Generator, draws: int) -> float:
    """Jacobi PT eigenvalues vs the Schmidt-coefficient formula."""
    errors = []
    for _ in range(draws):
        state = random_state(rng, n_max=2)
        transposed = partial_transpose(density_matrix(state), 2)
        direct = hermitian_eigenvalues(transposed.entries)
        predicted = pt_spectrum_oracle(schmidt_coefficients(state), dim=direct.size)
        errors.append(float(np.max(np.abs(direct - predicted))))
    return max(errors)


def check_su11_moments(rng: np.random.Generator, draws: int) -> float:
    """Closed-form SU(1,1) variances vs the explicitly transposed state."""
    errors = []
    for _ in range(draws):
        state = random_state(rng, n_max=2)
        report = su11_inequality(state)
        var1, var2 = pt_variance_oracle(state)
        errors.append(max(abs(report.var1 - var1), abs(report.var2 - var2)))
    return max(errors)


# suite name -> (check, tolerance)
CHECK_SUITES = {
    "propagator_vs_rk4": (check_propagator, 1e-6),
    "symplectic": (check_symplectic, 1e-8),
    "projection_vs_brute_force": (check_projection, 1e-6),
    "pt_spectrum_vs_schmidt": (check_pt_spectrum, 1e-9),
    "su11_vs_pt_variance": (check_su11_moments, 1e-10),
}


def run_checks(
    seed: int = CHECK_SEED, draws: int = CHECK_DRAWS, suites: list[str] | None = None
) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    for name in suites or CHECK_SUITES:
        if name not in CHECK_SUITES:
            raise ValueError(f"Unknown check suite: {name}")
        check, tolerance = CHECK_SUITES[name]
        max_error = check(rng, draws)
        passed = bool(max_error <= tolerance)
        log = logger.info if passed else logger.error
        log(
            f"{name}: max error {max_error:.3g} over {draws} draws "
            f"(tolerance {tolerance:g})"
        )
        results.append(CheckResult(name, draws, max_error, tolerance, passed))
    return results
