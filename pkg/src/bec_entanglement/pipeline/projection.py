"""Conditional joint state of the two condensates after a D1-D2 coincidence.

The coincidence operator C_D2 C_D1 = u c_a² + v c_b² + w c_a c_b with u = rt,
v = r't' and w = rr' + tt' acts on |0,0⟩ ⊗ |α,β⟩ and the fields are projected
back onto ⟨α,β|. With quasiparticle vacua each c_j contributes either one
quasiparticle (a_q) or the probe amplitude (a_c α), so the result lives on
|m,n⟩ with m + n <= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import datajoint as dj
import numpy as np
import qutip
import scipy.stats

from bec_entanglement.pipeline.dynamics import PropagationOverflowError, ScatterCoeffs
from bec_entanglement.pipeline.optics import BeamSplitter, PairSign

logger = dj.logger

__all__ = [
    "ProbeField",
    "JointState",
    "ZeroCoincidenceError",
    "conditional_state",
    "coincidence_weight",
    "vacuum_coefficient",
    "cancelling_probe_phase",
    "brute_force_oracle",
    "fix_global_phase",
    "phase_aligned_deviation",
]

MAX_PROBE_PHOTONS = 1e6
MIN_COINCIDENCE_WEIGHT = 1e-30
# amplitudes this far below their largest contributing term are rounding error
CANCELLATION_TOL = 1e-12
MIN_PHOTON_CUTOFF = 8
TRUNCATION_WARN_LEVEL = 1e-6


class ZeroCoincidenceError(ValueError):
    pass


@dataclass(frozen=True)
class ProbeField:
    amplitude: complex  # coherent amplitude, n_p = |amplitude|²

    def __post_init__(self):
        if not np.isfinite(self.amplitude):
            raise ValueError(f"Probe amplitude must be finite, got {self.amplitude}")
        if abs(self.amplitude) ** 2 > MAX_PROBE_PHOTONS:
            raise ValueError(
                f"Probe photon number {abs(self.amplitude) ** 2:.3g} "
                f"exceeds {MAX_PROBE_PHOTONS:g}"
            )

    @classmethod
    def from_photon_number(cls, n_p: float, theta: float = 0.0) -> ProbeField:
        if n_p < 0:
            raise ValueError(f"n_p must be non-negative, got {n_p}")
        return cls(amplitude=complex(np.sqrt(n_p) * np.exp(1j * theta)))

    @property
    def n_p(self) -> float:
        return abs(self.amplitude) ** 2


@dataclass(frozen=True, eq=False)
class JointState:
    """Normalized amplitudes C[m, n] of |m⟩_A ⊗ |n⟩_B.

    raw_weight is the squared norm of the unnormalized amplitudes after they
    were divided by weight_scale. That scale grows like e^{2|Im λ|τ} and is
    held as its logarithm, so the physical weight is
    raw_weight * exp(2 * log_weight_scale).
    """

    n_max: int
    amplitudes: np.ndarray
    raw_weight: float = 1.0
    log_weight_scale: float = 0.0

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.amplitudes.shape != (self.n_max + 1, self.n_max + 1):
            raise ValueError(
                f"Amplitude matrix shape {self.amplitudes.shape} "
                f"does not match n_max={self.n_max}"
            )

    @classmethod
    def from_amplitudes(cls, amplitudes, n_max: int | None = None) -> JointState:
        """Normalize an arbitrary amplitude matrix, zero-padding it up to n_max."""
        amplitudes = np.atleast_2d(np.asarray(amplitudes, dtype=complex))
        size = max(amplitudes.shape) - 1 if n_max is None else n_max
        if max(amplitudes.shape) > size + 1:
            raise ValueError(
                f"Amplitudes of shape {amplitudes.shape} exceed n_max={size}"
            )
        padded = np.zeros((size + 1, size + 1), dtype=complex)
        padded[: amplitudes.shape[0], : amplitudes.shape[1]] = amplitudes
        return _normalized_state(padded, size)

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def weight_scale(self) -> float:
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_weight_scale))

    @property
    def log_weight(self) -> float:
        """Natural log of the physical coincidence weight."""
        return math.log(self.raw_weight) + 2.0 * self.log_weight_scale


def _normalized_state(
    raw: np.ndarray, n_max: int, log_prefactor: float = 0.0
) -> JointState:
    """Divide by max|C| first (amplitudes grow like e^{2|Im λ|τ}), then normalize.

    `log_prefactor` is the log of a scale already divided out of `raw` by the
    caller.
    """
    scale = float(np.max(np.abs(raw)))
    if not np.isfinite(scale):
        raise PropagationOverflowError(
            f"Conditional amplitudes are not finite (max|C| = {scale})"
        )
    if scale == 0:
        raise ZeroCoincidenceError(
            "Coincidence probability vanishes for these parameters"
        )
    scaled = raw / scale
    raw_weight = float(np.sum(np.abs(scaled) ** 2))
    log_weight_scale = math.log(scale) + log_prefactor
    log_weight = math.log(raw_weight) + 2.0 * log_weight_scale
    if log_weight < math.log(MIN_COINCIDENCE_WEIGHT):
        raise ZeroCoincidenceError(
            f"Coincidence weight {math.exp(log_weight):.3g} "
            f"is below {MIN_COINCIDENCE_WEIGHT:g}"
        )
    return JointState(
        n_max=n_max,
        amplitudes=scaled / np.sqrt(raw_weight),
        raw_weight=raw_weight,
        log_weight_scale=log_weight_scale,
    )


def _branch_amplitudes(
    bs: BeamSplitter, pair_sign: PairSign
) -> tuple[complex, complex, complex]:
    u = complex(bs.r * bs.t)
    v = complex(bs.r_prime * bs.t_prime)
    w = bs.pair_amplitude(pair_sign)
    return u, v, w


def conditional_state(
    coeffs_a: ScatterCoeffs,
    coeffs_b: ScatterCoeffs,
    probe_a: ProbeField,
    probe_b: ProbeField,
    bs: BeamSplitter,
    n_max: int = 2,
    pair_sign: PairSign = "expansion",
) -> JointState:
    """Post-coincidence state of condensates A and B.

    Args:
        coeffs_a (ScatterCoeffs): probe-operator coefficients of condensate A.
        coeffs_b (ScatterCoeffs): same for B, at the same τ.
        probe_a (ProbeField): coherent probe incident on A (α).
        probe_b (ProbeField): coherent probe incident on B (β).
        bs (BeamSplitter): the splitter mixing the two scattered probes.
        n_max (int, optional): per-mode Fock truncation, >= 2. Defaults to 2.
        pair_sign (str, optional): sign convention of the rr' + tt' branch.

    Returns:
        JointState: normalized amplitudes with the raw coincidence weight attached.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2 for two-photon conditioning, got {n_max}")
    if not math.isclose(coeffs_a.tau, coeffs_b.tau, rel_tol=1e-12, abs_tol=1e-12):
        raise ValueError(
            "Scattering coefficients belong to different times "
            f"({coeffs_a.tau} vs {coeffs_b.tau})"
        )
    u, v, w = _branch_amplitudes(bs, pair_sign)

    # single-photon amplitudes, pre-scaled so that the products cannot overflow
    a_one = coeffs_a.a_q
    a_zero = coeffs_a.a_c * probe_a.amplitude
    b_one = coeffs_b.a_q
    b_zero = coeffs_b.a_c * probe_b.amplitude
    prescale = max(abs(a_one), abs(a_zero), abs(b_one), abs(b_zero))
    if prescale == 0:
        raise ZeroCoincidenceError(
            "Both condensates scatter nothing into the probe modes"
        )
    a_one, a_zero, b_one, b_zero = (
        a_one / prescale,
        a_zero / prescale,
        b_one / prescale,
        b_zero / prescale,
    )

    raw = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    raw[2, 0] = u * np.sqrt(2.0) * a_one**2
    raw[0, 2] = v * np.sqrt(2.0) * b_one**2
    raw[1, 0] = u * 2.0 * a_one * a_zero + w * a_one * b_zero
    raw[0, 1] = v * 2.0 * b_one * b_zero + w * a_zero * b_one
    raw[1, 1] = w * a_one * b_one
    raw[0, 0] = u * a_zero**2 + v * b_zero**2 + w * a_zero * b_zero

    # the same sums with every term taken in magnitude
    u, v, w = abs(u), abs(v), abs(w)
    a_one, a_zero, b_one, b_zero = abs(a_one), abs(a_zero), abs(b_one), abs(b_zero)
    terms = np.array(
        [
            u * a_zero**2 + v * b_zero**2 + w * a_zero * b_zero,
            2.0 * u * a_one * a_zero + w * a_one * b_zero,
            2.0 * v * b_one * b_zero + w * a_zero * b_one,
            w * a_one * b_one,
            np.sqrt(2.0) * u * a_one**2,
            np.sqrt(2.0) * v * b_one**2,
        ]
    )
    if np.max(np.abs(raw)) <= CANCELLATION_TOL * np.max(terms):
        raise ZeroCoincidenceError(
            f"Coincidence amplitudes cancel to {np.max(np.abs(raw)):.3g} "
            f"against terms of size {np.max(terms):.3g}"
        )

    return _normalized_state(raw, n_max, log_prefactor=2.0 * math.log(prescale))


def coincidence_weight(state: JointState) -> float:
    """Squared norm of the unnormalized conditional state (coincidence rate proxy).

    Returns inf once the physical weight leaves the float range.
    """
    with np.errstate(over="ignore"):
        return float(np.exp(state.log_weight))


def vacuum_coefficient(
    coeffs_a: ScatterCoeffs,
    coeffs_b: ScatterCoeffs,
    probe_a: ProbeField,
    probe_b: ProbeField,
    bs: BeamSplitter,
    pair_sign: PairSign = "expansion",
) -> complex:
    """Unnormalized amplitude C_0 of |0,0⟩."""
    u, v, w = _branch_amplitudes(bs, pair_sign)
    a_zero = coeffs_a.a_c * probe_a.amplitude
    b_zero = coeffs_b.a_c * probe_b.amplitude
    return complex(u * a_zero**2 + v * b_zero**2 + w * a_zero * b_zero)


def cancelling_probe_phase(
    coeffs_a: ScatterCoeffs,
    coeffs_b: ScatterCoeffs,
    probe_b: ProbeField,
    bs: BeamSplitter,
) -> float:
    """Phase θ_α of probe A that removes the |0,0⟩ component at a balanced splitter.

    Full cancellation also needs |a_c α| = |b_c β|, which holds for identical
    condensates probed with equal photon numbers.
    """
    if not bs.is_balanced:
        raise ValueError(
            "Probe-phase cancellation of |0,0> needs a 50:50 beam splitter"
        )
    u, v, _ = _branch_amplitudes(bs, "expansion")
    if coeffs_a.a_c == 0:
        raise ValueError("a_c vanishes; the probe phase of A has no effect on C_0")
    target = -v * (coeffs_b.a_c * probe_b.amplitude) ** 2 / (u * coeffs_a.a_c**2)
    return float(np.angle(target) / 2.0)


def brute_force_oracle(
    coeffs_a: ScatterCoeffs,
    coeffs_b: ScatterCoeffs,
    probe_a: ProbeField,
    probe_b: ProbeField,
    bs: BeamSplitter,
    photon_cutoff: int = 10,
    n_max: int = 2,
) -> JointState:
    """Conditional state from explicit truncated operators.

    Space: (α_q, α_{-q}) of A ⊗ (β_q, β_{-q}) of B ⊗ probe a ⊗ probe b. The
    -q modes only need vacuum and one excitation; the probes are truncated
    at `photon_cutoff` photons.
    """
    if photon_cutoff < MIN_PHOTON_CUTOFF:
        raise ValueError(
            f"photon_cutoff must be >= {MIN_PHOTON_CUTOFF}, got {photon_cutoff}"
        )
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")

    for label, probe in (("alpha", probe_a), ("beta", probe_b)):
        # C_D2 C_D1 removes up to two photons from the truncated coherent state
        tail = float(scipy.stats.poisson.sf(photon_cutoff - 2, probe.n_p))
        if tail > TRUNCATION_WARN_LEVEL:
            logger.warning(
                f"Coherent state {label}={probe.amplitude:.3g} "
                f"truncated at {photon_cutoff} "
                f"photons loses {tail:.2g} of its weight"
            )

    q_dim, f_dim = n_max + 1, photon_cutoff + 1
    dims = [q_dim, 2, q_dim, 2, f_dim, f_dim]

    def embed(op: qutip.Qobj, slot: int) -> qutip.Qobj:
        ops = [qutip.qeye(d) for d in dims]
        ops[slot] = op
        return qutip.tensor(ops)

    def probe_operator(coeffs: ScatterCoeffs, offset: int) -> qutip.Qobj:
        return (
            complex(coeffs.a_q) * embed(qutip.destroy(q_dim), offset).dag()
            + complex(coeffs.a_minus_q) * embed(qutip.destroy(2), offset + 1)
            + complex(coeffs.a_c) * embed(qutip.destroy(f_dim), 4 + offset // 2)
        )

    c_a = probe_operator(coeffs_a, 0)
    c_b = probe_operator(coeffs_b, 2)
    c_d1 = complex(bs.r) * c_a + complex(bs.t_prime) * c_b
    c_d2 = complex(bs.t) * c_a + complex(bs.r_prime) * c_b

    coh_a = qutip.coherent(f_dim, complex(probe_a.amplitude), method="analytic")
    coh_b = qutip.coherent(f_dim, complex(probe_b.amplitude), method="analytic")
    psi0 = qutip.tensor(
        qutip.basis(q_dim, 0),
        qutip.basis(2, 0),
        qutip.basis(q_dim, 0),
        qutip.basis(2, 0),
        coh_a,
        coh_b,
    )
    psi = c_d2 * (c_d1 * psi0)

    projected = np.einsum(
        "iajbkl,k,l->iajb",
        psi.full().reshape(dims),
        coh_a.full().ravel().conj(),
        coh_b.full().ravel().conj(),
    )
    return _normalized_state(projected[:, 0, :, 0], n_max)


def fix_global_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate the largest-magnitude amplitude onto the positive real axis."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    pivot = amplitudes.flat[np.argmax(np.abs(amplitudes))]
    if pivot == 0:
        return amplitudes.copy()
    return amplitudes * (np.conj(pivot) / abs(pivot))


def phase_aligned_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Max entrywise |a - e^{iχ} b| with χ taken from the overlap ⟨b|a⟩."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(a - phase * b)))
