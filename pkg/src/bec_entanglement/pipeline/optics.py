"""Lossless beam splitter and the two detector-mode operators.

Reflection adds a π/2 phase:

    t = |t|e^{iφ},  r = i|r|e^{iφ},  t' = |t|e^{iφ'},  r' = i|r|e^{iφ'}

Detector modes: C_D1 = r c_a + t' c_b, C_D2 = t c_a + r' c_b.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = [
    "BeamSplitter",
    "DetectorCouplings",
    "make_beam_splitter",
    "detector_couplings",
]

BALANCED_T_MAG = 1.0 / np.sqrt(2.0)

PairSign = Literal["expansion", "printed"]


@dataclass(frozen=True)
class BeamSplitter:
    t_mag: float
    phi: float
    phi_prime: float

    def __post_init__(self):
        if not (np.isfinite(self.t_mag) and 0.0 <= self.t_mag <= 1.0):
            raise ValueError(f"t_mag must lie in [0, 1], got {self.t_mag}")

    @property
    def is_balanced(self) -> bool:
        return abs(self.t_mag - BALANCED_T_MAG) <= 1e-15

    @property
    def r_mag(self) -> float:
        # exact |r| = |t| at 50:50 so the rr' + tt' branch cancels exactly
        if self.is_balanced:
            return self.t_mag
        return float(np.sqrt(1.0 - self.t_mag**2))

    @property
    def t(self) -> complex:
        return self.t_mag * np.exp(1j * self.phi)

    @property
    def t_prime(self) -> complex:
        return self.t_mag * np.exp(1j * self.phi_prime)

    @property
    def r(self) -> complex:
        return 1j * self.r_mag * np.exp(1j * self.phi)

    @property
    def r_prime(self) -> complex:
        return 1j * self.r_mag * np.exp(1j * self.phi_prime)

    def pair_amplitude(self, sign_convention: PairSign = "expansion") -> complex:
        """Amplitude of the one-photon-from-each-condensate branch.

        "expansion" is rr' + tt' = e^{i(φ+φ')}(|t|² - |r|²); "printed" flips
        the sign.
        """
        amplitude = np.exp(1j * (self.phi + self.phi_prime)) * (
            self.t_mag**2 - self.r_mag**2
        )
        if sign_convention == "expansion":
            return complex(amplitude)
        if sign_convention == "printed":
            return complex(-amplitude)
        raise ValueError(f"Unknown sign convention: {sign_convention}")


@dataclass(frozen=True)
class DetectorCouplings:
    d1_a: complex
    d1_b: complex
    d2_a: complex
    d2_b: complex

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.d1_a, self.d1_b], [self.d2_a, self.d2_b]], dtype=complex)


def make_beam_splitter(
    t_mag: float, phi: float = 0.0, phi_prime: float = 0.0
) -> BeamSplitter:
    return BeamSplitter(t_mag=float(t_mag), phi=float(phi), phi_prime=float(phi_prime))


def detector_couplings(bs: BeamSplitter) -> DetectorCouplings:
    return DetectorCouplings(d1_a=bs.r, d1_b=bs.t_prime, d2_a=bs.t, d2_b=bs.r_prime)
