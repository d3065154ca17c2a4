"""Bogoliubov mode functions in the dimensionless variable x = ħω_q/μ.

Energies are in units of the chemical potential here; everything downstream
works in units of the quasiparticle energy ω_q^B.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ModeParams", "BogoliubovMode", "dispersion", "eta_from_physical"]


@dataclass(frozen=True)
class ModeParams:
    x: float  # ħω_q/μ = (qξ)²

    def __post_init__(self):
        if not np.isfinite(self.x) or self.x <= 0:
            raise ValueError(
                f"x = ħω_q/μ must be positive, got {self.x} "
                "(quasiparticle energy would vanish or be imaginary)"
            )


@dataclass(frozen=True)
class BogoliubovMode:
    u_q: float
    v_q: float
    f_q: float  # u_q - v_q
    omega_b_over_mu: float  # ħω_q^B/μ


def dispersion(params: ModeParams | float) -> BogoliubovMode:
    """Bogoliubov amplitudes and quasiparticle energy for one momentum mode.

    Args:
        params (ModeParams | float): mode parameters, or the bare ratio x.

    Returns:
        BogoliubovMode: u_q, v_q, f_q and ħω_q^B/μ.
    """
    if not isinstance(params, ModeParams):
        params = ModeParams(float(params))
    x = params.x

    # sqrt((x+1)^2 - 1) and ((x+1)/ω - 1)/2 rearranged to avoid cancellation
    omega_b = np.sqrt(x * (x + 2.0))
    v_sq = 1.0 / (2.0 * omega_b * (x + 1.0 + omega_b))
    u_q = np.sqrt(1.0 + v_sq)
    v_q = np.sqrt(v_sq)

    return BogoliubovMode(
        u_q=float(u_q),
        v_q=float(v_q),
        f_q=float(1.0 / (u_q + v_q)),  # u - v, since u² - v² = 1
        omega_b_over_mu=float(omega_b),
    )


def eta_from_physical(
    n_atoms: int, rabi: float, mode: BogoliubovMode | float
) -> float:
    """Effective atom-field coupling η = √N f_q Ω.

    `mode` may be a BogoliubovMode or f_q itself.
    """
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    f_q = mode.f_q if isinstance(mode, BogoliubovMode) else float(mode)
    return float(np.sqrt(n_atoms) * f_q * rabi)
