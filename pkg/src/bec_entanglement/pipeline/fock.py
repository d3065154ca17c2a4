"""Truncated two-mode Fock-space algebra.

Basis index of |m, n⟩ is i = m·(n_max+1) + n, i.e. the row-major flattening
of the amplitude matrix C[m, n].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bec_entanglement.pipeline.projection import JointState

__all__ = [
    "DensityMatrix",
    "PTSpectrum",
    "JacobiConvergenceError",
    "density_matrix",
    "partial_transpose",
    "hermitian_eigh",
    "hermitian_eigenvalues",
    "pt_spectrum",
    "schmidt_coefficients",
    "pt_spectrum_oracle",
    "annihilation",
    "expectation",
    "random_state",
]

HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-10


class JacobiConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dim: int  # (n_max + 1)²
    entries: np.ndarray

    @property
    def n_max(self) -> int:
        return int(round(np.sqrt(self.dim))) - 1

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))


@dataclass(frozen=True)
class PTSpectrum:
    eigenvalues: np.ndarray  # ascending
    min_eig: float


def density_matrix(state: JointState) -> DensityMatrix:
    """|Φ⟩⟨Φ| of a normalized joint state."""
    if abs(state.norm - 1.0) > NORM_TOL:
        raise ValueError(
            f"density_matrix needs a normalized state, got norm {state.norm:.6g}"
        )
    vec = state.amplitudes.ravel()
    return DensityMatrix(dim=vec.size, entries=np.outer(vec, vec.conj()))


def partial_transpose(rho: DensityMatrix | np.ndarray, n_max: int) -> DensityMatrix:
    """Transpose on B: ⟨i,j|ρ^{T_B}|m,n⟩ = ⟨i,n|ρ|m,j⟩."""
    if isinstance(rho, DensityMatrix):
        rho = rho.entries
    entries = np.asarray(rho, dtype=complex)
    d = n_max + 1
    if entries.shape != (d * d, d * d):
        raise ValueError(
            f"Matrix of shape {entries.shape} does not match a two-mode space "
            f"with n_max={n_max}"
        )
    transposed = np.transpose(entries.reshape(d, d, d, d), (0, 3, 2, 1))
    transposed = transposed.reshape(d * d, d * d)
    return DensityMatrix(dim=d * d, entries=transposed)


def hermitian_eigh(
    matrix: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of a[p, q] with diag(1, e^{-iφ})
    and then applies the real symmetric Jacobi rotation to the 2×2 block.

    Args:
        matrix (np.ndarray): square Hermitian matrix.
        tol (float, optional): off-diagonal Frobenius norm at which to stop,
            relative to the Frobenius norm of the input.
        max_sweeps (int, optional): full passes over the upper triangle.

    Returns:
        tuple: ascending real eigenvalues and the unitary matrix whose columns
            are the matching eigenvectors.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {a.shape}")
    asymmetry = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if asymmetry > HERMITIAN_TOL:
        raise ValueError(f"Matrix is not Hermitian (max |A - A^H| = {asymmetry:.3g})")
    a = 0.5 * (a + a.conj().T)

    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)

    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol * scale:
            break
        if sweep == max_sweeps:
            raise JacobiConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3g})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0:
                    continue
                phase = np.exp(-1j * np.angle(apq))
                theta = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
                sign = 1.0 if theta >= 0 else -1.0
                t = sign / (abs(theta) + np.sqrt(theta**2 + 1.0))
                c = 1.0 / np.sqrt(1.0 + t**2)
                s = t * c
                rotation = np.array([[c, s], [-s * phase, c * phase]])

                pair = [p, q]
                a[:, pair] = a[:, pair] @ rotation
                a[pair, :] = rotation.conj().T @ a[pair, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, pair] = v[:, pair] @ rotation

    eigenvalues = np.diag(a).real
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def hermitian_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    return hermitian_eigh(matrix)[0]


def pt_spectrum(rho: DensityMatrix, n_max: int) -> PTSpectrum:
    eigenvalues = hermitian_eigenvalues(partial_transpose(rho, n_max).entries)
    return PTSpectrum(eigenvalues=eigenvalues, min_eig=float(eigenvalues[0]))


def schmidt_coefficients(state: JointState) -> np.ndarray:
    """Singular values of C, descending, from the eigenvalues of C†C."""
    c = state.amplitudes
    gram = c.conj().T @ c
    eigenvalues = np.clip(hermitian_eigenvalues(gram), 0.0, None)
    return np.sqrt(eigenvalues)[::-1]


def pt_spectrum_oracle(schmidt, dim: int | None = None) -> np.ndarray:
    """PT spectrum of a pure state from its Schmidt coefficients.

    {λ_i²} ∪ {±λ_iλ_j, i<j}, padded with zeros to `dim`, ascending.
    """
    lam = np.asarray(schmidt, dtype=float)
    k = lam.size
    dim = k * k if dim is None else dim
    if dim < k * k:
        raise ValueError(f"dim={dim} is smaller than the {k * k} predicted eigenvalues")
    i, j = np.triu_indices(k, 1)
    products = lam[i] * lam[j]
    values = np.concatenate([lam**2, products, -products, np.zeros(dim - k * k)])
    return np.sort(values)


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1).astype(complex)


def expectation(state: JointState, powers: tuple[int, int, int, int]) -> complex:
    """⟨A†^p A^q B†^r B^s⟩ for powers = (p, q, r, s).

    Normal ordering makes the truncated evaluation exact: lowering stays inside
    the space and any raising past n_max has no overlap with the state.
    """
    p, q, r, s = (int(x) for x in powers)
    if min(p, q, r, s) < 0:
        raise ValueError(f"Ladder powers must be non-negative, got {powers}")
    if max(p, q, r, s) > state.n_max:
        raise ValueError(
            f"Ladder powers {powers} exceed the truncation n_max={state.n_max}"
        )
    a = annihilation(state.n_max)
    a_dag = a.conj().T
    op_a = np.linalg.matrix_power(a_dag, p) @ np.linalg.matrix_power(a, q)
    op_b = np.linalg.matrix_power(a_dag, r) @ np.linalg.matrix_power(a, s)
    c = state.amplitudes
    return complex(np.vdot(c, op_a @ c @ op_b.T))


def random_state(
    rng: np.random.Generator, n_max: int = 2, support_bound: int | None = None
) -> JointState:
    """Haar-ish random pure state, optionally zero for m + n > support_bound."""
    shape = (n_max + 1, n_max + 1)
    amplitudes = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if support_bound is not None:
        m, n = np.indices(shape)
        amplitudes[m + n > support_bound] = 0.0
    return JointState.from_amplitudes(amplitudes, n_max)
