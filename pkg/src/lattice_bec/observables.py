"""Condensation diagnostics: one-body density matrix, momentum occupations, energies."""

from __future__ import annotations

import numpy as np

from .fock import FockBasis
from .lattice import Lattice
from .operators import CREATE, ANNIHILATE, HermitianOperator, Monomial, _transitions

__all__ = ["obdm", "momentum_occupation", "momentum_occupations", "condensate_fraction", "energy"]


def obdm(vec: np.ndarray, basis: FockBasis, lattice: Lattice | None = None) -> np.ndarray:
    """One-body density matrix ``rho[x, y] = <a_x^+ a_y>``.

    ``vec`` is expected to be normalized.
    """
    if lattice is not None and lattice.num_sites != basis.num_sites:
        raise ValueError("basis and lattice disagree on the number of sites")
    vec = np.asarray(vec, dtype=complex)
    M = basis.num_sites
    rho = np.zeros((M, M), dtype=complex)
    for x in range(M):
        for y in range(M):
            m = Monomial(((x, CREATE), (y, ANNIHILATE)))
            for rows, cols, vals in _transitions([m], basis, basis):
                rho[x, y] += np.sum(np.conj(vec[rows]) * vals * vec[cols])
    return rho


def momentum_occupations(rho: np.ndarray, lattice: Lattice) -> np.ndarray:
    """``<n_k> = (1/|Lambda|) sum_{x,y} exp(i k.(x - y)) rho[x, y]`` for every grid momentum."""
    # F[k, x] = exp(-i k.x)/sqrt(M), so n_k = (F^* rho F^T)[k, k]
    F = lattice.fourier_matrix
    occ = np.einsum("kx,xy,ky->k", np.conj(F), rho, F)
    return occ.real


def momentum_occupation(vec: np.ndarray, k, basis: FockBasis, lattice: Lattice) -> float:
    """``<a_k^+ a_k>`` for a single momentum ``k``."""
    rho = obdm(vec, basis, lattice)
    phase = lattice.phases(k)
    return float(np.real(np.conj(phase) @ rho @ phase) / lattice.num_sites)


def condensate_fraction(vec: np.ndarray, basis: FockBasis, lattice: Lattice, rho: np.ndarray | None = None):
    """``(f0, f_PO)``: zero-momentum occupation over N and largest OBDM eigenvalue over N."""
    N = basis.num_particles
    if N == 0:
        raise ValueError("condensate fraction is undefined without particles")
    rho = obdm(vec, basis, lattice) if rho is None else rho
    f0 = float(np.real(rho.sum())) / lattice.num_sites / N
    f_po = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[-1]) / N
    return f0, f_po


def energy(H: HermitianOperator, vec: np.ndarray) -> float:
    """``<v|H|v>`` for a normalized ``v``."""
    vec = np.asarray(vec, dtype=complex)
    return float(np.real(np.vdot(vec, H @ vec)))
