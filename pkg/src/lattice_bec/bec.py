"""The fully condensed zero-momentum state and momentum-mode ladder operators."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from .fock import FockBasis
from .lattice import Lattice
from .operators import Monomial, annihilate, apply_operator, create

__all__ = [
    "vacuum",
    "bec_state",
    "mode_creation_terms",
    "mode_annihilation_terms",
    "apply_mode_creation",
    "apply_mode_annihilation",
    "verify_bond_annihilation",
]


def _check(basis: FockBasis, lattice: Lattice):
    if basis.num_sites != lattice.num_sites:
        raise ValueError(f"basis has {basis.num_sites} sites, lattice has {lattice.num_sites}")


def vacuum(num_sites: int) -> np.ndarray:
    """The zero-particle state (a length-1 vector over ``FockBasis(num_sites, 0)``)."""
    return np.ones(1, dtype=complex)


def bec_state(basis: FockBasis, lattice: Lattice | None = None) -> np.ndarray:
    """All ``N`` bosons in the zero-momentum mode, ``(a_0^+)^N |0> / sqrt(N!)``.

    The amplitude of the occupation ``{n_x}`` is ``sqrt(N! / prod_x n_x!) / M^(N/2)``,
    evaluated with log-factorials so that large ``N`` does not overflow.
    """
    if lattice is not None:
        _check(basis, lattice)
    N, M = basis.num_particles, basis.num_sites
    n = basis.states
    log_amp = 0.5 * (gammaln(N + 1) - gammaln(n + 1).sum(axis=1)) - 0.5 * N * np.log(M)
    return np.exp(log_amp).astype(complex)


def mode_creation_terms(k, lattice: Lattice) -> list[Monomial]:
    """``a_k^+ = |Lambda|^(-1/2) sum_x exp(+i k.x) a_x^+``."""
    phase = lattice.phases(k) / np.sqrt(lattice.num_sites)
    return [m for x in range(lattice.num_sites) for m in create(x, phase[x])]


def mode_annihilation_terms(k, lattice: Lattice) -> list[Monomial]:
    """``a_k = |Lambda|^(-1/2) sum_x exp(-i k.x) a_x``."""
    phase = np.conj(lattice.phases(k)) / np.sqrt(lattice.num_sites)
    return [m for x in range(lattice.num_sites) for m in annihilate(x, phase[x])]


def apply_mode_creation(k, vec: np.ndarray, basis: FockBasis, lattice: Lattice, target: FockBasis | None = None) -> np.ndarray:
    """Apply ``a_k^+`` to ``vec`` over ``basis`` (N bosons); the result lives on the N+1 sector."""
    _check(basis, lattice)
    if target is None:
        target = FockBasis(basis.num_sites, basis.num_particles + 1)
    elif target.num_particles != basis.num_particles + 1 or target.num_sites != basis.num_sites:
        raise ValueError(f"target basis {target} is not the N+1 sector of {basis}")
    return apply_operator(mode_creation_terms(k, lattice), vec, basis, target)


def apply_mode_annihilation(k, vec: np.ndarray, basis: FockBasis, lattice: Lattice, target: FockBasis | None = None) -> np.ndarray:
    _check(basis, lattice)
    if basis.num_particles == 0:
        raise ValueError("cannot annihilate a boson from the vacuum sector")
    if target is None:
        target = FockBasis(basis.num_sites, basis.num_particles - 1)
    elif target.num_particles != basis.num_particles - 1 or target.num_sites != basis.num_sites:
        raise ValueError(f"target basis {target} is not the N-1 sector of {basis}")
    return apply_operator(mode_annihilation_terms(k, lattice), vec, basis, target)


def verify_bond_annihilation(state: np.ndarray, bond: tuple[int, int], basis: FockBasis) -> float:
    """Norm of ``(a_x - a_y)|state>``, computed exactly on the N-1 sector."""
    if basis.num_particles < 1:
        raise ValueError("need at least one boson")
    x, y = bond
    target = FockBasis(basis.num_sites, basis.num_particles - 1)
    out = apply_operator(annihilate(x) + annihilate(y, -1.0), state, basis, target)
    return float(np.linalg.norm(out))
