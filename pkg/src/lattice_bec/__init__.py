"""Exact diagonalization of interacting lattice bosons with a fully condensed ground state.

The package enumerates the fixed-particle-number Fock space of a periodic
hypercubic lattice, builds Hamiltonians as sums of bosonic monomials, and
checks condensation of the ground state numerically.
"""

from .lattice import Lattice, bonds, dispersion, index_coords, momentum_grid, site_index
from .fock import FockBasis, dimension
from .operators import (
    HermitianError,
    HermitianOperator,
    Monomial,
    adjoint,
    annihilate,
    apply_monomial,
    apply_operator,
    assemble,
    create,
    number,
    product,
)
from .models import (
    FAMILIES,
    KernelSpec,
    ModelSpec,
    StencilSpec,
    build_general_cac,
    build_hamiltonian,
    build_interaction,
    build_interaction_direct,
    build_interaction_factored,
    build_kernel_interaction,
    build_kinetic,
    build_onsite_hubbard,
    nearest_neighbor_stencils,
    peaked_kernel,
)
from .bec import apply_mode_creation, bec_state, mode_annihilation_terms, mode_creation_terms, vacuum, verify_bond_annihilation
from .solver import ConvergenceError, EigenResult, dense_all, ground_state, lowest_k
from .observables import condensate_fraction, energy, momentum_occupation, momentum_occupations, obdm

__version__ = "0.1.0"
