"""Hamiltonian families on periodic hypercubic lattices.

All builders return :class:`~lattice_bec.operators.HermitianOperator` objects
on a fixed-N basis; the ``*_terms`` helpers return the underlying monomial
sums so they can be applied across sectors or inspected.

Interaction sums run over ORDERED nearest-neighbor pairs: every bond
``{x, y}`` contributes the summand for ``(x, y)`` and for ``(y, x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .fock import FockBasis
from .lattice import Lattice
from .operators import (
    HermitianOperator,
    Monomial,
    adjoint,
    annihilate,
    assemble,
    create,
    identity,
    number,
    product,
    scale,
)

__all__ = [
    "FAMILIES",
    "A_CHOICES",
    "StencilSpec",
    "KernelSpec",
    "ModelSpec",
    "kinetic_terms",
    "interaction_direct_terms",
    "interaction_factored_terms",
    "general_cac_terms",
    "kernel_terms",
    "onsite_hubbard_terms",
    "build_kinetic",
    "build_interaction_direct",
    "build_interaction_factored",
    "build_general_cac",
    "build_kernel_interaction",
    "build_onsite_hubbard",
    "build_interaction",
    "build_hamiltonian",
    "nearest_neighbor_stencils",
    "peaked_kernel",
]

FAMILIES = ("paper_direct", "paper_factored", "general_cac", "kernel", "onsite_hubbard", "none")
A_CHOICES = ("number_operator", "identity")


@dataclass(frozen=True)
class StencilSpec:
    """Local combination ``C_x = sum_j alpha_j a_{x + offset_j}`` with the positive operator ``A_x``.

    ``A_x`` is either the number operator on site ``x`` or the identity.
    """

    offsets: tuple[tuple[int, ...], ...]
    coefficients: tuple[complex, ...]
    a_op: str = "number_operator"

    def __post_init__(self):
        offsets = tuple(tuple(int(c) for c in np.atleast_1d(o)) for o in self.offsets)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "coefficients", tuple(complex(a) for a in self.coefficients))
        if len(offsets) != len(self.coefficients) or not offsets:
            raise ValueError("stencil needs one coefficient per offset and at least one entry")
        if len({len(o) for o in offsets}) != 1:
            raise ValueError("stencil offsets must all have the same dimension")
        if self.a_op not in A_CHOICES:
            raise ValueError(f"a_op must be one of {A_CHOICES}, got {self.a_op!r}")

    @property
    def coefficient_sum(self) -> complex:
        return sum(self.coefficients)

    @property
    def zero_sum(self) -> bool:
        return abs(self.coefficient_sum) <= 1e-13


@dataclass(frozen=True)
class KernelSpec:
    """Momentum-space profile ``K_hat`` given on the lattice momentum grid (grid order)."""

    values: tuple[complex, ...]

    def __init__(self, values):
        if isinstance(values, Mapping):
            n = max(values) + 1
            values = [values.get(j, 0) for j in range(n)]
        object.__setattr__(self, "values", tuple(complex(v) for v in np.ravel(values)))

    @property
    def at_zero(self) -> complex:
        return self.values[0]

    def real_space(self, lattice: Lattice) -> np.ndarray:
        """``K(r) = (1/|Lambda|) sum_k K_hat(k) exp(i k.r)`` for every displacement site ``r``."""
        if len(self.values) != lattice.num_sites:
            raise ValueError(f"kernel has {len(self.values)} values, lattice has {lattice.num_sites} momenta")
        phase = np.exp(1j * lattice.coords @ lattice.momenta.T)  # [r, k]
        return phase @ np.asarray(self.values) / lattice.num_sites


@dataclass(frozen=True)
class ModelSpec:
    """Declarative Hamiltonian: kinetic term plus one interaction family.

    ``stencils`` is used by ``general_cac`` and ``kernel`` by ``kernel``.
    """

    lattice: Lattice
    N: int
    g: float = 0.0
    family: str = "paper_factored"
    stencils: tuple[StencilSpec, ...] = field(default=())
    kernel: KernelSpec | None = None
    kinetic: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown interaction family {self.family!r}; choose from {FAMILIES}")
        if not self.g >= 0:
            raise ValueError(f"coupling must be non-negative, got g={self.g}")
        if self.N < 0:
            raise ValueError("particle number must be non-negative")
        if isinstance(self.stencils, StencilSpec):
            object.__setattr__(self, "stencils", (self.stencils,))
        if self.family == "general_cac" and not self.stencils:
            raise ValueError("general_cac needs at least one stencil")
        if self.family == "kernel" and self.kernel is None:
            raise ValueError("kernel family needs a KernelSpec")

    @property
    def annihilates_condensate(self) -> bool:
        """True when every interaction summand kills the uniform condensate."""
        if self.family in ("paper_direct", "paper_factored", "none"):
            return True
        if self.family == "general_cac":
            return all(s.zero_sum for s in self.stencils)
        if self.family == "kernel":
            return self.kernel.at_zero == 0
        return self.g == 0

    def basis(self) -> FockBasis:
        return FockBasis(self.lattice.num_sites, self.N)


def _ordered_pairs(lattice: Lattice):
    for x, y in lattice.bonds:
        yield x, y
        yield y, x


def kinetic_terms(lattice: Lattice) -> list[Monomial]:
    """Hopping operator normalized so that ``H_0 = sum_k E_k n_k`` with ``E_k = sum_i (1 - cos k_i)``.

    This is ``(1/2) sum_bonds (a_x^+ - a_y^+)(a_x - a_y)``.
    """
    out: list[Monomial] = []
    for x, y in lattice.bonds:
        diff = annihilate(x) + annihilate(y, -1.0)
        out += scale(product(adjoint(diff), diff), 0.5)
    return out


def interaction_direct_terms(lattice: Lattice) -> list[Monomial]:
    """``sum_(x,y) n_x(n_x - 1) + n_x n_y - a_x^+ n_x a_y - a_y^+ n_x a_x`` over ordered pairs."""
    out: list[Monomial] = []
    for x, y in _ordered_pairs(lattice):
        out += product(number(x), number(x)) + number(x, -1.0)
        out += product(number(x), number(y))
        out += product(create(x, -1.0), number(x), annihilate(y))
        out += product(create(y, -1.0), number(x), annihilate(x))
    return out


def interaction_factored_terms(lattice: Lattice) -> list[Monomial]:
    """``sum_(x,y) (a_x^+ - a_y^+) a_x^+ a_x (a_x - a_y)`` over ordered pairs."""
    out: list[Monomial] = []
    for x, y in _ordered_pairs(lattice):
        diff = annihilate(x) + annihilate(y, -1.0)
        out += product(adjoint(diff), number(x), diff)
    return out


def general_cac_terms(lattice: Lattice, stencil: StencilSpec) -> list[Monomial]:
    """``sum_x C_x^+ A_x C_x``; offsets wrap periodically."""
    if len(stencil.offsets[0]) != lattice.d:
        raise ValueError(f"stencil offsets have dimension {len(stencil.offsets[0])}, lattice has d={lattice.d}")
    out: list[Monomial] = []
    for x in range(lattice.num_sites):
        C: list[Monomial] = []
        for off, alpha in zip(stencil.offsets, stencil.coefficients):
            C += annihilate(lattice.translate(x, off), alpha)
        A = number(x) if stencil.a_op == "number_operator" else identity()
        out += product(adjoint(C), A, C)
    return out


def kernel_terms(lattice: Lattice, kernel: KernelSpec) -> list[Monomial]:
    """``sum_x C_x^+ n_x C_x`` with ``C_x = sum_y K(x - y) a_y``."""
    K = kernel.real_space(lattice)
    coords = lattice.coords
    out: list[Monomial] = []
    for x in range(lattice.num_sites):
        C: list[Monomial] = []
        for y in range(lattice.num_sites):
            C += annihilate(y, K[lattice.site_index(coords[x] - coords[y])])
        out += product(adjoint(C), number(x), C)
    return out


def onsite_hubbard_terms(lattice: Lattice) -> list[Monomial]:
    """``sum_x n_x (n_x - 1)`` written as ``a_x^+ a_x^+ a_x a_x``."""
    out: list[Monomial] = []
    for x in range(lattice.num_sites):
        out += product(create(x), create(x), annihilate(x), annihilate(x))
    return out


def _check_g(g: float) -> float:
    if not g >= 0:
        raise ValueError(f"coupling must be non-negative, got g={g}")
    return float(g)


def _check_basis(lattice: Lattice, basis: FockBasis):
    if basis.num_sites != lattice.num_sites:
        raise ValueError(f"basis has {basis.num_sites} sites, lattice has {lattice.num_sites}")


def build_kinetic(lattice: Lattice, basis: FockBasis, **kw) -> HermitianOperator:
    _check_basis(lattice, basis)
    return assemble(kinetic_terms(lattice), basis, **kw)


def build_interaction_direct(lattice: Lattice, basis: FockBasis, g: float, **kw) -> HermitianOperator:
    _check_basis(lattice, basis)
    return assemble(scale(interaction_direct_terms(lattice), _check_g(g)), basis, **kw)


def build_interaction_factored(lattice: Lattice, basis: FockBasis, g: float, **kw) -> HermitianOperator:
    _check_basis(lattice, basis)
    return assemble(scale(interaction_factored_terms(lattice), _check_g(g)), basis, **kw)


def build_general_cac(
    lattice: Lattice, basis: FockBasis, g: float, stencil: StencilSpec | Sequence[StencilSpec], **kw
) -> HermitianOperator:
    """``g sum_x C_x^+ A_x C_x``, summed over one or several stencils."""
    _check_basis(lattice, basis)
    stencils = (stencil,) if isinstance(stencil, StencilSpec) else tuple(stencil)
    terms: list[Monomial] = []
    for s in stencils:
        terms += general_cac_terms(lattice, s)
    return assemble(scale(terms, _check_g(g)), basis, **kw)


def build_kernel_interaction(lattice: Lattice, basis: FockBasis, g: float, kernel: KernelSpec, **kw) -> HermitianOperator:
    _check_basis(lattice, basis)
    return assemble(scale(kernel_terms(lattice, kernel), _check_g(g)), basis, **kw)


def build_onsite_hubbard(basis: FockBasis, g: float, **kw) -> HermitianOperator:
    """``g sum_x n_x (n_x - 1)``; diagonal in the occupation basis."""
    g = _check_g(g)
    n = basis.states
    diag = g * np.sum(n * (n - 1), axis=1).astype(complex)
    mat = sp.diags(diag, format="csr")
    mat.eliminate_zeros()
    return HermitianOperator(basis.dimension, matrix=mat)


def interaction_terms(spec: ModelSpec) -> list[Monomial]:
    """Monomials of ``g * H_int`` for ``spec``."""
    lat, fam = spec.lattice, spec.family
    if fam == "paper_direct":
        terms = interaction_direct_terms(lat)
    elif fam == "paper_factored":
        terms = interaction_factored_terms(lat)
    elif fam == "general_cac":
        terms = [m for s in spec.stencils for m in general_cac_terms(lat, s)]
    elif fam == "kernel":
        terms = kernel_terms(lat, spec.kernel)
    elif fam == "onsite_hubbard":
        terms = onsite_hubbard_terms(lat)
    else:
        terms = []
    return scale(terms, spec.g)


def build_interaction(spec: ModelSpec, basis: FockBasis, **kw) -> HermitianOperator:
    _check_basis(spec.lattice, basis)
    if spec.family == "onsite_hubbard" and not kw.get("matrix_free"):
        return build_onsite_hubbard(basis, spec.g)
    return assemble(interaction_terms(spec), basis, **kw)


def build_hamiltonian(spec: ModelSpec, basis: FockBasis | None = None, **kw) -> HermitianOperator:
    """Kinetic term (if enabled) plus the selected interaction."""
    basis = spec.basis() if basis is None else basis
    _check_basis(spec.lattice, basis)
    H = build_interaction(spec, basis, **kw)
    if spec.kinetic:
        H = build_kinetic(spec.lattice, basis, **kw) + H
    return H


def nearest_neighbor_stencils(lattice: Lattice, a_op: str = "number_operator") -> tuple[StencilSpec, ...]:
    """Stencils ``a_x - a_{x +- e_i}`` whose C^+ A C sum reproduces the factored pair interaction."""
    out = []
    for axis in range(lattice.d):
        for sign in (1, -1):
            e = [0] * lattice.d
            e[axis] = sign
            out.append(StencilSpec(((0,) * lattice.d, tuple(e)), (1.0, -1.0), a_op))
    return tuple(out)


def peaked_kernel(lattice: Lattice, kappa: float, background: complex = 1.0) -> KernelSpec:
    """``K_hat(0) = kappa`` and ``K_hat(k) = background`` elsewhere."""
    vals = np.full(lattice.num_sites, background, dtype=complex)
    vals[0] = kappa
    return KernelSpec(vals)
