"""
Generalized C^+ A C interactions
================================

Any stencil ``C_x = sum_j alpha_j a_{x + r_j}`` with coefficients summing to
zero gives a positive interaction that still annihilates the condensate, on
a chain or a square lattice, with ``A = n_x`` or ``A = 1``.
"""

from lattice_bec import (
    Lattice,
    ModelSpec,
    StencilSpec,
    bec_state,
    build_hamiltonian,
    condensate_fraction,
    energy,
    lowest_k,
)

cases = [
    (Lattice(6), StencilSpec(((0,), (1,), (2,)), (1.0, -2.0, 1.0))),
    (Lattice(6), StencilSpec(((0,), (1,), (-1,)), (2.0, -1.0 + 0.5j, -1.0 - 0.5j), "identity")),
    (Lattice((3, 3)), StencilSpec(((0, 0), (1, 0), (0, 1)), (2.0, -1.0, -1.0))),
]
for lat, stencil in cases:
    spec = ModelSpec(lat, N=3, g=2.0, family="general_cac", stencils=(stencil,))
    res = lowest_k(build_hamiltonian(spec), k=2)
    f0, _ = condensate_fraction(res.ground_vector, spec.basis(), lat)
    print(f"L={lat.lengths} A={stencil.a_op:15s} E0={res.eigenvalues[0]: .1e} gap={res.gap:.4f} f0={f0:.10f}")

# a stencil whose coefficients do not cancel costs energy on the condensate
bad = StencilSpec(((0,), (1,)), (1.0, -0.5))
lat = Lattice(6)
spec = ModelSpec(lat, N=3, g=2.0, family="general_cac", stencils=(bad,))
phi = bec_state(spec.basis(), lat)
H = build_hamiltonian(spec)
S = bad.coefficient_sum
print("annihilates condensate:", spec.annihilates_condensate)
print(f"<BEC|H|BEC> = {energy(H, phi):.6f}, g|S|^2 N(N-1)/M = {2.0 * abs(S) ** 2 * 3 * 2 / 6:.6f}")
res = lowest_k(H, k=1)
print(f"f0 = {condensate_fraction(res.ground_vector, spec.basis(), lat)[0]:.6f}")
