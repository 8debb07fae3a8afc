"""
Peaked kernels suppress condensation
====================================

The kernel family builds ``C_x = sum_y K(x - y) a_y`` from a momentum profile
``K_hat(k)``. With ``K_hat(0) = 0`` the condensate is again annihilated. Raising
the zero-momentum weight ``kappa`` penalizes the condensate instead.
"""

import numpy as np

from lattice_bec import (
    Lattice,
    ModelSpec,
    bec_state,
    build_hamiltonian,
    build_interaction,
    condensate_fraction,
    lowest_k,
    peaked_kernel,
)

lat = Lattice(4)

# kappa = 0: the interaction has the condensate in its kernel
spec = ModelSpec(lat, 2, 1.0, "kernel", kernel=peaked_kernel(lat, 0.0))
phi = bec_state(spec.basis(), lat)
print("||H_int BEC|| at kappa = 0:", np.linalg.norm(build_interaction(spec, spec.basis()) @ phi))

print("kappa     f0")
for kappa in (0.0, 1.0, 2.0, 4.0, 8.0, 16.0):
    spec = ModelSpec(lat, 2, 1.0, "kernel", kernel=peaked_kernel(lat, kappa))
    res = lowest_k(build_hamiltonian(spec), k=1)
    f0, _ = condensate_fraction(res.ground_vector, spec.basis(), lat)
    print(f"{kappa:5.1f}  {f0:.6f}")
