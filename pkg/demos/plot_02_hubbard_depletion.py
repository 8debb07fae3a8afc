"""
Depletion in the on-site model
==============================

For contrast, the standard repulsion ``g sum_x n_x (n_x - 1)`` does not
annihilate the condensate. The ground state loses weight from the zero
momentum mode as ``g`` grows.
"""

import numpy as np

from lattice_bec import Lattice, ModelSpec, build_hamiltonian, condensate_fraction, lowest_k

lat = Lattice(4)
couplings = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0]
rows = []
for g in couplings:
    spec = ModelSpec(lat, N=2, g=g, family="onsite_hubbard")
    res = lowest_k(build_hamiltonian(spec), k=2)
    f0, _ = condensate_fraction(res.ground_vector, spec.basis(), lat)
    rows.append((g, res.eigenvalues[0], f0))

print("   g      E0        f0")
for g, e0, f0 in rows:
    print(f"{g:4.1f}  {e0:8.5f}  {f0:.6f}")

f0 = np.array([r[2] for r in rows])
print("strictly decreasing:", bool(np.all(np.diff(f0) < 0)))
