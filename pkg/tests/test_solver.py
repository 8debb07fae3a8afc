import numpy as np
import pytest
import scipy.sparse as sp

from lattice_bec import (
    ConvergenceError,
    FockBasis,
    Lattice,
    ModelSpec,
    build_hamiltonian,
    build_interaction_factored,
    build_kinetic,
    dense_all,
    ground_state,
    lowest_k,
    peaked_kernel,
)


def model(lengths, N, g, family="paper_factored"):
    return build_hamiltonian(ModelSpec(Lattice(lengths), N, g, family))


@pytest.mark.parametrize("method", ["lanczos", "dense"])
def test_bond_model_ground_energy_zero(method):
    res = ground_state(model((3,), 2, 1.0), method=method)
    assert abs(res.eigenvalues[0]) <= 1e-10
    assert res.converged.all()


def test_diagonal_matrix():
    res = ground_state(np.diag([3.0, 1.0, 2.0]), method="lanczos")
    assert res.eigenvalues[0] == pytest.approx(1.0, abs=1e-12)
    assert abs(res.ground_vector[1]) == pytest.approx(1.0, abs=1e-12)


def test_kinetic_ground_state_is_uniform():
    lat = Lattice(4)
    res = ground_state(build_kinetic(lat, FockBasis(4, 1)), method="lanczos")
    assert abs(res.eigenvalues[0]) < 1e-12
    v = res.ground_vector * np.exp(-1j * np.angle(res.ground_vector[0]))
    np.testing.assert_allclose(v, np.full(4, 0.5), atol=1e-10)


def test_bond_model_gap(oracle_values):
    res = lowest_k(model((4,), 2, 1.0), 2, method="lanczos")
    expected = oracle_values["bond_model_L4_N2_g1_lowest"]
    assert abs(res.eigenvalues[0]) <= 1e-10
    assert res.eigenvalues[1] == pytest.approx(expected[1], abs=1e-10)
    assert res.gap > 1e-6


def test_full_spectrum_matches_dense():
    H = model((4,), 3, 0.7)
    res = lowest_k(H, H.dimension, method="lanczos")
    np.testing.assert_allclose(res.eigenvalues, np.linalg.eigvalsh(H.toarray()), atol=1e-10)


def test_factored_interaction_nonnegative():
    lat = Lattice(4)
    H = build_interaction_factored(lat, FockBasis(4, 3), 1.0)
    res = lowest_k(H, H.dimension, method="lanczos")
    assert res.eigenvalues.min() >= -1e-10


MODELS = [
    ((4,), 1, 0.0, "none"),  # degenerate +-k pairs
    ((3, 3), 1, 0.0, "none"),  # fourfold degeneracy
    ((5,), 3, 1.0, "paper_factored"),
    ((3, 3), 2, 0.5, "paper_direct"),
    ((6,), 3, 5.0, "paper_factored"),
    ((4,), 2, 2.0, "onsite_hubbard"),
]


@pytest.mark.parametrize("lengths,N,g,family", MODELS)
def test_lanczos_matches_dense(lengths, N, g, family):
    H = build_hamiltonian(ModelSpec(Lattice(lengths), N, g, family))
    k = min(5, H.dimension)
    lz = lowest_k(H, k, method="lanczos")
    dn = dense_all(H)
    np.testing.assert_allclose(lz.eigenvalues, dn.eigenvalues[:k], atol=1e-8)
    V = lz.eigenvectors
    np.testing.assert_allclose(np.linalg.norm(V, axis=0), 1, atol=1e-12)
    np.testing.assert_allclose(V.conj().T @ V, np.eye(k), atol=1e-8)
    assert np.all(lz.residuals <= 1e-10 * np.maximum(1, np.abs(lz.eigenvalues)))


def test_kernel_model_lanczos():
    lat = Lattice(4)
    H = build_hamiltonian(ModelSpec(lat, 3, 1.0, "kernel", kernel=peaked_kernel(lat, 8.0)))
    np.testing.assert_allclose(
        lowest_k(H, 5, method="lanczos").eigenvalues, np.linalg.eigvalsh(H.toarray())[:5], atol=1e-8
    )


def test_variational_bound():
    H = model((5,), 2, 1.0, "onsite_hubbard")
    E0 = ground_state(H, method="lanczos").eigenvalues[0]
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = rng.standard_normal(H.dimension) + 1j * rng.standard_normal(H.dimension)
        assert np.vdot(v, H @ v).real / np.vdot(v, v).real >= E0 - 1e-10


def test_deterministic():
    H = model((5,), 3, 1.0)
    a = lowest_k(H, 3, method="lanczos")
    b = lowest_k(H, 3, method="lanczos")
    np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)


def test_accepts_sparse_and_dense_inputs():
    A = sp.diags([2.0, 0.5, 1.0, 4.0]).tocsr()
    assert ground_state(A, method="lanczos").eigenvalues[0] == pytest.approx(0.5)
    assert ground_state(A.toarray(), method="dense").eigenvalues[0] == pytest.approx(0.5)


def test_clusters():
    res = lowest_k(build_kinetic(Lattice(4), FockBasis(4, 1)), 4, method="lanczos")
    assert res.clusters() == [[0], [1, 2], [3]]


def test_bad_arguments():
    H = np.diag([1.0, 2.0])
    with pytest.raises(ValueError):
        lowest_k(H, 3)
    with pytest.raises(ValueError):
        lowest_k(H, 1, method="arnoldi")
    with pytest.raises(ValueError):
        dense_all(np.eye(5), threshold=4)


def test_non_convergence_is_reported():
    H = model((6,), 3, 1.0)
    with pytest.raises(ConvergenceError) as info:
        lowest_k(H, 2, tol=1e-30, method="lanczos")
    assert info.value.result is not None
    res = lowest_k(H, 2, tol=1e-30, method="lanczos", raise_on_failure=False)
    assert not res.converged.all()


def test_matrix_free_operator():
    lat = Lattice(5)
    spec = ModelSpec(lat, 3, 1.0)
    Hs = build_hamiltonian(spec)
    Hf = build_hamiltonian(spec, matrix_free=True)
    np.testing.assert_allclose(
        lowest_k(Hf, 3, method="lanczos").eigenvalues, lowest_k(Hs, 3, method="lanczos").eigenvalues, atol=1e-10
    )
