import numpy as np
import pytest

from lattice_bec import (
    FockBasis,
    KernelSpec,
    Lattice,
    ModelSpec,
    StencilSpec,
    bec_state,
    build_general_cac,
    build_hamiltonian,
    build_interaction_direct,
    build_interaction_factored,
    build_kernel_interaction,
    build_kinetic,
    build_onsite_hubbard,
    dispersion,
    nearest_neighbor_stencils,
    peaked_kernel,
)
from lattice_bec.models import general_cac_terms, interaction_terms
from lattice_bec.operators import Monomial, annihilate, assemble, number, product, adjoint
from oracles import DenseFock

SMALL = [((3,), 2), ((4,), 2), ((4,), 3), ((5,), 2), ((3, 3), 1)]


def setup(lengths, N):
    lat = Lattice(lengths)
    return lat, FockBasis(lat.num_sites, N)


def min_eig(H):
    return np.linalg.eigvalsh(H.toarray())[0]


def test_kinetic_single_particle_spectrum():
    lat, basis = setup((4,), 1)
    np.testing.assert_allclose(np.linalg.eigvalsh(build_kinetic(lat, basis).toarray()), [0, 1, 1, 2], atol=1e-13)
    np.testing.assert_allclose(sorted(dispersion(lat.momenta)), [0, 1, 1, 2], atol=1e-13)


def test_kinetic_vacuum():
    lat, basis = setup((4,), 0)
    np.testing.assert_array_equal(build_kinetic(lat, basis).toarray(), [[0]])


@pytest.mark.parametrize("lengths,N", SMALL)
def test_kinetic_psd_and_kills_condensate(lengths, N):
    lat, basis = setup(lengths, N)
    H = build_kinetic(lat, basis)
    assert min_eig(H) >= -1e-12
    assert np.linalg.norm(H @ bec_state(basis, lat)) < 1e-12


@pytest.mark.parametrize("lengths,N", SMALL)
def test_builders_match_kronecker_oracle(lengths, N):
    lat, basis = setup(lengths, N)
    o = DenseFock(lengths, N)
    np.testing.assert_allclose(build_kinetic(lat, basis).toarray(), o.project(o.kinetic()), atol=1e-13)
    np.testing.assert_allclose(
        build_interaction_direct(lat, basis, 1.0).toarray(), o.project(o.pair_interaction()), atol=1e-13
    )
    np.testing.assert_allclose(build_onsite_hubbard(basis, 1.0).toarray(), o.project(o.onsite()), atol=1e-13)


@pytest.mark.parametrize("lengths,N", SMALL + [((6,), 3), ((3, 3), 3)])
def test_direct_equals_factored(lengths, N):
    lat, basis = setup(lengths, N)
    D = build_interaction_direct(lat, basis, 1.0).toarray()
    F = build_interaction_factored(lat, basis, 1.0).toarray()
    assert np.abs(D - F).max() <= 1e-13


def test_factored_psd_and_annihilates():
    lat, basis = setup((4,), 3)
    H = build_interaction_factored(lat, basis, 1.0)
    assert min_eig(H) >= -1e-10
    assert np.linalg.norm(H @ bec_state(basis, lat)) < 1e-10


def test_zero_coupling_gives_zero():
    lat, basis = setup((4,), 2)
    assert build_interaction_direct(lat, basis, 0.0).toarray().any() == False  # noqa: E712
    with pytest.raises(ValueError):
        build_interaction_factored(lat, basis, -1.0)


def test_stencil_recovers_factored_summand():
    lat, basis = setup((4,), 3)
    x, y = 0, 1
    diff = annihilate(x) + annihilate(y, -1.0)
    one_pair = product(adjoint(diff), number(x), diff)
    single = StencilSpec(((0,), (1,)), (1.0, -1.0))
    cac = assemble(general_cac_terms(lat, single), basis).toarray()
    ref = 0
    for s in range(4):
        d = annihilate(s) + annihilate((s + 1) % 4, -1.0)
        ref = ref + assemble(product(adjoint(d), number(s), d), basis).toarray()
    np.testing.assert_allclose(cac, ref, atol=1e-13)
    # diagonal element on |3,0,0,0> is n_0(n_0 - 1)
    assert assemble(one_pair, basis).toarray()[0, 0] == pytest.approx(6.0)


@pytest.mark.parametrize("lengths,N", [((4,), 3), ((3, 3), 2), ((5,), 2)])
def test_nearest_neighbor_stencils_reproduce_pair_interaction(lengths, N):
    lat, basis = setup(lengths, N)
    cac = build_general_cac(lat, basis, 1.0, nearest_neighbor_stencils(lat)).toarray()
    ref = build_interaction_factored(lat, basis, 1.0).toarray()
    np.testing.assert_allclose(cac, ref, atol=1e-13)


ZERO_SUM = [
    StencilSpec(((0,), (1,)), (1.0, -1.0)),
    StencilSpec(((0,), (1,), (2,)), (1.0, -2.0, 1.0), "identity"),
    StencilSpec(((0,), (1,), (-1,)), (2.0, -1.0 + 0.5j, -1.0 - 0.5j)),
    StencilSpec(((0,), (3,)), (0.3j, -0.3j), "identity"),
]


@pytest.mark.parametrize("stencil", ZERO_SUM)
def test_zero_sum_stencils_annihilate_condensate(stencil):
    lat, basis = setup((5,), 3)
    assert stencil.zero_sum
    H = build_general_cac(lat, basis, 1.7, stencil)
    assert np.linalg.norm(H @ bec_state(basis, lat)) < 1e-10
    assert min_eig(H) >= -1e-10


def test_nonzero_sum_stencil_energy(oracle_values):
    fx = oracle_values["cac_nonzero_sum_L3_N3"]
    lat, basis = setup((3,), 3)
    phi = bec_state(basis, lat)
    for a_op in ("number_operator", "identity"):
        s = StencilSpec(fx["offsets"], fx["coefficients"], a_op)
        H = build_general_cac(lat, basis, 1.0, s)
        e = np.real(np.vdot(phi, H @ phi))
        assert e == pytest.approx(fx[a_op], abs=1e-12)
        assert e > 0
        S2, N, M = abs(s.coefficient_sum) ** 2, 3, 3
        closed = S2 * N * (N - 1) / M if a_op == "number_operator" else S2 * N
        assert e == pytest.approx(closed, abs=1e-12)


def test_stencil_validation():
    with pytest.raises(ValueError):
        StencilSpec(((0,), (1,)), (1.0,))
    with pytest.raises(ValueError):
        StencilSpec(((0,), (1,)), (1.0, -1.0), "kinetic")
    lat, basis = setup((3, 3), 2)
    with pytest.raises(ValueError):
        build_general_cac(lat, basis, 1.0, StencilSpec(((0,), (1,)), (1.0, -1.0)))


def test_kernel_real_space_delta():
    lat = Lattice((3, 4))
    K = KernelSpec(np.ones(12)).real_space(lat)
    expected = np.zeros(12)
    expected[0] = 1
    np.testing.assert_allclose(K, expected, atol=1e-15)


@pytest.mark.parametrize("lengths,N", [((4,), 2), ((3,), 3), ((3, 3), 2)])
def test_flat_kernel_is_onsite_hubbard(lengths, N):
    lat, basis = setup(lengths, N)
    A = build_kernel_interaction(lat, basis, 2.0, KernelSpec(np.ones(lat.num_sites))).toarray()
    B = build_onsite_hubbard(basis, 2.0).toarray()
    assert np.abs(A - B).max() <= 1e-12


def test_onsite_examples():
    basis = FockBasis(2, 2)
    H = build_onsite_hubbard(basis, 1.0).toarray()
    assert H[basis.rank((2, 0)), basis.rank((2, 0))] == 2
    assert H[basis.rank((1, 1)), basis.rank((1, 1))] == 0
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0


def test_kernel_without_zero_mode_annihilates():
    lat, basis = setup((4,), 3)
    khat = np.ones(4)
    khat[0] = 0
    H = build_kernel_interaction(lat, basis, 1.0, KernelSpec(khat))
    assert np.linalg.norm(H @ bec_state(basis, lat)) < 1e-10
    assert min_eig(H) >= -1e-10


def test_zero_mode_kernel_energy(oracle_values):
    lat, basis = setup((4,), 2)
    khat = np.zeros(4)
    khat[0] = 3.0
    H = build_kernel_interaction(lat, basis, 1.0, KernelSpec(khat))
    phi = bec_state(basis, lat)
    e = np.real(np.vdot(phi, H @ phi))
    assert e == pytest.approx(oracle_values["zero_mode_kernel_L4_N2_kappa3"], abs=1e-12)
    # g kappa^2 N (N - 1) / |Lambda|
    assert e == pytest.approx(9 * 2 * 1 / 4, abs=1e-12)


def test_kernel_matches_oracle():
    lat, basis = setup((4,), 2)
    khat = np.array([0.5, 1.0 + 0.3j, 2.0, -0.4j])
    A = build_kernel_interaction(lat, basis, 1.0, KernelSpec(khat)).toarray()
    o = DenseFock((4,), 2)
    np.testing.assert_allclose(A, o.project(o.kernel(khat)), atol=1e-12)
    assert np.abs(A - A.conj().T).max() < 1e-13
    assert np.linalg.eigvalsh(A)[0] >= -1e-10


def test_hamiltonian_condensate_energy_zero():
    lat, basis = setup((3, 3), 2)
    for g in (0.0, 0.5, 5.0):
        for fam in ("paper_direct", "paper_factored"):
            H = build_hamiltonian(ModelSpec(lat, 2, g, fam), basis)
            phi = bec_state(basis, lat)
            assert abs(np.vdot(phi, H @ phi)) < 1e-12


def test_zero_coupling_reduces_to_kinetic():
    lat, basis = setup((4,), 3)
    K = build_kinetic(lat, basis).toarray()
    for fam in ("paper_direct", "onsite_hubbard", "none"):
        np.testing.assert_array_equal(build_hamiltonian(ModelSpec(lat, 3, 0.0, fam), basis).toarray(), K)


def test_hubbard_ground_energy_positive(oracle_values):
    lat, basis = setup((4,), 2)
    E = np.linalg.eigvalsh(build_hamiltonian(ModelSpec(lat, 2, 1.0, "onsite_hubbard"), basis).toarray())
    assert E[0] > 0
    assert E[0] == pytest.approx(oracle_values["hubbard_L4_N2"]["1.0"]["E0"], abs=1e-12)


def test_all_terms_conserve_particle_number():
    lat = Lattice(4)
    specs = [
        ModelSpec(lat, 2, 1.0, "paper_direct"),
        ModelSpec(lat, 2, 1.0, "paper_factored"),
        ModelSpec(lat, 2, 1.0, "general_cac", stencils=ZERO_SUM[1]),
        ModelSpec(lat, 2, 1.0, "kernel", kernel=peaked_kernel(lat, 3.0)),
        ModelSpec(lat, 2, 1.0, "onsite_hubbard"),
    ]
    for spec in specs:
        assert all(isinstance(m, Monomial) and m.particle_change == 0 for m in interaction_terms(spec))


def test_model_spec_validation():
    lat = Lattice(4)
    with pytest.raises(ValueError):
        ModelSpec(lat, 2, -0.1)
    with pytest.raises(ValueError):
        ModelSpec(lat, 2, 1.0, "yukawa")
    with pytest.raises(ValueError):
        ModelSpec(lat, 2, 1.0, "general_cac")
    with pytest.raises(ValueError):
        ModelSpec(lat, 2, 1.0, "kernel")
    assert ModelSpec(lat, 2, 1.0, "kernel", kernel=peaked_kernel(lat, 2.0)).annihilates_condensate is False
    zero = KernelSpec([0, 1, 1, 1])
    assert ModelSpec(lat, 2, 1.0, "kernel", kernel=zero).annihilates_condensate
    assert not ModelSpec(lat, 2, 1.0, "onsite_hubbard").annihilates_condensate
