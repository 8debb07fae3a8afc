import numpy as np
import pytest

from lattice_bec import (
    FockBasis,
    Lattice,
    ModelSpec,
    bec_state,
    build_hamiltonian,
    build_interaction,
    build_kinetic,
    condensate_fraction,
    dense_all,
    dispersion,
    energy,
    momentum_occupation,
    momentum_occupations,
    obdm,
)
from lattice_bec.bec import apply_mode_annihilation, apply_mode_creation, vacuum
from oracles import DenseFock


def random_state(basis, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(basis.dimension) + 1j * rng.standard_normal(basis.dimension)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize("lengths,N", [((4,), 2), ((5,), 3), ((3, 3), 2)])
def test_obdm_of_condensate(lengths, N):
    lat = Lattice(lengths)
    basis = FockBasis(lat.num_sites, N)
    rho = obdm(bec_state(basis, lat), basis, lat)
    np.testing.assert_allclose(rho, np.full(rho.shape, N / lat.num_sites), atol=1e-13)
    ev = np.linalg.eigvalsh(rho)
    assert ev[-1] == pytest.approx(N, abs=1e-12)
    assert abs(ev[-2]) < 1e-10


def test_obdm_of_localized_state():
    basis = FockBasis(4, 3)
    e = np.zeros(basis.dimension, dtype=complex)
    e[0] = 1
    np.testing.assert_allclose(obdm(e, basis), np.diag([3, 0, 0, 0]))


@pytest.mark.parametrize("seed", range(5))
def test_obdm_invariants_random(seed):
    lat = Lattice((3, 3))
    basis = FockBasis(9, 2)
    v = random_state(basis, seed)
    rho = obdm(v, basis, lat)
    assert np.abs(rho - rho.conj().T).max() < 1e-12
    assert np.trace(rho).real == pytest.approx(2, abs=1e-10)
    assert np.linalg.eigvalsh(rho)[0] >= -1e-10
    occ = momentum_occupations(rho, lat)
    assert occ.sum() == pytest.approx(2, abs=1e-10)
    assert np.all(occ >= -1e-12) and np.all(occ <= 2 + 1e-12)


def test_momentum_occupation_condensate():
    lat = Lattice(5)
    basis = FockBasis(5, 3)
    phi = bec_state(basis, lat)
    assert momentum_occupation(phi, lat.momenta[0], basis, lat) == pytest.approx(3, abs=1e-12)
    for k in lat.momenta[1:]:
        assert abs(momentum_occupation(phi, k, basis, lat)) < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_f0_two_routes_agree(seed):
    """OBDM Fourier sum against the norm of a_0 |v> evaluated on the N-1 sector."""
    lat = Lattice(4)
    basis = FockBasis(4, 3)
    v = random_state(basis, seed)
    f0, fpo = condensate_fraction(v, basis, lat)
    down = apply_mode_annihilation(lat.momenta[0], v, basis, lat)
    assert f0 == pytest.approx(np.vdot(down, down).real / 3, abs=1e-12)
    assert fpo >= f0 - 1e-10
    assert 0 <= f0 <= 1 and 0 <= fpo <= 1 + 1e-12
    o = DenseFock((4,), 3)
    assert f0 == pytest.approx(o.f0(v), abs=1e-12)


def test_condensate_fraction_examples():
    lat = Lattice(5)
    basis = FockBasis(5, 2)
    assert condensate_fraction(bec_state(basis, lat), basis, lat) == pytest.approx((1, 1), abs=1e-12)
    e = np.zeros(basis.dimension, dtype=complex)
    e[0] = 1
    f0, fpo = condensate_fraction(e, basis, lat)
    assert f0 == pytest.approx(1 / 5)
    assert fpo == pytest.approx(1)
    with pytest.raises(ValueError):
        condensate_fraction(np.ones(1), FockBasis(5, 0), lat)


def test_hubbard_depletion_value(oracle_values):
    lat = Lattice(4)
    basis = FockBasis(4, 2)
    gs = dense_all(build_hamiltonian(ModelSpec(lat, 2, 1.0, "onsite_hubbard"))).ground_vector
    f0, _ = condensate_fraction(gs, basis, lat)
    assert f0 < 1
    assert f0 == pytest.approx(oracle_values["hubbard_L4_N2"]["1.0"]["f0"], abs=1e-10)


def test_energy_examples():
    lat = Lattice(4)
    basis = FockBasis(4, 2)
    H = build_hamiltonian(ModelSpec(lat, 2, 3.0), basis)
    assert abs(energy(H, bec_state(basis, lat))) < 1e-12
    b1 = FockBasis(4, 1)
    K = build_kinetic(lat, b1)
    for k in lat.momenta:
        wave = apply_mode_creation(k, vacuum(4), FockBasis(4, 0), lat, b1)
        assert energy(K, wave) == pytest.approx(dispersion(k), abs=1e-12)


def test_interaction_energy_of_ground_state_vanishes():
    spec = ModelSpec(Lattice(5), 3, 2.0)
    basis = spec.basis()
    gs = dense_all(build_hamiltonian(spec, basis)).ground_vector
    assert abs(energy(build_interaction(spec, basis), gs)) < 1e-10
