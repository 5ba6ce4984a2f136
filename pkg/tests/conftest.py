import numpy as np
import pytest

from nvlevels import fock, quad, symm


@pytest.fixture(scope="session")
def group():
    return symm.build_double_group_c3v()


@pytest.fixture(scope="session")
def states(group):
    return fock.symmetry_adapted_states(group)


@pytest.fixture(scope="session")
def default_orbitals():
    geom = quad.DefectGeometry.default()
    return quad.build_orbitals(geom, quad.GaussianOrbitalModel())


@pytest.fixture(scope="session")
def small_spec():
    # reduced sampling plan for unit tests; acceptance uses the full plan
    return quad.QuadratureSpec(seed=0, log2_points=13, scrambles=4)


@pytest.fixture(scope="session")
def small_coulomb(default_orbitals, small_spec):
    return quad.coulomb_tensor(default_orbitals, small_spec)


@pytest.fixture(scope="session")
def small_spin_spin(default_orbitals, small_spec):
    return quad.spin_spin_parameters(default_orbitals, small_spec)


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


def random_two_body(rng, dim=3):
    c = rng.normal(size=(dim,) * 4) + 1j * rng.normal(size=(dim,) * 4)
    c = (c + np.conj(np.transpose(c, (2, 3, 0, 1)))) / 2
    c = (c + np.transpose(c, (1, 0, 3, 2))) / 2
    if dim == 2:
        return fock.TwoBodyTensor.from_e_block(c)
    return fock.TwoBodyTensor(c)
