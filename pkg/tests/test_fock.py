import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvlevels import fock, symm
from conftest import random_hermitian, random_two_body


def test_basis_has_fifteen_determinants():
    dets = fock.build_two_hole_basis()
    assert len(dets) == 15
    assert len({d.occupied for d in dets}) == 15


def test_basis_contains_each_pair_once():
    pairs = [d.occupied for d in fock.build_two_hole_basis()]
    ex_up = fock.SpinOrbital("ex", "alpha").index
    ey_up = fock.SpinOrbital("ey", "alpha").index
    assert pairs.count((min(ex_up, ey_up), max(ex_up, ey_up))) == 1
    # no doubly occupied spin-orbital
    assert all(i != j for i, j in pairs)


def test_determinant_rejects_double_occupancy():
    with pytest.raises(ValueError):
        fock.Determinant((2, 2))


def test_identity_embeds_to_particle_number():
    h = fock.embed_one_body(np.eye(6))
    assert np.allclose(h.matrix, 2 * np.eye(15), atol=1e-14)


def test_number_operator_for_a_orbital():
    op = fock.OneBodyOperator(np.diag([0.0, 0.0, 1.0]), np.eye(2))
    h = fock.embed_one_body(op).matrix
    assert np.allclose(h, np.diag(np.diag(h)), atol=1e-14)
    for k, det in enumerate(fock.DETERMINANTS):
        count = sum(1 for i in det.occupied if fock.SPIN_ORBITALS[i].orbital == "a")
        assert h[k, k] == pytest.approx(count, abs=1e-14)


def test_axial_orbital_operator_triplet_structure(states):
    # o_z x s_z restricted to the excited triplet is diag(c, c, 0, 0, -c, -c)
    oz = np.zeros((3, 3), complex)
    oz[0, 1], oz[1, 0] = 1j, -1j
    sz = np.diag([0.5, -0.5])
    h = fock.change_basis(fock.embed_one_body(fock.OneBodyOperator(oz, sz)), states)
    sub = h.restrict(fock.EXCITED_TRIPLET).matrix
    c = sub[0, 0]
    assert np.allclose(sub, np.diag([c, c, 0, 0, -c, -c]), atol=1e-12)
    assert abs(c) > 0.1


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_one_body_embedding_hermitian(seed):
    rng = np.random.default_rng(seed)
    h6 = random_hermitian(rng, 6)
    out = fock.embed_one_body(h6)
    assert out.hermiticity_defect < 1e-12


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_two_body_embedding_hermitian(seed):
    rng = np.random.default_rng(seed)
    out = fock.embed_two_body(random_two_body(rng))
    assert out.hermiticity_defect < 1e-12


def test_two_body_zero_tensor():
    out = fock.embed_two_body(fock.TwoBodyTensor(np.zeros((3, 3, 3, 3))))
    assert np.max(np.abs(out.matrix)) == 0.0


def test_two_body_diagonal_quadratic_forms(states):
    rng = np.random.default_rng(11)
    x, y = 0, 1
    for _ in range(10):
        t = random_two_body(rng, dim=2)
        c = t.entries
        h = fock.change_basis(fock.embed_two_body(t), states).matrix
        scale = max(np.max(np.abs(c)), 1.0)
        expect = {
            "3A2+": (c[x, y, x, y] - c[x, y, y, x] - c[y, x, x, y] + c[y, x, y, x]) / 2,
            "1A1(e2)": (c[x, x, x, x] + c[x, x, y, y] + c[y, y, x, x] + c[y, y, y, y]) / 2,
            "1E1": (c[x, x, x, x] - c[x, x, y, y] - c[y, y, x, x] + c[y, y, y, y]) / 2,
            "1E2": (c[x, y, x, y] + c[x, y, y, x] + c[y, x, x, y] + c[y, x, y, x]) / 2,
        }
        for name, val in expect.items():
            i = fock.state_index(name)
            assert abs(h[i, i] - val) < 1e-12 * scale


def test_tensor_symmetry_violation_rejected():
    c = np.zeros((3, 3, 3, 3), dtype=complex)
    c[0, 0, 1, 1] = 1.0          # hermitian partner (1,1,0,0) missing
    with pytest.raises(ValueError):
        fock.TwoBodyTensor(c)
    c = np.zeros((3, 3, 3, 3), dtype=complex)
    c[0, 1, 0, 1] = 1.0
    c[1, 0, 1, 0] = 2.0          # breaks exchange symmetry
    with pytest.raises(ValueError):
        fock.TwoBodyTensor(c)


def test_states_orthonormal(states):
    s = fock.state_matrix(states)
    assert np.max(np.abs(s.conj().T @ s - np.eye(15))) < 1e-12


def test_ground_triplet_ms_minus_is_single_determinant(states):
    amps = states[fock.state_index("3A2-")].amplitudes
    nz = np.nonzero(np.abs(amps) > 1e-14)[0]
    assert len(nz) == 1
    i, j = fock.DETERMINANTS[nz[0]].occupied
    occ = {(fock.SPIN_ORBITALS[i].orbital, fock.SPIN_ORBITALS[i].spin),
           (fock.SPIN_ORBITALS[j].orbital, fock.SPIN_ORBITALS[j].spin)}
    assert occ == {("ex", "beta"), ("ey", "beta")}


def test_excited_a2_composition(states):
    # A2 is an equal-weight superposition of the circular pair states
    amps = states[fock.state_index("A2")].amplitudes
    nz = np.abs(amps) > 1e-14
    assert nz.sum() == 4
    assert np.allclose(np.abs(amps[nz]), 0.5, atol=1e-12)


def test_states_transform_per_labeled_irrep(group, states):
    pairs = [("3A2-", "3A2+"), ("1E1", "1E2"), ("E1", "E2"),
             ("Ey", "Ex"), ("1Ex", "1Ey")]
    for el in group.elements:
        u = fock.two_hole_action(group, el)
        for st_ in states:
            if st_.irrep in ("A1", "A2"):
                chi = group.irreps[st_.irrep].characters[el.class_id]
                assert np.max(np.abs(u @ st_.amplitudes - chi * st_.amplitudes)) < 1e-10
        chi_e = group.irreps["E"].characters[el.class_id]
        for a, b in pairs:
            va = states[fock.state_index(a)].amplitudes
            vb = states[fock.state_index(b)].amplitudes
            m = np.array([[np.vdot(va, u @ va), np.vdot(va, u @ vb)],
                          [np.vdot(vb, u @ va), np.vdot(vb, u @ vb)]])
            assert np.linalg.norm(u @ va - (m[0, 0] * va + m[1, 0] * vb)) < 1e-10
            assert np.linalg.norm(u @ vb - (m[0, 1] * va + m[1, 1] * vb)) < 1e-10
            assert abs(np.trace(m) - chi_e) < 1e-10


def test_two_hole_action_is_single_valued(group):
    for name in ("E", "C3+", "sv2"):
        plain = fock.two_hole_action(group, group.element(name))
        barred = fock.two_hole_action(group, group.element("bar" + name))
        assert np.max(np.abs(plain - barred)) < 1e-14


def test_c3v_invariant_tensor_e_expectations_equal(states):
    rng = np.random.default_rng(21)
    for _ in range(10):
        raw = rng.normal(size=(2, 2, 2, 2))
        for perm in ((1, 0, 3, 2), (2, 1, 0, 3), (0, 3, 2, 1)):
            raw = (raw + np.transpose(raw, perm)) / 2
        t = fock.c3v_average_tensor(fock.TwoBodyTensor.from_e_block(raw))
        h = fock.change_basis(fock.embed_two_body(t), states).matrix
        i1, i2 = fock.state_index("1E1"), fock.state_index("1E2")
        ia, i0 = fock.state_index("1A1(e2)"), fock.state_index("3A2+")
        scale = max(np.max(np.abs(h)), 1e-30)
        assert abs(h[i1, i1] - h[i2, i2]) < 1e-10 * scale
        # the two singlet gaps coincide (the exchange energy)
        assert abs((h[ia, ia] - h[i2, i2]) - (h[i1, i1] - h[i0, i0])) < 1e-10 * scale


def test_change_basis_identity(states):
    out = fock.change_basis(np.eye(15, dtype=complex), states)
    assert np.allclose(out.matrix, np.eye(15), atol=1e-12)


def test_change_basis_preserves_eigenvalues(states):
    rng = np.random.default_rng(5)
    h = random_hermitian(rng, 15)
    out = fock.change_basis(h, states)
    assert np.allclose(np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(h),
                       atol=1e-10)


def test_change_basis_rejects_non_orthonormal(states):
    bad = list(states)
    doubled = fock.ManyBodyState("bad", "A1", None, "e2",
                                 2.0 * states[0].amplitudes)
    bad[0] = doubled
    with pytest.raises(ValueError):
        fock.change_basis(np.eye(15, dtype=complex), bad)


def test_hermitian_operator_blocks_by_irrep(states):
    # any group-invariant one-body operator is block diagonal across irreps;
    # the axial orbital operator is one
    oz = np.zeros((3, 3), complex)
    oz[0, 1], oz[1, 0] = 1j, -1j
    sz = np.diag([0.5, -0.5])
    h = fock.change_basis(fock.embed_one_body(fock.OneBodyOperator(oz, sz)),
                          states).matrix
    for i, si in enumerate(states):
        for j, sj in enumerate(states):
            if si.irrep != sj.irrep or si.partner != sj.partner:
                assert abs(h[i, j]) < 1e-12


def test_raw_state_vectors_are_integer(states):
    v, norms = fock.raw_state_vectors()
    ints = np.concatenate([v.real.ravel(), v.imag.ravel()])
    assert np.allclose(ints, np.round(ints), atol=0)
    t = fock._isometry()
    for k, st_ in enumerate(states):
        proj = t.T @ v[:, k] / norms[k]
        assert np.max(np.abs(proj - st_.amplitudes)) < 1e-12
