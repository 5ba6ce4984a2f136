import numpy as np
import pytest

from nvlevels import fock, nvmodel, spectra

FS = nvmodel.FineStructureParams(lambda_z=5.5, lambda_xy=7.3,
                                 delta=0.5332, delta_prime=1.2504,
                                 delta_dprime=0.3458)
FS_BARE = nvmodel.FineStructureParams(5.5, 7.3, 0.0, 0.0, 0.0)


# -- polarization classification ---------------------------------------------------


def test_classify_pure_cases():
    assert spectra.classify_polarization(1.0, 1.0j) == "sigma+"
    assert spectra.classify_polarization(1.0, -1.0j) == "sigma-"
    assert spectra.classify_polarization(0.7, 0.0) == "x"
    assert spectra.classify_polarization(0.0, -0.2) == "y"
    assert spectra.classify_polarization(1.0, 1.0) == "linear"
    assert spectra.classify_polarization(1.0, 0.5j) == "elliptic"
    assert spectra.classify_polarization(0.0, 0.0) == "forbidden"


def test_polarization_report_degrees():
    assert spectra.polarization_report(1.0, 1.0j).circular_degree == pytest.approx(1.0)
    assert spectra.polarization_report(1.0, -1.0j).circular_degree == pytest.approx(-1.0)
    rep = spectra.polarization_report(1.0, 1.0)
    assert rep.circular_degree == pytest.approx(0.0, abs=1e-15)
    assert rep.linear_axis == pytest.approx(np.pi / 4)
    assert spectra.polarization_report(0.0, 1.0).linear_axis == pytest.approx(np.pi / 2)
    assert spectra.polarization_report(1.0, 0.0).linear_axis == pytest.approx(0.0)
    rep = spectra.polarization_report(0.0, 0.0)
    assert rep.intensity == 0.0 and rep.linear_axis is None


def test_degree_bounded():
    rng = np.random.default_rng(4)
    for _ in range(50):
        ax, ay = rng.normal(size=2) + 1j * rng.normal(size=2)
        rep = spectra.polarization_report(ax, ay)
        assert rep.circular_degree ** 2 <= 1 + 1e-12


# -- dipole operator and selection rules ----------------------------------------------


def test_orbital_dipole_has_two_elements():
    dx, dy = spectra._dipole_one_body()
    # only the a <-> ex (x) and a <-> ey (y) orbital elements are nonzero
    assert np.count_nonzero(dx) == 4 and np.count_nonzero(dy) == 4


def test_triplet_rules_match_reference():
    rules = spectra.selection_rules()
    assert rules.triplet[("3A2-", "A2")] == "sigma+"
    assert rules.triplet[("3A2+", "A2")] == "sigma-"
    assert rules.triplet[("3A20", "Ey")] == "x"
    assert ("3A20", "A1") not in rules.triplet


def test_spin_flip_forbidden_exactly():
    dx, dy = spectra.dipole_state_operators()
    i = fock.state_index("3A20")
    j = fock.state_index("A1")
    assert dx[i, j] == 0 and dy[i, j] == 0


def test_singlet_checks():
    chk = spectra.singlet_transition_ratio()
    assert chk.intra_config_zero
    assert chk.amplitude_1a1_1e1 == 0 and chk.amplitude_1a1_1e2 == 0
    assert abs(chk.cross_config_example) == pytest.approx(1.0)


def test_doubly_excited_rules():
    rules = spectra.selection_rules()
    assert rules.singlets_a2 == {("1Ex", "1A1(a2)"): "x", ("1Ey", "1A1(a2)"): "y"}


def test_allowed_set_is_exactly_the_three_families():
    rules = spectra.selection_rules()
    n_allowed = len(rules.triplet) + len(rules.singlets_e2) + len(rules.singlets_a2)
    assert n_allowed == 18
    assert len(rules.all_allowed) == 36    # both orderings of each pair


def test_total_intensity_strain_independent():
    rng = np.random.default_rng(8)
    for _ in range(20):
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        v /= np.linalg.norm(v)
        assert spectra.total_emission_intensity(v) == pytest.approx(1.0, abs=1e-10)


# -- branch tracking -----------------------------------------------------------------


def test_tracked_scan_trivial_slopes():
    fs0 = nvmodel.FineStructureParams(0, 0, 0, 0, 0)
    deltas = np.linspace(0, 10, 11)
    scan = spectra.strain_scan(fs0, "E1", deltas).scan
    slopes = (scan.energies[-1] - scan.energies[0]) / 10.0
    assert np.allclose(np.sort(slopes), [-1, -1, -1, 1, 1, 1], atol=1e-12)


def test_zero_grid_levels_and_gaps():
    h = (nvmodel.spin_orbit_excited_closed_form(FS.lambda_z).matrix
         + nvmodel.spin_spin_hamiltonian(FS.delta, FS.delta_prime,
                                         FS.delta_dprime).matrix)
    scan = spectra.diagonalize_tracked(
        [0.0], [fock.HamiltonianBlock(h, fock.EXCITED_TRIPLET)])
    e = dict(zip(scan.labels, scan.energies[0]))
    assert e["A2"] - e["A1"] == pytest.approx(4 * FS.delta_prime, abs=1e-10)
    # the spin-orbit part averages to zero inside the ms = +-1 quartet, so
    # the sector means sit 3*delta apart, up to the delta''-induced level
    # repulsion (of order delta''^2 / gap)
    ms1 = (e["A1"] + e["A2"] + e["E1"] + e["E2"]) / 4
    ms0 = (e["Ex"] + e["Ey"]) / 2
    assert ms1 - ms0 == pytest.approx(3 * FS.delta, abs=2 * FS.delta_dprime ** 2)


def test_high_strain_forms_two_clusters():
    deltas = np.linspace(0.0, 200.0, 41)
    scan = spectra.strain_scan(FS, "E1", deltas).scan
    e = np.sort(scan.energies[-1])
    assert np.max(np.abs(e[:3] + 200)) < 10     # lower orbital triplet
    assert np.max(np.abs(e[3:] - 200)) < 10     # upper orbital triplet


def test_branch_continuity_and_weyl():
    scan = spectra.strain_scan(FS, "E1", np.linspace(0, 20, 81)).scan
    assert scan.crossings == ()
    assert scan.weyl_margin >= -1e-12


def test_tracking_follows_vectors_through_crossings():
    # a sharp level crossing with a weak coupling: the tracker follows the
    # eigenvectors, so branch energies swap without any ambiguity flag
    h1 = np.array([[-1.0, 0.001], [0.001, 1.0]], dtype=complex)
    h2 = np.array([[1.0, 0.001], [0.001, -1.0]], dtype=complex)
    blocks = [fock.HamiltonianBlock(h1, ("u", "v")),
              fock.HamiltonianBlock(h2, ("u", "v"))]
    scan = spectra.diagonalize_tracked([0.0, 1.0], blocks)
    assert scan.crossings == ()
    assert scan.energies[0][0] < 0 < scan.energies[1][0]


def test_ambiguous_tracking_flagged_not_fatal():
    # the second point's eigenbasis is the 5-dim Fourier frame: every
    # overlap with the first point's coordinate eigenvectors is 5^-1/2 < 0.5
    n = 5
    f = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / np.sqrt(n)
    h1 = np.diag(np.arange(1.0, n + 1)).astype(complex)
    h2 = f @ h1 @ f.conj().T
    labels = tuple(f"s{k}" for k in range(n))
    blocks = [fock.HamiltonianBlock(h1, labels),
              fock.HamiltonianBlock(h2, labels)]
    scan = spectra.diagonalize_tracked([0.0, 1.0], blocks)
    assert scan.crossings
    assert scan.weyl_margin >= -1e-12


def test_tracking_requires_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError):
        spectra.diagonalize_tracked([0.0], [bad])


# -- polarization vs strain -------------------------------------------------------------


def test_polarization_circular_at_zero():
    scan = spectra.strain_scan(FS, "E1", np.linspace(0, 20, 21))
    assert scan.a2_to_minus[0].circular_degree == pytest.approx(1.0, abs=1e-12)
    assert scan.a2_to_plus[0].circular_degree == pytest.approx(-1.0, abs=1e-12)


def test_polarization_decays_monotonically():
    scan = spectra.strain_scan(FS, "E1", np.linspace(0, 20, 81))
    degs = [r.circular_degree for r in scan.a2_to_minus]
    assert all(degs[k + 1] <= degs[k] + 1e-12 for k in range(len(degs) - 1))
    assert degs[-1] < 0.2


def test_linear_axis_fixed_along_scan():
    deltas = np.linspace(2.0, 20.0, 10)
    scan = spectra.strain_scan(FS_BARE, "E1", deltas)
    axes = [r.linear_axis for r in scan.a2_to_minus]
    assert np.ptp(axes) < 1e-9


def test_axis_rotation_between_channels_is_quarter_turn():
    # the two transverse channels are quadrupole partners: their eigenaxes
    # differ by 45 degrees, and so do the emitted polarization axes
    from nvlevels import validate
    rot = validate.strain_axis_rotation_measured(FS_BARE, 20.0)
    assert rot == pytest.approx(np.pi / 4, abs=1e-6)


def test_polarization_vs_strain_other_branch():
    # the E-pair excited states carry the opposite circular character
    minus, plus = spectra.polarization_vs_strain(FS, "E1",
                                                 np.linspace(0, 20, 5), "E1")
    assert minus[0].circular_degree == pytest.approx(-1.0, abs=1e-12)
    assert plus[0].circular_degree == pytest.approx(1.0, abs=1e-12)
    a2_minus, _ = spectra.polarization_vs_strain(FS, "E1",
                                                 np.linspace(0, 20, 5), "A2")
    assert a2_minus[0].circular_degree == pytest.approx(1.0, abs=1e-12)


def test_polarization_opposite_for_circular_pair():
    scan = spectra.strain_scan(FS, "E1", np.linspace(0, 20, 11))
    for k in range(11):
        assert scan.a2_to_plus[k].circular_degree == pytest.approx(
            -scan.a2_to_minus[k].circular_degree, abs=1e-9)


# -- Stark scans -------------------------------------------------------------------------


def test_stark_axial_linear_any_prestrain():
    piezo = nvmodel.PiezoParams()
    fields = np.linspace(0, 1, 11)
    for pre in (nvmodel.StrainCoefficients(),
                nvmodel.StrainCoefficients(e1_a=2.0, e2_a=-1.0)):
        scan = spectra.stark_scan(FS_BARE, piezo, "z", fields, prestrain=pre)
        t = scan.transitions - scan.transitions[0]
        slope = piezo.g * (piezo.d - piezo.b)
        assert np.max(np.abs(t - np.outer(fields, np.full(6, slope)))) < 1e-9


def test_stark_perpendicular_even_split():
    piezo = nvmodel.PiezoParams()
    fields = np.linspace(0, 1, 11)
    scan = spectra.stark_scan(FS_BARE, piezo, "x", fields)
    i_ex, i_ey = scan.labels.index("Ex"), scan.labels.index("Ey")
    split = scan.excited_energies[:, i_ex] - scan.excited_energies[:, i_ey]
    assert np.allclose(split, 2 * piezo.g * piezo.a * fields, atol=1e-10)
    # even: the pair moves symmetrically about its center
    center = (scan.excited_energies[:, i_ex] + scan.excited_energies[:, i_ey]) / 2
    assert np.ptp(center) < 1e-10


def test_stark_prestrain_quadratic_onset():
    piezo = nvmodel.PiezoParams()
    fields = np.linspace(0, 1, 11)
    pre = nvmodel.StrainCoefficients(e2_a=0.3)
    scan = spectra.stark_scan(FS_BARE, piezo, "x", fields, prestrain=pre)
    i_ex, i_ey = scan.labels.index("Ex"), scan.labels.index("Ey")
    split = np.abs(scan.excited_energies[:, i_ex] - scan.excited_energies[:, i_ey])
    model = 2 * np.sqrt(0.3 ** 2 + (piezo.g * piezo.a * fields) ** 2)
    assert np.max(np.abs(split - model)) < 1e-6
    # curvature at the origin, not a kink
    assert split[1] - split[0] < split[-1] - split[-2]
