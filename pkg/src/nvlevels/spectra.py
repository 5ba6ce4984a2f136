"""Optical selection rules, polarization analysis, and parameter scans.

The electric-dipole operator of the defect has exactly two independent
orbital matrix elements, <a|x|ex> and <a|y|ey>; with the reduced element set
to 1 this module derives the full transition table between the fifteen
two-hole states, classifies polarizations (sigma+/-, x, y, general
elliptic), and drives eigenvalue scans over strain and electric field with
branch tracking by eigenvector continuity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import fock, nvmodel

# polarization classification thresholds: exact symmetry limits at zero
# perturbation, continuous degree in between
_CIRC_TOL = 1e-8
_FORBIDDEN_TOL = 1e-12


@dataclass(frozen=True)
class TransitionDipole:
    """Dipole amplitudes for a decay |from> -> |to> in units of the reduced
    orbital element."""

    from_state: str
    to_state: str
    amplitude_x: complex
    amplitude_y: complex

    @property
    def intensity(self) -> float:
        return abs(self.amplitude_x) ** 2 + abs(self.amplitude_y) ** 2

    @property
    def polarization(self) -> str:
        return classify_polarization(self.amplitude_x, self.amplitude_y)


@dataclass(frozen=True)
class PolarizationReport:
    """Polarization of a dipole amplitude pair (ax, ay).

    circular_degree is the signed ellipticity of the polarization ellipse,
    (|a_+| - |a_-|)/(|a_+| + |a_-|) with a_+- the sigma+- components: +1 is
    pure sigma+, -1 pure sigma-, 0 linear, intermediate values the
    minor/major axis ratio signed by handedness.  linear_axis is the major
    axis in the xy plane (radians mod pi, undefined for pure circular
    light); intensity is |ax|^2 + |ay|^2.
    """

    circular_degree: float
    linear_axis: float | None
    intensity: float


def classify_polarization(ax: complex, ay: complex) -> str:
    norm = np.hypot(abs(ax), abs(ay))
    if norm < _FORBIDDEN_TOL:
        return "forbidden"
    if abs(ay - 1j * ax) < _CIRC_TOL * norm:
        return "sigma+"
    if abs(ay + 1j * ax) < _CIRC_TOL * norm:
        return "sigma-"
    rep = polarization_report(ax, ay)
    if abs(rep.circular_degree) < _CIRC_TOL:
        if abs(ay) < _CIRC_TOL * norm:
            return "x"
        if abs(ax) < _CIRC_TOL * norm:
            return "y"
        return "linear"
    return "elliptic"


def polarization_report(ax: complex, ay: complex) -> PolarizationReport:
    intensity = abs(ax) ** 2 + abs(ay) ** 2
    if intensity < _FORBIDDEN_TOL ** 2:
        return PolarizationReport(0.0, None, 0.0)
    a_plus = abs(ax - 1j * ay) / np.sqrt(2)    # sigma+ component
    a_minus = abs(ax + 1j * ay) / np.sqrt(2)   # sigma- component
    degree = (a_plus - a_minus) / (a_plus + a_minus)
    if 1 - abs(degree) < 1e-15:
        axis = None
    else:
        # major axis from the linear Stokes parameters
        s1 = abs(ax) ** 2 - abs(ay) ** 2
        s2 = 2 * np.real(np.conj(ax) * ay)
        axis = float(np.arctan2(s2, s1) / 2) % np.pi
    return PolarizationReport(float(degree), axis, float(intensity))


# -- dipole operator -------------------------------------------------------------


def _dipole_one_body():
    dx = np.zeros((3, 3), dtype=complex)
    dx[0, 2] = dx[2, 0] = 1.0          # <ex|x|a> = <a|x|ex> = 1
    dy = np.zeros((3, 3), dtype=complex)
    dy[1, 2] = dy[2, 1] = 1.0          # <ey|y|a> = <a|y|ey> = 1
    eye = np.eye(2)
    return np.kron(dx, eye), np.kron(dy, eye)


_DIPOLE_CACHE = None


def dipole_state_operators():
    """15x15 dipole components on the symmetry-adapted state basis.

    Evaluated as bilinear forms of the integer-entry product-space operator
    on the raw integer state vectors, normalized afterwards; this keeps all
    symmetry-forbidden matrix elements exactly zero in floating point.
    """
    global _DIPOLE_CACHE
    if _DIPOLE_CACHE is None:
        v, norms = fock.raw_state_vectors()
        dx6, dy6 = _dipole_one_body()
        eye = np.eye(6)
        scale = np.outer(norms, norms)
        out = []
        for d6 in (dx6, dy6):
            d36 = np.kron(d6, eye) + np.kron(eye, d6)
            out.append(v.conj().T @ d36 @ v / scale)
        _DIPOLE_CACHE = tuple(out)
    return _DIPOLE_CACHE


def dipole_matrix():
    """Transition dipoles for every ordered pair of distinct states."""
    dx, dy = dipole_state_operators()
    names = fock.STATE_NAMES
    out = []
    for i, src in enumerate(names):
        for j, dst in enumerate(names):
            if i == j:
                continue
            out.append(TransitionDipole(src, dst, complex(dx[j, i]), complex(dy[j, i])))
    return out


@dataclass(frozen=True)
class SelectionRules:
    """The allowed-transition table, grouped by manifold pairs."""

    triplet: dict           # (ground sublevel, excited state) -> polarization
    singlets_e2: dict       # (e2 singlet, ae singlet) -> polarization
    singlets_a2: dict       # (a2 singlet, ae singlet) -> polarization
    all_allowed: tuple = field(default=())


def selection_rules() -> SelectionRules:
    """Classify every allowed transition; forbidden pairs are left out.

    The three groups mirror the physically relevant decay families:
    excited triplet -> ground triplet, excited-configuration singlets ->
    ground-configuration singlets, and doubly-excited singlet ->
    excited-configuration singlets.
    """
    dips = dipole_matrix()
    allowed = tuple(d for d in dips if d.polarization != "forbidden")
    triplet = {}
    singlets_e2 = {}
    singlets_a2 = {}
    for d in allowed:
        if d.from_state in fock.EXCITED_TRIPLET and d.to_state in fock.GROUND_TRIPLET:
            triplet[(d.to_state, d.from_state)] = d.polarization
        elif d.from_state in fock.SINGLETS_AE and d.to_state in fock.SINGLETS_E2:
            singlets_e2[(d.to_state, d.from_state)] = d.polarization
        elif d.from_state == "1A1(a2)" and d.to_state in fock.SINGLETS_AE:
            singlets_a2[(d.to_state, d.from_state)] = d.polarization
    return SelectionRules(triplet, singlets_e2, singlets_a2, allowed)


@dataclass(frozen=True)
class SingletTransitionCheck:
    """Outcome of the intra-configuration singlet dipole check.

    Within one electronic configuration the one-body dipole operator has no
    matrix elements (it only connects a to the e doublet), so the
    1A1 <-> 1E transitions inside the ground configuration carry exactly
    zero amplitude in this model.  Observed singlet emission must therefore
    proceed through configuration mixing or vibronic channels, which lie
    outside the model.
    """

    amplitude_1a1_1e1: complex
    amplitude_1a1_1e2: complex
    cross_config_example: complex    # 1Ex(ae) -> 1A1(e2), x-polarized

    @property
    def intra_config_zero(self) -> bool:
        return (abs(self.amplitude_1a1_1e1) == 0.0
                and abs(self.amplitude_1a1_1e2) == 0.0)


def singlet_transition_ratio() -> SingletTransitionCheck:
    dx, dy = dipole_state_operators()
    i_a1 = fock.state_index("1A1(e2)")
    i_e1 = fock.state_index("1E1")
    i_e2 = fock.state_index("1E2")
    i_ex = fock.state_index("1Ex")
    amp1 = complex(dx[i_a1, i_e1]) + complex(dy[i_a1, i_e1])
    amp2 = complex(dx[i_a1, i_e2]) + complex(dy[i_a1, i_e2])
    cross = complex(dx[i_a1, i_ex])
    return SingletTransitionCheck(amp1, amp2, cross)


# -- branch-tracked diagonalization ----------------------------------------------


@dataclass(frozen=True)
class ScanResult:
    """Branch-tracked eigenvalue scan.

    energies[k, b] is branch b at grid point k; vectors[k][:, b] the matching
    eigenvector with a continuity-fixed phase.  labels names each branch
    after its dominant unperturbed state at the first grid point; overlaps
    holds |<label_state|branch>|^2.  crossings lists (point, branch) pairs
    where the continuity overlap dropped below 0.5 (tracking ambiguous, not
    fatal).  weyl_margin is min over steps of ||H_k - H_{k-1}||_2 - max_b
    |E_b(k) - E_b(k-1)| >= 0 for sorted spectra.
    """

    parameters: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray
    labels: tuple
    overlaps: np.ndarray
    crossings: tuple
    weyl_margin: float


def diagonalize_tracked(parameters, blocks, label_states=None) -> ScanResult:
    """Diagonalize Hermitian blocks along a grid with branch continuity.

    Branches are matched point to point by maximal eigenvector overlap
    (optimal assignment); degenerate starts are resolved against
    `label_states` (columns = reference vectors, defaults to the coordinate
    basis).
    """
    parameters = np.asarray(parameters, dtype=float)
    hams = [b.matrix if isinstance(b, fock.HamiltonianBlock) else np.asarray(b)
            for b in blocks]
    dim = hams[0].shape[0]
    if label_states is None:
        label_states = np.eye(dim, dtype=complex)
        basis = blocks[0].basis if isinstance(blocks[0], fock.HamiltonianBlock) \
            else tuple(f"state{k}" for k in range(dim))
        labels = basis
    else:
        label_states, labels = label_states
        label_states = np.asarray(label_states, dtype=complex)

    for h in hams:
        if np.max(np.abs(h - h.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(h))):
            raise ValueError("scan blocks must be Hermitian")

    energies = np.zeros((len(hams), dim))
    vectors = np.zeros((len(hams), dim, dim), dtype=complex)
    crossings = []
    weyl_margin = np.inf

    prev = None
    for k, h in enumerate(hams):
        w, v = np.linalg.eigh(h)
        ref = label_states if prev is None else prev
        # within an eigenspace the eigh basis is arbitrary: rotate each
        # degenerate cluster to best match the references before assignment
        v, w = _align_degenerate(v, w, ref)
        ov = np.abs(ref.conj().T @ v)
        row, col = linear_sum_assignment(-ov ** 2)
        order = np.empty(dim, dtype=int)
        order[row] = col
        w, v = w[order], v[:, order]
        if prev is not None:
            for b in range(dim):
                if ov[b, order[b]] < 0.5:
                    crossings.append((k, b))
            # phase continuity
            ph = np.sum(prev.conj() * v, axis=0)
            ph = np.where(np.abs(ph) > 1e-12, ph / np.abs(ph), 1.0)
            v = v * ph.conj()
            step = np.linalg.norm(hams[k] - hams[k - 1], ord=2)
            jump = np.max(np.abs(np.sort(w) - np.sort(energies[k - 1])))
            weyl_margin = min(weyl_margin, step - jump)
        energies[k] = w
        vectors[k] = v
        prev = v

    # sorted spectra of Hermitian matrices move at most by the operator-norm
    # step; a violation would mean the tracker lost an eigenvalue
    scale = max(1.0, max(float(np.max(np.abs(h))) for h in hams))
    if weyl_margin < -1e-9 * scale:
        raise AssertionError("eigenvalue continuity violated across the grid")

    overlaps = np.abs(np.einsum("il,klb->kbl",
                                np.asarray(label_states).conj(), vectors)) ** 2
    return ScanResult(parameters, energies, vectors, tuple(labels), overlaps,
                      tuple(crossings), float(weyl_margin))


def _align_degenerate(v, w, ref, tol=1e-9):
    """Rotate each degenerate eigenvalue cluster toward the reference vectors."""
    dim = len(w)
    k = 0
    v = v.copy()
    while k < dim:
        j = k + 1
        while j < dim and w[j] - w[k] < tol * max(1.0, abs(w[k])):
            j += 1
        if j - k > 1:
            sub = v[:, k:j]
            # project references onto the eigenspace and orthonormalize
            proj = sub @ (sub.conj().T @ ref)
            q, r = np.linalg.qr(proj)
            keep = np.abs(np.diag(r)) > 1e-10
            cols = [q[:, c] for c in range(q.shape[1]) if keep[c]][:j - k]
            if len(cols) == j - k:
                v[:, k:j] = np.column_stack(cols)
        k = j
    return v, w


# -- physical scans ----------------------------------------------------------------


def _excited_hamiltonian(fs: nvmodel.FineStructureParams,
                         strain: nvmodel.StrainCoefficients) -> np.ndarray:
    so = nvmodel.spin_orbit_excited_closed_form(fs.lambda_z).matrix
    ss = nvmodel.spin_spin_hamiltonian(fs.delta, fs.delta_prime, fs.delta_dprime).matrix
    st = nvmodel.strain_hamiltonian(strain).excited_triplet.matrix
    return so + ss + st


@dataclass(frozen=True)
class StrainScan:
    scan: ScanResult
    # per grid point, polarization of the tracked-A2-branch decays to the
    # ms = -1 and ms = +1 ground sublevels
    a2_to_minus: tuple
    a2_to_plus: tuple
    a2_branch: int


def strain_scan(fs: nvmodel.FineStructureParams, component: str,
                deltas, g_pre: float = 0.0) -> StrainScan:
    """Excited-triplet scan over one E-type strain channel (GHz).

    component selects which channel is swept ("E1" or "E2"); g_pre adds a
    fixed amplitude on the other channel.  Polarization of the branch that
    starts as A2 is evaluated against both circular ground sublevels.
    """
    deltas = np.asarray(deltas, dtype=float)
    blocks = []
    for d in deltas:
        if component == "E1":
            c = nvmodel.StrainCoefficients(e1_a=float(d), e2_a=g_pre)
        elif component == "E2":
            c = nvmodel.StrainCoefficients(e1_a=g_pre, e2_a=float(d))
        else:
            raise ValueError("component must be 'E1' or 'E2'")
        blocks.append(fock.HamiltonianBlock(_excited_hamiltonian(fs, c),
                                            fock.EXCITED_TRIPLET))
    scan = diagonalize_tracked(deltas, blocks)
    a2_branch = scan.labels.index("A2")
    to_minus, to_plus = [], []
    for k in range(len(deltas)):
        vec = scan.vectors[k][:, a2_branch]
        amps = transition_amplitudes(vec)
        to_minus.append(polarization_report(*amps["3A2-"]))
        to_plus.append(polarization_report(*amps["3A2+"]))
    return StrainScan(scan, tuple(to_minus), tuple(to_plus), a2_branch)


def polarization_vs_strain(fs: nvmodel.FineStructureParams, component: str,
                           deltas, branch: str = "A2"):
    """Polarization of one tracked branch's circular-pair decays vs strain.

    Returns (to_ms_minus, to_ms_plus): per-grid-point PolarizationReport
    lists for the decays of the branch that starts as `branch` into the
    ms = -1 and ms = +1 ground sublevels.
    """
    deltas = np.asarray(deltas, dtype=float)
    scan = strain_scan(fs, component, deltas)
    if branch == "A2":
        return list(scan.a2_to_minus), list(scan.a2_to_plus)
    b = scan.scan.labels.index(branch)
    minus, plus = [], []
    for k in range(len(deltas)):
        amps = transition_amplitudes(scan.scan.vectors[k][:, b])
        minus.append(polarization_report(*amps["3A2-"]))
        plus.append(polarization_report(*amps["3A2+"]))
    return minus, plus


def transition_amplitudes(excited_vec) -> dict:
    """Dipole amplitudes (ax, ay) from an excited-triplet superposition to
    each ground-triplet sublevel."""
    names = fock.STATE_NAMES
    idx = [names.index(n) for n in fock.EXCITED_TRIPLET]
    coeffs = np.zeros(15, dtype=complex)
    coeffs[idx] = np.asarray(excited_vec, dtype=complex)
    dx, dy = dipole_state_operators()
    full = {}
    for gname in fock.GROUND_TRIPLET:
        gi = names.index(gname)
        full[gname] = (complex(dx[gi] @ coeffs), complex(dy[gi] @ coeffs))
    return full


def total_emission_intensity(excited_vec) -> float:
    """Summed dipole intensity into all ground-triplet sublevels and both
    polarizations; strain-independent for unit excited states."""
    amps = transition_amplitudes(excited_vec)
    return float(sum(abs(ax) ** 2 + abs(ay) ** 2 for ax, ay in amps.values()))


@dataclass(frozen=True)
class StarkScan:
    fields: np.ndarray
    excited_energies: np.ndarray   # (n, 6), branch-tracked
    ground_energy: np.ndarray      # (n,), uniform shift of the ground triplet
    transitions: np.ndarray        # excited - ground, per branch
    labels: tuple
    scan: ScanResult


def stark_scan(fs: nvmodel.FineStructureParams, piezo: nvmodel.PiezoParams,
               axis: str, fields, prestrain: nvmodel.StrainCoefficients | None = None
               ) -> StarkScan:
    """Optical-transition response to an electric field along one axis.

    The excited triplet feels the composed piezo strain plus any pre-strain;
    the ground triplet only shifts uniformly (axial channel).  transitions[k]
    are excited-branch energies minus the ground level at grid point k.
    """
    fields = np.asarray(fields, dtype=float)
    prestrain = prestrain or nvmodel.StrainCoefficients()
    unit = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}[axis]
    blocks = []
    ground = np.zeros(len(fields))
    for k, f in enumerate(fields):
        e_field = tuple(f * u for u in unit)
        c = nvmodel.strain_coefficients(nvmodel.efield_to_strain(e_field, piezo),
                                        piezo.g) + prestrain
        blocks.append(fock.HamiltonianBlock(_excited_hamiltonian(fs, c),
                                            fock.EXCITED_TRIPLET))
        ground[k] = nvmodel.strain_hamiltonian(c).ground_triplet.matrix[0, 0].real
    scan = diagonalize_tracked(fields, blocks)
    transitions = scan.energies - ground[:, None]
    return StarkScan(fields, scan.energies, ground, transitions, scan.labels, scan)
