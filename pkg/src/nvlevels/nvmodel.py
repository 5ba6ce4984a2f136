"""Closed-form NV-center Hamiltonian blocks on named manifolds.

Builders for the single-particle dangling-bond model, the Coulomb ordering
of the ground-configuration states, spin-orbit, spin-spin, strain, and
electric-field (inverse piezoelectric) interactions.  Every closed form here
has an independent numerical route it is tested against: one-body operators
embedded in the determinant space (`fock`), or the spatial-map construction
on the {X, Y} x spin product space for the spin-spin interaction.

Units: energies in GHz (h = 1), electric fields in MV/m, strain
dimensionless.  The excited-triplet manifold is always ordered
(A1, A2, Ex, Ey, E1, E2).

Phase conventions follow the explicit symmetry-adapted state expansions in
`fock` (those fix every off-diagonal phase).  With those phases the
spin-spin mixing term couples E2/Ex with a real coefficient and E1/Ey with
an imaginary one, and the strain coupling of the A2 row carries the opposite
sign from the A1 row; eigenvalues and all observables are unaffected by such
per-state phase choices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock
from .fock import HamiltonianBlock, TwoBodyTensor

SQRT2 = np.sqrt(2.0)

# -- parameter records -------------------------------------------------------


@dataclass(frozen=True)
class SingleParticleParams:
    """On-site and hopping energies of the dangling-bond model (v_c, v_n < 0)."""

    v_c: float
    v_n: float
    h_c: float
    h_n: float


@dataclass(frozen=True)
class FineStructureParams:
    """Spin-orbit (lambda_z, lambda_xy) and spin-spin (delta, delta', delta'')
    strengths in GHz."""

    lambda_z: float = 5.5
    lambda_xy: float = 7.3
    delta: float = 0.0
    delta_prime: float = 0.0
    delta_dprime: float = 0.0


@dataclass(frozen=True)
class StrainTensor:
    """Symmetric 3x3 strain.  The antisymmetric part of a displacement
    gradient only rotates the defect, so it is stripped by
    `from_displacement_gradient` and rejected here."""

    eps: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.eps, dtype=float)
        object.__setattr__(self, "eps", e)
        if e.shape != (3, 3):
            raise ValueError("strain must be a 3x3 tensor")
        if np.max(np.abs(e - e.T)) > 1e-12 * max(1.0, np.max(np.abs(e))):
            raise ValueError("strain tensor must be symmetric "
                             "(use from_displacement_gradient to symmetrize)")

    @classmethod
    def from_displacement_gradient(cls, e) -> "StrainTensor":
        e = np.asarray(e, dtype=float)
        return cls((e + e.T) / 2)


@dataclass(frozen=True)
class StrainCoefficients:
    """Symmetry-resolved strain amplitudes, pre-multiplied by the orbital
    coupling g, in GHz.  a1_* shift whole configurations; e1/e2 split and mix
    the e orbitals; e1_b/e2_b couple e to a and are dropped from the
    in-manifold blocks (large a-e gap)."""

    a1_a: float = 0.0
    a1_b: float = 0.0
    e1_a: float = 0.0
    e2_a: float = 0.0
    e1_b: float = 0.0
    e2_b: float = 0.0

    def __add__(self, other: "StrainCoefficients") -> "StrainCoefficients":
        return StrainCoefficients(*(getattr(self, f) + getattr(other, f)
                                    for f in ("a1_a", "a1_b", "e1_a", "e2_a", "e1_b", "e2_b")))


@dataclass(frozen=True)
class PiezoParams:
    """Inverse-piezoelectric tensor components (strain per MV/m) and the
    strain-to-energy coupling g (GHz per unit strain)."""

    a: float = 0.3e-6
    b: float = 0.3e-6
    c: float = 0.3e-6
    d: float = 3.0e-6
    g: float = 2.0e6          # 2 PHz in GHz


# -- single-particle model ----------------------------------------------------


@dataclass(frozen=True)
class SingleParticleLevels:
    e_a1_1: float
    e_a1_2: float
    e_ex: float
    e_ey: float
    alpha: float
    beta: float
    gap: float
    matrix: np.ndarray


def single_particle_matrix(p: SingleParticleParams) -> np.ndarray:
    """Crystal-field interaction on the dangling-bond basis (s1, s2, s3, sN)."""
    m = np.full((3, 3), p.h_c) + (p.v_c - p.h_c) * np.eye(3)
    out = np.zeros((4, 4))
    out[:3, :3] = m
    out[3, 3] = p.v_n
    out[:3, 3] = out[3, :3] = p.h_n
    return out


def single_particle_levels(p: SingleParticleParams) -> SingleParticleLevels:
    """Closed-form dangling-bond levels and the a_C/a_N mixing.

    The two totally symmetric combinations mix through h_n; the doublet
    (e_x, e_y) stays at v_c - h_c.  The closed forms agree with direct
    diagonalization of `single_particle_matrix` to 1e-12.
    """
    mean = 0.5 * (p.v_c + 2 * p.h_c + p.v_n)
    gap = np.sqrt((p.v_c + 2 * p.h_c - p.v_n) ** 2 + 12 * p.h_n ** 2)
    e1 = mean - gap / 2
    e2 = mean + gap / 2
    # lower eigenvector of [[vc+2hc, sqrt3 hn], [sqrt3 hn, vn]] -> (alpha, beta)
    h2 = np.array([[p.v_c + 2 * p.h_c, np.sqrt(3) * p.h_n],
                   [np.sqrt(3) * p.h_n, p.v_n]])
    w, v = np.linalg.eigh(h2)
    vec = v[:, 0]
    if vec[0] < 0:
        vec = -vec
    alpha, beta = float(vec[0]), float(vec[1])
    return SingleParticleLevels(e1, e2, p.v_c - p.h_c, p.v_c - p.h_c,
                                alpha, beta, float(gap),
                                single_particle_matrix(p))


# -- Coulomb ordering ---------------------------------------------------------


@dataclass(frozen=True)
class CoulombExpectations:
    c_3a2: complex
    c_1e1: complex
    c_1e2: complex
    c_1a1: complex
    exchange: complex
    relative: dict = field(default_factory=dict)


def coulomb_expectations(t: TwoBodyTensor) -> CoulombExpectations:
    """Ground-configuration Coulomb expectations from the (ex, ey) tensor.

    The quadratic forms follow directly from the explicit state expansions:
    the 1E1 state is the (xx - yy) combination and the 1E2 state the
    (xy + yx) one.  For any trigonally symmetric tensor the two E values
    coincide and the ladder is {0, 2e, 4e} above the triplet, with
    e = (C_xxyy + C_yyxx)/2 the exchange energy.
    """
    c = t.entries
    x, y = 0, 1
    c3a2 = (c[x, y, x, y] - c[x, y, y, x] - c[y, x, x, y] + c[y, x, y, x]) / 2
    c1e2 = (c[x, y, x, y] + c[x, y, y, x] + c[y, x, x, y] + c[y, x, y, x]) / 2
    c1e1 = (c[x, x, x, x] - c[x, x, y, y] - c[y, y, x, x] + c[y, y, y, y]) / 2
    c1a1 = (c[x, x, x, x] + c[x, x, y, y] + c[y, y, x, x] + c[y, y, y, y]) / 2
    e = (c[x, x, y, y] + c[y, y, x, x]) / 2
    rel = {
        "3A2": 0.0,
        "1E1": complex(c1e1 - c3a2),
        "1E2": complex(c1e2 - c3a2),
        "1A1": complex(c1a1 - c3a2),
    }
    return CoulombExpectations(complex(c3a2), complex(c1e1), complex(c1e2),
                               complex(c1a1), complex(e), rel)


# -- spin-orbit ----------------------------------------------------------------


def orbital_angular_operators():
    """Antisymmetric orbital operators on (ex, ey, a), unit coefficients.

    o_z generates rotations inside the e doublet; o_x and o_y connect the
    doublet with a, so they change the electronic configuration of any
    two-hole state they act on.
    """
    ox = np.zeros((3, 3), complex)
    ox[1, 2], ox[2, 1] = 1j, -1j
    oy = np.zeros((3, 3), complex)
    oy[0, 2], oy[2, 0] = -1j, 1j
    oz = np.zeros((3, 3), complex)
    oz[0, 1], oz[1, 0] = 1j, -1j
    return ox, oy, oz


def spin_half_operators():
    sx = np.array([[0, 1], [1, 0]], complex) / 2
    sy = np.array([[0, -1j], [1j, 0]], complex) / 2
    sz = np.array([[1, 0], [0, -1]], complex) / 2
    return sx, sy, sz


def spin_orbit_one_body(lambda_xy: float, lambda_z: float) -> np.ndarray:
    """Per-hole spin-orbit operator on the six spin-orbitals.

    The overall scale (factor 2) and sign are fixed by the hole-picture
    requirement that the excited-triplet block comes out as
    +lambda_z on A1/A2 and -lambda_z on E1/E2.
    """
    ox, oy, oz = orbital_angular_operators()
    sx, sy, sz = spin_half_operators()
    return 2 * (lambda_xy * (np.kron(ox, sx) + np.kron(oy, sy))
                + lambda_z * np.kron(oz, sz))


@dataclass(frozen=True)
class SpinOrbitHamiltonian:
    full: HamiltonianBlock              # 15x15 on the symmetry-adapted states
    excited_triplet: HamiltonianBlock   # 6x6 restriction


def spin_orbit_hamiltonian(lambda_xy: float, lambda_z: float) -> SpinOrbitHamiltonian:
    """Spin-orbit interaction on all fifteen states, plus the excited-triplet
    restriction diag(lz, lz, 0, 0, -lz, -lz)."""
    states = fock.symmetry_adapted_states()
    h15 = fock.change_basis(fock.embed_one_body(spin_orbit_one_body(lambda_xy, lambda_z)),
                            states)
    return SpinOrbitHamiltonian(h15, h15.restrict(fock.EXCITED_TRIPLET))


def spin_orbit_excited_closed_form(lambda_z: float) -> HamiltonianBlock:
    """The axial splitting of the excited triplet (the non-axial part cannot
    act inside one electronic configuration)."""
    return HamiltonianBlock(np.diag([lambda_z, lambda_z, 0, 0, -lambda_z, -lambda_z])
                            .astype(complex), fock.EXCITED_TRIPLET)


def nonradiative_links(lambda_xy: float, lambda_z: float, tol: float = 1e-9):
    """All pairs of states connected by spin-orbit, sorted by strength.

    Returns (state_i, state_j, magnitude, config_i, config_j) tuples; these
    are the candidate non-radiative decay channels.
    """
    states = fock.symmetry_adapted_states()
    h = spin_orbit_hamiltonian(lambda_xy, lambda_z).full.matrix
    scale = max(np.max(np.abs(h)), 1.0)
    out = []
    for i in range(15):
        for j in range(i + 1, 15):
            mag = abs(h[i, j])
            if mag > tol * scale:
                out.append((states[i].name, states[j].name, float(mag),
                            states[i].config, states[j].config))
    out.sort(key=lambda r: -r[2])
    return out


# -- spin-spin -----------------------------------------------------------------


def spin_spin_hamiltonian(delta: float, delta_prime: float,
                          delta_dprime: float) -> HamiltonianBlock:
    """Closed-form spin-spin block on (A1, A2, Ex, Ey, E1, E2).

    delta sets the 3*delta zero-field gap between the ms = +-1 and ms = 0
    sectors, delta_prime the 4*delta_prime A1/A2 gap (A2 above for positive
    values), and delta_dprime mixes the same-partner pairs {E2, Ex} (real
    coupling) and {E1, Ey} (imaginary coupling).
    """
    d, dp, ds = delta, delta_prime, delta_dprime
    m = np.diag([d - 2 * dp, d + 2 * dp, -2 * d, -2 * d, d, d]).astype(complex)
    i_a1, i_a2, i_ex, i_ey, i_e1, i_e2 = range(6)
    m[i_e1, i_ey] = -1j * ds
    m[i_ey, i_e1] = 1j * ds
    m[i_e2, i_ex] = ds
    m[i_ex, i_e2] = ds
    return HamiltonianBlock(m, fock.EXCITED_TRIPLET)


def _two_spin_operators():
    sp = np.array([[0, 1], [0, 0]], complex)
    sm = sp.T.conj()
    sz = np.diag([0.5, -0.5]).astype(complex)

    def two(a, b):
        return np.kron(a, b)

    s1 = two(sp, sm) + two(sm, sp) - 4 * two(sz, sz)
    s2 = two(sm, sm) + two(sp, sp)
    s3 = two(sm, sm) - two(sp, sp)
    s4 = two(sm, sz) + two(sz, sm) + two(sp, sz) + two(sz, sp)
    s5 = two(sm, sz) + two(sz, sm) - two(sp, sz) - two(sz, sp)
    return s1, s2, s3, s4, s5


def _xy_spin_basis_states() -> np.ndarray:
    """The six excited-triplet states on the (X, Y) x two-spin product basis.

    X and Y are the normalized antisymmetric spatial pairs built on a with
    ex and ey respectively; the expansions below are exactly the
    symmetry-adapted states of `fock` rewritten in that manifold.
    """
    up = np.array([1, 0], complex)
    dn = np.array([0, 1], complex)
    aa, ab = np.kron(up, up), np.kron(up, dn)
    ba, bb = np.kron(dn, up), np.kron(dn, dn)
    x = np.array([1, 0], complex)
    y = np.array([0, 1], complex)

    def st(sx, ss):
        return np.kron(sx, ss)

    a1 = (st(x, aa + bb) - 1j * st(y, aa - bb)) / 2
    a2 = (st(x, aa - bb) - 1j * st(y, aa + bb)) / 2
    ex = st(x, ab + ba) / SQRT2
    ey = st(y, ab + ba) / SQRT2
    e1 = (st(x, aa + bb) + 1j * st(y, aa - bb)) / 2
    e2 = -(st(x, aa - bb) + 1j * st(y, aa + bb)) / 2
    return np.column_stack([a1, a2, ex, ey, e1, e2])


def spin_spin_product_operator(delta: float, delta_prime: float,
                               delta_dprime: float) -> np.ndarray:
    """Spin-spin interaction on the 8-dim (X, Y) x spin product space.

    Independent route to the closed form: the dipole-dipole interaction is
    decomposed into five spatial kernels times two-spin operators, and each
    kernel is replaced by its symmetry-resolved map on the (X, Y) manifold.
    The three map amplitudes are delta, delta_prime and delta_dprime; the
    mixing kernel enters as -delta_dprime/sqrt(2) because delta_dprime is
    defined as the x.z kernel expectation with a sqrt(2) normalization,
    making it the literal off-diagonal coupling strength of the block.
    """
    s1, s2, s3, s4, s5 = _two_spin_operators()
    pxx = np.diag([1.0, 0.0])
    pyy = np.diag([0.0, 1.0])
    pxy = np.zeros((2, 2))
    pxy[0, 1] = 1.0
    pyx = pxy.T
    cs = -delta_dprime / SQRT2
    h8 = -(delta * np.kron(pxx + pyy, s1)
           + delta_prime * np.kron(pxx - pyy, s2)
           + 1j * delta_prime * np.kron(pxy + pyx, s3)
           + cs * np.kron(pyy - pxx, s4)
           + 1j * cs * np.kron(pxy + pyx, s5))
    return h8


def spin_spin_xy_oracle(delta: float, delta_prime: float,
                        delta_dprime: float) -> HamiltonianBlock:
    """The spin-spin block obtained from the product-space construction."""
    v = _xy_spin_basis_states()
    h8 = spin_spin_product_operator(delta, delta_prime, delta_dprime)
    return HamiltonianBlock(v.conj().T @ h8 @ v, fock.EXCITED_TRIPLET)


def spin_orbit_product_operator(lambda_z: float) -> np.ndarray:
    """Axial spin-orbit on the (X, Y) x spin product space:
    lz * i(|X><Y| - |Y><X|) x (P_aa - P_bb)."""
    pxy = np.zeros((2, 2))
    pxy[0, 1] = 1.0
    orb = 1j * (pxy - pxy.T)
    spin = np.diag([1.0, 0.0, 0.0, -1.0]).astype(complex)
    return lambda_z * np.kron(orb, spin)


def orbital_average_xy(h8: np.ndarray) -> np.ndarray:
    """Average a product-space operator over the orbital doublet.

    Models fast orbital hopping (high temperature): the spatial part is
    replaced by (|X><X| + |Y><Y|)/2, leaving a pure two-spin operator.
    For the spin-spin interaction only the zero-field splitting survives;
    the axial spin-orbit block averages to zero.
    """
    return (h8[:4, :4] + h8[4:, 4:]) / 2


# -- strain --------------------------------------------------------------------


STRAIN_BASIS_MATRICES = {
    "a1_a": np.diag([1.0, 1.0, 0.0]),
    "a1_b": np.diag([0.0, 0.0, 1.0]),
    "e1_a": np.diag([1.0, -1.0, 0.0]),
    "e2_a": np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
    "e1_b": np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]),
    "e2_b": np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]),
}


def strain_coefficients(eps: StrainTensor, g: float) -> StrainCoefficients:
    """Decompose a symmetric strain into its six symmetry channels.

    Returns the channel amplitudes scaled by the coupling g (GHz).  The
    unscaled amplitudes recombine with STRAIN_BASIS_MATRICES to the input
    tensor exactly.
    """
    e = eps.eps
    return StrainCoefficients(
        a1_a=g * (e[0, 0] + e[1, 1]) / 2,
        a1_b=g * e[2, 2],
        e1_a=g * (e[0, 0] - e[1, 1]) / 2,
        e2_a=g * e[0, 1],
        e1_b=g * e[0, 2],
        e2_b=g * e[1, 2],
    )


def strain_decomposition(eps: StrainTensor) -> dict:
    """Unscaled channel amplitudes; sum(coeff * basis matrix) == eps."""
    c = strain_coefficients(eps, 1.0)
    return {k: getattr(c, k) for k in STRAIN_BASIS_MATRICES}


def strain_one_body(c: StrainCoefficients) -> np.ndarray:
    """Spin-orbital operator realizing the in-manifold strain channels.

    The e1_b/e2_b channels couple e to a across the large orbital gap and
    are dropped, matching the closed-form blocks.
    """
    pex = np.diag([1.0, 0.0, 0.0])
    pey = np.diag([0.0, 1.0, 0.0])
    pa = np.diag([0.0, 0.0, 1.0])
    mix = np.zeros((3, 3))
    mix[0, 1] = mix[1, 0] = 1.0
    h3 = (c.a1_a * (pex + pey) + c.a1_b * pa
          + c.e1_a * (pex - pey) + c.e2_a * mix)
    return np.kron(h3, np.eye(2)).astype(complex)


@dataclass(frozen=True)
class StrainBlocks:
    excited_triplet: HamiltonianBlock   # (A1, A2, Ex, Ey, E1, E2)
    singlets_e2: HamiltonianBlock       # (1E1, 1E2, 1A1(e2))
    singlets_ae: HamiltonianBlock       # (1Ex, 1Ey)
    ground_triplet: HamiltonianBlock    # (3A2-, 3A20, 3A2+)
    singlet_a2: HamiltonianBlock        # (1A1(a2),)


def strain_hamiltonian(c: StrainCoefficients) -> StrainBlocks:
    """Closed-form strain blocks for each manifold.

    E-type strain splits/mixes inside each manifold; the A1 channels shift
    whole configurations (one e-hole and one a-hole pick up a1_a + a1_b,
    two e-holes pick up 2*a1_a).  The ground triplet sees no E-type strain
    at all: its antisymmetric orbital pair is immune.
    """
    d1, d2 = c.e1_a, c.e2_a
    shift_ae = c.a1_a + c.a1_b
    shift_e2 = 2 * c.a1_a

    m = np.zeros((6, 6), dtype=complex)
    # rows/cols: A1, A2, Ex, Ey, E1, E2; upper triangle, then Hermitian fill
    m[0, 4], m[0, 5] = d1, -1j * d2
    m[1, 4], m[1, 5] = 1j * d2, -d1
    m[2, 3] = d2
    m = m + m.conj().T
    m[2, 2], m[3, 3] = d1, -d1
    m += shift_ae * np.eye(6)
    excited = HamiltonianBlock(m, fock.EXCITED_TRIPLET)

    s = np.zeros((3, 3), dtype=complex)
    s[0, 2] = s[2, 0] = 2 * d1
    s[1, 2] = s[2, 1] = 2 * d2
    s += shift_e2 * np.eye(3)
    singlets_e2 = HamiltonianBlock(s, fock.SINGLETS_E2)

    ae = np.array([[d1, d2], [d2, -d1]], dtype=complex) + shift_ae * np.eye(2)
    singlets_ae = HamiltonianBlock(ae, fock.SINGLETS_AE)

    ground = HamiltonianBlock(shift_e2 * np.eye(3, dtype=complex), fock.GROUND_TRIPLET)
    a2 = HamiltonianBlock(np.array([[2 * c.a1_b]], dtype=complex), ("1A1(a2)",))
    return StrainBlocks(excited, singlets_e2, singlets_ae, ground, a2)


# -- electric field -------------------------------------------------------------


def efield_to_strain(e_field, p: PiezoParams) -> StrainTensor:
    """Strain induced by an electric field through the inverse piezoelectric
    tensor of a trigonal defect (symmetric by construction)."""
    ex, ey, ez = (float(v) for v in e_field)
    a, b, c, d = p.a, p.b, p.c, p.d
    eps = np.array([
        [a * ex + b * ez, -a * ey, c * ex],
        [-a * ey, -a * ex + b * ez, c * ey],
        [c * ex, c * ey, d * ez],
    ])
    return StrainTensor(eps)


@dataclass(frozen=True)
class EfieldBlocks:
    excited_triplet: HamiltonianBlock
    ground_triplet: HamiltonianBlock


def efield_hamiltonian(e_field, p: PiezoParams) -> EfieldBlocks:
    """Electric-field response via the piezo-strain composition.

    Built as strain_hamiltonian(strain_coefficients(efield_to_strain(E))),
    which yields the g(b+d)Ez excited and 2gb*Ez ground diagonal shifts and
    the ga-scaled transverse couplings.  The c channel (e-to-a coupling) is
    dropped with the other out-of-manifold strain channels.
    """
    blocks = strain_hamiltonian(strain_coefficients(efield_to_strain(e_field, p), p.g))
    return EfieldBlocks(blocks.excited_triplet, blocks.ground_triplet)


def efield_hamiltonian_alt_phase(e_field, p: PiezoParams) -> EfieldBlocks:
    """The excited-triplet Stark matrix in an alternative phase convention.

    Differs from `efield_hamiltonian` by per-state phases/signs of the
    off-diagonal couplings but has identical eigenvalues; kept as a
    spectrum-level cross-check of the piezo-strain composition.
    """
    ex, ey, ez = (float(v) for v in e_field)
    ga = p.g * p.a
    m = np.zeros((6, 6), dtype=complex)
    m[0, 4], m[0, 5] = ga * ex, -1j * ga * ey
    m[1, 4], m[1, 5] = -1j * ga * ey, ga * ex
    m[4, 0], m[4, 1] = ga * ex, 1j * ga * ey
    m[5, 0], m[5, 1] = 1j * ga * ey, ga * ex
    m[2, 2], m[3, 3] = ga * ex, -ga * ex
    m[2, 3] = m[3, 2] = ga * ey
    m += p.g * (p.b + p.d) * ez * np.eye(6)
    excited = HamiltonianBlock(m, fock.EXCITED_TRIPLET)
    ground = HamiltonianBlock(2 * p.g * p.b * ez * np.eye(3, dtype=complex),
                              fock.GROUND_TRIPLET)
    return EfieldBlocks(excited, ground)
