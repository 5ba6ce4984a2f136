"""Two-hole Slater-determinant space over {a, ex, ey} x {alpha, beta}.

This is the brute-force many-body layer: the fifteen antisymmetric two-hole
basis states, embeddings of arbitrary one- and two-body operators with exact
fermionic signs, the fifteen symmetry-adapted eigenstates of the trigonal
crystal field with their irrep labels, and basis changes between the two.

Everything is built inside the full 36-dimensional two-particle product
space and projected onto the antisymmetric subspace, so no Slater-Condon
bookkeeping is hand-coded anywhere; closed-form blocks elsewhere in the
package are validated against these embeddings.

Orderings (fixed, relied on by downstream code and by serialized output):

* orbitals (ex, ey, a); spins (alpha, beta); spin-orbital index k = 2*o + s
* determinants: index pairs (i, j), i < j, lexicographic; 15 in total
* symmetry-adapted states: ground triplet, ground-configuration singlets,
  excited triplet, excited singlets, doubly-excited singlet (see STATE_NAMES)
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import symm

ORBITALS = ("ex", "ey", "a")
SPINS = ("alpha", "beta")
N_SPIN_ORBITALS = 6
N_DETS = 15

_EX, _EY, _A = 0, 1, 2
_UP, _DN = 0, 1


@dataclass(frozen=True)
class SpinOrbital:
    orbital: str
    spin: str

    @property
    def index(self) -> int:
        return 2 * ORBITALS.index(self.orbital) + SPINS.index(self.spin)


SPIN_ORBITALS = tuple(SpinOrbital(o, s) for o in ORBITALS for s in SPINS)


@dataclass(frozen=True)
class Determinant:
    """Antisymmetrized pair of spin-orbitals, i < j fixing the sign."""

    occupied: tuple

    def __post_init__(self):
        i, j = self.occupied
        if not 0 <= i < j < N_SPIN_ORBITALS:
            raise ValueError("occupied indices must satisfy 0 <= i < j < 6")

    @property
    def label(self) -> str:
        i, j = self.occupied
        so = SPIN_ORBITALS
        arrow = {"alpha": "+", "beta": "-"}
        return "|{}{},{}{}>".format(so[i].orbital, arrow[so[i].spin],
                                    so[j].orbital, arrow[so[j].spin])


DETERMINANTS = tuple(Determinant((i, j))
                     for i, j in combinations(range(N_SPIN_ORBITALS), 2))
DET_LABELS = tuple(d.label for d in DETERMINANTS)


def build_two_hole_basis():
    """The 15 determinants in their documented, stable order."""
    return list(DETERMINANTS)


def _isometry() -> np.ndarray:
    """36x15 isometry onto normalized antisymmetric pair states."""
    t = np.zeros((36, 15))
    for col, det in enumerate(DETERMINANTS):
        i, j = det.occupied
        t[i * 6 + j, col] = 1 / np.sqrt(2)
        t[j * 6 + i, col] = -1 / np.sqrt(2)
    return t


_T = _isometry()


@dataclass(frozen=True)
class HamiltonianBlock:
    """Hermitian matrix bound to an ordered named basis."""

    matrix: np.ndarray
    basis: tuple

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "basis", tuple(self.basis))
        if m.shape != (len(self.basis),) * 2:
            raise ValueError("matrix shape does not match basis")

    @property
    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def restrict(self, names) -> "HamiltonianBlock":
        idx = [self.basis.index(n) for n in names]
        return HamiltonianBlock(self.matrix[np.ix_(idx, idx)], names)


@dataclass(frozen=True)
class OneBodyOperator:
    """Separable one-particle operator: orbital part (ex, ey, a) x spin part."""

    orbital_part: np.ndarray
    spin_part: np.ndarray

    def six(self) -> np.ndarray:
        return np.kron(np.asarray(self.orbital_part, dtype=complex),
                       np.asarray(self.spin_part, dtype=complex))


@dataclass(frozen=True)
class TwoBodyTensor:
    """Coulomb-like tensor C[a,b,c,d] = <ab| V |cd>, indices over (ex, ey, a).

    Hermiticity C_abcd = C_cdab* and exchange symmetry C_abcd = C_badc are
    enforced at construction.
    """

    entries: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", c)
        if c.shape != (3, 3, 3, 3):
            raise ValueError("tensor must be 3x3x3x3 over (ex, ey, a)")
        scale = max(np.max(np.abs(c)), 1.0)
        if np.max(np.abs(c - np.conj(np.transpose(c, (2, 3, 0, 1))))) > 1e-12 * scale:
            raise ValueError("tensor violates hermiticity C_abcd = C_cdab*")
        if np.max(np.abs(c - np.transpose(c, (1, 0, 3, 2)))) > 1e-12 * scale:
            raise ValueError("tensor violates exchange symmetry C_abcd = C_badc")

    @classmethod
    def from_e_block(cls, block) -> "TwoBodyTensor":
        """Lift a 2x2x2x2 tensor over (ex, ey) to the full orbital space."""
        c = np.zeros((3, 3, 3, 3), dtype=complex)
        c[:2, :2, :2, :2] = np.asarray(block, dtype=complex)
        return cls(c)


@dataclass(frozen=True)
class ManyBodyState:
    """A normalized two-hole state with its symmetry bookkeeping.

    irrep is the label of the total (orbital x spin) representation; partner
    distinguishes the two rows of E ("1" or "2", None for 1-dim irreps).
    """

    name: str
    irrep: str
    partner: str | None
    config: str
    amplitudes: np.ndarray


def _product(o1, s1, o2, s2) -> np.ndarray:
    """Product-space vector |particle1 = (o1,s1)> |particle2 = (o2,s2)>."""
    v = np.zeros(36)
    v[(2 * o1 + s1) * 6 + (2 * o2 + s2)] = 1.0
    return v.astype(complex)


def _spatial_spin(spatial_terms, spin_terms) -> np.ndarray:
    """Tensor product of spatial and spin two-particle expansions.

    Each term list holds (coefficient, (label1, label2)) pairs; labels are
    orbital indices for the spatial factor and spin indices for the spin one.
    """
    v = np.zeros(36, dtype=complex)
    for cs, (o1, o2) in spatial_terms:
        for cp, (s1, s2) in spin_terms:
            v += cs * cp * _product(o1, s1, o2, s2)
    return v


# two-particle spin factors
_AA = [(1.0, (_UP, _UP))]
_BB = [(1.0, (_DN, _DN))]
_SYM = [(1.0, (_UP, _DN)), (1.0, (_DN, _UP))]
_SINGLET = [(1.0, (_UP, _DN)), (-1.0, (_DN, _UP))]


def _antisym(o1, o2):
    return [(1.0, (o1, o2)), (-1.0, (o2, o1))]


def _sym2(o1, o2):
    return [(1.0, (o1, o2)), (1.0, (o2, o1))]


def _eplus():
    # e+ = -(ex + i ey), unnormalized
    return [(-1.0, _EX), (-1j, _EY)]


def _eminus():
    # e- = +(ex - i ey), unnormalized
    return [(1.0, _EX), (-1j, _EY)]


def _pair_ae(e_combo):
    """|a e - e a> for a single-orbital combination e = sum c_k |k>."""
    out = []
    for c, orb in e_combo:
        out += [(c, (_A, orb)), (-c, (orb, _A))]
    return out


_E_PLUS_PAIR = _pair_ae(_eplus())    # E+
_E_MINUS_PAIR = _pair_ae(_eminus())  # E-
_X_PAIR = _antisym(_A, _EX)          # (E- - E+)/2 = |a ex - ex a|
_Y_PAIR = _antisym(_A, _EY)          # i(E- + E+)/2 = |a ey - ey a|


def _table_states():
    """The 15 symmetry-adapted states as product-space vectors."""
    ax, ay = _EX, _EY
    rows = [
        # ground configuration, spin triplet (orbital singlet A2)
        ("3A2-", "E", "1", "e2", _spatial_spin(_antisym(ax, ay), _BB)),
        ("3A20", "A1", None, "e2", _spatial_spin(_antisym(ax, ay), _SYM)),
        ("3A2+", "E", "2", "e2", _spatial_spin(_antisym(ax, ay), _AA)),
        # ground configuration, spin singlets
        ("1E1", "E", "1", "e2",
         _spatial_spin([(1.0, (ax, ax)), (-1.0, (ay, ay))], _SINGLET)),
        ("1E2", "E", "2", "e2", _spatial_spin(_sym2(ax, ay), _SINGLET)),
        ("1A1(e2)", "A1", None, "e2",
         _spatial_spin([(1.0, (ax, ax)), (1.0, (ay, ay))], _SINGLET)),
        # excited configuration, spin triplet
        ("A1", "A1", None, "ae",
         _spatial_spin(_E_MINUS_PAIR, _AA) - _spatial_spin(_E_PLUS_PAIR, _BB)),
        ("A2", "A2", None, "ae",
         _spatial_spin(_E_MINUS_PAIR, _AA) + _spatial_spin(_E_PLUS_PAIR, _BB)),
        ("E1", "E", "1", "ae",
         _spatial_spin(_E_MINUS_PAIR, _BB) - _spatial_spin(_E_PLUS_PAIR, _AA)),
        ("E2", "E", "2", "ae",
         _spatial_spin(_E_MINUS_PAIR, _BB) + _spatial_spin(_E_PLUS_PAIR, _AA)),
        ("Ey", "E", "1", "ae", _spatial_spin(_Y_PAIR, _SYM)),
        ("Ex", "E", "2", "ae", _spatial_spin(_X_PAIR, _SYM)),
        # excited configuration, spin singlets
        ("1Ex", "E", "1", "ae", _spatial_spin(_sym2(_A, ax), _SINGLET)),
        ("1Ey", "E", "2", "ae", _spatial_spin(_sym2(_A, ay), _SINGLET)),
        # doubly excited configuration
        ("1A1(a2)", "A1", None, "a2", _spatial_spin([(1.0, (_A, _A))], _SINGLET)),
    ]
    return rows


STATE_NAMES = tuple(r[0] for r in _table_states())
EXCITED_TRIPLET = ("A1", "A2", "Ex", "Ey", "E1", "E2")
GROUND_TRIPLET = ("3A2-", "3A20", "3A2+")
SINGLETS_E2 = ("1E1", "1E2", "1A1(e2)")
SINGLETS_AE = ("1Ex", "1Ey")


def embed_one_body(op) -> HamiltonianBlock:
    """Embed a one-particle operator into the 15-determinant space.

    `op` may be a OneBodyOperator or a raw 6x6 matrix over spin-orbitals
    (orbital-major ordering).  The result is H(1) + H(2) restricted to the
    antisymmetric subspace; fermionic signs follow from the fixed
    determinant phase convention.
    """
    h = op.six() if isinstance(op, OneBodyOperator) else np.asarray(op, dtype=complex)
    if h.shape != (6, 6):
        raise ValueError("one-body operator must be 6x6 over spin-orbitals")
    h36 = np.kron(h, np.eye(6)) + np.kron(np.eye(6), h)
    return HamiltonianBlock(_T.T @ h36 @ _T, DET_LABELS)


def embed_two_body(t: TwoBodyTensor) -> HamiltonianBlock:
    """Embed a spin-independent two-particle interaction.

    Matrix elements come out antisymmetrized, <ij|V|kl> - <ij|V|lk>, by
    projection onto the determinant space.
    """
    c = t.entries
    eye2 = np.eye(2)
    v36 = np.zeros((36, 36), dtype=complex)
    unit = np.zeros((3, 3))
    for a in range(3):
        for b in range(3):
            for cc in range(3):
                for d in range(3):
                    w = c[a, b, cc, d]
                    if w == 0:
                        continue
                    e_ac = unit.copy()
                    e_ac[a, cc] = 1.0
                    e_bd = unit.copy()
                    e_bd[b, d] = 1.0
                    v36 += w * np.kron(np.kron(e_ac, eye2), np.kron(e_bd, eye2))
    return HamiltonianBlock(_T.T @ v36 @ _T, DET_LABELS)


_STATES_CACHE = None
_RAW_CACHE = None


def raw_state_vectors():
    """Unnormalized product-space state vectors with integer coefficients.

    Returns (v, norms): v is 36 x 15 with entries in {0, +-1, +-i}; column k
    over norms[k] is the k-th symmetry-adapted state.  Bilinear forms of
    integer-entry operators evaluated on these columns are exact in floating
    point, so symmetry-forced zeros come out as exact zeros.
    """
    global _RAW_CACHE
    if _RAW_CACHE is None:
        cols = [row[4] for row in _table_states()]
        v = np.column_stack(cols)
        norms = np.linalg.norm(v, axis=0)
        _RAW_CACHE = (v, norms)
    return _RAW_CACHE


def symmetry_adapted_states(group: symm.DoubleGroupC3v | None = None):
    """The 15 symmetry-adapted two-hole states, verified on construction.

    States are built from their explicit orbital x spin expansions (which fix
    every phase used downstream), then checked against the group projectors:
    each state must lie in the isotypic component of its labeled irrep, and
    the full set must be orthonormal.
    """
    global _STATES_CACHE
    if _STATES_CACHE is not None:
        return list(_STATES_CACHE)
    if group is None:
        group = symm.build_double_group_c3v()

    states = []
    for name, irrep, partner, config, v36 in _table_states():
        amps = _T.T @ v36
        # the states must be fully antisymmetric
        if abs(np.linalg.norm(amps) - np.linalg.norm(v36)) > 1e-12 * np.linalg.norm(v36):
            raise AssertionError(f"state {name} has a symmetric component")
        amps = amps / np.linalg.norm(amps)
        states.append(ManyBodyState(name, irrep, partner, config, amps))

    s = state_matrix(states)
    if not np.allclose(s.conj().T @ s, np.eye(15), atol=1e-12):
        raise AssertionError("symmetry-adapted states are not orthonormal")

    # isotypic membership under the Eq.-style group projectors
    actions = [two_hole_action(group, el) for el in group.elements]
    for irrep in ("A1", "A2", "E"):
        p = group.projector(irrep, actions)
        for st in states:
            target = st.amplitudes if st.irrep == irrep else 0 * st.amplitudes
            if np.max(np.abs(p @ st.amplitudes - target)) > 1e-10:
                raise AssertionError(f"state {st.name} fails the {irrep} projector")

    _STATES_CACHE = tuple(states)
    return list(states)


def state_matrix(states) -> np.ndarray:
    """15 x n matrix with state amplitude vectors as columns."""
    return np.column_stack([st.amplitudes for st in states])


def state_index(name: str) -> int:
    return STATE_NAMES.index(name)


def two_hole_action(group: symm.DoubleGroupC3v, element: symm.GroupElement) -> np.ndarray:
    """Unitary action of a group element on the determinant space.

    The single-particle action is orbital x spinor; the two spinor signs of a
    barred element cancel, so the two-hole representation is single-valued.
    """
    d3 = group.action(element, symm.EXYA_BASIS)
    u6 = np.kron(d3, element.spinor_action)
    u36 = np.kron(u6, u6)
    return _T.T @ u36 @ _T


def change_basis(block: HamiltonianBlock | np.ndarray, states) -> HamiltonianBlock:
    """Rotate a determinant-space operator into a set of orthonormal states."""
    h = block.matrix if isinstance(block, HamiltonianBlock) else np.asarray(block, dtype=complex)
    s = state_matrix(states)
    if not np.allclose(s.conj().T @ s, np.eye(s.shape[1]), atol=1e-10):
        raise ValueError("states are not orthonormal")
    return HamiltonianBlock(s.conj().T @ h @ s, tuple(st.name for st in states))


def c3v_average_tensor(t: TwoBodyTensor | np.ndarray,
                       group: symm.DoubleGroupC3v | None = None) -> TwoBodyTensor:
    """Group-average a two-body tensor, producing a C3v-invariant one."""
    if group is None:
        group = symm.build_double_group_c3v()
    c = t.entries if isinstance(t, TwoBodyTensor) else np.asarray(t, dtype=complex)
    out = np.zeros_like(c)
    for el in group.elements[:6]:  # barred elements act identically on orbitals
        d = group.action(el, symm.EXYA_BASIS)
        out += np.einsum("pa,qb,abcd,rc,sd->pqrs",
                         d, d, c, d.conj(), d.conj())
    return TwoBodyTensor(out / 6)
