"""The double point group C3v.

The trigonal defect symmetry group, extended by the 2pi spin rotation
(order 12, six classes), hand-built and verified at construction time:
twelve elements with explicit actions on the four dangling-bond orbitals
(sigma1, sigma2, sigma3, sigmaN) and on the spin-1/2 doublet (alpha, beta),
the six irreducible characters, representation reduction, and projection
operators.

Conventions
-----------
* The threefold axis is z.  Carbon 1 sits on the +x azimuth, carbons 2 and 3
  at +120 and +240 degrees; the mirror plane sv1 contains carbon 1 and the
  nitrogen.  Projections therefore single out e_x along carbon 1.
* Spinor matrices follow the usual SU(2) convention
  U(theta, n) = exp(-i theta/2 n.sigma); reflections act as the pi rotation
  about the plane normal (inversion is trivial on spinors).  Barred elements
  carry an extra factor -1 on the spinor and act identically on orbitals.
* Only products chi(g)* R(g) enter downstream results, so any consistent
  spinor sign convention gives the same physics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORDER = 12

CLASS_LABELS = ("E", "2C3", "3sv", "barE", "2barC3", "3barsv")
CLASS_SIZES = np.array([1, 2, 3, 1, 2, 3])

ELEMENT_NAMES = (
    "E", "C3+", "C3-", "sv1", "sv2", "sv3",
    "barE", "barC3+", "barC3-", "barsv1", "barsv2", "barsv3",
)

IRREP_NAMES = ("A1", "A2", "E", "E1/2", "1E3/2", "2E3/2")

SIGMA_BASIS = ("sigma1", "sigma2", "sigma3", "sigmaN")
SPIN_BASIS = ("alpha", "beta")
EXYA_BASIS = ("ex", "ey", "a")

_TOL = 1e-12


@dataclass(frozen=True)
class GroupElement:
    """One element: its class and its matrix actions on orbitals and spinors."""

    name: str
    class_id: int
    orbital_action: np.ndarray   # 4x4 real, dangling-bond basis
    spinor_action: np.ndarray    # 2x2 complex, unitary, det +1

    @property
    def barred(self) -> bool:
        return self.name.startswith("bar")


@dataclass(frozen=True)
class Irrep:
    name: str
    dimension: int
    characters: np.ndarray       # one complex character per class


@dataclass(frozen=True)
class RepCharacters:
    """Characters of an arbitrary (generally reducible) representation."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))
        if self.values.shape != (6,):
            raise ValueError("need one character per class (6 values)")


@dataclass(frozen=True)
class OrbitalVector:
    """Complex coefficient vector over a named single-particle basis."""

    basis: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "coeffs", coeffs)
        if len(self.basis) != coeffs.shape[0]:
            raise ValueError("coefficient length does not match basis")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def sigma_vector(coeffs) -> OrbitalVector:
    return OrbitalVector(SIGMA_BASIS, coeffs)


# Character table.  Columns follow CLASS_LABELS.  The A2 row on the barred
# reflections is -1: single-valued irreps repeat their characters on barred
# classes, and row orthogonality fails otherwise.
_CHARACTERS = {
    "A1":    [1, 1, 1, 1, 1, 1],
    "A2":    [1, 1, -1, 1, 1, -1],
    "E":     [2, -1, 0, 2, -1, 0],
    "E1/2":  [2, 1, 0, -2, -1, 0],
    "1E3/2": [1, -1, 1j, -1, 1, -1j],
    "2E3/2": [1, -1, -1j, -1, 1, 1j],
}

_IRREP_DIMS = {"A1": 1, "A2": 1, "E": 2, "E1/2": 2, "1E3/2": 1, "2E3/2": 1}


def _spin_rotation(angle: float, axis) -> np.ndarray:
    """exp(-i angle/2 n.sigma) for a unit axis n."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    ns = n[0] * sx + n[1] * sy + n[2] * sz
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * ns


def _build_elements():
    ident = np.eye(4)
    # C3+ maps sigma1 -> sigma2 -> sigma3 -> sigma1, sigmaN fixed.
    c3p = np.zeros((4, 4))
    c3p[1, 0] = c3p[2, 1] = c3p[0, 2] = c3p[3, 3] = 1.0
    c3m = c3p.T
    # sv1 contains carbon 1: fixes sigma1 and sigmaN, swaps sigma2/sigma3.
    sv1 = np.eye(4)[[0, 2, 1, 3]]

    u_e = np.eye(2, dtype=complex)
    u_c3p = _spin_rotation(2 * np.pi / 3, (0, 0, 1))
    u_c3m = _spin_rotation(-2 * np.pi / 3, (0, 0, 1))
    # Mirror plane sv1 spans x-z; its normal is y.
    u_sv1 = _spin_rotation(np.pi, (0, 1, 0))
    # Conjugates by C3 keep the three reflections in one class.
    u_sv2 = u_c3p @ u_sv1 @ u_c3p.conj().T
    u_sv3 = u_c3m @ u_sv1 @ u_c3m.conj().T
    sv2 = c3p @ sv1 @ c3m
    sv3 = c3m @ sv1 @ c3p

    orb = [ident, c3p, c3m, sv1, sv2, sv3]
    spin = [u_e, u_c3p, u_c3m, u_sv1, u_sv2, u_sv3]
    cls = [0, 1, 1, 2, 2, 2]

    elements = []
    for i, name in enumerate(ELEMENT_NAMES[:6]):
        elements.append(GroupElement(name, cls[i], orb[i], spin[i]))
    for i, name in enumerate(ELEMENT_NAMES[6:]):
        elements.append(GroupElement(name, cls[i] + 3, orb[i], -spin[i]))
    return tuple(elements)


def _match_element(elements, orbital, spinor):
    for k, el in enumerate(elements):
        if (np.allclose(el.orbital_action, orbital, atol=1e-10)
                and np.allclose(el.spinor_action, spinor, atol=1e-10)):
            return k
    return None


class DoubleGroupC3v:
    """The order-12 double group with its character table and projectors."""

    def __init__(self):
        self.elements = _build_elements()
        self.order = ORDER
        self.irreps = {
            name: Irrep(name, _IRREP_DIMS[name], np.array(_CHARACTERS[name], dtype=complex))
            for name in IRREP_NAMES
        }
        self._mult = self._multiplication_table()
        self._check_group_axioms()
        self._check_class_structure()
        self._check_character_table()
        self._exya_actions = tuple(self._exya_action(el) for el in self.elements)

    # -- construction-time verification ------------------------------------

    def _multiplication_table(self):
        table = np.full((ORDER, ORDER), -1, dtype=int)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                k = _match_element(
                    self.elements,
                    a.orbital_action @ b.orbital_action,
                    a.spinor_action @ b.spinor_action,
                )
                if k is None:
                    raise AssertionError(f"group not closed at {a.name} * {b.name}")
                table[i, j] = k
        return table

    def _check_group_axioms(self):
        # identity, inverses, and unitarity of every action
        for i, el in enumerate(self.elements):
            if not np.allclose(el.orbital_action @ el.orbital_action.T, np.eye(4), atol=_TOL):
                raise AssertionError(f"orbital action of {el.name} is not orthogonal")
            u = el.spinor_action
            if not np.allclose(u @ u.conj().T, np.eye(2), atol=_TOL):
                raise AssertionError(f"spinor action of {el.name} is not unitary")
            if abs(np.linalg.det(u) - 1) > 1e-10:
                raise AssertionError(f"spinor action of {el.name} has det != 1")
            if 0 not in self._mult[i, :]:
                raise AssertionError(f"{el.name} has no inverse")

    def _check_class_structure(self):
        inv = [int(np.where(self._mult[i, :] == 0)[0][0]) for i in range(ORDER)]
        for i, el in enumerate(self.elements):
            orbit = {int(self._mult[self._mult[g, i], inv[g]]) for g in range(ORDER)}
            ids = {self.elements[k].class_id for k in orbit}
            if ids != {el.class_id}:
                raise AssertionError(f"conjugacy class of {el.name} does not match its label")
        sizes = np.bincount([el.class_id for el in self.elements], minlength=6)
        if not np.array_equal(sizes, CLASS_SIZES):
            raise AssertionError("class sizes disagree with the stored table")

    def _check_character_table(self):
        chi = np.array([self.irreps[n].characters for n in IRREP_NAMES])
        gram = (chi * CLASS_SIZES) @ chi.conj().T / ORDER
        if not np.allclose(gram, np.eye(6), atol=_TOL):
            raise AssertionError("character rows are not orthonormal")
        # column orthogonality: sum_i chi_i(c) chi_i(c')* = (h/n_c) delta_cc'
        col = chi.conj().T @ chi
        expect = np.diag(ORDER / CLASS_SIZES)
        if not np.allclose(col, expect, atol=_TOL):
            raise AssertionError("character columns are not orthogonal")
        if sum(d * d for d in _IRREP_DIMS.values()) != ORDER:
            raise AssertionError("irrep dimensions do not sum to the group order")
        # spinor characters must agree with the explicit 2x2 matrices
        for el in self.elements:
            tr = np.trace(el.spinor_action)
            if abs(tr - self.irreps["E1/2"].characters[el.class_id]) > 1e-10:
                raise AssertionError(f"spinor trace of {el.name} disagrees with E1/2")

    # -- basic queries ------------------------------------------------------

    def element(self, name: str) -> GroupElement:
        for el in self.elements:
            if el.name == name:
                return el
        raise KeyError(name)

    def irrep(self, name: str) -> Irrep:
        return self.irreps[name]

    def element_characters(self, irrep_name: str) -> np.ndarray:
        """Character of each of the 12 elements (class character broadcast)."""
        chi = self.irreps[irrep_name].characters
        return np.array([chi[el.class_id] for el in self.elements])

    def _exya_action(self, el: GroupElement) -> np.ndarray:
        """3x3 action on the projected orbital basis (ex, ey, a)."""
        ex = np.array([2, -1, -1, 0]) / np.sqrt(6)
        ey = np.array([0, 1, -1, 0]) / np.sqrt(2)
        e = np.stack([ex, ey])
        d2 = e @ el.orbital_action @ e.T
        out = np.zeros((3, 3), dtype=complex)
        out[:2, :2] = d2
        out[2, 2] = 1.0
        return out

    def action(self, el: GroupElement, basis) -> np.ndarray:
        """Matrix of `el` on one of the supported single-particle bases."""
        basis = tuple(basis)
        if basis == SIGMA_BASIS:
            return el.orbital_action.astype(complex)
        if basis == SPIN_BASIS:
            return el.spinor_action
        if basis == EXYA_BASIS:
            return self._exya_actions[self.elements.index(el)]
        raise ValueError(f"no group action registered for basis {basis}")

    # -- representation theory ----------------------------------------------

    def rep_characters(self, actions) -> RepCharacters:
        """Characters of a representation given its 12 element matrices."""
        values = np.zeros(6, dtype=complex)
        seen = [False] * 6
        for el, mat in zip(self.elements, actions):
            tr = np.trace(mat)
            if seen[el.class_id] and abs(values[el.class_id] - tr) > 1e-9:
                raise ValueError("matrices in one class have different traces")
            values[el.class_id] = tr
            seen[el.class_id] = True
        return RepCharacters(values)

    def reduce(self, rep: RepCharacters) -> dict:
        """Multiplicity of each irrep in a representation, from its characters.

        Raises ValueError when the multiplicities are not non-negative
        integers to 1e-9 (the character vector then does not belong to a
        representation of the group).
        """
        out = {}
        for name in IRREP_NAMES:
            chi = self.irreps[name].characters
            m = np.sum(CLASS_SIZES * rep.values * chi.conj()) / ORDER
            if abs(m.imag) > 1e-9 or abs(m.real - round(m.real)) > 1e-9:
                raise ValueError(f"non-integer multiplicity {m} for {name}: "
                                 "not a valid representation")
            mi = int(round(m.real))
            if mi < 0:
                raise ValueError(f"negative multiplicity {mi} for {name}: "
                                 "not a valid representation")
            if mi:
                out[name] = mi
        return out

    def direct_product(self, r1: str | Irrep, r2: str | Irrep) -> RepCharacters:
        c1 = self.irreps[r1].characters if isinstance(r1, str) else r1.characters
        c2 = self.irreps[r2].characters if isinstance(r2, str) else r2.characters
        return RepCharacters(c1 * c2)

    def matrix_element_allowed(self, bra: str, op: str, ket: str) -> bool:
        """True iff <bra| op |ket> may be nonzero by symmetry.

        The product representation bra* x op x ket must contain the totally
        symmetric irrep.
        """
        prod = (self.irreps[bra].characters.conj()
                * self.irreps[op].characters
                * self.irreps[ket].characters)
        mult = self.reduce(RepCharacters(prod))
        return mult.get("A1", 0) > 0

    def projector(self, irrep_name: str, actions) -> np.ndarray:
        """P = (l_r/h) sum_g chi_r(g)* R(g) for a representation `actions`."""
        ir = self.irreps[irrep_name]
        chis = self.element_characters(irrep_name)
        dim = np.asarray(actions[0]).shape[0]
        p = np.zeros((dim, dim), dtype=complex)
        for chi, mat in zip(chis, actions):
            p += np.conj(chi) * mat
        return ir.dimension / ORDER * p

    def project(self, vectors, irrep: str | Irrep, tol: float = 1e-9):
        """Project vectors onto one irrep and orthonormalize the image.

        Orthonormalization is sequential in input order, which pins the
        orientation of degenerate partners (the first vector with a nonzero
        image fixes the first partner).  Phases are normalized so the largest
        coefficient is real positive.  Returns [] for an empty image.
        """
        name = irrep if isinstance(irrep, str) else irrep.name
        if not vectors:
            return []
        basis = vectors[0].basis
        actions = [self.action(el, basis) for el in self.elements]
        p = self.projector(name, actions)
        if not np.allclose(p @ p, p, atol=1e-9):
            raise AssertionError("projector is not idempotent")
        out = []
        for v in vectors:
            if tuple(v.basis) != tuple(basis):
                raise ValueError("all vectors must share one basis")
            w = p @ v.coeffs
            for u in out:
                w = w - u.coeffs * np.vdot(u.coeffs, w)
            norm = np.linalg.norm(w)
            if norm > tol:
                w = w / norm
                # first coefficient within rounding of the maximum fixes the phase
                mags = np.abs(w)
                k = int(np.nonzero(mags >= mags.max() - 1e-9)[0][0])
                phase = w[k] / abs(w[k])
                out.append(OrbitalVector(basis, w / phase))
        return out


_GROUP = None


def build_double_group_c3v() -> DoubleGroupC3v:
    """Construct (and cache) the verified double group."""
    global _GROUP
    if _GROUP is None:
        _GROUP = DoubleGroupC3v()
    return _GROUP
