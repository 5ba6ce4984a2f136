"""Numerical integrals over a Gaussian dangling-bond model.

The four dangling bonds are modeled by normalized spherical Gaussians on the
three carbon sites and the nitrogen site around the vacancy.  Symmetry
projection of those site functions yields evaluable orbitals a1(2), ex, ey;
from them this module computes

* the two-electron Coulomb tensor over (ex, ey), and
* the spin-spin fine-structure amplitudes (delta, delta', delta'') as
  expectation values of dipolar kernels in the antisymmetric two-hole
  spatial state built on a and ex.

Two-electron integrals use quasi-random (scrambled Sobol) 6-dimensional
sampling with importance sampling from a site-Gaussian mixture; statistical
errors come from independent scrambles.  The 1/r^3 dipolar kernels are
regularized by an erf damping with length eta and extrapolated eta -> 0 over
three values (the residual scales as eta^2 because the kernels average to
zero over angles).  Runs are bitwise reproducible for a fixed seed: the
sample stream and the reduction order are both deterministic.

Units: lengths in Angstrom, energies in GHz.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import constants as sc
from scipy.special import erf, ndtri
from scipy.stats import qmc

from .fock import TwoBodyTensor

# e^2/(4 pi eps0) / h, in GHz * Angstrom
COULOMB_GHZ_ANGSTROM = sc.e ** 2 / (4 * np.pi * sc.epsilon_0 * sc.h) * 1e10 / 1e9
# (mu0/4pi) (g_e mu_B)^2 / h, in GHz * Angstrom^3
_GE = abs(sc.physical_constants["electron g factor"][0])
_MU_B = sc.physical_constants["Bohr magneton"][0]
SPIN_SPIN_GHZ_ANGSTROM3 = (sc.mu_0 / (4 * np.pi)) * (_GE * _MU_B) ** 2 / sc.h * 1e30 / 1e9


class IntegrationError(RuntimeError):
    """Raised when a quadrature misses its target accuracy; carries the
    achieved relative error estimate."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved relative error {achieved:.3g})")
        self.achieved = achieved


# -- geometry and orbitals -----------------------------------------------------


@dataclass(frozen=True)
class DefectGeometry:
    """Positions (Angstrom) of the three carbons and the nitrogen around the
    vacancy at the origin.  Carbon 1 lies on the +x azimuth; the nitrogen
    sits on the -z side of the threefold axis."""

    carbons: np.ndarray
    nitrogen: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.carbons, dtype=float)
        n = np.asarray(self.nitrogen, dtype=float)
        object.__setattr__(self, "carbons", c)
        object.__setattr__(self, "nitrogen", n)
        if c.shape != (3, 3) or n.shape != (3,):
            raise ValueError("need three carbon positions and one nitrogen position")
        if np.hypot(n[0], n[1]) > 1e-9 * max(1.0, abs(n[2])):
            raise ValueError("nitrogen must lie on the symmetry axis")
        rot = _rotz(2 * np.pi / 3)
        if not np.allclose(rot @ c[0], c[1], atol=1e-9) or \
           not np.allclose(rot @ c[1], c[2], atol=1e-9):
            raise ValueError("carbons must be related by 120-degree rotations")

    @classmethod
    def default(cls, bond_length: float = 1.54, carbon_scale: float = 1.0,
                nitrogen_scale: float = 1.0) -> "DefectGeometry":
        """Tetrahedral nearest neighbors of the vacancy, with radial scale
        knobs for the carbon and nitrogen distances."""
        s, czc = 2 * np.sqrt(2) / 3, 1 / 3
        phis = np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
        dirs = np.column_stack([s * np.cos(phis), s * np.sin(phis),
                                np.full(3, czc)])
        carbons = bond_length * carbon_scale * dirs
        nitrogen = bond_length * nitrogen_scale * np.array([0.0, 0.0, -1.0])
        return cls(carbons, nitrogen)

    @property
    def sites(self) -> np.ndarray:
        return np.vstack([self.carbons, self.nitrogen])

    @property
    def carbon_carbon_distance(self) -> float:
        return float(np.linalg.norm(self.carbons[0] - self.carbons[1]))


@dataclass(frozen=True)
class GaussianOrbitalModel:
    """Site-Gaussian width (None picks the width giving nearest-neighbor
    carbon overlap 0.1) and the nitrogen population of the a1(2) orbital."""

    width: float | None = None
    p_n: float = 0.2

    def __post_init__(self):
        if not 0.0 <= self.p_n <= 1.0:
            raise ValueError("p_n must lie in [0, 1]")


def default_width(geom: DefectGeometry) -> float:
    """Width for which the carbon-carbon site overlap is exactly 0.1."""
    return geom.carbon_carbon_distance / (2 * np.sqrt(np.log(10.0)))


def _rotz(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


class Orbitals:
    """Evaluable orbitals as coefficient vectors over site Gaussians.

    Overlaps are exact through the site Gram matrix; `evaluate` returns
    orbital values on arbitrary point sets.  The stored orbitals are the
    symmetry-projected combinations (a, ex, ey) with a = sqrt(1-p_n) aC~ +
    sqrt(p_n) aN~, where aC~ and aN~ are the symmetrically orthogonalized
    totally symmetric combinations.
    """

    def __init__(self, centers, width, coefficients: dict):
        self.centers = np.asarray(centers, dtype=float)
        self.width = float(width)
        self.coefficients = {k: np.asarray(v, dtype=float) for k, v in coefficients.items()}
        d2 = np.sum((self.centers[:, None, :] - self.centers[None, :, :]) ** 2, axis=-1)
        self.gram = np.exp(-d2 / (4 * self.width ** 2))

    def overlap(self, name1: str, name2: str) -> float:
        c1, c2 = self.coefficients[name1], self.coefficients[name2]
        return float(c1 @ self.gram @ c2)

    def site_values(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d2 = np.sum((pts[:, None, :] - self.centers[None, :, :]) ** 2, axis=-1)
        norm = (np.pi * self.width ** 2) ** -0.75
        return norm * np.exp(-d2 / (2 * self.width ** 2))

    def evaluate(self, name: str, pts) -> np.ndarray:
        return self.site_values(pts) @ self.coefficients[name]

    def names(self):
        return tuple(self.coefficients)


def build_orbitals(geom: DefectGeometry, model: GaussianOrbitalModel) -> Orbitals:
    """Symmetry-projected, exactly normalized orbitals on the site Gaussians.

    ex and ey are orthonormal by trigonal symmetry; the two totally symmetric
    combinations (carbon ring, nitrogen) are symmetrically orthogonalized
    before mixing them with the p_n weight.  Raises when sites coincide and
    the Gram matrix degenerates.
    """
    w = model.width if model.width is not None else default_width(geom)
    centers = geom.sites
    probe = Orbitals(centers, w, {})
    gram = probe.gram
    if np.linalg.cond(gram) > 1e12:
        raise IntegrationError("site Gaussians are (nearly) linearly dependent; "
                               "normalization failed", np.inf)

    def normalized(c):
        c = np.asarray(c, dtype=float)
        n2 = c @ gram @ c
        if n2 <= 1e-300:
            raise IntegrationError("orbital has zero norm", np.inf)
        return c / np.sqrt(n2)

    ex = normalized([2.0, -1.0, -1.0, 0.0])
    ey = normalized([0.0, 1.0, -1.0, 0.0])
    a_c = normalized([1.0, 1.0, 1.0, 0.0])
    a_n = normalized([0.0, 0.0, 0.0, 1.0])
    # symmetric (Loewdin) orthogonalization of the two A1 combinations
    t = float(a_c @ gram @ a_n)
    pair = np.column_stack([a_c, a_n])
    s = np.array([[1.0, t], [t, 1.0]])
    evals, evecs = np.linalg.eigh(s)
    if evals.min() <= 1e-12:
        raise IntegrationError("A1 pair is linearly dependent", np.inf)
    s_inv_half = evecs @ np.diag(evals ** -0.5) @ evecs.T
    a_c_t, a_n_t = (pair @ s_inv_half).T
    a = np.sqrt(1.0 - model.p_n) * a_c_t + np.sqrt(model.p_n) * a_n_t
    orbs = Orbitals(centers, w, {"a": a, "ex": ex, "ey": ey,
                                 "a_c": a_c_t, "a_n": a_n_t})
    for n1, n2, want in (("ex", "ex", 1.0), ("ey", "ey", 1.0), ("a", "a", 1.0),
                         ("ex", "ey", 0.0), ("a", "ex", 0.0), ("a", "ey", 0.0)):
        if abs(orbs.overlap(n1, n2) - want) > 1e-10:
            raise AssertionError(f"<{n1}|{n2}> != {want}")
    return orbs


def overlap_quadrature(orbitals: Orbitals, name1: str, name2: str,
                       nodes: int = 64) -> float:
    """Deterministic product Gauss-Hermite check of an orbital overlap."""
    x, wts = np.polynomial.hermite.hermgauss(nodes)
    extent = float(np.max(np.linalg.norm(orbitals.centers, axis=1)))
    gamma = max(1.2 * orbitals.width, 0.35 * (extent + 3 * orbitals.width))
    pts1 = gamma * x
    xx, yy, zz = np.meshgrid(pts1, pts1, pts1, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel(), zz.ravel()])
    w3 = (wts[:, None, None] * wts[None, :, None] * wts[None, None, :]).ravel()
    f1 = orbitals.evaluate(name1, pts)
    f2 = orbitals.evaluate(name2, pts)
    jac = np.exp(np.sum((pts / gamma) ** 2, axis=1)) * gamma ** 3
    return float(np.sum(w3 * f1 * f2 * jac))


# -- quasi-random two-electron integration --------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Deterministic sampling plan for the two-electron integrals."""

    seed: int = 0
    log2_points: int = 17          # points per scramble
    scrambles: int = 8             # total points = scrambles * 2^log2_points
    eta_factors: tuple = (0.6, 0.45, 0.3)   # regularization lengths / width
    target_rel_error: float = 0.05

    @property
    def total_points(self) -> int:
        return self.scrambles * 2 ** self.log2_points


def _sample_pairs(orbitals: Orbitals, spec: QuadratureSpec):
    """Yield per-scramble (r1, r2, q1, q2) importance samples.

    The proposal is an equal mixture of isotropic Gaussians (sd = orbital
    width) on all sites, applied independently to both electrons; Sobol
    dimensions are (site1, xyz1, site2, xyz2).
    """
    centers = orbitals.centers
    m = centers.shape[0]
    w = orbitals.width
    norm = (2 * np.pi * w ** 2) ** -1.5
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.scrambles)
    for ss in seeds:
        eng = qmc.Sobol(d=8, scramble=True, seed=np.random.default_rng(ss))
        u = eng.random_base2(spec.log2_points)
        u = np.clip(u, 1e-12, 1 - 1e-12)
        out = []
        for block in (u[:, 0:4], u[:, 4:8]):
            idx = np.minimum((block[:, 0] * m).astype(int), m - 1)
            z = ndtri(block[:, 1:4])
            r = centers[idx] + w * z
            d2 = np.sum((r[:, None, :] - centers[None, :, :]) ** 2, axis=-1)
            q = norm * np.mean(np.exp(-d2 / (2 * w ** 2)), axis=1)
            out.append((r, q))
        (r1, q1), (r2, q2) = out
        yield r1, r2, q1, q2


def coulomb_tensor(orbitals: Orbitals, spec: QuadratureSpec | None = None):
    """All sixteen Coulomb entries over (ex, ey) by quasi-random sampling.

    The exact index symmetries of a real-orbital repulsion tensor
    (hermiticity, particle exchange, and bra-ket swaps within each electron)
    are enforced on the estimate; they hold for the integral identically, so
    this only removes sampling noise.  Raises IntegrationError when the
    scramble spread exceeds the target relative error.
    """
    spec = spec or QuadratureSpec()
    per_scramble = []
    for r1, r2, q1, q2 in _sample_pairs(orbitals, spec):
        ex1, ey1 = orbitals.evaluate("ex", r1), orbitals.evaluate("ey", r1)
        ex2, ey2 = orbitals.evaluate("ex", r2), orbitals.evaluate("ey", r2)
        r12 = np.linalg.norm(r1 - r2, axis=1)
        kern = COULOMB_GHZ_ANGSTROM * np.where(r12 > 1e-12, 1.0 / np.maximum(r12, 1e-12), 0.0)
        weight = kern / (q1 * q2)
        vals1 = (ex1, ey1)
        vals2 = (ex2, ey2)
        c = np.empty((2, 2, 2, 2))
        for a in range(2):
            for b in range(2):
                for cc in range(2):
                    for d in range(2):
                        c[a, b, cc, d] = np.mean(vals1[a] * vals1[cc]
                                                 * vals2[b] * vals2[d] * weight)
        # exact symmetries of the integral: exchange and real bra-ket swaps
        c = (c + np.transpose(c, (1, 0, 3, 2))) / 2
        c = (c + np.transpose(c, (2, 3, 0, 1))) / 2
        c = (c + np.transpose(c, (2, 1, 0, 3))) / 2
        per_scramble.append(c)
    stack = np.array(per_scramble)
    mean = stack.mean(axis=0)
    sigma = stack.std(axis=0, ddof=1) / np.sqrt(spec.scrambles)
    scale = np.max(np.abs(mean))
    achieved = float(np.max(sigma) / scale) if scale > 0 else np.inf
    if achieved > spec.target_rel_error:
        raise IntegrationError("Coulomb tensor did not reach the target accuracy",
                               achieved)
    return CoulombTensorResult(TwoBodyTensor.from_e_block(mean), sigma,
                               achieved, spec.total_points, spec.seed, stack)


@dataclass(frozen=True)
class CoulombTensorResult:
    tensor: TwoBodyTensor
    sigma: np.ndarray          # per-entry scramble error over (ex, ey)
    achieved_rel_error: float
    n_points: int
    seed: int
    per_scramble: np.ndarray   # (scrambles, 2, 2, 2, 2), for derived errors

    def sigma_of(self, weights) -> float:
        """Scramble error of the linear functional sum w_abcd C_abcd,
        with entry correlations taken from the per-scramble estimates."""
        w = np.asarray(weights)
        vals = np.einsum("sabcd,abcd->s", self.per_scramble, w)
        return float(vals.std(ddof=1) / np.sqrt(len(vals)))


# -- spin-spin dipolar integrals -------------------------------------------------


_DIPOLAR_KERNELS = {
    # name -> angular factor as function of direction cosines
    "zz": lambda cx, cy, cz: (1 - 3 * cz ** 2) / 4,
    "xx": lambda cx, cy, cz: (1 - 3 * cx ** 2) / 4,
    "yy": lambda cx, cy, cz: (1 - 3 * cy ** 2) / 4,
    "x2-y2": lambda cx, cy, cz: 3 * (cx ** 2 - cy ** 2) / 4,
    "xz": lambda cx, cy, cz: 3 * cx * cz / np.sqrt(2),
}


@dataclass(frozen=True)
class SpinSpinResult:
    """Fine-structure amplitudes in GHz with scramble errors and diagnostics.

    delta sets the zero-field splitting (gap 3*delta), delta_prime the A1/A2
    gap (4*delta_prime), delta_dprime the spin-mixing amplitude.  traceless
    is the sum of the three diagonal dipolar expectations (zero identically;
    its estimate checks the kernel code).  eta_values documents the
    regularization lengths extrapolated over.
    """

    delta: float
    delta_prime: float
    delta_dprime: float
    sigma: dict
    traceless: tuple
    eta_values: tuple
    n_points: int
    seed: int
    kernel_means: dict = field(default_factory=dict)


def spin_spin_parameters(orbitals: Orbitals,
                         spec: QuadratureSpec | None = None) -> SpinSpinResult:
    """Dipolar expectation values in the antisymmetric (a, ex) pair state.

    <X|K|X> = direct - exchange for each kernel K; the 1/r^3 radial factor is
    damped by erf(r/eta)^3 and extrapolated eta -> 0 quadratically over the
    spec's three lengths, scramble by scramble.
    """
    spec = spec or QuadratureSpec()
    etas = np.array(spec.eta_factors) * orbitals.width
    names = list(_DIPOLAR_KERNELS)
    per_scramble = {n: [] for n in names}
    for r1, r2, q1, q2 in _sample_pairs(orbitals, spec):
        a1 = orbitals.evaluate("a", r1)
        x1 = orbitals.evaluate("ex", r1)
        a2 = orbitals.evaluate("a", r2)
        x2 = orbitals.evaluate("ex", r2)
        direct_w = a1 * a1 * x2 * x2 / (q1 * q2)
        exch_w = a1 * x1 * a2 * x2 / (q1 * q2)
        d = r1 - r2
        rn = np.linalg.norm(d, axis=1)
        rn = np.maximum(rn, 1e-300)
        cx, cy, cz = d[:, 0] / rn, d[:, 1] / rn, d[:, 2] / rn
        radials = [_erf3_over_r3(rn, eta) for eta in etas]
        for name in names:
            ang = _DIPOLAR_KERNELS[name](cx, cy, cz)
            vals_eta = []
            for radial in radials:
                kern = SPIN_SPIN_GHZ_ANGSTROM3 * ang * radial
                vals_eta.append(np.mean((direct_w - exch_w) * kern))
            per_scramble[name].append(_extrapolate_eta(etas, np.array(vals_eta)))
    stats = {}
    for name in names:
        arr = np.array(per_scramble[name])
        if not np.all(np.isfinite(arr)):
            raise IntegrationError(
                f"dipolar kernel '{name}' produced non-finite estimates "
                "(short-distance handling failed)", np.inf)
        stats[name] = (arr.mean(), arr.std(ddof=1) / np.sqrt(spec.scrambles))
    trace_vals = np.array(per_scramble["zz"]) + np.array(per_scramble["xx"]) \
        + np.array(per_scramble["yy"])
    traceless = (float(trace_vals.mean()),
                 float(trace_vals.std(ddof=1) / np.sqrt(spec.scrambles)))
    return SpinSpinResult(
        delta=float(stats["zz"][0]),
        delta_prime=float(stats["x2-y2"][0]),
        delta_dprime=float(stats["xz"][0]),
        sigma={"delta": float(stats["zz"][1]),
               "delta_prime": float(stats["x2-y2"][1]),
               "delta_dprime": float(stats["xz"][1])},
        traceless=traceless,
        eta_values=tuple(float(e) for e in etas),
        n_points=spec.total_points,
        seed=spec.seed,
        kernel_means={k: (float(v[0]), float(v[1])) for k, v in stats.items()},
    )


def _erf3_over_r3(r, eta):
    # finite r -> 0 limit of the damped kernel: (2/(sqrt(pi) eta))^3
    limit = (2 / (np.sqrt(np.pi) * eta)) ** 3
    safe = np.maximum(r, 1e-30)
    return np.where(r < 1e-12, limit, erf(safe / eta) ** 3 / safe ** 3)


def _extrapolate_eta(etas, values):
    """Least-squares fit v(eta) = v0 + c eta^2, return v0."""
    a = np.column_stack([np.ones_like(etas), etas ** 2])
    coef, *_ = np.linalg.lstsq(a, values, rcond=None)
    return coef[0]


def sweep_nitrogen_population(geom: DefectGeometry, model: GaussianOrbitalModel,
                              p_values, spec: QuadratureSpec | None = None):
    """Spin-spin amplitudes across the nitrogen population of a1(2).

    Returns (results, trend) where trend reports the monotonicity and sign
    changes of each amplitude over the sweep (data for plotting; no
    quantitative claims are attached).
    """
    spec = spec or QuadratureSpec()
    results = []
    for p in p_values:
        orbs = build_orbitals(geom, GaussianOrbitalModel(model.width, float(p)))
        results.append(spin_spin_parameters(orbs, spec))
    trend = {}
    for key in ("delta", "delta_prime", "delta_dprime"):
        vals = np.array([getattr(r, key) for r in results])
        diffs = np.diff(vals)
        if np.all(diffs >= 0):
            direction = "non-decreasing"
        elif np.all(diffs <= 0):
            direction = "non-increasing"
        else:
            direction = "non-monotonic"
        crossings = int(np.sum(np.abs(np.diff(np.sign(vals))) > 0))
        trend[key] = {"direction": direction, "sign_changes": crossings}
    return results, trend
