"""Fine structure of the negatively charged NV center from symmetry alone.

Subpackages
-----------
symm     -- the C3v double group: characters, reduction, projectors
fock     -- two-hole Slater-determinant space and operator embeddings
nvmodel  -- closed-form Hamiltonian builders (spin-orbit, spin-spin,
            strain, electric field, Coulomb ordering)
quad     -- numerical integrals over a Gaussian dangling-bond model
spectra  -- diagonalization, branch tracking, optical selection rules,
            polarization analysis, parameter scans
cli      -- the ``nvlevels`` command-line interface
"""

__version__ = "0.1.0"
