"""Executable curve-level Lefschetz pencil constructions.

Modules: pencil (input and branch locus), monodromy (sheet permutations),
covertop (CW model and symplectic H_1), tube (tube classes), lattice
(Picard-Lefschetz transvections), jacobian (periods and rank test),
netgeom (local singularity models), cli (pipeline and reports).
"""

from .errors import VclabError

__version__ = "0.1.0"
__all__ = ["VclabError", "__version__"]
