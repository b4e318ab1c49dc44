"""bethelab: a numerical laboratory for Bethe Ansatz methods.

Spin-chain exact diagonalization, coordinate and algebraic Bethe vectors,
Bethe-equation solvers, thermodynamic-limit integral equations, six-vertex
transfer matrices, the determinant formula for Bethe-vector pairings, and the
nested Ansatz for the one-dimensional Hubbard model -- with every analytic
claim cross-checked against brute-force constructions at small system size.
"""

from . import aba, bae, basis, coordinate, ed, hubbard, serialize, sixvertex, thermo

__all__ = [
    "aba", "bae", "basis", "coordinate", "ed", "hubbard",
    "serialize", "sixvertex", "thermo",
]

__version__ = "0.1.0"
