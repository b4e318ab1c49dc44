"""Computational bases for spin-1/2 chains with a conserved number of down spins.

Conventions used throughout the package:
  - sites are numbered 1..L, site j is stored in bit L-j (site 1 is the
    slowest-varying index in Kronecker products),
  - a set bit means a down spin, the all-up state has index 0,
  - a sector is labelled by N, the number of down spins; S^z = (L - 2N)/2.
"""

from itertools import combinations
from math import comb

import numpy as np

DENSE_DIM_LIMIT = 4096  # dense matrix storage below this dimension, sparse above


def config_to_index(L, xs):
    """Index of the basis state with down spins at sites xs (1-based) in the
    full 2^L space."""
    i = 0
    for x in xs:
        i |= 1 << (L - x)
    return i


def index_to_config(L, i):
    """Down-spin sites (1-based, increasing) of a full-space basis index."""
    return tuple(x for x in range(1, L + 1) if (i >> (L - x)) & 1)


class SectorBasis:
    """Ordered basis of the fixed-N block of the 2^L spin-chain Hilbert space.

    states holds the bit configurations as integers, strictly increasing;
    index maps a configuration back to its ordinal.
    """

    def __init__(self, L, N):
        if not (0 <= N <= L):
            raise ValueError(f"down-spin count N={N} outside 0..L={L}")
        if L > 24:
            raise ValueError(f"chain length L={L} exceeds the supported limit 24")
        self.L = L
        self.N = N
        self.states = sorted(config_to_index(L, xs)
                             for xs in combinations(range(1, L + 1), N))
        self.index = {s: i for i, s in enumerate(self.states)}

    @property
    def dim(self):
        return len(self.states)

    def configs(self):
        """Iterate (ordinal, down-spin site tuple) pairs."""
        for i, s in enumerate(self.states):
            yield i, index_to_config(self.L, s)

    def __repr__(self):
        return f"SectorBasis(L={self.L}, N={self.N}, dim={self.dim})"


def build_sector_basis(L, N):
    """Enumerate the binomial(L, N) configurations with N down spins."""
    basis = SectorBasis(L, N)
    assert basis.dim == comb(L, N)
    return basis


def sector_bit_matrix(basis):
    """(dim, L) array of down-spin flags; column j-1 is site j."""
    L = basis.L
    return np.array([[(s >> (L - x)) & 1 for x in range(1, L + 1)]
                     for s in basis.states], dtype=np.int64)
