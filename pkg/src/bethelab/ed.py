"""Exact diagonalization for periodic XXX/XXZ spin-1/2 chains.

Hamiltonians (periodic boundary, site L+1 = site 1, bond sum j = 1..L taken
literally, so L = 2 counts its single bond twice):

    H_XXX = J sum_j ( s^x_j s^x_{j+1} + s^y_j s^y_{j+1} + s^z_j s^z_{j+1} - 1/4 )
    H_XXZ =   sum_j ( s^x_j s^x_{j+1} + s^y_j s^y_{j+1} + Delta (s^z_j s^z_{j+1} - 1/4) )

The module is the ground-truth oracle for the Bethe-Ansatz constructions: it
builds sector-resolved and full-space Hamiltonians, the shift operator, the
total-spin operators, and diagonalizes them.
"""

import numpy as np
import scipy.sparse as sp

from .basis import DENSE_DIM_LIMIT, SectorBasis, build_sector_basis

FULL_SPACE = "full"


class OperatorMatrix:
    """Complex matrix together with the basis it acts on.

    Storage is dense below DENSE_DIM_LIMIT and scipy sparse (CSR) above.
    `basis` is a SectorBasis or the FULL_SPACE tag.
    """

    def __init__(self, matrix, basis=FULL_SPACE, hermitian=False):
        self.matrix = matrix
        self.basis = basis
        self.hermitian = hermitian

    @property
    def dim(self):
        return self.matrix.shape[0]

    def dense(self):
        m = self.matrix
        return m.toarray() if sp.issparse(m) else np.asarray(m)

    def hermiticity_defect(self):
        m = self.dense()
        return float(np.max(np.abs(m - m.conj().T)))


class Spectrum:
    """Eigenvalues in ascending order with optional eigenvector columns."""

    def __init__(self, eigenvalues, eigenvectors=None):
        self.eigenvalues = np.asarray(eigenvalues, float)
        self.eigenvectors = eigenvectors


def _pack(matrix, basis, hermitian):
    dim = matrix.shape[0]
    if dim >= DENSE_DIM_LIMIT and not sp.issparse(matrix):
        matrix = sp.csr_matrix(matrix)
    if dim < DENSE_DIM_LIMIT and sp.issparse(matrix):
        matrix = matrix.toarray()
    return OperatorMatrix(matrix, basis, hermitian)


def _resolve_sector(L, sector):
    if sector is None or sector == FULL_SPACE:
        return None
    if isinstance(sector, SectorBasis):
        return sector
    return build_sector_basis(L, int(sector))


def _xxz_entries(L, basis, jxy, jz):
    """COO triplets of sum_j [ jxy/2 (s+s- + s-s+) + jz (s^z s^z - 1/4) ] on bonds."""
    rows, cols, vals = [], [], []
    for i, s in enumerate(basis.states):
        diag = 0.0
        for j in range(1, L + 1):
            b1 = L - j
            b2 = L - (j % L + 1)
            s1 = (s >> b1) & 1
            s2 = (s >> b2) & 1
            if s1 == s2:
                continue  # parallel bond: zz - 1/4 = 0, no flip
            diag += -0.5 * jz
            t = s ^ ((1 << b1) | (1 << b2))
            rows.append(basis.index[t])
            cols.append(i)
            vals.append(0.5 * jxy)
        if diag != 0.0:
            rows.append(i)
            cols.append(i)
            vals.append(diag)
    return rows, cols, vals


def _build_spin_hamiltonian(L, jxy, jz, sector):
    basis = _resolve_sector(L, sector)
    if basis is not None:
        bases = [basis]
    else:
        bases = [build_sector_basis(L, N) for N in range(L + 1)]
    dim = sum(b.dim for b in bases) if basis is None else basis.dim
    rows, cols, vals = [], [], []
    for b in bases:
        r, c, v = _xxz_entries(L, b, jxy, jz)
        if basis is None:
            # embed the sector block at its full-space indices
            r = [b.states[i] for i in r]
            c = [b.states[i] for i in c]
        rows += r
        cols += c
        vals += v
    n = 2 ** L if basis is None else dim
    m = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    return _pack(m, basis if basis is not None else FULL_SPACE, hermitian=True)


def build_xxx_hamiltonian(L, J=1.0, sector=None):
    """Heisenberg chain, H = J sum_j (s_j . s_{j+1} - 1/4).

    sector: None for the full 2^L space, an integer N, or a SectorBasis.
    For J < 0 the spectrum is non-negative and the all-up state has energy 0.
    """
    if L < 2:
        raise ValueError("need at least two sites")
    return _build_spin_hamiltonian(L, J, J, sector)


def build_xxz_hamiltonian(L, Delta, sector=None):
    """Heisenberg-Ising chain with anisotropy Delta; Delta = 1 is XXX at J = 1."""
    if L < 2:
        raise ValueError("need at least two sites")
    return _build_spin_hamiltonian(L, 1.0, Delta, sector)


def shift_permutation(L, direction=-1):
    """Permutation i -> i' of full-space indices moving every down-spin
    coordinate by `direction` (mod L)."""
    perm = np.empty(2 ** L, dtype=np.int64)
    for s in range(2 ** L):
        t = 0
        for x in range(1, L + 1):
            if (s >> (L - x)) & 1:
                x2 = (x - 1 + direction) % L + 1
                t |= 1 << (L - x2)
        perm[s] = t
    return perm


def build_shift_operator(L):
    """One-site translation U with U|x1,...,xN> = |x1-1,...,xN-1 (mod L)>.

    The direction is fixed so that an on-shell Bethe vector with lattice
    momentum P is an eigenvector with eigenvalue e^{iP}.  U^L = identity and
    [U, H] = 0.  The trace of the monodromy matrix at zero spectral parameter
    gives the inverse of this operator (see the six-vertex module).
    """
    if L < 2:
        raise ValueError("need at least two sites")
    perm = shift_permutation(L, direction=-1)
    n = 2 ** L
    m = sp.coo_matrix((np.ones(n), (perm, np.arange(n))), shape=(n, n)).tocsr()
    return _pack(m, FULL_SPACE, hermitian=False)


def shift_sector_matrix(basis, direction=-1):
    """Translation restricted to a SectorBasis (dense ndarray)."""
    L = basis.L
    dim = basis.dim
    m = np.zeros((dim, dim))
    for i, s in enumerate(basis.states):
        t = 0
        for x in range(1, L + 1):
            if (s >> (L - x)) & 1:
                x2 = (x - 1 + direction) % L + 1
                t |= 1 << (L - x2)
        m[basis.index[t], i] = 1.0
    return m


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], complex) / 2,
    "y": np.array([[0, -1j], [1j, 0]], complex) / 2,
    "z": np.array([[1, 0], [0, -1]], complex) / 2,
    "raise": np.array([[0, 1], [0, 0]], complex),
    "lower": np.array([[0, 0], [1, 0]], complex),
}


def build_total_spin(L, alpha):
    """Total spin operator S^alpha = sum_j s_j^alpha on the full 2^L space.

    alpha: 'x' | 'y' | 'z' | 'raise' | 'lower' | 'casimir'.
    'raise'/'lower' are S^+/S^- = S^x +- i S^y; 'casimir' is (S^x)^2 + (S^y)^2
    + (S^z)^2 with eigenvalues S(S+1).

    Basis note: a set bit is a down spin, so the single-site raising operator
    clears a bit.
    """
    if L < 1:
        raise ValueError("need at least one site")
    n = 2 ** L
    if alpha == "casimir":
        total = sp.csr_matrix((n, n), dtype=complex)
        for ax in ("x", "y", "z"):
            m = build_total_spin(L, ax).matrix
            m = sp.csr_matrix(m)
            total = total + m @ m
        return _pack(total, FULL_SPACE, hermitian=True)
    if alpha not in _PAULI:
        raise ValueError(f"unknown spin component {alpha!r}")
    rows, cols, vals = [], [], []
    op = _PAULI[alpha]
    for s in range(n):
        for x in range(1, L + 1):
            bit = (s >> (L - x)) & 1
            # local basis (up, down) = (0, 1)
            for out in range(2):
                v = op[out, bit]
                if v != 0:
                    t = (s & ~(1 << (L - x))) | (out << (L - x))
                    rows.append(t)
                    cols.append(s)
                    vals.append(v)
    m = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    return _pack(m, FULL_SPACE, hermitian=alpha in ("x", "y", "z"))


def splus_sector_matrix(L, N):
    """S^+ restricted to sectors: maps the N block to the N-1 block."""
    src = build_sector_basis(L, N)
    dst = build_sector_basis(L, N - 1)
    m = np.zeros((dst.dim, src.dim))
    for i, s in enumerate(src.states):
        for x in range(1, L + 1):
            if (s >> (L - x)) & 1:
                m[dst.index[s & ~(1 << (L - x))], i] += 1.0
    return m


def diagonalize(op, k=None):
    """Eigen-decomposition of a Hermitian OperatorMatrix.

    k: number of smallest eigenpairs, or None for the full spectrum.
    Raises ValueError for non-Hermitian input.  Every returned pair satisfies
    ||H v - E v|| < 1e-10 ||v||.
    """
    if not isinstance(op, OperatorMatrix):
        op = OperatorMatrix(op)
    if op.hermiticity_defect() > 1e-12:
        raise ValueError("matrix is not Hermitian")
    m = op.matrix
    if sp.issparse(m) and k is not None and k < op.dim - 1:
        w, v = sp.linalg.eigsh(m, k=k, which="SA")
        order = np.argsort(w)
        w, v = w[order], v[:, order]
    else:
        w, v = np.linalg.eigh(op.dense())
        if k is not None:
            w, v = w[:k], v[:, :k]
    return Spectrum(w, v)


def commutator_norm(A, B):
    """Largest entry magnitude of AB - BA."""
    a = A.matrix if isinstance(A, OperatorMatrix) else A
    b = B.matrix if isinstance(B, OperatorMatrix) else B
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    c = a @ b - b @ a
    if sp.issparse(c):
        return float(np.max(np.abs(c.toarray()))) if c.nnz else 0.0
    return float(np.max(np.abs(c)))


def multiplet_structure(spectrum, casimir, degeneracy_tol=1e-9):
    """Group eigenvalues into degenerate levels and report SU(2) content.

    Returns a list of (energy, multiplicity, spin list) where the spin list
    gives the S values of complete 2S+1 multiplets inside the level.  Raises
    if a level does not decompose into complete multiplets.
    """
    w = spectrum.eigenvalues
    v = spectrum.eigenvectors
    cas = casimir.dense()
    levels = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[start] > degeneracy_tol:
            block = v[:, start:i]
            c_eigs = np.linalg.eigvalsh(block.conj().T @ cas @ block).real
            spins = {}
            for ce in c_eigs:
                s_val = (-1 + np.sqrt(1 + 4 * max(ce, 0))) / 2
                s_round = round(2 * s_val) / 2
                if abs(s_val - s_round) > 1e-6:
                    raise ValueError(f"Casimir eigenvalue {ce} is not S(S+1)")
                spins[s_round] = spins.get(s_round, 0) + 1
            content = []
            for s_round, count in sorted(spins.items()):
                n_mult, rem = divmod(count, int(2 * s_round + 1))
                if rem:
                    raise ValueError("incomplete SU(2) multiplet in level")
                content += [s_round] * n_mult
            levels.append((w[start], i - start, content))
            start = i
    return levels
