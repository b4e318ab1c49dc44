"""Six-vertex model: R-matrix, Yang-Baxter checks, monodromy and transfer
matrices, partition functions, the spin-chain link, and square-ice entropy.

R-matrix in the basis (++, +-, -+, --), first factor = auxiliary/horizontal:

        [ a          ]
    R = [   b  c     ]      a = rho sh(l + eta),  b = rho sh(l),  c = rho sh(eta)
        [   c  b     ]
        [          a ]

Conventions: the monodromy T_0(l) = R_{0,L}(l - xi_L) ... R_{0,1}(l - xi_1)
acts on aux (x) site_1 (x) ... (x) site_L with the auxiliary slot slowest;
operator products apply right to left, so the aux space sweeps site 1 first.
At l = 0 (homogeneous, xi = 0) the trace over the auxiliary space is
rho^L sh^L(eta) times the cyclic shift that moves the spin pattern forward by
one site, i.e. the inverse of the momentum-convention shift operator built in
the ed module.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .basis import build_sector_basis
from .ed import FULL_SPACE, OperatorMatrix, _pack, build_xxz_hamiltonian

FD_STEP = 1e-5


@dataclass
class VertexWeights:
    """Boltzmann weights (a, b, c), optionally carrying the hyperbolic
    parameterization (rho, lam, eta) and inhomogeneities xi."""
    a: complex
    b: complex
    c: complex
    rho: complex = None
    lam: complex = None
    eta: complex = None
    xi: tuple = None
    degenerate: bool = False

    @classmethod
    def from_parameters(cls, rho, lam, eta, xi=None):
        a = rho * np.sinh(lam + eta)
        b = rho * np.sinh(lam)
        c = rho * np.sinh(eta)
        degenerate = abs(c) < 1e-14
        w = cls(a, b, c, rho=rho, lam=lam, eta=eta,
                xi=tuple(xi) if xi is not None else None, degenerate=degenerate)
        w.validate()
        return w

    @classmethod
    def ice(cls):
        """The ice point a = b = c = 1, built directly from the weights (the
        hyperbolic parameterization is bypassed there on purpose)."""
        return cls(1.0, 1.0, 1.0)

    @classmethod
    def from_weights(cls, a, b, c):
        """Direct weights; attempts the (rho, lam, eta) parameterization and
        flags the excluded points (a +- b = -+c, c or vanishing weights)."""
        w = cls(a, b, c)
        if a == 0 or b == 0 or c == 0 or (a + b) in (c, -c) or (a - b) in (c, -c):
            w.degenerate = True
            return w
        delta = (a * a + b * b - c * c) / (2 * a * b)
        eta = np.arccosh(complex(delta))
        if abs(np.sinh(eta)) < 1e-14:
            w.degenerate = True
            return w
        lam = np.arcsinh(b / c * np.sinh(eta))
        rho = c / np.sinh(eta)
        if abs(rho * np.sinh(lam + eta) - a) < 1e-9 * max(1.0, abs(a)):
            w.rho, w.lam, w.eta = rho, lam, eta
        else:
            w.degenerate = True
        return w

    @property
    def parameterized(self):
        return self.eta is not None

    def validate(self):
        if self.parameterized:
            rec = (self.rho * np.sinh(self.lam + self.eta),
                   self.rho * np.sinh(self.lam), self.rho * np.sinh(self.eta))
            stored = (self.a, self.b, self.c)
            scale = max(1.0, *(abs(x) for x in stored))
            if max(abs(r - s) for r, s in zip(rec, stored)) > 1e-12 * scale:
                raise ValueError("parameterization does not reproduce the weights")

    def inhomogeneities(self, L):
        if self.xi is None:
            return np.zeros(L, complex)
        if len(self.xi) != L:
            raise ValueError("need one inhomogeneity per site")
        return np.asarray(self.xi, complex)


@dataclass
class TransferMatrix:
    L: int
    lam: complex
    matrix: object = field(repr=False)

    @property
    def dim(self):
        return self.matrix.shape[0]


def r_matrix_from_weights(a, b, c):
    R = np.zeros((4, 4), complex)
    R[0, 0] = R[3, 3] = a
    R[1, 1] = R[2, 2] = b
    R[1, 2] = R[2, 1] = c
    return R


def r_matrix(lam, eta, rho=1.0):
    """R(l) in the hyperbolic parameterization; R(0) = rho sh(eta) P with P
    the transposition, and eta = 0 degenerates to rho sh(l) times the identity."""
    return r_matrix_from_weights(rho * np.sinh(lam + eta), rho * np.sinh(lam),
                                 rho * np.sinh(eta))


def _embed_pair(R4, pos0, pos1, n):
    """Sparse embedding of a two-site operator on tensor slots (pos0, pos1)
    out of n slots, slot 0 slowest."""
    shift0 = n - 1 - pos0
    shift1 = n - 1 - pos1
    dim = 2 ** n
    idx = np.arange(dim)
    b0 = (idx >> shift0) & 1
    b1 = (idx >> shift1) & 1
    rows, cols, vals = [], [], []
    for out0 in range(2):
        for out1 in range(2):
            for in0 in range(2):
                for in1 in range(2):
                    v = R4[2 * out0 + out1, 2 * in0 + in1]
                    if v == 0:
                        continue
                    mask = (b0 == in0) & (b1 == in1)
                    src = idx[mask]
                    dst = (src & ~(1 << shift0) & ~(1 << shift1)) \
                        | (out0 << shift0) | (out1 << shift1)
                    rows.append(dst)
                    cols.append(src)
                    vals.append(np.full(src.shape, v, complex))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    return sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()


def monodromy(lam, L, weights):
    """Inhomogeneous monodromy matrix T_0(l) on the 2^(L+1)-dim aux (x) chain
    space: the ordered product R_{0,L}(l - xi_L) ... R_{0,1}(l - xi_1).

    Returns a dense array for L <= 10 and scipy CSR above (L <= 14)."""
    if L > 14:
        raise ValueError("monodromy supported up to L = 14")
    n = L + 1
    xi = weights.inhomogeneities(L)
    T = None
    for j in range(1, L + 1):  # R_{0,1} acts first
        if weights.parameterized:
            R4 = r_matrix(lam - xi[j - 1], weights.eta, weights.rho)
        else:
            R4 = r_matrix_from_weights(weights.a, weights.b, weights.c)
        Rj = _embed_pair(R4, 0, j, n)
        T = Rj if T is None else Rj @ T
    return T.toarray() if L <= 10 else T


def monodromy_trace(T, L):
    """Partial trace over the auxiliary slot (slot 0)."""
    d = 2 ** L
    if sp.issparse(T):
        return (T[:d, :d] + T[d:, d:]).tocsr()
    return T[:d, :d] + T[d:, d:]


def transfer(lam, L, weights):
    """Transfer matrix tr_0 T_0(l) on the 2^L chain space."""
    return TransferMatrix(L, lam, monodromy_trace(monodromy(lam, L, weights), L))


def transfer_sector_block(L, N, weights, lam=0.0):
    """Transfer matrix restricted to the N-down-spins sector, contracted
    through the 2x2 auxiliary space site by site (no 2^(L+1) intermediate).

    The transfer conserves the arrow number, so the full matrix is the direct
    sum of these blocks."""
    if weights.parameterized:
        xi = weights.inhomogeneities(L)
        Rs = [r_matrix(lam - xi[j], weights.eta, weights.rho) for j in range(L)]
    else:
        Rs = [r_matrix_from_weights(weights.a, weights.b, weights.c)] * L
    basis = build_sector_basis(L, N)
    dim = basis.dim
    bits = np.array([[(s >> (L - x)) & 1 for x in range(1, L + 1)]
                     for s in basis.states])
    t = np.zeros((dim, dim), complex)
    # per site: aux matrix M[s_out, s_in][a_out, a_in] = R[(a_out,s_out),(a_in,s_in)]
    Ms = [R.reshape(2, 2, 2, 2).transpose(1, 3, 0, 2) for R in Rs]
    for col in range(dim):
        sin = bits[col]
        P = None
        for j in range(L - 1, -1, -1):  # aux-space product M_L ... M_1
            Mj = Ms[j][bits[:, j], sin[j]]
            P = Mj.copy() if P is None else np.einsum("nab,nbc->nac", P, Mj)
        t[:, col] = P[:, 0, 0] + P[:, 1, 1]
    return t


def ybe_residual(lam, mu, nu, eta, rho=1.0):
    """Max-entry magnitude of R12 R13 R23 - R23 R13 R12 on the 8-dim space,
    with arguments l - m, l - n, m - n."""
    def emb(R4, p0, p1):
        return _embed_pair(R4, p0, p1, 3).toarray()
    R12 = emb(r_matrix(lam - mu, eta, rho), 0, 1)
    R13 = emb(r_matrix(lam - nu, eta, rho), 0, 2)
    R23 = emb(r_matrix(mu - nu, eta, rho), 1, 2)
    return float(np.max(np.abs(R12 @ R13 @ R23 - R23 @ R13 @ R12)))


def rtt_residual(lam, mu, L, weights):
    """Max-entry magnitude of R_00'(l-m) T_0(l) T_0'(m) - T_0'(m) T_0(l) R_00'(l-m)."""
    d = 2 ** L
    T_l = np.asarray(monodromy(lam, L, weights)).reshape(2, d, 2, d)
    T_m = np.asarray(monodromy(mu, L, weights)).reshape(2, d, 2, d)
    # spaces ordered (0, 0', chain)
    T0 = np.einsum("apbq,cd->acpbdq", T_l, np.eye(2)).reshape(4 * d, 4 * d)
    T0p = np.einsum("cpdq,ab->acpbdq", T_m, np.eye(2)).reshape(4 * d, 4 * d)
    R4 = r_matrix(lam - mu, weights.eta, weights.rho)
    R = np.einsum("acbd,pq->acpbdq",
                  R4.reshape(2, 2, 2, 2), np.eye(d)).reshape(4 * d, 4 * d)
    return float(np.max(np.abs(R @ T0 @ T0p - T0p @ T0 @ R)))


def hamiltonian_from_transfer(L, eta, rho=1.0, J=1.0, step=FD_STEP):
    """Reconstruct the XXZ Hamiltonian from the homogeneous transfer matrix:

        H = J [ sh(eta)/2 * t(0)^{-1} t'(0) - ch(eta) L/2 ],   Delta = ch(eta),

    with t'(0) from central finite differences of step `step`.  Returns
    (OperatorMatrix, max entry deviation from the directly built Hamiltonian).
    The deviation shrinks proportionally to step^2.
    """
    if L < 3:
        raise ValueError("needs L >= 3 (distinct-site shift)")
    w = VertexWeights.from_parameters(rho, 0.0, eta)
    if abs(np.sinh(eta)) < 1e-12:
        raise ValueError("sh(eta) = 0 makes t(0) singular")
    t0 = np.asarray(transfer(0.0, L, w).matrix)
    tp = np.asarray(transfer(step, L, w).matrix)
    tm = np.asarray(transfer(-step, L, w).matrix)
    tprime = (tp - tm) / (2 * step)
    delta = complex(np.cosh(eta))
    if abs(delta.imag) > 1e-12:
        raise ValueError("ch(eta) must be real to compare with the XXZ chain")
    h_rec = J * (np.sinh(eta) / 2 * (np.linalg.inv(t0) @ tprime)
                 - delta.real * L / 2 * np.eye(2 ** L))
    h_dir = J * build_xxz_hamiltonian(L, delta.real).dense()
    dev = float(np.max(np.abs(h_rec - h_dir)))
    return _pack(h_rec, FULL_SPACE, hermitian=False), dev


def partition_function(L, M, a, b, c):
    """Z_{L,M}(a,b,c) = tr (tr_0 T_0)^M via the sector blocks of the transfer
    matrix (the transfer conserves the arrow number, so the trace is the sum
    of block traces)."""
    if M < 1:
        raise ValueError("M >= 1 required")
    w = VertexWeights(a, b, c)
    total = 0.0 + 0.0j
    for N in range(L + 1):
        tb = transfer_sector_block(L, N, w)
        total += np.trace(np.linalg.matrix_power(tb, M))
    return complex(total)


def _vertex_weight_table(a, b, c, exact):
    W = np.zeros((2, 2, 2, 2), dtype=object if exact else complex)
    # (west, south, east, north); 1 = arrow in the positive direction
    W[1, 1, 1, 1] = W[0, 0, 0, 0] = a
    W[1, 0, 1, 0] = W[0, 1, 0, 1] = b
    W[1, 0, 0, 1] = W[0, 1, 1, 0] = c
    return W


def enumerate_partition(L, M, a, b, c):
    """Brute-force partition function: enumerate all 2^(L*M) vertical-edge
    configurations; for each, sum the horizontal edges of every row as a trace
    of 2x2 weight products around the periodic row.

    Independent of the R-matrix/transfer code path.  With integer weights the
    sum is carried in exact integer arithmetic.
    """
    if L * M > 16:
        raise ValueError("enumeration guard: L*M <= 16")
    exact = all(isinstance(x, (int, np.integer)) for x in (a, b, c))
    W = _vertex_weight_table(a, b, c, exact)
    total = 0 if exact else 0.0 + 0.0j
    for cfg in range(2 ** (L * M)):
        v = [(cfg >> i) & 1 for i in range(L * M)]
        wgt = 1 if exact else 1.0 + 0.0j
        for i in range(M):
            s_row = v[i * L:(i + 1) * L]
            n_row = v[((i + 1) % M) * L:((i + 1) % M) * L + L]
            m00 = m11 = 1 if exact else 1.0
            m01 = m10 = 0 if exact else 0.0
            for j in range(L):
                a00 = W[0, s_row[j], 0, n_row[j]]
                a01 = W[0, s_row[j], 1, n_row[j]]
                a10 = W[1, s_row[j], 0, n_row[j]]
                a11 = W[1, s_row[j], 1, n_row[j]]
                m00, m01, m10, m11 = (m00 * a00 + m01 * a10, m00 * a01 + m01 * a11,
                                      m10 * a00 + m11 * a10, m10 * a01 + m11 * a11)
            wgt *= m00 + m11
            if wgt == 0:
                break
        total += wgt
    return total


def largest_transfer_eigenvalue(tb, tol=1e-10, max_iter=20000, seed=0):
    """Dominant eigenvalue of a non-negative transfer block by power iteration
    (positive start vector), with a dense-eigendecomposition guard when the
    iteration stalls."""
    dim = tb.shape[0]
    rng = np.random.default_rng(seed)
    v = np.ones(dim) + 0.01 * rng.random(dim)
    v /= np.linalg.norm(v)
    lam_old = 0.0
    for _ in range(max_iter):
        w = tb @ v
        nrm = np.linalg.norm(w)
        if nrm == 0:
            return 0.0
        v = w / nrm
        lam = float(v @ (tb @ v))
        if abs(lam - lam_old) < tol * max(1.0, abs(lam)):
            resid = np.linalg.norm(tb @ v - lam * v)
            if resid < 1e-8 * max(1.0, abs(lam)):
                return lam
        lam_old = lam
    # deflation guard: stalled iteration, fall back to the dense spectrum
    return float(np.max(np.linalg.eigvals(tb).real))


def ice_entropy(L_max, L_min=2):
    """(1/L) ln Lambda_0 at the ice point for even L <= L_max, in the
    half-filled arrow sector, plus a least-squares s_inf + alpha/L + beta/L^2
    extrapolation.

    Returns (table, s_inf) where table is a list of (L, value).  The exact
    two-dimensional limit is (3/2) ln(4/3) = 0.43152...
    """
    if L_max % 2 or L_max > 14:
        raise ValueError("even L_max <= 14 required")
    w = VertexWeights.ice()
    table = []
    for L in range(L_min, L_max + 1, 2):
        tb = transfer_sector_block(L, L // 2, w).real
        lam0 = largest_transfer_eigenvalue(tb)
        table.append((L, float(np.log(lam0) / L)))
    Ls = np.array([row[0] for row in table], float)
    y = np.array([row[1] for row in table])
    A = np.vstack([np.ones_like(Ls), 1 / Ls, 1 / Ls ** 2]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return table, float(coef[0])
