"""Nested Bethe Ansatz for the one-dimensional Hubbard model.

    H = - sum_{j,s} (c+_{j,s} c_{j+1,s} + c+_{j+1,s} c_{j,s})
        + u sum_j (1 - 2 n_{j,up})(1 - 2 n_{j,dn}),

periodic (c_{L+1} = c_1; the bond sum is taken literally, so L = 2 hops count
twice; L = 1 has no hopping and its four levels are {u, -u, -u, u}).

Fermion conventions: orbital p = 2(x-1) + s, site-major with up before down;
basis states are ascending creation strings, and c+_p / c_p carry the sign
(-1)^(number of occupied orbitals below p).

Eigenstates in the (N electrons, M down spins) block carry N charge momenta
k_j and M spin rapidities l_l solving

    e^{i k_j L} = prod_l (l_l - sin k_j - iu)/(l_l - sin k_j + iu),
    prod_j (l_l - sin k_j - iu)/(l_l - sin k_j + iu)
        = prod_{m != l} (l_l - l_m - 2iu)/(l_l - l_m + 2iu),

with E = -2 sum cos k_j + u(L - 2N) and P = sum k_j mod 2pi.
"""

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .ed import _pack

FACTORIAL_GUARD_N = 6
FACTORIAL_GUARD_M = 2


@dataclass
class NestedRoots:
    """Charge momenta and spin rapidities of one nested Bethe state."""
    L: int
    k: np.ndarray
    lam: np.ndarray
    u: float

    def __post_init__(self):
        self.k = np.asarray(self.k, complex)
        self.lam = np.asarray(self.lam, complex)
        if 2 * len(self.lam) > len(self.k) or len(self.k) > self.L:
            raise ValueError("need 2M <= N <= L")

    @property
    def N(self):
        return len(self.k)

    @property
    def M(self):
        return len(self.lam)


def orbital(x, s):
    """Orbital index of (1-based site x, spin s in {0 up, 1 down})."""
    return 2 * (x - 1) + s


class FermionBasis:
    """Occupation basis of the (N, M) block: pairs of up/down bit masks with
    bit x-1 set when site x is occupied.  (The Fock block exists whenever both
    spin populations fit on the lattice; the 2M <= N <= L restriction applies
    to nested root sets, not to the basis.)"""

    def __init__(self, L, N, M):
        if not (0 <= M <= L and 0 <= N - M <= L):
            raise ValueError("spin populations must fit on the lattice")
        self.L, self.N, self.M = L, N, M
        ups = list(combinations(range(L), N - M))
        dns = list(combinations(range(L), M))
        self.states = [(sum(1 << x for x in u), sum(1 << x for x in d))
                       for u in ups for d in dns]
        self.index = {s: i for i, s in enumerate(self.states)}

    @property
    def dim(self):
        return len(self.states)

    def combined_mask(self, um, dm):
        m = 0
        for x in range(self.L):
            if (um >> x) & 1:
                m |= 1 << (2 * x)
            if (dm >> x) & 1:
                m |= 1 << (2 * x + 1)
        return m


def _popcount_below(mask, p):
    return bin(mask & ((1 << p) - 1)).count("1")


def build_hubbard_hamiltonian(L, u, sector):
    """Hubbard Hamiltonian in the (N, M) block (sector a tuple or FermionBasis)."""
    if L > 8:
        raise ValueError("full blocks supported up to L = 8")
    basis = sector if isinstance(sector, FermionBasis) else FermionBasis(L, *sector)
    dim = basis.dim
    H = np.zeros((dim, dim))
    for i, (um, dm) in enumerate(basis.states):
        diag = 0.0
        for x in range(L):
            nu = (um >> x) & 1
            nd = (dm >> x) & 1
            diag += u * (1 - 2 * nu) * (1 - 2 * nd)
        H[i, i] += diag
        if L == 1:
            continue
        for j in range(L):
            jp = (j + 1) % L
            for s, mask in ((0, um), (1, dm)):
                for src, dst in ((jp, j), (j, jp)):
                    if not ((mask >> src) & 1) or ((mask >> dst) & 1):
                        continue
                    cm = basis.combined_mask(um, dm)
                    sgn = (-1) ** _popcount_below(cm, 2 * src + s)
                    cm2 = cm & ~(1 << (2 * src + s))
                    sgn *= (-1) ** _popcount_below(cm2, 2 * dst + s)
                    new = mask ^ (1 << src) | (1 << dst)
                    key = (new, dm) if s == 0 else (um, new)
                    H[basis.index[key], i] -= sgn
    return _pack(H, basis, hermitian=True)


def spin_raise_block(basis):
    """S^+ = sum_j c+_{j,up} c_{j,dn} mapping the (N, M) block to (N, M-1)."""
    L = basis.L
    dst = FermionBasis(L, basis.N, basis.M - 1)
    m = np.zeros((dst.dim, basis.dim))
    for i, (um, dm) in enumerate(basis.states):
        for x in range(L):
            if ((dm >> x) & 1) and not ((um >> x) & 1):
                cm = basis.combined_mask(um, dm)
                sgn = (-1) ** _popcount_below(cm, 2 * x + 1)
                cm2 = cm & ~(1 << (2 * x + 1))
                sgn *= (-1) ** _popcount_below(cm2, 2 * x)
                key = (um | (1 << x), dm & ~(1 << x))
                m[dst.index[key], i] += sgn
    return m, dst


def shift_block(basis, direction=-1):
    """One-site translation (all orbitals move site x -> x + direction) with
    the fermionic reordering sign; direction -1 matches the spin-chain
    convention whose Bethe-state eigenvalue is e^{+iP}."""
    L = basis.L
    m = np.zeros((basis.dim, basis.dim))
    for i, (um, dm) in enumerate(basis.states):
        orbs = []
        for x in range(L):
            if (um >> x) & 1:
                orbs.append(2 * x)
            if (dm >> x) & 1:
                orbs.append(2 * x + 1)
        shifted = [2 * (((p // 2) + direction) % L) + (p % 2) for p in orbs]
        # parity of the permutation sorting the shifted string
        perm = np.argsort(shifted, kind="stable")
        sgn = 1
        seen = [False] * len(perm)
        for start in range(len(perm)):
            if seen[start]:
                continue
            length = 0
            jj = start
            while not seen[jj]:
                seen[jj] = True
                jj = perm[jj]
                length += 1
            if length % 2 == 0:
                sgn = -sgn
        um2 = dm2 = 0
        for p in shifted:
            if p % 2 == 0:
                um2 |= 1 << (p // 2)
            else:
                dm2 |= 1 << (p // 2)
        m[basis.index[(um2, dm2)], i] = sgn
    return m


def liebwu_residual(roots, L=None):
    """Max exponential-form residual over both equation families."""
    L = roots.L if L is None else L
    k, lam, u = roots.k, roots.lam, roots.u
    for kj in k:
        for ll in lam:
            if abs(ll - np.sin(kj) - 1j * u) < 1e-12 or abs(ll - np.sin(kj) + 1j * u) < 1e-12:
                raise ValueError("pole configuration l - sin k = +-iu")
    res = 0.0
    for j in range(len(k)):
        lhs = np.exp(1j * k[j] * L)
        rhs = np.exp(np.sum(np.log(lam - np.sin(k[j]) - 1j * u)
                            - np.log(lam - np.sin(k[j]) + 1j * u))) if len(lam) else 1.0
        res = max(res, abs(lhs - rhs))
    for l in range(len(lam)):
        lhs = np.exp(np.sum(np.log(lam[l] - np.sin(k) - 1j * u)
                            - np.log(lam[l] - np.sin(k) + 1j * u)))
        others = np.delete(lam, l)
        rhs = np.exp(np.sum(np.log(lam[l] - others - 2j * u)
                            - np.log(lam[l] - others + 2j * u))) if len(others) else 1.0
        res = max(res, abs(lhs - rhs))
    return float(res)


def solve_liebwu(L, N, M, u, charge_qnums, spin_qnums=(), tol=1e-12, max_iter=300):
    """Newton solve of the logarithmic real-root equations.

    Charge:  k_j L = 2 pi n_j + [pi M] - sum_l 2 arctg((sin k_j - l_l)/u)
    Spin:    sum_j 2 arctg((l_l - sin k_j)/u)
             = [pi (M-1-N)] + 2 pi s_l + sum_{m != l} 2 arctg((l_l - l_m)/(2u))

    with the bracketed constants reduced mod 2pi.  Seeds: k0 from the
    decoupled charge part, l0 from the strong-coupling spin chain.  Returns
    (NestedRoots, residual, converged); run-away spin rapidities (the
    spin-lowered descendants) are flagged unconverged.
    """
    if not (0 <= 2 * M <= N <= L):
        raise ValueError("need 0 <= 2M <= N <= L")
    ns = np.asarray(charge_qnums, float)
    ss = np.asarray(spin_qnums, float)
    if len(ns) != N or len(ss) != M:
        raise ValueError("need one charge number per k and one spin number per lambda")
    off_c = np.pi * M - 2 * np.pi * np.round(M / 2)
    off_s = np.pi * (M - 1 - N)
    off_s -= 2 * np.pi * np.round(off_s / (2 * np.pi))

    def F(z):
        k, lam = z[:N], z[N:]
        sk = np.sin(k)
        G = np.array([k[j] * L - 2 * np.pi * ns[j] - off_c
                      + np.sum(2 * np.arctan((sk[j] - lam) / u)) for j in range(N)])
        Hs = np.array([np.sum(2 * np.arctan((lam[l] - sk) / u))
                       - sum(2 * np.arctan((lam[l] - lam[m]) / (2 * u))
                             for m in range(M) if m != l)
                       - off_s - 2 * np.pi * ss[l] for l in range(M)])
        return np.concatenate([G, Hs])

    def J(z):
        k, lam = z[:N], z[N:]
        sk, ck = np.sin(k), np.cos(k)
        m = np.zeros((N + M, N + M))
        for j in range(N):
            m[j, j] = L + np.sum(2 * u * ck[j] / (u ** 2 + (sk[j] - lam) ** 2))
            for l in range(M):
                m[j, N + l] = -2 * u / (u ** 2 + (sk[j] - lam[l]) ** 2)
        for l in range(M):
            for j in range(N):
                m[N + l, j] = -2 * u * ck[j] / (u ** 2 + (lam[l] - sk[j]) ** 2)
            m[N + l, N + l] = (np.sum(2 * u / (u ** 2 + (lam[l] - sk) ** 2))
                               - sum(4 * u / (4 * u ** 2 + (lam[l] - lam[mm]) ** 2)
                                     for mm in range(M) if mm != l))
            for mm in range(M):
                if mm != l:
                    m[N + l, N + mm] = 4 * u / (4 * u ** 2 + (lam[l] - lam[mm]) ** 2)
        return m

    k0 = (2 * np.pi * ns + off_c) / L
    lam0 = np.array([u * np.tan(np.pi * s / N) if abs(np.pi * s / N) < 1.4
                     else 3.0 * np.sign(s) for s in ss])
    from .bae import _damped_newton
    z, res, iters, ok = _damped_newton(F, J, np.concatenate([k0, lam0]),
                                       tol=tol, max_iter=max_iter)
    if ok and M and np.max(np.abs(z[N:])) > 1e4:
        ok = False
    roots = NestedRoots(L, z[:N].astype(complex), z[N:].astype(complex), u)
    return roots, res, ok


def energy_momentum(roots, L=None):
    """E = -2 sum cos k_j + u (L - 2N); P = [sum k_j] mod 2pi."""
    L = roots.L if L is None else L
    E = -2 * np.sum(np.cos(roots.k)) + roots.u * (L - 2 * roots.N)
    P = np.mod(np.sum(roots.k).real, 2 * np.pi)
    return complex(E).real if abs(complex(E).imag) < 1e-10 else complex(E), float(P)


def _perm_sign(p):
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _spin_amplitude(aQ, kP, lam, u):
    """Nested spin amplitude: sum over spin-rapidity orderings R of
    A(lam R) prod_l F_{kP}(lam_{R(l)}; y_l), with y_l the (1-based) positions
    of the down spins in aQ; zero when the down-spin count differs from M."""
    M = len(lam)
    ys = [i + 1 for i, a in enumerate(aQ) if a == 1]
    if len(ys) != M:
        return 0.0 + 0.0j
    sk = np.sin(np.asarray(kP, complex))
    total = 0.0 + 0.0j
    for R in permutations(range(M)):
        lR = [lam[r] for r in R]
        amp = 1.0 + 0.0j
        for m in range(M):
            for nn in range(m + 1, M):
                amp *= (lR[m] - lR[nn] - 2j * u) / (lR[m] - lR[nn])
        for ell in range(M):
            y = ys[ell]
            l = lR[ell]
            f = 2j * u / (l - sk[y - 1] + 1j * u)
            for j in range(y - 1):
                f *= (l - sk[j] - 1j * u) / (l - sk[j] + 1j * u)
            amp *= f
        total += amp
    return total


def nested_wavefunction(xs, spins, roots):
    """Bethe wavefunction psi(x; a | k; lambda) of the Hubbard chain.

    xs: electron coordinates (1-based, any order, ties allowed for opposite
    spins); spins: 0 = up, 1 = down.  The ordering sector is the stable sort
    of xs (tied coordinates keep their input order).  The value vanishes when
    the number of down spins differs from M.
    """
    if roots.N > FACTORIAL_GUARD_N or roots.M > FACTORIAL_GUARD_M:
        raise ValueError("factorial cost guard: N <= 6, M <= 2")
    N = roots.N
    if len(xs) != N:
        raise ValueError("need one coordinate per charge momentum")
    Q = tuple(sorted(range(N), key=lambda i: (xs[i], i)))
    xQ = [xs[q] for q in Q]
    aQ = [spins[q] for q in Q]
    sgnQ = _perm_sign(Q)
    total = 0.0 + 0.0j
    for P in permutations(range(N)):
        kP = [roots.k[p] for p in P]
        amp = _spin_amplitude(aQ, kP, roots.lam, roots.u)
        if amp == 0.0:
            continue
        phase = np.exp(1j * sum(kP[j] * xQ[j] for j in range(N)))
        total += _perm_sign(P) * sgnQ * amp * phase
    return complex(total)


def assemble_state(roots, basis=None):
    """Expand the nested wavefunction over the (N, M) occupation basis.

    Each basis state is read as the canonical tuple (orbitals ascending); the
    factor (-1)^(K(K-1)/2) converts between the ascending creation string and
    the wavefunction's coordinate-ordering convention.  Normalized (the
    overall scale of the nested construction is left free).
    """
    L = roots.L
    basis = basis or FermionBasis(L, roots.N, roots.M)
    v = np.zeros(basis.dim, complex)
    K = roots.N
    string_sign = (-1) ** (K * (K - 1) // 2)
    for i, (um, dm) in enumerate(basis.states):
        orbs = []
        for x in range(L):
            if (um >> x) & 1:
                orbs.append((x + 1, 0))
            if (dm >> x) & 1:
                orbs.append((x + 1, 1))
        orbs.sort(key=lambda t: orbital(*t))
        xs = [x for x, s in orbs]
        spins = [s for x, s in orbs]
        v[i] = string_sign * nested_wavefunction(xs, spins, roots)
    nrm = np.linalg.norm(v)
    return v / nrm if nrm > 0 else v
