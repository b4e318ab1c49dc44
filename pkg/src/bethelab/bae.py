"""Bethe Ansatz equations: residuals, Newton solvers, and classification.

Exponential-form residuals use the product over *all* k (the self term
contributes a factor -1, which absorbs the minus sign of the textbook form):

  XXX:   ((l_j - i/2)/(l_j + i/2))^L + prod_k (l_j - l_k - i)/(l_j - l_k + i)
  XXZ:   same with rational factors replaced by sh(..., gamma) per Delta=cos(gamma)
  Bose:  e^{i k_j L'} + prod_l (k_j - k_l + ic)/(k_j - k_l - ic)

Logarithmic form for real roots (integers n_j, principal arctan):

  (1/pi) arctg(2 l_j) = n_j/L - (N+1)/(2L) + sum_k arctg(l_j - l_k)/(pi L)

Newton iterations use the analytic Jacobian, damping by step-halving, an
initial guess from the non-interacting part, tolerance 1e-12, max 200 steps.
Quantum-number sets whose iterates run away to |l| > ROOT_ESCAPE correspond to
solutions with rapidities at infinity (spin-lowered descendants); they are
reported as unconverged.
"""

from dataclasses import dataclass, field

import numpy as np

from .coordinate import RapiditySet

TOL = 1e-12
MAX_ITER = 200
ROOT_ESCAPE = 1e6
EQUALITY_TOL = 1e-8  # root-coincidence threshold for admissibility


@dataclass
class QuantumNumbers:
    """Integer labels of the logarithmic Bethe equations (strictly increasing
    for real-root branches)."""
    n: tuple
    L: int
    N: int

    def __post_init__(self):
        self.n = tuple(self.n)
        if len(self.n) != self.N:
            raise ValueError("need one quantum number per root")


@dataclass
class SolveReport:
    """Outcome of a Bethe-equation solve; converged implies residual < tol."""
    roots: RapiditySet
    residual: float
    iterations: int
    converged: bool
    qnums: tuple = ()
    params: dict = field(default_factory=dict)


def _pairwise_min_dist(vals):
    vals = np.asarray(vals)
    n = len(vals)
    if n < 2:
        return np.inf
    return min(abs(vals[i] - vals[j]) for i in range(n) for j in range(i + 1, n))


def bae_residual_xxx(roots, L):
    """Max exponential-form residual of the XXX Bethe equations."""
    lam = np.asarray(getattr(roots, "values", roots), complex)
    if np.any(np.abs(lam - 0.5j) < 1e-12) or np.any(np.abs(lam + 0.5j) < 1e-12):
        raise ValueError("rapidity at a pole +-i/2")
    if _pairwise_min_dist(lam) < 1e-12:
        raise ValueError("coincident rapidities")
    res = 0.0
    for j, l in enumerate(lam):
        # log-form products to keep |...|^L in range
        lhs = np.exp(L * (np.log(l - 0.5j) - np.log(l + 0.5j)))
        rhs = np.exp(np.sum(np.log(l - lam - 1j) - np.log(l - lam + 1j)))
        res = max(res, abs(lhs + rhs))
    return float(res)


def bae_residual_xxz(roots, L, gamma):
    """Max exponential-form residual of the XXZ Bethe equations, Delta = cos(gamma)."""
    lam = np.asarray(getattr(roots, "values", roots), complex)
    sh = np.sinh
    if np.any(np.abs(sh(lam - 0.5j * gamma)) < 1e-12) or np.any(np.abs(sh(lam + 0.5j * gamma)) < 1e-12):
        raise ValueError("rapidity at a zero of sh")
    res = 0.0
    for j, l in enumerate(lam):
        lhs = np.exp(L * (np.log(sh(l - 0.5j * gamma)) - np.log(sh(l + 0.5j * gamma))))
        rhs = np.exp(np.sum(np.log(sh(l - lam - 1j * gamma)) - np.log(sh(l - lam + 1j * gamma))))
        res = max(res, abs(lhs + rhs))
    return float(res)


def bose_residual(roots, L_ring, c):
    """Max exponential-form residual of the delta-Bose-gas equations."""
    k = np.asarray(getattr(roots, "values", roots), complex)
    res = 0.0
    for j in range(len(k)):
        lhs = np.exp(1j * k[j] * L_ring)
        rhs = np.exp(np.sum(np.log(k[j] - k + 1j * c) - np.log(k[j] - k - 1j * c)))
        res = max(res, abs(lhs + rhs))
    return float(res)


def _logbae_F(lam, L, N, ns):
    return (np.arctan(2 * lam) / np.pi - ns / L + (N + 1) / (2 * L)
            - np.array([np.sum(np.arctan(lam[j] - lam)) for j in range(N)]) / (np.pi * L))


def logbae_residual(roots, L, qnums):
    """Max residual of the logarithmic XXX equations at real roots."""
    lam = np.asarray(getattr(roots, "values", roots))
    if np.iscomplexobj(lam) and np.max(np.abs(lam.imag)) > 1e-10:
        raise ValueError("logarithmic form requires real roots")
    lam = lam.real.astype(float)
    ns = np.asarray(getattr(qnums, "n", qnums), float)
    return float(np.max(np.abs(_logbae_F(lam, L, len(lam), ns)))) if len(lam) else 0.0


def _damped_newton(F, J, x0, tol=TOL, max_iter=MAX_ITER):
    """Newton iteration with step-halving damping; returns (x, maxres, iters, ok)."""
    x = np.array(x0, float)
    f = F(x)
    it = 0
    for it in range(1, max_iter + 1):
        if np.max(np.abs(f)) < tol:
            return x, float(np.max(np.abs(f))), it - 1, True
        try:
            step = np.linalg.solve(J(x), -f)
        except np.linalg.LinAlgError:
            return x, float(np.max(np.abs(f))), it, False
        t = 1.0
        for _ in range(50):
            fn = F(x + t * step)
            if np.max(np.abs(fn)) < np.max(np.abs(f)):
                break
            t /= 2
        else:
            return x, float(np.max(np.abs(f))), it, False
        x = x + t * step
        f = F(x)
        if np.max(np.abs(x)) > ROOT_ESCAPE:
            return x, float(np.max(np.abs(f))), it, False
    return x, float(np.max(np.abs(f))), max_iter, False


def solve_logbae(L, N, qnums):
    """Solve the logarithmic XXX equations for real roots.

    qnums: strictly increasing integers (QuantumNumbers or a plain tuple);
    the lowest state of the N-sector has n_j = 1..N.  Returns a SolveReport;
    run-away iterates (rapidities at infinity) are flagged unconverged.
    """
    ns = np.asarray(getattr(qnums, "n", qnums), float)
    if len(ns) != N:
        raise ValueError("need one quantum number per root")
    if N > 0 and np.any(np.diff(ns) <= 0):
        raise ValueError("quantum numbers must be strictly increasing")
    if N > L / 2:
        raise ValueError("real-root branch requires N <= L/2")
    if N == 0:
        return SolveReport(RapiditySet("XXX", L, []), 0.0, 0, True, ())

    def F(lam):
        return _logbae_F(lam, L, N, ns)

    def J(lam):
        m = np.zeros((N, N))
        for j in range(N):
            m[j, j] = 2 / np.pi / (1 + 4 * lam[j] ** 2) - sum(
                1 / (np.pi * L) / (1 + (lam[j] - lam[k]) ** 2)
                for k in range(N) if k != j)
            for k in range(N):
                if k != j:
                    m[j, k] = 1 / (np.pi * L) / (1 + (lam[j] - lam[k]) ** 2)
        return m

    lam0 = 0.5 * np.tan(np.pi * (ns / L - (N + 1) / (2 * L)))
    lam, res, iters, ok = _damped_newton(F, J, lam0)
    if ok and np.max(np.abs(lam)) > 0.01 * ROOT_ESCAPE:
        ok = False
    roots = RapiditySet("XXX", L, np.sort(lam).astype(complex))
    return SolveReport(roots, res, iters, ok, tuple(int(n) for n in ns))


def _theta(n, lam, gamma):
    """theta_n(l) = 2 arctg(cot(n gamma/2) th l); the XXX limit is 2 arctg(2l/n)."""
    return 2 * np.arctan(np.tan(np.pi / 2 - n * gamma / 2) * np.tanh(lam))


def _dtheta(n, lam, gamma):
    c = np.tan(np.pi / 2 - n * gamma / 2)
    t = np.tanh(lam)
    return 2 * c * (1 - t ** 2) / (1 + (c * t) ** 2)


def solve_logbae_xxz(L, N, gamma, qnums):
    """Real-root XXZ solve in the gapless parameterization Delta = cos(gamma),
    0 < gamma < pi: L theta_1(l_j) = 2 pi n_j - pi (N+1) + sum_k theta_2(l_j - l_k)."""
    ns = np.asarray(getattr(qnums, "n", qnums), float)
    if N == 0:
        return SolveReport(RapiditySet("XXZ", L, [], {"gamma": gamma}), 0.0, 0, True, ())

    def F(lam):
        return np.array([L * _theta(1, lam[j], gamma) - 2 * np.pi * ns[j]
                         + np.pi * (N + 1)
                         - np.sum(_theta(2, lam[j] - lam, gamma))
                         for j in range(N)])

    def J(lam):
        m = np.zeros((N, N))
        for j in range(N):
            m[j, j] = L * _dtheta(1, lam[j], gamma) - sum(
                _dtheta(2, lam[j] - lam[k], gamma) for k in range(N) if k != j)
            for k in range(N):
                if k != j:
                    m[j, k] = _dtheta(2, lam[j] - lam[k], gamma)
        return m

    lam0 = np.array([0.3 * (n - (N + 1) / 2) for n in ns])
    lam, res, iters, ok = _damped_newton(F, J, lam0)
    if ok and np.max(np.abs(lam)) > 0.01 * ROOT_ESCAPE:
        ok = False
    roots = RapiditySet("XXZ", L, np.sort(lam).astype(complex), {"gamma": gamma})
    return SolveReport(roots, res, iters, ok, tuple(int(n) for n in ns),
                       {"gamma": gamma})


def xxz_energy(roots, gamma):
    """Bethe-state energy of the XXZ chain at Delta = cos(gamma):
    E = - sum_j sin(gamma)^2 / (ch(2 l_j) - cos(gamma))."""
    lam = np.asarray(getattr(roots, "values", roots), complex)
    if len(lam) == 0:
        return 0.0
    return complex(-np.sum(np.sin(gamma) ** 2 / (np.cosh(2 * lam) - np.cos(gamma))))


def solve_bose(L_ring, N, c, qnums):
    """Delta-interacting Bose gas on a ring of length L_ring, coupling c > 0.

    Logarithmic form  k_j L' + sum_l 2 arctg((k_j - k_l)/c) = 2 pi (n_j - (N+1)/2)
    with integer seeds n_j; at c -> infinity the roots become the free-fermion
    momenta 2 pi (n_j - (N+1)/2)/L'.  The report's params carry E = sum k_j^2.
    """
    if c <= 0:
        raise ValueError("repulsive coupling c > 0 required")
    ns = np.asarray(getattr(qnums, "n", qnums), float)
    if N == 0:
        return SolveReport(RapiditySet("BOSE", 0, [], {"c": c, "L_ring": L_ring}),
                           0.0, 0, True, (), {"c": c, "energy": 0.0})
    target = 2 * np.pi * (ns - (N + 1) / 2)

    def F(k):
        return (k * L_ring
                + np.array([np.sum(2 * np.arctan((k[j] - k) / c)) for j in range(N)])
                - target)

    def J(k):
        m = np.zeros((N, N))
        for j in range(N):
            m[j, j] = L_ring + sum(2 * c / (c ** 2 + (k[j] - k[l]) ** 2)
                                   for l in range(N) if l != j)
            for l in range(N):
                if l != j:
                    m[j, l] = -2 * c / (c ** 2 + (k[j] - k[l]) ** 2)
        return m

    k0 = target / L_ring
    k, res, iters, ok = _damped_newton(F, J, k0)
    roots = RapiditySet("BOSE", 0, np.sort(k).astype(complex), {"c": c, "L_ring": L_ring})
    energy = float(np.sum(k ** 2))
    return SolveReport(roots, res, iters, ok, tuple(int(n) for n in ns),
                       {"c": c, "L_ring": L_ring, "energy": energy})


def admissibility(roots, tol=EQUALITY_TOL):
    """Admissibility of an XXX root set: pairwise distinct, no difference i,
    no root at +-i/2.  Returns (flag, list of reasons)."""
    lam = np.asarray(getattr(roots, "values", roots), complex)
    reasons = []
    n = len(lam)
    for j in range(n):
        if abs(lam[j] - 0.5j) < tol or abs(lam[j] + 0.5j) < tol:
            reasons.append(f"root at +-i/2 (index {j})")
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            if j < k and abs(lam[j] - lam[k]) < tol:
                reasons.append(f"coincident roots ({j},{k})")
            if abs(lam[j] - lam[k] - 1j) < tol:
                reasons.append(f"difference i ({j},{k})")
    return len(reasons) == 0, reasons


def _bound_pair_roots(z):
    return np.array([z[0] + 1j * z[1], z[0] - 1j * z[1]])


def classify_two_magnon(L, qn_range=None, grid=None, delta0=0.5):
    """Enumerate admissible N = 2 solutions: real pairs from a quantum-number
    scan and conjugate ("bound") pairs l = l_r +- i d from a Newton search.

    Real seeds: all strictly increasing integer pairs in qn_range (default
    covers every branch that converges at this L).  Bound seeds: l_r on a
    step-0.1 grid with d0 = 0.5; the default grid spans +-(cot(pi/L) + 1.5)
    because the smallest-momentum bound pair sits at center cot(pi/L), beyond
    +-3 once L >= 10.  Solutions are verified by bae_residual_xxx and
    deduplicated at distance 1e-6.  The exactly singular pair {+i/2, -i/2}
    (a genuine two-magnon level at momentum pi for even L) is inadmissible and
    intentionally not returned.

    Returns a list of (RapiditySet, kind) with kind 'real-pair' | 'bound-pair'.
    """
    if L % 2 or not (4 <= L <= 16):
        raise ValueError("L must be even, 4 <= L <= 16")
    if qn_range is None:
        qn_range = range(-L // 2 + 1, L // 2 + 4)
    found = []

    def _known(roots):
        for rs, _ in found:
            if len(rs.values) == len(roots) and np.max(np.abs(np.sort_complex(rs.values) - np.sort_complex(roots))) < 1e-6:
                return True
        return False

    for n1 in qn_range:
        for n2 in qn_range:
            if n2 <= n1:
                continue
            rep = solve_logbae(L, 2, (n1, n2))
            if not rep.converged:
                continue
            lam = rep.roots.values
            ok, _ = admissibility(lam)
            if not ok:
                continue
            if bae_residual_xxx(lam, L) > 1e-10:
                continue
            if not _known(lam):
                found.append((RapiditySet("XXX", L, lam), "real-pair"))

    if grid is None:
        reach = max(3.0, 1.0 / np.tan(np.pi / L) + 1.5)
        grid = np.arange(-reach, reach + 1e-9, 0.1)

    def G(z):
        l = z[0] + 1j * z[1]
        g = np.exp(L * (np.log(l - 0.5j) - np.log(l + 0.5j))) \
            - (2 * z[1] - 1) / (2 * z[1] + 1)
        return np.array([g.real, g.imag])

    for lr0 in grid:
        z = np.array([lr0, delta0])
        g = G(z)
        ok = False
        for _ in range(100):
            if np.max(np.abs(g)) < 1e-13:
                ok = True
                break
            h = 1e-8
            Jm = np.zeros((2, 2))
            for b in range(2):
                zp = z.copy()
                zp[b] += h
                Jm[:, b] = (G(zp) - g) / h
            try:
                step = np.linalg.solve(Jm, -g)
            except np.linalg.LinAlgError:
                break
            t = 1.0
            for _ in range(40):
                if np.max(np.abs(G(z + t * step))) < np.max(np.abs(g)):
                    break
                t /= 2
            else:
                break
            z = z + t * step
            g = G(z)
        if not ok or abs(z[1]) < 1e-4:
            continue
        roots = _bound_pair_roots(z)
        adm, _ = admissibility(roots)
        if not adm:
            continue  # singular pair {+-i/2} lands here
        if bae_residual_xxx(roots, L) > 1e-10:
            continue
        if not _known(roots):
            found.append((RapiditySet("XXX", L, roots), "bound-pair"))
    return found


def two_magnon_reference_count(L):
    """Highest-weight level count of the N = 2 sector, binom(L,2) - binom(L,1).
    Admissible solutions cover all of them except the singular momentum-pi
    bound state (energy -J), which has rapidities exactly at +-i/2."""
    from math import comb
    return comb(L, 2) - comb(L, 1)
