"""Solving the Bethe equations and building the corresponding eigenvectors.

Run:  python demos/02_bethe_roots_and_vectors.py
"""

import numpy as np

from bethelab import bae, coordinate, ed
from bethelab.basis import build_sector_basis

L = 8
N = L // 2

print(f"== Heisenberg chain, L = {L}: ground state from the Bethe equations ==")
rep = bae.solve_logbae(L, N, tuple(range(1, N + 1)))
print("rapidities:", np.round(rep.roots.values.real, 8))
print("log-form residual:", rep.residual, " iterations:", rep.iterations)
print("exponential-form residual:", bae.bae_residual_xxx(rep.roots.values, L))

E = coordinate.energy_xxx(rep.roots).real
w0 = ed.diagonalize(ed.build_xxx_hamiltonian(L, 1.0, N)).eigenvalues[0]
print(f"E(Bethe) = {E:.12f}   E(ED) = {w0:.12f}   diff = {abs(E - w0):.2e}")

# The wavefunction sum over magnon permutations gives the eigenvector.
v = coordinate.offshell_vector(rep.roots, L)
H = ed.build_xxx_hamiltonian(L, 1.0, N).matrix
print("eigenvector residual:", np.linalg.norm(H @ v - E * v))
print("highest-weight (S+ v) residual:", coordinate.highest_weight_residual(v, L, N))
P = coordinate.momentum_xxx(rep.roots)
U = ed.shift_sector_matrix(build_sector_basis(L, N))
print(f"momentum P = {P:.6f}; shift eigenvalue matches e^iP to",
      np.linalg.norm(U @ v - np.exp(1j * P) * v))

# Off-shell (arbitrary) rapidities still solve the lattice wave equation --
# they just stop being periodic eigenvectors.
off = np.array([0.35 + 0.2j, -0.6 - 0.1j])
print("\noff-shell residual (should be O(1)):",
      f"{bae.bae_residual_xxx(off, L):.3f}")

# The two-magnon sector can be enumerated completely: real scattering pairs
# plus conjugate bound pairs.
print(f"\n== two-magnon classification at L = {L} ==")
sols = bae.classify_two_magnon(L)
kinds = [k for _, k in sols]
print(f"{len(sols)} admissible solutions: {kinds.count('real-pair')} real, "
      f"{kinds.count('bound-pair')} bound")
print(f"(the remaining highest-weight level of the sector is the singular "
      f"momentum-pi pair at +-i/2, E = -1)")
for rs, kind in sols:
    if kind == "bound-pair":
        amps = [abs(coordinate.offshell_wavefunction((1, 1 + d), rs.values, L))
                for d in range(1, 4)]
        c = rs.values[0]
        print(f"bound pair at {c.real:+.4f} +- {abs(c.imag):.4f} i: "
              f"|Psi(1, 1+d)| = {np.round(amps, 6)} (decays in the separation)")
        break

rep_bose = bae.solve_bose(10.0, 3, 1.0, (1, 2, 3))
print("\n== delta Bose gas, N = 3, c = 1 on a ring of length 10 ==")
print("momenta:", np.round(rep_bose.roots.values.real, 8))
print("E =", rep_bose.params["energy"])
