"""Nested Bethe Ansatz for the one-dimensional Hubbard model.

Run:  python demos/06_hubbard_nested_ansatz.py
"""

import numpy as np

from bethelab import ed, hubbard

L, N, M = 6, 2, 1
basis = hubbard.FermionBasis(L, N, M)
print(f"== Hubbard chain, L = {L}, {N} electrons, {M} down spin "
      f"(block dimension {basis.dim}) ==")

for u in (1.0, 2.0, 4.0):
    roots, res, ok = hubbard.solve_liebwu(L, N, M, u, (-1, 0), (0,))
    E, P = hubbard.energy_momentum(roots)
    print(f"\nu = {u}:")
    print("  charge momenta :", np.round(roots.k.real, 8))
    print("  spin rapidity  :", np.round(roots.lam.real, 8))
    print("  residual       :", hubbard.liebwu_residual(roots))
    H = hubbard.build_hubbard_hamiltonian(L, u, basis)
    w = ed.diagonalize(H).eigenvalues
    print(f"  E = {E:.10f}   block minimum = {w[0]:.10f}")
    v = hubbard.assemble_state(roots, basis)
    print("  assembled eigenvector residual:",
          np.linalg.norm(H.matrix @ v - E * v))
    Sp, _ = hubbard.spin_raise_block(basis)
    print("  S+ residual (highest weight):", np.linalg.norm(Sp @ v))
    U = hubbard.shift_block(basis)
    print(f"  P = {P:.6f}; translation eigenvalue matches e^iP to",
          np.linalg.norm(U @ v - np.exp(1j * P) * v))

print("\nstrong coupling: the charge momenta decouple from the spin sector")
roots, _, _ = hubbard.solve_liebwu(L, N, M, 1e3, (-1, 0), (0,))
pred = (2 * np.pi * np.array([-1, 0]) + np.pi) / L
print("k at u = 1000 :", np.round(np.sort(roots.k.real), 6))
print("u -> inf limit:", np.round(np.sort(pred), 6))
