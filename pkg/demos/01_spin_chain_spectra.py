"""Tour of the exact-diagonalization layer: bases, spectra, symmetries.

Run:  python demos/01_spin_chain_spectra.py
"""

from bethelab import ed
from bethelab.basis import build_sector_basis

L = 8
print(f"== spin-1/2 chain with L = {L} sites ==")
print("sector dimensions:", [build_sector_basis(L, N).dim for N in range(L + 1)])

# The Heisenberg chain at J = 1: ground state lives at half filling (Sz = 0).
H = ed.build_xxx_hamiltonian(L, 1.0)
spec = ed.diagonalize(H)
print(f"\nfull spectrum: {2 ** L} levels, E0 = {spec.eigenvalues[0]:.12f}")

gs_sector = ed.diagonalize(ed.build_xxx_hamiltonian(L, 1.0, L // 2))
print(f"half-filled sector E0 = {gs_sector.eigenvalues[0]:.12f}  (same state)")

# Symmetries: translation and total spin commute with H.
U = ed.build_shift_operator(L)
Sz = ed.build_total_spin(L, "z")
Sx = ed.build_total_spin(L, "x")
print("\n[H, U]  =", ed.commutator_norm(H, U))
print("[H, Sz] =", ed.commutator_norm(H, Sz))
print("[H, Sx] =", ed.commutator_norm(H, Sx), " (full SU(2) at Delta = 1)")

Hxxz = ed.build_xxz_hamiltonian(L, 0.5)
print("[H_xxz(0.5), Sx] =", f"{ed.commutator_norm(Hxxz, Sx):.3f}",
      " (anisotropy keeps only U(1))")

# Degeneracies organize into complete SU(2) multiplets, measured by the
# quadratic Casimir.
cas = ed.build_total_spin(L, "casimir")
levels = ed.multiplet_structure(spec, cas)
print(f"\n{len(levels)} distinct levels; lowest five with their spin content:")
for energy, mult, spins in levels[:5]:
    print(f"  E = {energy:+.6f}  x{mult}   S = {spins}")

# Ferromagnetic coupling flips the spectrum; the all-up state becomes a
# ground state at E = 0.
wm = ed.diagonalize(ed.build_xxx_hamiltonian(L, -1.0)).eigenvalues
print(f"\nJ = -1: spectrum in [{wm[0]:.3f}, {wm[-1]:.3f}], "
      f"pseudo vacuum at E = 0 (inverted spectrum)")
