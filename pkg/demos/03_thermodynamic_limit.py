"""Root density of the antiferromagnetic ground state and the L -> infinity
energy per site.

Run:  python demos/03_thermodynamic_limit.py
"""

import numpy as np

from bethelab import bae, coordinate, thermo

print("== root-density integral equation ==")
for q in (0.5, 1.0, 2.0, 4.0):
    rd = thermo.solve_root_density(q)
    print(f"q = {q:4}: D = {thermo.density_D(rd):.8f}   "
          f"e = {thermo.gs_energy_density(rd):.8f}")

rd = thermo.solve_root_density(np.inf)
print(f"q = inf: D = {thermo.density_D(rd):.10f}  (exactly 1/2)")
e = thermo.gs_energy_density(rd)
print(f"         e = {e:.12f}  vs -ln 2 = {-np.log(2):.12f}")

rd4 = thermo.solve_root_density(4.0)
dev = np.max(np.abs(rd4.values - thermo.closed_form_density(rd4.nodes)))
print(f"\ntruncation to (-4, 4) moves the density by at most {dev:.2e} "
      "from the closed form 1/(2 ch(pi lambda))")

print("\n== condensation of the finite-size root sums onto the integral ==")
rows = thermo.condensation_check([8, 10, 12, 14, 16],
                                 lambda lam: -0.5 / (lam ** 2 + 0.25))
print("L    (1/L) sum f      integral        gap")
for r in rows:
    print(f"{r['L']:<4} {r['sum']:+.10f}  {r['integral']:+.10f}  {r['gap']:.3e}")

print("\nfinite-size ground energies per site (rising toward -ln 2):")
for L in (8, 12, 16):
    rep = bae.solve_logbae(L, L // 2, tuple(range(1, L // 2 + 1)))
    print(f"  L = {L:2}: E/L = {coordinate.energy_xxx(rep.roots).real / L:.10f}")
print(f"  -ln 2  = {-np.log(2):.10f}")
