"""Bethe-equation residuals, solvers, and the two-magnon classification."""

import numpy as np
import pytest

from bethelab import bae, coordinate, ed
from oracles import kron_spin_hamiltonian

RNG = np.random.default_rng(7)


class TestResidualsXXX:
    def test_free_magnon_quantization(self):
        L = 10
        for m in (1, 3, 7):
            k = 2 * np.pi * m / L
            lam = 0.5 / np.tan(k / 2)
            assert bae.bae_residual_xxx([lam], L) < 1e-12

    def test_ground_state_fixed_point(self):
        rep = bae.solve_logbae(8, 4, (1, 2, 3, 4))
        assert rep.converged
        assert bae.bae_residual_xxx(rep.roots.values, 8) < 1e-12

    def test_random_roots_are_off_shell(self):
        roots = RNG.normal(size=3) + 0.3
        assert bae.bae_residual_xxx(roots, 8) > 0.01

    def test_pole_rejected(self):
        with pytest.raises(ValueError):
            bae.bae_residual_xxx([0.5j, 1.0], 6)


class TestLogForm:
    def test_ground_state_residual(self):
        rep = bae.solve_logbae(8, 4, (1, 2, 3, 4))
        assert bae.logbae_residual(rep.roots, 8, (1, 2, 3, 4)) < 1e-12

    def test_perturbed_roots(self):
        rep = bae.solve_logbae(8, 4, (1, 2, 3, 4))
        shifted = rep.roots.values.real + 0.1
        assert bae.logbae_residual(shifted, 8, (1, 2, 3, 4)) > 1e-3

    def test_single_root_bisection_oracle(self):
        # N=1: (1/pi) arctg(2 l) = n/L - 1/L; solve independently by bisection
        L, n = 4, 1
        target = n / L - 2 / (2 * L)
        lo, hi = -50.0, 50.0
        for _ in range(200):
            mid = (lo + hi) / 2
            if np.arctan(2 * mid) / np.pi < target:
                lo = mid
            else:
                hi = mid
        rep = bae.solve_logbae(L, 1, (n,))
        assert rep.converged
        assert abs(rep.roots.values[0].real - (lo + hi) / 2) < 1e-10

    def test_complex_roots_rejected(self):
        with pytest.raises(ValueError):
            bae.logbae_residual([0.3 + 0.2j], 8, (1,))


class TestSolveLogBae:
    def test_empty_sector(self):
        rep = bae.solve_logbae(10, 0, ())
        assert rep.converged and rep.roots.N == 0
        assert coordinate.energy_xxx(rep.roots) == 0.0

    @pytest.mark.parametrize("L", [4, 6, 8])
    def test_ground_energy_matches_ed(self, L):
        rep = bae.solve_logbae(L, L // 2, tuple(range(1, L // 2 + 1)))
        E = coordinate.energy_xxx(rep.roots).real
        w = ed.diagonalize(ed.build_xxx_hamiltonian(L, 1.0, L // 2)).eigenvalues
        assert abs(E - w[0]) < 1e-10

    def test_symmetric_qnums_give_symmetric_roots(self):
        rep = bae.solve_logbae(8, 4, (1, 2, 3, 4))
        lam = np.sort(rep.roots.values.real)
        assert np.allclose(lam, -lam[::-1], atol=1e-12)
        assert np.all(np.diff(lam) > 0)

    def test_energy_per_site_toward_minus_ln2(self):
        es = []
        for L in (8, 12, 16):
            rep = bae.solve_logbae(L, L // 2, tuple(range(1, L // 2 + 1)))
            es.append(coordinate.energy_xxx(rep.roots).real / L)
        assert es[0] < es[1] < es[2] < -np.log(2)

    def test_qnums_must_increase(self):
        with pytest.raises(ValueError):
            bae.solve_logbae(8, 2, (2, 2))

    def test_quantum_numbers_type(self):
        qn = bae.QuantumNumbers((1, 2, 3), 8, 3)
        rep = bae.solve_logbae(8, 3, qn)
        assert rep.converged and rep.qnums == (1, 2, 3)
        with pytest.raises(ValueError):
            bae.QuantumNumbers((1, 2), 8, 3)

    def test_distinct_qnums_distinct_roots(self):
        seen = []
        for n1 in range(0, 4):
            for n2 in range(n1 + 1, 5):
                rep = bae.solve_logbae(10, 2, (n1, n2))
                if not rep.converged:
                    continue
                for prev in seen:
                    assert np.max(np.abs(prev - rep.roots.values)) > 1e-6
                seen.append(rep.roots.values)
        assert len(seen) >= 6

    def test_runaway_branch_flagged(self):
        rep = bae.solve_logbae(8, 3, (1, 3, 5))  # no finite real solution
        assert not rep.converged


class TestXXZ:
    def test_scaling_limit_to_xxx(self):
        gamma = 1e-3
        roots = np.array([0.35, -0.2, 0.9])
        r_xxx = bae.bae_residual_xxx(roots, 6)
        r_xxz = bae.bae_residual_xxz(gamma * roots, 6, gamma)
        assert abs(r_xxx - r_xxz) < 2e-3

    def test_free_wave(self):
        # N=1 quantization: sh(l-ig/2)^L/sh(l+ig/2)^L = 1 with the self term
        gamma = 0.7
        L = 6
        rep = bae.solve_logbae_xxz(L, 1, gamma, (2,))
        assert rep.converged
        assert bae.bae_residual_xxz(rep.roots.values, L, gamma) < 1e-12

    def test_ground_state_matches_ed(self):
        L, gamma = 6, np.arccos(0.5)
        rep = bae.solve_logbae_xxz(L, 3, gamma, (1, 2, 3))
        assert rep.converged
        E = bae.xxz_energy(rep.roots, gamma).real
        w = np.linalg.eigvalsh(kron_spin_hamiltonian(L, 1.0, 0.5))
        assert abs(E - w[0]) < 1e-10

    def test_solver_roots_satisfy_exponential_form(self):
        L, gamma = 8, 0.9
        rep = bae.solve_logbae_xxz(L, 2, gamma, (1, 3))
        assert rep.converged
        assert bae.bae_residual_xxz(rep.roots.values, L, gamma) < 1e-10


class TestBose:
    def test_free_particle(self):
        rep = bae.solve_bose(10.0, 1, 5.0, (3,))
        # N=1: no interaction, k = 2 pi (n - 1)/L exactly
        assert rep.converged
        assert abs(rep.roots.values[0].real - 2 * np.pi * 2 / 10.0) < 1e-14

    def test_strong_coupling_free_fermions(self):
        N, c, Lr = 3, 1e6, 10.0
        rep = bae.solve_bose(Lr, N, c, (1, 2, 3))
        kff = 2 * np.pi * (np.arange(1, N + 1) - (N + 1) / 2) / Lr
        assert np.max(np.abs(rep.roots.values.real - kff)) < 1e-4

    def test_ground_pair_real_and_opposite(self):
        rep = bae.solve_bose(10.0, 2, 1.0, (1, 2))
        k = rep.roots.values
        assert np.max(np.abs(k.imag)) == 0
        assert abs(k[0] + k[1]) < 1e-12
        assert bae.bose_residual(k, 10.0, 1.0) < 1e-10

    @pytest.mark.parametrize("c", [0.1, 1.0, 10.0])
    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_roots_real_across_couplings(self, c, N):
        rep = bae.solve_bose(8.0, N, c, tuple(range(1, N + 1)))
        assert rep.converged
        assert np.max(np.abs(rep.roots.values.imag)) == 0
        assert bae.bose_residual(rep.roots.values, 8.0, c) < 1e-10

    def test_one_to_one_with_seeds(self):
        seen = []
        for ns in [(1, 2), (0, 2), (1, 3), (0, 3), (2, 3)]:
            rep = bae.solve_bose(9.0, 2, 0.7, ns)
            assert rep.converged
            for prev in seen:
                assert np.max(np.abs(prev - rep.roots.values)) > 1e-6
            seen.append(rep.roots.values)

    def test_energy_reported(self):
        rep = bae.solve_bose(10.0, 2, 1.0, (1, 2))
        assert abs(rep.params["energy"] - np.sum(rep.roots.values.real ** 2)) < 1e-12

    def test_repulsive_only(self):
        with pytest.raises(ValueError):
            bae.solve_bose(10.0, 2, -1.0, (1, 2))


class TestAdmissibility:
    def test_examples(self):
        ok, _ = bae.admissibility(np.array([0.5, -0.5]))
        assert ok
        flag, reasons = bae.admissibility(np.array([0.5j, 1.0]))
        assert not flag and any("i/2" in r for r in reasons)
        lam = 0.3 + 0.1j
        flag, reasons = bae.admissibility(np.array([lam, lam + 1j]))
        assert not flag and any("difference i" in r for r in reasons)


@pytest.fixture(scope="module")
def solutions():
    return bae.classify_two_magnon(8)


class TestTwoMagnon:

    def test_count_covers_all_but_singular_level(self, solutions):
        # binom(8,2) - binom(8,1) = 20 highest-weight levels; the momentum-pi
        # bound state has rapidities exactly at +-i/2 (inadmissible), so the
        # admissible classification finds the other 19
        assert bae.two_magnon_reference_count(8) == 20
        assert len(solutions) == 19
        kinds = [k for _, k in solutions]
        assert kinds.count("real-pair") == 15
        assert kinds.count("bound-pair") == 4

    def test_conjugation_invariance(self, solutions):
        for rs, _ in solutions:
            s1 = np.sort_complex(rs.values)
            s2 = np.sort_complex(np.conj(rs.values))
            assert np.max(np.abs(s1 - s2)) < 1e-9

    def test_all_residuals(self, solutions):
        for rs, _ in solutions:
            assert bae.bae_residual_xxx(rs.values, 8) < 1e-10
            assert bae.admissibility(rs.values)[0]

    def test_bound_pair_wavefunction_decays(self, solutions):
        L = 8
        for rs, kind in solutions:
            if kind != "bound-pair":
                continue
            amps = [abs(coordinate.offshell_wavefunction((1, 1 + d), rs.values, L))
                    for d in range(1, L // 2 + 1)]
            assert all(amps[i + 1] < amps[i] for i in range(len(amps) - 1))

    def test_energies_match_ed_hw_levels(self, solutions):
        # multiset subtraction: energies of the N=2 block minus the N=1 block
        L = 8
        w2 = list(np.round(ed.diagonalize(ed.build_xxx_hamiltonian(L, 1.0, 2)).eigenvalues, 9))
        w1 = ed.diagonalize(ed.build_xxx_hamiltonian(L, 1.0, 1)).eigenvalues
        for e in np.round(w1, 9):
            i = int(np.argmin(np.abs(np.array(w2) - e)))
            assert abs(w2[i] - e) < 1e-7
            w2.pop(i)
        assert len(w2) == 20
        found = sorted(coordinate.energy_xxx(rs.values).real for rs, _ in solutions)
        # every found energy is an hw level ...
        for e in found:
            assert min(abs(np.array(w2) - e)) < 1e-8
        # ... and the single uncovered level is the singular bound state at -J
        uncovered = [e for e in w2 if min(abs(np.array(found) - e)) > 1e-7]
        assert len(uncovered) == 1
        assert abs(uncovered[0] + 1.0) < 1e-9
