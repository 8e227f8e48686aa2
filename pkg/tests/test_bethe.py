from fractions import Fraction

import numpy as np
import pytest

from gaudin import (
    ModelSpec,
    bethe_residual,
    bethe_vector,
    build_hamiltonian,
    build_site_operator,
    build_total_generator,
    diagonalize_singular,
    expected_solution_count,
    lowering_field,
    lowering_field_exact,
    singular_basis_kernel,
    solve_bethe,
    solve_bethe_numeric,
    verify_solution,
)
from gaudin.bethe import _cleared_system, _multiset_gap, _site_polynomials

from conftest import random_spec


SPEC2 = ModelSpec((1, 1), (Fraction(0), Fraction(1)))
SPEC3 = ModelSpec((1, 1, 1), (Fraction(0), Fraction(1), Fraction(2)))


def random_rational(rng, lo=-8, hi=8, den=5):
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, den + 1)))


def rational_off_poles(rng, spec):
    while True:
        w = random_rational(rng)
        if all(w != zk for zk in spec.z):
            return w


class TestLoweringField:
    def test_two_site_coefficients(self):
        # F(1/2) v_0 = 2 F^(1) v_0 - 2 F^(2) v_0 in states (0,1), (1,0)
        arr = lowering_field(SPEC2, 0.5, 0)
        assert np.allclose(arr[:, 0], [-2.0, 2.0])

    def test_pole_rejected(self):
        with pytest.raises(ValueError):
            lowering_field(SPEC2, 1.0, 0)
        with pytest.raises(ValueError):
            lowering_field_exact(SPEC2, Fraction(0), 0)

    def test_exact_matches_float(self):
        exact = lowering_field_exact(SPEC2, Fraction(1, 3), 1).to_array(float)
        arr = lowering_field(SPEC2, 1 / 3, 1)
        assert np.allclose(exact, arr)

    def test_operators_commute(self, rng):
        # F(w1) F(w2) = F(w2) F(w1) as maps V_0 -> V_2, exact
        for _ in range(5):
            spec = random_spec(rng, n_max=4, lam_max=3)
            w1 = rational_off_poles(rng, spec)
            w2 = rational_off_poles(rng, spec)
            a = lowering_field_exact(spec, w1, 1) @ lowering_field_exact(spec, w2, 0)
            b = lowering_field_exact(spec, w2, 1) @ lowering_field_exact(spec, w1, 0)
            assert (a - b).is_zero()


def site_cartan_sum(spec, w, m):
    op = None
    for k in range(spec.n_sites):
        term = build_site_operator("H", k, spec, m).scaled(1 / (w - spec.z[k]))
        op = term if op is None else op + term
    return op


def hamiltonian_lowering_commutator(spec, i, w, m):
    fw = lowering_field_exact(spec, w, m)
    return build_hamiltonian(spec, i, m + 1) @ fw - fw @ build_hamiltonian(spec, i, m)


class TestOperatorIdentities:
    def test_commutator_with_lowering_field(self, rng):
        # [H_i, F(w)] = F(w) H^(i)/(w-z_i) - F^(i)/(w-z_i) sum_k H^(k)/(w-z_k),
        # exact at rational w off the poles
        for _ in range(3):
            spec = random_spec(rng, n_max=4, lam_max=3)
            w = rational_off_poles(rng, spec)
            for m in range(min(2, spec.total_weight - 1) + 1):
                fw = lowering_field_exact(spec, w, m)
                h_sum = site_cartan_sum(spec, w, m)
                for i in range(spec.n_sites):
                    lhs = hamiltonian_lowering_commutator(spec, i, w, m)
                    hi = build_site_operator("H", i, spec, m).scaled(1 / (w - spec.z[i]))
                    fi = build_site_operator("F", i, spec, m).scaled(1 / (w - spec.z[i]))
                    rhs = fw @ hi - fi @ h_sum
                    assert (lhs - rhs).is_zero()

    def test_double_commutator(self, rng):
        # [[H_i, F(w1)], F(w2)] = 2/(w1-w2) (F^(i)/(w1-z_i) F(w2) - F^(i)/(w2-z_i) F(w1))
        for _ in range(3):
            spec = random_spec(rng, n_max=4, lam_max=3)
            w1 = rational_off_poles(rng, spec)
            w2 = rational_off_poles(rng, spec)
            if w1 == w2:
                continue
            for m in range(min(1, spec.total_weight - 2) + 1):
                f1_m = lowering_field_exact(spec, w1, m)
                f2_m = lowering_field_exact(spec, w2, m)
                f2_up = lowering_field_exact(spec, w2, m + 1)
                for i in range(spec.n_sites):
                    lhs = (
                        hamiltonian_lowering_commutator(spec, i, w1, m + 1) @ f2_m
                        - f2_up @ hamiltonian_lowering_commutator(spec, i, w1, m)
                    )
                    fi_up = build_site_operator("F", i, spec, m + 1)
                    rhs = (
                        fi_up.scaled(1 / (w1 - spec.z[i])) @ f2_m
                        - fi_up.scaled(1 / (w2 - spec.z[i])) @ f1_m
                    ).scaled(Fraction(2) / (w1 - w2))
                    assert (lhs - rhs).is_zero()


class TestBetheVector:
    def test_empty_product_is_vacuum(self):
        psi = bethe_vector(SPEC2, [])
        assert np.allclose(psi, [1.0])

    def test_level_one_matches_singular_vector(self):
        psi = bethe_vector(SPEC2, [0.5])
        kernel = singular_basis_kernel(SPEC2, 1).vectors[0]
        target = np.array([float(x) for x in kernel])
        overlap = abs(np.vdot(psi, target)) / (
            np.linalg.norm(psi) * np.linalg.norm(target)
        )
        assert overlap > 1 - 1e-12

    def test_permutation_invariance(self, rng):
        spec = random_spec(rng, n_max=4, lam_max=3)
        roots = [0.3 + 0.2j, -0.7 - 0.1j]
        a = bethe_vector(spec, roots)
        b = bethe_vector(spec, roots[::-1])
        assert np.allclose(a, b)

    def test_coincident_roots_rejected(self):
        with pytest.raises(ValueError):
            bethe_vector(SPEC2, [0.5, 0.5])


class TestBetheResidual:
    def test_derived_root(self):
        (f1,) = bethe_residual(SPEC2, 1, [0.5])
        assert abs(f1) < 1e-15

    def test_large_w_residual_decays(self):
        (f1,) = bethe_residual(SPEC2, 1, [1e8])
        assert abs(f1) < 1e-7

    def test_pole_rejected(self):
        with pytest.raises(ValueError):
            bethe_residual(SPEC2, 1, [1.0])

    def test_root_count_must_match(self):
        with pytest.raises(ValueError):
            bethe_residual(SPEC2, 2, [0.5])


class TestClearedSystem:
    def test_jacobian_matches_finite_differences(self, rng):
        lam = np.array([2.0, 1.0, 3.0])
        z = np.array([0.0 + 0j, 1.0 + 0j, -0.5 + 0j])
        polys = _site_polynomials(lam, z)
        w = np.array([[0.3 + 0.4j, -1.2 + 0.1j, 2.0 - 0.3j]])
        g0, jac = _cleared_system(w, lam, z, polys)
        h = 1e-7
        for q in range(3):
            bumped = w.copy()
            bumped[0, q] += h
            g1, _ = _cleared_system(bumped, lam, z, polys)
            fd = (g1[0] - g0[0]) / h
            assert np.allclose(jac[0, :, q], fd, rtol=1e-5, atol=1e-5)

    def test_cleared_system_vanishes_at_known_solution(self):
        z = np.array([0.0 + 0j, 1.0 + 0j])
        roots = np.array([[0.5 + np.sqrt(3) / 6 * 1j, 0.5 - np.sqrt(3) / 6 * 1j]])
        lam22 = np.array([2.0, 2.0])
        polys22 = _site_polynomials(lam22, z)
        g, _ = _cleared_system(roots, lam22, z, polys22)
        assert np.max(np.abs(g)) < 1e-12


class TestSolveBethe:
    def test_two_site_closed_form(self):
        sols = solve_bethe(SPEC2, 1)
        assert len(sols) == 1 == expected_solution_count(2, 1)
        sol = sols[0]
        assert abs(sol.roots[0] - 0.5) < 1e-12
        assert abs(sol.eigenvalues[0] - 1.5) < 1e-12
        assert abs(sol.eigenvalues[1] + 1.5) < 1e-12
        assert sol.residual_eq < 1e-12
        assert not sol.multiplicity_flag

    def test_three_site_two_distinct_roots(self):
        sols = solve_bethe(SPEC3, 1)
        assert len(sols) == 2 == expected_solution_count(3, 1)
        for sol in sols:
            assert sol.singular_residual <= 1e-9
            assert sol.vector_residual <= 1e-9
            assert not sol.multiplicity_flag
        gap = abs(sols[0].roots[0] - sols[1].roots[0])
        assert gap > 1e-3

    def test_degenerate_complex_sites_flag_multiplicity(self):
        # double root of the level-one equation at z_3 = (1 + i sqrt(3))/2
        z = np.array([0.0, 1.0, 0.5 + 0.5j * np.sqrt(3.0)])
        sols = solve_bethe_numeric((1, 1, 1), z, 1)
        assert len(sols) == 1
        assert sols[0].multiplicity == 2
        assert sols[0].multiplicity_flag
        assert abs(sols[0].roots[0] - (0.5 + 1j * np.sqrt(3.0) / 6)) < 1e-6

    def test_two_site_weight_two_system(self):
        # hand reduction via symmetric functions: w1 + w2 = 1, w1 w2 = 1/3
        spec = ModelSpec((2, 2), (Fraction(0), Fraction(1)))
        sols = solve_bethe(spec, 2)
        assert len(sols) == 1 == expected_solution_count(2, 2)
        sol = sols[0]
        expected = sorted(
            np.roots([1.0, -1.0, 1.0 / 3.0]), key=lambda c: (c.real, c.imag)
        )
        assert np.allclose(sol.roots, expected, atol=1e-10)
        assert abs(sol.eigenvalues[0] - 4.0) < 1e-10
        assert abs(sol.eigenvalues[1] + 4.0) < 1e-10
        assert sol.vector_residual <= 1e-10
        assert sol.singular_residual <= 1e-10
        # cross-route: matches the singular-subspace diagonalization
        (ev,) = diagonalize_singular(spec, 2)
        assert np.allclose(sorted(ev.eigenvalues.real), sorted(sol.eigenvalues.real))

    def test_roots_stay_at_desk_scale(self, rng):
        spec = random_spec(rng, n_max=4, lam_max=3)
        if spec.min_weight >= 2:
            sols = solve_bethe(spec, 2)
        else:
            sols = solve_bethe(spec, 1)
        scale = max(abs(complex(a - b)) for a in spec.z for b in spec.z) or 1.0
        for sol in sols:
            assert np.max(np.abs(sol.roots)) < 100 * max(scale, 1.0)

    def test_determinism(self):
        a = solve_bethe(SPEC3, 1, seed=7)
        b = solve_bethe(SPEC3, 1, seed=7)
        assert len(a) == len(b)
        for x, y in zip(a, b):
            assert np.array_equal(x.roots, y.roots)

    def test_m_zero_rejected(self):
        with pytest.raises(ValueError):
            solve_bethe(SPEC2, 0)


class TestVerification:
    def test_true_solution_verifies(self):
        (sol,) = solve_bethe(SPEC2, 1)
        report = verify_solution(SPEC2, 1, sol, tol=1e-9)
        assert report.ok
        assert report.singular_residual < 1e-12
        assert report.vector_residual < 1e-12

    def test_random_point_fails(self, rng):
        from gaudin.bethe import BetheSolution

        fake = BetheSolution(
            roots=np.array([0.123 + 0.456j]),
            residual_eq=1.0,
            eigenvalues=np.zeros(2, dtype=complex),
            vector_residual=1.0,
            singular_residual=1.0,
        )
        report = verify_solution(SPEC2, 1, fake, tol=1e-9)
        assert not report.ok
        assert report.singular_residual > 1e-3

    def test_residual_scales_with_perturbation(self):
        # the raising image is a combination weighted by the residuals f_k,
        # so a small root perturbation gives a proportionally small residual
        eps = 1e-6
        psi = bethe_vector(SPEC2, [0.5 + eps])
        raise_e = build_total_generator("E", SPEC2, 1).to_array(float)
        image_norm = np.max(np.abs(raise_e @ psi)) / np.max(np.abs(psi))
        (f1,) = bethe_residual(SPEC2, 1, [0.5 + eps])
        assert image_norm < 10 * abs(f1)
        assert image_norm > abs(f1) / 10

    def test_solution_residual_tolerance_propagation(self, rng):
        for _ in range(3):
            spec = random_spec(rng, n_max=4, lam_max=3)
            sols = solve_bethe(spec, 1)
            for sol in sols:
                assert sol.singular_residual <= 10 * 1e-11
                assert sol.vector_residual <= 10 * 1e-11


class TestSpans:
    def test_bethe_vectors_span_singular_subspace(self):
        spec = ModelSpec((2, 2, 2), (Fraction(0), Fraction(1), Fraction(3)))
        m = 2
        sols = solve_bethe(spec, m)
        expected = expected_solution_count(spec.n_sites, m)
        assert len(sols) == expected
        kernel = singular_basis_kernel(spec, m)
        kernel_f = np.array(
            [[float(x) for x in vec] for vec in kernel.vectors], dtype=complex
        )
        bethe_f = np.array([bethe_vector(spec, sol.roots) for sol in sols])
        stacked = np.concatenate([kernel_f, bethe_f], axis=0)
        svals = np.linalg.svd(stacked, compute_uv=False)
        numeric_rank = int(np.sum(svals > 1e-8 * svals[0]))
        assert numeric_rank == expected

    def test_multiset_gap_helper(self):
        a = np.array([1.0 + 1j, 2.0])
        b = np.array([2.0 + 1e-12j, 1.0 + 1j])
        assert _multiset_gap(a, b) < 1e-9
        c = np.array([1.0 + 1j, 3.0])
        assert _multiset_gap(a, c) > 0.5
