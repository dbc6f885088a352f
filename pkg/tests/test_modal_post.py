"""Mode shapes, curve-fit error, MAC, mode pairing and damping sensitivity."""

from __future__ import annotations

import unittest

import numpy as np
import numpy.polynomial.polynomial as npoly

from modalsparse.contracts import GridMismatchError, NearMultipleRootError, ValidationError
from modalsparse.frf import FrfSet, ModalModel, Mode, frequency_grid, synthesize_frf
from modalsparse.lscf import CharPolynomial, pole_from_root, poly_roots
from modalsparse.modal import (
    compare_modes,
    curve_fit_mse,
    damping_sensitivity,
    estimate_mode_shapes,
    mac,
    resynthesize,
)

TS = 1.0 / 6000.0


def _model() -> ModalModel:
    return ModalModel(
        (
            Mode(f_hz=600.0, zeta=0.02, residues=np.array([1.0 + 0.3j, -0.4 + 0.1j, 0.2j])),
            Mode(f_hz=1500.0, zeta=0.01, residues=np.array([0.5 + 0.0j, 0.9 - 0.2j, -0.3 + 0.6j])),
        )
    )


class ModeShapeTests(unittest.TestCase):
    def setUp(self) -> None:
        self.model = _model()
        self.frf = synthesize_frf(self.model, frequency_grid(10.0, 3000.0, 400))
        self.poles = [(mode.f_hz, mode.zeta) for mode in self.model.modes]

    def test_exact_poles_give_back_the_residues(self) -> None:
        fitted = estimate_mode_shapes(self.frf, self.poles)
        np.testing.assert_allclose(fitted.residue_matrix(), self.model.residue_matrix(), rtol=1e-8, atol=1e-10)

    def test_unit_weights_change_nothing(self) -> None:
        weighted = FrfSet(grid=self.frf.grid, h=self.frf.h, weights=np.ones(self.frf.h.shape))
        plain = estimate_mode_shapes(self.frf, self.poles)
        fitted = estimate_mode_shapes(weighted, self.poles)
        np.testing.assert_allclose(fitted.residue_matrix(), plain.residue_matrix(), rtol=1e-9, atol=1e-12)

    def test_resynthesis_reproduces_the_data(self) -> None:
        fitted = estimate_mode_shapes(self.frf, self.poles)
        power = float(np.mean(np.abs(self.frf.h) ** 2))
        self.assertLess(curve_fit_mse(self.frf, resynthesize(fitted, self.frf.grid)), 1e-12 * power)

    def test_no_poles_is_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            estimate_mode_shapes(self.frf, [])


class CurveFitMseTests(unittest.TestCase):
    def test_constant_offset_gives_its_squared_modulus(self) -> None:
        grid = frequency_grid(10.0, 100.0, 10)
        fitted = FrfSet(grid=grid, h=np.arange(20.0).reshape(2, 10) + 0j)
        measured = FrfSet(grid=grid, h=fitted.h + (3 + 4j))
        self.assertAlmostEqual(curve_fit_mse(measured, fitted), 25.0)

    def test_different_grids_are_rejected(self) -> None:
        a = FrfSet(grid=frequency_grid(10.0, 100.0, 10), h=np.zeros(10))
        b = FrfSet(grid=frequency_grid(10.0, 200.0, 10), h=np.zeros(10))
        with self.assertRaises(GridMismatchError):
            curve_fit_mse(a, b)

    def test_different_output_counts_are_rejected(self) -> None:
        grid = frequency_grid(10.0, 100.0, 10)
        with self.assertRaises(GridMismatchError):
            curve_fit_mse(FrfSet(grid=grid, h=np.zeros((1, 10))), FrfSet(grid=grid, h=np.zeros((2, 10))))


class MacTests(unittest.TestCase):
    def setUp(self) -> None:
        rng = np.random.default_rng(12)
        self.shapes = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))

    def test_self_mac_has_a_unit_diagonal_and_is_symmetric(self) -> None:
        values = mac(self.shapes, self.shapes).values
        np.testing.assert_allclose(np.diag(values), 1.0, rtol=1e-12)
        np.testing.assert_allclose(values, values.T, rtol=1e-12)
        self.assertTrue(np.all((values >= 0) & (values <= 1)))

    def test_complex_scaling_does_not_matter(self) -> None:
        scaled = mac((2.0 - 3.0j) * self.shapes, self.shapes).values
        np.testing.assert_allclose(scaled, mac(self.shapes, self.shapes).values, rtol=1e-12)

    def test_orthogonal_shapes_score_zero(self) -> None:
        self.assertEqual(mac(np.array([1.0, 0.0]), np.array([0.0, 1j])).values[0, 0], 0.0)

    def test_zero_shape_is_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            mac(np.zeros(3), np.ones(3))


class CompareModesTests(unittest.TestCase):
    def test_a_model_matches_itself(self) -> None:
        rows, matrix = compare_modes(_model(), _model())
        self.assertTrue(all(row.matched for row in rows))
        self.assertEqual([row.f_error_pct for row in rows], [0.0, 0.0])
        self.assertEqual([row.zeta_error_pct for row in rows], [0.0, 0.0])
        np.testing.assert_allclose([row.mac for row in rows], 1.0, rtol=1e-12)
        self.assertEqual(matrix.shape, (2, 2))

    def test_unmatched_modes_get_their_own_rows(self) -> None:
        a = ModalModel((Mode(100.0, 0.01), Mode(500.0, 0.02)))
        b = ModalModel((Mode(101.0, 0.011), Mode(2000.0, 0.01)))
        rows, matrix = compare_modes(a, b)
        self.assertIsNone(matrix)
        self.assertEqual([(row.index_a, row.index_b) for row in rows], [(0, 0), (1, None), (None, 1)])
        self.assertAlmostEqual(rows[0].f_error_pct, 1.0)
        self.assertAlmostEqual(rows[0].zeta_error_pct, 10.0)

    def test_each_mode_is_used_once(self) -> None:
        a = ModalModel((Mode(100.0, 0.01), Mode(102.0, 0.01)))
        b = ModalModel((Mode(101.5, 0.01),))
        rows, _ = compare_modes(a, b)
        self.assertEqual([(row.index_a, row.index_b) for row in rows], [(0, None), (1, 0)])


class DampingSensitivityTests(unittest.TestCase):
    def setUp(self) -> None:
        omegas = 2 * np.pi * np.array([700.0, 1400.0])
        lams = -0.02 * omegas + 1j * omegas * np.sqrt(1 - 0.02**2)
        roots = np.exp(-np.concatenate([lams, np.conj(lams)]) * TS)
        self.target = complex(roots[0])
        self.a = CharPolynomial.from_solution(npoly.polyfromroots(roots)[:-1])

    def _zeta_of_nearest_root(self, coeffs: np.ndarray) -> float:
        roots = poly_roots(coeffs)
        z = roots[int(np.argmin(np.abs(roots - self.target)))]
        return pole_from_root(z, TS).zeta

    def test_matches_a_finite_difference(self) -> None:
        delta = np.array([0.3, -0.2 + 0.1j, 0.05j, 0.4, 0.0])
        eps = 1e-7
        base = self._zeta_of_nearest_root(self.a.coeffs)
        moved = self._zeta_of_nearest_root(self.a.coeffs + eps * delta)
        expected = (moved - base) / eps
        got = damping_sensitivity(self.a, delta, self.target, TS)
        self.assertAlmostEqual(got, expected, delta=1e-4 * max(abs(expected), 1e-6))

    def test_forward_differences_converge_linearly(self) -> None:
        """A forward difference is off by O(step): a tenth of the step, a tenth of the error."""
        delta = np.array([0.3, -0.2 + 0.1j, 0.05j, 0.4, 0.0])
        exact = damping_sensitivity(self.a, delta, self.target, TS)
        base = self._zeta_of_nearest_root(self.a.coeffs)
        errors = {}
        for step in (1e-6, 1e-7, 1e-8):
            moved = self._zeta_of_nearest_root(self.a.coeffs + step * delta)
            errors[step] = abs((moved - base) / step - exact)
        self.assertGreater(errors[1e-6], 0.0)
        self.assertTrue(5.0 <= errors[1e-6] / errors[1e-7] <= 20.0, errors)
        self.assertLess(errors[1e-8], errors[1e-6] / 5.0, errors)

    def test_repeated_root_is_refused(self) -> None:
        z = 1.01 * np.exp(-0.5j)
        double = CharPolynomial.from_solution(npoly.polyfromroots([z, z])[:-1])
        with self.assertRaises(NearMultipleRootError):
            damping_sensitivity(double, np.ones(3), z, TS)

    def test_non_root_is_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            damping_sensitivity(self.a, np.zeros(5), 2.0 + 0j, TS)

    def test_perturbation_length_must_match(self) -> None:
        with self.assertRaises(ValidationError):
            damping_sensitivity(self.a, np.zeros(3), self.target, TS)


if __name__ == "__main__":
    unittest.main()
