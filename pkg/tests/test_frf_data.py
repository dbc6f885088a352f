"""FRF datasets: grid rules, modal synthesis, noise and the two file layouts.

The synthesizer is the ground truth every fit is judged against, so the
checks here pin it to the closed form rather than to a stored fixture.
"""

from __future__ import annotations

import tempfile
import unittest
from pathlib import Path

import numpy as np

from modalsparse.contracts import ParseError, UnsupportedModelError, ValidationError
from modalsparse.frf import (
    FrequencyGrid,
    FrfSet,
    ModalModel,
    Mode,
    frequency_grid,
    inject_noise,
    load_frf,
    load_modal_model,
    modal_superposition,
    sampling_period,
    save_frf,
    save_modal_model,
    synthesize_frf,
)


def _two_mode_model() -> ModalModel:
    return ModalModel(
        (
            Mode(f_hz=400.0, zeta=0.01, residues=np.array([1.0 + 0.5j, -0.3 + 0.0j])),
            Mode(f_hz=1200.0, zeta=0.02, residues=np.array([0.2 - 0.1j, 0.8 + 0.2j])),
        )
    )


class SamplingPeriodTests(unittest.TestCase):
    def test_is_half_the_inverse_of_the_top_line(self) -> None:
        self.assertEqual(sampling_period([10.0, 500.0, 3000.0]), 1.0 / 6000.0)

    def test_empty_grid_is_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            sampling_period([])


class FrequencyGridTests(unittest.TestCase):
    def test_evenly_spaced_band_inclusive(self) -> None:
        grid = frequency_grid(10.0, 3000.0, 1024)
        self.assertEqual(len(grid), 1024)
        self.assertEqual(grid.band, (10.0, 3000.0))
        self.assertAlmostEqual(grid.ts_seconds, 1.0 / 6000.0)

    def test_non_increasing_grid_names_the_line(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            FrequencyGrid.from_freqs([10.0, 20.0, 20.0, 30.0])
        self.assertEqual(ctx.exception.context["line"], 2)

    def test_non_positive_frequency_is_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            FrequencyGrid.from_freqs([0.0, 10.0])

    def test_explicit_period_is_kept(self) -> None:
        grid = FrequencyGrid.from_freqs([10.0, 20.0], ts_seconds=1e-3)
        self.assertEqual(grid.ts_seconds, 1e-3)

    def test_arrays_are_read_only(self) -> None:
        grid = frequency_grid(10.0, 100.0, 4)
        with self.assertRaises(ValueError):
            grid.freqs_hz[0] = 1.0


class FrfSetTests(unittest.TestCase):
    def test_single_weight_row_is_broadcast(self) -> None:
        grid = frequency_grid(10.0, 100.0, 5)
        frf = FrfSet(grid=grid, h=np.ones((3, 5)), weights=np.arange(5.0))
        self.assertEqual(frf.weights.shape, (3, 5))
        np.testing.assert_array_equal(frf.weights[2], np.arange(5.0))

    def test_shape_mismatch_is_rejected(self) -> None:
        grid = frequency_grid(10.0, 100.0, 5)
        with self.assertRaises(ValidationError):
            FrfSet(grid=grid, h=np.ones((2, 4)))

    def test_negative_weight_is_rejected(self) -> None:
        grid = frequency_grid(10.0, 100.0, 3)
        with self.assertRaises(ValidationError):
            FrfSet(grid=grid, h=np.ones(3), weights=[1.0, -1.0, 1.0])


class ModeTests(unittest.TestCase):
    def test_pole_from_frequency_and_damping(self) -> None:
        mode = Mode(f_hz=100.0, zeta=0.05)
        omega = 2 * np.pi * 100.0
        self.assertAlmostEqual(mode.pole.real, -0.05 * omega)
        self.assertAlmostEqual(mode.pole.imag, omega * np.sqrt(1 - 0.05**2))

    def test_overdamped_mode_is_unsupported(self) -> None:
        with self.assertRaises(UnsupportedModelError):
            Mode(f_hz=100.0, zeta=1.0).pole

    def test_zero_damping_is_invalid(self) -> None:
        with self.assertRaises(ValidationError):
            Mode(f_hz=100.0, zeta=0.0).pole

    def test_mixed_output_counts_are_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            ModalModel((Mode(100.0, 0.01, [1.0]), Mode(200.0, 0.01, [1.0, 2.0])))


class SynthesisTests(unittest.TestCase):
    def test_single_mode_matches_closed_form(self) -> None:
        mode = Mode(f_hz=250.0, zeta=0.02, residues=np.array([0.5 + 0.25j]))
        grid = frequency_grid(10.0, 1000.0, 64)
        frf = synthesize_frf(ModalModel((mode,)), grid)
        jw = 1j * grid.omega
        expected = 0.5 + 0.25j
        closed = expected / (jw - mode.pole) + np.conj(expected) / (jw - np.conj(mode.pole))
        np.testing.assert_allclose(frf.h[0], closed, rtol=1e-13)

    def test_peak_sits_near_the_natural_frequency(self) -> None:
        mode = Mode(f_hz=500.0, zeta=0.005, residues=np.array([1.0j]))
        grid = frequency_grid(10.0, 1000.0, 991)
        frf = synthesize_frf(ModalModel((mode,)), grid)
        peak = grid.freqs_hz[int(np.argmax(np.abs(frf.h[0])))]
        self.assertAlmostEqual(peak, 500.0, delta=2.0)

    def test_negative_frequencies_are_the_conjugate(self) -> None:
        """Conjugate-pair residues mean a real impulse response: H(-w) = conj H(w)."""
        model = _two_mode_model()
        omega = 2 * np.pi * np.linspace(50.0, 2000.0, 40)
        positive = modal_superposition(model, omega)
        negative = modal_superposition(model, -omega)
        np.testing.assert_allclose(negative, np.conj(positive), rtol=1e-12, atol=1e-15)

    def test_empty_model_gives_zeros(self) -> None:
        grid = frequency_grid(10.0, 100.0, 8)
        frf = synthesize_frf(ModalModel(), grid, n_outputs=2)
        self.assertEqual(frf.h.shape, (2, 8))
        self.assertFalse(np.any(frf.h))


class NoiseTests(unittest.TestCase):
    def setUp(self) -> None:
        self.frf = synthesize_frf(_two_mode_model(), frequency_grid(10.0, 3000.0, 256))

    def test_zero_noise_is_identity(self) -> None:
        self.assertIs(inject_noise(self.frf, 0.0, seed=1), self.frf)

    def test_same_seed_is_bit_identical(self) -> None:
        a = inject_noise(self.frf, 0.05, seed=7)
        b = inject_noise(self.frf, 0.05, seed=7)
        np.testing.assert_array_equal(a.h, b.h)

    def test_different_seeds_differ(self) -> None:
        a = inject_noise(self.frf, 0.05, seed=7)
        b = inject_noise(self.frf, 0.05, seed=8)
        self.assertFalse(np.array_equal(a.h, b.h))

    def test_noise_is_multiplicative_and_real(self) -> None:
        """The perturbation scales each sample; the phase is untouched."""
        noisy = inject_noise(self.frf, 0.1, seed=3)
        ratio = noisy.h / self.frf.h
        np.testing.assert_allclose(ratio.imag, 0.0, atol=1e-12)

    def test_spread_matches_alpha(self) -> None:
        grid = frequency_grid(10.0, 3000.0, 20_000)
        frf = synthesize_frf(_two_mode_model(), grid)
        ratio = inject_noise(frf, 0.05, seed=0).h / frf.h - 1.0
        self.assertAlmostEqual(float(np.std(ratio.real)), 0.05, delta=0.05 * 0.05)

    def test_negative_alpha_is_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            inject_noise(self.frf, -1.0, seed=0)


class FrfFileTests(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)
        self.frf = synthesize_frf(_two_mode_model(), frequency_grid(10.0, 3000.0, 50))

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def test_csv_round_trip_is_exact(self) -> None:
        path = save_frf(self.frf, self.dir / "frf.csv")
        back = load_frf(path)
        np.testing.assert_array_equal(back.h, self.frf.h)
        np.testing.assert_array_equal(back.grid.freqs_hz, self.frf.grid.freqs_hz)
        self.assertEqual(back.grid.ts_seconds, self.frf.grid.ts_seconds)
        self.assertIsNone(back.weights)

    def test_json_round_trip_keeps_weights(self) -> None:
        weighted = FrfSet(grid=self.frf.grid, h=self.frf.h, weights=np.full(self.frf.h.shape, 0.5))
        back = load_frf(save_frf(weighted, self.dir / "frf.json"))
        np.testing.assert_array_equal(back.h, weighted.h)
        np.testing.assert_array_equal(back.weights, weighted.weights)

    def test_csv_without_period_derives_it(self) -> None:
        path = self.dir / "bare.csv"
        path.write_text("freq_hz,out1_re,out1_im\n100,1,0\n200,0,1\n", encoding="utf-8")
        frf = load_frf(path)
        self.assertEqual(frf.grid.ts_seconds, 1.0 / 400.0)
        np.testing.assert_array_equal(frf.h[0], [1.0, 1.0j])

    def test_bad_number_names_line_and_column(self) -> None:
        path = self.dir / "bad.csv"
        path.write_text("freq_hz,out1_re,out1_im\n100,1,0\n200,oops,1\n", encoding="utf-8")
        with self.assertRaises(ParseError) as ctx:
            load_frf(path)
        self.assertEqual(ctx.exception.context["line"], 3)
        self.assertEqual(ctx.exception.context["field"], "out1_re")

    def test_bad_header_is_a_parse_error(self) -> None:
        path = self.dir / "hdr.csv"
        path.write_text("hz,re,im\n100,1,0\n", encoding="utf-8")
        with self.assertRaises(ParseError):
            load_frf(path)

    def test_non_utf8_csv_is_a_parse_error_naming_the_line(self) -> None:
        path = self.dir / "latin.csv"
        path.write_bytes(b"freq_hz,out1_re,out1_im\n100,1,0\n200,\xe9,1\n")
        with self.assertRaises(ParseError) as ctx:
            load_frf(path)
        self.assertEqual(ctx.exception.context["line"], 3)
        self.assertEqual(ctx.exception.context["path"], str(path))

    def test_non_utf8_json_is_a_parse_error(self) -> None:
        path = self.dir / "latin.json"
        path.write_bytes(b'{"freq_hz": [100, 200],\n "outputs": "\xff"}')
        with self.assertRaises(ParseError) as ctx:
            load_frf(path)
        self.assertEqual(ctx.exception.context["line"], 2)

    def test_ragged_json_channels_are_a_parse_error(self) -> None:
        path = self.dir / "ragged.json"
        path.write_text(
            '{"freq_hz": [100, 200], "outputs": ['
            '{"re": [1, 2], "im": [0, 0]}, {"re": [1], "im": [0]}]}',
            encoding="utf-8",
        )
        with self.assertRaises(ParseError) as ctx:
            load_frf(path)
        self.assertEqual(ctx.exception.context["path"], str(path))

    def test_partial_weights_in_json_name_the_file(self) -> None:
        path = self.dir / "weights.json"
        path.write_text(
            '{"freq_hz": [100, 200], "outputs": ['
            '{"re": [1, 2], "im": [0, 0], "w": [1, 1]}, {"re": [1, 2], "im": [0, 0]}]}',
            encoding="utf-8",
        )
        with self.assertRaises(ParseError) as ctx:
            load_frf(path)
        self.assertEqual(ctx.exception.context["field"], "outputs.w")
        self.assertEqual(ctx.exception.context["path"], str(path))

    def test_non_utf8_modal_model_is_a_parse_error(self) -> None:
        path = self.dir / "modes.json"
        path.write_bytes(b'{"modes": [\xc3]}')
        with self.assertRaises(ParseError) as ctx:
            load_modal_model(path)
        self.assertEqual(ctx.exception.context["line"], 1)

    def test_unknown_suffix_is_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            load_frf(self.dir / "frf.txt")

    def test_modal_model_round_trip(self) -> None:
        model = _two_mode_model()
        back = load_modal_model(save_modal_model(model, self.dir / "modes.json", method="omp"))
        self.assertEqual(len(back), 2)
        self.assertEqual(back.modes[1].f_hz, 1200.0)
        np.testing.assert_array_equal(back.residue_matrix(), model.residue_matrix())

    def test_malformed_modal_model_is_a_parse_error(self) -> None:
        path = self.dir / "modes.json"
        path.write_text('{"modes": [{"f_hz": -1, "zeta": 0.1}]}', encoding="utf-8")
        with self.assertRaises(ParseError):
            load_modal_model(path)


if __name__ == "__main__":
    unittest.main()
