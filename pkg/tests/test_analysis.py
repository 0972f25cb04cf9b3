import numpy as np
import pytest

from fourierpath import (
    FieldState,
    GvfParams,
    NoiseSpec,
    SimConfig,
    add_noise,
    apply_window,
    certify,
    dft,
    f_backward,
    make_trig_path,
    p_bar,
    reconstruction_mse,
    select_window,
    synth_path,
    tail_energy,
    window_sweep,
)
from fourierpath.analysis import expected_passband_noise

from conftest import decaying_path, decaying_spectrum, random_path, sparse_spectrum
from oracles import p_bar_reference, p_bar_sweep_by_entry_order

TWO_PI = 2.0 * np.pi
UNIT = GvfParams(1.0, 1.0)


class TestReconstructionMse:
    def test_identical_curves_give_zero(self):
        path = make_trig_path(decaying_spectrum(32, seed=1))
        assert reconstruction_mse(path, path, 256) <= 1e-12

    def test_unit_epicycle_against_nothing(self):
        truth = make_trig_path(sparse_spectrum(8, {1: 1.0 + 0j}))
        empty = make_trig_path(sparse_spectrum(8, {}))
        assert reconstruction_mse(truth, empty, 128) == pytest.approx(TWO_PI, rel=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_equals_coefficient_energy_gap(self, seed):
        # the integral of the squared gap equals 2*pi times the summed
        # squared coefficient differences (orthogonality of harmonics)
        spec = dft(random_path(48, seed=seed))
        w = apply_window(spec, 10)
        truth = make_trig_path(spec)
        approx = make_trig_path(w)
        kept = set(w.k.tolist())
        gap = sum(
            abs(spec.coefficient(int(k)) - (w.coefficient(int(k)) if int(k) in kept else 0j)) ** 2
            for k in spec.k
        )
        assert reconstruction_mse(truth, approx, 512) == pytest.approx(TWO_PI * gap, rel=1e-9)

    def test_too_few_quadrature_points_rejected(self):
        path = make_trig_path(sparse_spectrum(8, {1: 1.0 + 0j}))
        with pytest.raises(ValueError):
            reconstruction_mse(path, path, 32)


class TestPBar:
    def test_zero_noise_full_window_is_zero(self):
        spec = dft(random_path(32, seed=0))
        assert p_bar(spec, 32, 0.0, 0.0) == 0.0

    def test_single_out_of_window_harmonic(self):
        spec = sparse_spectrum(9, {2: 1.0 + 0j})
        assert p_bar(spec, 2, 0.0, 0.0) == pytest.approx(TWO_PI)

    def test_noise_term_arithmetic(self):
        # zero tail, so only the closed-form noise term remains
        spec = sparse_spectrum(758, {1: 1.0 + 0j})
        value = p_bar(spec, 100, 0.1, 0.15)
        want = TWO_PI * (100 / 758) ** 2 * (0.1**2 + 0.15**2)
        assert value == pytest.approx(want, rel=1e-12)
        assert value == pytest.approx(0.0035540, abs=5e-7)

    @pytest.mark.parametrize("n,m", [(64, 7), (65, 10), (128, 1)])
    def test_matches_reference(self, n, m):
        spec = dft(random_path(n, seed=n))
        want = p_bar_reference(spec.k, spec.a, n, m, 0.2, 0.3)
        assert p_bar(spec, m, 0.2, 0.3) == pytest.approx(want, rel=1e-12)

    def test_negative_sigma_rejected(self):
        spec = dft(random_path(16, seed=2))
        with pytest.raises(ValueError):
            p_bar(spec, 4, -0.1, 0.0)


class TestFBackward:
    def test_requires_width_two(self):
        spec = dft(random_path(16, seed=3))
        with pytest.raises(ValueError):
            f_backward(spec, 1, 0.1, 0.1)

    def test_pure_noise_growth_is_positive(self):
        # all energy inside the smallest window: growing it only adds noise
        spec = sparse_spectrum(64, {0: 1.0 + 0j})
        assert all(f_backward(spec, m, 1.0, 1.0) > 0 for m in range(2, 65))

    def test_large_entering_coefficient_makes_it_negative(self):
        spec = sparse_spectrum(64, {0: 1.0 + 0j, 2: 3.0 + 0j})
        # the +-2 pair enters the window at width 4
        assert f_backward(spec, 4, 0.01, 0.01) < 0

    def test_zero_noise_never_positive(self):
        spec = dft(random_path(64, seed=4))
        assert all(f_backward(spec, m, 0.0, 0.0) <= 0 for m in range(2, 65))

    def test_differences_telescope(self):
        spec = dft(random_path(64, seed=5, scale=0.1))
        for m in (2, 17, 40, 64):
            total = sum(f_backward(spec, i, 0.05, 0.02) for i in range(2, m + 1))
            direct = p_bar(spec, m, 0.05, 0.02) - p_bar(spec, 1, 0.05, 0.02)
            assert total == pytest.approx(direct, abs=1e-12)


class TestSelectWindow:
    def test_zero_noise_prefers_the_widest_window(self):
        spec = dft(random_path(48, seed=6))
        m_star, value = select_window(spec, 0.0, 0.0, 48)
        assert m_star == 48
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_low_frequency_spectrum_with_noise_prefers_narrow(self):
        spec = sparse_spectrum(256, {0: 1.0 + 0j, 1: 0.5 + 0j})
        m_star, _ = select_window(spec, 0.5, 0.5, 256)
        assert m_star <= 2

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_exhaustive_reference(self, seed):
        spec = dft(random_path(96, seed=seed, scale=0.3))
        sweep = p_bar_sweep_by_entry_order(spec.k, spec.a, 96, 0.04, 0.07, 96)
        want_m = int(np.argmin(sweep)) + 1
        got_m, got_val = select_window(spec, 0.04, 0.07, 96)
        assert got_m == want_m
        assert got_val == pytest.approx(float(sweep[want_m - 1]), rel=1e-12)

    def test_window_sweep_table_is_consistent(self):
        spec = dft(random_path(32, seed=9))
        rows = window_sweep(spec, 0.1, 0.2, 32)
        assert [r[0] for r in rows] == list(range(1, 33))
        assert rows[0][2] is None
        for m, value, diff, tail in rows:
            assert value == pytest.approx(p_bar(spec, m, 0.1, 0.2), rel=1e-15)
            assert tail == pytest.approx(tail_energy(spec, m), rel=1e-15)
            if m >= 2:
                assert diff == pytest.approx(f_backward(spec, m, 0.1, 0.2), abs=1e-15)


class TestPassbandNoise:
    def test_exact_expectation_matches_monte_carlo(self):
        # window-admitted noise energy: per-coefficient power is
        # (s1^2+s2^2)/N, and the width-m window keeps 2*(m//2)+1 bins
        n, m, s1, s2 = 128, 12, 0.3, 0.4
        clean = synth_path("circle", n, [1.0])
        clean_spec = dft(clean)
        vals = []
        for seed in range(150):
            noisy = dft(add_noise(clean, NoiseSpec(s1, s2, seed)))
            w = apply_window(noisy, m)
            gap = sum(
                abs(w.coefficient(int(k)) - clean_spec.coefficient(int(k))) ** 2
                for k in w.k
            )
            vals.append(TWO_PI * gap)
        expected = expected_passband_noise(n, m, s1, s2)
        assert np.mean(vals) == pytest.approx(expected, rel=0.15)


class TestCertify:
    def test_zero_noise_full_window_is_perfect(self):
        clean = synth_path("circle", 64, [1.0])
        report = certify(
            clean,
            NoiseSpec(0.0, 0.0, 1),
            m=64,
            params=UNIT,
            cfg=SimConfig(FieldState(1.5, 0.0, 0.0), duration=10.0, dt=1e-3),
            runs=2,
        )
        assert report.delta == 0.0
        assert report.p_integral <= 1e-9
        # scheme residue only; the pass flag tolerates it via its noise floor
        assert report.e_ms_final < 1e-6
        assert report.passed

    def test_full_window_bound_holds_structurally(self):
        # keeping the whole noisy spectrum: the measured ultimate error is
        # the total noise power, while the bound is 2*pi times it
        clean = synth_path("circle", 64, [1.0])
        report = certify(
            clean,
            NoiseSpec(0.1, 0.1, 77),
            m=64,
            params=UNIT,
            cfg=SimConfig(FieldState(2.0, 0.0, 0.0), duration=6.0, dt=1e-3),
            runs=10,
        )
        assert report.passed
        sigma_sq = 0.1**2 + 0.1**2
        assert report.delta == pytest.approx(TWO_PI * sigma_sq, rel=1e-12)
        assert report.e_ms_final == pytest.approx(sigma_sq, rel=0.35)

    def test_bound_holds_on_tail_rich_data(self):
        # dominant low frequencies plus a genuine high-frequency tail: the
        # discarded-energy term dominates the bound and the inequality holds
        clean = decaying_path(128, seed=42)
        report = certify(
            clean,
            NoiseSpec(0.02, 0.02, 1234),
            m=10,
            params=UNIT,
            cfg=SimConfig(FieldState(-1.0, 2.0, 0.0), duration=8.0, dt=2e-3),
            runs=10,
        )
        assert report.passed
        assert report.e_ms_final > 0
        assert report.delta / report.e_ms_final > 2.0

    def test_report_is_deterministic_per_master_seed(self):
        clean = synth_path("circle", 48, [1.0])
        kwargs = dict(
            noise=NoiseSpec(0.05, 0.08, 31337),
            m=6,
            params=UNIT,
            cfg=SimConfig(FieldState(2.0, 0.0, 0.0), duration=4.0, dt=2e-3),
            runs=4,
        )
        a = certify(clean, **kwargs)
        b = certify(clean, **kwargs)
        assert a == b
        assert a.e_ms_per_run == b.e_ms_per_run

    def test_literal_integral_flag_scales_by_two_pi(self):
        clean = synth_path("circle", 48, [1.0])
        kwargs = dict(
            noise=NoiseSpec(0.05, 0.05, 9),
            m=6,
            params=UNIT,
            cfg=SimConfig(FieldState(1.0, 0.0, 0.0), duration=4.0, dt=2e-3),
            runs=3,
        )
        plain = certify(clean, **kwargs)
        literal = certify(clean, literal_theta_integral=True, **kwargs)
        assert literal.e_ms_final == pytest.approx(TWO_PI * plain.e_ms_final, rel=1e-12)

    def test_small_width_report_has_no_backward_difference(self):
        clean = synth_path("circle", 32, [1.0])
        report = certify(
            clean,
            NoiseSpec(0.01, 0.01, 5),
            m=1,
            params=UNIT,
            cfg=SimConfig(FieldState(1.0, 0.0, 0.0), duration=2.0, dt=1e-2),
            runs=2,
        )
        assert report.f_backward is None
        report2 = certify(
            clean,
            NoiseSpec(0.01, 0.01, 5),
            m=4,
            params=UNIT,
            cfg=SimConfig(FieldState(1.0, 0.0, 0.0), duration=2.0, dt=1e-2),
            runs=2,
        )
        assert report2.f_backward is not None

    def test_zero_runs_rejected(self):
        clean = synth_path("circle", 32, [1.0])
        with pytest.raises(ValueError):
            certify(clean, NoiseSpec(0.1, 0.1, 0), 4, UNIT,
                    SimConfig(FieldState(0, 0, 0), 1.0, 1e-2), runs=0)
