use approx::assert_relative_eq;
use microcav_core::analysis::{calibrate_length, fit_peaks_from_seeds, lorentzian, residual_rms, PeakSeed};
use microcav_core::cavity::TransverseMode;
use microcav_core::coupling::spectral_overlap;
use microcav_core::io::{read_spectrum_csv, read_trace_csv, write_spectrum_csv, write_trace_csv};
use microcav_core::optics::{materials, stopband_at, Layer, StopbandSearch, Threshold};
use microcav_core::spectrum::linspace;
use microcav_core::{
    airy_transmission, branching_ratio, effective_enhancement, evaluate_design, filtered_spectrum,
    gaussian_waist, purcell_max, quarter_wave_stack, radius_from_splitting, required_enhancement,
    stack_response, synthesize_mode_map, synthesize_resonance_positions, transverse_mode_spacing,
    Background, CavityFilter, EmitterModel, LayerStack, Polarization, ScanTrace, Spectrum,
};
use proptest::prelude::*;

fn lossless_stack() -> impl Strategy<Value = LayerStack> {
    (
        1.0..1.8f64,
        1.0..2.5f64,
        prop::collection::vec((1.0..3.0f64, 5.0..400.0f64), 0..20),
    )
        .prop_map(|(n0, ns, layers)| {
            let layers = layers.into_iter().map(|(n, d)| Layer::new(n, d).unwrap()).collect();
            LayerStack::new(n0, ns, layers).unwrap()
        })
}

fn polarization() -> impl Strategy<Value = Polarization> {
    prop_oneof![Just(Polarization::S), Just(Polarization::P)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn energy_is_conserved(stack in lossless_stack(), l in 300.0..1600.0f64, a in 0.0..1.5f64, p in polarization()) {
        let r = stack_response(&stack, l, a, p).unwrap();
        prop_assert!((r.reflectance + r.transmittance - 1.0).abs() < 1e-10);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&r.reflectance));
    }

    #[test]
    fn transmittance_is_reciprocal(stack in lossless_stack(), l in 300.0..1600.0f64) {
        let forward = stack_response(&stack, l, 0.0, Polarization::S).unwrap().transmittance;
        let backward = stack_response(&stack.reversed(), l, 0.0, Polarization::S).unwrap().transmittance;
        prop_assert!((forward - backward).abs() < 1e-10);
    }

    #[test]
    fn polarisations_agree_at_normal_incidence(stack in lossless_stack(), l in 300.0..1600.0f64) {
        let s = stack_response(&stack, l, 0.0, Polarization::S).unwrap().reflectance;
        let p = stack_response(&stack, l, 0.0, Polarization::P).unwrap().reflectance;
        prop_assert!((s - p).abs() < 1e-12);
    }

    #[test]
    fn airy_is_periodic(x in -3.0..3.0f64, k in -5i32..5, f in 1.0..1e4f64) {
        let a = airy_transmission(x, f, 1.0, 1.0);
        let b = airy_transmission(x + k as f64, f, 1.0, 1.0);
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300) + 1e-15);
    }

    #[test]
    fn splitting_inverts(l in 0.5..50.0f64, extra in 1.0..5000.0f64, lambda in 300.0..2000.0f64) {
        let r1 = l + extra;
        let dl = transverse_mode_spacing(l, r1, lambda, 1).unwrap();
        let back = radius_from_splitting(dl, l, lambda).unwrap();
        prop_assert!((back / r1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn waist_scaling(l in 1.0..20.0f64, extra in 1.0..2000.0f64, lambda in 400.0..1200.0f64) {
        let r1 = l + extra;
        let w = gaussian_waist(l, r1, lambda).unwrap().waist_um;
        let w2 = gaussian_waist(l, r1, 2.0 * lambda).unwrap().waist_um;
        prop_assert!((w2 / w - 2f64.sqrt()).abs() < 1e-12);
        let expected = (lambda * 1e-3 / std::f64::consts::PI).sqrt() * (l * (r1 - l)).powf(0.25);
        prop_assert!((w / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn branching_inverse_pair(alpha0 in 0.001..0.999f64, t in 0.0..1.0f64) {
        let target = alpha0 + (0.9999 - alpha0) * t.max(1e-3);
        prop_assume!(target > alpha0 && target < 1.0);
        let e = required_enhancement(alpha0, target).unwrap();
        prop_assert!((branching_ratio(alpha0, e).unwrap() / target - 1.0).abs() < 1e-12);
    }

    #[test]
    fn branching_is_monotone(alpha0 in 0.01..0.98f64, e in 0.0..1e4f64) {
        let b = branching_ratio(alpha0, e).unwrap();
        prop_assert!(branching_ratio(alpha0, e * 1.01 + 1e-6).unwrap() > b);
        prop_assert!(branching_ratio(alpha0 + 0.01, e).unwrap() >= b);
        prop_assert_eq!(branching_ratio(alpha0, 1.0).unwrap(), alpha0);
    }

    #[test]
    fn effective_never_exceeds_purcell(q in 1.0..1e6f64, v in 0.1..1e4f64, f in 0.0..1.0f64, o in 0.0..1.0f64) {
        let fp = purcell_max(q, v).unwrap();
        prop_assert!(effective_enhancement(fp, f, o).unwrap() <= fp);
    }

    #[test]
    fn filtering_is_linear_and_non_negative(scale in 0.0..10.0f64, b in 0.0..0.1f64, f in 20.0..2000.0f64) {
        let grid = linspace(760.0, 880.0, 1201);
        let s = EmitterModel::dbt().spectrum(&grid).unwrap();
        let filter = CavityFilter::resonant(f, 2.7475, 785.0).unwrap();
        let bg = Background::Scalar(b);
        let one = filtered_spectrum(&s, &filter, &bg, &[], None).unwrap();
        let scaled = filtered_spectrum(&s.map(|_, v| v * scale), &filter, &bg, &[], None).unwrap();
        for (a, c) in one.values().iter().zip(scaled.values()) {
            prop_assert!(*c >= 0.0);
            prop_assert!((a * scale - c).abs() <= 1e-12 * (1.0 + c.abs()));
        }
        let o = spectral_overlap(&s, &filter).unwrap();
        prop_assert!(o.resonance_inside && (0.0..=1.0).contains(&o.value));
    }

    #[test]
    fn design_monotone_in_finesse_and_radius(f in 100.0..5e4f64, r in 20.0..3000.0f64, m in 1u32..12) {
        let dbt = EmitterModel::dbt();
        let d = evaluate_design(f, r, m, 780.0, &dbt).unwrap();
        prop_assert!(evaluate_design(f * 1.1, r, m, 780.0, &dbt).unwrap().branching_ratio >= d.branching_ratio);
        prop_assert!(evaluate_design(f, r * 1.1, m, 780.0, &dbt).unwrap().branching_ratio <= d.branching_ratio);
    }

    #[test]
    fn noiseless_calibration_round_trip(m in 3u32..40, scale in 0.1..10.0f64, offset in -500.0..500.0f64) {
        let lasers = [763.0, 775.0, 785.0];
        let pos = synthesize_resonance_positions(m, &lasers, 3, scale, offset, 0.0, 0).unwrap();
        let cal = calibrate_length(&pos, &lasers, (1, 60)).unwrap();
        prop_assert_eq!(cal.m, m);
        prop_assert!((cal.piezo_scale / scale - 1.0).abs() < 1e-6);
        prop_assert!((cal.offset_nm - offset).abs() < 1e-6 * offset.abs().max(1.0));
    }

    #[test]
    fn calibration_is_affine_invariant(a in 0.2..5.0f64, b in -100.0..100.0f64, seed in 0u64..1000) {
        let lasers = [763.0, 775.0, 785.0];
        let pos = synthesize_resonance_positions(7, &lasers, 3, 1.25, 100.0, 0.002, seed).unwrap();
        let moved: Vec<Vec<f64>> = pos.iter().map(|p| p.iter().map(|x| a * x + b).collect()).collect();
        let c0 = calibrate_length(&pos, &lasers, (3, 50)).unwrap();
        let c1 = calibrate_length(&moved, &lasers, (3, 50)).unwrap();
        prop_assert_eq!(c0.m, c1.m);
        prop_assert!((c1.piezo_scale * a / c0.piezo_scale - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_round_trips(values in prop::collection::vec(-1e3..1e3f64, 16..64)) {
        let grid: Vec<f64> = (0..values.len()).map(|i| 500.0 + i as f64 * 0.5).collect();
        let s = Spectrum::new(grid.clone(), values.clone()).unwrap();
        let text = write_spectrum_csv(&s);
        prop_assert_eq!(write_spectrum_csv(&read_spectrum_csv(&text).unwrap()), text);
        let t = ScanTrace::new(grid, values).unwrap();
        let text = write_trace_csv(&t);
        prop_assert_eq!(write_trace_csv(&read_trace_csv(&text).unwrap()), text);
    }
}

#[test]
fn adding_a_bilayer_never_lowers_centre_reflectance() {
    // With the low-index layer on top, the first pair lowers the load
    // admittance from ns towards n0 and the bare-substrate reflectance dips
    // before growing; from one pair on R increases monotonically.
    for (low_on_top, first) in [(false, 0), (true, 1)] {
        let mut last = 0.0;
        for pairs in first..=20 {
            let s = quarter_wave_stack(materials::TA2O5, materials::SIO2, pairs, 780.0, low_on_top).unwrap();
            let r = stack_response(&s, 780.0, 0.0, Polarization::S).unwrap().reflectance;
            assert!(r >= last - 1e-15, "N = {pairs}: {r} < {last}");
            last = r;
        }
    }
}

#[test]
fn stopband_blue_shifts_with_angle() {
    let s = quarter_wave_stack(materials::TA2O5, materials::SIO2, 13, 780.0, true).unwrap();
    let mut last = f64::INFINITY;
    for k in 0..=12 {
        let angle = k as f64 * 0.1;
        let band = stopband_at(&s, Threshold::Absolute(0.99), StopbandSearch::new(450.0, 1000.0), angle, Polarization::S)
            .unwrap();
        assert!(band.center_nm() <= last + 1e-9, "angle {angle}: {} > {last}", band.center_nm());
        last = band.center_nm();
    }
}

#[test]
fn peak_order_does_not_depend_on_seed_order() {
    let x = linspace(0.0, 30.0, 601);
    let truth = [(1.0, 12.0, 0.8), (0.6, 17.0, 1.1), (0.3, 22.0, 0.6)];
    let y: Vec<f64> = x
        .iter()
        .map(|&v| 0.01 + truth.iter().map(|&(a, c, w)| lorentzian(v, a, c, w)).sum::<f64>())
        .collect();
    let trace = ScanTrace::new(x, y).unwrap();
    let seeds: Vec<PeakSeed> = truth
        .iter()
        .map(|&(a, c, w)| PeakSeed {
            center: c + 0.1,
            fwhm: w * 1.2,
            amplitude: a * 0.9,
        })
        .collect();
    let forward = fit_peaks_from_seeds(&trace, 0.0, &seeds).unwrap();
    let reversed: Vec<PeakSeed> = seeds.iter().rev().copied().collect();
    let backward = fit_peaks_from_seeds(&trace, 0.0, &reversed).unwrap();
    for fit in [&forward, &backward] {
        assert!(fit.centers.windows(2).all(|w| w[0] < w[1]));
        for (k, &(a, c, w)) in truth.iter().enumerate() {
            assert_relative_eq!(fit.centers[k], c, max_relative = 1e-6);
            assert_relative_eq!(fit.amplitudes[k], a, max_relative = 1e-6);
            assert_relative_eq!(fit.fwhms[k], w, max_relative = 1e-6);
        }
    }
}

#[test]
fn reported_residual_matches_recomputation() {
    let x = linspace(0.0, 20.0, 401);
    let y: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| lorentzian(v, 1.0, 9.0, 1.5) + 0.01 * ((i * 37 % 11) as f64 - 5.0) / 5.0)
        .collect();
    let trace = ScanTrace::new(x.clone(), y.clone()).unwrap();
    let fit = microcav_core::fit_peaks_lorentzian(&trace, 1).unwrap();
    let direct = (x.iter().zip(&y).map(|(&a, &b)| (b - fit.evaluate(a)).powi(2)).sum::<f64>() / x.len() as f64).sqrt();
    assert!((fit.residual_rms - direct).abs() < 1e-12);
    assert!((residual_rms(&fit, &trace) - direct).abs() < 1e-12);
}

#[test]
fn synthetic_data_is_bit_identical_per_seed() {
    let a = synthesize_mode_map(TransverseMode::new(0, 1), 2.5, 10.0, 0.25, 1.0, 0.05, 11).unwrap();
    let b = synthesize_mode_map(TransverseMode::new(0, 1), 2.5, 10.0, 0.25, 1.0, 0.05, 11).unwrap();
    assert_eq!(a, b);
    let c = synthesize_mode_map(TransverseMode::new(0, 1), 2.5, 10.0, 0.25, 1.0, 0.05, 12).unwrap();
    assert_ne!(a, c);
}
