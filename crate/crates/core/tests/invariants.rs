use antiwell_core::characteristic::{char_reduced, det_match};
use antiwell_core::oracle::{aligned_ladder, cross_validate, PARTNER_TOLERANCE};
use antiwell_core::spectrum::special_v0_catalog;
use antiwell_core::{
    solve_spectrum, Execution, PotentialGeometry, SpecialCondition, SpectrumRequest, StateKind,
};
use proptest::prelude::*;

fn spectrum(a: f64, b: f64, v0: f64, n: usize) -> antiwell_core::SpectrumResult {
    let g = PotentialGeometry::new(a, b, v0).unwrap();
    solve_spectrum(&SpectrumRequest::count(g, n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectrum_is_ordered_orthonormal_and_noded(
        a in 3.0..8.0f64,
        frac in 0.15..0.8f64,
        v0 in 0.01..30.0f64,
    ) {
        let s = spectrum(a, frac * a, v0, 6);
        let e = s.energies();
        prop_assert!(e[0] > -v0);
        prop_assert!(e.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(s.diagnostics.max_off_diagonal() < 1e-6);
        prop_assert!(s.diagnostics.max_norm_error() < 1e-8);
        for (i, &n) in s.diagnostics.node_counts.iter().enumerate() {
            prop_assert_eq!(n, i);
        }
        for &u in &s.diagnostics.uncertainty_products {
            prop_assert!(u >= 0.5);
        }
        for &r in &s.diagnostics.c1_residuals {
            prop_assert!(r <= 1e-10, "seam residual {r:e}");
        }
    }

    #[test]
    fn eigenvalues_are_zeros_of_both_conditions(v0 in 0.05..20.0f64) {
        let s = spectrum(6.0, 2.0, v0, 5);
        for st in s.states.iter().filter(|st| st.kind == StateKind::Generic) {
            let (m, det) = det_match(st.energy, &s.geometry).unwrap();
            prop_assert!(det.abs() <= 1e-8 * m.norm().powi(4), "det {det:e} at E={}", st.energy);
            let r = char_reduced(st.energy, &s.geometry).unwrap();
            let nearby = char_reduced(st.energy + 1e-3, &s.geometry).unwrap().abs();
            prop_assert!(r.abs() <= 1e-6 * nearby.max(1e-300), "reduced {r:e} vs {nearby:e}");
        }
    }
}

#[test]
fn oracle_tracks_random_strengths() {
    for v0 in [0.7, 3.3, 9.1, 17.0] {
        let s = spectrum(6.0, 2.0, v0, 6);
        let grids = aligned_ladder(&s.geometry, 4000, 3);
        let report = cross_validate(&s, &grids, PARTNER_TOLERANCE, Execution::default()).unwrap();
        assert!(report.is_consistent(), "v0={v0}");
        assert!(report.max_deviation() < 1e-5, "v0={v0}: {}", report.max_deviation());
    }
}

#[test]
fn sequential_and_parallel_agree_bitwise() {
    let g = PotentialGeometry::reference(12.7396).unwrap();
    let seq = solve_spectrum(&SpectrumRequest::count(g, 13).with_execution(Execution::Sequential)).unwrap();
    let par = solve_spectrum(&SpectrumRequest::count(g, 13).with_execution(Execution::Parallel)).unwrap();
    assert_eq!(seq.energies(), par.energies());
    assert_eq!(seq.diagnostics.overlap_matrix, par.diagnostics.overlap_matrix);
}

#[test]
fn seam_states_appear_at_refined_strengths() {
    let s = spectrum(6.0, 2.0, 0.333359787165, 3);
    assert_eq!(s.states[0].kind, StateKind::ZeroEnergy);
    assert_eq!(s.states[0].energy, 0.0);
    let g = PotentialGeometry::reference(1.0).unwrap();
    let v0 = special_v0_catalog(SpecialCondition::GTop, 1, &g).unwrap()[0].v0;
    assert!((v0 - 0.0655027).abs() < 1e-6);
    let s = spectrum(6.0, 2.0, v0, 3);
    let top = s.state_of_kind(StateKind::BarrierTop).expect("barrier-top state");
    assert_eq!(top.index, 0);
}
