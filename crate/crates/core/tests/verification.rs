use bridgesift_core::verify::{empirical_quantile_l2, eta_diagnostics, lemma1_check, LEMMA1_CONSTANT};
use bridgesift_core::{simulate, JumpDist, JumpPart, LevyModel, PlottingQuantiles, SeedSpec};

#[test]
fn lemma1_holds_on_the_whole_grid() {
    let mut previous = f64::INFINITY;
    for n in [1, 2, 5, 10, 100, 1_000, 10_000, 100_000] {
        let c = lemma1_check(n).unwrap();
        assert!(c.pass, "n={n}: {c:?}");
        assert_eq!(c.bound, LEMMA1_CONSTANT / n as f64);
        assert!(c.detail.endpoint_discrepancy() <= 1e-8, "n={n}: {:?}", c.detail);
        assert!(c.integral < previous);
        previous = c.integral;
    }
}

#[test]
fn empirical_l2_of_the_plotting_table_is_the_lemma1_integral() {
    for n in [1, 7, 100] {
        let table = PlottingQuantiles::new(n).unwrap();
        let e = empirical_quantile_l2(table.as_slice()).unwrap();
        assert!((e - lemma1_check(n).unwrap().integral).abs() <= 1e-12, "n={n}");
    }
    assert!((empirical_quantile_l2(&[0.0]).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn eta_tilde_sums_to_zero_for_every_model() {
    let models = [
        LevyModel::brownian(),
        LevyModel::new(
            0.5,
            3.0,
            JumpPart::CompoundPoisson { rate: 5.0, jump: JumpDist::Gaussian { mean: 1.0, sd: 2.0 } },
        )
        .unwrap(),
        LevyModel::new(1.0, 0.0, JumpPart::SymmetricStable { alpha: 0.8, scale: 2.0 }).unwrap(),
    ];
    for model in models {
        for n in [3, 17, 4_096] {
            for r in 0..5 {
                let d = eta_diagnostics(&simulate(&model, n, SeedSpec::new(8, r)).unwrap()).unwrap();
                assert!(d.sum_eta.abs() <= 1e-9, "{d:?}");
                assert!(d.sum_eta_sq >= 0.0);
            }
        }
    }
}

#[test]
fn eta_normalised_median_is_stable_in_n() {
    let mut medians = Vec::new();
    for k in (8..=16).step_by(2) {
        let n = 1usize << k;
        let mut v: Vec<f64> = (0..100)
            .map(|r| {
                eta_diagnostics(&simulate(&LevyModel::brownian(), n, SeedSpec::new(31, r)).unwrap()).unwrap().normalized
            })
            .collect();
        v.sort_by(f64::total_cmp);
        medians.push(v[50]);
    }
    let hi = medians.iter().copied().fold(0.0, f64::max);
    let lo = medians.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(hi / lo < 5.0, "{medians:?}");
}
