use bridgesift_core::experiments::schemes_agree;
use bridgesift_core::{run_sweep, JumpDist, JumpPart, LevyModel, Scheme, SweepConfig};

fn config(model: LevyModel, n_grid: Vec<usize>, replicates: usize) -> SweepConfig {
    SweepConfig { model, n_grid, replicates, schemes: vec![Scheme::Randomized, Scheme::Quantile], master_seed: 515 }
}

fn adjacent_increases(medians: &[f64]) -> usize {
    medians.windows(2).filter(|w| w[1] > w[0]).count()
}

#[test]
fn median_error_decreases_without_jumps() {
    let cp = JumpPart::CompoundPoisson { rate: 5.0, jump: JumpDist::TwoPoint { a: 0.5, p: 0.5 } };
    for model in [LevyModel::brownian(), LevyModel::new(2.0, 1.0, cp).unwrap()] {
        let result = run_sweep(&config(model, (8..=12).map(|k| 1 << k).collect(), 200)).unwrap();
        let quantile = result.fits.iter().find(|f| f.scheme == Scheme::Quantile).unwrap();
        let medians: Vec<f64> = quantile.per_n.iter().map(|r| r.median_error).collect();
        assert!(adjacent_increases(&medians) <= 1, "{medians:?}");
        assert!(schemes_agree(&result.records));
    }
}

#[test]
fn single_replicate_single_n_is_deterministic_without_slope() {
    let c = SweepConfig {
        model: LevyModel::brownian(),
        n_grid: vec![4],
        replicates: 1,
        schemes: vec![Scheme::Quantile],
        master_seed: 99,
    };
    let a = run_sweep(&c).unwrap();
    assert_eq!(a.records.len(), 1);
    assert!(a.records[0].sup_error > 0.0);
    assert_eq!(a.fits[0].slope, None);
    assert_eq!(run_sweep(&c).unwrap(), a);
}

#[test]
fn drift_and_scale_do_not_change_the_quantile_errors() {
    // the quantile scheme sees only ranks, which are unchanged by sigma and drift
    let plain = run_sweep(&config(LevyModel::brownian(), vec![32, 64], 20)).unwrap();
    let scaled = run_sweep(&config(LevyModel::new(3.0, -2.0, JumpPart::None).unwrap(), vec![32, 64], 20)).unwrap();
    let q = |r: &bridgesift_core::experiments::SweepResult| -> Vec<f64> {
        r.records.iter().filter(|x| x.scheme == Scheme::Quantile).map(|x| x.sup_error).collect()
    };
    assert_eq!(q(&plain), q(&scaled));
}

#[test]
fn invalid_plans_are_rejected() {
    let mut c = config(LevyModel::brownian(), vec![8, 8], 1);
    assert!(run_sweep(&c).is_err());
    c.n_grid = vec![8];
    c.replicates = 0;
    assert!(run_sweep(&c).is_err());
    c.replicates = 1;
    c.schemes.clear();
    assert!(run_sweep(&c).is_err());
}
