//! The numeric core instantiated at `f32`. Tolerances are wide; the point
//! is that the whole pipeline is scalar-generic, not that single precision
//! is a good idea for production runs.

use newsfuse::{
    eval_statistic, mvar, spectral_pseudo_inverse, AdditionalSource, BootstrapSettings, Dataset,
    Problem, StatisticDescriptor, SymMatrix,
};

fn toy_data() -> Dataset<f32> {
    let a: Vec<f32> = (0..40)
        .map(|i| 100.0 + 7.0 * (i as f32 * 0.7).sin() * 10.0)
        .collect();
    let b: Vec<f32> = a.iter().map(|v| 0.5 * v + 3.0).collect();
    Dataset::from_columns(vec![("A".into(), a), ("B".into(), b)]).unwrap()
}

#[test]
fn statistics_evaluate_in_single_precision() {
    let d = toy_data();
    let m: f32 = eval_statistic(&StatisticDescriptor::Mean { column: "A".into() }, &d).unwrap();
    assert!(m.is_finite());
    let q: f32 = eval_statistic(
        &StatisticDescriptor::NormalQuantile {
            column: "A".into(),
            level: 0.25f32,
        },
        &d,
    )
    .unwrap();
    assert!(q < m, "lower quantile {q} sits below the mean {m}");
}

#[test]
fn pseudo_inverse_works_in_single_precision() {
    let a: SymMatrix<f32> = SymMatrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
    let inv = spectral_pseudo_inverse(&a, 1.0f32).unwrap();
    // inv * a ≈ I at f32 accuracy
    for i in 0..2 {
        let col: Vec<f32> = (0..2).map(|j| a.get(i, j)).collect();
        let back = inv.mul_vec(&col).unwrap();
        for (j, v) in back.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-5, "entry ({i},{j}) = {v}");
        }
    }
}

#[test]
fn combination_runs_in_single_precision() {
    let d = toy_data();
    let eta: f32 = eval_statistic(&StatisticDescriptor::Mean { column: "B".into() }, &d).unwrap();
    let p: Problem<f32> = Problem {
        target: StatisticDescriptor::NormalQuantile {
            column: "A".into(),
            level: 0.25f32,
        },
        sources: vec![AdditionalSource {
            statistic: StatisticDescriptor::Mean { column: "B".into() },
            reported_value: eta + 0.5,
            reported_variance: 0.2f32,
            biased: false,
        }],
    };
    let res = mvar(
        &d,
        &p,
        &BootstrapSettings {
            nboots: 300,
            seed: 9,
        },
        1.0f32,
    )
    .unwrap();
    assert!(res.theta_est.is_finite());
    assert!(res.theta_est_var <= res.theta_hat_var + 1e-6);
}
