use msn_core::constraints::ScalarField;
use msn_core::Precision;
use msn_harness::{run_cell, run_cell_with, run_table, table, table_function, ExperimentConfig, Size, Solver};

#[test]
fn line_table_converges_at_s8() {
    let t = table("line").unwrap();
    let errors: Vec<f64> = [41, 81, 161]
        .iter()
        .map(|&n| run_cell(&ExperimentConfig::new(t, Size::N(n), 8.0)).unwrap().error)
        .collect();
    assert!(
        errors[1] * 10.0 <= errors[0] && errors[2] * 10.0 <= errors[1],
        "{errors:?}"
    );
}

#[test]
fn line_cells_near_reference() {
    let t = table("2").unwrap();
    for (n, s) in [(41, 8.0), (161, 10.0)] {
        let r = run_cell(&ExperimentConfig::new(t, Size::N(n), s)).unwrap();
        let reference = t.reference_value(Size::N(n), s).unwrap();
        assert!(r.error <= 100.0 * reference, "n={n} s={s}: {} vs {reference}", r.error);
        assert!(r.residual_ok());
    }
}

#[test]
fn single_precision_runs_in_single() {
    let t = table("line-single").unwrap();
    let r = run_cell(&ExperimentConfig::new(t, Size::N(21), 3.0)).unwrap();
    assert_eq!(r.precision, Precision::Single);
    assert!(r.constraint_residual > 1e-12 && r.residual_ok());
}

#[test]
fn shared_factorization_matches_separate_runs() {
    let f25 = table("tensor").unwrap();
    let f9 = table("tensor-f9").unwrap();
    let cfg = ExperimentConfig::new(f25, Size::N(11), 4.0);
    let f25_field = table_function(f25);
    let f9_field = table_function(f9);
    let fields: [&dyn ScalarField; 2] = [&f25_field, &f9_field];
    let shared = run_cell_with(&cfg, &fields).unwrap();
    let alone = run_cell(&ExperimentConfig::new(f9, Size::N(11), 4.0)).unwrap();
    assert_eq!(shared[0].error, run_cell(&cfg).unwrap().error);
    assert!(
        (shared[1].error - alone.error).abs() <= 1e-12 * alone.error.max(1.0),
        "{} vs {}",
        shared[1].error,
        alone.error
    );
}

#[test]
fn kernel_and_msn_agree_on_a_cell() {
    let t = table("2").unwrap();
    let msn = run_cell(&ExperimentConfig::new(t, Size::N(21), 3.0)).unwrap();
    let mut cfg = ExperimentConfig::new(t, Size::N(21), 3.0);
    cfg.solver = Solver::Kernel;
    let kernel = run_cell(&cfg).unwrap();
    assert!(
        (kernel.error - msn.error).abs() <= 1e-6 * msn.error.max(1e-3),
        "{} vs {}",
        kernel.error,
        msn.error
    );
}

#[test]
fn table_run_reports_every_cell() {
    let run = run_table(table("1").unwrap(), Precision::Single, Solver::Msn, false, 0, |_| {});
    assert_eq!(run.cells.len(), 24);
    assert!(run.all_passed());
    let sphere = table("sphere").unwrap();
    assert_eq!(sphere.size_for_str("11").unwrap(), Size::D(11));
}

#[test]
fn sphere_cell_is_seed_deterministic() {
    let t = table("sphere").unwrap();
    let a = run_cell(&ExperimentConfig::new(t, Size::D(7), 4.0)).unwrap();
    let b = run_cell(&ExperimentConfig::new(t, Size::D(7), 4.0)).unwrap();
    assert_eq!(a.error.to_bits(), b.error.to_bits());
    let mut cfg = ExperimentConfig::new(t, Size::D(7), 4.0);
    cfg.seed = 1;
    let c = run_cell(&cfg).unwrap();
    assert_ne!(a.error.to_bits(), c.error.to_bits());
}
