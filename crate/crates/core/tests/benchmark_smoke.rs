//! End-to-end benchmark driver checks on desk-scale configurations.
//!
//! The heavier convergence and threshold studies live in the acceptance
//! suite of the CLI crate; these tests pin the plumbing: reference caching,
//! report rows, sweep determinism and the headline B1 behaviors.

use csflux_core::benchmarks::refcache::ReferenceCache;
use csflux_core::benchmarks::{
    run_benchmark, sharp_reference, sweep, BenchmarkId, Overrides, RunSpec, SweepSpec,
};
use csflux_core::{CaseKind, FluxEval};

use std::path::PathBuf;
use std::sync::OnceLock;

/// Shared on-disk cache so the budgeted references are built once per
/// workspace and reused across test binaries.
fn cache() -> &'static ReferenceCache {
    static CACHE: OnceLock<ReferenceCache> = OnceLock::new();
    CACHE.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ref-cache");
        ReferenceCache::new(Some(dir))
    })
}

fn spec(case: CaseKind, eps: f64, n_i: usize) -> RunSpec {
    RunSpec::new(BenchmarkId::B1, case, FluxEval::Continuous, eps, n_i)
}

#[test]
fn b1_v1_coarse_band_runs_and_beats_classical() {
    let v1 = run_benchmark(&spec(CaseKind::V1, 6e-6, 16), cache()).unwrap();
    assert!(v1.row.is_ok(), "status: {}", v1.row.status);
    let err_v1 = v1.row.l2_rel_err.expect("transient rows carry an error");
    assert!(err_v1 < 0.02, "V1 at eps=6um, n_i=16 error {err_v1}");
    assert_eq!(v1.row.steps, 10_000);
    let classical = run_benchmark(&spec(CaseKind::Classical, 6e-6, 16), cache()).unwrap();
    let err_classical = classical.row.l2_rel_err.unwrap();
    assert!(
        err_v1 < 0.1 * err_classical,
        "parameter scaling should beat the classical delta by an order: {err_v1} vs {err_classical}"
    );
}

#[test]
fn b1_classical_peak_overestimates_gas_side() {
    // The classical delta at a thick interface overshoots the sharp peak.
    let output = run_benchmark(&spec(CaseKind::Classical, 6e-6, 16), cache()).unwrap();
    let reference = sharp_reference(&spec(CaseKind::Classical, 6e-6, 16), cache())
        .unwrap()
        .expect("transient reference");
    let row = &output.row;
    assert!(row.is_ok());
    let t_peak_ref = reference
        .temperature
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let solution = output.solution.as_ref().unwrap();
    let t_peak = solution
        .field
        .values()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(
        t_peak > 1.05 * t_peak_ref,
        "classical CSF peak {t_peak} should overshoot the sharp peak {t_peak_ref}"
    );
    // And the error is far from the 1% tolerance at this thickness.
    assert!(row.l2_rel_err.unwrap() > 0.02);
}

#[test]
fn b1_single_step_equals_transient_with_one_step() {
    let mut one = spec(CaseKind::V1, 6e-6, 8);
    one.overrides.t_end = Some(1e-9);
    let output = run_benchmark(&one, cache()).unwrap();
    assert!(output.row.is_ok(), "{}", output.row.status);
    assert_eq!(output.row.steps, 1);
}

#[test]
fn sweep_is_deterministic_and_resumable() {
    let sweep_spec = SweepSpec {
        benchmark: BenchmarkId::B1,
        cases: vec![CaseKind::V1, CaseKind::Classical],
        methods: vec![FluxEval::Continuous],
        eps_list: vec![6e-6, 3e-6],
        n_i_list: vec![8],
        overrides: Overrides {
            t_end: Some(2e-8),
            ..Overrides::default()
        },
    };
    let rows_a = sweep(&sweep_spec, cache(), 1, None, None, None).unwrap();
    let rows_b = sweep(&sweep_spec, cache(), 2, None, None, None).unwrap();
    assert_eq!(rows_a.len(), 4);
    // Identical content independent of worker count (timing aside).
    for (a, b) in rows_a.iter().zip(rows_b.iter()) {
        let mut a = a.clone();
        let mut b = b.clone();
        a.wall_time_s = 0.0;
        b.wall_time_s = 0.0;
        assert_eq!(a, b);
    }
    // Resume from markers: a second sweep over the same marker dir reloads
    // rows instead of recomputing (identical rows including wall time).
    let marker_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("markers-smoke");
    let _ = std::fs::remove_dir_all(&marker_dir);
    let rows_c = sweep(&sweep_spec, cache(), 1, Some(&marker_dir), None, None).unwrap();
    let rows_d = sweep(&sweep_spec, cache(), 1, Some(&marker_dir), None, None).unwrap();
    assert_eq!(rows_c, rows_d);
}

#[test]
fn budget_zero_skips_rows() {
    let sweep_spec = SweepSpec {
        benchmark: BenchmarkId::B1,
        cases: vec![CaseKind::V1],
        methods: vec![FluxEval::Continuous],
        eps_list: vec![6e-6],
        n_i_list: vec![8],
        overrides: Overrides {
            t_end: Some(1e-9),
            ..Overrides::default()
        },
    };
    let rows = sweep(
        &sweep_spec,
        cache(),
        1,
        None,
        Some(std::time::Duration::ZERO),
        None,
    )
    .unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].status.starts_with("skipped"));
}
