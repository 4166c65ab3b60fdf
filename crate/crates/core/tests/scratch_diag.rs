//! Temporary diagnostics (not part of the suite): run with
//! `cargo test --test scratch_diag -- --ignored --nocapture`.

use csflux_core::benchmarks::refcache::ReferenceCache;
use csflux_core::benchmarks::{run_benchmark, BenchmarkId, ReferencePolicy, RunSpec};
use csflux_core::{CaseKind, FluxEval};
use std::path::PathBuf;

fn cache() -> ReferenceCache {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ref-cache");
    ReferenceCache::new(Some(dir))
}

#[test]
#[ignore]
fn ni_study_at_6um() {
    let cache = cache();
    for case in [CaseKind::V1, CaseKind::Classical] {
        for n_i in [8usize, 16, 32, 64, 128] {
            let spec = RunSpec::new(BenchmarkId::B1, case, FluxEval::Continuous, 6e-6, n_i);
            let out = run_benchmark(&spec, &cache).unwrap();
            println!(
                "case={case:?} n_i={n_i}: err={:.6} T_gamma={:.2} peak={:?}",
                out.row.l2_rel_err.unwrap(),
                out.row.interface_temperature.unwrap(),
                out.row.peak_in_band
            );
        }
    }
}

#[test]
#[ignore]
fn reference_policies_agree() {
    let cache = cache();
    let mut budgeted = RunSpec::new(BenchmarkId::B1, CaseKind::V1, FluxEval::Continuous, 6e-6, 16);
    budgeted.overrides.reference_policy = ReferencePolicy::Budgeted;
    let mut exact = budgeted.clone();
    exact.overrides.reference_policy = ReferencePolicy::PaperExact;
    let a = run_benchmark(&budgeted, &cache).unwrap();
    let b = run_benchmark(&exact, &cache).unwrap();
    println!(
        "budgeted err={:.6}  paper-exact err={:.6}",
        a.row.l2_rel_err.unwrap(),
        b.row.l2_rel_err.unwrap()
    );
}
