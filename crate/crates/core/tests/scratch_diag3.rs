//! Threshold probes (temporary).

use csflux_core::benchmarks::refcache::ReferenceCache;
use csflux_core::benchmarks::{run_benchmark, BenchmarkId, RunSpec};
use csflux_core::{CaseKind, FluxEval};
use std::path::PathBuf;

fn cache() -> ReferenceCache {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ref-cache");
    ReferenceCache::new(Some(dir))
}

#[test]
#[ignore]
fn classical_small_eps_transient() {
    let cache = cache();
    for eps_um in [1.0f64, 0.5, 0.37, 0.25, 0.17, 0.125] {
        let spec = RunSpec::new(
            BenchmarkId::B1,
            CaseKind::Classical,
            FluxEval::Continuous,
            eps_um * 1e-6,
            64,
        );
        let out = run_benchmark(&spec, &cache).unwrap();
        println!(
            "classical n_i=64 eps={eps_um:>6} um: err={:.5}",
            out.row.l2_rel_err.unwrap()
        );
    }
}

#[test]
#[ignore]
fn v1_small_eps_transient() {
    let cache = cache();
    for eps_um in [3.0f64, 1.5, 0.75, 0.4, 0.2] {
        let spec = RunSpec::new(
            BenchmarkId::B1,
            CaseKind::V1,
            FluxEval::Continuous,
            eps_um * 1e-6,
            128,
        );
        let out = run_benchmark(&spec, &cache).unwrap();
        println!(
            "V1 n_i=128 eps={eps_um:>5} um: err={:.6}",
            out.row.l2_rel_err.unwrap()
        );
    }
}
