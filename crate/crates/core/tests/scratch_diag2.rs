//! More temporary diagnostics.

use csflux_core::benchmarks::metrics::l2_relative_error_1d;
use csflux_core::benchmarks::refcache::ReferenceCache;
use csflux_core::benchmarks::{run_benchmark, sharp_reference, BenchmarkId, RunSpec};
use csflux_core::mesh::Mesh1d;
use csflux_core::{CaseKind, FluxEval, Mesh};
use std::path::PathBuf;

fn cache() -> ReferenceCache {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ref-cache");
    ReferenceCache::new(Some(dir))
}

#[test]
#[ignore]
fn reference_contact_temperature() {
    let cache = cache();
    let spec = RunSpec::new(BenchmarkId::B1, CaseKind::V1, FluxEval::Continuous, 6e-6, 16);
    let reference = sharp_reference(&spec, &cache).unwrap().unwrap();
    // Two half-space contact temperature with constant flux:
    // T = T0 + 2 q sqrt(t/pi) / (e_l + e_g), effusivity e = sqrt(k rho cp).
    let e_l = (28.63f64 * 4087.0 * 1130.0).sqrt();
    let e_g = (0.02863f64 * 4.087 * 11.3).sqrt();
    let t = 1e-5f64;
    let analytic = 500.0 + 2.0 * 1e10 * (t / std::f64::consts::PI).sqrt() / (e_l + e_g);
    println!(
        "reference T_gamma = {:.3} K, half-space analytic = {:.3} K, rel diff = {:.3e}",
        reference.interface_temperature,
        analytic,
        (reference.interface_temperature - analytic).abs() / (analytic - 500.0)
    );
    // Regional error decomposition of the V1 run at eps = 6um.
    let out = run_benchmark(&spec, &cache).unwrap();
    let solution = out.solution.unwrap();
    let Mesh::Interval(mesh) = solution.field.mesh().as_ref() else { panic!() };
    let vals = solution.field.values();
    let regions = [
        ("full", -100e-6, 100e-6),
        ("band", -6e-6, 6e-6),
        ("liquid bulk", -100e-6, -6e-6),
        ("gas bulk", 6e-6, 100e-6),
    ];
    for (name, lo, hi) in regions {
        // Build a sub-mesh restricted to [lo, hi] for the metric.
        let nodes: Vec<f64> = mesh
            .nodes()
            .iter()
            .cloned()
            .filter(|&x| x >= lo - 1e-12 && x <= hi + 1e-12)
            .collect();
        let sub = Mesh1d::from_nodes(nodes.clone()).unwrap();
        let subvals: Vec<f64> = nodes.iter().map(|&x| mesh.interpolate(vals, x)).collect();
        let err = l2_relative_error_1d(&sub, &subvals, |x| reference.eval(x));
        println!("{name}: rel L2 = {err:.5}");
    }
    // Profile samples.
    for x_um in [-20.0, -10.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 10.0, 20.0, 50.0] {
        let x = x_um * 1e-6;
        println!(
            "x={x_um:>6} um: T={:9.2}  T_ref={:9.2}",
            mesh.interpolate(vals, x),
            reference.eval(x)
        );
    }
}

#[test]
#[ignore]
fn steady_threshold_probe() {
    let cache = cache();
    for eps_um in [1.0f64, 2.0, 2.32, 3.0, 6.0] {
        let mut spec = RunSpec::new(
            BenchmarkId::B1,
            CaseKind::Classical,
            FluxEval::Continuous,
            eps_um * 1e-6,
            64,
        );
        spec.overrides.steady = true;
        let out = run_benchmark(&spec, &cache).unwrap();
        println!(
            "steady classical eps={eps_um} um: err={:.5}",
            out.row.l2_rel_err.unwrap()
        );
    }
}
