//! Development-scale runs of every distributional check: the identity
//! suite, the weak-form battery, region identities, the two-sheet duality,
//! and the hierarchy identity.

use pairflow::quadrature::QuadratureSpec;
use pairflow::verify::battery::{
    bbgky_battery, chaos_battery, straddle_phi, straddle_psi, two_beam_datum, two_beam_profile,
    weak_battery,
};
use pairflow::verify::{
    bbgky_residual, chaos_duality_check, chaos_pointwise_witness, chaos_roles_symmetry_check,
    identity_suite, region_identity_check, suite::divergence_orientation_check,
    weak_liouville_residual, ConeSide, DerivativeSide, PullbackSide, SuiteConfig,
};

fn small_suite() -> SuiteConfig {
    SuiteConfig {
        n_transport: 200,
        n_scatter: 1_000,
        n_jacobian: 300,
        n_fold: 1_000,
        n_group: 200,
        n_measure: 200_000,
        n_divergence: 100_000,
        ..SuiteConfig::default()
    }
}

#[test]
fn identity_suite_passes_at_development_counts() {
    let reports = identity_suite(&small_suite());
    for r in &reports {
        println!(
            "{:<28} residual {:+.3e}  tol {:.3e}  pass {}",
            r.name, r.residual, r.tolerance, r.pass
        );
    }
    assert!(reports.iter().all(|r| r.pass), "some identity checks failed");
}

#[test]
fn flipped_orientation_fails_the_divergence_check() {
    let cfg = SuiteConfig { flip_orientation: true, n_divergence: 100_000, ..small_suite() };
    let r = divergence_orientation_check(&cfg);
    println!("flipped: residual {:+.3e} tol {:.3e}", r.residual, r.tolerance);
    assert!(!r.pass, "sign-flipped orientation must be detected");
}

#[test]
fn weak_battery_balances() {
    let eps = 1.0;
    let spec = QuadratureSpec::monte_carlo(150_000, 4242);
    for (name, f0, phi) in weak_battery(eps) {
        let r = weak_liouville_residual(name, &f0, &phi, eps, &spec, false);
        println!(
            "{:<32} interior {:+.4e}  flux {:+.4e}  residual {:+.3e}  tol {:.3e}",
            r.name, r.left.value, -r.right.value, r.residual, r.tolerance
        );
        assert!(r.pass, "{name} failed: residual {} tol {}", r.residual, r.tolerance);
    }
}

#[test]
fn straddle_window_sees_a_significant_flux() {
    // The contact term must be resolved, not vacuously small.
    let eps = 1.0;
    let spec = QuadratureSpec::monte_carlo(150_000, 777);
    let f0 = two_beam_datum(eps);
    let phi = straddle_phi(eps);
    let b = pairflow::verify::weak::weak_balance(&f0, &phi, eps, &spec, false);
    println!(
        "interior {:+.4e}+-{:.1e}  flux {:+.4e}+-{:.1e}",
        b.interior.value, b.interior.std_err, b.boundary.value, b.boundary.std_err
    );
    assert!(b.boundary.value.abs() > 5.0 * b.boundary.std_err);
    assert!(b.interior.value.abs() > 5.0 * b.interior.std_err);
}

#[test]
fn all_eight_region_identities_hold() {
    let eps = 1.0;
    let f0 = two_beam_datum(eps);
    let phi = straddle_phi(eps);
    for cone in [ConeSide::Pre, ConeSide::Post] {
        for pull in [PullbackSide::Free, PullbackSide::Scattered] {
            for side in [DerivativeSide::Time, DerivativeSide::Space] {
                let samples = if side == DerivativeSide::Time { 60_000 } else { 12_000 };
                let spec = QuadratureSpec::monte_carlo(samples, 9001);
                let name = format!("{cone:?}-{pull:?}-{side:?}");
                let r = region_identity_check(&name, &f0, &phi, cone, pull, side, eps, &spec);
                println!(
                    "{:<40} residual {:+.3e}  tol {:.3e}  ({})",
                    r.name, r.residual, r.tolerance, r.notes.detail
                );
                assert!(r.pass, "{name}: residual {} tol {}", r.residual, r.tolerance);
            }
        }
    }
}

#[test]
fn chaos_duality_battery_holds() {
    let eps = 1.0;
    let spec = QuadratureSpec::monte_carlo(150_000, 31007);
    for (name, phi0, phi) in chaos_battery(eps) {
        let r = chaos_duality_check(name, &phi0, &phi, eps, &spec);
        println!(
            "{:<32} sheets {:+.4e}  direct {:+.4e}  residual {:+.3e}  tol {:.3e}",
            r.name, r.left.value, r.right.value, r.residual, r.tolerance
        );
        assert!(r.pass, "{name}: residual {} tol {}", r.residual, r.tolerance);
    }
    let r = chaos_roles_symmetry_check("straddle", &two_beam_profile(eps), &straddle_phi(eps), eps, &spec);
    println!("{:<32} residual {:+.3e} tol {:.3e}", r.name, r.residual, r.tolerance);
    assert!(r.pass);
}

#[test]
fn product_structure_breaks_pointwise_after_the_epoch() {
    let w = chaos_pointwise_witness(&two_beam_profile(1.0), 1.0);
    println!(
        "pre deviation {:.3e}; post transported {:.4e} vs product {:.4e}",
        w.pre_deviation, w.post_transported, w.post_product
    );
    assert!(w.pre_deviation <= 1e-12);
    assert!(w.post_product.abs() <= 1e-12);
    assert!(w.post_transported > 0.01);
}

#[test]
fn bbgky_battery_holds() {
    let eps = 1.0;
    for (name, f0, psi) in bbgky_battery(eps) {
        let spec = QuadratureSpec::monte_carlo(200_000, 555);
        let r = bbgky_residual(name, &f0, &psi, eps, &spec).unwrap();
        println!(
            "{:<32} marginal {:+.4e}  contact {:+.4e}  residual {:+.3e}  tol {:.3e}",
            r.name, r.left.value, r.right.value, r.residual, r.tolerance
        );
        assert!(r.pass, "{name}: residual {} tol {}", r.residual, r.tolerance);
    }
}

#[test]
fn bbgky_straddle_is_significant() {
    let eps = 1.0;
    let spec = QuadratureSpec::monte_carlo(400_000, 556);
    let f0 = two_beam_datum(eps);
    let psi = straddle_psi(eps);
    let r = bbgky_residual("significance", &f0, &psi, eps, &spec).unwrap();
    println!(
        "marginal {:+.4e}+-{:.1e}  contact {:+.4e}+-{:.1e}",
        r.left.value, r.left.std_err, r.right.value, r.right.std_err
    );
    assert!(r.left.value.abs() > 5.0 * r.left.std_err, "marginal side unresolved");
    assert!(r.right.value.abs() > 5.0 * r.right.std_err, "contact side unresolved");
}
