use selmer_core::analysis::{dirichlet_l1, EULER_GAMMA};
use selmer_core::mertens::{fit_decay, log_partial_euler, mertens2_sum, psi_sum};
use selmer_core::primes::primes_in_range;
use selmer_core::{Mertens, MertensConfig, ReportKind, ScanOptions, SelbergInstance};

fn small_config() -> MertensConfig {
    MertensConfig {
        p_max: 10_000_000,
        u_max: 10_000_000,
        x_max: 10_000_000,
        ..Default::default()
    }
}

#[test]
fn zeta_mertens3_at_million_matches_brute_product() {
    let z = SelbergInstance::zeta();
    let ctx = Mertens::new(&z, small_config());
    let r = ctx.mertens3_report(1e6).unwrap();
    let product: f64 = primes_in_range(2, 1_000_000)
        .unwrap()
        .primes
        .iter()
        .map(|&p| 1.0 / (1.0 - 1.0 / p as f64))
        .product();
    assert!((r.value / product - 1.0).abs() < 1e-10);
    assert!((r.value / r.main_term - 1.0).abs() <= 2e-3);
    assert!(r.imag_residue <= 1e-9);
}

#[test]
fn dirichlet_mertens3_converges_to_l1() {
    let l = SelbergInstance::dirichlet(-4).unwrap();
    let ctx = Mertens::new(&l, small_config());
    let r = ctx.mertens3_report(1e6).unwrap();
    assert!((r.value - std::f64::consts::FRAC_PI_4).abs() <= 1e-2);
    assert!((r.main_term - dirichlet_l1(-4).unwrap()).abs() < 1e-15);
}

#[test]
fn zeta_mertens2_residual_small() {
    let z = SelbergInstance::zeta();
    let ctx = Mertens::new(&z, small_config());
    let r = ctx.mertens2_report(1e6).unwrap();
    let oracle: f64 = primes_in_range(2, 1_000_000)
        .unwrap()
        .primes
        .iter()
        .map(|&p| 1.0 / p as f64)
        .sum();
    assert!((r.value - oracle).abs() < 1e-12);
    assert!(r.residual.abs() <= 1e-3);
}

#[test]
fn dedekind_mertens2_is_additive() {
    let o = ScanOptions::default();
    let z = mertens2_sum(&SelbergInstance::zeta(), 1e5, &o).unwrap().0;
    let l = mertens2_sum(&SelbergInstance::dirichlet(-4).unwrap(), 1e5, &o).unwrap().0;
    let k = mertens2_sum(&SelbergInstance::dedekind_quadratic(-4).unwrap(), 1e5, &o).unwrap().0;
    assert!((k - (z + l)).abs() <= 1e-12);
}

#[test]
fn dirichlet_pnt_ratio_small() {
    let l = SelbergInstance::dirichlet(-4).unwrap();
    let ctx = Mertens::new(&l, small_config());
    let r = ctx.report(ReportKind::Pnt, 1e6).unwrap();
    assert_eq!(r.main_term, 0.0);
    assert!((r.value / 1e6).abs() <= 1e-2);
    assert_eq!(r.rel_residual, r.residual / 1e6);
}

#[test]
fn dirichlet_m1_estimators_agree() {
    let l = SelbergInstance::dirichlet(-4).unwrap();
    let ctx = Mertens::new(&l, small_config());
    let m1 = ctx.m1_constant().unwrap();
    assert!(m1.gap <= 1e-2, "gap {}", m1.gap);
    assert!(m1.warning.is_none());
}

#[test]
fn zeta_pnt_residuals_decay() {
    let z = SelbergInstance::zeta();
    let o = ScanOptions::default();
    let points: Vec<(f64, f64)> = [1e4, 1e5, 1e6, 1e7, 1e8]
        .iter()
        .map(|&x| (x, psi_sum(&z, x, &o).unwrap().total() / x - 1.0))
        .collect();
    let fit = fit_decay(&points).unwrap();
    assert!(fit.c_estimate > 0.0, "{fit:?}");
}

#[test]
fn mertens3_main_term_uses_stored_gamma() {
    let k = SelbergInstance::dedekind_quadratic(5).unwrap();
    let ctx = Mertens::new(&k, small_config());
    let r = ctx.mertens3_report(1e4).unwrap();
    let c = dirichlet_l1(5).unwrap();
    assert!((r.main_term - c * EULER_GAMMA.exp() * 1e4f64.ln()).abs() < 1e-12);
    let lg = log_partial_euler(&k, 1e4, &ScanOptions::default()).unwrap();
    assert!((r.value - lg.value.exp()).abs() <= 1e-12 * r.value);
}

#[test]
fn rankin_constants_clamp_to_coverage() {
    let r = SelbergInstance::rankin_delta(100_000).unwrap();
    let ctx = Mertens::new(&r, MertensConfig::default());
    let m = ctx.m_constant().unwrap();
    assert_eq!(m.p_max, 100_000);
    let lead = ctx.leading().unwrap();
    assert!(lead.value > 0.0);
    assert!(ctx.mertens2_report(1e6).is_err());
}
