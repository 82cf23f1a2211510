use std::f64::consts::PI;

use dirac_inverse::direct::{free, DirectSolver, EigenOptions, IntegratorOptions};
use dirac_inverse::glm::Pairing;
use dirac_inverse::mat2::Vec2;
use dirac_inverse::verify::{
    boundary_relation_residuals, parseval_test_function, recover_boundary_constants,
    roundtrip_report, ExpansionBasis, ParsevalMode, RoundTripOptions, RoundTripReport,
};
use dirac_inverse::{BoundaryParams, BuiltinPotential, Error, Grid, Potential, WeightProfile};

fn c0() -> (WeightProfile, BoundaryParams) {
    (
        WeightProfile::new(PI / 2.0, 2.0).unwrap(),
        BoundaryParams::new(1.0, 1.0).unwrap(),
    )
}

fn zero(w: &WeightProfile) -> Potential {
    Potential::zero(Grid::uniform(w, 30).unwrap())
}

/// `Σ (f, φₙ)²/αₙ` for Ω = 0 under C0 with φ = (sin λμ, −cos λμ), by
/// composite Simpson in x on each side.
fn free_parseval_sum(lambdas: &[f64]) -> (f64, f64) {
    let simpson = |g: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
        let n = 4000;
        let h = (hi - lo) / n as f64;
        let mut s = g(lo) + g(hi);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * g(lo + k as f64 * h);
        }
        s * h / 3.0
    };
    let mu = |x: f64| if x <= PI / 2.0 { x } else { 2.0 * x - PI / 2.0 };
    let weighted =
        |g: &dyn Fn(f64) -> f64| simpson(g, 0.0, PI / 2.0) + 2.0 * simpson(g, PI / 2.0, PI);
    let f = |x: f64| ((2.0 * x).sin(), x.cos());
    let norm = weighted(&|x| f(x).0.powi(2) + f(x).1.powi(2));
    let l = 1.5 * PI;
    let sum = lambdas
        .iter()
        .map(|&lam| {
            let c = weighted(&|x| f(x).0 * (lam * mu(x)).sin() - f(x).1 * (lam * mu(x)).cos());
            c * c / (l + (lam * l).sin().powi(2))
        })
        .sum();
    (norm, sum)
}

#[test]
fn parseval_matches_closed_form_oracle() {
    let (w, bc) = c0();
    let spec = free::spectrum(&w, &bc, 16).unwrap();
    let lambdas: Vec<f64> = spec.lambdas().collect();
    let (norm, sum) = free_parseval_sum(&lambdas);
    let oracle = (norm - sum).abs() / norm;
    let basis =
        ExpansionBasis::new(&zero(&w), &w, &bc, &spec, &IntegratorOptions::default()).unwrap();
    let got = basis
        .parseval_residual(
            &basis.sample(parseval_test_function),
            ParsevalMode::Weighted,
        )
        .unwrap();
    assert!((got - oracle).abs() < 1e-7, "{got} vs {oracle}");
    assert!(got < 1e-3);
}

#[test]
fn synthesis_error_decreases_with_n() {
    let (w, bc) = c0();
    let pot = zero(&w);
    let full = free::spectrum(&w, &bc, 48).unwrap();
    let mut last = f64::INFINITY;
    for n in [8, 16, 32, 48] {
        let spec = full.truncate(n).unwrap();
        let basis =
            ExpansionBasis::new(&pot, &w, &bc, &spec, &IntegratorOptions::default()).unwrap();
        let f = basis.sample(parseval_test_function);
        let err = basis
            .relative_error(&f, &basis.synthesize(&basis.coefficients(&f)))
            .unwrap();
        assert!(err < last, "N = {n}: {err} after {last}");
        last = err;
    }
    assert!(last < 1e-2);
}

#[test]
fn extended_mode_accounts_for_boundary_component() {
    let (w, bc) = c0();
    let spec = free::spectrum(&w, &bc, 32).unwrap();
    let basis =
        ExpansionBasis::new(&zero(&w), &w, &bc, &spec, &IntegratorOptions::default()).unwrap();
    let f = basis.sample(|x| Vec2::new(x.sin(), 0.0));
    let ext = basis.parseval_residual(&f, ParsevalMode::Extended).unwrap();
    assert!(ext.is_finite() && ext < 0.05);
}

#[test]
fn zero_function_is_rejected() {
    let (w, bc) = c0();
    let spec = free::spectrum(&w, &bc, 4).unwrap();
    let basis =
        ExpansionBasis::new(&zero(&w), &w, &bc, &spec, &IntegratorOptions::default()).unwrap();
    let f = basis.sample(|_| Vec2::zeros());
    assert!(matches!(
        basis.parseval_residual(&f, ParsevalMode::Weighted),
        Err(Error::ZeroFunction)
    ));
    assert!(matches!(
        basis.relative_error(&f, &f),
        Err(Error::ZeroFunction)
    ));
}

#[test]
fn boundary_constants_recovered_for_other_constants() {
    let w = WeightProfile::new(1.0, 0.5).unwrap();
    let bc = BoundaryParams::new(-0.3, 2.0).unwrap();
    let pot = BuiltinPotential::Trig {
        amp_p: 0.3,
        amp_q: 0.2,
    }
    .sample(&Grid::uniform(&w, 200).unwrap())
    .unwrap();
    let spec = DirectSolver::new(&pot, &w, &bc, 12, &EigenOptions::default())
        .unwrap()
        .spectrum()
        .unwrap();
    let rec = recover_boundary_constants(&spec, &pot, &w, &IntegratorOptions::default()).unwrap();
    assert!(
        (rec.h1 + 0.3).abs() < 1e-7 && (rec.h2 - 2.0).abs() < 1e-7,
        "{rec:?}"
    );
    let res =
        boundary_relation_residuals(&spec, &pot, &w, &bc, &IntegratorOptions::default()).unwrap();
    assert!(res.iter().all(|r| *r < 1e-8));
}

#[test]
fn roundtrip_report_text_round_trip() {
    let (w, bc) = c0();
    let pot = BuiltinPotential::Bump {
        amp_p: 0.2,
        amp_q: -0.1,
        center: 1.2,
        width: 0.8,
    }
    .sample(&Grid::uniform(&w, 120).unwrap())
    .unwrap();
    let rt = roundtrip_report(&pot, &w, &bc, 16, 120, &RoundTripOptions::default()).unwrap();
    let r = &rt.report;
    assert!(matches!(r.pairing, Pairing::Matched { .. }));
    assert!(r.errors_p_l2_rel < 0.2 && r.errors_q_l2_rel < 0.2, "{r:?}");
    let back = RoundTripReport::parse(&r.to_text()).unwrap();
    assert_eq!(&back, r);
    assert!(matches!(
        RoundTripReport::parse("n_max = 4\n"),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        RoundTripReport::parse("garbage\n"),
        Err(Error::Parse { line: 1, .. })
    ));
}
