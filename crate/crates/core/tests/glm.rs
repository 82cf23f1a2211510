use std::f64::consts::PI;

use dirac_inverse::direct::{free, DirectSolver, EigenOptions};
use dirac_inverse::glm::{
    assemble_glm_system, reconstruct_omega, reconstruct_potential, solve_kernel, GlmOptions,
    InverseOptions, KernelBuilder, OmegaFormula, Pairing, PairingChoice,
};
use dirac_inverse::mat2::Mat2;
use dirac_inverse::{
    BoundaryParams, BuiltinPotential, Error, Grid, SpectralEntry, Spectrum, WeightProfile,
};

fn c0() -> (WeightProfile, BoundaryParams) {
    (
        WeightProfile::new(PI / 2.0, 2.0).unwrap(),
        BoundaryParams::new(1.0, 1.0).unwrap(),
    )
}

fn trig_spectrum(n_max: usize) -> Spectrum {
    let (w, bc) = c0();
    let pot = BuiltinPotential::Trig {
        amp_p: 0.3,
        amp_q: 0.2,
    }
    .sample(&Grid::uniform(&w, 200).unwrap())
    .unwrap();
    DirectSolver::new(&pot, &w, &bc, n_max, &EigenOptions::default())
        .unwrap()
        .spectrum()
        .unwrap()
}

/// `Σ c e(λs) e(λu)ᵀ` with `e(v) = (sin v, −cos v)`, summed term by term.
fn brute_f(terms: &[(f64, f64)], s: f64, u: f64) -> Mat2 {
    let mut m = Mat2::zeros();
    for &(lambda, c) in terms {
        let (a, b) = ((lambda * s).sin(), -(lambda * s).cos());
        let (x, y) = ((lambda * u).sin(), -(lambda * u).cos());
        m += c * Mat2::new(a * x, a * y, b * x, b * y);
    }
    m
}

fn mu(x: f64) -> f64 {
    if x <= PI / 2.0 {
        x
    } else {
        2.0 * x - PI / 2.0
    }
}

#[test]
fn reference_data_give_zero_kernel() {
    let (w, _) = c0();
    let spec = Spectrum::reference(10, &w).unwrap();
    let kb = KernelBuilder::new(&spec, &w).unwrap();
    assert!(kb.terms().is_empty());
    let opts = InverseOptions {
        pairing: PairingChoice::Fixed(Pairing::Reference),
        ..Default::default()
    };
    let rec = reconstruct_potential(&spec, &w, &Grid::uniform(&w, 30).unwrap(), &opts).unwrap();
    assert!(rec
        .potential
        .p()
        .iter()
        .chain(rec.potential.q())
        .all(|v| *v == 0.0));
    assert_eq!(rec.diagnostics.max_origin_residual(), 0.0);
}

#[test]
fn free_data_reconstruct_zero_potential() {
    let (w, bc) = c0();
    let spec = free::spectrum(&w, &bc, 32).unwrap();
    let rec = reconstruct_potential(
        &spec,
        &w,
        &Grid::uniform(&w, 100).unwrap(),
        &InverseOptions::default(),
    )
    .unwrap();
    let worst = rec
        .potential
        .p()
        .iter()
        .chain(rec.potential.q())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    assert!(worst < 1e-2, "max |p|, |q| = {worst}");
    let Pairing::Matched { h1, h2 } = rec.diagnostics.pairing else {
        panic!("expected matched pairing")
    };
    assert!((h1 - 1.0).abs() < 1e-2 && (h2 - 1.0).abs() < 1e-2);
}

#[test]
fn one_mode_hand_case() {
    let (w, _) = c0();
    let l = w.mu_pi();
    let data = [
        (-2.0 / 3.0 + 0.05, 4.9),
        (0.03, 4.6),
        (2.0 / 3.0 - 0.02, 4.8),
    ];
    let entries = data
        .iter()
        .zip(-1..=1)
        .map(|(&(lambda, alpha), n)| SpectralEntry { n, lambda, alpha })
        .collect();
    let spec = Spectrum::new(1, l, entries).unwrap();
    let kb = KernelBuilder::new(&spec, &w).unwrap();

    // Three data terms and three reference terms.
    let mut terms: Vec<(f64, f64)> = data
        .iter()
        .map(|&(lambda, alpha)| (lambda, 1.0 / alpha))
        .collect();
    terms.extend((-1..=1).map(|n| (n as f64 * PI / l, -1.0 / l)));
    assert_eq!(kb.terms().len(), 6);

    for (x, t) in [(0.0, 0.0), (0.4, 1.1), (2.0, 0.7), (PI, PI), (1.3, 3.0)] {
        let diff = kb.f(x, t).unwrap() - brute_f(&terms, mu(x), mu(t));
        assert!(diff.amax() < 1e-14);
    }

    let grid = Grid::uniform(&w, 12).unwrap();
    let nodes = grid.nodes().to_vec();
    let i = 9;
    let sys = assemble_glm_system(&kb, &grid, i).unwrap();
    assert_eq!(sys.matrix().nrows(), 2 * (i + 1));
    let sol = sys.solve(&GlmOptions::default()).unwrap();

    // Trapezoid weights with ρ, by hand.
    let mut c = vec![0.0; i + 1];
    for k in 0..i {
        let rho = if nodes[k] < PI / 2.0 { 1.0 } else { 2.0 };
        let h = 0.5 * rho * (nodes[k + 1] - nodes[k]);
        c[k] += h;
        c[k + 1] += h;
    }
    let x = nodes[i];
    for j in 0..=i {
        let mut r = sol.values[j] + brute_f(&terms, mu(x), mu(nodes[j]));
        for k in 0..=i {
            r += c[k] * sol.values[k] * brute_f(&terms, mu(nodes[k]), mu(nodes[j]));
        }
        assert!(r.amax() < 1e-12, "node {j}: {}", r.amax());
    }
    assert!(sol.condition >= 1.0 && sol.condition < 10.0);
}

#[test]
fn rotation_profile_matches_paired_sum() {
    let (w, _) = c0();
    let spec = trig_spectrum(12);
    for pairing in [Pairing::Reference, Pairing::auto(&spec)] {
        let kb = KernelBuilder::with_pairing(&spec, &w, pairing).unwrap();
        let profile = kb.a_profile(16);
        for k in 0..30 {
            let s = 2.0 * w.mu_pi() * k as f64 / 29.0;
            for t in [0.0, 0.9, PI / 2.0, 2.4, PI] {
                let diff = kb.f0(s, t).unwrap() - profile.f0(s, mu(t));
                assert!(diff.amax() < 1e-12);
            }
        }
    }
}

#[test]
fn small_data_reconstruct_linearly() {
    let (w, _) = c0();
    let spec = trig_spectrum(8);
    let kb = KernelBuilder::with_pairing(&spec, &w, Pairing::auto(&spec)).unwrap();
    let grid = Grid::uniform(&w, 40).unwrap();
    // K = −cF + O(c²).
    let defect = |c: f64| {
        let field = solve_kernel(&kb.scaled(c), &grid, &GlmOptions::default()).unwrap();
        let mut worst = 0.0_f64;
        for (i, &x) in grid.nodes().iter().enumerate() {
            for (j, &t) in grid.nodes()[..=i].iter().enumerate() {
                worst = worst.max((field.value(i, j) + c * kb.f(x, t).unwrap()).amax());
            }
        }
        worst
    };
    let (d3, d4) = (defect(1e-3), defect(1e-4));
    let ratio = d3 / d4;
    assert!((80.0..120.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn weighted_formula_is_balanced() {
    let (w, _) = c0();
    let spec = trig_spectrum(16);
    let kb = KernelBuilder::with_pairing(&spec, &w, Pairing::auto(&spec)).unwrap();
    let field = solve_kernel(&kb, &Grid::uniform(&w, 60).unwrap(), &GlmOptions::default()).unwrap();
    let weighted = reconstruct_omega(&field, &w, OmegaFormula::Weighted).unwrap();
    let unbalanced = reconstruct_omega(&field, &w, OmegaFormula::Unbalanced).unwrap();
    let max = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    assert!(max(&weighted.asymmetry_defect) < 1e-12);
    assert!(max(&unbalanced.asymmetry_defect) > 1e-3);
}

#[test]
fn reconstruction_stable_under_truncation() {
    let (w, _) = c0();
    let spec = trig_spectrum(32);
    let grid = Grid::uniform(&w, 100).unwrap();
    let exact = BuiltinPotential::Trig {
        amp_p: 0.3,
        amp_q: 0.2,
    }
    .sample(&grid)
    .unwrap();
    let run = |n: usize| {
        let s = spec.truncate(n).unwrap();
        reconstruct_potential(&s, &w, &grid, &InverseOptions::default())
            .unwrap()
            .potential
    };
    let (p24, p32) = (run(24), run(32));
    let (ep24, eq24) = p24.relative_l2_error(&exact);
    let (ep32, eq32) = p32.relative_l2_error(&exact);
    assert!(ep32 < ep24 && eq32 < eq24);
    assert!(ep24 < 0.1 && eq24 < 0.1);
    let (dp, dq) = p24.relative_l2_error(&p32);
    assert!(dp < 0.05 && dq < 0.05);
}

#[test]
fn inverse_errors() {
    let (w, _) = c0();
    let spec = trig_spectrum(4);
    let other = WeightProfile::new(1.0, 2.0).unwrap();
    assert!(matches!(
        KernelBuilder::new(&spec, &other),
        Err(Error::InvalidSpectrum { .. })
    ));

    let kb = KernelBuilder::new(&spec, &w).unwrap();
    let grid = Grid::uniform(&w, 20).unwrap();
    let strict = GlmOptions {
        max_condition: 1.0 - 1e-9,
        ..Default::default()
    };
    assert!(matches!(
        solve_kernel(&kb, &grid, &strict),
        Err(Error::SingularSystem { .. })
    ));
    assert!(matches!(kb.f0(-1.0, 0.0), Err(Error::Domain { .. })));
    assert!(assemble_glm_system(&kb, &grid, 21).is_err());

    let coarse = solve_kernel(&kb, &grid, &GlmOptions::default()).unwrap();
    assert!(coarse.max_difference_refined(&coarse).is_err());
}
