//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use dirac_inverse::direct::{self, DirectSolver, EigenOptions, IntegratorOptions, OdeMesh};
use dirac_inverse::glm::{
    reconstruct_omega, reconstruct_potential, solve_kernel, trajectory_residual, GlmOptions,
    InverseOptions, KernelBuilder, KernelField, OmegaFormula, Pairing,
};
use dirac_inverse::verify::{
    parseval_test_function, recover_boundary_constants, roundtrip_report, ExpansionBasis,
    ParsevalMode, RoundTrip, RoundTripOptions,
};
use dirac_inverse::{BoundaryParams, BuiltinPotential, Grid, Potential, Spectrum, WeightProfile};
use rand::{Rng, SeedableRng};

const TRIG: BuiltinPotential = BuiltinPotential::Trig {
    amp_p: 0.3,
    amp_q: 0.2,
};

struct Setup {
    w: WeightProfile,
    bc: BoundaryParams,
    grid: Grid,
}

impl Setup {
    fn c0() -> Self {
        let w = WeightProfile::new(PI / 2.0, 2.0).unwrap();
        let bc = BoundaryParams::new(1.0, 1.0).unwrap();
        let grid = Grid::uniform(&w, 200).unwrap();
        Self { w, bc, grid }
    }

    fn zero(&self) -> Potential {
        Potential::zero(self.grid.clone())
    }

    fn trig(&self) -> Potential {
        TRIG.sample(&self.grid).unwrap()
    }

    fn spectrum(&self, pot: &Potential, n: usize) -> Spectrum {
        DirectSolver::new(pot, &self.w, &self.bc, n, &EigenOptions::default())
            .unwrap()
            .spectrum()
            .unwrap()
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Closed-form characteristic function of the free problem under C0.
fn free_delta(lambda: f64) -> f64 {
    let u = 1.5 * PI * lambda;
    (lambda + 1.0) * u.sin() - u.cos()
}

fn c01_closed_form_delta(s: &Setup) -> Outcome {
    let start = Instant::now();
    let pot = s.zero();
    let worst = max_of((0..20).map(|k| {
        let lambda = -5.0 + 10.0 * (k as f64 + 0.5) / 20.0;
        let d = direct::char_function(&pot, &s.w, &s.bc, lambda, &IntegratorOptions::default())
            .unwrap();
        (d - free_delta(lambda)).abs() / free_delta(lambda).abs()
    }));
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-8 && secs < 1.0,
        format!("max relative error {worst:.2e} (tol 1e-8), {secs:.2} s (limit 1 s)"),
    )
}

fn c02_asymptotics(s: &Setup) -> Outcome {
    let start = Instant::now();
    let n_max = 32;
    let spec = s.spectrum(&s.trig(), n_max);
    let half = PI / (2.0 * s.w.mu_pi());
    let in_bracket = spec
        .entries()
        .iter()
        .all(|e| (e.lambda - spec.reference_eigenvalue(e.n)).abs() <= half);
    let covered = (-(n_max as i64)..=n_max as i64).all(|n| spec.entries().iter().any(|e| e.n == n));
    let duplicated: Vec<i64> = spec
        .entries()
        .windows(2)
        .filter(|p| p[0].n == p[1].n)
        .map(|p| p[0].n)
        .collect();
    let windows: Vec<f64> = (0..5)
        .map(|k| {
            let (lo, hi) = (8 + 5 * k, 12 + 5 * k);
            max_of(
                spec.residuals()
                    .filter(|r| (lo..=hi).contains(&r.0.abs()))
                    .map(|r| r.1.abs()),
            )
        })
        .collect();
    let non_increasing = windows.windows(2).all(|p| p[1] <= p[0]);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        in_bracket && covered && non_increasing && secs < 30.0,
        format!(
            "{} eigenvalues, all in brackets: {in_bracket}, all brackets hit: {covered}, repeated label {duplicated:?}, \
             windowed |eps| maxima {:?}, {secs:.1} s",
            spec.len(),
            windows.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>()
        ),
    )
}

fn c03_normalizing_numbers(s: &Setup) -> Outcome {
    let spec = s.spectrum(&s.zero(), 16);
    let mu = s.w.mu_pi();
    let worst = max_of(
        spec.entries()
            .iter()
            .filter(|e| e.n.abs() <= 16)
            .map(|e| (e.alpha - (mu + (e.lambda * mu).sin().powi(2))).abs()),
    );
    outcome(
        worst <= 1e-6,
        format!(
            "max absolute error {worst:.2e} over {} eigenvalues (tol 1e-6)",
            spec.len()
        ),
    )
}

fn c04_derivative_identity(s: &Setup) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, pot) in [("zero", s.zero()), ("trig", s.trig())] {
        let records = DirectSolver::new(&pot, &s.w, &s.bc, 16, &EigenOptions::default())
            .unwrap()
            .eigen_records()
            .unwrap();
        let worst = max_of(records.iter().map(|r| r.identity_residual));
        pass &= worst <= 1e-4;
        parts.push(format!("{name}: {worst:.2e}"));
    }
    outcome(
        pass,
        format!("max relative residual {} (tol 1e-4)", parts.join(", ")),
    )
}

fn c05_wronskian(s: &Setup) -> Outcome {
    let pot = s.trig();
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let worst = max_of((0..10).map(|_| {
        let lambda: f64 = rng.gen_range(-10.0..10.0);
        let mesh = OdeMesh::for_lambda(&pot, &s.w, &IntegratorOptions::default(), lambda).unwrap();
        let wr = mesh
            .phi(lambda)
            .unwrap()
            .wronskian(&mesh.psi(&s.bc, lambda).unwrap());
        max_of(wr.iter().map(|v| (v - wr[0]).abs())) / wr[0].abs()
    }));
    outcome(
        worst <= 1e-6,
        format!("max relative drift {worst:.2e} at 10 random lambda (tol 1e-6)"),
    )
}

fn c06_trivial(s: &Setup) -> Outcome {
    let spec = Spectrum::reference(16, &s.w).unwrap();
    let kb = KernelBuilder::new(&spec, &s.w).unwrap();
    let f0 = max_of((0..=20).flat_map(|i| {
        let kb = &kb;
        (0..=20).map(move |j| {
            kb.f0(2.0 * s.w.mu_pi() * i as f64 / 20.0, PI * j as f64 / 20.0)
                .unwrap()
                .amax()
        })
    }));
    let grid = Grid::uniform(&s.w, 40).unwrap();
    let rec = reconstruct_potential(
        &spec,
        &s.w,
        &grid,
        &InverseOptions {
            pairing: dirac_inverse::glm::PairingChoice::Fixed(Pairing::Reference),
            ..Default::default()
        },
    )
    .unwrap();
    let a = max_of(
        rec.field
            .rows()
            .iter()
            .flat_map(|r| r.values.iter().map(|m| m.amax())),
    );
    let pq = max_of(
        rec.potential
            .p()
            .iter()
            .chain(rec.potential.q())
            .map(|v| v.abs()),
    );
    outcome(
        f0 == 0.0 && a <= 1e-12 && pq <= 1e-12,
        format!("max |F0| {f0:.1e}, max |A| {a:.1e}, max |p|,|q| {pq:.1e} (tol 1e-12)"),
    )
}

fn c07_dual_path(s: &Setup, spec32: &Spectrum) -> Outcome {
    let mut worst = 0.0_f64;
    for pairing in [Pairing::Reference, Pairing::auto(spec32)] {
        let kb = KernelBuilder::with_pairing(spec32, &s.w, pairing).unwrap();
        let profile = kb.a_profile(64);
        for i in 0..50 {
            for j in 0..50 {
                let (x, t) = (PI * i as f64 / 49.0, PI * j as f64 / 49.0);
                let (sv, u) = (s.w.mu(x).unwrap(), s.w.mu(t).unwrap());
                worst = worst.max((kb.f0(sv, t).unwrap() - profile.f0(sv, u)).amax());
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("max difference {worst:.2e} on a 50x50 grid, both pairings (tol 1e-10)"),
    )
}

struct Study {
    fields: Vec<KernelField>,
    ratio: f64,
    diffs: (f64, f64),
}

fn self_convergence(s: &Setup, spec32: &Spectrum) -> Study {
    let kb = KernelBuilder::with_pairing(spec32, &s.w, Pairing::auto(spec32)).unwrap();
    let g = Grid::uniform(&s.w, 60).unwrap();
    let grids = [g.clone(), g.refine(), g.refine().refine()];
    let fields: Vec<KernelField> = grids
        .iter()
        .map(|g| solve_kernel(&kb, g, &GlmOptions::default()).unwrap())
        .collect();
    let d1 = fields[0].max_difference_refined(&fields[1]).unwrap();
    let d2 = fields[1].max_difference_refined(&fields[2]).unwrap();
    Study {
        fields,
        ratio: d1 / d2,
        diffs: (d1, d2),
    }
}

fn c08_self_convergence(study: &Study) -> Outcome {
    let (d1, d2) = study.diffs;
    outcome(
        study.ratio >= 3.0,
        format!(
            "|K_J - K_2J| {d1:.2e}, |K_2J - K_4J| {d2:.2e}, reduction {:.2} at J = 60 (need >= 3)",
            study.ratio
        ),
    )
}

fn c09_roundtrip(s: &Setup) -> (Outcome, RoundTrip) {
    let pot = s.trig();
    let run = |n: usize| {
        roundtrip_report(&pot, &s.w, &s.bc, n, 200, &RoundTripOptions::default()).unwrap()
    };
    let coarse = run(32);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let fine = pool.install(|| run(64));
    let secs = start.elapsed().as_secs_f64();
    let (c, f) = (&coarse.report, &fine.report);
    let pass = f.errors_p_l2_rel <= 0.1
        && f.errors_q_l2_rel <= 0.1
        && f.errors_p_l2_rel < c.errors_p_l2_rel
        && f.errors_q_l2_rel < c.errors_q_l2_rel
        && secs <= 300.0;
    let detail = format!(
        "p error {:.3e} -> {:.3e}, q error {:.3e} -> {:.3e} for N = 32 -> 64 (tol 0.1, strictly decreasing), \
         N = 64 run {secs:.1} s single-threaded (limit 300 s)",
        c.errors_p_l2_rel, f.errors_p_l2_rel, c.errors_q_l2_rel, f.errors_q_l2_rel
    );
    (outcome(pass, detail), fine)
}

fn c10_kernel_origin(rt: &RoundTrip) -> Outcome {
    let tol = GlmOptions::default().tol;
    let r = rt.report.max_origin_residual;
    outcome(
        r <= 10.0 * tol,
        format!(
            "max |A11(x,0)| + |A21(x,0)| = {r:.2e} (tol {:.0e})",
            10.0 * tol
        ),
    )
}

fn c11_parseval(s: &Setup) -> Outcome {
    let pot = s.zero();
    let spec64 = s.spectrum(&pot, 64);
    let residuals: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let spec = spec64.truncate(n).unwrap();
            let basis =
                ExpansionBasis::new(&pot, &s.w, &s.bc, &spec, &IntegratorOptions::default())
                    .unwrap();
            basis
                .parseval_residual(
                    &basis.sample(parseval_test_function),
                    ParsevalMode::Weighted,
                )
                .unwrap()
        })
        .collect();
    let pass = residuals[2] <= 1e-2 && residuals.windows(2).all(|p| p[1] <= p[0]);
    outcome(
        pass,
        format!(
            "residuals {:.2e}, {:.2e}, {:.2e} at N = 16, 32, 64 (tol 1e-2, non-increasing)",
            residuals[0], residuals[1], residuals[2]
        ),
    )
}

fn c12_boundary_constants(s: &Setup, rt: &RoundTrip) -> Outcome {
    let pot = s.zero();
    let spec = s.spectrum(&pot, 32);
    let free =
        recover_boundary_constants(&spec, &pot, &s.w, &IntegratorOptions::default()).unwrap();
    let free_err = (free.h1 - 1.0).abs().max((free.h2 - 1.0).abs());
    let r = &rt.report;
    let budget = r.errors_p_l2_rel.max(r.errors_q_l2_rel);
    let rt_err = (r.h1_hat - s.bc.h1).abs().max((r.h2_hat - s.bc.h2).abs());
    outcome(
        free_err <= 1e-3 && rt_err <= budget,
        format!(
            "free data: ({:.8}, {:.8}), error {free_err:.1e} (tol 1e-3); round trip: ({:.6}, {:.6}), error {rt_err:.1e} \
             (budget {budget:.1e})",
            free.h1, free.h2, r.h1_hat, r.h2_hat
        ),
    )
}

fn c13_trajectory_residual(s: &Setup, spec32: &Spectrum, study: &Study) -> Outcome {
    let lambda5 = spec32.entries().iter().find(|e| e.n == 5).unwrap().lambda;
    let residual = |f: &KernelField| {
        let omega = reconstruct_omega(f, &s.w, OmegaFormula::Weighted).unwrap();
        trajectory_residual(f, &omega.potential, &s.w, lambda5)
    };
    let coarse = residual(&study.fields[0]);
    let fine = residual(&study.fields[1]);
    let norm = max_of(coarse.iter().map(|r| r.1.norm()));
    let estimate = 4.0 / 3.0
        * max_of(coarse.iter().filter_map(|(x, r)| {
            fine.iter()
                .find(|(y, _)| y == x)
                .map(|(_, q)| (r - q).norm())
        }));
    outcome(
        norm <= 5.0 * estimate,
        format!("max residual {norm:.2e} at lambda_5 = {lambda5:.4}, J = 60 self-convergence estimate {estimate:.2e} (need residual <= 5x estimate)"),
    )
}

fn report(id: u32, name: &str, o: Outcome) -> bool {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("[{id:02}] {tag} {name}: {}", o.detail);
    o.pass
}

fn main() {
    let s = Setup::c0();
    let spec32 = s.spectrum(&s.trig(), 32);
    let mut passed = vec![
        report(
            1,
            "closed-form characteristic function",
            c01_closed_form_delta(&s),
        ),
        report(
            2,
            "eigenvalue brackets and residual envelope",
            c02_asymptotics(&s),
        ),
        report(
            3,
            "normalizing numbers, free problem",
            c03_normalizing_numbers(&s),
        ),
        report(
            4,
            "derivative identity at eigenvalues",
            c04_derivative_identity(&s),
        ),
        report(5, "Wronskian constancy", c05_wronskian(&s)),
        report(6, "unperturbed data gives zero kernel", c06_trivial(&s)),
        report(
            7,
            "paired sum vs rotation profile",
            c07_dual_path(&s, &spec32),
        ),
    ];
    let study = self_convergence(&s, &spec32);
    passed.push(report(
        8,
        "kernel self-convergence",
        c08_self_convergence(&study),
    ));
    let (c9, rt) = c09_roundtrip(&s);
    passed.push(report(9, "round-trip reconstruction", c9));
    passed.push(report(
        10,
        "kernel boundary condition",
        c10_kernel_origin(&rt),
    ));
    passed.push(report(11, "Parseval identity", c11_parseval(&s)));
    passed.push(report(
        12,
        "boundary-constant recovery",
        c12_boundary_constants(&s, &rt),
    ));
    passed.push(report(
        13,
        "reconstructed trajectory residual",
        c13_trajectory_residual(&s, &spec32, &study),
    ));

    let ok = passed.iter().filter(|p| **p).count();
    println!("{ok} of {} criteria passed", passed.len());
    if ok < passed.len() {
        std::process::exit(1);
    }
}
