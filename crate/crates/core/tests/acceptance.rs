//! Acceptance suite: prints one PASS/FAIL line per criterion and exits with
//! a failure status if any criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hytet::dilog::lobachevsky;
use hytet::gram::{angles_to_lengths, lengths_to_angles};
use hytet::oracle::{oracle_volume_from_lengths, regular_fixtures, QuadratureSpec};
use hytet::volume::{
    closed_form_roots, congruence_defect, evaluate, params_from_angles, params_from_lengths,
    quad_coeffs, schlafli_defect, u_eval, z_roots, zdudz,
};
use hytet::{volume_from_angles, volume_from_lengths, Angles6, Complex, Lengths6};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn relative_gap(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn euclidean_vanishing() -> Outcome {
    let a = Angles6::regular((1.0f64 / 3.0).acos()).unwrap();
    let volume = volume_from_angles(&a).map(|r| r.volume);
    let mut fastest = Duration::MAX;
    for _ in 0..50 {
        let start = Instant::now();
        let _ = std::hint::black_box(volume_from_angles(std::hint::black_box(&a)));
        fastest = fastest.min(start.elapsed());
    }
    match volume {
        Ok(v) => outcome(
            v.abs() < 1e-8 && fastest < Duration::from_millis(1),
            format!(
                "|volume| = {:.2e}, {:.3} ms per call",
                v.abs(),
                fastest.as_secs_f64() * 1e3
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn shrinking_regular() -> Outcome {
    let rhos = [1e-1, 1e-2, 1e-3];
    let mut v = Vec::new();
    for rho in rhos {
        match volume_from_lengths(&Lengths6::regular(rho).unwrap()) {
            Ok(r) => v.push(r.volume),
            Err(e) => return outcome(false, format!("rho = {rho}: {e}")),
        }
    }
    let ratios = [v[0] / v[1], v[1] / v[2]];
    let pass = v[0] > v[1]
        && v[1] > v[2]
        && ratios.iter().all(|r| (r / 1e3 - 1.0).abs() <= 0.2)
        && v[2] < 1e-6;
    outcome(
        pass,
        format!(
            "volumes {:.4e}, {:.4e}, {:.4e}; ratios {:.2}, {:.2}",
            v[0], v[1], v[2], ratios[0], ratios[1]
        ),
    )
}

fn oracle_equivalence(set: &[Lengths6]) -> Outcome {
    let spec = QuadratureSpec::with_rel_tol(1e-8);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for l in set {
        let formula = match volume_from_lengths(l) {
            Ok(r) => r.volume,
            Err(e) => return outcome(false, format!("{:?}: {e}", l.values())),
        };
        let oracle = match oracle_volume_from_lengths(l, &spec) {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("{:?}: oracle {e}", l.values())),
        };
        worst = worst.max((formula - oracle).abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-6 && elapsed < Duration::from_secs(60),
        format!(
            "max gap {worst:.2e} over {} tetrahedra, {:.1} s",
            set.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn cross_formula(set: &[Lengths6]) -> Outcome {
    let mut worst = 0.0f64;
    for l in set {
        let gap = volume_from_lengths(l).and_then(|a| {
            let angles = lengths_to_angles(l)?;
            Ok((a.volume - volume_from_angles(&angles)?.volume).abs())
        });
        match gap {
            Ok(g) => worst = worst.max(g),
            Err(e) => return outcome(false, format!("{:?}: {e}", l.values())),
        }
    }
    outcome(worst < 1e-8, format!("max gap {worst:.2e}"))
}

fn schlafli_suite() -> Outcome {
    let h = 1e-5;
    let set = common::random_hyperbolic_angles(common::SEED + 5, 100, 0.3, 1.6, h);
    let mut worst = 0.0f64;
    for a in &set {
        match schlafli_defect(a, h) {
            Ok(d) => worst = worst.max(d),
            Err(e) => return outcome(false, format!("{:?}: {e}", a.values())),
        }
    }
    outcome(
        worst < 1e-6,
        format!("max defect {worst:.2e} over {} angle tuples", set.len()),
    )
}

fn residue_integrality(set: &[Lengths6]) -> Outcome {
    let mut worst_real = 0.0f64;
    let mut worst_snap = 0.0f64;
    let mut changed = 0;
    let mut perturbed = 0;
    for l in set {
        let e = match evaluate(&params_from_lengths(l)) {
            Ok(e) => e,
            Err(err) => return outcome(false, format!("{:?}: {err}", l.values())),
        };
        let r = e.residues();
        worst_real = worst_real.max(r.real);
        worst_snap = worst_snap.max(r.snap);
        for i in 0..6 {
            for d in [-1e-3, 1e-3] {
                let mut v = l.values();
                v[i] += d;
                let Ok(p) = Lengths6::new(v) else { continue };
                if hytet::gram::check_lengths(&p).is_err() {
                    continue;
                }
                perturbed += 1;
                match evaluate(&params_from_lengths(&p)) {
                    Ok(ep) if ep.residues().k == r.k => {}
                    _ => changed += 1,
                }
            }
        }
    }
    outcome(
        worst_real < 1e-8 && worst_snap < 1e-6 && changed == 0,
        format!(
            "max |Re| {worst_real:.2e}, max snap {worst_snap:.2e}, {changed} of {perturbed} perturbations changed k"
        ),
    )
}

fn congruence(set: &[Lengths6]) -> Outcome {
    let mut worst = 0.0f64;
    for l in set {
        let defect = volume_from_lengths(l).and_then(|r| {
            let angles = lengths_to_angles(l)?;
            Ok(congruence_defect(
                &r.partials.expect("length input has partials"),
                &angles,
            ))
        });
        match defect {
            Ok(d) => worst = worst.max(d),
            Err(e) => return outcome(false, format!("{:?}: {e}", l.values())),
        }
    }
    outcome(worst < 1e-7, format!("max defect {worst:.2e}"))
}

fn ideal_limit() -> Outcome {
    let target = 3.0 * lobachevsky(PI / 3.0);
    match volume_from_angles(&Angles6::regular(PI / 3.0 + 1e-4).unwrap()) {
        Ok(r) => {
            let gap = (r.volume - target).abs();
            outcome(
                gap < 1e-3,
                format!(
                    "volume {:.10}, 3Λ(π/3) = {target:.10}, gap {gap:.2e}",
                    r.volume
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn spherical_special_case() -> Outcome {
    match volume_from_angles(&Angles6::regular(FRAC_PI_2).unwrap()) {
        Ok(r) => {
            let gap = (r.volume - PI * PI / 8.0).abs();
            outcome(
                gap < 1e-8,
                format!("volume {:.12}, gap {gap:.2e}", r.volume),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn max_abs_diff(a: [f64; 6], b: [f64; 6]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn roundtrips() -> Outcome {
    let mut worst_l = 0.0f64;
    for l in common::random_lengths(common::SEED + 10, 1000, 0.3, 2.5) {
        match lengths_to_angles(&l).and_then(|a| angles_to_lengths(&a)) {
            Ok(back) => worst_l = worst_l.max(max_abs_diff(l.values(), back.values())),
            Err(e) => return outcome(false, format!("{:?}: {e}", l.values())),
        }
    }
    let mut worst_a = 0.0f64;
    for a in common::random_hyperbolic_angles(common::SEED + 11, 1000, 0.3, 1.6, 0.0) {
        match angles_to_lengths(&a).and_then(|l| lengths_to_angles(&l)) {
            Ok(back) => worst_a = worst_a.max(max_abs_diff(a.values(), back.values())),
            Err(e) => return outcome(false, format!("{:?}: {e}", a.values())),
        }
    }
    outcome(
        worst_l < 1e-9 && worst_a < 1e-9,
        format!("lengths→angles→lengths {worst_l:.2e}, angles→lengths→angles {worst_a:.2e}"),
    )
}

fn simplified_roots(set: &[Lengths6]) -> Outcome {
    let mut worst_l = 0.0f64;
    let mut worst_a = 0.0f64;
    for l in set {
        let angles = lengths_to_angles(l).unwrap();
        for (p, worst) in [
            (params_from_lengths(l), &mut worst_l),
            (params_from_angles(&angles), &mut worst_a),
        ] {
            let (cm, cp) = closed_form_roots(&p).unwrap();
            match z_roots(&quad_coeffs(&p), &p) {
                Ok(zp) => {
                    *worst = worst
                        .max(relative_gap(zp.quadratic_minus, cm))
                        .max(relative_gap(zp.quadratic_plus, cp));
                }
                Err(e) => return outcome(false, format!("{:?}: {e}", l.values())),
            }
        }
    }
    outcome(
        worst_l < 1e-10 && worst_a < 1e-10,
        format!("max relative gap: sinh form {worst_l:.2e}, sin form {worst_a:.2e}"),
    )
}

fn regular_fixtures_match() -> Outcome {
    let mut worst_z = 0.0f64;
    let mut worst_u = 0.0f64;
    let mut worst_arg = 0.0f64;
    let mut worst_du = 0.0f64;
    for rho in [0.25, 0.5, 1.0, 2.0] {
        let f = regular_fixtures(rho);
        let p = params_from_lengths(&Lengths6::regular(rho).unwrap());
        let zp = match z_roots(&quad_coeffs(&p), &p) {
            Ok(zp) => zp,
            Err(e) => return outcome(false, e.to_string()),
        };
        worst_z = worst_z
            .max(relative_gap(zp.z_minus, f.z_minus))
            .max(relative_gap(zp.z_plus, f.z_plus))
            .max(relative_gap(zp.quadratic_minus, f.z_minus));
        for z in zp.roots() {
            let u = u_eval(&p, z).unwrap();
            worst_u = worst_u.max((u - f.collapsed_u(z)).norm());
            let du = zdudz(&p, z).unwrap();
            worst_du = worst_du.max((du - Complex::new(0.0, -f.arg_combination(z))).norm());
        }
        // The arctangent forms fix the arguments at the conjugate root, and
        // only modulo π.
        for (m, expected) in f.arg_multipliers.iter().zip(f.arg_arctans) {
            let x = ((1.0 - m * zp.z_plus).arg() - expected) / PI;
            worst_arg = worst_arg.max((x - x.round()).abs() * PI);
        }
    }
    outcome(
        worst_z < 1e-12 && worst_u < 1e-12 && worst_arg < 1e-12 && worst_du < 1e-12,
        format!(
            "z± {worst_z:.2e}, U collapse {worst_u:.2e}, arg forms {worst_arg:.2e}, z∂U/∂z {worst_du:.2e}"
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let set = common::acceptance_lengths();
    let criteria: Vec<Criterion> = vec![
        (
            "Euclidean regular tetrahedron has zero volume",
            Box::new(euclidean_vanishing),
        ),
        (
            "shrinking regular tetrahedron, O(ρ³) decay",
            Box::new(shrinking_regular),
        ),
        (
            "length formula agrees with the quadrature oracle",
            Box::new(|| oracle_equivalence(&set)),
        ),
        (
            "length and angle formulas agree",
            Box::new(|| cross_formula(&set)),
        ),
        ("Schläfli identity", Box::new(schlafli_suite)),
        (
            "branch residues are integral and locally constant",
            Box::new(|| residue_integrality(&set)),
        ),
        ("2 ∂V/∂l ≡ A (mod π)", Box::new(|| congruence(&set))),
        ("near-ideal regular tetrahedron", Box::new(ideal_limit)),
        (
            "right-angled spherical tetrahedron",
            Box::new(spherical_special_case),
        ),
        ("angle/length conversions roundtrip", Box::new(roundtrips)),
        (
            "quadratic roots match the closed forms",
            Box::new(|| simplified_roots(&set)),
        ),
        (
            "regular-tetrahedron fixtures",
            Box::new(regular_fixtures_match),
        ),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}  {name}: {}", k + 1, o.detail);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
