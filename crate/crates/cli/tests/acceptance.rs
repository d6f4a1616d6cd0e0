//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process exits non-zero if any criterion fails, except those listed in
//! `KNOWN_FAILURES`, which are still evaluated and reported as FAIL.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::{Command, ExitCode};
use std::time::Instant;

use faer::Mat;
use giantatom_core::boundstates::{
    bound_energies, classify_extremal, critical_coupling_real_space, edge_level_spacing, extremal_state,
    photon_distribution, real_space_spectrum, Eigenstate, Label, Side, Thresholds, DEFAULT_CRITICAL_SITES,
};
use giantatom_core::numerics::{integrate, symmetric_eigen, QuadratureSpec};
use giantatom_core::scattering::{
    complete_reflection_detunings, reflection_multi_point, reflection_two_point, scattering_oracle,
    two_point_reflection_rate,
};
use giantatom_core::{CouplingCase, Lattice, ModelParams};

/// Criteria evaluated faithfully but not expected to pass, with the reason.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    9,
    "odd-N upper-edge criterion gives J_c = sqrt(N + 1), so J_c/N keeps drifting on the odd branch",
)];

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

const OMEGA: f64 = 20.0;

fn params(case: CouplingCase, n: usize, j: f64) -> ModelParams {
    ModelParams::new(case, n, j, OMEGA, OMEGA).unwrap()
}

/// Midpoint grid `pi (i - 1/2) / n`; it avoids the exactly resonant wave
/// vectors (`pi/3`, `pi/2`, ...) where a dressed mode can sit on the band.
fn k_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| PI * (i as f64 - 0.5) / n as f64).collect()
}

fn criterion_1() -> Outcome {
    let cases = [(0, 1.0), (4, 1.0), (8, 1.0), (2, 0.0), (6, 0.0), (1, 0.5), (3, 0.5), (5, 0.5)];
    let mut worst = 0.0f64;
    for (n, want) in cases {
        let r = reflection_two_point(FRAC_PI_2, &params(CouplingCase::TwoPoint, n, 0.5)).unwrap();
        worst = worst.max((r.big_r - want).abs());
    }
    Outcome {
        id: 1,
        name: "parity identities at k = pi/2",
        pass: worst <= 1e-12,
        detail: format!("max |R - expected| = {worst:.2e} (tol 1e-12)"),
    }
}

fn criterion_2() -> Outcome {
    let p = params(CouplingCase::TwoPoint, 1, 0.5);
    let pts = complete_reflection_detunings(&p, 2001).unwrap();
    let (pass, detail) = match pts.as_slice() {
        [pt] => {
            let r = two_point_reflection_rate(pt.k, &p);
            (
                (pt.detuning - 0.25).abs() <= 1e-10 && (r - 1.0).abs() <= 1e-10,
                format!("detuning = {:.15}, R = {:.15} (tol 1e-10)", pt.detuning, r),
            )
        }
        other => (false, format!("expected one complete-reflection point, found {}", other.len())),
    };
    Outcome {
        id: 2,
        name: "complete reflection for N = 1",
        pass,
        detail,
    }
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for case in [CouplingCase::TwoPoint, CouplingCase::MultiPoint] {
        for n in [0, 1, 2, 3, 4, 5, 10] {
            let p = params(case, n, 0.5);
            for k in k_grid(200) {
                let res = match case {
                    CouplingCase::TwoPoint => reflection_two_point(k, &p),
                    CouplingCase::MultiPoint => reflection_multi_point(k, &p),
                };
                match res {
                    Ok(r) => worst = worst.max((r.r.norm_sqr() + r.t.norm_sqr() - 1.0).abs()),
                    Err(e) => failures.push(format!("{case:?} N={n} k={k}: {e}")),
                }
            }
        }
    }
    Outcome {
        id: 3,
        name: "unitarity |r|^2 + |t|^2 = 1",
        pass: worst <= 1e-10 && failures.is_empty(),
        detail: format!("max deviation {worst:.2e} (tol 1e-10), {} solver errors", failures.len()),
    }
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut errors = 0;
    for case in [CouplingCase::TwoPoint, CouplingCase::MultiPoint] {
        for n in 0..=10 {
            let p = params(case, n, 0.5);
            for pad in [50, 200] {
                for k in k_grid(200) {
                    let closed = match case {
                        CouplingCase::TwoPoint => Ok(two_point_reflection_rate(k, &p)),
                        CouplingCase::MultiPoint => reflection_multi_point(k, &p).map(|r| r.big_r),
                    };
                    match (closed, scattering_oracle(k, &p, pad)) {
                        (Ok(c), Ok(o)) => worst = worst.max((c - o.big_r).abs()),
                        _ => errors += 1,
                    }
                }
            }
        }
    }
    Outcome {
        id: 4,
        name: "closed forms vs outgoing-wave oracle",
        pass: worst <= 1e-6 && errors == 0,
        detail: format!("sup |R_closed - R_oracle| = {worst:.2e} (tol 1e-6), {errors} errors"),
    }
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    for n in [0, 1] {
        let two = params(CouplingCase::TwoPoint, n, 0.5);
        let multi = params(CouplingCase::MultiPoint, n, 0.5);
        for k in k_grid(200) {
            let a = reflection_two_point(k, &two).unwrap().big_r;
            let b = reflection_multi_point(k, &multi).unwrap().big_r;
            worst = worst.max((a - b).abs());
        }
    }
    Outcome {
        id: 5,
        name: "two-point and multi-point coincide for N <= 1",
        pass: worst <= 1e-12,
        detail: format!("max |R_two - R_multi| = {worst:.2e} (tol 1e-12)"),
    }
}

fn criterion_6() -> Outcome {
    let lattice = Lattice::periodic(1201, 5);
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut problems = Vec::new();
    for case in [CouplingCase::TwoPoint, CouplingCase::MultiPoint] {
        for j in [1.0, 2.0, 3.0] {
            let p = params(case, 5, j);
            let d = p.dispersion();
            let roots = bound_energies(&p, &QuadratureSpec::default()).unwrap();
            let spectrum = real_space_spectrum(&p, &lattice).unwrap();
            let detached: Vec<f64> = spectrum.values.iter().copied().filter(|e| !d.in_band(*e)).collect();
            for r in &roots {
                let nearest = detached
                    .iter()
                    .map(|e| (e - r.energy).abs())
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
                compared += 1;
            }
            for e in &detached {
                let outside = (d.band_bottom() - e).max(e - d.band_top());
                if outside / edge_level_spacing(1.0, 1201) > 10.0 && !roots.iter().any(|r| (r.energy - e).abs() < 1e-6) {
                    problems.push(format!("{case:?} J={j}: real-space level {e} has no root"));
                }
            }
        }
    }
    Outcome {
        id: 6,
        name: "transcendental roots vs N0 = 1201 diagonalization",
        pass: worst <= 1e-6 && problems.is_empty(),
        detail: format!(
            "{compared} roots, max |dE| = {worst:.2e} (tol 1e-6){}",
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0f64;
    let mut missing = false;
    for n in [2, 4, 6] {
        for j in [0.5, 1.0, 2.0] {
            let roots = bound_energies(&params(CouplingCase::TwoPoint, n, j), &QuadratureSpec::default()).unwrap();
            let below = roots.iter().find(|r| r.side == Side::Below);
            let above = roots.iter().find(|r| r.side == Side::Above);
            match (below, above) {
                (Some(a), Some(b)) => worst = worst.max((a.energy + b.energy - 2.0 * OMEGA).abs()),
                _ => missing = true,
            }
        }
    }
    Outcome {
        id: 7,
        name: "even-N two-point bound pair symmetric about omega_c",
        pass: worst < 1e-9 && !missing,
        detail: format!("max |E+ + E- - 2 omega_c| = {worst:.2e} (tol 1e-9)"),
    }
}

fn criterion_8() -> Outcome {
    let lattice = Lattice::periodic(DEFAULT_CRITICAL_SITES, 5);
    let t = Thresholds::default();
    let label = |j: f64, side: Side| classify_extremal(&params(CouplingCase::MultiPoint, 5, j), &lattice, side, &t).unwrap().1;
    let top: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&j| label(j, Side::Above)).collect();
    let low = label(0.1, Side::Below);
    let pass = top[0].label == Label::Extended
        && top[1].label == Label::Extended
        && top[2].label == Label::Bound
        && low.label == Label::Bound;
    Outcome {
        id: 8,
        name: "phase transition of the N = 5 multi-point upper state",
        pass,
        detail: format!(
            "N0 = {DEFAULT_CRITICAL_SITES}; top J=1,2,3: {:?}/{:?}/{:?} (detachment {:.2}, {:.2}, {:.1}); low J=0.1: {:?} (PR {:.0}, detachment {:.2})",
            top[0].label,
            top[1].label,
            top[2].label,
            top[0].detachment,
            top[1].detachment,
            top[2].detachment,
            low.label,
            low.participation_ratio,
            low.detachment
        ),
    }
}

fn criterion_9() -> Outcome {
    let t = Thresholds::default();
    let base = params(CouplingCase::MultiPoint, 2, 1.0);
    let ns: Vec<usize> = (2..=45).collect();
    let ratio: Vec<Option<f64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| {
                scope.spawn(move || {
                    let p = ModelParams { n_span: n, ..base };
                    let lattice = Lattice::periodic(DEFAULT_CRITICAL_SITES, n);
                    critical_coupling_real_space(&p, &lattice, 4.0 + n as f64, &t)
                        .ok()
                        .map(|cp| cp.j_c / n as f64)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let at = |n: usize| ratio[n - 2];
    let missing: Vec<usize> = ns.iter().copied().filter(|&n| at(n).is_none()).collect();
    if !missing.is_empty() {
        return Outcome {
            id: 9,
            name: "J_c/N branch structure for N = 2..45",
            pass: false,
            detail: format!("no transition found for N = {missing:?}"),
        };
    }
    let v = |n: usize| at(n).unwrap();
    // odd above even: each interior N against the mean of its two neighbours
    let mut misordered = Vec::new();
    for n in 3..45 {
        let neighbours = 0.5 * (v(n - 1) + v(n + 1));
        let ok = if n % 2 == 1 { v(n) > neighbours } else { v(n) < neighbours };
        if !ok {
            misordered.push(n);
        }
    }
    let odd_drift = (v(45) - v(31)).abs() / v(31);
    let even_drift = (v(44) - v(30)).abs() / v(30);
    Outcome {
        id: 9,
        name: "J_c/N branch structure for N = 2..45",
        pass: misordered.is_empty() && odd_drift < 0.10 && even_drift < 0.10,
        detail: format!(
            "N0 = {DEFAULT_CRITICAL_SITES}; parity order violated at {misordered:?}; odd J_c/N {:.4} (31) -> {:.4} (45), change {:.1}%; even {:.4} (30) -> {:.4} (44), change {:.1}% (tol 10%)",
            v(31),
            v(45),
            100.0 * odd_drift,
            v(30),
            v(44),
            100.0 * even_drift
        ),
    }
}

fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + h * i as f64)).sum();
    h * (inner + 0.5 * (f(a) + f(b)))
}

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    let spec = QuadratureSpec::default();

    // quadrature vs dense trapezoid
    let f1 = |k: f64| (1.0 + (4.0 * k).cos()) / (3.0 + 2.0 * k.cos());
    let g = |k: f64| (0.5 * k.cos()).exp();
    let f2 = move |k: f64| {
        if k == 0.0 {
            36.0 * g(0.0)
        } else {
            (3.0 * k).sin().powi(2) / (0.5 * k).sin().powi(2) * g(k)
        }
    };
    let q1 = (integrate(f1, -PI, PI, &spec).unwrap() - trapezoid(f1, -PI, PI, 1_000_000)).abs();
    let q2 = (integrate(f2, 0.0, PI, &spec).unwrap() - trapezoid(f2, 0.0, PI, 1_000_000)).abs();
    let quad_ok = q1 <= 1e-8 && q2 <= 1e-8;
    notes.push(format!("quadrature {:.1e}/{:.1e}", q1, q2));

    // eigensolver residual and orthogonality
    let n = 200;
    let m = Mat::from_fn(n, n, |i, j| {
        let (a, b) = (i.min(j) as f64, i.max(j) as f64);
        (1.7 * a + 0.37 * b * b).sin() + if i == j { 0.1 * a } else { 0.0 }
    });
    let evd = symmetric_eigen(m.as_ref()).unwrap();
    let norm = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m.read(i, j).powi(2)).sum::<f64>().sqrt();
    let mut res = 0.0f64;
    let mut orth = 0.0f64;
    for c in 0..n {
        let v = evd.vector(c);
        let r = (0..n)
            .map(|i| ((0..n).map(|j| m.read(i, j) * v[j]).sum::<f64>() - evd.values[c] * v[i]).powi(2))
            .sum::<f64>()
            .sqrt();
        res = res.max(r / norm);
        for c2 in c..n {
            let dot: f64 = (0..n).map(|i| v[i] * evd.vectors.read(i, c2)).sum();
            orth = orth.max((dot - if c == c2 { 1.0 } else { 0.0 }).abs());
        }
    }
    let eig_ok = res <= 1e-10 && orth <= 1e-10;
    notes.push(format!("eigen residual {res:.1e}, orthogonality {orth:.1e}"));

    // distribution normalization
    let mut norm_dev = 0.0f64;
    for (case, n_span, j) in [(CouplingCase::TwoPoint, 5, 1.0), (CouplingCase::MultiPoint, 5, 3.0), (CouplingCase::MultiPoint, 5, 1.0)] {
        let p = params(case, n_span, j);
        let lattice = Lattice::periodic(101, n_span);
        let spectrum = real_space_spectrum(&p, &lattice).unwrap();
        let mut states: Vec<Eigenstate> = [0, 50, 101].iter().map(|&i| Eigenstate::from_spectrum(&spectrum, i)).collect();
        states.push(extremal_state(&p, &lattice, Side::Above).unwrap());
        for s in &states {
            let total: f64 = photon_distribution(s, &lattice).iter().map(|(_, p)| p).sum();
            norm_dev = norm_dev.max((total + s.atom_amp * s.atom_amp - 1.0).abs());
        }
    }
    let dist_ok = norm_dev <= 1e-10;
    notes.push(format!("normalization {norm_dev:.1e}"));

    // byte-identical CLI reruns
    let bin = env!("CARGO_BIN_EXE_giantatom");
    let runs: Vec<&[&str]> = vec![
        &["reflection", "--case", "multi", "--n", "6", "--k-grid", "64"],
        &["bound", "--case", "two", "--n", "5", "--j", "1", "--n-sites", "301", "--format", "json"],
        &["critical", "--case", "multi", "--n-min", "3", "--n-max", "6", "--method", "both", "--n-sites", "301"],
    ];
    let mut cli_ok = true;
    for args in runs {
        let a = Command::new(bin).args(args).output().unwrap();
        let b = Command::new(bin).args(args).output().unwrap();
        cli_ok &= a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    }
    notes.push(format!("CLI reruns identical: {cli_ok}"));

    Outcome {
        id: 10,
        name: "property suites",
        pass: quad_ok && eig_ok && dist_ok && cli_ok,
        detail: notes.join("; "),
    }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut unexpected = 0;
    for run in criteria {
        let start = Instant::now();
        let o = run();
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == o.id);
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2}: {} [{:.1}s] {}",
            o.id,
            o.name,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        match (o.pass, known) {
            (false, Some((_, why))) => println!("     known failure: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("     listed as a known failure but passed; update KNOWN_FAILURES");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected acceptance result(s)");
        ExitCode::FAILURE
    }
}
