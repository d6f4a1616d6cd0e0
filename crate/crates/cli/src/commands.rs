use std::f64::consts::PI;

use giantatom_core::boundstates::{
    bound_energies, classify_state, critical_coupling_edge_criterion, critical_coupling_real_space, edge_level_spacing,
    extremal_state, photon_distribution, real_space_bound_states, real_space_spectrum, BoundState, CriticalMethod,
    CriticalPoint, Side, Source, Thresholds,
};
use giantatom_core::numerics::QuadratureSpec;
use giantatom_core::scattering::{case_ii_coefficients, hs_spectrum, reflection, reflection_with_spectrum};
use giantatom_core::{CouplingCase, Error, Lattice, ModelParams};
use rayon::prelude::*;

use crate::args::{BoundArgs, Common, CriticalArgs, DistributionArgs, MethodArg, ReflectionArgs, SpectrumArgs, StateArg};
use crate::table::{Cell, Table};
use crate::CliError;

pub fn params(c: &Common) -> Result<ModelParams, CliError> {
    if !(c.xi > 0.0) || !c.xi.is_finite() {
        return Err(CliError::Usage(format!("--xi must be positive, got {}", c.xi)));
    }
    Ok(ModelParams::new(c.case.into(), c.n, c.j, c.omega_c, c.omega_a)?)
}

fn check_grid(name: &str, n: usize) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("--{name} must be at least 2, got {n}")));
    }
    Ok(())
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Below => "below",
        Side::Above => "above",
    }
}

pub fn cmd_reflection(a: &ReflectionArgs) -> Result<Table, CliError> {
    let p = params(&a.common)?;
    check_grid("k-grid", a.k_grid)?;
    let multi = p.case == CouplingCase::MultiPoint;
    let spectrum = if multi { Some(hs_spectrum(&p)?) } else { None };
    let mut columns = vec!["k", "detuning", "R", "T"];
    if multi {
        columns.push("abs_m3");
    }
    columns.push("flags");
    let n = a.k_grid;
    let rows: Vec<Result<Vec<Cell>, CliError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let k = PI * (i + 1) as f64 / (n + 1) as f64;
            let res = match &spectrum {
                Some(s) if !p.is_two_point_equivalent() => reflection_with_spectrum(k, &p, s),
                _ => reflection(k, &p),
            };
            let detuning = p.dispersion().detuning(k, p.omega_a);
            let mut row: Vec<Cell> = vec![k.into(), detuning.into()];
            let mut flag = "";
            match res {
                Ok(r) => row.extend([r.big_r.into(), r.big_t.into()]),
                Err(Error::DegenerateMode { .. }) => {
                    row.extend([f64::NAN.into(), f64::NAN.into()]);
                    flag = "degenerate_mode";
                }
                Err(e) => return Err(e.into()),
            }
            if let Some(s) = &spectrum {
                let m3 = case_ii_coefficients(k, &p, s).map(|c| c.m3.norm()).unwrap_or(f64::NAN);
                row.push(m3.into());
            }
            row.push(flag.into());
            Ok(row)
        })
        .collect();
    let mut table = Table::new(columns);
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}

/// Rows of the bound-state table plus the real-space states, for the
/// optional distribution dump.
pub fn cmd_bound(a: &BoundArgs) -> Result<(Table, Table), CliError> {
    let p = params(&a.common)?;
    let lattice = Lattice::periodic(a.n_sites, p.n_span);
    lattice.validate(&p)?;
    let thresholds = Thresholds {
        pr_threshold: a.pr_threshold,
        detach_threshold: a.detach_threshold,
    };
    let (roots, states) = rayon::join(
        || bound_energies(&p, &QuadratureSpec::default()),
        || real_space_bound_states(&p, &lattice, &thresholds),
    );
    let (roots, states) = (roots?, states?);
    let d = p.dispersion();
    let spacing = edge_level_spacing(p.xi, a.n_sites);
    let mut table = Table::new(vec!["source", "side", "energy", "participation_ratio", "detachment", "flags"]);
    let mut dump = Table::new(vec!["state", "energy", "atom_probability", "offset", "probability"]);
    for s in roots.iter().chain(&states) {
        let outside = (d.band_bottom() - s.energy).max(s.energy - d.band_top()).max(0.0);
        let (source, pr) = match s.source {
            Source::Transcendental => ("transcendental", f64::NAN),
            Source::RealSpace => {
                let c = classify_state(&eigenstate(s), &d, &lattice, &thresholds);
                ("real_space", c.participation_ratio)
            }
        };
        table.push(vec![
            source.into(),
            side_name(s.side).into(),
            s.energy.into(),
            pr.into(),
            (outside / spacing).into(),
            (if s.near_edge { "near_edge" } else { "" }).into(),
        ]);
    }
    for (i, s) in states.iter().enumerate() {
        let atom = s.atom_amp.unwrap_or(0.0);
        for (offset, prob) in photon_distribution(&eigenstate(s), &lattice) {
            dump.push(vec![i.into(), s.energy.into(), (atom * atom).into(), offset.into(), prob.into()]);
        }
    }
    Ok((table, dump))
}

fn eigenstate(s: &BoundState) -> giantatom_core::boundstates::Eigenstate {
    giantatom_core::boundstates::Eigenstate {
        energy: s.energy,
        atom_amp: s.atom_amp.unwrap_or(0.0),
        photon_amps: s.photon_amps.clone(),
    }
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<Table, CliError> {
    let p = params(&a.common)?;
    check_grid("j-steps", a.j_steps)?;
    let lattice = Lattice::periodic(a.n_sites, p.n_span);
    lattice.validate(&p)?;
    let js: Vec<f64> = (0..a.j_steps)
        .map(|i| a.j_min + (a.j_max - a.j_min) * i as f64 / (a.j_steps - 1) as f64)
        .collect();
    let spectra: Vec<_> = js
        .par_iter()
        .map(|&j| {
            let pj = ModelParams { j_coupling: j, ..p };
            pj.validate()?;
            real_space_spectrum(&pj, &lattice).map(|s| s.values)
        })
        .collect();
    let mut table = Table::new(vec!["j", "index", "energy"]);
    for (j, values) in js.iter().zip(spectra) {
        for (i, e) in values?.into_iter().enumerate() {
            table.push(vec![(*j).into(), i.into(), e.into()]);
        }
    }
    Ok(table)
}

pub fn cmd_distribution(a: &DistributionArgs) -> Result<Table, CliError> {
    let p = params(&a.common)?;
    let lattice = Lattice::periodic(a.n_sites, p.n_span);
    let side = match a.state {
        StateArg::Top => Side::Above,
        StateArg::Bottom => Side::Below,
    };
    let state = extremal_state(&p, &lattice, side)?;
    let atom = state.atom_amp * state.atom_amp;
    let mut table = Table::new(vec!["energy", "atom_probability", "offset", "probability"]);
    for (offset, prob) in photon_distribution(&state, &lattice) {
        table.push(vec![state.energy.into(), atom.into(), offset.into(), prob.into()]);
    }
    Ok(table)
}

fn critical_row(n: usize, method: &str, n_sites: Option<usize>, r: Result<CriticalPoint, Error>) -> Result<Vec<Cell>, CliError> {
    let sites: Cell = n_sites.map_or(Cell::Text(String::new()), Cell::from);
    Ok(match r {
        Ok(cp) => {
            let (lo, hi) = cp.bracket.unwrap_or((f64::NAN, f64::NAN));
            vec![
                n.into(),
                cp.j_c.into(),
                method.into(),
                sites,
                lo.into(),
                hi.into(),
                (if cp.oscillating { "oscillating" } else { "" }).into(),
            ]
        }
        Err(e @ (Error::NoTransition { .. } | Error::Divergent { .. })) => {
            let flag = if matches!(e, Error::NoTransition { .. }) { "no_transition" } else { "divergent" };
            vec![
                n.into(),
                f64::NAN.into(),
                method.into(),
                sites,
                f64::NAN.into(),
                f64::NAN.into(),
                flag.into(),
            ]
        }
        Err(e) => return Err(e.into()),
    })
}

pub fn cmd_critical(a: &CriticalArgs) -> Result<Table, CliError> {
    let base = params(&a.common)?;
    if a.n_min > a.n_max {
        return Err(CliError::Usage(format!("--n-min {} exceeds --n-max {}", a.n_min, a.n_max)));
    }
    let thresholds = Thresholds {
        pr_threshold: a.pr_threshold,
        detach_threshold: a.detach_threshold,
    };
    let real = matches!(a.method, MethodArg::RealSpace | MethodArg::Both);
    let edge = matches!(a.method, MethodArg::Edge | MethodArg::Both);
    let rows: Vec<Result<Vec<Vec<Cell>>, CliError>> = (a.n_min..=a.n_max)
        .into_par_iter()
        .map(|n| {
            let p = ModelParams { n_span: n, ..base };
            let mut rows = Vec::new();
            if real {
                let lattice = Lattice::periodic(a.n_sites, n);
                lattice.validate(&p)?;
                let j_hi = a.j_hi.unwrap_or(4.0 + n as f64);
                let r = critical_coupling_real_space(&p, &lattice, j_hi, &thresholds);
                rows.push(critical_row(n, method_name(CriticalMethod::RealSpaceBisection), Some(a.n_sites), r)?);
            }
            if edge {
                let r = critical_coupling_edge_criterion(&p, &QuadratureSpec::default());
                rows.push(critical_row(n, method_name(CriticalMethod::EdgeCriterion), None, r)?);
            }
            Ok(rows)
        })
        .collect();
    let mut table = Table::new(vec!["n", "j_c", "method", "n_sites", "bracket_lo", "bracket_hi", "flags"]);
    for group in rows {
        for row in group? {
            table.push(row);
        }
    }
    Ok(table)
}

fn method_name(m: CriticalMethod) -> &'static str {
    match m {
        CriticalMethod::RealSpaceBisection => "real_space_bisection",
        CriticalMethod::EdgeCriterion => "edge_criterion",
    }
}
