//! Bound states: roots of the momentum-space transcendental equations,
//! real-space diagonalization, photon distributions, the bound/extended
//! classifier and the critical coupling of the upper state.
//!
//! The transcendental equations are written as
//! `E - Omega = (1/2pi) * int_{-pi}^{pi} |sum_j g_j e^{ikj}|^2 / (E - E_k) dk`
//! which reduces to the two-point form with `1 + cos(kN)` and to the
//! multi-point form with the Fejer kernel `|sum_{j=0}^N e^{ikj}|^2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_real_space_hamiltonian, site_index, Boundary, CouplingCase, Dispersion, Lattice, ModelParams, ATOM_INDEX};
use crate::numerics::{
    find_root_bracketed, geometric_ladder, integrate, integrate_removable, symmetric_eigen, QuadratureSpec, RootSpec,
    SymmetricEigen,
};

/// First probe outside a band edge.
pub const EDGE_PROBE: f64 = 1e-8;
/// Roots closer to the edge than this are not resolved further.
pub const EDGE_FLOOR: f64 = 1e-12;
/// Base search ceiling beyond the band edge.
pub const SEARCH_CEILING: f64 = 50.0;
/// Default lattice size of the critical-coupling sweep.
pub const DEFAULT_CRITICAL_SITES: usize = 1201;
/// Bisection stops once the bracket is narrower than this (units of `xi`).
pub const CRITICAL_BRACKET: f64 = 5e-4;
const COARSE_SCAN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Below,
    Above,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Below => -1.0,
            Side::Above => 1.0,
        }
    }

    fn edge(self, d: &Dispersion) -> f64 {
        match self {
            Side::Below => d.band_bottom(),
            Side::Above => d.band_top(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Transcendental,
    RealSpace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub side: Side,
    pub source: Source,
    /// Root closer to the edge than the first ladder probe.
    pub near_edge: bool,
    /// Excited-atom amplitude `d_e`, real-space states only.
    pub atom_amp: Option<f64>,
    /// Photon amplitudes `d_i` in lattice-site order, real-space states only.
    pub photon_amps: Vec<f64>,
}

/// A normalized single-excitation eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub energy: f64,
    pub atom_amp: f64,
    pub photon_amps: Vec<f64>,
}

impl Eigenstate {
    pub fn from_spectrum(spectrum: &SymmetricEigen, index: usize) -> Self {
        let v = spectrum.vector(index);
        Self {
            energy: spectrum.values[index],
            atom_amp: v[ATOM_INDEX],
            photon_amps: v[site_index(0)..].to_vec(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.atom_amp * self.atom_amp + self.photon_amps.iter().map(|d| d * d).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub pr_threshold: f64,
    pub detach_threshold: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            pr_threshold: 0.25,
            detach_threshold: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Bound,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateClassification {
    pub participation_ratio: f64,
    pub detachment: f64,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalMethod {
    RealSpaceBisection,
    EdgeCriterion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub n_span: usize,
    pub j_c: f64,
    pub method: CriticalMethod,
    /// Lattice size the value belongs to; `None` for the edge criterion.
    pub n_sites: Option<usize>,
    /// Final bisection bracket.
    pub bracket: Option<(f64, f64)>,
    /// The coarse scan saw the label flip more than once.
    pub oscillating: bool,
}

// ---------------------------------------------------------------------------
// transcendental equations

/// Squared structure factor `|sum_j g_j e^{ikj}|^2 / (2 pi)` split into a
/// prefactor and a `J`-free shape, evaluated at distance `u` from the band
/// edge of `side` (`k = u` below, `k = pi - u` above).
#[derive(Debug, Clone, Copy)]
struct Kernel {
    prefactor: f64,
    n: usize,
    fejer: bool,
}

impl Kernel {
    fn new(params: &ModelParams) -> Self {
        let j2 = params.j_coupling * params.j_coupling;
        if params.is_two_point_equivalent() {
            Kernel {
                prefactor: j2 / PI,
                n: params.n_span,
                fejer: false,
            }
        } else {
            let np1 = params.n_span as f64 + 1.0;
            Kernel {
                prefactor: 2.0 * j2 / (np1 * np1 * PI),
                n: params.n_span,
                fejer: true,
            }
        }
    }

    fn shape(&self, u: f64, side: Side) -> f64 {
        // cos(k d) = sigma^d cos(u d)
        let alt = side == Side::Above;
        let sign = |d: usize| if alt && d % 2 == 1 { -1.0 } else { 1.0 };
        if self.fejer {
            let np1 = self.n + 1;
            let mut w = np1 as f64;
            for d in 1..=self.n {
                w += 2.0 * (np1 - d) as f64 * sign(d) * (u * d as f64).cos();
            }
            w
        } else {
            1.0 + sign(self.n) * (u * self.n as f64).cos()
        }
    }

    fn edge_shape(&self, side: Side) -> f64 {
        self.shape(0.0, side)
    }
}

/// `int_0^pi w(u) / (delta + 4 xi sin^2(u/2)) du`, split geometrically around
/// the edge so sharp peaks at small `delta` stay resolved.
fn edge_integral(kernel: &Kernel, side: Side, delta: f64, xi: f64, spec: &QuadratureSpec) -> Result<f64> {
    let f = |u: f64| kernel.shape(u, side) / (delta + 4.0 * xi * (0.5 * u).sin().powi(2));
    if delta == 0.0 {
        return integrate_removable(f, 0.0, PI, &[0.0], spec);
    }
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = (delta / xi).sqrt();
    while lo < PI {
        let top = hi.min(PI);
        total += integrate(f, lo, top, spec)?;
        lo = top;
        hi *= 8.0;
    }
    Ok(total)
}

/// `h(delta)` for `E = edge + s delta`: `s (E - Omega) - 2 P I(delta)`,
/// increasing in `delta`.
fn edge_residual(params: &ModelParams, kernel: &Kernel, side: Side, delta: f64, spec: &QuadratureSpec) -> Result<f64> {
    let s = side.sign();
    let e = side.edge(&params.dispersion()) + s * delta;
    Ok(s * (e - params.omega_a) - 2.0 * kernel.prefactor * edge_integral(kernel, side, delta, params.xi, spec)?)
}

/// `E - Omega - RHS(E)` evaluated directly on the full `[-pi, pi]` integral.
/// Only defined outside the band. The integrand is even in `k`, so only
/// `[0, pi]` is integrated and both edge peaks land on endpoints.
pub fn transcendental_residual(energy: f64, params: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    let d = params.dispersion();
    if d.in_band(energy) {
        return Err(Error::InvalidParams(format!("energy {energy} lies inside the band")));
    }
    let kernel = Kernel::new(params);
    // E - E_k referenced to the nearer band edge, so no cancellation near it
    let (below, above) = (energy - d.band_bottom(), energy - d.band_top());
    let f = |k: f64| {
        let denom = if k < 0.5 * PI {
            below - 4.0 * params.xi * (0.5 * k).sin().powi(2)
        } else {
            above + 4.0 * params.xi * (0.5 * k).cos().powi(2)
        };
        kernel.shape(k, Side::Below) / denom
    };
    Ok(energy - params.omega_a - 2.0 * kernel.prefactor * integrate(f, 0.0, PI, spec)?)
}

fn search_ceiling(params: &ModelParams) -> f64 {
    let g2: f64 = params.coupled_sites().iter().map(|(_, g)| g * g).sum();
    SEARCH_CEILING * params.xi + (params.omega_a - params.omega_c).abs() + 2.0 * g2.sqrt()
}

fn root_on_side(params: &ModelParams, side: Side, spec: &QuadratureSpec) -> Result<Option<BoundState>> {
    let kernel = Kernel::new(params);
    let h = |delta: f64| edge_residual(params, &kernel, side, delta, spec);
    let divergent = kernel.edge_shape(side) > 1e-12 * kernel.shape(0.0, Side::Below).max(1.0);
    if !divergent && h(0.0)? >= 0.0 {
        return Ok(None);
    }
    let roots = RootSpec {
        x_tol: 1e-15,
        f_tol: 1e-14,
        max_iter: 300,
    };
    let delta = if h(EDGE_PROBE)? >= 0.0 {
        let lo = if divergent { EDGE_FLOOR } else { 0.0 };
        if h(lo)? >= 0.0 {
            // deeper than the floor: report the edge itself
            0.0
        } else {
            find_root_bracketed(h, lo, EDGE_PROBE, &roots)?
        }
    } else {
        let Some((lo, hi)) = geometric_ladder(h, EDGE_PROBE, search_ceiling(params), 2.0)? else {
            return Err(Error::NoBracket {
                lo: EDGE_PROBE,
                hi: search_ceiling(params),
                f_lo: h(EDGE_PROBE)?,
                f_hi: h(search_ceiling(params))?,
            });
        };
        let rel = RootSpec {
            x_tol: 1e-14 * hi.max(1.0),
            ..roots
        };
        find_root_bracketed(h, lo, hi, &rel)?
    };
    Ok(Some(BoundState {
        energy: side.edge(&params.dispersion()) + side.sign() * delta,
        side,
        source: Source::Transcendental,
        near_edge: delta < EDGE_PROBE,
        atom_amp: None,
        photon_amps: Vec::new(),
    }))
}

/// Roots of the transcendental equation outside the band, lowest first.
pub fn bound_energies(params: &ModelParams, spec: &QuadratureSpec) -> Result<Vec<BoundState>> {
    params.validate()?;
    spec.validate()?;
    if params.j_coupling == 0.0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for side in [Side::Below, Side::Above] {
        if let Some(state) = root_on_side(params, side, spec)? {
            out.push(state);
        }
    }
    Ok(out)
}

pub fn bound_energies_two_point(params: &ModelParams, spec: &QuadratureSpec) -> Result<Vec<BoundState>> {
    if params.case != CouplingCase::TwoPoint {
        return Err(Error::InvalidParams("expected the two-point case".into()));
    }
    bound_energies(params, spec)
}

/// Multi-point roots. For `N <= 1` the operator is the two-point one and the
/// two-point kernel is used, so results coincide bit for bit.
pub fn bound_energies_multi_point(params: &ModelParams, spec: &QuadratureSpec) -> Result<Vec<BoundState>> {
    if params.case != CouplingCase::MultiPoint {
        return Err(Error::InvalidParams("expected the multi-point case".into()));
    }
    bound_energies(params, spec)
}

/// `C(N)` in `J_c^2 = (omega_c + 2 xi - Omega) / C(N)`: the `J`-free coefficient
/// of the right-hand side at the upper edge.
pub fn edge_coefficient(params: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    let kernel = Kernel::new(&params.with_j(1.0));
    if kernel.edge_shape(Side::Above) > 1e-12 {
        return Err(Error::Divergent { n_span: params.n_span });
    }
    Ok(2.0 * kernel.prefactor * edge_integral(&kernel, Side::Above, 0.0, params.xi, spec)?)
}

/// Infinite-lattice critical coupling from the edge condition. `J_c = 0`
/// when the atom sits at or above the upper edge.
pub fn critical_coupling_edge_criterion(params: &ModelParams, spec: &QuadratureSpec) -> Result<CriticalPoint> {
    params.validate()?;
    let c = edge_coefficient(params, spec)?;
    let gap = (params.dispersion().band_top() - params.omega_a).max(0.0);
    Ok(CriticalPoint {
        n_span: params.n_span,
        j_c: (gap / c).sqrt(),
        method: CriticalMethod::EdgeCriterion,
        n_sites: None,
        bracket: None,
        oscillating: false,
    })
}

// ---------------------------------------------------------------------------
// real space

pub fn real_space_spectrum(params: &ModelParams, lattice: &Lattice) -> Result<SymmetricEigen> {
    let h = build_real_space_hamiltonian(params, lattice)?;
    symmetric_eigen(h.as_ref())
}

/// `|d_i|^2` keyed by site offset from the atom anchor. Periodic offsets are
/// wrapped into `[-floor(N0/2), ceil(N0/2) - 1]`. Sorted by offset.
pub fn photon_distribution(state: &Eigenstate, lattice: &Lattice) -> Vec<(i64, f64)> {
    let n = lattice.n_sites as i64;
    let mut out: Vec<(i64, f64)> = state
        .photon_amps
        .iter()
        .enumerate()
        .map(|(site, d)| {
            let mut off = lattice.offset(site);
            if lattice.boundary == Boundary::Periodic {
                let lo = -(n / 2);
                off = (off - lo).rem_euclid(n) + lo;
            }
            (off, d * d)
        })
        .collect();
    out.sort_by_key(|(off, _)| *off);
    out
}

/// Smallest level spacing of the free ring, found at the band edges.
pub fn edge_level_spacing(xi: f64, n_sites: usize) -> f64 {
    2.0 * xi * (1.0 - (2.0 * PI / n_sites as f64).cos())
}

pub fn participation_ratio(photon_amps: &[f64]) -> f64 {
    let total: f64 = photon_amps.iter().map(|d| d * d).sum();
    if total == 0.0 {
        return 0.0;
    }
    1.0 / photon_amps.iter().map(|d| (d * d / total).powi(2)).sum::<f64>()
}

/// Bound iff the photon participation ratio is below `pr_threshold * N0` and
/// the energy sits more than `detach_threshold` edge level spacings outside
/// the band. In-band states have zero detachment.
pub fn classify_state(
    state: &Eigenstate,
    dispersion: &Dispersion,
    lattice: &Lattice,
    thresholds: &Thresholds,
) -> StateClassification {
    let outside = (dispersion.band_bottom() - state.energy)
        .max(state.energy - dispersion.band_top())
        .max(0.0);
    let detachment = outside / edge_level_spacing(dispersion.xi, lattice.n_sites);
    let participation_ratio = participation_ratio(&state.photon_amps);
    let bound = participation_ratio < thresholds.pr_threshold * lattice.n_sites as f64
        && detachment > thresholds.detach_threshold;
    StateClassification {
        participation_ratio,
        detachment,
        label: if bound { Label::Bound } else { Label::Extended },
    }
}

/// Eigenstates outside the band that the classifier labels Bound.
pub fn real_space_bound_states(params: &ModelParams, lattice: &Lattice, thresholds: &Thresholds) -> Result<Vec<BoundState>> {
    let spectrum = real_space_spectrum(params, lattice)?;
    let d = params.dispersion();
    let mut out = Vec::new();
    for i in 0..spectrum.values.len() {
        let e = spectrum.values[i];
        if d.in_band(e) {
            continue;
        }
        let state = Eigenstate::from_spectrum(&spectrum, i);
        if classify_state(&state, &d, lattice, thresholds).label == Label::Bound {
            out.push(BoundState {
                energy: e,
                side: if e > d.band_top() { Side::Above } else { Side::Below },
                source: Source::RealSpace,
                near_edge: false,
                atom_amp: Some(state.atom_amp),
                photon_amps: state.photon_amps,
            });
        }
    }
    Ok(out)
}

/// Topmost (`Above`) or lowest (`Below`) eigenstate.
///
/// On a periodic lattice this solves the secular equation in the ring's
/// plane-wave basis, `O(N0^2)` instead of a dense diagonalization. It falls
/// back to the dense solver on open lattices and when the extremal ring level
/// is decoupled from the atom.
pub fn extremal_state(params: &ModelParams, lattice: &Lattice, side: Side) -> Result<Eigenstate> {
    params.validate()?;
    lattice.validate(params)?;
    if lattice.boundary == Boundary::Periodic {
        if let Some(state) = ring_extremal_state(params, lattice, side)? {
            return Ok(state);
        }
    }
    let spectrum = real_space_spectrum(params, lattice)?;
    let index = match side {
        Side::Below => 0,
        Side::Above => spectrum.values.len() - 1,
    };
    Ok(Eigenstate::from_spectrum(&spectrum, index))
}

fn ring_extremal_state(params: &ModelParams, lattice: &Lattice, side: Side) -> Result<Option<Eigenstate>> {
    let n0 = lattice.n_sites;
    let xi = params.xi;
    let s = side.sign();
    let norm = (n0 as f64).sqrt();
    let roots: Vec<Complex64> = (0..n0).map(|p| Complex64::from_polar(1.0, 2.0 * PI * p as f64 / n0 as f64)).collect();
    let coupling = lattice.coupling_vector(params);
    let g_norm2: f64 = coupling.iter().map(|(_, g)| g * g).sum();
    if g_norm2 == 0.0 {
        return Ok(None);
    }

    // folded wave vectors and ring levels
    let q = |m: usize| {
        let m = m.min(n0 - m);
        2.0 * PI * m as f64 / n0 as f64
    };
    let q_ref = match side {
        Side::Above => q(n0 / 2),
        Side::Below => 0.0,
    };
    let eps_ref = params.omega_c - 2.0 * xi * q_ref.cos();
    let mut gap = Vec::with_capacity(n0);
    let mut g_hat = Vec::with_capacity(n0);
    let mut weight = Vec::with_capacity(n0);
    for m in 0..n0 {
        let qm = q(m);
        gap.push((4.0 * xi * (0.5 * (q_ref + qm)).sin() * (0.5 * (q_ref - qm)).sin()).abs());
        let gm: Complex64 = coupling
            .iter()
            .map(|&(site, g)| g * roots[(n0 - (m * site) % n0) % n0])
            .sum::<Complex64>()
            / norm;
        weight.push(gm.norm_sqr());
        g_hat.push(gm);
    }
    let ref_weight: f64 = (0..n0).filter(|&m| gap[m] == 0.0).map(|m| weight[m]).sum();
    if ref_weight <= 1e-24 * g_norm2 {
        return Ok(None);
    }

    // G(delta) = s (eps_ref - Omega) + delta - sum w / (delta + gap), increasing
    let secular = |delta: f64| -> Result<f64> {
        let sum: f64 = (0..n0).map(|m| weight[m] / (delta + gap[m])).sum();
        Ok(s * (eps_ref - params.omega_a) + delta - sum)
    };
    let mut hi = (params.omega_a - eps_ref).abs() + g_norm2.sqrt() + xi;
    while secular(hi)? <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = hi;
    let mut steps = 0;
    while secular(lo)? >= 0.0 {
        lo *= 0.25;
        steps += 1;
        if steps > 1000 || lo == 0.0 {
            return Ok(None);
        }
    }
    let spec = RootSpec {
        x_tol: 1e-15 * hi.max(1.0),
        f_tol: 1e-300,
        max_iter: 400,
    };
    let delta = find_root_bracketed(secular, lo, (4.0 * lo).min(hi), &spec)?;
    let energy = eps_ref + s * delta;

    // photon amplitudes for atom amplitude 1
    let coeff: Vec<Complex64> = (0..n0).map(|m| g_hat[m] / (s * (delta + gap[m])) / norm).collect();
    let mut photon: Vec<f64> = (0..n0)
        .map(|site| {
            (0..n0)
                .map(|m| coeff[m] * roots[(m * site) % n0])
                .sum::<Complex64>()
                .re
        })
        .collect();
    let total = (1.0 + photon.iter().map(|d| d * d).sum::<f64>()).sqrt();
    photon.iter_mut().for_each(|d| *d /= total);
    Ok(Some(Eigenstate {
        energy,
        atom_amp: 1.0 / total,
        photon_amps: photon,
    }))
}

pub fn classify_extremal(
    params: &ModelParams,
    lattice: &Lattice,
    side: Side,
    thresholds: &Thresholds,
) -> Result<(Eigenstate, StateClassification)> {
    let state = extremal_state(params, lattice, side)?;
    let class = classify_state(&state, &params.dispersion(), lattice, thresholds);
    Ok((state, class))
}

/// Critical coupling of the topmost state on a fixed lattice: a coarse scan of
/// `(0, j_hi]` followed by bisection on the first Extended to Bound flip.
pub fn critical_coupling_real_space(
    params: &ModelParams,
    lattice: &Lattice,
    j_hi: f64,
    thresholds: &Thresholds,
) -> Result<CriticalPoint> {
    params.validate()?;
    if !(j_hi > 0.0) || !j_hi.is_finite() {
        return Err(Error::InvalidParams(format!("j_hi must be positive, got {j_hi}")));
    }
    let bound_at = |j: f64| -> Result<bool> {
        let (_, c) = classify_extremal(&params.with_j(j), lattice, Side::Above, thresholds)?;
        Ok(c.label == Label::Bound)
    };
    let grid: Vec<f64> = (1..=COARSE_SCAN).map(|i| j_hi * i as f64 / COARSE_SCAN as f64).collect();
    let labels = grid.iter().map(|&j| bound_at(j)).collect::<Result<Vec<bool>>>()?;
    let no_transition = Error::NoTransition { j_lo: 0.0, j_hi };
    if !labels[COARSE_SCAN - 1] {
        return Err(no_transition);
    }
    let flips = labels.windows(2).filter(|w| w[0] != w[1]).count();
    let (mut lo, mut hi) = match labels.iter().position(|&b| b) {
        Some(0) => {
            let tiny = j_hi * 1e-6;
            if bound_at(tiny)? {
                return Err(no_transition);
            }
            (tiny, grid[0])
        }
        Some(i) => (grid[i - 1], grid[i]),
        None => unreachable!("last label is Bound"),
    };
    while hi - lo >= CRITICAL_BRACKET * params.xi {
        let mid = 0.5 * (lo + hi);
        if bound_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalPoint {
        n_span: params.n_span,
        j_c: 0.5 * (lo + hi),
        method: CriticalMethod::RealSpaceBisection,
        n_sites: Some(lattice.n_sites),
        bracket: Some((lo, hi)),
        oscillating: flips > 1,
    })
}
