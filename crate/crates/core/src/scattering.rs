//! Single-photon scattering off the giant atom.
//!
//! Three independent routes are provided:
//!
//! * the closed-form two-point reflection rate together with the continuity
//!   system for `r`, `t` and the interior amplitudes `A`, `B`;
//! * the dressed-mode route: diagonalize the atom plus the covered resonators
//!   (`H_s`), build the `M`/`Q` coefficients for the reflection rate and solve
//!   the coupled lead/mode equations for `r`, `t` and the mode amplitudes;
//! * a finite-lattice oracle with exact outgoing-wave boundaries.
//!
//! A photon with wave vector `k` in `(0, pi)` comes in from the left with
//! amplitude `e^{ikj}`; site `j = 0` is the first resonator of the atom span.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numerics::{find_root_bracketed, solve_complex, symmetric_eigen, RootSpec};

/// `|sin k|` below this is treated as a band edge.
pub const BAND_EDGE_WINDOW: f64 = 1e-6;
/// `|E_k - v_m|` below this (in units of `xi`) is a pole of the `M` sums.
pub const DEGENERACY_WINDOW: f64 = 1e-12;
/// Default wave-vector grid for complete-reflection searches.
pub const DEFAULT_REFLECTION_GRID: usize = 2001;
/// Smallest number of free sites on each side of the atom in the oracle.
pub const MIN_ORACLE_PAD: usize = 50;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub enum Interior {
    /// `c_j = A e^{ikj} + B e^{-ikj}` inside the span, plus the atom
    /// amplitude. For `N = 0` the single covered amplitude is stored in `a`.
    TwoPoint { a: Complex64, b: Complex64, atom: Complex64 },
    /// Amplitudes `A_m` on the eigenmodes of `H_s`, ordered like
    /// [`HsSpectrum::v`].
    MultiPoint { modes: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringResult {
    pub k: f64,
    pub energy: f64,
    pub detuning: f64,
    pub r: Complex64,
    pub t: Complex64,
    /// Reflection rate `R`. Closed-form value for the analytic routes,
    /// `|r|^2` for the oracle.
    pub big_r: f64,
    /// Transmission rate `T = |t|^2`.
    pub big_t: f64,
    pub interior: Option<Interior>,
}

/// Spectrum of `H_s`, the atom plus resonators `0..=N` with their internal
/// hopping. `x[m]` and `y[m]` are the amplitudes of eigenmode `m` on
/// resonators `0` and `N`; `atom[m]` is its excited-atom amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct HsSpectrum {
    pub v: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub atom: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseIICoefficients {
    pub m1: f64,
    pub m2: f64,
    pub m3: Complex64,
    pub q1: f64,
    pub q2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompleteReflection {
    pub k: f64,
    pub detuning: f64,
    /// Residual of the defining equation at the polished root.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incidence {
    Left,
    Right,
}

fn check_wave_vector(k: f64) -> Result<()> {
    if !k.is_finite() {
        return Err(Error::InvalidParams(format!("wave vector must be finite, got {k}")));
    }
    if k.sin().abs() < BAND_EDGE_WINDOW {
        return Err(Error::BandEdge { k });
    }
    if !(0.0..=PI).contains(&k) {
        return Err(Error::InvalidParams(format!("wave vector must lie in (0, pi), got {k}")));
    }
    Ok(())
}

/// Closed-form two-point reflection rate
/// `R = 4J^4 cos^4(kN/2) / (4J^4 cos^4(kN/2) + [xi D sin k - J^2 sin(kN)]^2)`.
pub fn two_point_reflection_rate(k: f64, params: &ModelParams) -> f64 {
    let j2 = params.j_coupling * params.j_coupling;
    let n = params.n_span as f64;
    let detuning = params.dispersion().detuning(k, params.omega_a);
    let peak = 4.0 * j2 * j2 * (0.5 * k * n).cos().powi(4);
    let off = params.xi * detuning * k.sin() - j2 * (k * n).sin();
    peak / (peak + off * off)
}

/// Residual of the complete-reflection condition
/// `xi D_k sin k - J^2 sin(kN)` of the two-point case.
fn two_point_reflection_residual(k: f64, params: &ModelParams) -> f64 {
    let j2 = params.j_coupling * params.j_coupling;
    let detuning = params.dispersion().detuning(k, params.omega_a);
    params.xi * detuning * k.sin() - j2 * (k * params.n_span as f64).sin()
}

/// Solves the plane-wave matching problem of the two-point case for
/// `(r, t, A, B, atom)`.
fn two_point_amplitudes(k: f64, params: &ModelParams) -> Result<[Complex64; 5]> {
    let xi = params.xi;
    let j = params.j_coupling;
    let e = params.dispersion().energy(k);
    let ec = Complex64::from(e - params.omega_c);
    let da = Complex64::from(e - params.omega_a);
    let ph = |x: f64| Complex64::from_polar(1.0, x);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    if params.n_span == 0 {
        // unknowns (r, t, u); c_0 = 1 + r = t
        let g = 2.0 * j;
        let a = Mat::from_fn(3, 3, |row, col| {
            let v = match (row, col) {
                (0, 0) => -one,
                (0, 1) => one,
                (1, 0) => ec + xi * ph(k),
                (1, 1) => Complex64::from(xi) * ph(k),
                (1, 2) => Complex64::from(-g),
                (2, 0) => Complex64::from(-g),
                (2, 2) => da,
                _ => zero,
            };
            v.into()
        });
        let b = [one, -ec - xi * ph(-k), Complex64::from(g)];
        let x = solve_complex(&a, &b)?;
        return Ok([x[0], x[1], x[1], zero, x[2]]);
    }

    let n = params.n_span as f64;
    // unknowns (r, t, A, B, u)
    let rows: [[Complex64; 5]; 5] = [
        [-one, zero, one, one, zero],
        [zero, -ph(k * n), ph(k * n), ph(-k * n), zero],
        [
            xi * ph(k),
            zero,
            ec + xi * ph(k),
            ec + xi * ph(-k),
            Complex64::from(-j),
        ],
        [
            zero,
            xi * ph(k * (n + 1.0)),
            ec * ph(k * n) + xi * ph(k * (n - 1.0)),
            ec * ph(-k * n) + xi * ph(-k * (n - 1.0)),
            Complex64::from(-j),
        ],
        [zero, zero, -j * (one + ph(k * n)), -j * (one + ph(-k * n)), da],
    ];
    let a = Mat::from_fn(5, 5, |row, col| rows[row][col].into());
    let b = [one, zero, -xi * ph(-k), zero, zero];
    let x = solve_complex(&a, &b)?;
    Ok([x[0], x[1], x[2], x[3], x[4]])
}

/// Two-point scattering. Accepts any parameters whose coupling pattern is
/// two-point (`TwoPoint`, or `MultiPoint` with `N <= 1`).
pub fn reflection_two_point(k: f64, params: &ModelParams) -> Result<ScatteringResult> {
    params.validate()?;
    check_wave_vector(k)?;
    if !params.is_two_point_equivalent() {
        return Err(Error::InvalidParams(format!(
            "two-point closed form needs a two-point coupling pattern, got {:?} with N = {}",
            params.case, params.n_span
        )));
    }
    let [r, t, a, b, atom] = two_point_amplitudes(k, params)?;
    let closed = two_point_reflection_rate(k, params);
    let big_r = if closed.is_finite() { closed } else { r.norm_sqr() };
    let dispersion = params.dispersion();
    Ok(ScatteringResult {
        k,
        energy: dispersion.energy(k),
        detuning: dispersion.detuning(k, params.omega_a),
        r,
        t,
        big_r,
        big_t: t.norm_sqr(),
        interior: Some(Interior::TwoPoint { a, b, atom }),
    })
}

/// Eigen-decomposition of `H_s` for the coupling pattern of `params`.
pub fn hs_spectrum(params: &ModelParams) -> Result<HsSpectrum> {
    params.validate()?;
    let n = params.n_span;
    let dim = n + 2;
    let mut h = Mat::<f64>::zeros(dim, dim);
    h.write(0, 0, params.omega_a);
    for j in 0..=n {
        h.write(j + 1, j + 1, params.omega_c);
        if j < n {
            h.write(j + 1, j + 2, -params.xi);
            h.write(j + 2, j + 1, -params.xi);
        }
    }
    for (j, g) in params.coupled_sites() {
        h.write(0, j + 1, g);
        h.write(j + 1, 0, g);
    }
    let evd = symmetric_eigen(h.as_ref())?;
    let row = |r: usize| (0..dim).map(|m| evd.vectors.read(r, m)).collect::<Vec<_>>();
    Ok(HsSpectrum {
        x: row(1),
        y: row(n + 1),
        atom: row(0),
        v: evd.values,
    })
}

fn check_degeneracy(energy: f64, spectrum: &HsSpectrum, xi: f64) -> Result<()> {
    match spectrum.v.iter().find(|v| (energy - **v).abs() < DEGENERACY_WINDOW * xi) {
        Some(&mode) => Err(Error::DegenerateMode { energy, mode }),
        None => Ok(()),
    }
}

/// `M_1, M_2, M_3` and `Q_n = E_k - omega_c - M_n + xi cos k`.
pub fn case_ii_coefficients(k: f64, params: &ModelParams, spectrum: &HsSpectrum) -> Result<CaseIICoefficients> {
    let xi = params.xi;
    let e = params.dispersion().energy(k);
    check_degeneracy(e, spectrum, xi)?;
    let (mut m1, mut m2, mut m3) = (0.0, 0.0, 0.0);
    for m in 0..spectrum.v.len() {
        let w = 1.0 / (e - spectrum.v[m]);
        m1 += spectrum.x[m] * spectrum.x[m] * w;
        m2 += spectrum.y[m] * spectrum.y[m] * w;
        m3 += spectrum.x[m] * spectrum.y[m] * w;
    }
    let xi2 = xi * xi;
    let (m1, m2, m3) = (xi2 * m1, xi2 * m2, xi2 * m3);
    let base = e - params.omega_c + xi * k.cos();
    Ok(CaseIICoefficients {
        m1,
        m2,
        m3: Complex64::new(m3, 0.0),
        q1: base - m1,
        q2: base - m2,
    })
}

/// Reflection rate from the dressed-mode coefficients.
pub fn multi_point_reflection_rate(k: f64, params: &ModelParams, c: &CaseIICoefficients) -> f64 {
    let s2 = (params.xi * k.sin()).powi(2);
    let m3 = c.m3.norm_sqr();
    let qq = c.q1 * c.q2;
    let num = (qq + s2 - m3).powi(2) + s2 * (c.q1 - c.q2).powi(2);
    let den = (qq - s2 - m3).powi(2) + s2 * (c.q1 + c.q2).powi(2);
    num / den
}

/// Solves the lead/mode equations for `(r, t, A_1..A_{N+2})`.
fn dressed_mode_amplitudes(k: f64, params: &ModelParams, s: &HsSpectrum) -> Result<Vec<Complex64>> {
    let xi = params.xi;
    let e = params.dispersion().energy(k);
    let ec = e - params.omega_c;
    let np1 = params.n_span as f64 + 1.0;
    let ph = |x: f64| Complex64::from_polar(1.0, x);
    let modes = s.v.len();
    let dim = modes + 2;
    let mut a = Mat::<faer::complex_native::c64>::zeros(dim, dim);
    let mut b = vec![Complex64::new(0.0, 0.0); dim];
    let mut put = |row: usize, col: usize, v: Complex64| a.write(row, col, v.into());

    // left lead, site -1: U_j = e^{ikj} + r e^{-ikj}
    put(0, 0, ec * ph(k) + xi * ph(2.0 * k));
    b[0] = -(ec * ph(-k) + xi * ph(-2.0 * k));
    // right lead, site N+1: V_j = t e^{ikj}
    put(1, 1, ec * ph(k * np1) + xi * ph(k * (np1 + 1.0)));
    for m in 0..modes {
        put(0, m + 2, Complex64::from(xi * s.x[m]));
        put(1, m + 2, Complex64::from(xi * s.y[m]));
        // (E - v_m) A_m + xi (U_{-1} x_m + V_{N+1} y_m) = 0
        let row = m + 2;
        put(row, m + 2, Complex64::from(e - s.v[m]));
        put(row, 0, xi * s.x[m] * ph(k));
        put(row, 1, xi * s.y[m] * ph(k * np1));
        b[row] = -xi * s.x[m] * ph(-k);
    }
    solve_complex(&a, &b)
}

/// Dressed-mode scattering. Works for any coupling pattern; `big_r` is the
/// closed `M`/`Q` expression, `r`, `t` and the mode amplitudes come from the
/// linear system.
pub fn reflection_multi_point(k: f64, params: &ModelParams) -> Result<ScatteringResult> {
    params.validate()?;
    check_wave_vector(k)?;
    let spectrum = hs_spectrum(params)?;
    reflection_with_spectrum(k, params, &spectrum)
}

/// [`reflection_multi_point`] with a precomputed `H_s` spectrum, for sweeps.
pub fn reflection_with_spectrum(k: f64, params: &ModelParams, spectrum: &HsSpectrum) -> Result<ScatteringResult> {
    check_wave_vector(k)?;
    let coeffs = case_ii_coefficients(k, params, spectrum)?;
    let big_r = multi_point_reflection_rate(k, params, &coeffs);
    let x = dressed_mode_amplitudes(k, params, spectrum)?;
    let dispersion = params.dispersion();
    Ok(ScatteringResult {
        k,
        energy: dispersion.energy(k),
        detuning: dispersion.detuning(k, params.omega_a),
        r: x[0],
        t: x[1],
        big_r,
        big_t: x[1].norm_sqr(),
        interior: Some(Interior::MultiPoint { modes: x[2..].to_vec() }),
    })
}

/// Two-point closed form whenever the Hamiltonian is two-point, dressed-mode
/// route otherwise.
pub fn reflection(k: f64, params: &ModelParams) -> Result<ScatteringResult> {
    if params.is_two_point_equivalent() {
        reflection_two_point(k, params)
    } else {
        reflection_multi_point(k, params)
    }
}

/// `|sum_m y_m A_m|`, which vanishes exactly when the photon is completely
/// reflected.
pub fn destructive_interference_residual(k: f64, params: &ModelParams) -> Result<f64> {
    let spectrum = hs_spectrum(params)?;
    let result = reflection_with_spectrum(k, params, &spectrum)?;
    let Some(Interior::MultiPoint { modes }) = result.interior else {
        unreachable!("dressed-mode route always fills mode amplitudes");
    };
    Ok(modes
        .iter()
        .zip(&spectrum.y)
        .map(|(a, y)| a * *y)
        .sum::<Complex64>()
        .norm())
}

fn interior_grid(grid: usize) -> Result<Vec<f64>> {
    if grid < 3 {
        return Err(Error::InvalidParams(format!("grid needs at least 3 points, got {grid}")));
    }
    Ok((1..grid - 1).map(|i| PI * i as f64 / (grid - 1) as f64).collect())
}

fn polish_sign_changes<F>(ks: &[f64], mut f: F, skip: impl Fn(f64, f64) -> bool) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> f64,
{
    let spec = RootSpec {
        x_tol: 1e-14,
        f_tol: 1e-14,
        max_iter: 200,
    };
    let values: Vec<f64> = ks.iter().map(|&k| f(k)).collect();
    let mut roots = Vec::new();
    for i in 0..ks.len() {
        if values[i] == 0.0 {
            roots.push(ks[i]);
            continue;
        }
        if i + 1 < ks.len()
            && values[i].is_finite()
            && values[i + 1].is_finite()
            && values[i + 1] != 0.0
            && values[i].signum() != values[i + 1].signum()
            && !skip(ks[i], ks[i + 1])
        {
            roots.push(find_root_bracketed(|k| Ok(f(k)), ks[i], ks[i + 1], &spec)?);
        }
    }
    Ok(roots)
}

/// Complete-reflection points of the two-point case: solutions of
/// `D_k = J^2 sin(kN) / (xi sin k)` inside the band, found by scanning a
/// `grid`-point wave-vector grid and polishing sign changes.
///
/// Band edges are excluded, as are points where `cos(kN/2)` vanishes (the
/// closed form is `0/0` there).
pub fn complete_reflection_detunings(params: &ModelParams, grid: usize) -> Result<Vec<CompleteReflection>> {
    params.validate()?;
    if !params.is_two_point_equivalent() {
        return Err(Error::InvalidParams(
            "complete_reflection_detunings needs a two-point coupling pattern".into(),
        ));
    }
    if params.j_coupling == 0.0 {
        return Ok(Vec::new());
    }
    let ks = interior_grid(grid)?;
    let j2 = params.j_coupling.powi(2);
    let n = params.n_span as f64;
    let dispersion = params.dispersion();
    let roots = polish_sign_changes(&ks, |k| two_point_reflection_residual(k, params), |_, _| false)?;
    Ok(roots
        .into_iter()
        .filter(|k| k.sin().abs() >= BAND_EDGE_WINDOW && (0.5 * k * n).cos().abs() >= 1e-8)
        .map(|k| {
            let detuning = dispersion.detuning(k, params.omega_a);
            CompleteReflection {
                k,
                detuning,
                residual: (detuning - j2 * (k * n).sin() / (params.xi * k.sin())).abs(),
            }
        })
        .collect())
}

/// Complete-reflection points of the dressed-mode route: zeros of `M_3(k)`
/// on a `grid`-point scan, skipping intervals that straddle a pole.
pub fn complete_reflection_points_multi(params: &ModelParams, grid: usize) -> Result<Vec<CompleteReflection>> {
    params.validate()?;
    if params.j_coupling == 0.0 {
        return Ok(Vec::new());
    }
    let spectrum = hs_spectrum(params)?;
    let ks = interior_grid(grid)?;
    let dispersion = params.dispersion();
    let m3 = |k: f64| {
        case_ii_coefficients(k, params, &spectrum)
            .map(|c| c.m3.re)
            .unwrap_or(f64::NAN)
    };
    let straddles_pole = |k0: f64, k1: f64| {
        let (e0, e1) = (dispersion.energy(k0), dispersion.energy(k1));
        spectrum.v.iter().any(|v| *v >= e0.min(e1) && *v <= e0.max(e1))
    };
    let roots = polish_sign_changes(&ks, m3, straddles_pole)?;
    Ok(roots
        .into_iter()
        .filter(|k| k.sin().abs() >= BAND_EDGE_WINDOW)
        .map(|k| CompleteReflection {
            k,
            detuning: dispersion.detuning(k, params.omega_a),
            residual: m3(k).abs(),
        })
        .collect())
}

/// Finite-lattice scattering oracle.
///
/// The atom span sits between `pad` free sites on either side; both end sites
/// carry the outgoing-wave self-energy `-xi e^{ik}`, which makes the truncated
/// chain exact for an infinite homogeneous lead at energy `E_k`. The bordered
/// system is solved in `O(pad + N)` by a tridiagonal sweep plus a rank-one
/// correction for the atom.
pub fn scattering_oracle(k: f64, params: &ModelParams, pad: usize) -> Result<ScatteringResult> {
    scattering_oracle_from(k, params, pad, Incidence::Left)
}

pub fn scattering_oracle_from(
    k: f64,
    params: &ModelParams,
    pad: usize,
    incidence: Incidence,
) -> Result<ScatteringResult> {
    params.validate()?;
    check_wave_vector(k)?;
    if pad < MIN_ORACLE_PAD {
        return Err(Error::InvalidParams(format!(
            "oracle needs at least {MIN_ORACLE_PAD} free sites per side, got {pad}"
        )));
    }
    let xi = params.xi;
    let n_sites = params.n_span + 1 + 2 * pad;
    let dispersion = params.dispersion();
    let e = dispersion.energy(k);
    let phase = Complex64::from_polar(1.0, k);

    // T = E - H_chain with outgoing-wave ends: diagonal `diag`, off-diagonal +xi
    let mut diag = vec![Complex64::from(e - params.omega_c); n_sites];
    diag[0] += xi * phase;
    diag[n_sites - 1] += xi * phase;

    let j_left = -(pad as f64);
    let j_right = (params.n_span + pad) as f64;
    let mut source = vec![Complex64::new(0.0, 0.0); n_sites];
    match incidence {
        Incidence::Left => source[0] = 2.0 * I * xi * k.sin() * Complex64::from_polar(1.0, k * j_left),
        Incidence::Right => {
            source[n_sites - 1] = 2.0 * I * xi * k.sin() * Complex64::from_polar(1.0, -k * j_right)
        }
    }
    let mut coupling = vec![Complex64::new(0.0, 0.0); n_sites];
    for (j, g) in params.coupled_sites() {
        coupling[pad + j] = Complex64::from(g);
    }

    let [x, y] = tridiagonal_solve(&diag, xi, [&source, &coupling])?;
    let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<Complex64>();
    let psi: Vec<Complex64> = if params.j_coupling == 0.0 {
        x
    } else {
        let denom = Complex64::from(e - params.omega_a) - dot(&coupling, &y);
        if denom.norm() < 1e-14 * (xi + e.abs()) {
            return Err(Error::IllConditioned(format!("atom self-energy denominator vanishes at k = {k}")));
        }
        let u = dot(&coupling, &x) / denom;
        x.iter().zip(&y).map(|(x, y)| x + u * y).collect()
    };

    let (r, t) = match incidence {
        Incidence::Left => {
            let inc = Complex64::from_polar(1.0, k * j_left);
            ((psi[0] - inc) * inc, psi[n_sites - 1] * Complex64::from_polar(1.0, -k * j_right))
        }
        Incidence::Right => {
            let inc = Complex64::from_polar(1.0, -k * j_right);
            ((psi[n_sites - 1] - inc) * inc, psi[0] * Complex64::from_polar(1.0, k * j_left))
        }
    };
    Ok(ScatteringResult {
        k,
        energy: e,
        detuning: e - params.omega_a,
        r,
        t,
        big_r: r.norm_sqr(),
        big_t: t.norm_sqr(),
        interior: None,
    })
}

/// Thomas sweep for a symmetric tridiagonal system with constant off-diagonal
/// `off`, solving for two right-hand sides at once.
fn tridiagonal_solve<const M: usize>(
    diag: &[Complex64],
    off: f64,
    rhs: [&[Complex64]; M],
) -> Result<[Vec<Complex64>; M]> {
    let n = diag.len();
    let mut pivots = Vec::with_capacity(n);
    let mut work: [Vec<Complex64>; M] = std::array::from_fn(|c| rhs[c].to_vec());
    for i in 0..n {
        let mut d = diag[i];
        if i > 0 {
            let w = off / pivots[i - 1];
            d -= w * off;
            for col in work.iter_mut() {
                let prev = col[i - 1];
                col[i] -= w * prev;
            }
        }
        if d.norm() < 1e-14 * off {
            return Err(Error::IllConditioned(format!("vanishing tridiagonal pivot at row {i}")));
        }
        pivots.push(d);
    }
    for col in work.iter_mut() {
        col[n - 1] /= pivots[n - 1];
        for i in (0..n - 1).rev() {
            let next = col[i + 1];
            col[i] = (col[i] - off * next) / pivots[i];
        }
    }
    Ok(work)
}
