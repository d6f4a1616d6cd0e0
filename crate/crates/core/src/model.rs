//! Physical parameters, the finite lattice and the single-excitation
//! Hamiltonian of a giant atom coupled to a coupled-resonator waveguide.
//!
//! Energies are measured in units of the hopping `xi`. The single-excitation
//! basis places the excited atom at index [`ATOM_INDEX`] and the photon on
//! lattice site `i` at index `i + 1`.

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Basis index of the excited-atom state.
pub const ATOM_INDEX: usize = 0;

/// Basis index of a photon on lattice site `site`.
#[inline]
pub fn site_index(site: usize) -> usize {
    site + 1
}

/// How the atom couples to the resonators it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingCase {
    /// Coupling `J` to resonators `0` and `N` only.
    TwoPoint,
    /// Uniform coupling `2J/(N+1)` to every resonator `0..=N`.
    MultiPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega_c: f64,
    pub xi: f64,
    pub omega_a: f64,
    pub j_coupling: f64,
    pub n_span: usize,
    pub case: CouplingCase,
}

impl ModelParams {
    pub fn new(
        case: CouplingCase,
        n_span: usize,
        j_coupling: f64,
        omega_c: f64,
        omega_a: f64,
    ) -> Result<Self> {
        let params = Self {
            omega_c,
            xi: 1.0,
            omega_a,
            j_coupling,
            n_span,
            case,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("omega_c", self.omega_c),
            ("omega_a", self.omega_a),
            ("xi", self.xi),
            ("j_coupling", self.j_coupling),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {value}")));
            }
        }
        if self.xi <= 0.0 {
            return Err(Error::InvalidParams(format!("xi must be positive, got {}", self.xi)));
        }
        if self.j_coupling < 0.0 {
            return Err(Error::InvalidParams(format!(
                "j_coupling must be non-negative, got {}",
                self.j_coupling
            )));
        }
        Ok(())
    }

    pub fn with_j(&self, j_coupling: f64) -> Self {
        Self { j_coupling, ..*self }
    }

    pub fn with_case(&self, case: CouplingCase) -> Self {
        Self { case, ..*self }
    }

    /// Strength of a single atom-resonator link.
    pub fn link_strength(&self) -> f64 {
        match self.case {
            CouplingCase::TwoPoint => self.j_coupling,
            CouplingCase::MultiPoint => 2.0 * self.j_coupling / (self.n_span as f64 + 1.0),
        }
    }

    /// Coupled resonators as `(offset within the span, strength)`, with
    /// coincident links merged. For `N = 0` the two links of the two-point
    /// case land on the same resonator and add up to `2J`.
    pub fn coupled_sites(&self) -> Vec<(usize, f64)> {
        let g = self.link_strength();
        match (self.case, self.n_span) {
            (CouplingCase::TwoPoint, 0) => vec![(0, 2.0 * g)],
            (CouplingCase::TwoPoint, n) => vec![(0, g), (n, g)],
            (CouplingCase::MultiPoint, n) => (0..=n).map(|j| (j, g)).collect(),
        }
    }

    /// True when the coupling pattern is that of the two-point case. For
    /// `N <= 1` both cases give the same operator.
    pub fn is_two_point_equivalent(&self) -> bool {
        self.case == CouplingCase::TwoPoint || self.n_span <= 1
    }

    pub fn dispersion(&self) -> Dispersion {
        Dispersion {
            omega_c: self.omega_c,
            xi: self.xi,
        }
    }
}

/// `E_k = omega_c - 2 xi cos k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub omega_c: f64,
    pub xi: f64,
}

impl Dispersion {
    pub fn energy(&self, k: f64) -> f64 {
        self.omega_c - 2.0 * self.xi * k.cos()
    }

    pub fn detuning(&self, k: f64, omega_a: f64) -> f64 {
        self.energy(k) - omega_a
    }

    pub fn band_bottom(&self) -> f64 {
        self.omega_c - 2.0 * self.xi
    }

    pub fn band_top(&self) -> f64 {
        self.omega_c + 2.0 * self.xi
    }

    pub fn band_width(&self) -> f64 {
        4.0 * self.xi
    }

    pub fn in_band(&self, energy: f64) -> bool {
        energy >= self.band_bottom() && energy <= self.band_top()
    }

    /// Wave vector in `[0, pi]` of an in-band energy.
    pub fn wave_vector(&self, energy: f64) -> Option<f64> {
        let c = (self.omega_c - energy) / (2.0 * self.xi);
        (-1.0..=1.0).contains(&c).then(|| c.acos())
    }
}

/// Convenience wrapper around [`Dispersion::energy`].
pub fn dispersion(k: f64, params: &ModelParams) -> f64 {
    params.dispersion().energy(k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Periodic,
    Open,
    /// Truncated lattice whose two end sites carry the self-energy
    /// `-xi e^{ik}` of a semi-infinite lead at wave vector `k`.
    OutgoingWave { k: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub n_sites: usize,
    pub boundary: Boundary,
    /// Lattice site holding resonator `j = 0` of the atom span.
    pub atom_anchor: usize,
}

impl Lattice {
    pub fn new(n_sites: usize, boundary: Boundary, atom_anchor: usize) -> Self {
        Self {
            n_sites,
            boundary,
            atom_anchor,
        }
    }

    /// Lattice with the atom span centred, anchor `floor((n_sites - N) / 2)`.
    pub fn centered(n_sites: usize, boundary: Boundary, n_span: usize) -> Self {
        Self::new(n_sites, boundary, n_sites.saturating_sub(n_span) / 2)
    }

    pub fn periodic(n_sites: usize, n_span: usize) -> Self {
        Self::centered(n_sites, Boundary::Periodic, n_span)
    }

    pub fn open(n_sites: usize, n_span: usize) -> Self {
        Self::centered(n_sites, Boundary::Open, n_span)
    }

    pub fn dim(&self) -> usize {
        self.n_sites + 1
    }

    /// The span must fit with at least one free site on each side.
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        let n = params.n_span;
        let fits = self.n_sites >= n + 3
            && self.atom_anchor >= 1
            && self.atom_anchor + n + 2 <= self.n_sites;
        if !fits {
            return Err(Error::SpanExceedsLattice {
                n_span: n,
                anchor: self.atom_anchor,
                n_sites: self.n_sites,
            });
        }
        if let Boundary::OutgoingWave { k } = self.boundary {
            if !k.is_finite() {
                return Err(Error::InvalidParams(format!("outgoing-wave k must be finite, got {k}")));
            }
        }
        Ok(())
    }

    /// Site offset relative to the atom anchor.
    pub fn offset(&self, site: usize) -> i64 {
        site as i64 - self.atom_anchor as i64
    }

    /// Coupled lattice sites and their strengths.
    pub fn coupling_vector(&self, params: &ModelParams) -> Vec<(usize, f64)> {
        params
            .coupled_sites()
            .into_iter()
            .map(|(j, g)| (self.atom_anchor + j, g))
            .collect()
    }

    fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n_sites;
        let wrap = matches!(self.boundary, Boundary::Periodic);
        (0..n - 1)
            .map(|i| (i, i + 1))
            .chain(wrap.then_some((n - 1, 0)))
    }
}

/// Real symmetric single-excitation Hamiltonian on a periodic or open
/// lattice.
pub fn build_real_space_hamiltonian(params: &ModelParams, lattice: &Lattice) -> Result<Mat<f64>> {
    params.validate()?;
    lattice.validate(params)?;
    if matches!(lattice.boundary, Boundary::OutgoingWave { .. }) {
        return Err(Error::UnsupportedBoundary(
            "outgoing-wave lattices are complex symmetric; use outgoing_wave_hamiltonian",
        ));
    }
    let mut h = Mat::<f64>::zeros(lattice.dim(), lattice.dim());
    h.write(ATOM_INDEX, ATOM_INDEX, params.omega_a);
    for i in 0..lattice.n_sites {
        h.write(site_index(i), site_index(i), params.omega_c);
    }
    for (i, j) in lattice.links() {
        h.write(site_index(i), site_index(j), -params.xi);
        h.write(site_index(j), site_index(i), -params.xi);
    }
    for (site, g) in lattice.coupling_vector(params) {
        h.write(ATOM_INDEX, site_index(site), g);
        h.write(site_index(site), ATOM_INDEX, g);
    }
    Ok(h)
}

/// Complex symmetric Hamiltonian of an open lattice whose end sites carry the
/// outgoing-wave self-energy `-xi e^{ik}`.
pub fn outgoing_wave_hamiltonian(params: &ModelParams, lattice: &Lattice) -> Result<Mat<c64>> {
    let Boundary::OutgoingWave { k } = lattice.boundary else {
        return Err(Error::UnsupportedBoundary("expected an outgoing-wave lattice"));
    };
    let open = Lattice {
        boundary: Boundary::Open,
        ..*lattice
    };
    let real = build_real_space_hamiltonian(params, &open)?;
    let mut h = Mat::<c64>::from_fn(real.nrows(), real.ncols(), |i, j| c64::new(real.read(i, j), 0.0));
    let sigma = -params.xi * Complex64::from_polar(1.0, k);
    for site in [0, lattice.n_sites - 1] {
        let idx = site_index(site);
        let d = h.read(idx, idx);
        h.write(idx, idx, c64::new(d.re + sigma.re, d.im + sigma.im));
    }
    Ok(h)
}
