#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for [`integrate`]. An interval is accepted once the summed
/// error estimate drops below `max(abs_tol, rel_tol * |estimate|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections of any single subinterval.
    pub max_depth: usize,
    /// Half-width of the window replaced by a series limit around a
    /// removable singularity.
    pub singular_window: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_depth: 40,
            singular_window: 1e-4,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) {
            return Err(Error::InvalidParams("quadrature tolerances must be positive".into()));
        }
        if self.max_depth < 10 {
            return Err(Error::InvalidParams(format!(
                "quadrature max_depth must be at least 10, got {}",
                self.max_depth
            )));
        }
        if !(self.singular_window > 0.0) {
            return Err(Error::InvalidParams("singular_window must be positive".into()));
        }
        Ok(())
    }
}

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule
// (odd-indexed abscissae).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 200_000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    estimate: f64,
    error: f64,
    depth: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, depth: usize) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let estimate = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    if !estimate.is_finite() || !error.is_finite() {
        return Err(Error::InvalidParams(format!("integrand is not finite on [{a}, {b}]")));
    }
    Ok(Segment {
        a,
        b,
        estimate,
        error,
        depth,
    })
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of `f` over `[a, b]`.
///
/// The endpoints themselves are never evaluated.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParams("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, spec).map(|v| -v);
    }

    let mut heap = BinaryHeap::new();
    heap.push(kronrod(&mut f, a, b, 0)?);
    loop {
        let (estimate, error) = heap
            .iter()
            .fold((0.0, 0.0), |(s, e), seg| (s + seg.estimate, e + seg.error));
        if error <= spec.abs_tol.max(spec.rel_tol * estimate.abs()) {
            return Ok(estimate);
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= spec.max_depth || heap.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureDepth {
                estimate,
                error_bound: error,
                max_depth: spec.max_depth,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod(&mut f, worst.a, mid, worst.depth + 1)?);
        heap.push(kronrod(&mut f, mid, worst.b, worst.depth + 1)?);
    }
}

/// Like [`integrate`], but the integrand is never evaluated within
/// `spec.singular_window` of the listed removable points. Each window is
/// replaced by a second-order series estimate built from values at its edges.
pub fn integrate_removable<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    removable: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if a > b {
        return integrate_removable(f, b, a, removable, spec).map(|v| -v);
    }
    let delta = spec.singular_window;
    let mut points: Vec<f64> = removable.iter().copied().filter(|p| *p >= a && *p <= b).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut total = 0.0;
    let mut cursor = a;
    for &p in &points {
        let lo = (p - delta).max(a);
        let hi = (p + delta).min(b);
        if lo > cursor {
            total += integrate(&mut f, cursor, lo, spec)?;
        }
        let width = hi - lo;
        total += if lo == p - delta && hi == p + delta {
            // trapezoid across a symmetric window
            delta * (f(lo) + f(hi))
        } else if lo == a {
            // midpoint value extrapolated linearly from the right
            width * (1.5 * f(hi) - 0.5 * f(hi + width))
        } else {
            width * (1.5 * f(lo) - 0.5 * f(lo - width))
        };
        cursor = cursor.max(hi);
    }
    if cursor < b {
        total += integrate(&mut f, cursor, b, spec)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|i| f(a + h * i as f64)).sum();
        h * (0.5 * (f(a) + f(b)) + inner)
    }

    #[test]
    fn exact_for_polynomials() {
        let spec = QuadratureSpec::default();
        let v = integrate(|x| x.powi(9) - 3.0 * x * x + 1.0, -1.0, 2.0, &spec).unwrap();
        let exact = (2f64.powi(10) - 1.0) / 10.0 - (8.0 + 1.0) + 3.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn lattice_green_function_closed_form() {
        // \int_{-pi}^{pi} dk / (D + 2 cos k) = 2 pi / sqrt(D^2 - 4)
        let v = integrate(|k| 1.0 / (3.0 + 2.0 * k.cos()), -PI, PI, &QuadratureSpec::default()).unwrap();
        assert!((v - 2.0 * PI / 5f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn matches_dense_trapezoid() {
        // periodic integrands: the trapezoid rule converges spectrally
        let f = |k: f64| (1.0 + (4.0 * k).cos()) / (3.0 + 2.0 * k.cos());
        let oracle = trapezoid(f, -PI, PI, 1_000_000);
        let v = integrate(f, -PI, PI, &QuadratureSpec::default()).unwrap();
        assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn removable_singularity_window() {
        let g = |k: f64| 1.0 / (2.5 + k.cos());
        let raw = |k: f64| (3.0 * k).sin().powi(2) / (0.5 * k).sin().powi(2) * g(k);
        // |sum_{j=0}^{5} e^{ikj}|^2 = sin^2(3k)/sin^2(k/2), finite everywhere
        let kernel = |k: f64| {
            let (c, s) = (0..6).fold((0.0, 0.0), |(c, s), j| {
                let x = k * j as f64;
                (c + x.cos(), s + x.sin())
            });
            (c * c + s * s) * g(k)
        };
        let oracle = trapezoid(kernel, 0.0, PI, 1_000_000);
        let spec = QuadratureSpec::default();
        let windowed = integrate_removable(raw, 0.0, PI, &[0.0], &spec).unwrap();
        let direct = integrate(kernel, 0.0, PI, &spec).unwrap();
        assert!((windowed - oracle).abs() < 1e-8, "{windowed} vs {oracle}");
        assert!((direct - oracle).abs() < 1e-8, "{direct} vs {oracle}");

        let mid = integrate_removable(|x: f64| x.sin() / x, -1.0, 2.0, &[0.0], &spec).unwrap();
        let oracle = trapezoid(|x: f64| if x == 0.0 { 1.0 } else { x.sin() / x }, -1.0, 2.0, 1_000_000);
        assert!((mid - oracle).abs() < 1e-8);
    }

    #[test]
    fn even_integrand_halves() {
        let spec = QuadratureSpec::default();
        let f = |k: f64| (1.0 + (5.0 * k).cos()) / (2.3 - 2.0 * k.cos());
        let full = integrate(f, -PI, PI, &spec).unwrap();
        let half = integrate(f, 0.0, PI, &spec).unwrap();
        assert!((full - 2.0 * half).abs() < 1e-10);
    }

    #[test]
    fn sharp_endpoint_peak() {
        // \int_0^pi dk / (eps + 4 sin^2(k/2)) = pi / sqrt(eps (eps + 4))
        let eps = 1e-12;
        let v = integrate(|k| 1.0 / (eps + 4.0 * (0.5 * k).sin().powi(2)), 0.0, PI, &QuadratureSpec::default())
            .unwrap();
        let exact = PI / (eps * (eps + 4.0)).sqrt();
        assert!(((v - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn depth_exhaustion_reports_estimate() {
        let spec = QuadratureSpec {
            max_depth: 10,
            ..Default::default()
        };
        let err = integrate(|x: f64| 1.0 / x, 0.0, 1.0, &spec).unwrap_err();
        match err {
            Error::QuadratureDepth {
                estimate,
                error_bound,
                ..
            } => {
                assert!(estimate > 0.0 && error_bound > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(integrate(|_| f64::NAN, 0.0, 1.0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn reversed_limits() {
        let spec = QuadratureSpec::default();
        let a = integrate(|x| x.exp(), 0.0, 1.0, &spec).unwrap();
        let b = integrate(|x| x.exp(), 1.0, 0.0, &spec).unwrap();
        assert_eq!(a, -b);
    }
}
