use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootSpec {
    fn default() -> Self {
        Self {
            x_tol: 1e-12,
            f_tol: 1e-10,
            max_iter: 200,
        }
    }
}

impl RootSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_tol > 0.0) || !(self.f_tol > 0.0) {
            return Err(Error::InvalidParams("root tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Brent's method on a bracket with `f(lo) * f(hi) < 0`.
///
/// `f` may fail, in which case the error is returned unchanged. A root lying
/// exactly on either end of the bracket is accepted.
pub fn find_root_bracketed<F>(mut f: F, lo: f64, hi: f64, spec: &RootSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..spec.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * spec.x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb.abs() < spec.f_tol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::RootNotConverged {
        best: b,
        iterations: spec.max_iter,
    })
}

/// Probes `start * ratio^m` until the sign of `f` differs from its sign at
/// `start`, never going past `ceiling` (which is itself the last probe).
/// Returns the bracketing pair of probes, or `None` when the sign never
/// changes.
pub fn geometric_ladder<F>(mut f: F, start: f64, ceiling: f64, ratio: f64) -> Result<Option<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(start > 0.0) || !(ratio > 1.0) || !(ceiling >= start) {
        return Err(Error::InvalidParams(format!(
            "bad ladder start={start} ceiling={ceiling} ratio={ratio}"
        )));
    }
    let sign0 = f(start)?.signum();
    let mut prev = start;
    loop {
        let next = (prev * ratio).min(ceiling);
        if f(next)?.signum() != sign0 {
            return Ok(Some((prev, next)));
        }
        if next >= ceiling {
            return Ok(None);
        }
        prev = next;
    }
}
