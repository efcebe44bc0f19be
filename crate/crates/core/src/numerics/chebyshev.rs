use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// `J_0(z), …, J_{n−1}(z)` for `z ≥ 0` by Miller's backward recurrence,
/// normalized with `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j_sequence(z: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    if z == 0.0 {
        let mut out = vec![0.0; n];
        out[0] = 1.0;
        return out;
    }
    let start = n.max(z as usize) + 40 + (10.0 * libm::cbrt(z)) as usize;
    let start = start + (start & 1);
    let mut vals = vec![0.0; start + 1];
    let (mut above, mut here) = (0.0f64, 1e-300f64);
    vals[start] = here;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / z * here - above;
        above = here;
        here = below;
        vals[k - 1] = here;
        if here.abs() > 1e250 {
            for v in &mut vals[k - 1..] {
                *v *= 1e-250;
            }
            above *= 1e-250;
            here *= 1e-250;
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(n);
    for v in &mut vals {
        *v /= norm;
    }
    vals
}

/// `S exp(i c T) S†` for a real symmetric tridiagonal `T` and diagonal gauge
/// `S = diag(e^{iφ n})`, applied to vectors through a Chebyshev expansion.
#[derive(Debug, Clone)]
pub struct ExpPropagator {
    diag: Vec<f64>,
    off: Vec<f64>,
    coefficients: Vec<Complex64>,
    global_phase: Complex64,
    gauge: Vec<Complex64>,
}

impl ExpPropagator {
    /// Prepares `exp(i c T)` with `T` given by `diag` and `off`, conjugated by
    /// the gauge `diag(e^{iφ n})`.
    pub fn new(c: f64, diag: Vec<f64>, off: Vec<f64>, phi: f64) -> Result<Self> {
        let n = diag.len();
        if off.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n.saturating_sub(1),
                found: off.len(),
            });
        }
        if !c.is_finite() {
            return Err(Error::param("c", "must be finite"));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { off[i].abs() } else { 0.0 };
            lo = lo.min(diag[i] - left - right);
            hi = hi.max(diag[i] + left + right);
        }
        let center = 0.5 * (hi + lo);
        let half = (0.5 * (hi - lo)).max(f64::MIN_POSITIVE);
        let z = (c * half).abs();
        let count = (z + 12.0 * libm::cbrt(z) + 30.0) as usize;
        let bessel = bessel_j_sequence(z, count);
        let sign = if c < 0.0 { -1.0 } else { 1.0 };
        let mut coefficients: Vec<Complex64> = bessel
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                let eps = if k == 0 { 1.0 } else { 2.0 };
                let ik = match k % 4 {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, sign),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -sign),
                };
                ik * (eps * j)
            })
            .collect();
        while coefficients.len() > 1 && coefficients.last().map_or(false, |z| z.norm() < 1e-18) {
            coefficients.pop();
        }
        let diag = diag.iter().map(|d| (d - center) / half).collect();
        let off = off.iter().map(|o| o / half).collect();
        let gauge = if phi == 0.0 {
            Vec::new()
        } else {
            (0..n).map(|k| Complex64::cis(phi * k as f64)).collect()
        };
        Ok(Self {
            diag,
            off,
            coefficients,
            global_phase: Complex64::cis(c * center),
            gauge,
        })
    }

    /// Dimension of the vectors the propagator acts on.
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of Chebyshev terms in the expansion.
    pub fn terms(&self) -> usize {
        self.coefficients.len()
    }

    #[inline]
    fn apply_scaled(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = x.len();
        let d = &self.diag;
        let o = &self.off;
        if n == 1 {
            y[0] = x[0] * d[0];
            return;
        }
        y[0] = x[0] * d[0] + x[1] * o[0];
        for i in 1..n - 1 {
            y[i] = x[i] * d[i] + x[i - 1] * o[i - 1] + x[i + 1] * o[i];
        }
        y[n - 1] = x[n - 1] * d[n - 1] + x[n - 2] * o[n - 2];
    }

    /// Applies the operator to `v` in place.
    ///
    /// # Panics
    /// If `v.len()` differs from [`ExpPropagator::dim`].
    pub fn apply(&self, v: &mut [Complex64]) {
        let n = self.dim();
        assert_eq!(v.len(), n, "dimension mismatch");
        if !self.gauge.is_empty() {
            for (x, g) in v.iter_mut().zip(&self.gauge) {
                *x *= g.conj();
            }
        }
        let mut prev: Vec<Complex64> = v.to_vec();
        let mut cur = vec![Complex64::new(0.0, 0.0); n];
        let mut next = vec![Complex64::new(0.0, 0.0); n];
        let c0 = self.coefficients[0];
        for x in v.iter_mut() {
            *x *= c0;
        }
        if self.coefficients.len() > 1 {
            self.apply_scaled(&prev, &mut cur);
            let c1 = self.coefficients[1];
            for (x, w) in v.iter_mut().zip(&cur) {
                *x += c1 * w;
            }
            for &ck in &self.coefficients[2..] {
                self.apply_scaled(&cur, &mut next);
                for ((nx, p), x) in next.iter_mut().zip(&prev).zip(v.iter_mut()) {
                    *nx = *nx * 2.0 - p;
                    *x += ck * *nx;
                }
                core::mem::swap(&mut prev, &mut cur);
                core::mem::swap(&mut cur, &mut next);
            }
        }
        let gp = self.global_phase;
        if self.gauge.is_empty() {
            for x in v.iter_mut() {
                *x *= gp;
            }
        } else {
            for (x, g) in v.iter_mut().zip(&self.gauge) {
                *x *= gp * g;
            }
        }
    }
}
