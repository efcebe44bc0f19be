//! Least-squares helpers for rate extraction.

/// Straight-line least-squares fit `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    /// Fitted slope.
    pub slope: f64,
    /// Fitted intercept.
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

impl LinearFit {
    /// Fitted value at `x`.
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares on paired samples; `None` for fewer than two points
/// or degenerate abscissae.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Fits `ln y` against `x`; points with `y ≤ 0` are skipped.
pub fn log_linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let (xs, ys): (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(_, &b)| b > 0.0 && b.is_finite())
        .map(|(&a, &b)| (a, libm::log(b)))
        .unzip();
    linear_fit(&xs, &ys)
}
