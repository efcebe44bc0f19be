use alloc::vec::Vec;

use super::ensemble::{sample_isotropic, ClassicalEnsemble};
use super::map::{map_jacobian, map_step, MapParams, PhasePoint};
use crate::metrics::MetricSeries;
use crate::numerics::RandomStream;
use crate::{Error, Result};

type Mat2 = [[f64; 2]; 2];

#[inline]
fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// `⟨m²⟩_t` of an evolved isotropic Gaussian density, from tangent dynamics.
///
/// For `W_0 ∝ e^{−I/s}` transported by the area-preserving map `Φ_t`,
/// `⟨m²⟩ = ∫(∂_θ W_t)² / ∫W_t² = (8/s²) E_{y∼W_0}[(y·w)² e^{−I(y)/s}]`
/// with `w = (DΦ_t(y))^{−1} v(Φ_t y)` and `v` the rotation generator. This
/// resolves harmonic counts far beyond any histogram grid.
pub fn tangent_m2_series(
    params: MapParams,
    scale: f64,
    n: usize,
    t_max: u64,
    stream: &mut RandomStream,
) -> Result<MetricSeries> {
    let e = sample_isotropic(scale, n, params, stream)?;
    tangent_m2_from(&e, scale, t_max)
}

/// [`tangent_m2_series`] for an ensemble already sampled from `W_0` with mean action `scale`.
pub fn tangent_m2_from(e: &ClassicalEnsemble, scale: f64, t_max: u64) -> Result<MetricSeries> {
    if !(scale > 0.0) {
        return Err(Error::param("scale", "must be positive"));
    }
    let params = e.params;
    let mut points: Vec<PhasePoint> = e.points.clone();
    let mut jac: Vec<Mat2> = alloc::vec![[[1.0, 0.0], [0.0, 1.0]]; points.len()];
    let weights: Vec<f64> = e
        .points
        .iter()
        .map(|p| libm::exp(-p.action() / scale))
        .collect();
    let mut series = MetricSeries::new("m2_tangent");
    series.push(0, 0.0);
    for t in 1..=t_max {
        let mut acc = 0.0;
        for k in 0..points.len() {
            let step_jac = map_jacobian(points[k], &params);
            jac[k] = mul(&step_jac, &jac[k]);
            points[k] = map_step(points[k], &params).map_err(|_| Error::Divergence { step: t })?;
            let z = points[k].alpha;
            let v = [z.im, -z.re];
            let j = &jac[k];
            // inverse of a unit-determinant matrix
            let w = [
                j[1][1] * v[0] - j[0][1] * v[1],
                -j[1][0] * v[0] + j[0][0] * v[1],
            ];
            let y = e.points[k].alpha;
            let proj = y.re * w[0] + y.im * w[1];
            acc += proj * proj * weights[k];
        }
        let m2 = 8.0 / (scale * scale) * acc / points.len() as f64;
        if !m2.is_finite() {
            return Err(Error::Overflow {
                context: "tangent harmonic estimator",
            });
        }
        series.push(t, m2);
    }
    Ok(series)
}
