use alloc::vec;
use alloc::vec::Vec;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par};
use num_complex::Complex64;

use super::floquet::FloquetPropagator;
use super::spec::FloquetSpec;
use super::state::{geometric_occupations, FockDensityMatrix, TRACE_TOLERANCE};
use crate::metrics::HarmonicSpectrum;
use crate::numerics::ComplexMatrix;
use crate::{Error, Result};

/// Density matrix held as a weighted ensemble of state vectors,
/// `ρ = Σ_k p_k |ψ_k⟩⟨ψ_k|`.
///
/// Evolution costs one vector propagation per component instead of a dense
/// matrix conjugation, which keeps large truncations within reach when the
/// mixture has few components.
#[derive(Debug, Clone, PartialEq)]
pub struct PureMixture {
    dim: usize,
    weights: Vec<f64>,
    /// Column-major `dim × K`: component `k` occupies `data[k*dim..(k+1)*dim]`.
    data: Vec<Complex64>,
}

impl PureMixture {
    /// Mixture of the given normalized vectors with weights summing to one.
    pub fn new(weights: Vec<f64>, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if weights.is_empty() || weights.len() != vectors.len() {
            return Err(Error::LengthMismatch {
                left: weights.len(),
                right: vectors.len(),
            });
        }
        if weights.iter().any(|&w| !(w >= 0.0))
            || (weights.iter().sum::<f64>() - 1.0).abs() > TRACE_TOLERANCE
        {
            return Err(Error::param(
                "weights",
                "must be non-negative and sum to one",
            ));
        }
        let dim = vectors[0].len();
        let mut data = Vec::with_capacity(dim * vectors.len());
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > TRACE_TOLERANCE {
                return Err(Error::param("vectors", "must be normalized"));
            }
            data.extend_from_slice(v);
        }
        Ok(Self { dim, weights, data })
    }

    /// Single pure state.
    pub fn pure(psi: Vec<Complex64>) -> Result<Self> {
        Self::new(vec![1.0], vec![psi])
    }

    /// Diagonal mixture `Σ_n w_n |n⟩⟨n|` keeping the smallest set of leading
    /// levels whose mass reaches `1 − discard`; returns the discarded mass.
    pub fn fock_mixture(occupations: &[f64], dim: usize, discard: f64) -> Result<(Self, f64)> {
        if occupations.is_empty() || occupations.len() > dim {
            return Err(Error::param(
                "occupations",
                "must be non-empty and fit the truncation",
            ));
        }
        let total: f64 = occupations.iter().sum();
        let mut kept = 0usize;
        let mut mass = 0.0;
        while kept < occupations.len() && mass < total * (1.0 - discard) {
            mass += occupations[kept];
            kept += 1;
        }
        let weights: Vec<f64> = occupations[..kept].iter().map(|w| w / mass).collect();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * kept];
        for k in 0..kept {
            data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        Ok((Self { dim, weights, data }, 1.0 - mass / total))
    }

    /// Isotropic initial state of mean action `Δ + ħ/2` as a Fock mixture;
    /// components carrying less than `discard` total weight are dropped.
    pub fn initial(delta: f64, spec: &FloquetSpec, discard: f64) -> Result<(Self, f64)> {
        let (w, tail) = geometric_occupations(delta, spec.hbar, spec.n_max)?;
        let (mix, dropped) = Self::fock_mixture(&w, spec.n_max, discard)?;
        Ok((mix, dropped + tail))
    }

    /// Vector dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of components.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// `true` when the mixture has no components (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Component weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Component `k`.
    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    /// Embeds every component in a larger truncation by zero padding.
    pub fn pad_to(&mut self, dim: usize) -> Result<()> {
        if dim < self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * self.len()];
        for (k, v) in self.data.chunks(self.dim).enumerate() {
            data[k * dim..k * dim + self.dim].copy_from_slice(v);
        }
        self.data = data;
        self.dim = dim;
        Ok(())
    }

    fn view(&self) -> MatRef<'_, Complex64> {
        MatRef::from_column_major_slice(&self.data, self.dim, self.len())
    }

    /// One period `ψ_k ← e^{−iξn̂} U ψ_k` for every component.
    pub fn step(&mut self, u: &FloquetPropagator, xi: f64) -> Result<()> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                found: self.dim,
            });
        }
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.data
                .par_chunks_mut(self.dim)
                .for_each(|v| u.apply(v, xi));
        }
        #[cfg(not(feature = "parallel"))]
        for v in self.data.chunks_mut(self.dim) {
            u.apply(v, xi);
        }
        Ok(())
    }

    /// `K × K` matrix `⟨ψ_k|φ_l⟩` (row-major) against another mixture.
    pub fn overlaps(&self, other: &Self) -> Result<Vec<Complex64>> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let (k, l) = (self.len(), other.len());
        let mut out = Mat::<Complex64>::zeros(k, l);
        matmul(
            out.as_mut(),
            Accum::Replace,
            self.view().adjoint(),
            other.view(),
            Complex64::new(1.0, 0.0),
            Par::Seq,
        );
        Ok((0..k)
            .flat_map(|i| (0..l).map(move |j| (i, j)))
            .map(|(i, j)| out[(i, j)])
            .collect())
    }

    fn weighted_operator(&self, f: impl Fn(usize) -> f64) -> Mat<Complex64> {
        let k = self.len();
        let scaled =
            Mat::<Complex64>::from_fn(self.dim, k, |n, c| self.data[c * self.dim + n] * f(n));
        let mut out = Mat::<Complex64>::zeros(k, k);
        matmul(
            out.as_mut(),
            Accum::Replace,
            self.view().adjoint(),
            scaled.as_ref(),
            Complex64::new(1.0, 0.0),
            Par::Seq,
        );
        out
    }

    /// Purity `Tr ρ² = Σ_kl p_k p_l |⟨ψ_k|ψ_l⟩|²`.
    pub fn purity(&self) -> f64 {
        let g = self.weighted_operator(|_| 1.0);
        let p = &self.weights;
        let mut acc = 0.0;
        for a in 0..self.len() {
            for b in 0..self.len() {
                acc += p[a] * p[b] * g[(a, b)].norm_sqr();
            }
        }
        acc
    }

    /// Occupation probabilities `⟨n|ρ|n⟩`.
    pub fn occupation(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.dim];
        for (k, &p) in self.weights.iter().enumerate() {
            for (x, z) in w.iter_mut().zip(self.vector(k)) {
                *x += p * z.norm_sqr();
            }
        }
        w
    }

    /// Mean excitation number.
    pub fn mean_excitation(&self) -> f64 {
        self.occupation()
            .iter()
            .enumerate()
            .map(|(n, w)| n as f64 * w)
            .sum()
    }

    /// `⟨m²⟩ = Σ_{nn'} (n−n')² |ρ_{nn'}|² / Tr ρ²`, the second moment of the
    /// θ-harmonic weights, evaluated without forming `ρ`.
    pub fn mean_m2(&self) -> f64 {
        let g = self.weighted_operator(|_| 1.0);
        let a = self.weighted_operator(|n| n as f64);
        let b = self.weighted_operator(|n| (n * n) as f64);
        let p = &self.weights;
        let (mut purity, mut diag, mut cross) = (0.0, 0.0, 0.0);
        for k in 0..self.len() {
            for l in 0..self.len() {
                let w = p[k] * p[l];
                purity += w * g[(k, l)].norm_sqr();
                diag += w * (g[(k, l)] * b[(l, k)]).re;
                cross += w * a[(k, l)].norm_sqr();
            }
        }
        2.0 * (diag - cross) / purity
    }

    /// Dense density matrix.
    pub fn to_density(&self) -> FockDensityMatrix {
        let n = self.dim;
        let scaled =
            Mat::<Complex64>::from_fn(n, self.len(), |i, k| self.data[k * n + i] * self.weights[k]);
        let mut rho = ComplexMatrix::zeros(n);
        matmul(
            rho.view_mut(),
            Accum::Replace,
            scaled.as_ref(),
            self.view().adjoint(),
            Complex64::new(1.0, 0.0),
            Par::Seq,
        );
        rho.hermitize();
        FockDensityMatrix::from_matrix_unchecked(rho)
    }

    /// θ-harmonic weights; pure states use `Σ_n w_{n+m} w_n` directly.
    pub fn harmonic_weights(&self) -> Result<HarmonicSpectrum> {
        if self.len() == 1 {
            let w: Vec<f64> = self.vector(0).iter().map(|z| z.norm_sqr()).collect();
            return pure_harmonic_weights(&w);
        }
        crate::metrics::harmonic_weights(&self.to_density())
    }
}

/// θ-harmonic weights of a pure state from its occupations:
/// `W_m ∝ (2 − δ_{m0}) Σ_n w_{n+m} w_n`.
pub fn pure_harmonic_weights(w: &[f64]) -> Result<HarmonicSpectrum> {
    let n = w.len();
    let last = w.iter().rposition(|&x| x > 0.0).map_or(1, |i| i + 1);
    let first = w.iter().position(|&x| x > 0.0).unwrap_or(0);
    let span = last - first;
    let mut raw = vec![0.0; n];
    for m in 0..span {
        let s: f64 = (first..last - m).map(|k| w[k + m] * w[k]).sum();
        raw[m] = if m == 0 { s } else { 2.0 * s };
    }
    HarmonicSpectrum::from_raw(raw)
}

/// Allegiance `|Σ_k p_k M_kk|²` and transition fidelity
/// `Σ_kl p_k p_l |M_lk|² / Σ p_k²` from the overlaps `M_lk = ⟨l|f|k⟩` of an
/// echo started from orthonormal components.
pub fn echo_from_overlaps(weights: &[f64], m: &[Complex64]) -> Result<(f64, f64)> {
    let k = weights.len();
    if m.len() != k * k {
        return Err(Error::DimensionMismatch {
            expected: k * k,
            found: m.len(),
        });
    }
    let amp: Complex64 = (0..k).map(|i| m[i * k + i] * weights[i]).sum();
    let purity: f64 = weights.iter().map(|p| p * p).sum();
    let mut trans = 0.0;
    for l in 0..k {
        for c in 0..k {
            trans += weights[l] * weights[c] * m[l * k + c].norm_sqr();
        }
    }
    Ok((amp.norm_sqr(), trans / purity))
}
