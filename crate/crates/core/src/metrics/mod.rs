//! Diagnostics shared by the classical and quantum pictures: purity,
//! fidelities, θ-harmonic weights, entropies, decoherence time and the
//! Loschmidt echo quantities.

mod echo;
mod series;
mod spectrum;

pub use echo::{allegiance, echo_operator, perturbed_floquet, transition_fidelity};
pub use series::MetricSeries;
pub use spectrum::HarmonicSpectrum;

use alloc::vec;

use crate::numerics::hermitian_eigenvalues;
use crate::quantum::{FockDensityMatrix, HERMITICITY_TOLERANCE};
use crate::{Error, Result};

/// Eigenvalues above `−CLAMP_TOLERANCE` are clamped to zero in entropies.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Purity `Tr ρ²`.
pub fn purity(rho: &FockDensityMatrix) -> f64 {
    rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// θ-harmonic weights `W_m = (2 − δ_{m0}) Σ_n |⟨n+m|ρ|n⟩|² / Tr ρ²`.
pub fn harmonic_weights(rho: &FockDensityMatrix) -> Result<HarmonicSpectrum> {
    let n = rho.dim();
    let mut raw = vec![0.0; n];
    let m = rho.matrix();
    for i in 0..n {
        let row = m.row(i);
        for (j, z) in row.iter().enumerate().take(i + 1) {
            raw[i - j] += z.norm_sqr();
        }
    }
    for w in raw.iter_mut().skip(1) {
        *w *= 2.0;
    }
    HarmonicSpectrum::from_raw(raw)
}

/// Response to a Gaussian random rotation of width `σ`:
/// `F(σ) = Σ_m e^{−σ²m²/2} W_m`.
pub fn fidelity_from_spectrum(spectrum: &HarmonicSpectrum, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    spectrum
        .weights()
        .iter()
        .enumerate()
        .map(|(m, w)| {
            let m = m as f64;
            libm::exp(-0.5 * s2 * m * m) * w
        })
        .sum()
}

/// Second moment `⟨m²⟩ = Σ m² W_m`.
pub fn mean_m2(spectrum: &HarmonicSpectrum) -> f64 {
    spectrum
        .weights()
        .iter()
        .enumerate()
        .map(|(m, w)| (m * m) as f64 * w)
        .sum()
}

/// Mean number of harmonics `⟨|m|⟩ = √⟨m²⟩`.
pub fn mean_abs_m(spectrum: &HarmonicSpectrum) -> f64 {
    libm::sqrt(mean_m2(spectrum))
}

/// Peres fidelity `Tr[ρ_a ρ_b] / Tr[ρ_a²]`.
pub fn peres_fidelity_general(rho_a: &FockDensityMatrix, rho_b: &FockDensityMatrix) -> Result<f64> {
    if rho_a.dim() != rho_b.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_a.dim(),
            found: rho_b.dim(),
        });
    }
    let p = purity(rho_a);
    if !(p > 0.0) {
        return Err(Error::param("rho_a", "purity must be positive"));
    }
    Ok(rho_a.matrix().trace_product(rho_b.matrix()).re / p)
}

/// `F(σ;t) = Tr[ρ(t) ρ_av(σ;t)] / Tr ρ(t)²` along two aligned trajectories.
pub fn averaged_noise_fidelity(
    clean: &[FockDensityMatrix],
    averaged: &[FockDensityMatrix],
) -> Result<MetricSeries> {
    if clean.len() != averaged.len() {
        return Err(Error::LengthMismatch {
            left: clean.len(),
            right: averaged.len(),
        });
    }
    let mut series = MetricSeries::new("averaged_noise_fidelity");
    for (t, (a, b)) in clean.iter().zip(averaged).enumerate() {
        series.push(t as u64, peres_fidelity_general(a, b)?);
    }
    Ok(series)
}

/// Shannon entropy `−Σ W_m ln W_m` of a harmonic spectrum.
pub fn shannon_entropy(spectrum: &HarmonicSpectrum) -> f64 {
    -spectrum
        .weights()
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * libm::log(w))
        .sum::<f64>()
}

/// Von Neumann entropy `−Σ λ ln λ` over the eigenvalues of `ρ`.
///
/// Eigenvalues in `[−1e-9, 0)` are clamped to zero; lower ones are a
/// positivity violation.
pub fn von_neumann_entropy(rho: &FockDensityMatrix) -> Result<f64> {
    let values = hermitian_eigenvalues(rho.matrix(), HERMITICITY_TOLERANCE)?;
    let mut s = 0.0;
    for &l in &values {
        if l < -CLAMP_TOLERANCE {
            return Err(Error::NotPositive { eigenvalue: l });
        }
        let l = l.clamp(0.0, 1.0);
        if l > 0.0 {
            s -= l * libm::log(l);
        }
    }
    Ok(s)
}

/// Order-of-magnitude decoherence time `√(ħ/(σ² D))`; infinite for `σ = 0`.
pub fn decoherence_time(sigma: f64, hbar: f64, diffusion: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::param("sigma", "must be non-negative"));
    }
    if !(hbar > 0.0) {
        return Err(Error::param("hbar", "must be positive"));
    }
    if !(diffusion > 0.0) {
        return Err(Error::param("diffusion", "must be positive"));
    }
    if sigma == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(libm::sqrt(hbar / (sigma * sigma * diffusion)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hermitian_eigensystem, ComplexMatrix, RandomStream};
    use crate::quantum::{build_floquet, dephase, noisy_step, unitary_step, FloquetSpec};
    use alloc::vec;
    use alloc::vec::Vec;
    use core::f64::consts::{LN_2, PI};
    use num_complex::Complex64;

    fn random_state(n: usize, rank: usize, seed: u64) -> FockDensityMatrix {
        let mut s = RandomStream::new(seed, 0);
        let mut rho = ComplexMatrix::zeros(n);
        for _ in 0..rank {
            let v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(s.gaussian(), s.gaussian()))
                .collect();
            let p = s.uniform() + 0.1;
            for i in 0..n {
                for j in 0..n {
                    rho[(i, j)] += v[i] * v[j].conj() * p;
                }
            }
        }
        let tr = rho.trace().re;
        rho.as_mut_slice().iter_mut().for_each(|z| *z /= tr);
        rho.hermitize();
        FockDensityMatrix::new(rho).unwrap()
    }

    /// `∫dξ N(ξ;σ) e^{−iξn̂} ρ e^{iξn̂}` by trapezoidal quadrature over ±12σ.
    fn rotation_average(rho: &FockDensityMatrix, sigma: f64) -> FockDensityMatrix {
        let n = rho.dim();
        let nodes = 4001;
        let h = 24.0 * sigma / (nodes - 1) as f64;
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..nodes {
            let xi = -12.0 * sigma + k as f64 * h;
            let g =
                libm::exp(-0.5 * xi * xi / (sigma * sigma)) / (sigma * libm::sqrt(2.0 * PI)) * h;
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += rho.get(i, j) * Complex64::cis(-xi * (i as f64 - j as f64)) * g;
                }
            }
        }
        out.hermitize();
        FockDensityMatrix::from_matrix_unchecked(out)
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&FockDensityMatrix::fock(3, 8).unwrap()) - 1.0).abs() < 1e-15);
        let mixed = FockDensityMatrix::diagonal(&[0.125; 8]).unwrap();
        assert!((purity(&mixed) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn harmonic_weight_basics() {
        let diag = FockDensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        assert_eq!(harmonic_weights(&diag).unwrap().weight(0), 1.0);
        let w = harmonic_weights(&random_state(20, 3, 1)).unwrap();
        assert!((w.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // a two-level superposition splits evenly between m = 0 and m = 1
        let s = 0.5f64.sqrt();
        let psi = [Complex64::new(s, 0.0), Complex64::new(0.0, s)];
        let spec = harmonic_weights(&FockDensityMatrix::pure(&psi).unwrap()).unwrap();
        assert!((spec.weight(0) - 0.5).abs() < 1e-15 && (spec.weight(1) - 0.5).abs() < 1e-15);
        assert!((fidelity_from_spectrum(&spec, 0.0) - 1.0).abs() < 1e-15);
        assert!((fidelity_from_spectrum(&spec, 50.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spectrum_fidelity_matches_rotation_average() {
        for seed in 0..5 {
            let rho = random_state(12, 2, seed);
            let spec = harmonic_weights(&rho).unwrap();
            for sigma in [0.05, 0.4, 1.3] {
                let oracle = peres_fidelity_general(&rho, &rotation_average(&rho, sigma)).unwrap();
                assert!((fidelity_from_spectrum(&spec, sigma) - oracle).abs() < 1e-6);
                let masked = peres_fidelity_general(&rho, &dephase(&rho, sigma)).unwrap();
                assert!((masked - oracle).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn mean_m2_examples() {
        assert_eq!(mean_m2(&HarmonicSpectrum::isotropic()), 0.0);
        let one = HarmonicSpectrum::from_raw(vec![0.0, 1.0]).unwrap();
        assert_eq!(mean_m2(&one), 1.0);
        assert_eq!(mean_abs_m(&one), 1.0);
        let spec = harmonic_weights(&random_state(16, 2, 3)).unwrap();
        let h = 1e-3;
        let fd =
            -(fidelity_from_spectrum(&spec, h) - 2.0 + fidelity_from_spectrum(&spec, -h)) / (h * h);
        assert!((fd / mean_m2(&spec) - 1.0).abs() < 1e-4);
        let mut last = 1.0;
        for k in 1..50 {
            let f = fidelity_from_spectrum(&spec, 0.05 * k as f64);
            assert!(f <= last && f > 0.0);
            last = f;
        }
    }

    #[test]
    fn peres_fidelity_oracles() {
        let rho = random_state(16, 4, 4);
        assert!((peres_fidelity_general(&rho, &rho).unwrap() - 1.0).abs() < 1e-14);
        let a = FockDensityMatrix::fock(0, 4).unwrap();
        let b = FockDensityMatrix::fock(2, 4).unwrap();
        assert_eq!(peres_fidelity_general(&a, &b).unwrap(), 0.0);
        let other = random_state(16, 3, 5);
        let ea = hermitian_eigensystem(rho.matrix()).unwrap();
        let eb = hermitian_eigensystem(other.matrix()).unwrap();
        let mut acc = 0.0;
        for k in 0..16 {
            for l in 0..16 {
                let overlap: Complex64 = (0..16)
                    .map(|n| ea.eigenvectors[(n, k)].conj() * eb.eigenvectors[(n, l)])
                    .sum();
                acc += ea.eigenvalues[k] * eb.eigenvalues[l] * overlap.norm_sqr();
            }
        }
        let p: f64 = ea.eigenvalues.iter().map(|x| x * x).sum();
        assert!((peres_fidelity_general(&rho, &other).unwrap() - acc / p).abs() < 1e-8);
    }

    #[test]
    fn averaged_noise_fidelity_properties() {
        let spec = FloquetSpec::new(0.5, 1.5, 1.0, 32).unwrap();
        let u = build_floquet(&spec).unwrap();
        let rho0 = random_state(32, 1, 6);
        let steps = 4;
        let trajectory = |sigma: f64| {
            let mut r = vec![rho0.clone()];
            for _ in 0..steps {
                let next = crate::quantum::averaged_step(r.last().unwrap(), &u, sigma);
                r.push(next);
            }
            r
        };
        let clean = trajectory(0.0);
        let unit = averaged_noise_fidelity(&clean, &clean).unwrap();
        assert!(unit.values().iter().all(|f| (f - 1.0).abs() < 1e-12));
        let mut last = unit.values().to_vec();
        for sigma in [0.05, 0.2, 0.6] {
            let f = averaged_noise_fidelity(&clean, &trajectory(sigma)).unwrap();
            for (a, b) in f.values().iter().zip(&last) {
                assert!(*a <= b + 1e-9);
            }
            last = f.values().to_vec();
        }
        assert!(averaged_noise_fidelity(&clean, &clean[..2]).is_err());

        // Monte Carlo over noise histories
        let sigma = 0.2;
        let histories = 1000;
        let mut s = RandomStream::new(8, 0);
        let mut samples = Vec::with_capacity(histories);
        for _ in 0..histories {
            let mut r = rho0.clone();
            for _ in 0..steps {
                r = noisy_step(&r, &u, sigma * s.gaussian());
            }
            samples.push(peres_fidelity_general(&clean[steps], &r).unwrap());
        }
        let mean = samples.iter().sum::<f64>() / histories as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (histories - 1) as f64;
        let se = libm::sqrt(var / histories as f64);
        let exact = averaged_noise_fidelity(&clean, &trajectory(sigma))
            .unwrap()
            .values()[steps];
        assert!((mean - exact).abs() < 3.0 * se, "{mean} {exact} {se}");
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&HarmonicSpectrum::isotropic()), 0.0);
        let uniform = HarmonicSpectrum::from_raw(vec![1.0; 7]).unwrap();
        assert!((shannon_entropy(&uniform) - libm::log(7.0)).abs() < 1e-14);
        // folded two-sided exponential, W_m ∝ (2 − δ_m0) r^m, tuned to ⟨|m|⟩ = 50
        let build = |r: f64| {
            let raw: Vec<f64> = (0..4000)
                .map(|m| {
                    if m == 0 {
                        1.0
                    } else {
                        2.0 * libm::pow(r, m as f64)
                    }
                })
                .collect();
            HarmonicSpectrum::from_raw(raw).unwrap()
        };
        let (mut lo, mut hi) = (0.5, 0.9999);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mean_abs_m(&build(mid)) < 50.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let spec = build(lo);
        let expected = libm::log(50.0) + 1.0 - 0.5 * LN_2;
        assert!((shannon_entropy(&spec) / expected - 1.0).abs() < 0.05);
    }

    #[test]
    fn von_neumann_examples() {
        assert!(
            von_neumann_entropy(&FockDensityMatrix::fock(1, 6).unwrap())
                .unwrap()
                .abs()
                < 1e-12
        );
        let mixed = FockDensityMatrix::diagonal(&[0.25; 4]).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - libm::log(4.0)).abs() < 1e-12);
        let bad =
            ComplexMatrix::from_diagonal(&[Complex64::new(1.1, 0.0), Complex64::new(-0.1, 0.0)]);
        let bad = FockDensityMatrix::from_matrix_unchecked(bad);
        assert!(matches!(
            von_neumann_entropy(&bad),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn von_neumann_vanishes_only_for_pure_states() {
        for seed in 0..10 {
            let rank = 1 + (seed as usize % 3);
            let rho = random_state(10, rank, 20 + seed);
            let s = von_neumann_entropy(&rho).unwrap();
            let pure = (purity(&rho) - 1.0).abs() < 1e-8;
            assert_eq!(pure, s < 1e-8, "rank {rank}: S={s}");
            assert!(s <= libm::log(10.0) + 1e-12);
        }
    }

    #[test]
    fn entropy_invariant_under_unitary_step() {
        let u = build_floquet(&FloquetSpec::new(0.5, 2.0, 1.0, 40).unwrap()).unwrap();
        let rho = random_state(40, 5, 9);
        let a = von_neumann_entropy(&rho).unwrap();
        let b = von_neumann_entropy(&unitary_step(&rho, &u)).unwrap();
        assert!((a - b).abs() < 1e-7);
    }

    #[test]
    fn decoherence_time_examples() {
        assert!((decoherence_time(1.0, 1.0, 4.0).unwrap() - 0.5).abs() < 1e-15);
        let a = decoherence_time(0.1, 1.0, 4.0).unwrap();
        assert!((a / decoherence_time(0.2, 1.0, 4.0).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(decoherence_time(0.0, 1.0, 4.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn echo_operator_properties() {
        let spec = FloquetSpec::new(0.5, 2.0, 1.0, 48).unwrap();
        assert!(
            echo_operator(&spec, 0.0, 5)
                .unwrap()
                .distance_from_identity()
                < 1e-10
        );
        let f = echo_operator(&spec, 0.3, 4).unwrap();
        assert!(f.adjoint().matmul(&f).distance_from_identity() < 1e-9);
        let u = build_floquet(&spec).unwrap();
        let direct = u.adjoint().matmul(&perturbed_floquet(&spec, 0.3).unwrap());
        assert!(echo_operator(&spec, 0.3, 1).unwrap().max_abs_diff(&direct) < 1e-14);

        let rho = random_state(48, 3, 10);
        let id = ComplexMatrix::identity(48);
        assert!((allegiance(&rho, &id).unwrap() - 1.0).abs() < 1e-12);
        assert!((transition_fidelity(&rho, &id).unwrap() - 1.0).abs() < 1e-12);
        let a = allegiance(&rho, &f).unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&a));

        let mut s = RandomStream::new(11, 0);
        let mut psi: Vec<Complex64> = (0..48)
            .map(|_| Complex64::new(s.gaussian(), s.gaussian()))
            .collect();
        let norm = libm::sqrt(psi.iter().map(|z| z.norm_sqr()).sum::<f64>());
        psi.iter_mut().for_each(|z| *z /= norm);
        let pure = FockDensityMatrix::pure(&psi).unwrap();
        let fpsi = f.mul_vec(&psi);
        let amp: Complex64 = psi.iter().zip(&fpsi).map(|(a, b)| a.conj() * b).sum();
        assert!((allegiance(&pure, &f).unwrap() - amp.norm_sqr()).abs() < 1e-12);
        assert!((transition_fidelity(&pure, &f).unwrap() - amp.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn series_requires_increasing_times() {
        assert!(MetricSeries::from_parts("x", vec![0, 2, 1], vec![0.0; 3]).is_err());
        assert!(MetricSeries::from_parts("x", vec![0, 1], vec![0.0; 3]).is_err());
        let s = MetricSeries::from_parts("x", vec![0, 2, 5], vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.value_at(2), Some(2.0));
        assert_eq!(s.window(1, 5), (vec![2.0, 5.0], vec![2.0, 3.0]));
    }
}
