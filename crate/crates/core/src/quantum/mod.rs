//! Quantum kicked oscillator in a truncated Fock basis: Floquet operator,
//! initial states, unitary, noisy and noise-averaged evolution.

mod channel;
mod evolve;
mod floquet;
mod mixture;
mod spec;
mod state;

pub use channel::{averaged_step, dephase, noisy_step, unitary_step, Conjugator};
pub use evolve::{evolve, EvolutionMode, NoiseSpec, TruncationPolicy};
pub use floquet::{build_floquet, FloquetOperator, FloquetPropagator};
pub use mixture::{echo_from_overlaps, pure_harmonic_weights, PureMixture};
pub use spec::FloquetSpec;
pub use state::{
    geometric_occupations, initial_mixed_state, occupation_distribution, truncation_check,
    truncation_check_weights, FockDensityMatrix, TruncationReport, HERMITICITY_TOLERANCE,
    PSD_TOLERANCE, RENORMALIZATION_LIMIT, TRACE_TOLERANCE, TRUNCATION_THRESHOLD,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{harmonic_weights, mean_m2, purity, von_neumann_entropy};
    use crate::numerics::{ComplexMatrix, RandomStream};
    use crate::Error;
    use alloc::vec;
    use alloc::vec::Vec;
    use num_complex::Complex64;

    fn spec(g0: f64, hbar: f64, n: usize) -> FloquetSpec {
        FloquetSpec::new(0.5, g0, hbar, n).unwrap()
    }

    fn random_state(n: usize, rank: usize, seed: u64) -> FockDensityMatrix {
        let mut s = RandomStream::new(seed, 0);
        let mut rho = ComplexMatrix::zeros(n);
        let mut total = 0.0;
        for _ in 0..rank {
            let v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(s.gaussian(), s.gaussian()))
                .collect();
            let p = s.uniform() + 0.1;
            total += p * v.iter().map(|z| z.norm_sqr()).sum::<f64>();
            for i in 0..n {
                for j in 0..n {
                    rho[(i, j)] += v[i] * v[j].conj() * p;
                }
            }
        }
        rho.as_mut_slice().iter_mut().for_each(|z| *z /= total);
        rho.hermitize();
        FockDensityMatrix::new(rho).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(FloquetSpec::new(0.5, 2.0, 0.0, 64).is_err());
        assert!(FloquetSpec::new(0.5, 2.0, 1.0, 8).is_err());
    }

    #[test]
    fn unkicked_floquet_is_diagonal_phase() {
        let s = spec(0.0, 0.7, 32);
        let u = build_floquet(&s).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                if i == j {
                    let n = i as f64;
                    assert!((u[(i, i)] - Complex64::cis(-(0.5 * n + 0.7 * n * n))).norm() < 1e-12);
                } else {
                    assert_eq!(u[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn floquet_unitary_and_vacuum_overlap() {
        let u = build_floquet(&spec(2.0, 1.0, 256)).unwrap();
        assert!(u.adjoint().matmul(&u).distance_from_identity() < 1e-10);
        assert!((u[(0, 0)].norm() - libm::exp(-2.0)).abs() < 1e-6);
    }

    #[test]
    fn banded_operator_matches_dense() {
        let s = spec(1.5, 0.5, 96);
        let op = FloquetOperator::new(&s).unwrap();
        let u = build_floquet(&s).unwrap();
        let rho = random_state(96, 3, 1);
        let a = op.conjugate(rho.matrix());
        let b = u.conjugate(rho.matrix());
        assert!(a.max_abs_diff(&b) < 1e-12);
        assert!(op.matrix().max_abs_diff(&u) < 1e-13);
    }

    #[test]
    fn vector_propagator_matches_dense() {
        let s = spec(2.0, 0.3, 128);
        let u = build_floquet(&s).unwrap();
        let prop = FloquetPropagator::new(&s).unwrap();
        let mut st = RandomStream::new(2, 0);
        let mut psi: Vec<Complex64> = (0..128)
            .map(|_| Complex64::new(st.gaussian(), st.gaussian()))
            .collect();
        let xi = 0.37;
        let expected: Vec<Complex64> = u
            .mul_vec(&psi)
            .iter()
            .enumerate()
            .map(|(n, z)| z * Complex64::cis(-xi * n as f64))
            .collect();
        prop.apply(&mut psi, xi);
        let err = psi
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn initial_states() {
        let ground = initial_mixed_state(0.0, &spec(2.0, 1.0, 32)).unwrap();
        assert_eq!(ground.get(0, 0), Complex64::new(1.0, 0.0));
        assert!((purity(&ground) - 1.0).abs() < 1e-15);
        let wide = initial_mixed_state(25.0, &spec(2.0, 1.0, 1024)).unwrap();
        assert!((wide.trace() - 1.0).abs() < 1e-14);
        assert!((purity(&wide) - 1.0 / 51.0).abs() < 1e-9);
        let (w, _) = geometric_occupations(25.0, 1.0, 1024).unwrap();
        let direct: f64 = w.iter().map(|x| x * x).sum();
        assert!((direct - 1.0 / 51.0).abs() < 1e-9);
        assert!(matches!(
            initial_mixed_state(25.0, &spec(2.0, 1.0, 64)),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn truncation_examples() {
        let ground = FockDensityMatrix::fock(0, 64).unwrap();
        let r = truncation_check(&ground, 8).unwrap();
        assert!(r.pass && r.leakage == 0.0);
        let (w, _) = geometric_occupations(25.0, 1.0, 4096).unwrap();
        let tail64: f64 = w[64..].iter().sum();
        assert!(tail64 > TRUNCATION_THRESHOLD);
        let tail2048: f64 = w[2048..].iter().sum();
        assert!(tail2048 < TRUNCATION_THRESHOLD);
    }

    #[test]
    fn unitary_step_invariants() {
        let s = spec(2.0, 1.0, 64);
        let u = build_floquet(&s).unwrap();
        let rho = random_state(64, 4, 3);
        let same = unitary_step(&rho, &ComplexMatrix::identity(64));
        assert!(same.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let next = unitary_step(&rho, &u);
        assert!((next.trace() - 1.0).abs() < 1e-9);
        assert!((purity(&next) - purity(&rho)).abs() < 1e-9);
        let s0 = von_neumann_entropy(&rho).unwrap();
        assert!((von_neumann_entropy(&next).unwrap() - s0).abs() < 1e-7);
    }

    #[test]
    fn noisy_step_properties() {
        let u = build_floquet(&spec(1.5, 1.0, 48)).unwrap();
        let rho = random_state(48, 2, 4);
        assert!(
            noisy_step(&rho, &u, 0.0)
                .matrix()
                .max_abs_diff(unitary_step(&rho, &u).matrix())
                < 1e-15
        );
        let a = noisy_step(&rho, &u, 0.9);
        let b = unitary_step(&rho, &u);
        assert!((purity(&a) - purity(&rho)).abs() < 1e-10);
        for n in 0..48 {
            assert!((a.get(n, n) - b.get(n, n)).norm() < 1e-15);
        }
    }

    #[test]
    fn averaged_step_limits_and_purity() {
        let u = build_floquet(&spec(1.5, 1.0, 48)).unwrap();
        let rho = random_state(48, 2, 5);
        let clean = unitary_step(&rho, &u);
        assert!(
            averaged_step(&rho, &u, 0.0)
                .matrix()
                .max_abs_diff(clean.matrix())
                < 1e-15
        );
        let wide = averaged_step(&rho, &u, 1e3);
        for i in 0..48 {
            for j in 0..48 {
                let expected = if i == j {
                    clean.get(i, i)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((wide.get(i, j) - expected).norm() < 1e-15);
            }
        }
        let mut r = rho.clone();
        let mut p = purity(&r);
        for _ in 0..10 {
            r = averaged_step(&r, &u, 0.3);
            assert!((r.trace() - 1.0).abs() < 1e-9);
            let q = purity(&r);
            assert!(q <= p + 1e-10);
            p = q;
        }
    }

    #[test]
    fn averaged_step_is_noise_expectation() {
        let u = build_floquet(&spec(2.0, 1.0, 24)).unwrap();
        let rho = random_state(24, 3, 6);
        let realizations = 1000;
        for sigma in [0.1, 1.0] {
            let mut s = RandomStream::new(7, 0);
            let mut mean = ComplexMatrix::zeros(24);
            for _ in 0..realizations {
                let r = noisy_step(&rho, &u, sigma * s.gaussian());
                for (m, x) in mean.as_mut_slice().iter_mut().zip(r.matrix().as_slice()) {
                    *m += x / realizations as f64;
                }
            }
            let exact = averaged_step(&rho, &u, sigma);
            assert!(mean.max_abs_diff(exact.matrix()) < 5.0 / libm::sqrt(realizations as f64));
        }
    }

    #[test]
    fn evolution_bookkeeping() {
        let s = spec(2.0, 1.0, 96);
        let op = FloquetOperator::new(&s).unwrap();
        let rho0 = initial_mixed_state(0.0, &s).unwrap();
        let none = NoiseSpec::none();
        let same = evolve(
            &rho0,
            &op,
            0,
            &none,
            EvolutionMode::Averaged,
            TruncationPolicy::disabled(),
            |_, _| Ok(()),
        )
        .unwrap();
        assert_eq!(same, rho0);
        let noise = NoiseSpec::new(0.5, 11).unwrap();
        let run = |seed| {
            evolve(
                &rho0,
                &op,
                8,
                &noise,
                EvolutionMode::PerRealization(RandomStream::new(seed, 0)),
                TruncationPolicy::for_levels(96),
                |_, r| {
                    assert!((purity(r) - 1.0).abs() < 1e-8);
                    Ok(())
                },
            )
            .unwrap()
        };
        assert_eq!(run(1), run(1));
        assert_ne!(run(1), run(2));
        let mut means = Vec::new();
        evolve(
            &rho0,
            &op,
            6,
            &none,
            EvolutionMode::Averaged,
            TruncationPolicy::disabled(),
            |_, r| {
                means.push(r.mean_excitation());
                Ok(())
            },
        )
        .unwrap();
        // ⟨n⟩ grows by roughly g0²/ħ per kick
        let rate = (means[6] - means[0]) / 6.0;
        assert!(rate > 2.0 && rate < 6.0, "{rate}");
    }

    #[test]
    fn truncation_failure_aborts() {
        let s = spec(2.0, 1.0, 32);
        let op = FloquetOperator::new(&s).unwrap();
        let rho0 = initial_mixed_state(0.0, &s).unwrap();
        let policy = TruncationPolicy { tail: 4, every: 1 };
        let r = evolve(
            &rho0,
            &op,
            20,
            &NoiseSpec::none(),
            EvolutionMode::Averaged,
            policy,
            |_, _| Ok(()),
        );
        assert!(matches!(r, Err(Error::Truncation { .. })));
    }

    #[test]
    fn occupations_of_ground_state() {
        let w = occupation_distribution(&FockDensityMatrix::fock(0, 16).unwrap());
        assert_eq!(w[0], 1.0);
        assert!(w[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn mixture_matches_dense_evolution() {
        let s = spec(1.5, 0.5, 128);
        let (mut mix, dropped) = PureMixture::initial(0.4, &s, 1e-12).unwrap();
        assert!(dropped < 1e-11);
        let dense0 = initial_mixed_state(0.4, &s).unwrap();
        assert!(mix.to_density().matrix().max_abs_diff(dense0.matrix()) < 1e-10);
        let prop = FloquetPropagator::new(&s).unwrap();
        let op = FloquetOperator::new(&s).unwrap();
        let mut rho = dense0;
        for _ in 0..5 {
            mix.step(&prop, 0.2).unwrap();
            rho = noisy_step(&rho, &op, 0.2);
        }
        assert!(mix.to_density().matrix().max_abs_diff(rho.matrix()) < 1e-9);
        assert!((mix.purity() - purity(&rho)).abs() < 1e-9);
        let dense_m2 = mean_m2(&harmonic_weights(&rho).unwrap());
        assert!((mix.mean_m2() - dense_m2).abs() < 1e-8 * dense_m2.max(1.0));
        assert!((mix.mean_excitation() - rho.mean_excitation()).abs() < 1e-9);
    }

    #[test]
    fn pure_state_weights_match_dense() {
        let s = spec(2.0, 1.0, 64);
        let prop = FloquetPropagator::new(&s).unwrap();
        let mut psi = vec![Complex64::new(0.0, 0.0); 64];
        psi[0] = Complex64::new(1.0, 0.0);
        prop.apply(&mut psi, 0.0);
        prop.apply(&mut psi, 0.0);
        let mix = PureMixture::pure(psi.clone()).unwrap();
        let a = mix.harmonic_weights().unwrap();
        let b = harmonic_weights(&FockDensityMatrix::pure(&psi).unwrap()).unwrap();
        for m in 0..a.m_max().min(b.m_max()) {
            assert!((a.weight(m) - b.weight(m)).abs() < 1e-12);
        }
    }

    #[test]
    fn echo_overlaps_match_dense_operator() {
        let s = spec(2.0, 1.0, 96);
        let eps = 0.3;
        let (mix0, _) = PureMixture::initial(0.5, &s, 1e-13).unwrap();
        let rho0 = initial_mixed_state(0.5, &s).unwrap();
        let prop = FloquetPropagator::new(&s).unwrap();
        let (mut a, mut b) = (mix0.clone(), mix0.clone());
        for _ in 0..3 {
            a.step(&prop, 0.0).unwrap();
            b.step(&prop, eps).unwrap();
        }
        let m = a.overlaps(&b).unwrap();
        let (alleg, trans) = echo_from_overlaps(mix0.weights(), &m).unwrap();
        let f = crate::metrics::echo_operator(&s, eps, 3).unwrap();
        let dense_alleg = crate::metrics::allegiance(&rho0, &f).unwrap();
        let dense_trans = crate::metrics::transition_fidelity(&rho0, &f).unwrap();
        assert!((alleg - dense_alleg).abs() < 1e-9, "{alleg} {dense_alleg}");
        assert!((trans - dense_trans).abs() < 1e-9, "{trans} {dense_trans}");
    }

    #[test]
    fn padding_preserves_localized_evolution() {
        let small = spec(1.0, 1.0, 64);
        let large = small.with_levels(128).unwrap();
        let (mut a, _) = PureMixture::initial(0.2, &small, 1e-12).unwrap();
        let (mut b, _) = PureMixture::initial(0.2, &large, 1e-12).unwrap();
        a.step(&FloquetPropagator::new(&small).unwrap(), 0.0)
            .unwrap();
        a.pad_to(128).unwrap();
        assert_eq!(a.dim(), 128);
        let prop = FloquetPropagator::new(&large).unwrap();
        b.step(&prop, 0.0).unwrap();
        a.step(&prop, 0.0).unwrap();
        b.step(&prop, 0.0).unwrap();
        assert!((a.mean_m2() - b.mean_m2()).abs() < 1e-9);
        assert!(a.pad_to(64).is_err());
    }
}
