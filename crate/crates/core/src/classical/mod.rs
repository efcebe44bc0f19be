//! Classical kicked oscillator: the kick-and-twist map, sample ensembles,
//! diffusion, phase correlations, θ-harmonic spectra and reversal experiments.

mod ensemble;
mod harmonics;
mod map;
mod reversal;
mod tangent;

pub use ensemble::{
    action_variance, evolve_backward, evolve_ensemble, fit_correlation_time, mean_action,
    phase_correlation, phase_correlation_at, phase_correlation_series, sample_isotropic,
    ClassicalEnsemble, EnsembleEvolver,
};
pub use harmonics::{classical_harmonics, HarmonicGrid, PhaseHistogram};
pub use map::{
    ehrenfest_time, inverse_map_step, map_jacobian, map_step, MapParams, PhasePoint,
    DIVERGENCE_ACTION,
};
pub use reversal::{reversal_experiment, OverlapGrid, ReversalOutcome};
pub use tangent::{tangent_m2_from, tangent_m2_series};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::fidelity_from_spectrum;
    use crate::numerics::RandomStream;
    use crate::Error;
    use alloc::vec;
    use alloc::vec::Vec;
    use core::f64::consts::{PI, TAU};
    use num_complex::Complex64;

    fn random_point(s: &mut RandomStream, scale: f64) -> PhasePoint {
        PhasePoint::from_action_angle(scale * s.uniform(), TAU * s.uniform())
    }

    #[test]
    fn pure_twist() {
        let p = map_step(
            PhasePoint::from_action_angle(1.0, 0.0),
            &MapParams::new(0.5, 0.0).unwrap(),
        )
        .unwrap();
        assert!((p.action() - 1.0).abs() < 1e-15);
        assert!((p.theta_unwrapped - 2.5).abs() < 1e-15);
        assert!((p.alpha - Complex64::cis(-2.5)).norm() < 1e-15);
    }

    #[test]
    fn single_kick_from_origin() {
        let p = map_step(
            PhasePoint::from_action_angle(0.0, 0.0),
            &MapParams::new(0.0, 2.0).unwrap(),
        )
        .unwrap();
        assert!((p.action() - 4.0).abs() < 1e-14);
        // the kick itself moves α to 2i, i.e. θ = −π/2, before the twist adds 8
        assert!((p.theta_unwrapped - (8.0 - PI / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn origin_is_fixed_without_kick() {
        let params = MapParams::new(0.7, 0.0).unwrap();
        let p = PhasePoint::from_action_angle(0.0, 0.0);
        assert_eq!(
            inverse_map_step(p, &params).unwrap().alpha,
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn inverse_composes_to_identity() {
        let mut s = RandomStream::new(1, 0);
        let params = MapParams::new(0.5, 2.0).unwrap();
        for _ in 0..1000 {
            let p = random_point(&mut s, 20.0);
            let back = inverse_map_step(map_step(p, &params).unwrap(), &params).unwrap();
            assert!((back.alpha - p.alpha).norm() < 1e-12 * (1.0 + p.action()));
            assert!((back.theta_unwrapped - p.theta_unwrapped).abs() < 1e-9);
        }
    }

    #[test]
    fn unwrapped_angle_tracks_alpha() {
        let mut s = RandomStream::new(2, 0);
        let params = MapParams::new(0.5, 1.5).unwrap();
        let mut p = random_point(&mut s, 2.0);
        for _ in 0..200 {
            p = map_step(p, &params).unwrap();
            let from_alpha = (-p.alpha.arg()).rem_euclid(TAU);
            let d = (p.angle() - from_alpha).abs();
            assert!(d.min(TAU - d) < 1e-9 * (1.0 + p.theta_unwrapped.abs()));
        }
    }

    #[test]
    fn jacobian_is_area_preserving_and_matches_differences() {
        let mut s = RandomStream::new(3, 0);
        let params = MapParams::new(0.5, 2.0).unwrap();
        for _ in 0..200 {
            let p = random_point(&mut s, 3.0);
            let j = map_jacobian(p, &params);
            assert!((j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0).abs() < 1e-6);
            let h = 1e-6;
            for (col, dir) in [Complex64::new(h, 0.0), Complex64::new(0.0, h)]
                .into_iter()
                .enumerate()
            {
                let shift = |d: Complex64| {
                    let q = PhasePoint {
                        alpha: p.alpha + d,
                        ..p
                    };
                    map_step(q, &params).unwrap().alpha
                };
                let fd = (shift(dir) - shift(-dir)) / (2.0 * h);
                let scale = 1.0 + j[0][col].abs() + j[1][col].abs();
                assert!((fd.re - j[0][col]).abs() < 1e-5 * scale);
                assert!((fd.im - j[1][col]).abs() < 1e-5 * scale);
            }
        }
    }

    #[test]
    fn divergence_is_flagged() {
        let params = MapParams::new(0.0, 1e7).unwrap();
        let p = PhasePoint::from_action_angle(0.0, 0.0);
        assert!(matches!(
            map_step(p, &params),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn isotropic_sampling_moments() {
        let n = 100_000;
        let e = sample_isotropic(
            0.5,
            n,
            MapParams::new(0.5, 2.0).unwrap(),
            &mut RandomStream::new(4, 0),
        )
        .unwrap();
        assert!((mean_action(&e) - 0.5).abs() < 3.0 * 0.5 / libm::sqrt(n as f64));
        let z: Complex64 = e
            .points
            .iter()
            .map(|p| Complex64::cis(p.angle()))
            .sum::<Complex64>()
            / n as f64;
        assert!(z.norm() < 3.0 / libm::sqrt(n as f64));
        assert!(sample_isotropic(0.0, 3, e.params, &mut RandomStream::new(0, 0)).is_err());
    }

    #[test]
    fn zero_steps_and_seeds() {
        let params = MapParams::new(0.5, 2.0).unwrap();
        let e = sample_isotropic(0.5, 500, params, &mut RandomStream::new(5, 0)).unwrap();
        assert_eq!(
            evolve_ensemble(&e, 0, 0.3, &RandomStream::new(1, 1)).unwrap(),
            e
        );
        let a = evolve_ensemble(&e, 10, 0.3, &RandomStream::new(1, 1)).unwrap();
        let b = evolve_ensemble(&e, 10, 0.3, &RandomStream::new(1, 1)).unwrap();
        let c = evolve_ensemble(&e, 10, 0.3, &RandomStream::new(2, 1)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn twist_conserves_action() {
        let params = MapParams::new(0.9, 0.0).unwrap();
        let e = sample_isotropic(2.0, 1000, params, &mut RandomStream::new(6, 0)).unwrap();
        let later = evolve_ensemble(&e, 30, 0.0, &RandomStream::new(0, 0)).unwrap();
        for (a, b) in e.points.iter().zip(&later.points) {
            assert!((a.action() - b.action()).abs() < 1e-12 * (1.0 + a.action()));
        }
    }

    #[test]
    fn chaotic_diffusion_rate() {
        let params = MapParams::new(0.5, 2.0).unwrap();
        let n = 20_000;
        let e = sample_isotropic(0.5, n, params, &mut RandomStream::new(7, 0)).unwrap();
        let later = evolve_ensemble(&e, 20, 0.0, &RandomStream::new(0, 0)).unwrap();
        let growth = mean_action(&later) - mean_action(&e);
        let se = libm::sqrt(action_variance(&later) / n as f64);
        assert!((growth - 4.0 * 20.0).abs() < 5.0 * se, "{growth} ± {se}");
    }

    #[test]
    fn single_point_mean_action() {
        let e = ClassicalEnsemble::new(
            vec![PhasePoint::from_action_angle(2.0, 1.0)],
            MapParams::new(0.0, 0.0).unwrap(),
        )
        .unwrap();
        assert!((mean_action(&e) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn frozen_phases_do_not_decorrelate() {
        // 2I a multiple of 2π: every twist is a whole number of turns.
        let params = MapParams::new(0.0, 0.0).unwrap();
        let points: Vec<PhasePoint> = (1..=50)
            .map(|k| PhasePoint::from_action_angle(PI * k as f64, 0.1 * k as f64))
            .collect();
        let e = ClassicalEnsemble::new(points, params).unwrap();
        let series = phase_correlation_series(&e, 20, 1.0).unwrap();
        for &c in series.values() {
            assert!((c - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn chaotic_correlation_decays() {
        let params = MapParams::new(0.5, 2.0).unwrap();
        let e = sample_isotropic(0.5, 20_000, params, &mut RandomStream::new(8, 0)).unwrap();
        assert_eq!(phase_correlation(&e, 0).unwrap(), 1.0);
        let series = phase_correlation_series(&e, 10, 1.0).unwrap();
        let tau = fit_correlation_time(&series, 1, 6, 1e-3).unwrap();
        assert!(tau > 0.05 && tau < 5.0, "{tau}");
        assert!(series.values()[3] < series.values()[1]);
    }

    #[test]
    fn isotropic_harmonics_concentrate_on_zero() {
        let n = 200_000;
        let e = sample_isotropic(
            0.5,
            n,
            MapParams::new(0.5, 2.0).unwrap(),
            &mut RandomStream::new(9, 0),
        )
        .unwrap();
        let spec = classical_harmonics(
            &e,
            HarmonicGrid {
                n_action_bins: 16,
                n_theta_bins: 256,
                m_max: 32,
            },
        )
        .unwrap();
        assert!((spec.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(spec.weights().iter().all(|w| *w >= 0.0));
        for m in 1..=32 {
            assert!(
                spec.weight(m) < 5.0 / libm::sqrt(n as f64),
                "m={m}: {}",
                spec.weight(m)
            );
        }
        assert!((fidelity_from_spectrum(&spec, 0.0) - 1.0).abs() < 1e-12);
        let bad = HarmonicGrid {
            n_action_bins: 16,
            n_theta_bins: 100,
            m_max: 32,
        };
        assert!(classical_harmonics(&e, bad).is_err());
    }

    #[test]
    fn exact_reversal_without_probe() {
        let params = MapParams::new(0.5, 2.0).unwrap();
        let out = reversal_experiment(
            params,
            0.5,
            5,
            0.0,
            20_000,
            &RandomStream::new(10, 0),
            OverlapGrid::default(),
        )
        .unwrap();
        // a handful of returned points land across a bin edge after roundoff
        assert!((out.fidelity - 1.0).abs() < 1e-4, "{}", out.fidelity);
        let probed = reversal_experiment(
            params,
            0.5,
            5,
            2.0,
            20_000,
            &RandomStream::new(10, 0),
            OverlapGrid::default(),
        )
        .unwrap();
        assert!(probed.fidelity < 0.9);
    }

    #[test]
    fn noise_free_round_trip_horizon() {
        // Roundoff grows about fifteenfold per kick at g0 = 2, so a
        // double-precision round trip stays within 1e-6 for about five kicks.
        let params = MapParams::new(0.5, 2.0).unwrap();
        let e = sample_isotropic(0.5, 2000, params, &mut RandomStream::new(11, 0)).unwrap();
        let fwd = evolve_ensemble(&e, 5, 0.0, &RandomStream::new(0, 0)).unwrap();
        let back = evolve_backward(&fwd, 5).unwrap();
        for (a, b) in e.points.iter().zip(&back.points) {
            assert!((a.alpha - b.alpha).norm() < 1e-6);
        }
        let fwd = evolve_ensemble(&e, 7, 0.0, &RandomStream::new(0, 0)).unwrap();
        let back = evolve_backward(&fwd, 7).unwrap();
        assert!((mean_action(&back) - mean_action(&e)).abs() < 1e-6);
    }

    #[test]
    fn ehrenfest_examples() {
        assert_eq!(ehrenfest_time(1.0, 0.5, 1.0).unwrap(), 0.0);
        assert!(
            (ehrenfest_time(1.0, core::f64::consts::E / 2.0, 1.0).unwrap() - 1.0).abs() < 1e-15
        );
        assert!(ehrenfest_time(1.0, 10.0, 0.01).unwrap() > ehrenfest_time(1.0, 10.0, 1.0).unwrap());
        assert!(ehrenfest_time(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn tangent_estimator_starts_small_and_grows() {
        let params = MapParams::new(0.5, 1.5).unwrap();
        let s = tangent_m2_series(params, 0.5, 20_000, 6, &mut RandomStream::new(12, 0)).unwrap();
        let v = s.values();
        assert!(v[1] > 0.0);
        assert!(v[6] > 10.0 * v[1]);
    }
}
