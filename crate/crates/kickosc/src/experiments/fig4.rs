//! Excitation and harmonic distributions at a fixed time for single noise
//! histories and their averages, plus the realization-averaged `⟨n⟩` and
//! `⟨m²⟩` of the per-history pure states.

use kickosc_core::metrics::{mean_m2, HarmonicSpectrum};
use kickosc_core::numerics::RandomStream;
use kickosc_core::quantum::{pure_harmonic_weights, FloquetSpec, PureMixture};
use kickosc_core::{Complex64, Result};
use rayon::prelude::*;

use super::util::{growth_fit, tag, GrowingMixture};
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str = "excitation and harmonic distributions under dephasing noise";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("g0", 2.0, Rule::Finite, "kick strength"),
    ParamSpec::number("omega0", 0.5, Rule::Finite, "linear frequency"),
    ParamSpec::number("hbar", 1.0, Rule::Positive, "Planck constant"),
    ParamSpec::number("t", 80.0, Rule::Count(1), "kicks"),
    ParamSpec::number("sigma", 1.0, Rule::NonNegative, "strong noise level"),
    ParamSpec::number("weak_sigma", 1e-3, Rule::NonNegative, "weak noise level"),
    ParamSpec::number(
        "realizations",
        1000.0,
        Rule::Count(1),
        "noise histories per level",
    ),
    ParamSpec::number("n_max", 16384.0, Rule::Levels, "largest truncation"),
    ParamSpec::number(
        "fit_floor",
        1e-4,
        Rule::OpenUnit,
        "w_n/w_0 below which the exponential fit stops",
    ),
    ParamSpec::number(
        "fit_r2",
        0.95,
        Rule::OpenUnit,
        "minimum R^2 of the averaged exponential fit",
    ),
    ParamSpec::number(
        "self_averaging_from",
        20.0,
        Rule::Count(0),
        "first kick of the self-averaging check",
    ),
    ParamSpec::number(
        "self_averaging_tolerance",
        0.1,
        Rule::OpenUnit,
        "relative tolerance of <m^2> = <n>(<n>+1)",
    ),
];

pub(crate) fn cross_check(p: &Params) -> Vec<String> {
    if p.number("self_averaging_from") > p.number("t") {
        vec!["self_averaging_from must not exceed t".to_string()]
    } else {
        Vec::new()
    }
}

/// Final distributions and per-kick moments of one noise history.
struct History {
    occupation: Vec<f64>,
    harmonics: HarmonicSpectrum,
    norm: f64,
    mean_n: Vec<f64>,
    mean_m2: Vec<f64>,
}

fn history(spec: FloquetSpec, t: usize, sigma: f64, mut stream: RandomStream) -> Result<History> {
    let mut psi = vec![Default::default(); FloquetSpec::MIN_LEVELS];
    psi[0] = Complex64::new(1.0, 0.0);
    let mut g = GrowingMixture::from_mixture(spec, PureMixture::pure(psi)?)?;
    let (mut mean_n, mut m2) = (vec![0.0], vec![0.0]);
    for _ in 0..t {
        let xi = if sigma > 0.0 {
            sigma * stream.gaussian()
        } else {
            0.0
        };
        g.step(xi)?;
        mean_n.push(g.mixture().mean_excitation());
        m2.push(g.mixture().mean_m2());
    }
    let occupation = g.mixture().occupation();
    Ok(History {
        norm: occupation.iter().sum(),
        harmonics: pure_harmonic_weights(&occupation)?,
        occupation,
        mean_n,
        mean_m2: m2,
    })
}

/// Index-ordered mean of equal-role vectors of differing lengths.
fn average(rows: &[&[f64]]) -> Vec<f64> {
    let len = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut out = vec![0.0; len];
    for r in rows {
        for (o, x) in out.iter_mut().zip(r.iter()) {
            *o += x;
        }
    }
    out.iter_mut().for_each(|o| *o /= rows.len() as f64);
    out
}

fn padded(v: &[f64], len: usize) -> impl Iterator<Item = f64> + '_ {
    v.iter().copied().chain(std::iter::repeat(0.0)).take(len)
}

/// RMS of `ln w_n` about its straight-line fit over the populated range.
fn exponential_fit(w: &[f64], floor: f64) -> (Option<kickosc_core::numerics::fit::LinearFit>, f64) {
    let cut = w.first().copied().unwrap_or(0.0) * floor;
    let last = w.iter().position(|&x| x < cut).unwrap_or(w.len());
    let n: Vec<f64> = (0..w.len()).map(|n| n as f64).collect();
    let fit = growth_fit(&n, w, 0.0, last.saturating_sub(1) as f64);
    let rms = fit.map_or(f64::NAN, |f| {
        let r: Vec<f64> = (0..last)
            .filter(|&i| w[i] > 0.0)
            .map(|i| w[i].ln() - f.predict(i as f64))
            .collect();
        (r.iter().map(|x| x * x).sum::<f64>() / r.len() as f64).sqrt()
    });
    (fit, rms)
}

pub(crate) fn run(p: &Params, seed: u64, rec: &mut Recorder) -> Result<()> {
    let spec = FloquetSpec::new(
        p.number("omega0"),
        p.number("g0"),
        p.number("hbar"),
        p.count("n_max"),
    )?;
    let t = p.count("t");
    let r = p.count("realizations");
    let (weak, strong) = (p.number("weak_sigma"), p.number("sigma"));

    rec.stream("weak noise histories, substream per realization", 1);
    rec.stream("strong noise histories, substream per realization", 2);
    let clean = history(spec, t, 0.0, RandomStream::new(seed, 0))?;
    let mut runs = Vec::new();
    for (index, sigma) in [(1, weak), (2, strong)] {
        let base = RandomStream::new(seed, index);
        let h = (0..r as u64)
            .into_par_iter()
            .map(|k| history(spec, t, sigma, base.substream(k)))
            .collect::<Result<Vec<History>>>()?;
        runs.push((sigma, h));
    }

    let all = std::iter::once(&clean).chain(runs.iter().flat_map(|(_, h)| h));
    let worst = all.map(|h| (h.norm - 1.0).abs()).fold(0.0, f64::max);
    rec.invariant(
        "per-history norm and purity conserved",
        worst < 1e-8,
        format!("max |norm - 1| {worst:.3e} over {} histories", 2 * r + 1),
    );

    let mut occ: Vec<(String, Vec<f64>)> = vec![("w_sigma_0".into(), clean.occupation.clone())];
    let mut harm: Vec<(String, Vec<f64>)> =
        vec![("w_sigma_0".into(), clean.harmonics.weights().to_vec())];
    for (sigma, h) in &runs {
        let s = tag(*sigma);
        occ.push((format!("w_sigma_{s}_single"), h[0].occupation.clone()));
        occ.push((
            format!("w_sigma_{s}_averaged"),
            average(
                &h.iter()
                    .map(|x| x.occupation.as_slice())
                    .collect::<Vec<_>>(),
            ),
        ));
        harm.push((
            format!("w_sigma_{s}_single"),
            h[0].harmonics.weights().to_vec(),
        ));
        harm.push((
            format!("w_sigma_{s}_averaged"),
            average(&h.iter().map(|x| x.harmonics.weights()).collect::<Vec<_>>()),
        ));
    }

    let floor = p.number("fit_floor");
    let strong_avg = &occ[occ.len() - 1].1;
    let (fit, rms_avg) = exponential_fit(strong_avg, floor);
    let (_, rms_clean) = exponential_fit(&clean.occupation, floor);
    let len = occ.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut table = Table::new("occupations").int("n", "1", 0..len as i64);
    for (name, v) in &occ {
        table = table.real(name, "1", padded(v, len));
    }
    let fitted: Vec<f64> = (0..len)
        .map(|n| fit.map_or(f64::NAN, |f| f.predict(n as f64).exp()))
        .collect();
    rec.table(table.real(
        &format!("exponential_fit_sigma_{}", tag(strong)),
        "1",
        fitted,
    ));

    let len = harm.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut table = Table::new("harmonics").int("m", "1", 0..len as i64);
    for (name, v) in &harm {
        table = table.real(name, "1", padded(v, len));
    }
    rec.table(table);

    let r2 = fit.map_or(f64::NAN, |f| f.r_squared);
    rec.expect(
        format!(
            "averaged distribution at sigma={} is exponential",
            tag(strong)
        ),
        r2 >= p.number("fit_r2"),
        format!(
            "R^2 {r2:.5}, mean from slope {:.2}",
            fit.map_or(f64::NAN, |f| -1.0 / f.slope)
        ),
    );
    rec.expect(
        "averaging removes the fluctuations of the noise-free distribution",
        rms_avg < rms_clean,
        format!("rms log residual: noise-free {rms_clean:.3}, averaged {rms_avg:.3}"),
    );

    let h = &runs[1].1;
    let mean_n = average(&h.iter().map(|x| x.mean_n.as_slice()).collect::<Vec<_>>());
    let mean_m2v = average(&h.iter().map(|x| x.mean_m2.as_slice()).collect::<Vec<_>>());
    let spread: Vec<f64> = (0..=t)
        .map(|k| {
            let m = mean_m2v[k];
            let var = h.iter().map(|x| (x.mean_m2[k] - m).powi(2)).sum::<f64>() / r as f64;
            if m > 0.0 {
                var.sqrt() / m
            } else {
                0.0
            }
        })
        .collect();
    let target: Vec<f64> = mean_n.iter().map(|n| n * (n + 1.0)).collect();
    let ratio: Vec<f64> = mean_m2v.iter().zip(&target).map(|(a, b)| a / b).collect();
    rec.table(
        Table::new(format!("self_averaging_sigma_{}", tag(strong)))
            .int("t", "kicks", 0..=t as i64)
            .real("mean_n", "levels", mean_n.iter().copied())
            .real("mean_m2", "1", mean_m2v.iter().copied())
            .real("n_times_n_plus_1", "1", target.iter().copied())
            .real("ratio", "1", ratio.iter().copied())
            .real("m2_relative_spread", "1", spread),
    );
    let from = p.count("self_averaging_from");
    let tol = p.number("self_averaging_tolerance");
    let worst = ratio[from..]
        .iter()
        .map(|x| (x - 1.0).abs())
        .fold(0.0, f64::max);
    let (lo, hi) = ratio[from..]
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    rec.expect(
        format!("<m^2> = <n>(<n>+1) for t >= {from}"),
        worst <= tol,
        format!("ratio in [{lo:.4}, {hi:.4}]"),
    );
    let m2_final = mean_m2(&clean.harmonics);
    rec.note(format!(
        "noise-free state at t={t}: <n> {:.2}, <m^2> {m2_final:.2}",
        clean.mean_n[t]
    ));
    Ok(())
}
