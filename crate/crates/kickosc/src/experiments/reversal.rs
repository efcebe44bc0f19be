//! Classical reversibility: evolve forward, rotate every trajectory by a
//! random probe angle, evolve back, and measure how much of the initial
//! density returns.

use kickosc_core::classical::{reversal_experiment, sample_isotropic, MapParams, OverlapGrid};
use kickosc_core::numerics::RandomStream;
use kickosc_core::Result;

use super::util::{area_preservation, correlation_time, tag};
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str = "classical probe-and-reverse fidelity";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("g0", 2.0, Rule::Finite, "kick strength"),
    ParamSpec::number("omega0", 0.5, Rule::Finite, "linear frequency"),
    ParamSpec::number("scale", 0.5, Rule::Positive, "initial mean action"),
    ParamSpec::list(
        "t_r",
        &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
        Rule::Count(1),
        "reversal times",
    ),
    ParamSpec::list(
        "probe_sigmas",
        &[0.0, 0.01, 0.1, 1.0, 10.0],
        Rule::NonNegative,
        "probe rotation widths",
    ),
    ParamSpec::number("trajectories", 1e5, Rule::Count(2), "ensemble size"),
    ParamSpec::number(
        "action_bins",
        32.0,
        Rule::Count(1),
        "overlap grid action bins",
    ),
    ParamSpec::number(
        "theta_bins",
        64.0,
        Rule::Count(1),
        "overlap grid angle bins",
    ),
    ParamSpec::number(
        "correlation_to",
        10.0,
        Rule::Count(2),
        "last kick of the correlation-time fit",
    ),
    ParamSpec::number(
        "exact_horizon",
        5.0,
        Rule::Count(0),
        "longest reversal expected to be exact without a probe",
    ),
];

pub(crate) fn cross_check(_p: &Params) -> Vec<String> {
    Vec::new()
}

pub(crate) fn run(p: &Params, seed: u64, rec: &mut Recorder) -> Result<()> {
    let params = MapParams::new(p.number("omega0"), p.number("g0"))?;
    let scale = p.number("scale");
    let n = p.count("trajectories");
    let grid = OverlapGrid {
        n_action_bins: p.count("action_bins"),
        n_theta_bins: p.count("theta_bins"),
    };
    let t_r: Vec<u64> = p.list("t_r").iter().map(|&t| t as u64).collect();
    let sigmas = p.list("probe_sigmas");

    rec.stream("correlation-time ensemble", 0);
    let e0 = sample_isotropic(scale, n, params, &mut RandomStream::new(seed, 0))?;
    area_preservation(&e0, rec);
    let to = p.count("correlation_to") as u64;
    let (corr, tau_c) = correlation_time(&e0, to)?;
    rec.table(
        Table::new("phase_correlation")
            .int("t", "kicks", corr.times().iter().map(|&t| t as i64))
            .real("correlation", "1", corr.values().iter().copied()),
    );
    rec.note(format!("correlation time tau_c = {tau_c:.6}"));

    rec.stream("reversal runs: substream 0 samples, substream 1 probes", 1);
    let stream = RandomStream::new(seed, 1);
    let mut table = Table::new("fidelity").int("t_r", "kicks", t_r.iter().map(|&t| t as i64));
    let mut columns = Vec::new();
    for &s in &sigmas {
        let f = t_r
            .iter()
            .map(|&t| Ok(reversal_experiment(params, scale, t, s, n, &stream, grid)?.fidelity))
            .collect::<Result<Vec<f64>>>()?;
        table = table.real(
            &format!("fidelity_sigma_{}", tag(s)),
            "1",
            f.iter().copied(),
        );
        columns.push((s, f));
    }
    let predicted: Vec<f64> = t_r.iter().map(|&t| (-(t as f64) / tau_c).exp()).collect();
    rec.table(table.real("exp_minus_t_over_tau_c", "1", predicted.iter().copied()));

    let horizon = p.count("exact_horizon") as u64;
    if let Some((_, f)) = columns.iter().find(|(s, _)| *s == 0.0) {
        let worst = t_r
            .iter()
            .zip(f)
            .filter(|(t, _)| **t <= horizon)
            .map(|(_, f)| (f - 1.0).abs())
            .fold(0.0, f64::max);
        rec.invariant(
            format!("unprobed reversal returns the initial density up to t_r={horizon}"),
            worst < 1e-4,
            format!("max |F - 1| {worst:.3e}"),
        );
    }
    if let Some((s, f)) = columns.iter().max_by(|a, b| a.0.total_cmp(&b.0)) {
        let ratios: Vec<(u64, f64)> = t_r
            .iter()
            .zip(f.iter().zip(&predicted))
            .filter(|(t, _)| (2..=8).contains(*t))
            .map(|(&t, (f, e))| (t, f / e))
            .collect();
        let within = ratios.iter().all(|(_, r)| *r >= 0.5 && *r <= 2.0);
        rec.expect(
            format!(
                "strong probe (sigma={}) fidelity follows exp(-t_r/tau_c) within 2x",
                tag(*s)
            ),
            within && !ratios.is_empty(),
            ratios
                .iter()
                .map(|(t, r)| format!("t_r={t}: {r:.3}"))
                .collect::<Vec<_>>()
                .join(", "),
        );
    }
    Ok(())
}
