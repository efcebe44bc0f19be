//! Chaotic diffusion of the classical action: `⟨I⟩_t` grows by `g0²` per kick.

use kickosc_core::classical::{
    action_variance, mean_action, sample_isotropic, EnsembleEvolver, MapParams,
};
use kickosc_core::numerics::fit::linear_fit;
use kickosc_core::numerics::RandomStream;
use kickosc_core::Result;

use super::util::area_preservation;
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str = "diffusion of the classical action under chaotic kicks";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("g0", 2.0, Rule::Finite, "kick strength"),
    ParamSpec::number("omega0", 0.5, Rule::Finite, "linear frequency"),
    ParamSpec::number("scale", 0.5, Rule::Positive, "initial mean action"),
    ParamSpec::number("trajectories", 1e5, Rule::Count(2), "ensemble size"),
    ParamSpec::number("t_max", 50.0, Rule::Count(1), "kicks"),
    ParamSpec::number("sigma", 0.0, Rule::NonNegative, "angular noise per kick"),
    ParamSpec::number(
        "slope_tolerance",
        0.05,
        Rule::Positive,
        "relative tolerance on the fitted rate",
    ),
];

pub(crate) fn cross_check(_p: &Params) -> Vec<String> {
    Vec::new()
}

pub(crate) fn run(p: &Params, seed: u64, rec: &mut Recorder) -> Result<()> {
    let g0 = p.number("g0");
    let params = MapParams::new(p.number("omega0"), g0)?;
    rec.stream("initial ensemble", 0);
    let e0 = sample_isotropic(
        p.number("scale"),
        p.count("trajectories"),
        params,
        &mut RandomStream::new(seed, 0),
    )?;
    area_preservation(&e0, rec);
    let sigma = p.number("sigma");
    if sigma > 0.0 {
        rec.stream("angular noise, one substream per trajectory", 1);
    }
    let mut ev = EnsembleEvolver::new(e0, sigma, &RandomStream::new(seed, 1))?;
    let t_max = p.count("t_max");
    let mut mean = vec![mean_action(ev.ensemble())];
    let mut var = vec![action_variance(ev.ensemble())];
    for _ in 0..t_max {
        ev.step()?;
        mean.push(mean_action(ev.ensemble()));
        var.push(action_variance(ev.ensemble()));
    }
    let t: Vec<f64> = (0..=t_max).map(|t| t as f64).collect();
    let i0 = mean[0];
    rec.table(
        Table::new("mean_action")
            .int("t", "kicks", 0..=t_max as i64)
            .real("mean_action", "action", mean.iter().copied())
            .real("action_variance", "action^2", var.iter().copied())
            .real(
                "diffusion_law",
                "action",
                t.iter().map(|t| i0 + g0 * g0 * t),
            ),
    );
    let fit = linear_fit(&t, &mean);
    let slope = fit.map_or(f64::NAN, |f| f.slope);
    let rel = (slope / (g0 * g0) - 1.0).abs();
    let tol = p.number("slope_tolerance");
    rec.expect(
        "mean action grows by g0^2 per kick",
        rel <= tol,
        format!(
            "fitted rate {slope:.5}, expected {:.5}, relative deviation {rel:.4}",
            g0 * g0
        ),
    );
    Ok(())
}
