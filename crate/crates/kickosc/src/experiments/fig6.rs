//! Weak-localization correction `ΔG(κ)` on a log-spaced absorption grid, one
//! curve per spreading width.

use kickosc_core::transport::{bracket_derivatives, weak_localization, WeakLocParams};
use kickosc_core::Result;

use super::util::{log_grid, richardson, tag};
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str = "weak-localization correction versus background absorption";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::list(
        "gamma_s",
        &[25.0, 64.0],
        Rule::Positive,
        "spreading widths in units of 1/t_H",
    ),
    ParamSpec::number("m1", 2.0, Rule::Count(1), "channels in lead 1"),
    ParamSpec::number("m2", 2.0, Rule::Count(1), "channels in lead 2"),
    ParamSpec::number("kappa_min", 1e-2, Rule::Positive, "smallest absorption"),
    ParamSpec::number("kappa_max", 1e3, Rule::Positive, "largest absorption"),
    ParamSpec::number("points", 200.0, Rule::Count(2), "grid points"),
    ParamSpec::number(
        "kappa_limit",
        1e4,
        Rule::Positive,
        "absorption used for the strong-absorption check",
    ),
];

pub(crate) fn cross_check(p: &Params) -> Vec<String> {
    if p.number("kappa_min") >= p.number("kappa_max") {
        vec!["kappa_min must be below kappa_max".to_string()]
    } else {
        Vec::new()
    }
}

/// `ΔG` in the strong-absorption limit, where the bracket collapses to `1/(μ+γ_s)`.
pub fn strong_absorption_limit(m1: u32, m2: u32, gamma_s: f64) -> f64 {
    let mu = f64::from(m1 + m2);
    let s = mu + gamma_s;
    f64::from(m1 * m2) * (-2.0 / (s * s) + mu / (s * s * s))
}

pub(crate) fn run(p: &Params, _seed: u64, rec: &mut Recorder) -> Result<()> {
    let (m1, m2) = (p.count("m1") as u32, p.count("m2") as u32);
    let mu = f64::from(m1 + m2);
    let kappas = log_grid(
        p.number("kappa_min"),
        p.number("kappa_max"),
        p.count("points"),
    );
    for gs in p.list("gamma_s") {
        let dg = kappas
            .iter()
            .map(|&k| Ok(weak_localization(&WeakLocParams::new(m1, m2, gs, k)?)))
            .collect::<Result<Vec<f64>>>()?;
        let tag = tag(gs);
        rec.table(
            Table::new(format!("weakloc_gamma_s_{tag}"))
                .real("kappa", "1", kappas.iter().copied())
                .real("delta_g", "e^2/h", dg.iter().copied()),
        );

        let monotone = dg.windows(2).all(|w| w[1].abs() <= w[0].abs());
        rec.expect(
            format!("|dG| non-increasing in kappa (gamma_s={tag})"),
            monotone,
            format!(
                "|dG| from {:.6e} to {:.6e}",
                dg[0].abs(),
                dg[dg.len() - 1].abs()
            ),
        );

        let mut worst: f64 = 0.0;
        for &k in &kappas {
            let (_, h1, h2) = bracket_derivatives(mu, k, gs);
            let f = |x: f64| bracket(x, k, gs);
            worst = worst
                .max(((richardson(f, mu, false) - h1) / h1).abs())
                .max(((richardson(f, mu, true) - h2) / h2).abs());
        }
        rec.invariant(
            format!("symbolic derivatives match finite differences (gamma_s={tag})"),
            worst <= 1e-8,
            format!("max relative deviation {worst:.3e}"),
        );

        let k_inf = p.number("kappa_limit");
        let at = weak_localization(&WeakLocParams::new(m1, m2, gs, k_inf)?);
        let limit = strong_absorption_limit(m1, m2, gs);
        let rel = (at / limit - 1.0).abs();
        rec.expect(
            format!("strong-absorption collapse (gamma_s={tag})"),
            rel < 0.01,
            format!("dG({k_inf:e}) = {at:.6e}, limit {limit:.6e}, relative deviation {rel:.3e}"),
        );
    }
    Ok(())
}

/// `(1/x)[1 − c/√q]` rewritten as `(1 + κ(x+2s)/4s) / (√q(√q + c))`, free of
/// the cancellation at large `κ`.
fn bracket(x: f64, kappa: f64, s: f64) -> f64 {
    let c = (0.25 * kappa * s).sqrt();
    let q = x + kappa / (4.0 * s) * (x + s) * (x + s);
    let rq = q.sqrt();
    (1.0 + kappa * (x + 2.0 * s) / (4.0 * s)) / (rq * (rq + c))
}
