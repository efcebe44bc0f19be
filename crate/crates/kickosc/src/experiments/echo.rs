//! Loschmidt echo of a wide incoherent mixture under the static
//! perturbation `εħn̂`: allegiance and transition fidelity against `t` for
//! weak (Fermi golden rule) and strong (classical saturation) perturbations.

use kickosc_core::classical::{sample_isotropic, MapParams};
use kickosc_core::numerics::fit::linear_fit;
use kickosc_core::numerics::RandomStream;
use kickosc_core::quantum::{echo_from_overlaps, FloquetSpec};
use kickosc_core::Result;

use super::util::{correlation_time, tag, GrowingMixture};
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str =
    "echo decay of a wide mixture in the perturbative and saturated regimes";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("g0", 2.0, Rule::Finite, "kick strength"),
    ParamSpec::number("omega0", 0.5, Rule::Finite, "linear frequency"),
    ParamSpec::number("hbar", 1.0, Rule::Positive, "Planck constant"),
    ParamSpec::number("delta", 25.0, Rule::NonNegative, "initial spread Δ"),
    ParamSpec::list(
        "weak",
        &[0.05, 0.1],
        Rule::Positive,
        "weak perturbations ε/ħ, second is twice the first",
    ),
    ParamSpec::list(
        "strong",
        &[1.0, 2.0],
        Rule::Positive,
        "strong perturbations ε/ħ",
    ),
    ParamSpec::number("t_max", 12.0, Rule::Count(2), "kicks"),
    ParamSpec::number("n_max", 8192.0, Rule::Levels, "largest truncation"),
    ParamSpec::number(
        "discard",
        1e-3,
        Rule::OpenUnit,
        "initial weight dropped from the Fock mixture",
    ),
    ParamSpec::number(
        "floor_factor",
        3.0,
        Rule::Positive,
        "rates are fitted while the allegiance exceeds this multiple of Tr rho^2",
    ),
    ParamSpec::number(
        "tau_c_action",
        0.5,
        Rule::Positive,
        "mean action of the classical ensemble for tau_c",
    ),
    ParamSpec::number(
        "trajectories",
        1e5,
        Rule::Count(100),
        "classical sample size for tau_c",
    ),
    ParamSpec::number(
        "correlation_to",
        10.0,
        Rule::Count(2),
        "last kick of the correlation-time fit",
    ),
    ParamSpec::number(
        "fgr_tolerance",
        0.3,
        Rule::OpenUnit,
        "relative tolerance on the weak-perturbation rate ratio 4",
    ),
    ParamSpec::number(
        "saturation_tolerance",
        0.25,
        Rule::OpenUnit,
        "relative spread allowed between strong rates",
    ),
    ParamSpec::number(
        "classical_tolerance",
        0.5,
        Rule::OpenUnit,
        "relative tolerance against 1/tau_c",
    ),
];

pub(crate) fn cross_check(p: &Params) -> Vec<String> {
    let mut e = Vec::new();
    for key in ["weak", "strong"] {
        if p.list(key).len() != 2 {
            e.push(format!("{key} needs exactly two entries"));
        }
    }
    e
}

/// Allegiance and transition fidelity of one perturbation.
struct EchoCurve {
    sigma: f64,
    allegiance: Vec<f64>,
    fidelity: Vec<f64>,
}

/// Decay rate of `−ln 𝓕` over `t ≥ 0` while `𝓕 > floor` (at least the first
/// kick), as the slope of a straight-line fit; also returns the last kick used.
fn decay_rate(a: &[f64], floor: f64) -> (f64, usize) {
    let last = a
        .iter()
        .position(|&x| x <= floor)
        .unwrap_or(a.len())
        .saturating_sub(1)
        .max(1);
    let t: Vec<f64> = (0..=last).map(|t| t as f64).collect();
    let y: Vec<f64> = a[..=last].iter().map(|x| -x.ln()).collect();
    (linear_fit(&t, &y).map_or(f64::NAN, |f| f.slope), last)
}

pub(crate) fn run(p: &Params, seed: u64, rec: &mut Recorder) -> Result<()> {
    let hbar = p.number("hbar");
    let g0 = p.number("g0");
    let omega0 = p.number("omega0");
    let delta = p.number("delta");
    let spec = FloquetSpec::new(omega0, g0, hbar, p.count("n_max"))?;
    let t_max = p.count("t_max");
    let discard = p.number("discard");
    let sigmas: Vec<f64> = p.list("weak").into_iter().chain(p.list("strong")).collect();

    rec.stream("classical ensemble for the correlation time", 0);
    let e0 = sample_isotropic(
        p.number("tau_c_action"),
        p.count("trajectories"),
        MapParams::new(omega0, g0)?,
        &mut RandomStream::new(seed, 0),
    )?;
    let (corr, tau_c) = correlation_time(&e0, p.count("correlation_to") as u64)?;
    rec.table(
        Table::new("phase_correlation")
            .int("t", "kicks", corr.times().iter().map(|&t| t as i64))
            .real("correlation", "1", corr.values().iter().copied()),
    );
    rec.note(format!("correlation time tau_c = {tau_c:.6}"));

    let (mut base, dropped) = GrowingMixture::initial(delta, spec, discard)?;
    let weights = base.mixture().weights().to_vec();
    let purity0: f64 = weights.iter().map(|w| w * w).sum();
    let mut perturbed = Vec::new();
    for _ in &sigmas {
        perturbed.push(GrowingMixture::initial(delta, spec, discard)?.0);
    }
    let mut curves: Vec<EchoCurve> = sigmas
        .iter()
        .map(|&sigma| EchoCurve {
            sigma,
            allegiance: vec![1.0],
            fidelity: vec![1.0],
        })
        .collect();
    for _ in 0..t_max {
        base.step(0.0)?;
        for (g, &sigma) in perturbed.iter_mut().zip(&sigmas) {
            g.step(sigma * hbar)?;
        }
        for (g, c) in perturbed.iter_mut().zip(curves.iter_mut()) {
            let dim = g.dim().max(base.dim());
            g.pad_to(dim)?;
            base.pad_to(dim)?;
            let m = base.mixture().overlaps(g.mixture())?;
            let (a, f) = echo_from_overlaps(&weights, &m)?;
            c.allegiance.push(a);
            c.fidelity.push(f);
        }
    }
    let upper = curves
        .iter()
        .flat_map(|c| c.allegiance.iter().chain(&c.fidelity))
        .fold(0.0f64, |m, &x| m.max(x));
    rec.invariant(
        "echo quantities bounded by one",
        upper <= 1.0 + 1e-9,
        format!("largest value {upper:.12}"),
    );
    let drift = (base.mixture().purity() - purity0).abs();
    rec.invariant(
        "unperturbed evolution preserves purity",
        drift < 1e-9,
        format!("drift {drift:.3e}"),
    );

    let mut table = Table::new("echo").int("t", "kicks", 0..=t_max as i64);
    for c in &curves {
        table = table
            .real(
                &format!("allegiance_sigma_{}", tag(c.sigma)),
                "1",
                c.allegiance.iter().copied(),
            )
            .real(
                &format!("fidelity_sigma_{}", tag(c.sigma)),
                "1",
                c.fidelity.iter().copied(),
            );
    }
    rec.table(table);

    let floor = p.number("floor_factor") * purity0;
    let rates: Vec<(f64, usize)> = curves
        .iter()
        .map(|c| decay_rate(&c.allegiance, floor))
        .collect();
    rec.table(
        Table::new("decay_rates")
            .real("sigma", "1", curves.iter().map(|c| c.sigma))
            .real("rate", "1/kick", rates.iter().map(|r| r.0))
            .int("fit_last", "kicks", rates.iter().map(|r| r.1 as i64))
            .real(
                "inverse_tau_c",
                "1/kick",
                curves.iter().map(|_| 1.0 / tau_c),
            ),
    );

    let ratio = rates[1].0 / rates[0].0;
    let expected = (sigmas[1] / sigmas[0]).powi(2);
    rec.expect(
        "weak perturbation: rate scales as epsilon^2",
        (ratio / expected - 1.0).abs() <= p.number("fgr_tolerance"),
        format!(
            "rates {:.5} and {:.5}, ratio {ratio:.4}, expected {expected:.4}",
            rates[0].0, rates[1].0
        ),
    );
    let (r1, r2) = (rates[2].0, rates[3].0);
    let spread = (r2 - r1).abs() / r1;
    rec.expect(
        "strong perturbation: rate independent of epsilon",
        spread < p.number("saturation_tolerance"),
        format!("rates {r1:.5} and {r2:.5}, relative change {spread:.4}"),
    );
    let mean = 0.5 * (r1 + r2);
    let off = (mean * tau_c - 1.0).abs();
    rec.expect(
        "strong perturbation: rate matches 1/tau_c",
        off <= p.number("classical_tolerance"),
        format!(
            "mean rate {mean:.5}, 1/tau_c {:.5}, relative deviation {off:.4}",
            1.0 / tau_c
        ),
    );
    rec.note(format!(
        "{} mixture components, discarded weight {dropped:.3e}, Tr rho^2 {purity0:.5e}",
        weights.len()
    ));
    Ok(())
}
